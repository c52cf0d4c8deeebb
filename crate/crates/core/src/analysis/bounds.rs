use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::rational::{format_probability, ratio_to_f64};
use super::weights::WeightDistribution;

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `C(n, 0) … C(n, n)`.
pub(crate) fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut acc = BigUint::one();
    row.push(acc.clone());
    for i in 0..n {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
        row.push(acc.clone());
    }
    row
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn check_u(wd: &WeightDistribution, u: usize) -> Result<()> {
    if u > wd.n {
        return Err(Error::Domain(format!("u = {u} exceeds n = {}", wd.n)));
    }
    Ok(())
}

/// `Σ_{w=1}^{u} A_w · C(n−w, u−w)`: the number of (codeword, u-subset)
/// pairs with the codeword's support inside the subset.
pub fn deficiency_sum(wd: &WeightDistribution, u: usize) -> BigUint {
    let n = wd.n;
    let u = u.min(n);
    let mut total = BigUint::zero();
    if u == 0 {
        return total;
    }
    // C(n−w, u−w) walked downward from w = 1
    let mut c = binomial(n - 1, u - 1);
    for w in 1..=u {
        if !wd.counts[w].is_zero() {
            total += &wd.counts[w] * &c;
        }
        if w < u {
            c = c * BigUint::from(u - w) / BigUint::from(n - w);
        }
    }
    total
}

/// `min(1, Σ_{w=1}^{u} A_w·C(n−w, u−w) / C(n, u))`.
pub fn rank_deficiency_bound(wd: &WeightDistribution, u: usize) -> Result<BigRational> {
    check_u(wd, u)?;
    let value = ratio(deficiency_sum(wd, u), binomial(wd.n, u));
    Ok(value.min(BigRational::one()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    ExactZero,
    Estimate,
    UpperBound,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::ExactZero => "exact-zero",
            BoundKind::Estimate => "estimate",
            BoundKind::UpperBound => "upper-bound",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub u: usize,
    pub kind: BoundKind,
    pub value: BigRational,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "u,kind,value,value_float";

    pub fn value_f64(&self) -> f64 {
        ratio_to_f64(&self.value)
    }

    /// `4,estimate,1/10,0.1`
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.u,
            self.kind,
            self.value,
            format_probability(self.value_f64())
        )
    }
}

/// Masking-failure upper bound; zero below the minimum distance.
pub fn masking_failure_upper_bound(wd: &WeightDistribution, u: usize) -> Result<BoundReport> {
    Ok(BoundReport {
        u,
        kind: BoundKind::UpperBound,
        value: rank_deficiency_bound(wd, u)?,
    })
}

/// Half the unclamped deficiency ratio; only defined for
/// `d0 <= u <= d0 + ⌊(d0−1)/2⌋`, where every rank deficiency is 1.
pub fn masking_failure_estimate(
    wd: &WeightDistribution,
    u: usize,
    d0: usize,
) -> Result<BoundReport> {
    check_u(wd, u)?;
    let hi = d0 + d0.saturating_sub(1) / 2;
    if u < d0 || u > hi {
        return Err(Error::Domain(format!(
            "estimate needs {d0} <= u <= {hi}, got u = {u}"
        )));
    }
    Ok(BoundReport {
        u,
        kind: BoundKind::Estimate,
        value: ratio(deficiency_sum(wd, u), binomial(wd.n, u) << 1),
    })
}

/// Zero below `d0`, the estimate up to `d0 + t0`, the upper bound beyond.
pub fn masking_failure_piecewise(
    wd: &WeightDistribution,
    u: usize,
    d0: usize,
) -> Result<BoundReport> {
    check_u(wd, u)?;
    if u < d0 {
        return Ok(BoundReport {
            u,
            kind: BoundKind::ExactZero,
            value: BigRational::zero(),
        });
    }
    if u <= d0 + d0.saturating_sub(1) / 2 {
        return masking_failure_estimate(wd, u, d0);
    }
    masking_failure_upper_bound(wd, u)
}

fn check_epsilon(epsilon: &BigRational) -> Result<()> {
    if epsilon.is_negative() || *epsilon > BigRational::one() {
        return Err(Error::Domain(format!(
            "epsilon = {epsilon} is outside [0, 1]"
        )));
    }
    Ok(())
}

/// Numerator/denominator split of `ε^u (1−ε)^(n−u)` over the common
/// denominator `b^n`, returned as `(a^u (b−a)^(n−u) for all u, b^n)`.
fn mixture_weights(n: usize, epsilon: &BigRational) -> (Vec<BigUint>, BigUint) {
    let a = epsilon.numer().to_biguint().expect("nonnegative");
    let b = epsilon.denom().to_biguint().expect("positive");
    let c = &b - &a;
    let mut a_pow = Vec::with_capacity(n + 1);
    let mut c_pow = Vec::with_capacity(n + 1);
    a_pow.push(BigUint::one());
    c_pow.push(BigUint::one());
    for i in 0..n {
        a_pow.push(&a_pow[i] * &a);
        c_pow.push(&c_pow[i] * &c);
    }
    let weights = (0..=n).map(|u| &a_pow[u] * &c_pow[n - u]).collect();
    (weights, b.pow(n as u32))
}

/// `Σ_{u=d0}^{n} ε^u (1−ε)^(n−u) · min(Σ_w A_w C(n−w, u−w), C(n, u))`,
/// exactly. Per-u terms are computed in parallel and summed as integers.
pub fn binomial_mixture_bound(
    wd: &WeightDistribution,
    epsilon: &BigRational,
    d0: usize,
) -> Result<BigRational> {
    check_epsilon(epsilon)?;
    let n = wd.n;
    if d0 > n {
        return Ok(BigRational::zero());
    }
    let (weights, den) = mixture_weights(n, epsilon);
    let row = binomial_row(n);
    let num: BigUint = (d0..=n)
        .into_par_iter()
        .map(|u| {
            if weights[u].is_zero() {
                return BigUint::zero();
            }
            let count = deficiency_sum(wd, u).min(row[u].clone());
            count * &weights[u]
        })
        .sum();
    Ok(ratio(num, den))
}

/// `Σ_u C(n,u) ε^u (1−ε)^(n−u) · f(u)`.
pub fn binomial_mixture<F>(n: usize, epsilon: &BigRational, f: F) -> Result<BigRational>
where
    F: Fn(usize) -> BigRational + Sync,
{
    check_epsilon(epsilon)?;
    let (weights, den) = mixture_weights(n, epsilon);
    let row = binomial_row(n);
    let total: BigRational = (0..=n)
        .into_par_iter()
        .filter(|&u| !weights[u].is_zero())
        .map(|u| f(u) * BigRational::from_integer(BigInt::from(&row[u] * &weights[u])))
        .reduce(BigRational::zero, |a, b| a + b);
    Ok(total / BigRational::from_integer(BigInt::from(den)))
}

/// `Pr(Binomial(u, 1/2) > ⌊(d−1)/2⌋)`: a bounded-distance decoder that
/// knows nothing about the `u` defects, each wrong with probability 1/2.
pub fn normal_decoding_failure(u: usize, d: usize) -> BigRational {
    let t = d.saturating_sub(1) / 2;
    let row = binomial_row(u);
    let bad: BigUint = row.iter().skip(t + 1).sum();
    ratio(bad, BigUint::one() << u)
}

/// Erasure decoding of `u` known locations fails exactly when `u >= d`.
pub fn erasure_decoding_failure(u: usize, d: usize) -> BigRational {
    if u < d {
        BigRational::zero()
    } else {
        BigRational::one()
    }
}

/// Where a baseline curve is evaluated: a fixed defect count, or a
/// defect probability with the count binomially distributed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvePoint {
    Defects(usize),
    Epsilon(BigRational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonPoint {
    pub normal: BigRational,
    pub erasure: BigRational,
}

/// Normal and erasure decoding failure for a code of length `n` and minimum
/// distance `d` at `point`, without random errors.
pub fn comparison_curves(n: usize, d: usize, point: &CurvePoint) -> Result<ComparisonPoint> {
    if d == 0 {
        return Err(Error::Domain("minimum distance must be at least 1".into()));
    }
    match point {
        CurvePoint::Defects(u) => {
            if *u > n {
                return Err(Error::Domain(format!("u = {u} exceeds n = {n}")));
            }
            Ok(ComparisonPoint {
                normal: normal_decoding_failure(*u, d),
                erasure: erasure_decoding_failure(*u, d),
            })
        }
        CurvePoint::Epsilon(eps) => Ok(ComparisonPoint {
            normal: binomial_mixture(n, eps, |u| normal_decoding_failure(u, d))?,
            erasure: binomial_mixture(n, eps, |u| erasure_decoding_failure(u, d))?,
        }),
    }
}

/// Distribution of `u − rank(G0^Ψ)` over defect sets of size `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankDistribution {
    pub u: usize,
    pub probabilities: BTreeMap<usize, BigRational>,
    /// Every `u`-subset was enumerated.
    pub exact: bool,
    /// Subsets behind the distribution.
    pub samples: u64,
}

impl RankDistribution {
    pub fn from_counts(u: usize, counts: &BTreeMap<usize, u64>, exact: bool) -> Self {
        let samples: u64 = counts.values().sum();
        let probabilities = counts
            .iter()
            .map(|(&j, &c)| {
                (
                    j,
                    BigRational::new(BigInt::from(c), BigInt::from(samples.max(1))),
                )
            })
            .collect();
        RankDistribution {
            u,
            probabilities,
            exact,
            samples,
        }
    }
}

/// `Σ_{j>=1} (2^j − 1)/2^j · Pr(deficiency j)`.
pub fn lemma2_failure_from_rank(rd: &RankDistribution) -> Result<BigRational> {
    let total: BigRational = rd.probabilities.values().cloned().sum();
    if (ratio_to_f64(&total) - 1.0).abs() > 1e-9 {
        return Err(Error::InvariantViolation(format!(
            "rank distribution sums to {total}, not 1"
        )));
    }
    Ok(rd
        .probabilities
        .iter()
        .filter(|(&j, _)| j > 0)
        .map(|(&j, p)| {
            let two_j = BigInt::one() << j;
            p * BigRational::new(&two_j - 1, two_j)
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BitMatrix;
    use crate::analysis::{parse_probability, weight_distribution_exhaustive};

    fn simplex_wd() -> WeightDistribution {
        let g = BitMatrix::parse_rows(&["1011100", "0101110", "0010111"]).unwrap();
        weight_distribution_exhaustive(&g).unwrap()
    }

    fn q(s: &str) -> BigRational {
        parse_probability(s).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 4), BigUint::from(35u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        let row = binomial_row(30);
        for (k, c) in row.iter().enumerate() {
            assert_eq!(c, &binomial(30, k));
        }
    }

    #[test]
    fn deficiency_sum_matches_direct_sum() {
        let wd = simplex_wd();
        for u in 0..=7 {
            let direct: BigUint = (1..=u)
                .map(|w| &wd.counts[w] * binomial(7 - w, u - w))
                .sum();
            assert_eq!(deficiency_sum(&wd, u), direct);
        }
    }

    #[test]
    fn upper_bound_examples() {
        let wd = simplex_wd();
        assert_eq!(rank_deficiency_bound(&wd, 3).unwrap(), q("0"));
        assert_eq!(rank_deficiency_bound(&wd, 4).unwrap(), q("1/5"));
        assert_eq!(rank_deficiency_bound(&wd, 5).unwrap(), q("1"));
        assert_eq!(rank_deficiency_bound(&wd, 7).unwrap(), q("1"));
        assert!(rank_deficiency_bound(&wd, 8).is_err());
        let r = masking_failure_upper_bound(&wd, 4).unwrap();
        assert_eq!(r.kind, BoundKind::UpperBound);
    }

    #[test]
    fn estimate_examples() {
        let wd = simplex_wd();
        assert_eq!(
            masking_failure_estimate(&wd, 4, 4).unwrap().value,
            q("1/10")
        );
        assert_eq!(masking_failure_estimate(&wd, 5, 4).unwrap().value, q("1/2"));
        let err = masking_failure_estimate(&wd, 6, 4).unwrap_err();
        assert!(err.to_string().contains("4 <= u <= 5"), "{err}");
        assert!(masking_failure_estimate(&wd, 3, 4).is_err());
    }

    #[test]
    fn piecewise_examples() {
        let wd = simplex_wd();
        let r = masking_failure_piecewise(&wd, 3, 4).unwrap();
        assert_eq!((r.kind, r.value.clone()), (BoundKind::ExactZero, q("0")));
        assert_eq!(r.csv_row(), "3,exact-zero,0,0");
        let r = masking_failure_piecewise(&wd, 4, 4).unwrap();
        assert_eq!(r.csv_row(), "4,estimate,1/10,0.1");
        let r = masking_failure_piecewise(&wd, 6, 4).unwrap();
        assert_eq!((r.kind, r.value), (BoundKind::UpperBound, q("1")));
    }

    #[test]
    fn rank_failure_examples() {
        let rd = |pairs: &[(usize, &str)]| RankDistribution {
            u: 5,
            probabilities: pairs.iter().map(|&(j, p)| (j, q(p))).collect(),
            exact: true,
            samples: 0,
        };
        assert_eq!(lemma2_failure_from_rank(&rd(&[(0, "1")])).unwrap(), q("0"));
        assert_eq!(
            lemma2_failure_from_rank(&rd(&[(1, "1")])).unwrap(),
            q("1/2")
        );
        assert_eq!(
            lemma2_failure_from_rank(&rd(&[(1, "0.5"), (2, "0.5")])).unwrap(),
            q("5/8")
        );
        assert!(matches!(
            lemma2_failure_from_rank(&rd(&[(1, "0.5")])),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn mixture_matches_direct_double_sum() {
        let wd = simplex_wd();
        let eps = q("0.3");
        let per_u = ["0", "0", "0", "0", "1/5", "1", "1", "1"];
        let mut direct = BigRational::zero();
        for (u, v) in per_u.iter().enumerate() {
            let mut p = BigRational::from_integer(BigInt::from(binomial(7, u)));
            for _ in 0..u {
                p *= &eps;
            }
            for _ in u..7 {
                p *= BigRational::one() - &eps;
            }
            direct += p * q(v);
        }
        assert_eq!(binomial_mixture_bound(&wd, &eps, 4).unwrap(), direct);
        assert_eq!(binomial_mixture_bound(&wd, &q("0"), 4).unwrap(), q("0"));
        assert_eq!(binomial_mixture_bound(&wd, &q("1"), 4).unwrap(), q("1"));
        assert!(binomial_mixture_bound(&wd, &q("1"), 8).unwrap().is_zero());
    }

    #[test]
    fn comparison_examples() {
        let p = comparison_curves(7, 3, &CurvePoint::Defects(0)).unwrap();
        assert!(p.normal.is_zero() && p.erasure.is_zero());
        let p = comparison_curves(7, 3, &CurvePoint::Defects(3)).unwrap();
        assert_eq!(p.erasure, q("1"));
        assert_eq!(normal_decoding_failure(2, 3), q("1/4"));
        assert!(comparison_curves(7, 0, &CurvePoint::Defects(1)).is_err());
        // ε = 1 puts every cell in defect
        let p = comparison_curves(7, 3, &CurvePoint::Epsilon(q("1"))).unwrap();
        assert_eq!(p.normal, normal_decoding_failure(7, 3));
        assert_eq!(p.erasure, q("1"));
    }
}
