use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{BitMatrix, BitVector, Rref};
use crate::code::ENUMERATION_LIMIT;
use crate::error::{Error, Result};

use super::bounds::binomial_row;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WdProvenance {
    Exhaustive,
    Macwilliams,
    /// Binomial approximation; counts need not sum to `2^dim`.
    Approx,
}

impl WdProvenance {
    pub fn is_exact(self) -> bool {
        !matches!(self, WdProvenance::Approx)
    }
}

impl fmt::Display for WdProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WdProvenance::Exhaustive => "exhaustive",
            WdProvenance::Macwilliams => "macwilliams",
            WdProvenance::Approx => "approx",
        })
    }
}

/// Counts `A_0 … A_n` of codewords by Hamming weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    pub n: usize,
    pub dim: usize,
    pub counts: Vec<BigUint>,
    pub provenance: WdProvenance,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WdFile {
    n: usize,
    dim: usize,
    counts: Vec<String>,
    provenance: WdProvenance,
}

impl WeightDistribution {
    pub fn new(
        n: usize,
        dim: usize,
        counts: Vec<BigUint>,
        provenance: WdProvenance,
    ) -> Result<Self> {
        if counts.len() != n + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} counts for length {n}",
                counts.len()
            )));
        }
        if !counts[0].is_one() {
            return Err(Error::InvalidSpec("A_0 must be 1".into()));
        }
        if provenance.is_exact() {
            let total: BigUint = counts.iter().sum();
            if total != BigUint::one() << dim {
                return Err(Error::InvalidSpec(format!(
                    "counts sum to {total}, expected 2^{dim}"
                )));
            }
        }
        Ok(WeightDistribution {
            n,
            dim,
            counts,
            provenance,
        })
    }

    pub fn count(&self, w: usize) -> &BigUint {
        &self.counts[w]
    }

    /// Smallest nonzero weight with a codeword; `None` for the zero code.
    pub fn min_distance(&self) -> Option<usize> {
        (1..=self.n).find(|&w| !self.counts[w].is_zero())
    }

    /// `{"n":7,"dim":3,"counts":["1","0",…],"provenance":"exhaustive"}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(&WdFile {
            n: self.n,
            dim: self.dim,
            counts: self.counts.iter().map(BigUint::to_string).collect(),
            provenance: self.provenance,
        })
        .expect("distribution serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: WdFile = serde_json::from_str(text)?;
        let counts = file
            .counts
            .iter()
            .map(|c| {
                c.parse::<BigUint>()
                    .map_err(|_| Error::Parse(format!("count {c:?} is not a decimal integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        WeightDistribution::new(file.n, file.dim, counts, file.provenance)
    }
}

/// Weight counts of the span of independent `basis` vectors, by Gray-code walk.
fn span_weight_counts(basis: &[BitVector], n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    let mut word = BitVector::zeros(n);
    counts[0] = 1;
    for step in 1u64..(1u64 << basis.len()) {
        word.xor_assign(&basis[step.trailing_zeros() as usize]);
        counts[word.weight()] += 1;
    }
    counts
}

/// Exact distribution of the row space of `generator`; dependent rows are
/// reduced away first, so `dim` is the rank.
pub fn weight_distribution_exhaustive(generator: &BitMatrix) -> Result<WeightDistribution> {
    let rref = Rref::new(generator);
    let dim = rref.rank();
    if dim > ENUMERATION_LIMIT {
        return Err(Error::Unsupported {
            what: format!("enumerating 2^{dim} codewords"),
            limit: ENUMERATION_LIMIT,
        });
    }
    let n = generator.cols();
    let counts = span_weight_counts(rref.row_basis(), n)
        .into_iter()
        .map(BigUint::from)
        .collect();
    WeightDistribution::new(n, dim, counts, WdProvenance::Exhaustive)
}

/// Krawtchouk values `K_0(x) … K_n(x)` by the three-term recurrence.
fn krawtchouk_column(n: usize, x: usize) -> Vec<BigInt> {
    let mut k = Vec::with_capacity(n + 1);
    k.push(BigInt::one());
    if n == 0 {
        return k;
    }
    k.push(BigInt::from(n as i64 - 2 * x as i64));
    for j in 1..n {
        let next = (BigInt::from(n as i64 - 2 * x as i64) * &k[j]
            - BigInt::from((n - j + 1) as i64) * &k[j - 1])
            / BigInt::from((j + 1) as i64);
        k.push(next);
    }
    k
}

/// Distribution of the dual code: `B_j = 2^-dim Σ_w A_w K_j(w)`.
pub fn macwilliams_transform(wd: &WeightDistribution) -> Result<WeightDistribution> {
    if !wd.provenance.is_exact() {
        return Err(Error::Domain(
            "MacWilliams transform needs an exact distribution".into(),
        ));
    }
    let n = wd.n;
    let mut sums = vec![BigInt::zero(); n + 1];
    for (w, a) in wd.counts.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let a = BigInt::from(a.clone());
        for (j, kj) in krawtchouk_column(n, w).into_iter().enumerate() {
            sums[j] += &a * kj;
        }
    }
    let size = BigInt::one() << wd.dim;
    let mut counts = Vec::with_capacity(n + 1);
    for (j, s) in sums.into_iter().enumerate() {
        if s.is_negative() || !(&s % &size).is_zero() {
            return Err(Error::InvariantViolation(format!(
                "MacWilliams sum at weight {j} is {s}, not a nonnegative multiple of 2^{}",
                wd.dim
            )));
        }
        counts.push((s / &size).to_biguint().expect("nonnegative"));
    }
    WeightDistribution::new(n, n - wd.dim, counts, WdProvenance::Macwilliams)
        .map_err(|e| Error::InvariantViolation(format!("MacWilliams output inconsistent: {e}")))
}

/// `A_0 = 1`, `A_w = 0` for `0 < w < d0`, and
/// `A_w = round(C(n, w) · 2^(dim − n))` (half up) for `w >= d0`.
pub fn weight_distribution_approx(n: usize, dim: usize, d0: usize) -> Result<WeightDistribution> {
    if dim > n {
        return Err(Error::Domain(format!("dimension {dim} exceeds length {n}")));
    }
    let shift = n - dim;
    let row = binomial_row(n);
    let mut counts = vec![BigUint::zero(); n + 1];
    counts[0] = BigUint::one();
    for w in d0.max(1)..=n {
        counts[w] = if shift == 0 {
            row[w].clone()
        } else {
            (&row[w] + (BigUint::one() << (shift - 1))) >> shift
        };
    }
    WeightDistribution::new(n, dim, counts, WdProvenance::Approx)
}

/// Exact distribution of `{c : checks · cᵀ = 0}`: enumerated directly when
/// that code is small, else through MacWilliams from the row space of
/// `checks`.
pub fn checked_code_distribution(checks: &BitMatrix) -> Result<WeightDistribution> {
    let n = checks.cols();
    let rref = Rref::new(checks);
    let dim = n - rref.rank();
    if dim <= ENUMERATION_LIMIT {
        let basis = rref.null_space();
        let counts = span_weight_counts(&basis, n)
            .into_iter()
            .map(BigUint::from)
            .collect();
        return WeightDistribution::new(n, dim, counts, WdProvenance::Exhaustive);
    }
    if rref.rank() <= ENUMERATION_LIMIT {
        let dual = weight_distribution_exhaustive(checks)?;
        return macwilliams_transform(&dual);
    }
    Err(Error::Unsupported {
        what: format!(
            "weight distribution of a [{n}, {dim}] code whose dual has dimension {}",
            rref.rank()
        ),
        limit: ENUMERATION_LIMIT,
    })
}

/// Compact `A_w` listing for diagnostics.
impl fmt::Display for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(w, a)| format!("A_{w}={a}"))
            .collect();
        write!(f, "[{}, {}] {}", self.n, self.dim, parts.join(" "))
    }
}
