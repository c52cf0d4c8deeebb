//! Partitioned cyclic / BCH codes built from nested generator polynomials
//! `g1 | g0 | x^n + 1`.

use crate::algebra::field::{designed_distance, extension_degree};
use crate::algebra::{bch_generator, BinaryPolynomial, BitMatrix, FieldGF2m};
use crate::error::{Error, Result};

use super::{nullspace_min_distance, Distance, PlbcCode, ENUMERATION_LIMIT};

#[derive(Clone, Debug)]
pub struct PbchSpec {
    n: usize,
    field: FieldGF2m,
    g1: BinaryPolynomial,
    g0: BinaryPolynomial,
}

impl PbchSpec {
    /// Validates `n = 2^m - 1`, `g1 | g0`, `g0 | x^n + 1` and `1 <= k, l`.
    /// `primitive` defaults to the standard primitive polynomial of degree m.
    pub fn new(
        n: usize,
        primitive: Option<BinaryPolynomial>,
        g1: BinaryPolynomial,
        g0: BinaryPolynomial,
    ) -> Result<Self> {
        let m = extension_degree(n).ok_or_else(|| {
            Error::InvalidSpec(format!("block length {n} is not of the form 2^m - 1"))
        })?;
        let field = match primitive {
            Some(p) => FieldGF2m::new(m, p)?,
            None => FieldGF2m::with_default_primitive(m)?,
        };
        if g1.is_zero() || g0.is_zero() {
            return Err(Error::InvalidSpec(
                "generator polynomials must be nonzero".into(),
            ));
        }
        if !g1.divides(&g0)? {
            return Err(Error::InvalidSpec(format!(
                "g1 = {g1} does not divide g0 = {g0}"
            )));
        }
        if !g0.divides(&BinaryPolynomial::x_n_plus_one(n))? {
            return Err(Error::InvalidSpec(format!(
                "g0 = {g0} does not divide x^{n}+1"
            )));
        }
        let spec = PbchSpec { n, field, g1, g0 };
        if spec.k() == 0 {
            return Err(Error::InvalidSpec(format!(
                "deg g0 = deg g1 = {} leaves no message dimension",
                spec.r()
            )));
        }
        if spec.l() == 0 {
            return Err(Error::InvalidSpec(format!(
                "g0 = {} leaves no masking dimension",
                spec.g0
            )));
        }
        Ok(spec)
    }

    /// Member of the `r = 0` family at length `n`: `g1 = 1` and
    /// `g0 = (x^n + 1) / b(x)` with `b` the narrow-sense BCH generator of
    /// designed distance `delta`. The code checked by `G0` is then a BCH
    /// code, so `d0 >= delta`.
    pub fn family_member(
        n: usize,
        delta: usize,
        primitive: Option<BinaryPolynomial>,
    ) -> Result<Self> {
        let m = extension_degree(n).ok_or_else(|| {
            Error::InvalidSpec(format!("block length {n} is not of the form 2^m - 1"))
        })?;
        let field = match primitive.clone() {
            Some(p) => FieldGF2m::new(m, p)?,
            None => FieldGF2m::with_default_primitive(m)?,
        };
        let b = bch_generator(&field, n, delta)?;
        let (g0, rem) = BinaryPolynomial::x_n_plus_one(n).divmod(&b)?;
        debug_assert!(rem.is_zero());
        PbchSpec::new(
            n,
            Some(field.primitive().clone()),
            BinaryPolynomial::one(),
            g0,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn m(&self) -> u32 {
        self.field.m()
    }
    pub fn field(&self) -> &FieldGF2m {
        &self.field
    }
    pub fn g1(&self) -> &BinaryPolynomial {
        &self.g1
    }
    pub fn g0(&self) -> &BinaryPolynomial {
        &self.g0
    }
    pub fn r(&self) -> usize {
        self.g1.degree() as usize
    }
    pub fn k(&self) -> usize {
        self.g0.degree() as usize - self.r()
    }
    pub fn l(&self) -> usize {
        self.n - self.g0.degree() as usize
    }

    /// Generator of the cyclic code checked by `G0` (the dual of `C0`):
    /// the reciprocal of `(x^n + 1) / g0`.
    pub fn checked_code_generator(&self) -> BinaryPolynomial {
        let (h0, _) = BinaryPolynomial::x_n_plus_one(self.n)
            .divmod(&self.g0)
            .expect("g0 nonzero");
        h0.reciprocal()
    }

    pub fn build(&self) -> Result<PlbcCode> {
        pbch_build(self)
    }
}

fn shifts(p: &BinaryPolynomial, count: usize, n: usize) -> Result<BitMatrix> {
    let rows = (0..count)
        .map(|i| p.shl(i).to_coefficients(n))
        .collect::<Result<Vec<_>>>()?;
    BitMatrix::from_rows(n, rows)
}

/// `G1` rows are `x^i g1(x)` for `i < k`, `G0` rows are `x^i g0(x)` for
/// `i < l`. Distances are exact when the checked code or its dual has
/// dimension at most [`ENUMERATION_LIMIT`], otherwise BCH designed distances.
pub fn pbch_build(spec: &PbchSpec) -> Result<PlbcCode> {
    let n = spec.n;
    let g1 = shifts(&spec.g1, spec.k(), n)?;
    let g0 = shifts(&spec.g0, spec.l(), n)?;

    let small = |dim: usize, codim: usize| dim.min(codim) <= ENUMERATION_LIMIT;

    let d0 = if small(n - spec.l(), spec.l()) {
        Distance::exhaustive(nullspace_min_distance(&g0).expect("within enumeration limit"))
    } else {
        Distance::designed(designed_distance(
            &spec.field,
            &spec.checked_code_generator(),
        ))
    };
    // otherwise computed exactly from H during construction
    let d1 = if spec.r() == 0 || small(n - spec.r(), spec.r()) {
        None
    } else {
        Some(Distance::designed(designed_distance(&spec.field, &spec.g1)))
    };
    PlbcCode::with_distances(g1, g0, Some(d0), d1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::DistanceProvenance;

    fn p(s: &str) -> BinaryPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn seven_three_four() {
        let spec = PbchSpec::new(7, None, p("0x1"), p("0xb")).unwrap();
        assert_eq!((spec.k(), spec.l(), spec.r()), (3, 4, 0));
        let c = spec.build().unwrap();
        assert_eq!((c.d0(), c.d1(), c.r()), (4, 0, 0));
        assert_eq!(c.g0().row(0).to_string(), "1101000");
        assert_eq!(c.g1().row(2).to_string(), "0010000");
    }

    #[test]
    fn seven_one_three() {
        let spec = PbchSpec::new(7, None, p("0xb"), p("0x1d")).unwrap();
        assert_eq!((spec.k(), spec.l(), spec.r()), (1, 3, 3));
        let c = spec.build().unwrap();
        assert_eq!((c.d0(), c.d1()), (3, 3));
    }

    #[test]
    fn divisibility_violations() {
        assert!(matches!(
            PbchSpec::new(7, None, p("0x7"), p("0xb")),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            PbchSpec::new(7, None, p("0x1"), p("0x7")),
            Err(Error::InvalidSpec(_))
        ));
        assert!(PbchSpec::new(8, None, p("0x1"), p("0xb")).is_err());
        // g0 = x^7 + 1 leaves l = 0
        assert!(PbchSpec::new(7, None, p("0x1"), p("0x81")).is_err());
    }

    #[test]
    fn family_member_matches_hand_built_code() {
        let spec = PbchSpec::family_member(7, 3, None).unwrap();
        // (x^7+1)/(x^3+x+1) = x^4+x^2+x+1
        assert_eq!(spec.g0(), &p("0x17"));
        assert_eq!((spec.k(), spec.l(), spec.r()), (4, 3, 0));
        assert_eq!(spec.checked_code_generator(), p("0xd"));
        assert_eq!(spec.build().unwrap().d0(), 3);
    }

    #[test]
    fn family_at_31_has_exact_distances() {
        for (delta, l, d0) in [(3, 5, 3), (5, 10, 5), (7, 15, 7)] {
            let c = PbchSpec::family_member(31, delta, None)
                .unwrap()
                .build()
                .unwrap();
            assert_eq!(c.l(), l);
            assert_eq!(c.d0(), d0, "delta {delta}");
            assert_eq!(c.d0_provenance(), DistanceProvenance::Exhaustive);
        }
    }

    #[test]
    fn designed_distance_used_when_enumeration_impossible() {
        let spec = PbchSpec::family_member(255, 25, None).unwrap();
        assert!(spec.l() > ENUMERATION_LIMIT && spec.n() - spec.l() > ENUMERATION_LIMIT);
        let c = spec.build().unwrap();
        assert_eq!(c.d0_provenance(), DistanceProvenance::DesignedDistance);
        assert!(c.d0() >= 25);
    }
}
