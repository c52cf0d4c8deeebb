//! Polynomials over GF(2), stored as a coefficient bitmask (bit `i` is the
//! coefficient of `x^i`).

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{Num, One, Zero};

use super::bits::BitVector;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BinaryPolynomial(BigUint);

impl BinaryPolynomial {
    pub fn zero() -> Self {
        BinaryPolynomial(BigUint::zero())
    }

    pub fn one() -> Self {
        BinaryPolynomial(BigUint::one())
    }

    /// `x^i`
    pub fn monomial(i: usize) -> Self {
        BinaryPolynomial(BigUint::one() << i)
    }

    pub fn from_mask(mask: u64) -> Self {
        BinaryPolynomial(BigUint::from(mask))
    }

    pub fn from_biguint(mask: BigUint) -> Self {
        BinaryPolynomial(mask)
    }

    pub fn mask(&self) -> &BigUint {
        &self.0
    }

    /// Coefficient vector `(c_0, …, c_{len-1})`.
    pub fn from_coefficients(v: &BitVector) -> Self {
        let mut mask = BigUint::zero();
        for i in v.iter_ones() {
            mask.set_bit(i as u64, true);
        }
        BinaryPolynomial(mask)
    }

    pub fn to_coefficients(&self, len: usize) -> Result<BitVector> {
        if self.degree() >= len as isize {
            return Err(Error::DimensionMismatch(format!(
                "polynomial of degree {} does not fit {len} coefficients",
                self.degree()
            )));
        }
        BitVector::from_indices(len, self.ones())
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.0.bits() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.0.bit(i as u64)
    }

    pub fn weight(&self) -> usize {
        self.0.count_ones() as usize
    }

    /// Exponents with a nonzero coefficient, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.0.bits() as usize).filter(move |&i| self.coeff(i))
    }

    pub fn shl(&self, k: usize) -> Self {
        BinaryPolynomial(&self.0 << k)
    }

    /// Quotient and remainder with `deg(rem) < deg(g)`. The zero polynomial
    /// divides to `(0, 0)`.
    pub fn divmod(&self, g: &BinaryPolynomial) -> Result<(BinaryPolynomial, BinaryPolynomial)> {
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dg = g.degree();
        let mut rem = self.0.clone();
        let mut quot = BigUint::zero();
        loop {
            let dr = rem.bits() as isize - 1;
            if dr < dg {
                break;
            }
            let shift = (dr - dg) as usize;
            rem ^= &g.0 << shift;
            quot.set_bit(shift as u64, true);
        }
        Ok((BinaryPolynomial(quot), BinaryPolynomial(rem)))
    }

    pub fn rem(&self, g: &BinaryPolynomial) -> Result<BinaryPolynomial> {
        Ok(self.divmod(g)?.1)
    }

    pub fn divides(&self, f: &BinaryPolynomial) -> Result<bool> {
        Ok(f.rem(self)?.is_zero())
    }

    /// `x^deg · p(1/x)`; zero stays zero.
    pub fn reciprocal(&self) -> Self {
        let d = self.degree();
        if d < 0 {
            return Self::zero();
        }
        let mut out = BigUint::zero();
        for i in self.ones() {
            out.set_bit((d as usize - i) as u64, true);
        }
        BinaryPolynomial(out)
    }

    pub fn gcd(&self, other: &BinaryPolynomial) -> BinaryPolynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a
    }

    /// `x^n + 1`
    pub fn x_n_plus_one(n: usize) -> Self {
        BinaryPolynomial::monomial(n) + BinaryPolynomial::one()
    }
}

// coefficients live in GF(2), so addition is XOR
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for BinaryPolynomial {
    type Output = BinaryPolynomial;
    fn add(self, rhs: BinaryPolynomial) -> BinaryPolynomial {
        BinaryPolynomial(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for &BinaryPolynomial {
    type Output = BinaryPolynomial;
    fn add(self, rhs: &BinaryPolynomial) -> BinaryPolynomial {
        BinaryPolynomial(&self.0 ^ &rhs.0)
    }
}

impl Mul for &BinaryPolynomial {
    type Output = BinaryPolynomial;
    fn mul(self, rhs: &BinaryPolynomial) -> BinaryPolynomial {
        // carry-less: XOR shifted copies of the denser operand
        let (sparse, dense) = if self.weight() <= rhs.weight() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut acc = BigUint::zero();
        for i in sparse.ones() {
            acc ^= &dense.0 << i;
        }
        BinaryPolynomial(acc)
    }
}

impl Mul for BinaryPolynomial {
    type Output = BinaryPolynomial;
    fn mul(self, rhs: BinaryPolynomial) -> BinaryPolynomial {
        &self * &rhs
    }
}

impl fmt::Display for BinaryPolynomial {
    /// Lowercase hex of the bitmask, `0x` prefixed: `x^3+x+1` prints as `0xb`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{}", self.0.to_str_radix(16))
    }
}

impl fmt::Debug for BinaryPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .ones()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

impl FromStr for BinaryPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let digits = s
            .strip_prefix("0x")
            .or_else(|| s.strip_prefix("0X"))
            .ok_or_else(|| {
                Error::Parse(format!("polynomial {s:?} must be hex with a 0x prefix"))
            })?;
        BigUint::from_str_radix(digits, 16)
            .map(BinaryPolynomial)
            .map_err(|e| Error::Parse(format!("polynomial {s:?}: {e}")))
    }
}
