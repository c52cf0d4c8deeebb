//! GF(2^m) via log/antilog tables, plus the cyclotomic machinery needed to
//! build BCH generator polynomials.

use std::collections::BTreeSet;

use super::poly::BinaryPolynomial;
use crate::error::{Error, Result};

/// Largest supported extension degree (tables hold 2^m entries).
pub const MAX_EXTENSION_DEGREE: u32 = 16;

/// Default primitive polynomial for each extension degree.
pub fn default_primitive(m: u32) -> Option<BinaryPolynomial> {
    let mask: u64 = match m {
        2 => 0x7,
        3 => 0xb,
        4 => 0x13,
        5 => 0x25,
        6 => 0x43,
        7 => 0x83,
        8 => 0x11d,
        9 => 0x211,
        10 => 0x409,
        11 => 0x805,
        12 => 0x1053,
        13 => 0x201b,
        14 => 0x4443,
        15 => 0x8003,
        16 => 0x1100b,
        _ => return None,
    };
    Some(BinaryPolynomial::from_mask(mask))
}

/// `m` with `n = 2^m - 1`, if `n` has that form.
pub fn extension_degree(n: usize) -> Option<u32> {
    let m = (n + 1).trailing_zeros();
    ((n + 1).is_power_of_two() && m >= 1).then_some(m)
}

#[derive(Clone, Debug)]
pub struct FieldGF2m {
    m: u32,
    primitive: BinaryPolynomial,
    log: Vec<u32>,
    antilog: Vec<u32>,
}

impl FieldGF2m {
    pub fn new(m: u32, primitive: BinaryPolynomial) -> Result<Self> {
        if m == 0 || m > MAX_EXTENSION_DEGREE {
            return Err(Error::InvalidSpec(format!(
                "extension degree {m} outside 1..={MAX_EXTENSION_DEGREE}"
            )));
        }
        if primitive.degree() != m as isize {
            return Err(Error::InvalidSpec(format!(
                "primitive polynomial {primitive} has degree {}, expected {m}",
                primitive.degree()
            )));
        }
        if !is_irreducible(&primitive) {
            return Err(Error::InvalidSpec(format!(
                "{primitive} is reducible over GF(2)"
            )));
        }
        let size = 1usize << m;
        let order = size - 1;
        let poly_mask = primitive.mask().iter_u64_digits().next().unwrap_or(0) as u32;
        let mut antilog = vec![0u32; order];
        let mut log = vec![0u32; size];
        let mut a: u32 = 1;
        for (e, slot) in antilog.iter_mut().enumerate() {
            if e > 0 && a == 1 {
                return Err(Error::InvalidSpec(format!(
                    "{primitive} is not primitive: x has order {e} < {order}"
                )));
            }
            *slot = a;
            log[a as usize] = e as u32;
            a <<= 1;
            if a & (1 << m) != 0 {
                a ^= poly_mask;
            }
        }
        if a != 1 {
            return Err(Error::InvariantViolation(format!(
                "x^{order} != 1 modulo {primitive}"
            )));
        }
        Ok(FieldGF2m {
            m,
            primitive,
            log,
            antilog,
        })
    }

    pub fn with_default_primitive(m: u32) -> Result<Self> {
        let p = default_primitive(m).ok_or_else(|| {
            Error::InvalidSpec(format!("no default primitive polynomial for m = {m}"))
        })?;
        FieldGF2m::new(m, p)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Multiplicative group order `2^m - 1`.
    pub fn order(&self) -> usize {
        self.antilog.len()
    }

    pub fn primitive(&self) -> &BinaryPolynomial {
        &self.primitive
    }

    /// `α^e`, exponent taken modulo the group order.
    pub fn alpha_pow(&self, e: usize) -> u32 {
        self.antilog[e % self.order()]
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, a: u32) -> Option<usize> {
        (a != 0).then(|| self.log[a as usize] as usize)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.antilog[e % self.order()]
    }

    /// Evaluates a GF(2) polynomial at `α^e` (Horner).
    pub fn eval_at_alpha_pow(&self, p: &BinaryPolynomial, e: usize) -> u32 {
        let x = self.alpha_pow(e);
        let deg = p.degree();
        let mut acc = 0u32;
        for i in (0..=deg.max(-1)).rev() {
            acc = self.mul(acc, x);
            if p.coeff(i as usize) {
                acc ^= 1;
            }
        }
        acc
    }
}

/// Trial division by every polynomial of degree 1..=deg/2.
fn is_irreducible(p: &BinaryPolynomial) -> bool {
    let d = p.degree();
    if d < 1 {
        return false;
    }
    for deg in 1..=(d / 2) as u32 {
        for low in 0..(1u64 << deg) {
            let cand = BinaryPolynomial::from_mask((1u64 << deg) | low);
            if cand.divides(p).expect("candidate nonzero") {
                return false;
            }
        }
    }
    true
}

/// `{e·2^i mod n}`, sorted.
pub fn cyclotomic_coset(n: usize, e: usize) -> Vec<usize> {
    let mut coset = BTreeSet::new();
    let mut x = e % n;
    while coset.insert(x) {
        x = (2 * x) % n;
    }
    coset.into_iter().collect()
}

/// Minimal polynomial of `α^exponent` over GF(2).
pub fn minimal_polynomial(field: &FieldGF2m, exponent: usize) -> Result<BinaryPolynomial> {
    let n = field.order();
    // product of (x + α^j) with coefficients in GF(2^m), lowest degree first
    let mut coeffs: Vec<u32> = vec![1];
    for j in cyclotomic_coset(n, exponent) {
        let root = field.alpha_pow(j);
        let mut next = vec![0u32; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] ^= c;
            next[i] ^= field.mul(root, c);
        }
        coeffs = next;
    }
    let mut out = BinaryPolynomial::zero();
    for (i, &c) in coeffs.iter().enumerate() {
        match c {
            0 => {}
            1 => out = out + BinaryPolynomial::monomial(i),
            other => {
                return Err(Error::InvariantViolation(format!(
                    "minimal polynomial of α^{exponent} has coefficient {other} outside GF(2)"
                )))
            }
        }
    }
    Ok(out)
}

/// Narrow-sense BCH generator with zeros `α^1 … α^(δ-1)`.
pub fn bch_generator(
    field: &FieldGF2m,
    n: usize,
    designed_distance: usize,
) -> Result<BinaryPolynomial> {
    if n != field.order() {
        return Err(Error::DimensionMismatch(format!(
            "block length {n} is not 2^{} - 1 = {}",
            field.m(),
            field.order()
        )));
    }
    if designed_distance < 2 {
        return Err(Error::Domain(format!(
            "designed distance {designed_distance} must be at least 2"
        )));
    }
    let mut seen = BTreeSet::new();
    let mut g = BinaryPolynomial::one();
    for e in 1..designed_distance {
        let coset = cyclotomic_coset(n, e);
        if seen.insert(coset[0]) {
            g = &g * &minimal_polynomial(field, e)?;
        }
    }
    if !g.divides(&BinaryPolynomial::x_n_plus_one(n))? {
        return Err(Error::InvariantViolation(format!(
            "BCH generator {g} does not divide x^{n}+1"
        )));
    }
    Ok(g)
}

/// Exponents `j` in `0..n` with `p(α^j) = 0`.
pub fn zeros_of(field: &FieldGF2m, p: &BinaryPolynomial) -> Vec<usize> {
    let n = field.order();
    let mut zeros = Vec::new();
    let mut done = vec![false; n];
    for e in 0..n {
        if done[e] {
            continue;
        }
        let coset = cyclotomic_coset(n, e);
        let is_zero = field.eval_at_alpha_pow(p, e) == 0;
        for &j in &coset {
            done[j] = true;
            if is_zero {
                zeros.push(j);
            }
        }
    }
    zeros.sort_unstable();
    zeros
}

/// BCH bound for the cyclic code generated by `g`: one plus the longest run
/// of cyclically consecutive zeros. A generator vanishing everywhere yields
/// `n + 1`.
pub fn designed_distance(field: &FieldGF2m, g: &BinaryPolynomial) -> usize {
    let n = field.order();
    let mut is_zero = vec![false; n];
    for j in zeros_of(field, g) {
        is_zero[j] = true;
    }
    if is_zero.iter().all(|&z| z) {
        return n + 1;
    }
    let mut best = 0;
    let mut run = 0;
    // two passes handle wrap-around
    for i in 0..2 * n {
        if is_zero[i % n] {
            run += 1;
            best = best.max(run.min(n));
        } else {
            run = 0;
        }
    }
    best + 1
}
