use crate::algebra::{BinaryPolynomial, BitVector};
use crate::code::{PbchSpec, PlbcCode};
use crate::error::{Error, Result};

/// Largest `r` for which a full syndrome table is built.
pub const DECODE_TABLE_LIMIT: usize = 16;

/// Minimum-weight coset leader for every syndrome of `H`.
///
/// Among leaders of equal weight the one with the smallest integer encoding
/// (bit 0 least significant) wins.
#[derive(Clone, Debug)]
pub struct CosetTable {
    n: usize,
    column_syndromes: Vec<u32>,
    leaders: Vec<Vec<u32>>,
}

impl CosetTable {
    pub fn build(code: &PlbcCode) -> Result<Self> {
        let (n, r) = (code.n(), code.r());
        if r > DECODE_TABLE_LIMIT {
            return Err(Error::Unsupported {
                what: format!("syndrome table with 2^{r} entries"),
                limit: DECODE_TABLE_LIMIT,
            });
        }
        let column_syndromes: Vec<u32> = (0..n)
            .map(|i| (0..r).fold(0u32, |acc, j| acc | (u32::from(code.h().get(j, i)) << j)))
            .collect();
        let size = 1usize << r;
        let mut leaders: Vec<Option<Vec<u32>>> = vec![None; size];
        leaders[0] = Some(Vec::new());
        let mut filled = 1;
        let mut weight = 1;
        while filled < size && weight <= n {
            // colex order visits equal-weight patterns by increasing integer value
            let mut combo: Vec<usize> = (0..weight).collect();
            loop {
                let syn = combo.iter().fold(0u32, |acc, &i| acc ^ column_syndromes[i]) as usize;
                if leaders[syn].is_none() {
                    leaders[syn] = Some(combo.iter().map(|&i| i as u32).collect());
                    filled += 1;
                    if filled == size {
                        break;
                    }
                }
                if !next_colex(&mut combo, n) {
                    break;
                }
            }
            weight += 1;
        }
        let leaders = leaders
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvariantViolation("H does not reach every syndrome".into()))?;
        Ok(CosetTable {
            n,
            column_syndromes,
            leaders,
        })
    }

    pub fn syndrome(&self, y: &BitVector) -> u32 {
        y.iter_ones()
            .fold(0, |acc, i| acc ^ self.column_syndromes[i])
    }

    pub fn leader(&self, syndrome: u32) -> BitVector {
        BitVector::from_indices(
            self.n,
            self.leaders[syndrome as usize].iter().map(|&i| i as usize),
        )
        .expect("leader indices are in range")
    }
}

fn next_colex(combo: &mut [usize], n: usize) -> bool {
    let w = combo.len();
    for j in 0..w {
        let limit = if j + 1 < w { combo[j + 1] } else { n };
        if combo[j] + 1 < limit {
            combo[j] += 1;
            for (i, slot) in combo.iter_mut().enumerate().take(j) {
                *slot = i;
            }
            return true;
        }
    }
    false
}

/// Coset table for `code`, built on first use and cached on the code.
pub fn coset_table(code: &PlbcCode) -> Result<&CosetTable> {
    let cell = code.coset_table_cell();
    if let Some(t) = cell.get() {
        return Ok(t);
    }
    let table = CosetTable::build(code)?;
    Ok(cell.get_or_init(|| table))
}

/// Syndrome decoding: `ẑ` is the coset leader of `y·Hᵀ`, `ĉ = y − ẑ`, and
/// `ŵ = ĉ · G1_invᵀ`. Returns `(ŵ, ẑ)`.
pub fn decode_plbc(code: &PlbcCode, y: &BitVector) -> Result<(BitVector, BitVector)> {
    if y.len() != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "received word has length {}, code has n = {}",
            y.len(),
            code.n()
        )));
    }
    let table = coset_table(code)?;
    let z_hat = table.leader(table.syndrome(y));
    let c_hat = y.xor(&z_hat);
    let w_hat = code.g1_inv().right_mul(&c_hat)?;
    Ok((w_hat, z_hat))
}

/// Polynomial decoding for cyclic codes: `ŵ = ((y − ẑ) mod g0) / g1`.
///
/// Fails with [`Error::DecodeFailure`] when the division by `g1` is not
/// exact, i.e. the corrected word is not a codeword.
pub fn decode_pcc(spec: &PbchSpec, code: &PlbcCode, y: &BitVector) -> Result<BitVector> {
    if y.len() != spec.n() || code.n() != spec.n() {
        return Err(Error::DimensionMismatch(format!(
            "received word of length {} for n = {}",
            y.len(),
            spec.n()
        )));
    }
    let table = coset_table(code)?;
    let z_hat = table.leader(table.syndrome(y));
    let corrected = BinaryPolynomial::from_coefficients(&y.xor(&z_hat));
    let reduced = corrected.rem(spec.g0())?;
    let (w, rem) = reduced.divmod(spec.g1())?;
    if !rem.is_zero() {
        return Err(Error::DecodeFailure(format!(
            "(y - z) mod g0 leaves remainder {rem} modulo g1"
        )));
    }
    w.to_coefficients(spec.k())
}
