//! Stuck-at channel application, masking encoders and decoders.
//!
//! Encoding writes `c = w·G1 + d·G0` and picks `d` so that `c` agrees with
//! as many stuck cells as possible. At the `u` defect positions this is the
//! linear system `d·G0^Ψ = b^Ψ` with `b^Ψ = w·G1^Ψ + s^Ψ` over GF(2).

mod decode;

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{solve_consistent, BitMatrix, BitVector};
use crate::code::PlbcCode;
use crate::error::{Error, Result};

pub use decode::{coset_table, decode_pcc, decode_plbc, CosetTable, DECODE_TABLE_LIMIT};

/// Largest `l` the exhaustive encoder will enumerate.
pub const OPTIMAL_ENCODER_LIMIT: usize = 20;

/// Per-cell state: non-defective, or stuck at 0 / 1.
///
/// Held as two aligned masks; `stuck` never has a bit outside `is_defect`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DefectVector {
    is_defect: BitVector,
    stuck: BitVector,
}

impl DefectVector {
    /// No defects.
    pub fn none(n: usize) -> Self {
        DefectVector {
            is_defect: BitVector::zeros(n),
            stuck: BitVector::zeros(n),
        }
    }

    pub fn from_masks(is_defect: BitVector, stuck: BitVector) -> Result<Self> {
        if is_defect.len() != stuck.len() {
            return Err(Error::DimensionMismatch(format!(
                "defect mask length {} vs stuck-value length {}",
                is_defect.len(),
                stuck.len()
            )));
        }
        if stuck.and(&is_defect) != stuck {
            return Err(Error::DimensionMismatch(
                "stuck value set at a non-defective cell".into(),
            ));
        }
        Ok(DefectVector { is_defect, stuck })
    }

    /// Duplicate indices are rejected.
    pub fn from_pairs(n: usize, pairs: &[(usize, bool)]) -> Result<Self> {
        let mut s = DefectVector::none(n);
        for &(i, v) in pairs {
            if i >= n {
                return Err(Error::DimensionMismatch(format!(
                    "defect index {i} out of range for length {n}"
                )));
            }
            if s.is_defect.get(i) {
                return Err(Error::Parse(format!("defect index {i} given twice")));
            }
            s.set(i, Some(v));
        }
        Ok(s)
    }

    /// Parses `"2:1 5:0"`; the empty string means no defects.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for tok in text.split_whitespace() {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("defect {tok:?} is not index:value")))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad defect index in {tok:?}")))?;
            let val = match val {
                "0" => false,
                "1" => true,
                _ => {
                    return Err(Error::Parse(format!(
                        "stuck value in {tok:?} must be 0 or 1"
                    )))
                }
            };
            pairs.push((idx, val));
        }
        DefectVector::from_pairs(n, &pairs)
    }

    pub fn set(&mut self, i: usize, state: Option<bool>) {
        self.is_defect.set(i, state.is_some());
        self.stuck.set(i, state.unwrap_or(false));
    }

    pub fn len(&self) -> usize {
        self.is_defect.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_defect.is_empty()
    }

    /// Number of defects `u`.
    pub fn count(&self) -> usize {
        self.is_defect.weight()
    }

    /// Defect locations, ascending.
    pub fn positions(&self) -> Vec<usize> {
        self.is_defect.iter_ones().collect()
    }

    pub fn stuck_at(&self, i: usize) -> Option<bool> {
        self.is_defect.get(i).then(|| self.stuck.get(i))
    }

    pub fn defect_mask(&self) -> &BitVector {
        &self.is_defect
    }

    pub fn stuck_mask(&self) -> &BitVector {
        &self.stuck
    }
}

impl fmt::Display for DefectVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .is_defect
            .iter_ones()
            .map(|i| format!("{i}:{}", u8::from(self.stuck.get(i))))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// `y = (x ∘ s) + z`: stuck cells read their stuck value, then `z` is added.
pub fn apply_defects(x: &BitVector, s: &DefectVector, z: &BitVector) -> Result<BitVector> {
    if x.len() != s.len() || x.len() != z.len() {
        return Err(Error::DimensionMismatch(format!(
            "x, s, z lengths {}, {}, {}",
            x.len(),
            s.len(),
            z.len()
        )));
    }
    let mut y = x.clone();
    for i in s.is_defect.iter_ones() {
        y.set(i, s.stuck.get(i));
    }
    y.xor_assign(z);
    Ok(y)
}

/// `‖(c ∘ s) − c‖`: defects whose stuck value disagrees with the codeword.
pub fn unmasked_count(c: &BitVector, s: &DefectVector) -> Result<usize> {
    if c.len() != s.len() {
        return Err(Error::DimensionMismatch(format!(
            "codeword length {} vs defect vector length {}",
            c.len(),
            s.len()
        )));
    }
    Ok(c.xor(&s.stuck).and(&s.is_defect).weight())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EncodeStep {
    /// Full system solved with `u >= d0`.
    Step1,
    /// Fell back to masking `d0 - 1` chosen defects.
    Step2,
    /// `u < d0`; masking guaranteed.
    Trivial,
    /// Exhaustive search over all `d`.
    Exhaustive,
}

impl fmt::Display for EncodeStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodeStep::Step1 => "step1",
            EncodeStep::Step2 => "step2",
            EncodeStep::Trivial => "trivial",
            EncodeStep::Exhaustive => "exhaustive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodeResult {
    pub codeword: BitVector,
    pub d: BitVector,
    pub unmasked: usize,
    pub step: EncodeStep,
}

impl EncodeResult {
    pub const CSV_HEADER: &'static str = "codeword,d,unmasked,step";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.codeword, self.d, self.unmasked, self.step
        )
    }
}

/// How the one-step encoder (and step 2) picks which defects to mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LocationRule {
    /// Largest indices first (highest-degree coefficients for cyclic codes).
    #[default]
    HighestFirst,
    /// Uniformly random subset drawn from a ChaCha stream with this seed.
    Uniform { seed: u64 },
}

/// The `m` largest indices of `psi`, in descending order.
pub fn select_locations(psi: &[usize], m: usize) -> Result<Vec<usize>> {
    select_locations_with(psi, m, LocationRule::HighestFirst)
}

pub fn select_locations_with(psi: &[usize], m: usize, rule: LocationRule) -> Result<Vec<usize>> {
    if m > psi.len() {
        return Err(Error::DimensionMismatch(format!(
            "cannot select {m} of {} defect locations",
            psi.len()
        )));
    }
    let mut chosen = psi.to_vec();
    match rule {
        LocationRule::HighestFirst => {
            chosen.sort_unstable_by(|a, b| b.cmp(a));
            chosen.truncate(m);
        }
        LocationRule::Uniform { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            chosen.sort_unstable();
            chosen.partial_shuffle(&mut rng, m);
            chosen.truncate(m);
            chosen.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    Ok(chosen)
}

fn check_inputs(code: &PlbcCode, w: &BitVector, s: &DefectVector) -> Result<()> {
    if w.len() != code.k() {
        return Err(Error::DimensionMismatch(format!(
            "message has length {}, code has k = {}",
            w.len(),
            code.k()
        )));
    }
    if s.len() != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "defect vector has length {}, code has n = {}",
            s.len(),
            code.n()
        )));
    }
    Ok(())
}

/// `(G0^Ψ)ᵀ` and `(b^Ψ)ᵀ` for the given positions.
fn masking_system(
    code: &PlbcCode,
    message_part: &BitVector,
    s: &DefectVector,
    positions: &[usize],
) -> (BitMatrix, BitVector) {
    let rows: Vec<BitVector> = positions
        .iter()
        .map(|&i| code.g0_column(i).clone())
        .collect();
    let mut b = BitVector::zeros(positions.len());
    for (j, &i) in positions.iter().enumerate() {
        b.set(j, message_part.get(i) ^ s.stuck.get(i));
    }
    let a = BitMatrix::from_rows(code.l(), rows).expect("columns of G0 have length l");
    (a, b)
}

fn finish(
    code: &PlbcCode,
    message_part: BitVector,
    d: BitVector,
    s: &DefectVector,
    step: EncodeStep,
) -> Result<EncodeResult> {
    let mut codeword = message_part;
    codeword.xor_assign(&code.g0().left_mul(&d)?);
    let unmasked = unmasked_count(&codeword, s)?;
    Ok(EncodeResult {
        codeword,
        d,
        unmasked,
        step,
    })
}

/// Minimum-residual `d` over all `2^l` candidates; ties go to the smallest
/// `d` read as an integer with bit 0 least significant.
pub fn encode_optimal(code: &PlbcCode, w: &BitVector, s: &DefectVector) -> Result<EncodeResult> {
    check_inputs(code, w, s)?;
    let l = code.l();
    if l > OPTIMAL_ENCODER_LIMIT {
        return Err(Error::Unsupported {
            what: format!("exhaustive encoding over 2^{l} masking vectors"),
            limit: OPTIMAL_ENCODER_LIMIT,
        });
    }
    let message_part = code.g1().left_mul(w)?;
    let psi = s.positions();
    // residual at the defect positions, updated one G0 row at a time in Gray order
    let g0_psi: Vec<BitVector> = code
        .g0()
        .row_vectors()
        .iter()
        .map(|row| row.select(&psi))
        .collect();
    let mut residual = message_part.select(&psi).xor(&s.stuck.select(&psi));
    let mut d: u64 = 0;
    let mut best = (residual.weight(), 0u64);
    for step in 1u64..(1u64 << l) {
        let j = step.trailing_zeros() as usize;
        residual.xor_assign(&g0_psi[j]);
        d ^= 1 << j;
        let cand = (residual.weight(), d);
        if cand < best {
            best = cand;
        }
    }
    finish(
        code,
        message_part,
        BitVector::from_u64(l, best.1),
        s,
        EncodeStep::Exhaustive,
    )
}

/// Masks `min(d0 - 1, u)` defects chosen by `select_locations`.
pub fn encode_one_step(code: &PlbcCode, w: &BitVector, s: &DefectVector) -> Result<EncodeResult> {
    encode_one_step_with(code, w, s, LocationRule::HighestFirst)
}

pub fn encode_one_step_with(
    code: &PlbcCode,
    w: &BitVector,
    s: &DefectVector,
    rule: LocationRule,
) -> Result<EncodeResult> {
    check_inputs(code, w, s)?;
    let message_part = code.g1().left_mul(w)?;
    one_step_from(code, message_part, s, rule)
}

fn one_step_from(
    code: &PlbcCode,
    message_part: BitVector,
    s: &DefectVector,
    rule: LocationRule,
) -> Result<EncodeResult> {
    let psi = s.positions();
    let u = psi.len();
    let m = (code.d0() - 1).min(u);
    let chosen = select_locations_with(&psi, m, rule)?;
    let (a, b) = masking_system(code, &message_part, s, &chosen);
    let d = solve_consistent(&a, &b)?.ok_or_else(|| {
        Error::InvariantViolation(format!(
            "{m} columns of G0 are dependent although d0 = {}",
            code.d0()
        ))
    })?;
    let step = if u < code.d0() {
        EncodeStep::Trivial
    } else {
        EncodeStep::Step2
    };
    finish(code, message_part, d, s, step)
}

/// Tries the full `u`-equation system first and falls back to the
/// one-step computation when it is inconsistent.
pub fn encode_two_step(code: &PlbcCode, w: &BitVector, s: &DefectVector) -> Result<EncodeResult> {
    encode_two_step_with(code, w, s, LocationRule::HighestFirst)
}

pub fn encode_two_step_with(
    code: &PlbcCode,
    w: &BitVector,
    s: &DefectVector,
    rule: LocationRule,
) -> Result<EncodeResult> {
    check_inputs(code, w, s)?;
    let message_part = code.g1().left_mul(w)?;
    let psi = s.positions();
    let (a, b) = masking_system(code, &message_part, s, &psi);
    match solve_consistent(&a, &b)? {
        Some(d) => {
            let step = if psi.len() < code.d0() {
                EncodeStep::Trivial
            } else {
                EncodeStep::Step1
            };
            finish(code, message_part, d, s, step)
        }
        None => {
            let mut res = one_step_from(code, message_part, s, rule)?;
            res.step = EncodeStep::Step2;
            Ok(res)
        }
    }
}

/// `u − rank(G0^Ψ)` for the defect set of `s`.
pub fn rank_deficiency(code: &PlbcCode, positions: &[usize]) -> usize {
    let rows: Vec<BitVector> = positions
        .iter()
        .map(|&i| code.g0_column(i).clone())
        .collect();
    let a = BitMatrix::from_rows(code.l(), rows).expect("columns of G0 have length l");
    positions.len() - a.rank()
}
