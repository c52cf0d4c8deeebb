//! `[n, k, l]` partitioned linear block codes.
//!
//! A code is the direct sum of a message space `C1` (generator `G1`, k×n)
//! and a masking space `C0` (generator `G0`, l×n). The remaining
//! `r = n - k - l` dimensions are spanned by the parity-check matrix `H`.

mod pbch;
mod spec_file;

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::algebra::{BitMatrix, BitVector, Rref};
use crate::analysis;
use crate::codec::CosetTable;
use crate::error::{Error, Result};

pub use pbch::{pbch_build, PbchSpec};
pub use spec_file::{CodeSpecFile, LoadedCode};

/// Largest code dimension enumerated codeword by codeword (2^22 words).
pub const ENUMERATION_LIMIT: usize = 22;

/// Where a distance value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceProvenance {
    /// Exact, from enumerating the code or its dual.
    Exhaustive,
    /// BCH bound from a run of consecutive zeros; a lower bound.
    DesignedDistance,
    /// Supplied by the caller and not verified.
    UserSupplied,
}

impl fmt::Display for DistanceProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceProvenance::Exhaustive => "exhaustive",
            DistanceProvenance::DesignedDistance => "designed-distance",
            DistanceProvenance::UserSupplied => "user-supplied",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Distance {
    pub value: usize,
    pub provenance: DistanceProvenance,
}

impl Distance {
    pub fn exhaustive(value: usize) -> Self {
        Distance {
            value,
            provenance: DistanceProvenance::Exhaustive,
        }
    }

    pub fn designed(value: usize) -> Self {
        Distance {
            value,
            provenance: DistanceProvenance::DesignedDistance,
        }
    }

    pub fn user(value: usize) -> Self {
        Distance {
            value,
            provenance: DistanceProvenance::UserSupplied,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlbcCode {
    n: usize,
    k: usize,
    l: usize,
    r: usize,
    g1: BitMatrix,
    g0: BitMatrix,
    h: BitMatrix,
    g1_inv: BitMatrix,
    d1: Distance,
    d0: Distance,
    /// Columns of `G0`, each of length `l`.
    g0_columns: Vec<BitVector>,
    coset_table: OnceLock<CosetTable>,
}

impl PlbcCode {
    /// Builds a code from its two generator matrices, computing `(d1, d0)`
    /// exactly. Fails with [`Error::Unsupported`] when neither the checked
    /// code nor its dual is small enough to enumerate.
    pub fn from_generators(g1: BitMatrix, g0: BitMatrix) -> Result<Self> {
        Self::with_distances(g1, g0, None, None)
    }

    /// Like [`PlbcCode::from_generators`] but takes precomputed distances
    /// where given.
    pub fn with_distances(
        g1: BitMatrix,
        g0: BitMatrix,
        d0: Option<Distance>,
        d1: Option<Distance>,
    ) -> Result<Self> {
        if g1.cols() != g0.cols() {
            return Err(Error::DimensionMismatch(format!(
                "G1 has {} columns, G0 has {}",
                g1.cols(),
                g0.cols()
            )));
        }
        let (n, k, l) = (g1.cols(), g1.rows(), g0.rows());
        if k == 0 || l == 0 {
            return Err(Error::InvalidCode(format!(
                "need k >= 1 and l >= 1, got k = {k}, l = {l}"
            )));
        }
        let stacked = g1.stack(&g0)?;
        let rref = Rref::new(&stacked);
        if rref.rank() != k + l {
            return Err(Error::InvalidCode(format!(
                "[G1; G0] has rank {} < k + l = {}, so C1 and C0 intersect",
                rref.rank(),
                k + l
            )));
        }
        let h = BitMatrix::from_rows(n, rref.null_space())?;
        let r = h.rows();

        let mut inv_rows = Vec::with_capacity(k);
        for i in 0..k {
            let mut target = BitVector::zeros(k + l);
            target.set(i, true);
            let x = rref.solve(&target)?.ok_or_else(|| {
                Error::InvariantViolation("full-rank system has no message inverse".into())
            })?;
            inv_rows.push(x);
        }
        let g1_inv = BitMatrix::from_rows(n, inv_rows)?;

        let d0 = match d0 {
            Some(d) => d,
            None => Distance::exhaustive(exact_distance(&g0, "d0")?),
        };
        if d0.value == 0 {
            return Err(Error::InvalidCode("d0 must be positive".into()));
        }
        let d1 = if r == 0 {
            Distance::exhaustive(0)
        } else {
            match d1 {
                Some(d) => d,
                None => Distance::exhaustive(exact_distance(&h, "d1")?),
            }
        };

        let g0_columns = g0.transpose().into_rows();
        let code = PlbcCode {
            n,
            k,
            l,
            r,
            g1,
            g0,
            h,
            g1_inv,
            d1,
            d0,
            g0_columns,
            coset_table: OnceLock::new(),
        };
        code.check_invariants()?;
        Ok(code)
    }

    fn check_invariants(&self) -> Result<()> {
        if self.k + self.l + self.r != self.n {
            return Err(Error::InvariantViolation("k + l + r != n".into()));
        }
        if !self.g1.mul_transpose(&self.h)?.is_zero() || !self.g0.mul_transpose(&self.h)?.is_zero()
        {
            return Err(Error::InvariantViolation(
                "generators not orthogonal to H".into(),
            ));
        }
        if self.h.rank() != self.r {
            return Err(Error::InvariantViolation("H is rank deficient".into()));
        }
        if self.g1.mul_transpose(&self.g1_inv)? != BitMatrix::identity(self.k) {
            return Err(Error::InvariantViolation("G1 · G1_invᵀ != I".into()));
        }
        if !self.g0.mul_transpose(&self.g1_inv)?.is_zero() {
            return Err(Error::InvariantViolation("G0 · G1_invᵀ != 0".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn l(&self) -> usize {
        self.l
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn g1(&self) -> &BitMatrix {
        &self.g1
    }
    pub fn g0(&self) -> &BitMatrix {
        &self.g0
    }
    pub fn h(&self) -> &BitMatrix {
        &self.h
    }
    /// Message inverse: `G1 · G1_invᵀ = I_k`, `G0 · G1_invᵀ = 0`.
    pub fn g1_inv(&self) -> &BitMatrix {
        &self.g1_inv
    }
    pub fn d0(&self) -> usize {
        self.d0.value
    }
    pub fn d1(&self) -> usize {
        self.d1.value
    }
    pub fn d0_provenance(&self) -> DistanceProvenance {
        self.d0.provenance
    }
    pub fn d1_provenance(&self) -> DistanceProvenance {
        self.d1.provenance
    }
    /// `⌊(d0 - 1) / 2⌋`
    pub fn t0(&self) -> usize {
        (self.d0.value - 1) / 2
    }

    /// Column `i` of `G0` as a length-`l` vector.
    pub fn g0_column(&self, i: usize) -> &BitVector {
        &self.g0_columns[i]
    }

    pub(crate) fn coset_table_cell(&self) -> &OnceLock<CosetTable> {
        &self.coset_table
    }

    /// `n=7 k=3 l=4 r=0 d1=0 d0=4 t0=1 d0_provenance=exhaustive`
    pub fn summary(&self) -> String {
        format!(
            "n={} k={} l={} r={} d1={} d0={} t0={} d0_provenance={}",
            self.n,
            self.k,
            self.l,
            self.r,
            self.d1(),
            self.d0(),
            self.t0(),
            self.d0.provenance
        )
    }
}

fn exact_distance(checks: &BitMatrix, name: &str) -> Result<usize> {
    nullspace_min_distance(checks).ok_or_else(|| Error::Unsupported {
        what: format!(
            "{name} needs the {}-column code checked by a rank-{} matrix; both it and its dual exceed the enumeration limit",
            checks.cols(),
            checks.rank()
        ),
        limit: ENUMERATION_LIMIT,
    })
}

/// Exact minimum distance of `{c : checks · cᵀ = 0}`.
///
/// Enumerates the code itself when its dimension is at most
/// [`ENUMERATION_LIMIT`], otherwise enumerates the row space of `checks`
/// and applies the MacWilliams transform. `None` when both are too large.
/// The zero code reports `n + 1`.
pub fn nullspace_min_distance(checks: &BitMatrix) -> Option<usize> {
    let wd = analysis::checked_code_distribution(checks).ok()?;
    Some(wd.min_distance().unwrap_or(checks.cols() + 1))
}

/// `(d1, d0)` for a code under construction: `d0` from the code checked by
/// `G0`, `d1` from the code checked by `H` (0 when `H` is empty).
pub fn min_distances(g0: &BitMatrix, h: &BitMatrix) -> Result<(usize, usize)> {
    let d0 = exact_distance(g0, "d0")?;
    let d1 = if h.rows() == 0 {
        0
    } else {
        exact_distance(h, "d1")?
    };
    Ok((d1, d0))
}

/// Whether the code corrects every pattern of `u` defects and `t` random errors.
pub fn capability(code: &PlbcCode, u: usize, t: usize) -> bool {
    capability_for(code.d0(), code.d1(), u, t)
}

/// Capability predicate on raw distances. For `u < d0` with no random
/// errors the answer is `true` even when `d1 = 0`.
pub fn capability_for(d0: usize, d1: usize, u: usize, t: usize) -> bool {
    if u < d0 {
        t == 0 || 2 * t < d1
    } else {
        2 * (u + t + 1 - d0) < d1
    }
}
