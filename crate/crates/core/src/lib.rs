//! Partitioned linear block codes (PLBC) and partitioned BCH codes for
//! memories with stuck-at defects.
//!
//! The crate covers code construction ([`code`]), defect masking encoders
//! and decoders ([`codec`]), exact masking-failure bounds ([`analysis`]) and
//! a reproducible Monte Carlo simulator of the stuck-at channel ([`sim`]).
//! The `plbc` binary wraps all of it behind [`cli`].

pub mod algebra;
pub mod analysis;
pub mod cli;
pub mod code;
pub mod codec;
pub mod error;
pub mod sim;

pub use algebra::{BinaryPolynomial, BitMatrix, BitVector};
pub use code::{PbchSpec, PlbcCode};
pub use codec::{DefectVector, EncodeResult};
pub use error::{Error, Result};
