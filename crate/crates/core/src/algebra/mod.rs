//! GF(2) linear algebra, binary polynomials and GF(2^m) arithmetic.

pub mod bits;
pub mod field;
pub mod poly;

pub use bits::{rank, solve_consistent, weight, BitMatrix, BitVector, Rref};
pub use field::{
    bch_generator, cyclotomic_coset, designed_distance, minimal_polynomial, FieldGF2m,
};
pub use poly::BinaryPolynomial;
