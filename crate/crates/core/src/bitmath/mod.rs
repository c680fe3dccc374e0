//! Exact GF(2) and GF(2^w) arithmetic on machine words.
//!
//! Every value in the crate fits in 32 bits, so vectors are a `(width, u32)`
//! pair and matrices are lists of row words. Text form is big-endian binary:
//! the leftmost character is bit `width - 1`.

mod bitvec;
mod field;
mod linmap;
mod matrix;

pub use bitvec::BitVec;
pub use field::{default_modulus, gf2n_mul, is_irreducible, Field, FieldElem};
pub use linmap::LinMap;
pub use matrix::{gf2_nullspace, gf2_rank, gf2_solve_period, rank_of_words, span_basis, BitMatrix, PeriodSolution};
