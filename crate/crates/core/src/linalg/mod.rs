//! Dense exact linear algebra over Q.

mod algebra;
mod echelon;
mod matrix;

pub use algebra::{commuting_algebra_dim, generated_algebra_dim, EchelonBuilder};
pub use echelon::{intersect, kernel, left_kernel, poly_kernel, rank, restrict, rref, rref_fraction_free, rref_full, SubspaceQ};
pub use matrix::{parse_rational, MatrixQ};
