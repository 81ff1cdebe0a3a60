//! Exact integer linear algebra: matrices, Smith normal form, and finitely
//! generated abelian groups.

mod group;
mod matrix;
mod smith;

pub use group::{chain_homology, cokernel, kernel_rank, FgAbelianGroup};
pub use matrix::IntMatrix;
pub use smith::{invariant_factors, smith_normal_form, SnfResult};
