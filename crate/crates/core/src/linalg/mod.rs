//! Exact integer lattice algebra.

pub mod group;
pub mod hom;
pub mod lattice;
pub mod matrix;
pub mod snf;

pub use group::{subquotient, FgAbGroup, GroupElement, GroupSummary};
pub use hom::{is_exact_at, GroupHom};
pub use lattice::Lattice;
pub use matrix::{int_vec, IntMatrix, IntVector};
pub use snf::{hermite_basis, kernel_basis, snf, solve_integer, solve_matrix, SnfResult};
