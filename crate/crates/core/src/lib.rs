//! Jacobians, ray class groups and Picard groups of finite multigraphs.

pub mod complexes;
pub mod error;
pub mod genjac;
pub mod graph;
pub mod jacobian;
pub mod linalg;
pub mod morphisms;
pub mod random;
pub mod report;
pub mod sheaf;
pub mod suites;

pub use error::{Error, Result};
