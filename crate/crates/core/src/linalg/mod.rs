//! Dense complex linear algebra.

mod eigen;
mod lu;
mod matrix;
mod norms;
mod svd;

pub use eigen::{eigenvalues, SpectrumResult};
pub use lu::{determinant, inverse, lu_solve, pivot_tolerance, Lu};
pub use matrix::{CMatrix, CVector};
pub use norms::{inf_norm, one_norm, operator_norm, spectral_norm, vector_norm, NormKind};
pub use svd::{singular_values, svd, Svd, SvdResult};
