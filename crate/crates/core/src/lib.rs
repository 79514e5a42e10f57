//! Pseudospectra and condition pseudospectra of dense complex matrices,
//! certified relative-error bounds for shifted linear systems, and
//! distances to instability and singularity.

pub mod contour;
pub mod corpus;
pub mod distances;
pub mod error;
pub mod io;
pub mod linalg;
pub mod perturbation;
pub mod report;
pub mod reproduce;
pub mod spectra;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, NormKind};
pub use num_complex::Complex64;
