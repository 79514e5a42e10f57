use std::fmt;
use std::str::FromStr;

use super::matrix::{CMatrix, CVector};
use super::svd::singular_values;
use crate::error::Error;

/// An induced operator norm together with the vector norm inducing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NormKind {
    /// Operator 2-norm, Euclidean vectors.
    #[default]
    Spectral,
    /// Max column abs-sum, vector 1-norm.
    One,
    /// Max row abs-sum, vector max-norm.
    Infinity,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::Spectral, NormKind::One, NormKind::Infinity];

    pub fn as_str(self) -> &'static str {
        match self {
            NormKind::Spectral => "spectral",
            NormKind::One => "one",
            NormKind::Infinity => "inf",
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "spectral" | "2" | "two" | "euclidean" => Ok(NormKind::Spectral),
            "one" | "1" => Ok(NormKind::One),
            "inf" | "infinity" | "max" => Ok(NormKind::Infinity),
            other => Err(Error::InvalidArgument(format!("unknown norm `{other}`"))),
        }
    }
}

pub fn one_norm(a: &CMatrix) -> f64 {
    (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn inf_norm(a: &CMatrix) -> f64 {
    (0..a.rows())
        .map(|i| a.row(i).iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest singular value.
///
/// Panics only if the Jacobi sweep limit is exhausted, which does not occur
/// for finite input at the sizes this crate targets.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    singular_values(a)
        .map(|s| s.largest())
        .expect("Jacobi SVD failed to converge")
}

pub fn operator_norm(a: &CMatrix, kind: NormKind) -> f64 {
    match kind {
        NormKind::Spectral => spectral_norm(a),
        NormKind::One => one_norm(a),
        NormKind::Infinity => inf_norm(a),
    }
}

pub fn vector_norm(v: &CVector, kind: NormKind) -> f64 {
    match kind {
        NormKind::Spectral => {
            // scaled to avoid overflow on extreme entries
            let scale = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
            if scale == 0.0 {
                return 0.0;
            }
            scale * v.iter().map(|c| (c / scale).norm_sqr()).sum::<f64>().sqrt()
        }
        NormKind::One => v.iter().map(|c| c.norm()).sum(),
        NormKind::Infinity => v.iter().map(|c| c.norm()).fold(0.0, f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_unit_norm() {
        for k in NormKind::ALL {
            assert!((operator_norm(&CMatrix::identity(5), k) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn matrix_norm_examples() {
        let a = CMatrix::from_real_rows(&[[1.0, -2.0], [3.0, 4.0]]);
        assert_eq!(operator_norm(&a, NormKind::One), 6.0);
        assert_eq!(operator_norm(&a, NormKind::Infinity), 7.0);
        let d = CMatrix::from_real_diag(&[1.1, 2.0]);
        assert!((operator_norm(&d, NormKind::Spectral) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn vector_norm_examples() {
        let ones = CVector::filled(10, 1.0);
        assert!((vector_norm(&ones, NormKind::Spectral) - 10f64.sqrt()).abs() < 1e-15);
        let v = CVector::from_real(&[0.1, 0.01]);
        assert!((vector_norm(&v, NormKind::Spectral) - 0.100_498_756_211_208_9).abs() < 1e-15);
        assert!((vector_norm(&v, NormKind::One) - 0.11).abs() < 1e-15);
        assert_eq!(vector_norm(&v, NormKind::Infinity), 0.1);
        for k in NormKind::ALL {
            assert_eq!(vector_norm(&CVector::zeros(3), k), 0.0);
        }
    }

    #[test]
    fn parse_norm_names() {
        assert_eq!("Spectral".parse::<NormKind>().unwrap(), NormKind::Spectral);
        assert_eq!("1".parse::<NormKind>().unwrap(), NormKind::One);
        assert_eq!("inf".parse::<NormKind>().unwrap(), NormKind::Infinity);
        assert!("fro".parse::<NormKind>().is_err());
    }
}
