//! LU factorization with partial pivoting.

use num_complex::Complex64;

use super::matrix::{CMatrix, CVector};
use super::norms::inf_norm;
use crate::error::{Error, Result};

/// Packed `PA = LU` factors (unit lower triangle implicit).
#[derive(Debug, Clone)]
pub struct Lu {
    factors: CMatrix,
    perm: Vec<usize>,
    parity_odd: bool,
}

/// Scaled pivot threshold `n * eps * ||A||_inf`.
pub fn pivot_tolerance(a: &CMatrix) -> f64 {
    a.rows() as f64 * f64::EPSILON * inf_norm(a)
}

/// Gaussian elimination in place; returns the smallest pivot modulus seen.
fn eliminate(lu: &mut CMatrix, perm: &mut [usize]) -> (f64, bool) {
    let n = lu.rows();
    let mut odd = false;
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        let (p, pmag) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .fold(
                (k, -1.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        min_pivot = min_pivot.min(pmag);
        if p != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = t;
            }
            perm.swap(k, p);
            odd = !odd;
        }
        let pivot = lu[(k, k)];
        if pmag == 0.0 {
            continue;
        }
        for i in k + 1..n {
            let l = lu[(i, k)] / pivot;
            lu[(i, k)] = l;
            if l == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let u = lu[(k, j)];
                lu[(i, j)] -= l * u;
            }
        }
    }
    (min_pivot, odd)
}

impl Lu {
    pub fn factor(a: &CMatrix) -> Result<Self> {
        let n = a.ensure_square()?;
        let tol = pivot_tolerance(a);
        let mut factors = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let (min_pivot, parity_odd) = eliminate(&mut factors, &mut perm);
        if min_pivot <= tol {
            return Err(Error::SingularMatrix {
                pivot: min_pivot,
                tol,
            });
        }
        Ok(Self {
            factors,
            perm,
            parity_odd,
        })
    }

    pub fn dim(&self) -> usize {
        self.factors.rows()
    }

    pub fn solve(&self, b: &CVector) -> Result<CVector> {
        let n = self.dim();
        if b.dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "rhs has length {}, system has order {n}",
                b.dim()
            )));
        }
        let lu = &self.factors;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= lu[(i, j)] * x[j];
            }
            x[i] = s / lu[(i, i)];
        }
        Ok(CVector::from_vec(x))
    }

    /// Inverse by solving against the identity columns.
    pub fn inverse(&self) -> CMatrix {
        let n = self.dim();
        let mut inv = CMatrix::zeros(n, n);
        let mut e = CVector::zeros(n);
        for j in 0..n {
            if j > 0 {
                e[j - 1] = Complex64::new(0.0, 0.0);
            }
            e[j] = Complex64::new(1.0, 0.0);
            let col = self.solve(&e).expect("dimension checked");
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }

    pub fn determinant(&self) -> Complex64 {
        let d: Complex64 = (0..self.dim()).map(|i| self.factors[(i, i)]).product();
        if self.parity_odd {
            -d
        } else {
            d
        }
    }
}

pub fn lu_solve(a: &CMatrix, b: &CVector) -> Result<CVector> {
    if a.is_square() && a.rows() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with rhs of length {}",
            a.rows(),
            a.cols(),
            b.dim()
        )));
    }
    Lu::factor(a)?.solve(b)
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    Ok(Lu::factor(a)?.inverse())
}

/// Determinant via elimination, without the singularity cutoff.
pub fn determinant(a: &CMatrix) -> Result<Complex64> {
    let n = a.ensure_square()?;
    let mut f = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let (_, odd) = eliminate(&mut f, &mut perm);
    let d: Complex64 = (0..n).map(|i| f[(i, i)]).product();
    Ok(if odd { -d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &CVector, b: &[f64], tol: f64) -> bool {
        a.iter()
            .zip(b)
            .all(|(x, &y)| (x.re - y).abs() <= tol && x.im.abs() <= tol)
    }

    #[test]
    fn diagonal_back_substitution() {
        let a = CMatrix::from_real_diag(&[0.1, 1.0]);
        let x = lu_solve(&a, &CVector::from_real(&[1.0, 1.0])).unwrap();
        assert!(close(&x, &[10.0, 1.0], 1e-14));
    }

    #[test]
    fn upper_triangular_two_by_two() {
        let a = CMatrix::from_real_rows(&[[0.1, 10.0], [0.0, 1.0]]);
        let x = lu_solve(&a, &CVector::from_real(&[1.0, 1.0])).unwrap();
        assert!(close(&x, &[-90.0, 1.0], 1e-12));
    }

    #[test]
    fn identity_solve_is_rhs() {
        let b = CVector::from_real(&[3.0, -1.0, 2.5, 7.0]);
        let x = lu_solve(&CMatrix::identity(4), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn inverses() {
        let inv = inverse(&CMatrix::from_real_diag(&[2.0, 4.0])).unwrap();
        assert_eq!(inv, CMatrix::from_real_diag(&[0.5, 0.25]));

        let inv = inverse(&CMatrix::from_real_rows(&[[0.1, 10.0], [0.0, 1.0]])).unwrap();
        let want = CMatrix::from_real_rows(&[[10.0, -100.0], [0.0, 1.0]]);
        for (g, w) in inv.as_slice().iter().zip(want.as_slice()) {
            assert!((g - w).norm() < 1e-11);
        }

        assert_eq!(
            inverse(&CMatrix::identity(3)).unwrap(),
            CMatrix::identity(3)
        );
    }

    #[test]
    fn singular_and_mismatch_errors() {
        let s = CMatrix::from_real_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(
            lu_solve(&s, &CVector::from_real(&[1.0, 1.0])),
            Err(Error::SingularMatrix { .. })
        ));
        assert!(matches!(
            inverse(&CMatrix::zeros(2, 2)),
            Err(Error::SingularMatrix { .. })
        ));
        assert!(matches!(
            lu_solve(&CMatrix::identity(2), &CVector::from_real(&[1.0])),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            Lu::factor(&CMatrix::zeros(2, 3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn determinant_with_pivoting() {
        let a = CMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(determinant(&a).unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(
            Lu::factor(&a).unwrap().determinant(),
            Complex64::new(-1.0, 0.0)
        );
        assert_eq!(
            determinant(&CMatrix::zeros(3, 3)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }
}
