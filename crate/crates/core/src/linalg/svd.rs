//! One-sided (Hestenes) Jacobi singular value decomposition.
//!
//! Columns of the working matrix are rotated pairwise until mutually
//! orthogonal; the singular values are then the column norms. The method
//! keeps high relative accuracy in the small singular values, which is what
//! the resolvent computations depend on.

use num_complex::Complex64;

use super::matrix::{CMatrix, CVector};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Singular values in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    pub singular_values: Vec<f64>,
}

impl SvdResult {
    pub fn largest(&self) -> f64 {
        self.singular_values[0]
    }

    pub fn smallest(&self) -> f64 {
        *self.singular_values.last().expect("non-empty")
    }
}

/// Thin SVD `A = U diag(s) V^H` with `k = min(rows, cols)` columns.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    /// Left and right singular vectors for the smallest singular value.
    pub fn smallest_pair(&self) -> (f64, CVector, CVector) {
        let k = self.singular_values.len() - 1;
        (self.singular_values[k], self.u.column(k), self.v.column(k))
    }

    pub fn largest(&self) -> f64 {
        self.singular_values[0]
    }

    pub fn smallest(&self) -> f64 {
        *self.singular_values.last().expect("non-empty")
    }
}

struct Jacobi {
    /// Column-major working columns, each of length `m`.
    cols: Vec<Vec<Complex64>>,
    /// Accumulated right rotations (columns), present only when requested.
    v: Option<Vec<Vec<Complex64>>>,
}

fn dot_h(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    let ph = phase.conj();
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yp = ph * *y;
        let xn = *x * c - yp * s;
        *y = *x * s + yp * c;
        *x = xn;
    }
}

impl Jacobi {
    fn run(&mut self, tol: f64) -> Result<()> {
        let n = self.cols.len();
        // Columns this small relative to the whole matrix are numerically zero;
        // the relative orthogonality test alone never settles on them.
        let negligible = (tol * tol) * self.cols.iter().map(|c| norm_sqr(c)).sum::<f64>();
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let alpha = norm_sqr(&self.cols[p]);
                    let beta = norm_sqr(&self.cols[q]);
                    let gamma = dot_h(&self.cols[p], &self.cols[q]);
                    let g = gamma.norm();
                    if g == 0.0 || alpha.min(beta) <= negligible || g <= tol * (alpha * beta).sqrt()
                    {
                        continue;
                    }
                    rotated = true;
                    let phase = gamma / g;
                    let zeta = (beta - alpha) / (2.0 * g);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    rotate(&mut self.cols, p, q, c, s, phase);
                    if let Some(v) = self.v.as_mut() {
                        rotate(v, p, q, c, s, phase);
                    }
                }
            }
            if !rotated {
                return Ok(());
            }
        }
        Err(Error::NoConvergence {
            iterations: MAX_SWEEPS,
        })
    }
}

fn tolerance(m: usize) -> f64 {
    1e-14_f64.max(m as f64 * f64::EPSILON)
}

/// Returns the working matrix with at least as many rows as columns and
/// whether it is the conjugate transpose of the input.
fn oriented(a: &CMatrix) -> (CMatrix, bool) {
    if a.rows() >= a.cols() {
        (a.clone(), false)
    } else {
        (a.conj_transpose(), true)
    }
}

fn columns(a: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| a[(i, j)]).collect())
        .collect()
}

pub fn singular_values(a: &CMatrix) -> Result<SvdResult> {
    let (w, _) = oriented(a);
    let mut jac = Jacobi {
        cols: columns(&w),
        v: None,
    };
    jac.run(tolerance(w.rows()))?;
    let mut s: Vec<f64> = jac.cols.iter().map(|c| norm_sqr(c).sqrt()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(SvdResult { singular_values: s })
}

pub fn svd(a: &CMatrix) -> Result<Svd> {
    let (w, transposed) = oriented(a);
    let (m, n) = (w.rows(), w.cols());
    let mut v0 = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (j, col) in v0.iter_mut().enumerate() {
        col[j] = Complex64::new(1.0, 0.0);
    }
    let mut jac = Jacobi {
        cols: columns(&w),
        v: Some(v0),
    };
    jac.run(tolerance(m))?;
    let norms: Vec<f64> = jac.cols.iter().map(|c| norm_sqr(c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let vcols = jac.v.expect("accumulated");
    let mut u = CMatrix::zeros(m, n);
    let mut v = CMatrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let sigma = norms[j];
        s.push(sigma);
        for i in 0..m {
            u[(i, k)] = if sigma > 0.0 {
                jac.cols[j][i] / sigma
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        for i in 0..n {
            v[(i, k)] = vcols[j][i];
        }
    }
    Ok(if transposed {
        // A^H = U S V^H  =>  A = V S U^H
        Svd {
            u: v,
            singular_values: s,
            v: u,
        }
    } else {
        Svd {
            u,
            singular_values: s,
            v,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_moduli() {
        let a = CMatrix::from_diag(&[Complex64::new(3.0, 0.0), Complex64::new(0.0, -4.0)]);
        let s = singular_values(&a).unwrap().singular_values;
        assert!((s[0] - 4.0).abs() < 1e-15 && (s[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn graded_two_by_two() {
        // Gram matrix [[0.01, 1], [1, 101]]: s^2 = (101.01 +- sqrt(101.01^2 - 0.04)) / 2.
        let a = CMatrix::from_real_rows(&[[0.1, 10.0], [0.0, 1.0]]);
        let s = singular_values(&a).unwrap().singular_values;
        let tr: f64 = 101.01;
        let disc = (tr * tr - 4.0 * 0.01_f64).sqrt();
        let big = ((tr + disc) / 2.0).sqrt();
        let small = 0.1 / big;
        assert!((s[0] - big).abs() < 1e-12 * big);
        assert!((s[1] - small).abs() < 1e-12 * small);
        assert!((s[0] - 10.05037).abs() < 1e-5);
        assert!((s[1] - 0.00995).abs() < 1e-5);
        assert!((s[0] * s[1] - 0.1).abs() < 1e-14);
    }

    #[test]
    fn rank_deficient_converges() {
        let a = CMatrix::from_real_rows(&[[-1.99, 0.0, -1.0], [0.0, -0.89, 1.0], [0.0, 0.0, 0.0]]);
        let s = singular_values(&a).unwrap();
        assert!(s.smallest() < 1e-14);
        let frob: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum();
        let sum: f64 = s.singular_values.iter().map(|x| x * x).sum();
        assert!((frob - sum).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix() {
        let s = singular_values(&CMatrix::zeros(3, 2))
            .unwrap()
            .singular_values;
        assert_eq!(s, vec![0.0, 0.0]);
    }

    #[test]
    fn wide_matrix_reconstructs() {
        let a = CMatrix::from_fn(2, 4, |i, j| {
            Complex64::new((i + 2 * j) as f64, (i * j) as f64 - 1.0)
        });
        let d = svd(&a).unwrap();
        assert_eq!(d.u.rows(), 2);
        assert_eq!(d.v.rows(), 4);
        let s = CMatrix::from_real_diag(&d.singular_values);
        let rec =
            d.u.matmul(&s)
                .unwrap()
                .matmul(&d.v.conj_transpose())
                .unwrap();
        for (x, y) in rec.as_slice().iter().zip(a.as_slice()) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
