//! Eigenvalues of a general complex matrix: balancing, Householder reduction
//! to upper Hessenberg form, then single-shift complex QR with deflation.

use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{Error, Result};

const EXCEPTIONAL_EVERY: usize = 10;

/// Eigenvalues with algebraic multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<Complex64>,
    pub converged: bool,
    pub iterations: usize,
}

impl SpectrumResult {
    /// The eigenvalues, or `NoConvergence` if the iteration cap was hit.
    pub fn require_converged(self) -> Result<Vec<Complex64>> {
        if self.converged {
            Ok(self.eigenvalues)
        } else {
            Err(Error::NoConvergence {
                iterations: self.iterations,
            })
        }
    }

    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| l.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[inline]
fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity scaling by powers of two to even out row and column
/// norms.
fn balance(h: &mut CMatrix) {
    let n = h.rows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs1(h[(j, i)]);
                    r += abs1(h[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / 2.0;
            while c < g {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while c > g {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    h[(i, j)] *= inv;
                    h[(j, i)] *= f;
                }
            }
        }
    }
}

fn hessenberg(h: &mut CMatrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    for k in 0..n - 2 {
        let len = n - k - 1;
        let xnorm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        for (l, i) in (k + 1..n).enumerate() {
            v[l] = h[(i, k)];
        }
        v[0] -= alpha;
        let vnorm = v[..len].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for c in v[..len].iter_mut() {
            *c /= vnorm;
        }
        // H <- (I - 2 v v^H) H
        for j in k..n {
            let s: Complex64 = (0..len).map(|l| v[l].conj() * h[(k + 1 + l, j)]).sum();
            for l in 0..len {
                h[(k + 1 + l, j)] -= v[l] * s * 2.0;
            }
        }
        // H <- H (I - 2 v v^H)
        for i in 0..n {
            let s: Complex64 = (0..len).map(|l| h[(i, k + 1 + l)] * v[l]).sum();
            for l in 0..len {
                h[(i, k + 1 + l)] -= s * v[l].conj() * 2.0;
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = zero;
        }
    }
}

fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    (half_tr + root, half_tr - root)
}

fn wilkinson_shift(h: &CMatrix, hi: usize) -> Complex64 {
    let (m1, m2) = eig2(
        h[(hi - 1, hi - 1)],
        h[(hi - 1, hi)],
        h[(hi, hi - 1)],
        h[(hi, hi)],
    );
    let d = h[(hi, hi)];
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Givens rotation `G = [[c, s], [-conj(s), c]]` with `G [a; b] = [r; 0]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

/// One explicit shifted QR step `H <- R Q + mu I` on the window `lo..=hi`.
fn qr_step(h: &mut CMatrix, lo: usize, hi: usize, mu: Complex64, rot: &mut Vec<(f64, Complex64)>) {
    for k in lo..=hi {
        h[(k, k)] -= mu;
    }
    rot.clear();
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = y * c - s.conj() * x;
        }
        rot.push((c, s));
    }
    for (off, &(c, s)) in rot.iter().enumerate() {
        let k = lo + off;
        for i in lo..=(k + 2).min(hi) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + y * s.conj();
            h[(i, k + 1)] = y * c - x * s;
        }
    }
    for k in lo..=hi {
        h[(k, k)] += mu;
    }
}

/// Eigenvalues of a square complex matrix.
///
/// The QR iteration is capped at `100 n` steps; if the cap is hit the
/// result carries the diagonal of the partially reduced matrix and
/// `converged = false`.
pub fn eigenvalues(a: &CMatrix) -> Result<SpectrumResult> {
    let n = a.ensure_square()?;
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);

    let max_iter = 100 * n;
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let mut rot = Vec::with_capacity(n);
    let mut total = 0usize;
    let mut stalled = 0usize;
    let mut hi = n as isize - 1;
    let mut converged = true;

    while hi >= 0 {
        let u = hi as usize;
        if u == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        let mut lo = 0;
        for k in (1..=u).rev() {
            let mut scale = abs1(h[(k - 1, k - 1)]) + abs1(h[(k, k)]);
            if scale == 0.0 {
                scale = (lo..=u).map(|i| abs1(h[(i, i)])).sum::<f64>();
            }
            if abs1(h[(k, k - 1)]) <= f64::EPSILON * scale {
                h[(k, k - 1)] = Complex64::new(0.0, 0.0);
                lo = k;
                break;
            }
        }
        if lo == u {
            eig[u] = h[(u, u)];
            hi -= 1;
            stalled = 0;
            continue;
        }
        if lo + 1 == u {
            let (l1, l2) = eig2(h[(lo, lo)], h[(lo, u)], h[(u, lo)], h[(u, u)]);
            eig[lo] = l1;
            eig[u] = l2;
            hi -= 2;
            stalled = 0;
            continue;
        }
        if total >= max_iter {
            converged = false;
            for (k, e) in eig.iter_mut().enumerate().take(u + 1) {
                *e = h[(k, k)];
            }
            break;
        }
        total += 1;
        stalled += 1;
        let mu = if stalled.is_multiple_of(EXCEPTIONAL_EVERY) {
            h[(u, u)] + 0.75 * h[(u, u - 1)].re.abs()
        } else {
            wilkinson_shift(&h, u)
        };
        qr_step(&mut h, lo, u, mu, &mut rot);
    }

    Ok(SpectrumResult {
        eigenvalues: eig,
        converged,
        iterations: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn diagonal_and_symmetric() {
        let e = sorted(
            eigenvalues(&CMatrix::from_real_diag(&[1.1, 2.0]))
                .unwrap()
                .eigenvalues,
        );
        assert!((e[0] - 1.1).norm() < 1e-15 && (e[1] - 2.0).norm() < 1e-15);

        let swap = CMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let e = sorted(eigenvalues(&swap).unwrap().eigenvalues);
        assert!((e[0] + 1.0).norm() < 1e-14 && (e[1] - 1.0).norm() < 1e-14);
    }

    #[test]
    fn companion_style_four_by_four() {
        let a = CMatrix::from_real_rows(&[
            [1.0, -6.0, 7.0, -9.0],
            [1.0, -5.0, 0.0, 0.0],
            [0.0, 1.0, -5.0, 0.0],
            [0.0, 0.0, 1.0, -5.0],
        ]);
        let r = eigenvalues(&a).unwrap();
        assert!(r.converged);
        let want = [
            Complex64::new(-5.14371824, -1.17699479),
            Complex64::new(-5.14371824, 1.17699479),
            Complex64::new(-3.72221248, 0.0),
            Complex64::new(0.00964896, 0.0),
        ];
        for w in &want {
            let d = r
                .eigenvalues
                .iter()
                .map(|g| (g - w).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(d < 1e-7, "{w} not found in {:?}", r.eigenvalues);
        }
    }

    #[test]
    fn rotation_has_imaginary_pair() {
        let a = CMatrix::from_real_rows(&[[0.0, 1.0], [-1.0, 0.0]]);
        let e = sorted(eigenvalues(&a).unwrap().eigenvalues);
        assert!((e[0] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((e[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn jordan_block_and_one_by_one() {
        let j = CMatrix::from_real_rows(&[[2.0, 1.0, 0.0], [0.0, 2.0, 1.0], [0.0, 0.0, 2.0]]);
        for l in eigenvalues(&j).unwrap().eigenvalues {
            assert!((l - 2.0).norm() < 1e-12);
        }
        let s = CMatrix::from_diag(&[Complex64::new(-1.5, 0.5)]);
        assert_eq!(
            eigenvalues(&s).unwrap().eigenvalues,
            vec![Complex64::new(-1.5, 0.5)]
        );
    }

    #[test]
    fn unconverged_is_an_error_on_request() {
        let r = SpectrumResult {
            eigenvalues: vec![],
            converged: false,
            iterations: 7,
        };
        assert_eq!(
            r.require_converged(),
            Err(Error::NoConvergence { iterations: 7 })
        );
    }
}
