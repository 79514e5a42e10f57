//! Distance to instability (smallest perturbation pushing an eigenvalue
//! into the open right half-plane) and distance to singularity.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, operator_norm, svd, CMatrix, Lu, NormKind};
use crate::spectra::{sample, spectral_deviation};

/// Controls the imaginary-axis search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Points in the coarse scan.
    pub scan_points: usize,
    /// Target width of the golden-section bracket (relative to `max(1, |omega|)`).
    pub tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            scan_points: 2001,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstabilityReport {
    pub stable: bool,
    /// `min_omega 1 / ||(A - i omega I)^-1||`
    pub d1_estimate: f64,
    pub argmin_omega: f64,
    /// `g M(A) / 2`
    pub lower_bound: f64,
    /// `2 ||A|| g / (1 - g)`
    pub upper_bound: f64,
    /// Minimum of `kappa` over the closed right half-plane, attained on the axis.
    pub g: f64,
    pub g_omega: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularityReport {
    pub d2: f64,
    pub epsilon_star: f64,
    pub witness_norm: f64,
    /// `A` is a multiple of the identity.
    pub scalar_matrix: bool,
}

/// `true` iff every eigenvalue has real part `<= -margin`.
pub fn is_stable(a: &CMatrix, margin: f64) -> Result<bool> {
    let eig = eigenvalues(a)?.require_converged()?;
    Ok(eig.iter().all(|l| l.re <= -margin))
}

fn golden_min(
    f: &impl Fn(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol * lo.abs().max(hi.abs()).max(1.0) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Minimizes `f` over `omega` given candidate abscissae: picks the best
/// candidate (lowest index on ties) and refines within one step on each side.
fn axis_min(
    f: impl Fn(f64) -> Result<f64>,
    candidates: &[f64],
    step: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let mut best = (candidates[0], f(candidates[0])?);
    for &w in &candidates[1..] {
        let v = f(w)?;
        if v < best.1 {
            best = (w, v);
        }
    }
    if best.1 == 0.0 {
        return Ok(best);
    }
    let refined = golden_min(&f, best.0 - step, best.0 + step, tol)?;
    Ok(if refined.1 < best.1 { refined } else { best })
}

/// Distance to instability by an imaginary-axis search, plus the two
/// closed-form bounds in terms of `g = min kappa(i omega, A)`.
pub fn distance_to_instability(
    a: &CMatrix,
    norm: NormKind,
    search: SearchOptions,
) -> Result<InstabilityReport> {
    let spectrum = eigenvalues(a)?.require_converged()?;
    let max_real = spectrum
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_real > 0.0 {
        return Err(Error::NotStable { max_real });
    }
    if search.scan_points < 2 || search.tol.is_nan() || search.tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "invalid search options {search:?}"
        )));
    }

    let a_norm = operator_norm(a, norm);
    let at = |w: f64| sample(a, Complex64::new(0.0, w), norm);
    let kappa1_at = |w: f64| at(w).map(|s| s.kappa1);
    let kappa_at = |w: f64| at(w).map(|s| s.kappa);

    // 1/||(A - i w I)^-1|| >= |w| - ||A||, so nothing beyond ||A|| + f(0) can
    // beat the value at the origin.
    let radius = (1.25 * a_norm)
        .max(a_norm + kappa1_at(0.0)?)
        .max(f64::MIN_POSITIVE);
    let n = search.scan_points;
    let step = 2.0 * radius / (n - 1) as f64;
    let mut candidates: Vec<f64> = (0..n).map(|k| -radius + k as f64 * step).collect();
    candidates.extend(spectrum.iter().map(|l| l.im).filter(|w| w.abs() <= radius));

    let (mut omega, mut d1) = axis_min(kappa1_at, &candidates, step, search.tol)?;
    let (mut g_omega, mut g) = axis_min(kappa_at, &candidates, step, search.tol)?;

    // keep the two minimizations mutually consistent
    let at_omega = at(omega)?;
    if at_omega.kappa < g {
        g = at_omega.kappa;
        g_omega = omega;
    }
    let at_g = at(g_omega)?;
    if at_g.kappa1 < d1 {
        d1 = at_g.kappa1;
        omega = g_omega;
    }

    let m = spectral_deviation(a, norm)?;
    let upper_bound = if g < 1.0 {
        2.0 * a_norm * g / (1.0 - g)
    } else {
        f64::INFINITY
    };
    Ok(InstabilityReport {
        stable: true,
        d1_estimate: d1,
        argmin_omega: omega,
        lower_bound: g * m / 2.0,
        upper_bound,
        g,
        g_omega,
    })
}

/// `d2(A) = 1 / ||A^-1||`.
pub fn distance_to_singularity(a: &CMatrix, norm: NormKind) -> Result<SingularityReport> {
    Lu::factor(a)?;
    let s = sample(a, Complex64::new(0.0, 0.0), norm)?;
    if s.is_singular() {
        return Err(Error::SingularMatrix {
            pivot: 0.0,
            tol: 0.0,
        });
    }
    let d00 = a[(0, 0)];
    let scalar_matrix = (0..a.rows()).all(|i| {
        (0..a.cols()).all(|j| {
            a[(i, j)]
                == if i == j {
                    d00
                } else {
                    Complex64::new(0.0, 0.0)
                }
        })
    });
    Ok(SingularityReport {
        d2: s.kappa1,
        epsilon_star: s.kappa1,
        witness_norm: operator_norm(a, norm),
        scalar_matrix,
    })
}

/// Rank-one `E = -s_min u v^H` of spectral norm `s_min(B)` making `B + E`
/// singular.
fn rank_one_annihilator(b: &CMatrix) -> Result<CMatrix> {
    let (sigma, u, v) = svd(b)?.smallest_pair();
    Ok(CMatrix::outer(&u, &v).scaled(Complex64::new(-sigma, 0.0)))
}

/// Spectral-norm optimal perturbation making `A + E` singular.
pub fn singularity_witness(a: &CMatrix) -> Result<CMatrix> {
    a.ensure_square()?;
    rank_one_annihilator(a)
}

/// Perturbation of spectral norm `s_min(A - i omega I)` that places
/// `i omega` in the spectrum of `A + E`.
pub fn instability_witness(a: &CMatrix, omega: f64) -> Result<CMatrix> {
    a.ensure_square()?;
    rank_one_annihilator(&a.shifted(Complex64::new(0.0, omega)))
}
