//! Relative error of the solution of `(A - zI) x = y` under perturbations
//! of `y`, of `A`, or of both, together with the certified bounds derived
//! from `kappa` and `kappa1`.
//!
//! `dx` is solved from its own equation, e.g. `(A + dA - zI) dx = dy - dA x`,
//! rather than by differencing two solutions, so small perturbations keep
//! their relative accuracy.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{lu_solve, operator_norm, vector_norm, CMatrix, CVector, Lu, NormKind};
use crate::spectra::{sample, spectral_deviation, ResolventSample};

/// Relative slack when comparing an observed ratio with its bound.
pub const BOUND_SLACK: f64 = 1e-12;

/// A bound that may not be available for the instance at hand.
#[derive(Debug, Clone, PartialEq)]
pub enum Bound {
    Value(f64),
    NotApplicable(String),
}

impl Bound {
    pub fn value(&self) -> Option<f64> {
        match self {
            Bound::Value(v) => Some(*v),
            Bound::NotApplicable(_) => None,
        }
    }

    /// `true` when the bound is present and dominates `observed`.
    pub fn dominates(&self, observed: f64) -> bool {
        self.value().is_some_and(|b| within(observed, b))
    }

    /// Missing bounds are not counted against the theorem.
    fn dominates_or_absent(&self, observed: f64) -> bool {
        self.value().is_none_or(|b| within(observed, b))
    }
}

#[inline]
fn within(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + BOUND_SLACK * rhs.abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhsPerturbReport {
    pub x: CVector,
    pub delta_x: CVector,
    /// `||dx|| / ||x||`
    pub rel_observed: f64,
    /// `||dy|| / ||y||`
    pub rel_rhs: f64,
    pub kappa: f64,
    /// `kappa * rel_rhs`
    pub lower: f64,
    /// `rel_rhs / kappa`
    pub upper: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPerturbReport {
    pub x: CVector,
    pub delta_x: CVector,
    /// `||dx|| / ||x||`
    pub ratio_x: f64,
    /// `||dx|| / ||x + dx||`
    pub ratio_xpdx: f64,
    /// `||dA|| / kappa1(z, A + dA)`
    pub bound_pseudo_x: Bound,
    /// `||dA|| / kappa1(z, A)`
    pub bound_pseudo_xpdx: Bound,
    /// `2 ||dA|| / (M1 kappa(z, A + dA))`, `M1` the spectral deviation of `A + dA`
    pub bound_cond_x: Bound,
    /// `2 ||dA|| / (M2 kappa(z, A))`, `M2` the spectral deviation of `A`
    pub bound_cond_xpdx: Bound,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointPerturbReport {
    pub x: CVector,
    pub delta_x: CVector,
    pub rel_observed: f64,
    /// `||(A - zI)^-1 dA||`
    pub contraction: f64,
    pub bound: Bound,
    pub holds: bool,
}

fn singular_shift(z: Complex64) -> Error {
    Error::SingularShift { re: z.re, im: z.im }
}

fn factor_shifted(a: &CMatrix, z: Complex64) -> Result<Lu> {
    a.ensure_square()?;
    Lu::factor(&a.shifted(z)).map_err(|e| match e {
        Error::SingularMatrix { .. } => singular_shift(z),
        other => other,
    })
}

fn regular_sample(a: &CMatrix, z: Complex64, norm: NormKind) -> Result<ResolventSample> {
    let s = sample(a, z, norm)?;
    if s.is_singular() {
        Err(singular_shift(z))
    } else {
        Ok(s)
    }
}

fn check_rhs(y: &CVector) -> Result<()> {
    if y.is_zero() {
        Err(Error::ZeroRhs)
    } else {
        Ok(())
    }
}

/// `x = (A - zI)^-1 y`.
pub fn solve_shifted(a: &CMatrix, z: Complex64, y: &CVector) -> Result<CVector> {
    lu_solve(&a.shifted(z), y).map_err(|e| match e {
        Error::SingularMatrix { .. } => singular_shift(z),
        other => other,
    })
}

/// Perturbation of the right-hand side only: `(A - zI)(x + dx) = y + dy`.
pub fn perturb_rhs(
    a: &CMatrix,
    z: Complex64,
    y: &CVector,
    dy: &CVector,
    norm: NormKind,
) -> Result<RhsPerturbReport> {
    check_rhs(y)?;
    let lu = factor_shifted(a, z)?;
    let x = lu.solve(y)?;
    let delta_x = lu.solve(dy)?;
    let s = regular_sample(a, z, norm)?;

    let rel_observed = vector_norm(&delta_x, norm) / vector_norm(&x, norm);
    let rel_rhs = vector_norm(dy, norm) / vector_norm(y, norm);
    let lower = s.kappa * rel_rhs;
    let upper = rel_rhs / s.kappa;
    let holds = within(lower, rel_observed) && within(rel_observed, upper);
    Ok(RhsPerturbReport {
        x,
        delta_x,
        rel_observed,
        rel_rhs,
        kappa: s.kappa,
        lower,
        upper,
        holds,
    })
}

fn pseudo_bound(da_norm: f64, s: &ResolventSample) -> Bound {
    if s.kappa1 > 0.0 {
        Bound::Value(da_norm / s.kappa1)
    } else {
        Bound::NotApplicable(format!("kappa1 vanishes at z = {}", s.z))
    }
}

fn cond_bound(da_norm: f64, s: &ResolventSample, deviation: Result<f64>) -> Bound {
    match deviation {
        Err(e) => Bound::NotApplicable(format!("spectral deviation unavailable: {e}")),
        Ok(0.0) => Bound::NotApplicable("spectral deviation is zero".into()),
        Ok(_) if s.kappa == 0.0 => Bound::NotApplicable(format!("kappa vanishes at z = {}", s.z)),
        Ok(m) => Bound::Value(2.0 * da_norm / (m * s.kappa)),
    }
}

/// Perturbation of the operator only: `(A + dA - zI)(x + dx) = y`.
pub fn perturb_operator(
    a: &CMatrix,
    z: Complex64,
    y: &CVector,
    da: &CMatrix,
    norm: NormKind,
) -> Result<OperatorPerturbReport> {
    check_rhs(y)?;
    let a_pert = a.add(da)?;
    let x = factor_shifted(a, z)?.solve(y)?;
    let delta_x =
        factor_shifted(&a_pert, z)?.solve(&da.matvec(&x)?.scaled(Complex64::new(-1.0, 0.0)))?;
    let x_pert = x.add(&delta_x)?;

    let dx_norm = vector_norm(&delta_x, norm);
    let ratio_x = dx_norm / vector_norm(&x, norm);
    let ratio_xpdx = dx_norm / vector_norm(&x_pert, norm);

    let da_norm = operator_norm(da, norm);
    let s = sample(a, z, norm)?;
    let s_pert = sample(&a_pert, z, norm)?;
    let bound_pseudo_x = pseudo_bound(da_norm, &s_pert);
    let bound_pseudo_xpdx = pseudo_bound(da_norm, &s);
    let bound_cond_x = cond_bound(da_norm, &s_pert, spectral_deviation(&a_pert, norm));
    let bound_cond_xpdx = cond_bound(da_norm, &s, spectral_deviation(a, norm));

    let holds = [&bound_pseudo_x, &bound_cond_x]
        .iter()
        .all(|b| b.dominates_or_absent(ratio_x))
        && [&bound_pseudo_xpdx, &bound_cond_xpdx]
            .iter()
            .all(|b| b.dominates_or_absent(ratio_xpdx));
    Ok(OperatorPerturbReport {
        x,
        delta_x,
        ratio_x,
        ratio_xpdx,
        bound_pseudo_x,
        bound_pseudo_xpdx,
        bound_cond_x,
        bound_cond_xpdx,
        holds,
    })
}

/// Perturbation of both: `(A + dA - zI)(x + dx) = y + dy`.
pub fn perturb_joint(
    a: &CMatrix,
    z: Complex64,
    y: &CVector,
    da: &CMatrix,
    dy: &CVector,
    norm: NormKind,
) -> Result<JointPerturbReport> {
    check_rhs(y)?;
    let a_pert = a.add(da)?;
    let lu = factor_shifted(a, z)?;
    let x = lu.solve(y)?;
    let delta_x = factor_shifted(&a_pert, z)?.solve(&dy.sub(&da.matvec(&x)?)?)?;
    let rel_observed = vector_norm(&delta_x, norm) / vector_norm(&x, norm);

    let s = regular_sample(a, z, norm)?;
    let contraction = operator_norm(&lu.inverse().matmul(da)?, norm);
    let bound = if contraction < 1.0 {
        let rel_rhs = vector_norm(dy, norm) / vector_norm(y, norm);
        let rel_op = operator_norm(da, norm) / s.shifted_norm;
        Bound::Value(1.0 / (s.kappa * (1.0 - contraction)) * (rel_rhs + rel_op))
    } else {
        Bound::NotApplicable(format!("||(A - zI)^-1 dA|| = {contraction} is not below 1"))
    };
    let holds = bound.dominates_or_absent(rel_observed);
    Ok(JointPerturbReport {
        x,
        delta_x,
        rel_observed,
        contraction,
        bound,
        holds,
    })
}
