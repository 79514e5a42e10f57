//! Pointwise and grid evaluation of resolvent quantities: the
//! pseudospectrum indicator `kappa1(z) = 1 / ||(A - zI)^-1||` and the
//! condition pseudospectrum indicator `kappa(z) = 1 / (||A - zI|| ||(A - zI)^-1||)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, operator_norm, singular_values, CMatrix, Lu, NormKind};

/// Relative allowance applied to the target-set threshold in inclusion checks.
pub const INCLUSION_ROUNDOFF: f64 = 1e-10;

/// All resolvent diagnostics at one point of the complex plane.
///
/// `resolvent_norm` and `cond` are `+inf` when `A - zI` is numerically
/// singular; `kappa` and `kappa1` are then 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventSample {
    pub z: Complex64,
    pub shifted_norm: f64,
    pub resolvent_norm: f64,
    pub cond: f64,
    pub kappa: f64,
    pub kappa1: f64,
}

impl ResolventSample {
    fn singular(z: Complex64, shifted_norm: f64) -> Self {
        Self {
            z,
            shifted_norm,
            resolvent_norm: f64::INFINITY,
            cond: f64::INFINITY,
            kappa: 0.0,
            kappa1: 0.0,
        }
    }

    fn regular(z: Complex64, shifted_norm: f64, resolvent_norm: f64) -> Self {
        // ||B|| ||B^-1|| >= 1; the clamp only removes last-bit roundoff.
        let cond = (shifted_norm * resolvent_norm).max(1.0);
        Self {
            z,
            shifted_norm,
            resolvent_norm,
            cond,
            kappa: 1.0 / cond,
            kappa1: 1.0 / resolvent_norm,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.resolvent_norm.is_infinite()
    }

    pub fn value(&self, quantity: Quantity) -> f64 {
        match quantity {
            Quantity::Kappa => self.kappa,
            Quantity::Kappa1 => self.kappa1,
            Quantity::Cond => self.cond,
            Quantity::ResolventNorm => self.resolvent_norm,
        }
    }
}

/// Evaluates `||A - zI||` and `||(A - zI)^-1||` under `norm`.
///
/// Under the spectral norm both come from one SVD of `A - zI`; the shift is
/// treated as singular when `s_min < n eps s_max`. The other norms use the
/// explicit inverse and the LU pivot test.
pub fn sample(a: &CMatrix, z: Complex64, norm: NormKind) -> Result<ResolventSample> {
    let n = a.ensure_square()?;
    let shifted = a.shifted(z);
    match norm {
        NormKind::Spectral => {
            let s = singular_values(&shifted)?;
            let (smax, smin) = (s.largest(), s.smallest());
            if smax == 0.0 || smin < n as f64 * f64::EPSILON * smax {
                Ok(ResolventSample::singular(z, smax))
            } else {
                Ok(ResolventSample::regular(z, smax, 1.0 / smin))
            }
        }
        NormKind::One | NormKind::Infinity => {
            let shifted_norm = operator_norm(&shifted, norm);
            match Lu::factor(&shifted) {
                Ok(lu) => {
                    let inv = lu.inverse();
                    Ok(ResolventSample::regular(
                        z,
                        shifted_norm,
                        operator_norm(&inv, norm),
                    ))
                }
                Err(Error::SingularMatrix { .. }) => Ok(ResolventSample::singular(z, shifted_norm)),
                Err(e) => Err(e),
            }
        }
    }
}

pub fn kappa(a: &CMatrix, z: Complex64, norm: NormKind) -> Result<f64> {
    Ok(sample(a, z, norm)?.kappa)
}

pub fn kappa1(a: &CMatrix, z: Complex64, norm: NormKind) -> Result<f64> {
    Ok(sample(a, z, norm)?.kappa1)
}

fn check_positive(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(eps))
    }
}

/// `z` lies in the eps-pseudospectrum iff `||(A - zI)^-1|| >= 1/eps`
/// (or `z` is an eigenvalue), i.e. iff `kappa1(z) <= eps`.
pub fn in_pseudospectrum(a: &CMatrix, z: Complex64, eps: f64, norm: NormKind) -> Result<bool> {
    check_positive(eps)?;
    Ok(kappa1(a, z, norm)? <= eps)
}

/// `z` lies in the eps-condition pseudospectrum iff `kappa(z) <= eps`.
/// Valid for `0 < eps <= 1`; at `eps = 1` the set is the whole plane.
pub fn in_condition_pseudospectrum(
    a: &CMatrix,
    z: Complex64,
    eps: f64,
    norm: NormKind,
) -> Result<bool> {
    check_positive(eps)?;
    if eps > 1.0 {
        return Err(Error::InvalidEpsilon(eps));
    }
    if eps == 1.0 {
        return Ok(true);
    }
    Ok(kappa(a, z, norm)? <= eps)
}

/// `max ||A - lambda I||` over the computed eigenvalues.
pub fn spectral_deviation(a: &CMatrix, norm: NormKind) -> Result<f64> {
    let eig = eigenvalues(a)?.require_converged()?;
    Ok(eig
        .iter()
        .map(|&l| operator_norm(&a.shifted(l), norm))
        .fold(0.0, f64::max))
}

/// `(1 + eps) / (1 - eps) ||A||`, a radius containing the eps-condition
/// pseudospectrum.
pub fn condspec_radius_bound(a: &CMatrix, eps: f64, norm: NormKind) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidEpsilon(eps));
    }
    Ok((1.0 + eps) / (1.0 - eps) * operator_norm(a, norm))
}

/// Rectangular window of the complex plane sampled at `nx * ny` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(
        re_min: f64,
        re_max: f64,
        im_min: f64,
        im_max: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Self> {
        let finite = [re_min, re_max, im_min, im_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || re_min >= re_max || im_min >= im_max {
            return Err(Error::InvalidArgument(format!(
                "invalid window [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2x2 nodes, got {nx}x{ny}"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
            nx,
            ny,
        })
    }

    /// Square window `[-r, r] x [-r, r]` centred at `c`.
    pub fn centered(c: Complex64, radius: f64, nx: usize, ny: usize) -> Result<Self> {
        Self::new(
            c.re - radius,
            c.re + radius,
            c.im - radius,
            c.im + radius,
            nx,
            ny,
        )
    }

    pub fn d_re(&self) -> f64 {
        (self.re_max - self.re_min) / (self.nx - 1) as f64
    }

    pub fn d_im(&self) -> f64 {
        (self.im_max - self.im_min) / (self.ny - 1) as f64
    }

    pub fn re_at(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            self.re_max
        } else {
            self.re_min + i as f64 * self.d_re()
        }
    }

    pub fn im_at(&self, j: usize) -> f64 {
        if j + 1 == self.ny {
            self.im_max
        } else {
            self.im_min + j as f64 * self.d_im()
        }
    }

    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.re_at(i), self.im_at(j))
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Nodes in storage order: imaginary part outer, real part inner.
    pub fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| self.node(i, j)))
    }
}

/// Which resolvent quantity a field holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Kappa,
    Kappa1,
    Cond,
    ResolventNorm,
}

impl Quantity {
    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::Kappa => "kappa",
            Quantity::Kappa1 => "kappa1",
            Quantity::Cond => "cond",
            Quantity::ResolventNorm => "resolvent_norm",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kappa" => Ok(Quantity::Kappa),
            "kappa1" => Ok(Quantity::Kappa1),
            "cond" => Ok(Quantity::Cond),
            "resolvent_norm" => Ok(Quantity::ResolventNorm),
            other => Err(Error::InvalidArgument(format!(
                "unknown quantity `{other}`"
            ))),
        }
    }
}

/// One nonnegative value per grid node, `values[j * nx + i]` at `grid.node(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: GridSpec,
    pub quantity: Quantity,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: GridSpec, quantity: Quantity, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} grid needs {} values, got {}",
                grid.nx,
                grid.ny,
                grid.len(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| v.is_nan() || **v < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "field value {v} is negative or NaN"
            )));
        }
        Ok(Self {
            grid,
            quantity,
            values,
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx + i]
    }
}

/// Samples every grid node (in parallel, assembled in storage order).
pub fn grid_samples(a: &CMatrix, grid: &GridSpec, norm: NormKind) -> Result<Vec<ResolventSample>> {
    a.ensure_square()?;
    let nodes: Vec<Complex64> = grid.nodes().collect();
    nodes.into_par_iter().map(|z| sample(a, z, norm)).collect()
}

pub fn grid_eval(
    a: &CMatrix,
    grid: &GridSpec,
    quantity: Quantity,
    norm: NormKind,
) -> Result<ScalarField> {
    let values = grid_samples(a, grid, norm)?
        .iter()
        .map(|s| s.value(quantity))
        .collect();
    ScalarField::new(*grid, quantity, values)
}

/// The three set relations between pseudospectra and condition
/// pseudospectra that are checked node by node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lemma {
    /// `Lambda_eps(A) ⊆ sigma_{2 eps / M(A)}(A)`.
    PseudoWithinCondition,
    /// `sigma_{eps / (eps + 2||A||)}(A) ⊆ Lambda_eps(A)`.
    ConditionWithinPseudo,
    /// `0 ∉ Lambda_eps(A)  <=>  0 ∉ sigma_{eps / ||A||}(A)`.
    OriginEquivalence,
}

impl Lemma {
    pub const ALL: [Lemma; 3] = [
        Lemma::PseudoWithinCondition,
        Lemma::ConditionWithinPseudo,
        Lemma::OriginEquivalence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Lemma::PseudoWithinCondition => "pseudo_within_condition",
            Lemma::ConditionWithinPseudo => "condition_within_pseudo",
            Lemma::OriginEquivalence => "origin_equivalence",
        }
    }
}

impl FromStr for Lemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown lemma `{s}`")))
    }
}

/// Outcome of a falsification search for one set relation.
#[derive(Debug, Clone, PartialEq)]
pub struct InclusionCertificate {
    pub lemma: Lemma,
    pub epsilon: f64,
    pub checked_points: usize,
    pub violations: Vec<Complex64>,
    /// The target set is the whole plane, so the check is trivially true.
    pub vacuous: bool,
}

impl InclusionCertificate {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Matrix-level constants needed by the inclusion checks.
#[derive(Debug, Clone, Copy)]
pub struct InclusionContext {
    pub norm: NormKind,
    pub matrix_norm: f64,
    pub spectral_deviation: f64,
}

impl InclusionContext {
    pub fn new(a: &CMatrix, norm: NormKind) -> Result<Self> {
        Ok(Self {
            norm,
            matrix_norm: operator_norm(a, norm),
            spectral_deviation: spectral_deviation(a, norm)?,
        })
    }
}

/// `value <= level` with the target-side allowance.
fn inside_loose(value: f64, level: f64) -> bool {
    value <= level * (1.0 + INCLUSION_ROUNDOFF)
}

fn inside_strict(value: f64, level: f64) -> bool {
    value <= level * (1.0 - INCLUSION_ROUNDOFF)
}

/// Checks one relation against precomputed samples. For
/// [`Lemma::OriginEquivalence`] only samples at `z = 0` are tested.
pub fn certify(
    ctx: &InclusionContext,
    lemma: Lemma,
    eps: f64,
    samples: &[ResolventSample],
) -> Result<InclusionCertificate> {
    check_positive(eps)?;
    let mut violations = Vec::new();
    let mut checked = 0;
    let mut vacuous = false;
    match lemma {
        Lemma::PseudoWithinCondition => {
            let level = if ctx.spectral_deviation > 0.0 {
                2.0 * eps / ctx.spectral_deviation
            } else {
                f64::INFINITY
            };
            vacuous = level >= 1.0;
            for s in samples {
                checked += 1;
                if !vacuous && inside_strict(s.kappa1, eps) && !inside_loose(s.kappa, level) {
                    violations.push(s.z);
                }
            }
        }
        Lemma::ConditionWithinPseudo => {
            let level = eps / (eps + 2.0 * ctx.matrix_norm);
            // with ||A|| = 0 the source set is the whole plane and the
            // containment radius degenerates
            vacuous = level >= 1.0;
            for s in samples {
                checked += 1;
                if !vacuous && inside_strict(s.kappa, level) && !inside_loose(s.kappa1, eps) {
                    violations.push(s.z);
                }
            }
        }
        Lemma::OriginEquivalence => {
            let level = if ctx.matrix_norm > 0.0 {
                eps / ctx.matrix_norm
            } else {
                f64::INFINITY
            };
            for s in samples.iter().filter(|s| s.z == Complex64::new(0.0, 0.0)) {
                checked += 1;
                let in_cond = |strict: bool| {
                    level >= 1.0
                        || if strict {
                            inside_strict(s.kappa, level)
                        } else {
                            inside_loose(s.kappa, level)
                        }
                };
                let forward = inside_strict(s.kappa1, eps) && !in_cond(false);
                let backward = in_cond(true) && !inside_loose(s.kappa1, eps);
                if forward || backward {
                    violations.push(s.z);
                }
            }
        }
    }
    Ok(InclusionCertificate {
        lemma,
        epsilon: eps,
        checked_points: checked,
        violations,
        vacuous,
    })
}

/// Grid-based falsification search for `lemma` at `eps`.
pub fn check_inclusion(
    a: &CMatrix,
    lemma: Lemma,
    eps: f64,
    grid: &GridSpec,
    norm: NormKind,
) -> Result<InclusionCertificate> {
    check_positive(eps)?;
    let ctx = InclusionContext::new(a, norm)?;
    let samples = match lemma {
        Lemma::OriginEquivalence => vec![sample(a, Complex64::new(0.0, 0.0), norm)?],
        _ => grid_samples(a, grid, norm)?,
    };
    certify(&ctx, lemma, eps, &samples)
}

/// All three relations at every `eps`, sharing one pass over the grid.
pub fn check_inclusions(
    a: &CMatrix,
    epsilons: &[f64],
    grid: &GridSpec,
    norm: NormKind,
) -> Result<Vec<InclusionCertificate>> {
    let ctx = InclusionContext::new(a, norm)?;
    let samples = grid_samples(a, grid, norm)?;
    let origin = [sample(a, Complex64::new(0.0, 0.0), norm)?];
    let mut out = Vec::with_capacity(epsilons.len() * 3);
    for &eps in epsilons {
        for lemma in Lemma::ALL {
            let s: &[ResolventSample] = if lemma == Lemma::OriginEquivalence {
                &origin
            } else {
                &samples
            };
            out.push(certify(&ctx, lemma, eps, s)?);
        }
    }
    Ok(out)
}
