//! Nonlinear least-squares extraction of the coherence length (and optionally
//! the spin-orbit length, channel width and a background conductance) from
//! magnetoconductance traces.
//!
//! The optimizer is a damped Gauss-Newton iteration with Marquardt scaling:
//! `(JᵀJ + λ diag(JᵀJ)) δ = -Jᵀr`. λ is halved after an accepted step and
//! multiplied by four after a rejected one. Length parameters are iterated in
//! log space, so a step in them is a relative step.

mod model;
mod profile;
mod trace;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use thiserror::Error;

use crate::transport::{TransportError, TransportGeometry, WlModel, WlParams};
use model::{evaluate, Lengths};

pub use profile::{delta_chi2, lso_lower_bound, lso_profile, LsoBound, LsoProfile, LsoScan};
pub use trace::{field_grid, simulate_trace, MagnetoTrace, MIN_TRACE_POINTS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("invalid fit configuration: {0}")]
    InvalidConfig(String),
    #[error("insufficient field range: need a point with |B| <= 0.5 T and one with |B| >= 2 T")]
    InsufficientFieldRange,
    #[error("degenerate fit: {param} is unidentifiable ({reason})")]
    Degenerate { param: Param, reason: String },
    #[error("{0}")]
    Transport(#[from] TransportError),
    #[error("base-model fit did not converge after {0} iterations")]
    BaseNotConverged(usize),
}

/// Fit parameters. The contact spacing L is geometry and never fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    LPhi,
    LSo,
    Width,
    Background,
}

impl Param {
    pub const ALL: [Param; 4] = [Param::LPhi, Param::LSo, Param::Width, Param::Background];

    pub fn name(self) -> &'static str {
        match self {
            Param::LPhi => "l_phi",
            Param::LSo => "l_so",
            Param::Width => "W",
            Param::Background => "background_G",
        }
    }

    pub fn from_name(name: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.name() == name)
    }

    fn is_length(self) -> bool {
        !matches!(self, Param::Background)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub model: WlModel,
    /// Contact spacing L (m).
    pub contact_spacing: f64,
    /// Parameters held constant, with their values.
    pub fixed: BTreeMap<Param, f64>,
    /// Initial guesses for free parameters. A missing background guess is
    /// solved linearly from the data.
    pub initial: BTreeMap<Param, f64>,
    pub max_iterations: usize,
    /// Relative parameter step below which the fit is converged.
    pub convergence_tol: f64,
    pub damping_init: f64,
    /// Only points with |B| <= this value enter the fit.
    pub field_window: Option<f64>,
}

/// Channel width estimated from atom-probe composition maps.
pub const DEFAULT_CHANNEL_WIDTH: f64 = 20e-9;

impl FitConfig {
    /// Defaults: W fixed at 20 nm, l_phi starting at 100 nm, l_so at 500 nm.
    pub fn new(model: WlModel, contact_spacing: f64) -> Self {
        let mut fixed = BTreeMap::new();
        fixed.insert(Param::Width, DEFAULT_CHANNEL_WIDTH);
        let mut initial = BTreeMap::new();
        initial.insert(Param::LPhi, 100e-9);
        initial.insert(Param::LSo, 500e-9);
        Self {
            model,
            contact_spacing,
            fixed,
            initial,
            max_iterations: 200,
            convergence_tol: 1e-10,
            damping_init: 1e-3,
            field_window: None,
        }
    }

    pub fn fix(mut self, param: Param, value: f64) -> Self {
        self.initial.remove(&param);
        self.fixed.insert(param, value);
        self
    }

    pub fn free(mut self, param: Param, initial: f64) -> Self {
        self.fixed.remove(&param);
        self.initial.insert(param, initial);
        self
    }

    /// Free parameters in canonical order.
    pub fn free_params(&self) -> Vec<Param> {
        Param::ALL
            .into_iter()
            .filter(|p| !self.fixed.contains_key(p))
            .filter(|p| *p != Param::LSo || self.model == WlModel::SpinOrbit)
            .collect()
    }

    fn validate(&self) -> Result<(), FitError> {
        TransportGeometry::new(self.contact_spacing, 1.0)?;
        if self.max_iterations < 1 {
            return Err(FitError::InvalidConfig("max_iterations must be >= 1".into()));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(FitError::InvalidConfig("convergence_tol must be > 0".into()));
        }
        if !(self.damping_init > 0.0 && self.damping_init.is_finite()) {
            return Err(FitError::InvalidConfig("damping_init must be > 0".into()));
        }
        for (p, v) in self.fixed.iter().chain(self.initial.iter()) {
            if p.is_length() && !(v.is_finite() && *v > 0.0) {
                return Err(FitError::InvalidConfig(format!("{p} must be > 0, got {v}")));
            }
        }
        if let Some(w) = self.field_window {
            if !(w > 0.0) {
                return Err(FitError::InvalidConfig("field window must be > 0".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: WlModel,
    pub params: WlParams,
    /// Per-wire background conductance (S).
    pub background: f64,
    /// Free parameters, in the row/column order of `covariance`.
    pub free: Vec<Param>,
    pub std_errors: Vec<f64>,
    pub covariance: DMatrix<f64>,
    /// Residual sum of squares (S²).
    pub chi2: f64,
    pub n_points: usize,
    pub n_iterations: usize,
    pub converged: bool,
    /// chi2 after every accepted step, starting from the initial guess.
    pub chi2_history: Vec<f64>,
}

impl FitResult {
    pub fn value(&self, param: Param) -> Option<f64> {
        match param {
            Param::LPhi => Some(self.params.l_phi()),
            Param::LSo => self.params.l_so(),
            Param::Width => Some(self.params.geometry().channel_width()),
            Param::Background => Some(self.background),
        }
    }

    /// Standard error of a free parameter; `None` for fixed ones.
    pub fn std_error(&self, param: Param) -> Option<f64> {
        self.free
            .iter()
            .position(|p| *p == param)
            .map(|i| self.std_errors[i])
    }

    /// Per-wire model conductance `background + dG(B)`.
    pub fn predict(&self, field: f64) -> f64 {
        self.background + crate::transport::delta_g(self.model, field, &self.params)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Uncertainty {
    pub covariance: DMatrix<f64>,
    pub std_errors: Vec<f64>,
}

/// Linearized covariance `s² (JᵀJ)⁻¹` with `s² = Σr² / (n - p)`.
///
/// Columns are equilibrated before inversion, so parameters with very
/// different units (meters, siemens) do not lose precision.
pub fn parameter_uncertainty(
    jacobian: &DMatrix<f64>,
    residuals: &[f64],
) -> Result<Uncertainty, FitError> {
    let free: Vec<Param> = Param::ALL.into_iter().take(jacobian.ncols()).collect();
    uncertainty_named(jacobian, residuals, &free)
}

fn uncertainty_named(
    jacobian: &DMatrix<f64>,
    residuals: &[f64],
    free: &[Param],
) -> Result<Uncertainty, FitError> {
    let (n, p) = jacobian.shape();
    if residuals.len() != n {
        return Err(FitError::InvalidConfig(format!(
            "jacobian has {n} rows but {} residuals",
            residuals.len()
        )));
    }
    if n <= p {
        return Err(FitError::Degenerate {
            param: free.first().copied().unwrap_or(Param::LPhi),
            reason: format!("{n} points for {p} parameters"),
        });
    }
    let normal = jacobian.transpose() * jacobian;
    let scale = equilibration(&normal, free)?;
    check_rank(&normal, &scale, free)?;
    let scaled = scale_sym(&normal, &scale);
    let inv = scaled.cholesky().map(|c| c.inverse()).ok_or_else(|| {
        FitError::Degenerate {
            param: free[0],
            reason: "normal matrix is not positive definite".into(),
        }
    })?;
    let chi2: f64 = residuals.iter().map(|r| r * r).sum();
    let s2 = chi2 / (n - p) as f64;
    let mut cov = scale_sym(&inv, &scale) * s2;
    // Symmetrize against rounding in the inverse.
    cov = (&cov + cov.transpose()) * 0.5;
    let std_errors = (0..p).map(|i| cov[(i, i)].max(0.0).sqrt()).collect();
    Ok(Uncertainty {
        covariance: cov,
        std_errors,
    })
}

fn equilibration(normal: &DMatrix<f64>, free: &[Param]) -> Result<Vec<f64>, FitError> {
    (0..normal.ncols())
        .map(|i| {
            let d = normal[(i, i)];
            if d > 0.0 && d.is_finite() {
                Ok(d.sqrt().recip())
            } else {
                Err(FitError::Degenerate {
                    param: free[i],
                    reason: "model is insensitive to it".into(),
                })
            }
        })
        .collect()
}

fn scale_sym(m: &DMatrix<f64>, scale: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * scale[i] * scale[j])
}

/// Smallest eigenvalue of the unit-diagonal normal matrix below which the fit
/// is treated as rank deficient.
const RANK_TOL: f64 = 1e-12;

fn check_rank(normal: &DMatrix<f64>, scale: &[f64], free: &[Param]) -> Result<(), FitError> {
    let eig = SymmetricEigen::new(scale_sym(normal, scale));
    let (k, min) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty");
    if min > RANK_TOL {
        return Ok(());
    }
    // Name the first physical parameter that participates strongly in the
    // null direction.
    let v = eig.eigenvectors.column(k);
    let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let param = (0..v.len())
        .filter(|&i| v[i].abs() >= 0.5 * vmax)
        .map(|i| free[i])
        .min()
        .unwrap_or(free[0]);
    Err(FitError::Degenerate {
        param,
        reason: format!("normal matrix is singular (min scaled eigenvalue {min:.3e})"),
    })
}

/// Jacobian of `background + dG(B_i)` with respect to `free`, in natural
/// units (S/m for lengths, dimensionless for the background).
pub fn model_jacobian(field: &[f64], params: &WlParams, free: &[Param]) -> DMatrix<f64> {
    let lengths = Lengths {
        l_phi: params.l_phi(),
        l_so: params.l_so(),
        width: params.geometry().channel_width(),
        contact_spacing: params.geometry().contact_spacing(),
    };
    let mut j = DMatrix::zeros(field.len(), free.len());
    for (i, &b) in field.iter().enumerate() {
        let m = evaluate(b, &lengths);
        for (c, p) in free.iter().enumerate() {
            j[(i, c)] = match p {
                Param::LPhi => m.d_l_phi,
                Param::LSo => m.d_l_so,
                Param::Width => m.d_width,
                Param::Background => 1.0,
            };
        }
    }
    j
}

/// Least-squares problem in internal coordinates: ln(length) for lengths,
/// background / `bg_scale` for the background.
struct Problem<'a> {
    field: &'a [f64],
    data: &'a [f64],
    model: WlModel,
    contact_spacing: f64,
    fixed: &'a BTreeMap<Param, f64>,
    free: Vec<Param>,
    bg_scale: f64,
}

#[derive(Debug, Clone, Copy)]
struct Values {
    l_phi: f64,
    l_so: Option<f64>,
    width: f64,
    background: f64,
}

impl Problem<'_> {
    fn values(&self, theta: &DVector<f64>) -> Values {
        let get = |p: Param| -> Option<f64> {
            if let Some(i) = self.free.iter().position(|f| *f == p) {
                Some(if p.is_length() {
                    theta[i].exp()
                } else {
                    theta[i] * self.bg_scale
                })
            } else {
                self.fixed.get(&p).copied()
            }
        };
        Values {
            l_phi: get(Param::LPhi).expect("l_phi is free or fixed"),
            l_so: match self.model {
                WlModel::Base => None,
                WlModel::SpinOrbit => get(Param::LSo),
            },
            width: get(Param::Width).unwrap_or(DEFAULT_CHANNEL_WIDTH),
            background: get(Param::Background).unwrap_or(0.0),
        }
    }

    fn lengths(&self, v: &Values) -> Lengths {
        Lengths {
            l_phi: v.l_phi,
            l_so: v.l_so,
            width: v.width,
            contact_spacing: self.contact_spacing,
        }
    }

    fn residuals(&self, theta: &DVector<f64>) -> DVector<f64> {
        let v = self.values(theta);
        let lengths = self.lengths(&v);
        DVector::from_iterator(
            self.field.len(),
            self.field
                .iter()
                .zip(self.data)
                .map(|(&b, &g)| v.background + evaluate(b, &lengths).value - g),
        )
    }

    fn jacobian(&self, theta: &DVector<f64>) -> DMatrix<f64> {
        let v = self.values(theta);
        let lengths = self.lengths(&v);
        let mut j = DMatrix::zeros(self.field.len(), self.free.len());
        for (i, &b) in self.field.iter().enumerate() {
            let m = evaluate(b, &lengths);
            for (c, p) in self.free.iter().enumerate() {
                // d/d(ln l) = l d/dl
                j[(i, c)] = match p {
                    Param::LPhi => m.d_l_phi * v.l_phi,
                    Param::LSo => m.d_l_so * v.l_so.unwrap_or(0.0),
                    Param::Width => m.d_width * v.width,
                    Param::Background => self.bg_scale,
                };
            }
        }
        j
    }

    fn relative_step(&self, theta: &DVector<f64>, step: &DVector<f64>) -> f64 {
        self.free
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if p.is_length() {
                    step[i].abs()
                } else {
                    step[i].abs() / theta[i].abs().max(1.0)
                }
            })
            .fold(0.0, f64::max)
    }
}

fn chi2_of(r: &DVector<f64>) -> f64 {
    r.norm_squared()
}

const MAX_DAMPING: f64 = 1e20;
/// Largest accepted move in internal coordinates (a factor e for lengths).
const MAX_STEP: f64 = 1.0;

/// Fits the selected model to the per-wire conductance of `trace`.
///
/// Returns `converged = false` (not an error) when the iteration budget runs
/// out. A rank-deficient normal matrix is a [`FitError::Degenerate`].
pub fn fit_wl(trace: &MagnetoTrace, config: &FitConfig) -> Result<FitResult, FitError> {
    config.validate()?;
    if !trace.has_dynamic_range() {
        return Err(FitError::InsufficientFieldRange);
    }
    let per_wire = trace.per_wire_conductance();
    let (field, data): (Vec<f64>, Vec<f64>) = trace
        .field()
        .iter()
        .zip(&per_wire)
        .filter(|(b, _)| config.field_window.is_none_or(|w| b.abs() <= w))
        .map(|(b, g)| (*b, *g))
        .unzip();
    let free = config.free_params();
    if field.len() <= free.len() {
        return Err(FitError::InvalidTrace(format!(
            "{} points inside the field window for {} free parameters",
            field.len(),
            free.len()
        )));
    }
    if config.model == WlModel::SpinOrbit
        && !config.fixed.contains_key(&Param::LSo)
        && !config.initial.contains_key(&Param::LSo)
    {
        return Err(FitError::InvalidConfig("spin-orbit fit needs an l_so guess".into()));
    }

    let (lo, hi) = data
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &g| (lo.min(g), hi.max(g)));
    let amplitude = data.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    if hi - lo <= 1e-14 * amplitude {
        return Err(FitError::Degenerate {
            param: Param::LPhi,
            reason: "conductance has no field dependence".into(),
        });
    }

    let bg_scale = if amplitude > 0.0 { amplitude } else { 1.0 };
    let problem = Problem {
        field: &field,
        data: &data,
        model: config.model,
        contact_spacing: config.contact_spacing,
        fixed: &config.fixed,
        free,
        bg_scale,
    };

    let mut theta = initial_theta(&problem, config)?;
    let mut residuals = problem.residuals(&theta);
    let mut chi2 = chi2_of(&residuals);
    let mut chi2_history = vec![chi2];
    let mut damping = config.damping_init;
    let mut converged = false;
    let mut n_iterations = 0;

    while n_iterations < config.max_iterations && !converged {
        n_iterations += 1;
        let j = problem.jacobian(&theta);
        let normal = j.transpose() * &j;
        let gradient = j.transpose() * &residuals;
        // Marquardt scaling with a floor, so a column that is momentarily
        // flat still gets a positive definite damped system.
        let max_diag = normal.diagonal().max();
        let diag: Vec<f64> = (0..normal.nrows())
            .map(|i| normal[(i, i)].max(1e-12 * max_diag))
            .collect();
        if !(max_diag > 0.0 && max_diag.is_finite()) {
            break;
        }

        loop {
            let mut damped = normal.clone();
            for (i, d) in diag.iter().enumerate() {
                damped[(i, i)] += damping * d;
            }
            let Some(step) = damped.cholesky().map(|c| c.solve(&(-&gradient))) else {
                damping *= 4.0;
                if damping > MAX_DAMPING {
                    break;
                }
                continue;
            };
            let rel_step = problem.relative_step(&theta, &step);
            if step.amax() > MAX_STEP {
                damping *= 4.0;
                if damping > MAX_DAMPING {
                    break;
                }
                continue;
            }
            let candidate = &theta + &step;
            let cand_residuals = problem.residuals(&candidate);
            let cand_chi2 = chi2_of(&cand_residuals);
            if cand_chi2.is_finite() && cand_chi2 < chi2 {
                theta = candidate;
                residuals = cand_residuals;
                chi2 = cand_chi2;
                chi2_history.push(chi2);
                damping = (damping * 0.5).max(1e-15);
                converged = rel_step < config.convergence_tol;
                break;
            }
            // No descent even for a step this small: stationary to precision.
            if rel_step < config.convergence_tol {
                converged = true;
                break;
            }
            damping *= 4.0;
            if damping > MAX_DAMPING {
                break;
            }
        }
    }

    let values = problem.values(&theta);
    let geometry = TransportGeometry::new(config.contact_spacing, values.width)?;
    let params = WlParams::new(values.l_phi, values.l_so, geometry)?;
    let jac = model_jacobian(&field, &params, &problem.free);
    let unc = uncertainty_named(&jac, residuals.as_slice(), &problem.free)?;

    Ok(FitResult {
        model: config.model,
        params,
        background: values.background,
        free: problem.free,
        std_errors: unc.std_errors,
        covariance: unc.covariance,
        chi2,
        n_points: field.len(),
        n_iterations,
        converged,
        chi2_history,
    })
}

fn initial_theta(problem: &Problem<'_>, config: &FitConfig) -> Result<DVector<f64>, FitError> {
    let guess = |p: Param| config.initial.get(&p).copied();
    let mut theta = DVector::zeros(problem.free.len());
    let mut bg_index = None;
    for (i, p) in problem.free.iter().enumerate() {
        theta[i] = match p {
            Param::Background => match guess(*p) {
                Some(g) => g / problem.bg_scale,
                None => {
                    bg_index = Some(i);
                    0.0
                }
            },
            Param::Width => guess(*p).unwrap_or(DEFAULT_CHANNEL_WIDTH).ln(),
            _ => guess(*p)
                .ok_or_else(|| FitError::InvalidConfig(format!("no initial guess for {p}")))?
                .ln(),
        };
    }
    if let Some(i) = bg_index {
        // With a zero background the residual mean is the best offset.
        let r = problem.residuals(&theta);
        theta[i] = -r.mean() / problem.bg_scale;
    }
    Ok(theta)
}
