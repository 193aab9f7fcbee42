//! Profile scan of the spin-orbit length.
//!
//! For a descending log grid of fixed `l_so` values the remaining parameters
//! are refitted (warm-started from the neighbouring grid point). Residual sums
//! are converted to chi-square units with the noise variance, either supplied
//! or estimated as `chi2_min / (n - p)` of the spin-orbit model. The lower
//! bound is the smallest `l_so`, reached contiguously from the profile
//! minimum, whose chi2 stays within `delta_chi2(confidence)` of the minimum.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{fit_wl, FitConfig, FitError, MagnetoTrace, Param};
use crate::transport::WlModel;

/// Grid of trial spin-orbit lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsoScan {
    pub min: f64,
    pub max: f64,
    pub points_per_decade: usize,
    /// Known per-wire noise standard deviation (S). Estimated from the
    /// residuals when absent.
    pub noise_sigma: Option<f64>,
}

impl Default for LsoScan {
    fn default() -> Self {
        Self {
            min: 10e-9,
            max: 10e-6,
            points_per_decade: 60,
            noise_sigma: None,
        }
    }
}

impl LsoScan {
    /// Grid values, largest first.
    pub fn grid(&self) -> Vec<f64> {
        let decades = (self.max / self.min).log10();
        let n = (decades * self.points_per_decade as f64).round() as usize;
        (0..=n)
            .map(|i| self.max * 10f64.powf(-(i as f64) / self.points_per_decade as f64))
            .collect()
    }

    fn validate(&self) -> Result<(), FitError> {
        if !(self.min > 0.0 && self.max > self.min && self.max.is_finite()) {
            return Err(FitError::InvalidConfig(format!(
                "l_so scan range must satisfy 0 < min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.points_per_decade == 0 {
            return Err(FitError::InvalidConfig("points_per_decade must be >= 1".into()));
        }
        if let Some(s) = self.noise_sigma {
            if !(s > 0.0 && s.is_finite()) {
                return Err(FitError::InvalidConfig("noise sigma must be > 0".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LsoBound {
    Bounded(f64),
    /// No tested `l_so` below the profile minimum was rejected.
    Unbounded,
}

impl LsoBound {
    pub fn value(self) -> Option<f64> {
        match self {
            LsoBound::Bounded(v) => Some(v),
            LsoBound::Unbounded => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsoProfile {
    /// `(l_so, residual sum of squares)`, largest `l_so` first.
    pub points: Vec<(f64, f64)>,
    pub chi2_min: f64,
    /// Variance used to convert residual sums to chi-square units.
    pub variance: f64,
    /// Highest accepted residual sum of squares.
    pub threshold: f64,
    pub bound: LsoBound,
}

/// Chi-square quantile with one degree of freedom.
pub fn delta_chi2(confidence: f64) -> Result<f64, FitError> {
    if !(0.0..1.0).contains(&confidence) {
        return Err(FitError::InvalidConfig(format!(
            "confidence must be in [0, 1), got {confidence}"
        )));
    }
    if confidence == 0.0 {
        return Ok(0.0);
    }
    Ok(ChiSquared::new(1.0).expect("1 dof").inverse_cdf(confidence))
}

pub fn lso_lower_bound(
    trace: &MagnetoTrace,
    config: &FitConfig,
    confidence: f64,
) -> Result<LsoBound, FitError> {
    lso_profile(trace, config, &LsoScan::default(), confidence).map(|p| p.bound)
}

pub fn lso_profile(
    trace: &MagnetoTrace,
    config: &FitConfig,
    scan: &LsoScan,
    confidence: f64,
) -> Result<LsoProfile, FitError> {
    scan.validate()?;
    let dchi2 = delta_chi2(confidence)?;

    let mut base_cfg = config.clone();
    base_cfg.model = WlModel::Base;
    base_cfg.fixed.remove(&Param::LSo);
    base_cfg.initial.remove(&Param::LSo);
    let base = fit_wl(trace, &base_cfg)?;
    if !base.converged {
        return Err(FitError::BaseNotConverged(base.n_iterations));
    }

    let mut so_cfg = config.clone();
    so_cfg.model = WlModel::SpinOrbit;
    so_cfg.initial.insert(Param::LPhi, base.params.l_phi());
    so_cfg.initial.insert(Param::Background, base.background);
    if let Some(w) = so_cfg.initial.get_mut(&Param::Width) {
        *w = base.params.geometry().channel_width();
    }

    let mut points = Vec::new();
    let mut n_points = 0;
    let mut n_free = 0;
    for l_so in scan.grid() {
        let cfg = so_cfg.clone().fix(Param::LSo, l_so);
        let fit = fit_wl(trace, &cfg)?;
        n_points = fit.n_points;
        // The scanned l_so counts as a fitted parameter of the full model.
        n_free = fit.free.len() + 1;
        so_cfg.initial.insert(Param::LPhi, fit.params.l_phi());
        so_cfg.initial.insert(Param::Background, fit.background);
        if let Some(w) = so_cfg.initial.get_mut(&Param::Width) {
            *w = fit.params.geometry().channel_width();
        }
        points.push((l_so, fit.chi2));
    }

    let (argmin, chi2_min) = points
        .iter()
        .enumerate()
        .map(|(i, p)| (i, p.1))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("grid is non-empty");
    let variance = match scan.noise_sigma {
        Some(s) => s * s,
        None => chi2_min / (n_points.saturating_sub(n_free).max(1)) as f64,
    };
    let threshold = chi2_min + dchi2 * variance;

    let mut bound = LsoBound::Unbounded;
    for &(l_so, chi2) in &points[argmin..] {
        if chi2 > threshold {
            break;
        }
        bound = LsoBound::Bounded(l_so);
    }
    if points[argmin..].iter().all(|p| p.1 <= threshold) {
        bound = LsoBound::Unbounded;
    }

    Ok(LsoProfile {
        points,
        chi2_min,
        variance,
        threshold,
        bound,
    })
}
