use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::FitError;
use crate::transport::{wl_so_delta_g, WlParams};

pub const MIN_TRACE_POINTS: usize = 5;

/// One conductance-vs-field sweep. Conductance is the measured total over
/// `n_parallel` identical wires.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnetoTrace {
    field: Vec<f64>,
    conductance: Vec<f64>,
    pub bias_mv: f64,
    pub temperature_k: f64,
    pub n_parallel: u32,
    pub label: String,
}

impl MagnetoTrace {
    pub fn new(field: Vec<f64>, conductance: Vec<f64>) -> Result<Self, FitError> {
        if field.len() != conductance.len() {
            return Err(FitError::InvalidTrace(format!(
                "{} field values but {} conductance values",
                field.len(),
                conductance.len()
            )));
        }
        if field.len() < MIN_TRACE_POINTS {
            return Err(FitError::InvalidTrace(format!(
                "need at least {MIN_TRACE_POINTS} points, got {}",
                field.len()
            )));
        }
        if let Some(i) = field.iter().position(|b| !b.is_finite()) {
            return Err(FitError::InvalidTrace(format!("non-finite field at index {i}")));
        }
        if let Some(i) = conductance.iter().position(|g| !g.is_finite()) {
            return Err(FitError::InvalidTrace(format!(
                "non-finite conductance at index {i}"
            )));
        }
        Ok(Self {
            field,
            conductance,
            bias_mv: 0.0,
            temperature_k: 0.0,
            n_parallel: 1,
            label: String::new(),
        })
    }

    pub fn field(&self) -> &[f64] {
        &self.field
    }

    pub fn conductance(&self) -> &[f64] {
        &self.conductance
    }

    pub fn len(&self) -> usize {
        self.field.len()
    }

    pub fn is_empty(&self) -> bool {
        self.field.is_empty()
    }

    /// Conductance divided by the number of parallel wires.
    pub fn per_wire_conductance(&self) -> Vec<f64> {
        let n = f64::from(self.n_parallel.max(1));
        self.conductance.iter().map(|g| g / n).collect()
    }

    /// A fit needs one point with |B| <= 0.5 T and one with |B| >= 2 T.
    pub fn has_dynamic_range(&self) -> bool {
        self.field.iter().any(|b| b.abs() <= 0.5) && self.field.iter().any(|b| b.abs() >= 2.0)
    }
}

/// Uniform field grid with `n` points over `[lo, hi]`.
pub fn field_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n).map(|i| lo + step * i as f64).collect()
        }
    }
}

/// Synthetic trace `G_i = background + dG(B_i) + N(0, sigma)` with a seeded
/// ChaCha8 generator. The spin-orbit form is used when `params` carries an
/// `l_so`, the base form otherwise.
pub fn simulate_trace(
    params: &WlParams,
    background: f64,
    field_grid: &[f64],
    noise_sigma: f64,
    seed: u64,
) -> Result<MagnetoTrace, FitError> {
    if field_grid.is_empty() {
        return Err(FitError::InvalidTrace("empty field grid".into()));
    }
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(FitError::InvalidConfig(format!(
            "noise sigma must be finite and >= 0, got {noise_sigma}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 1.0).expect("unit normal");
    let conductance = field_grid
        .iter()
        .map(|&b| {
            let clean = background + wl_so_delta_g(b, params);
            if noise_sigma > 0.0 {
                clean + noise_sigma * noise.sample(&mut rng)
            } else {
                clean
            }
        })
        .collect();
    // Grids shorter than the fit minimum are still valid simulation output.
    Ok(MagnetoTrace {
        field: field_grid.to_vec(),
        conductance,
        bias_mv: 0.0,
        temperature_k: 0.0,
        n_parallel: 1,
        label: String::from("synthetic"),
    })
}
