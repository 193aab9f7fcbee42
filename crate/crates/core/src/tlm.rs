//! Transmission-line analysis: `R_wire(L) = 2 R_c + ρ_lin L`.
//!
//! Measured resistances of `n_parallel` identical wires are converted to
//! per-wire values (`R × n_parallel`) before the straight-line fit. The
//! intercept is attributed to two identical contacts.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TlmError {
    #[error("invalid TLM dataset: {0}")]
    InvalidDataset(String),
    #[error("degenerate TLM fit: all segment lengths are identical")]
    IdenticalLengths,
    #[error("resistances must be > 0, got sample {sample} and control {control}")]
    NonPositiveResistance { sample: f64, control: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlmPoint {
    /// Contact spacing (m).
    pub length: f64,
    /// Measured resistance (Ω).
    pub resistance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TlmDataset {
    points: Vec<TlmPoint>,
    pub n_parallel: u32,
    pub temperature_k: f64,
    pub label: String,
}

impl TlmDataset {
    pub fn new(points: Vec<TlmPoint>, n_parallel: u32) -> Result<Self, TlmError> {
        if points.len() < 2 {
            return Err(TlmError::InvalidDataset(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        if n_parallel == 0 {
            return Err(TlmError::InvalidDataset("n_parallel must be >= 1".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if !(p.length.is_finite() && p.length >= 0.0) {
                return Err(TlmError::InvalidDataset(format!(
                    "point {i}: length {} is not a finite nonnegative value",
                    p.length
                )));
            }
            if !(p.resistance.is_finite() && p.resistance > 0.0) {
                return Err(TlmError::InvalidDataset(format!(
                    "point {i}: resistance {} must be > 0",
                    p.resistance
                )));
            }
        }
        Ok(Self {
            points,
            n_parallel,
            temperature_k: 0.0,
            label: String::new(),
        })
    }

    pub fn points(&self) -> &[TlmPoint] {
        &self.points
    }

    /// `(length, per-wire resistance)` pairs.
    pub fn per_wire(&self) -> Vec<(f64, f64)> {
        let n = f64::from(self.n_parallel);
        self.points.iter().map(|p| (p.length, p.resistance * n)).collect()
    }

    pub fn mean_resistance(&self) -> f64 {
        self.points.iter().map(|p| p.resistance).sum::<f64>() / self.points.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TlmResult {
    /// Per contact, per wire (Ω).
    pub contact_resistance: f64,
    /// Per wire (Ω/m).
    pub resistance_per_length: f64,
    pub r_squared: f64,
    /// `(σ_Rc, σ_ρ)`; `None` with only two points.
    pub std_errors: Option<(f64, f64)>,
    /// Fitted contact resistance is negative (non-physical, still reported).
    pub negative_contact_warning: bool,
    pub n_points: usize,
}

impl TlmResult {
    /// Per-wire resistance predicted at `length`.
    pub fn predict(&self, length: f64) -> f64 {
        2.0 * self.contact_resistance + self.resistance_per_length * length
    }
}

pub fn fit_tlm(data: &TlmDataset) -> Result<TlmResult, TlmError> {
    let pts = data.per_wire();
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    if sxx <= f64::EPSILON * mean_x * mean_x * n || sxx == 0.0 {
        return Err(TlmError::IdenticalLengths);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ssr: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - ssr / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let std_errors = (pts.len() > 2).then(|| {
        let s2 = ssr / (n - 2.0);
        let se_intercept = (s2 * (1.0 / n + mean_x * mean_x / sxx)).sqrt();
        (0.5 * se_intercept, (s2 / sxx).sqrt())
    });
    let contact_resistance = 0.5 * intercept;
    Ok(TlmResult {
        contact_resistance,
        resistance_per_length: slope,
        r_squared,
        std_errors,
        negative_contact_warning: contact_resistance < 0.0,
        n_points: pts.len(),
    })
}

/// Minimum control/sample ratio (five orders of magnitude) for attributing
/// conduction to the wires.
pub const DEFAULT_CONTROL_THRESHOLD: f64 = 1e5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlComparison {
    pub ratio: f64,
    pub conduction_attributed: bool,
}

/// `ratio = control / sample`, flagged when `ratio >= threshold`.
pub fn control_ratio(
    sample: f64,
    control: f64,
    threshold: f64,
) -> Result<ControlComparison, TlmError> {
    if !(sample > 0.0 && control > 0.0 && sample.is_finite() && control.is_finite()) {
        return Err(TlmError::NonPositiveResistance { sample, control });
    }
    let ratio = control / sample;
    Ok(ControlComparison {
        ratio,
        conduction_attributed: ratio >= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const UM: f64 = 1e-6;

    fn dataset(points: &[(f64, f64)], n: u32) -> TlmDataset {
        TlmDataset::new(
            points
                .iter()
                .map(|&(length, resistance)| TlmPoint { length, resistance })
                .collect(),
            n,
        )
        .unwrap()
    }

    #[test]
    fn exact_linear_data() {
        let d = dataset(&[(1.0 * UM, 300.0), (2.0 * UM, 400.0), (3.0 * UM, 500.0)], 1);
        let r = fit_tlm(&d).unwrap();
        assert!((r.resistance_per_length * UM - 100.0).abs() < 1e-9);
        assert!((r.contact_resistance - 100.0).abs() < 1e-9);
        assert_eq!(r.r_squared, 1.0);
        let (se_rc, se_rho) = r.std_errors.unwrap();
        assert!(se_rc < 1e-9 && se_rho * UM < 1e-9);
        assert!(!r.negative_contact_warning);
    }

    #[test]
    fn parallel_normalization() {
        let pts = [(1.0 * UM, 300.0), (2.0 * UM, 400.0), (3.0 * UM, 500.0)];
        let one = fit_tlm(&dataset(&pts, 1)).unwrap();
        let many = fit_tlm(&dataset(&pts, 34)).unwrap();
        assert!((many.contact_resistance / one.contact_resistance - 34.0).abs() < 1e-12);
        assert!((many.resistance_per_length / one.resistance_per_length - 34.0).abs() < 1e-12);
    }

    #[test]
    fn two_points_interpolate() {
        let r = fit_tlm(&dataset(&[(1.0 * UM, 250.0), (4.0 * UM, 550.0)], 1)).unwrap();
        assert!((r.predict(1.0 * UM) - 250.0).abs() < 1e-9);
        assert!((r.predict(4.0 * UM) - 550.0).abs() < 1e-9);
        assert!(r.std_errors.is_none());
    }

    #[test]
    fn identical_lengths_are_degenerate() {
        let d = dataset(&[(2.0 * UM, 300.0), (2.0 * UM, 310.0), (2.0 * UM, 305.0)], 1);
        assert_eq!(fit_tlm(&d), Err(TlmError::IdenticalLengths));
    }

    #[test]
    fn negative_contact_is_flagged() {
        let r = fit_tlm(&dataset(&[(1.0 * UM, 50.0), (2.0 * UM, 200.0)], 1)).unwrap();
        assert!(r.contact_resistance < 0.0);
        assert!(r.negative_contact_warning);
    }

    #[test]
    fn dataset_validation() {
        assert!(TlmDataset::new(vec![TlmPoint { length: 1e-6, resistance: 1.0 }], 1).is_err());
        let pts = vec![
            TlmPoint { length: 1e-6, resistance: 1.0 },
            TlmPoint { length: 2e-6, resistance: 0.0 },
        ];
        assert!(TlmDataset::new(pts, 1).is_err());
    }

    #[test]
    fn control_threshold() {
        let c = control_ratio(1e4, 1e9, DEFAULT_CONTROL_THRESHOLD).unwrap();
        assert_eq!(c.ratio, 1e5);
        assert!(c.conduction_attributed);
        let c = control_ratio(5e3, 5e3, DEFAULT_CONTROL_THRESHOLD).unwrap();
        assert_eq!(c.ratio, 1.0);
        assert!(!c.conduction_attributed);
        let c = control_ratio(1e3, 1e6, DEFAULT_CONTROL_THRESHOLD).unwrap();
        assert!((c.ratio - 1e3).abs() < 1e-9);
        assert!(!c.conduction_attributed);
        assert!(control_ratio(0.0, 1.0, DEFAULT_CONTROL_THRESHOLD).is_err());
        assert!(control_ratio(1.0, -1.0, DEFAULT_CONTROL_THRESHOLD).is_err());
    }
}
