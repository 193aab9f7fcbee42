use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{GpaError, LatticeImage, Raster, Rect};

/// Cosine fringes filling a rectangle (or the whole image when `bounds` is
/// `None`). The fringe period is `period_nm * (1 + strain)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeRegion {
    pub bounds: Option<Rect>,
    pub period_nm: f64,
    /// Direction of the wave vector from the x (column) axis toward y (rows).
    pub orientation_deg: f64,
    pub amplitude: f64,
    pub strain: f64,
}

impl LatticeRegion {
    pub fn uniform(period_nm: f64, orientation_deg: f64) -> Self {
        Self {
            bounds: None,
            period_nm,
            orientation_deg,
            amplitude: 1.0,
            strain: 0.0,
        }
    }

    pub fn window(self, bounds: Rect, strain: f64) -> Self {
        Self {
            bounds: Some(bounds),
            strain,
            ..self
        }
    }

    fn wave_vector(&self, strain: f64) -> [f64; 2] {
        let theta = self.orientation_deg.to_radians();
        let k = 1.0 / (self.period_nm * (1.0 + strain));
        [k * theta.cos(), k * theta.sin()]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    pub rows: usize,
    pub cols: usize,
    pub pixel_size_nm: f64,
    /// Later regions overwrite earlier ones where they overlap.
    pub regions: Vec<LatticeRegion>,
    pub noise_sigma: f64,
    pub seed: u64,
}

/// Renders a synthetic lattice image.
///
/// Inside a bounded region the strained fringes are phase-matched to the
/// unstrained lattice at the region centre, so the region is a local
/// dilation about that point.
pub fn synthesize_lattice(spec: &LatticeSpec) -> Result<LatticeImage, GpaError> {
    if !(spec.noise_sigma >= 0.0 && spec.noise_sigma.is_finite()) {
        return Err(GpaError::InvalidRaster(format!(
            "noise sigma must be >= 0, got {}",
            spec.noise_sigma
        )));
    }
    let px = spec.pixel_size_nm;
    for region in &spec.regions {
        let period_px = region.period_nm * (1.0 + region.strain) / px;
        if !(period_px >= 4.0) {
            return Err(GpaError::PeriodTooSmall { period_px });
        }
        if let Some(b) = region.bounds {
            if !b.fits(spec.rows, spec.cols) {
                return Err(GpaError::InvalidRaster(format!(
                    "region {b:?} exceeds the {}x{} image",
                    spec.rows, spec.cols
                )));
            }
        }
    }

    let mut values = vec![0.0; spec.rows * spec.cols];
    for region in &spec.regions {
        let bounds = region.bounds.unwrap_or(Rect::new(0, 0, spec.rows, spec.cols));
        let (ay, ax) = match region.bounds {
            Some(b) => (
                (b.row0 as f64 + 0.5 * (b.rows as f64 - 1.0)) * px,
                (b.col0 as f64 + 0.5 * (b.cols as f64 - 1.0)) * px,
            ),
            None => (0.0, 0.0),
        };
        let g0 = region.wave_vector(0.0);
        let g = region.wave_vector(region.strain);
        let anchor = g0[0] * ax + g0[1] * ay;
        for r in bounds.row0..bounds.row0 + bounds.rows {
            let y = r as f64 * px;
            for c in bounds.col0..bounds.col0 + bounds.cols {
                let x = c as f64 * px;
                let phase = 2.0 * PI * (anchor + g[0] * (x - ax) + g[1] * (y - ay));
                values[r * spec.cols + c] = region.amplitude * phase.cos();
            }
        }
    }

    if spec.noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let normal = Normal::new(0.0, spec.noise_sigma).expect("sigma checked");
        for v in &mut values {
            *v += normal.sample(&mut rng);
        }
    }
    LatticeImage::new(Raster::new(spec.rows, spec.cols, px, values)?)
}
