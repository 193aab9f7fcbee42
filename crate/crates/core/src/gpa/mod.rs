//! Geometric phase analysis of atomic-resolution lattice images.
//!
//! One Bragg reflection `g` is isolated with a Gaussian mask in Fourier
//! space. The phase of the inverse transform, minus the carrier `2π g·r`, is
//! the geometric phase `P(r) = -2π g·u(r)`. Its derivative along `ĝ` gives the
//! lattice strain projected on `ĝ`:
//!
//! ```text
//! ε(r) = -(1 / 2π|g|) ∂P/∂r_ĝ
//! ```
//!
//! Coordinates: `x` runs along columns, `y` along rows, both in nanometers.
//! Reciprocal vectors are in cycles per nanometer in the same frame.
//! Compressive strain is negative.

mod fft;
mod synth;

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use thiserror::Error;

use fft::{fft2, signed_bin};
pub use synth::{synthesize_lattice, LatticeRegion, LatticeSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GpaError {
    #[error("invalid raster: {0}")]
    InvalidRaster(String),
    #[error("invalid reciprocal peak: {0}")]
    InvalidPeak(String),
    #[error("|g| = {g} nm⁻¹ is outside the Nyquist band (< {nyquist} nm⁻¹)")]
    OutsideNyquist { g: f64, nyquist: f64 },
    #[error("invalid reference region: {0}")]
    InvalidReference(String),
    #[error("invalid line scan: {0}")]
    InvalidScan(String),
    #[error("lattice period {period_px:.3} px is below the 4 px minimum")]
    PeriodTooSmall { period_px: f64 },
}

/// Row-major grid of real values with a pixel calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    rows: usize,
    cols: usize,
    pixel_size_nm: f64,
    values: Vec<f64>,
}

impl Raster {
    pub fn new(
        rows: usize,
        cols: usize,
        pixel_size_nm: f64,
        values: Vec<f64>,
    ) -> Result<Self, GpaError> {
        if rows == 0 || cols == 0 {
            return Err(GpaError::InvalidRaster(format!("empty shape {rows}x{cols}")));
        }
        if values.len() != rows * cols {
            return Err(GpaError::InvalidRaster(format!(
                "expected {} values for {rows}x{cols}, got {}",
                rows * cols,
                values.len()
            )));
        }
        if !(pixel_size_nm > 0.0 && pixel_size_nm.is_finite()) {
            return Err(GpaError::InvalidRaster(format!(
                "pixel size must be > 0, got {pixel_size_nm}"
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(GpaError::InvalidRaster(format!(
                "non-finite value at row {}, col {}",
                i / cols,
                i % cols
            )));
        }
        Ok(Self {
            rows,
            cols,
            pixel_size_nm,
            values,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pixel_size_nm(&self) -> f64 {
        self.pixel_size_nm
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    /// Bilinear interpolation with coordinates clamped to the grid.
    pub fn sample(&self, row: f64, col: f64) -> f64 {
        let r = row.clamp(0.0, (self.rows - 1) as f64);
        let c = col.clamp(0.0, (self.cols - 1) as f64);
        let (r0, c0) = (r.floor() as usize, c.floor() as usize);
        let (r1, c1) = ((r0 + 1).min(self.rows - 1), (c0 + 1).min(self.cols - 1));
        let (fr, fc) = (r - r0 as f64, c - c0 as f64);
        let top = self.get(r0, c0) * (1.0 - fc) + self.get(r0, c1) * fc;
        let bottom = self.get(r1, c0) * (1.0 - fc) + self.get(r1, c1) * fc;
        top * (1.0 - fr) + bottom * fr
    }

    /// Circular shift by `(dr, dc)` pixels.
    pub fn rolled(&self, dr: usize, dc: usize) -> Raster {
        let mut values = vec![0.0; self.values.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                values[((r + dr) % self.rows) * self.cols + (c + dc) % self.cols] = self.get(r, c);
            }
        }
        Raster { values, ..*self }
    }

    pub fn mean_over(&self, rect: &Rect) -> f64 {
        let mut sum = 0.0;
        for r in rect.row0..rect.row0 + rect.rows {
            for c in rect.col0..rect.col0 + rect.cols {
                sum += self.get(r, c);
            }
        }
        sum / rect.area() as f64
    }
}

pub const MIN_IMAGE_SIDE: usize = 32;

/// Atomic-resolution intensity image.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeImage(Raster);

impl LatticeImage {
    pub fn new(raster: Raster) -> Result<Self, GpaError> {
        if raster.rows < MIN_IMAGE_SIDE || raster.cols < MIN_IMAGE_SIDE {
            return Err(GpaError::InvalidRaster(format!(
                "image must be at least {MIN_IMAGE_SIDE}x{MIN_IMAGE_SIDE}, got {}x{}",
                raster.rows, raster.cols
            )));
        }
        Ok(Self(raster))
    }

    pub fn raster(&self) -> &Raster {
        &self.0
    }

    pub fn into_raster(self) -> Raster {
        self.0
    }
}

/// Reciprocal lattice vector (nm⁻¹) with its Gaussian mask width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReciprocalPeak {
    gx: f64,
    gy: f64,
    mask_sigma: f64,
}

impl ReciprocalPeak {
    /// Mask width must lie in `(0, |g|/2)` to keep the central beam out.
    pub fn new(gx: f64, gy: f64, mask_sigma: f64) -> Result<Self, GpaError> {
        let g = gx.hypot(gy);
        if !(g > 0.0 && g.is_finite()) {
            return Err(GpaError::InvalidPeak("|g| must be > 0".into()));
        }
        if !(mask_sigma > 0.0 && mask_sigma < 0.5 * g) {
            return Err(GpaError::InvalidPeak(format!(
                "mask sigma {mask_sigma} must lie in (0, |g|/2 = {})",
                0.5 * g
            )));
        }
        Ok(Self { gx, gy, mask_sigma })
    }

    /// Mask width `|g| / 6`.
    pub fn with_default_mask(gx: f64, gy: f64) -> Result<Self, GpaError> {
        Self::new(gx, gy, gx.hypot(gy) / 6.0)
    }

    /// Peak of fringes with `period_nm` whose wave vector points at
    /// `orientation_deg` from the x (column) axis toward y (rows).
    pub fn from_period(period_nm: f64, orientation_deg: f64) -> Result<Self, GpaError> {
        let theta = orientation_deg.to_radians();
        Self::with_default_mask(theta.cos() / period_nm, theta.sin() / period_nm)
    }

    pub fn g(&self) -> [f64; 2] {
        [self.gx, self.gy]
    }

    pub fn magnitude(&self) -> f64 {
        self.gx.hypot(self.gy)
    }

    pub fn mask_sigma(&self) -> f64 {
        self.mask_sigma
    }

    pub fn with_mask_sigma(self, mask_sigma: f64) -> Result<Self, GpaError> {
        Self::new(self.gx, self.gy, mask_sigma)
    }

    /// Real-space standard deviation of the mask's impulse response, in
    /// pixels.
    pub fn correlation_length_px(&self, pixel_size_nm: f64) -> f64 {
        1.0 / (2.0 * PI * self.mask_sigma * pixel_size_nm)
    }
}

/// Pixel rectangle `[row0, row0 + rows) × [col0, col0 + cols)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub row0: usize,
    pub col0: usize,
    pub rows: usize,
    pub cols: usize,
}

impl Rect {
    pub fn new(row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        Self {
            row0,
            col0,
            rows,
            cols,
        }
    }

    pub fn area(&self) -> usize {
        self.rows * self.cols
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        (self.row0..self.row0 + self.rows).contains(&row)
            && (self.col0..self.col0 + self.cols).contains(&col)
    }

    /// Shrinks every side by `margin` pixels.
    pub fn inset(&self, margin: usize) -> Option<Rect> {
        (self.rows > 2 * margin && self.cols > 2 * margin).then(|| Rect {
            row0: self.row0 + margin,
            col0: self.col0 + margin,
            rows: self.rows - 2 * margin,
            cols: self.cols - 2 * margin,
        })
    }

    fn fits(&self, rows: usize, cols: usize) -> bool {
        self.row0 + self.rows <= rows && self.col0 + self.cols <= cols
    }
}

/// Geometric phase (radians), wrapped to (-π, π] unless `unwrapped`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMap {
    pub raster: Raster,
    pub unwrapped: bool,
}

/// Strain projected on `ĝ`, relative to a reference region.
#[derive(Debug, Clone, PartialEq)]
pub struct StrainMap {
    pub raster: Raster,
    pub reference: Rect,
    /// Pixels closer than this to the image edge are not trusted.
    pub border_px: usize,
}

impl StrainMap {
    pub fn is_trusted(&self, row: usize, col: usize) -> bool {
        let b = self.border_px;
        row >= b && col >= b && row + b < self.raster.rows && col + b < self.raster.cols
    }
}

/// Wraps an angle to (-π, π].
pub fn wrap_phase(x: f64) -> f64 {
    let mut w = x - 2.0 * PI * (x / (2.0 * PI)).round();
    if w <= -PI {
        w += 2.0 * PI;
    } else if w > PI {
        w -= 2.0 * PI;
    }
    w
}

pub fn compute_phase_map(image: &LatticeImage, peak: &ReciprocalPeak) -> Result<PhaseMap, GpaError> {
    let img = image.raster();
    let (rows, cols, px) = (img.rows, img.cols, img.pixel_size_nm);
    let nyquist = 0.5 / px;
    if peak.magnitude() >= nyquist {
        return Err(GpaError::OutsideNyquist {
            g: peak.magnitude(),
            nyquist,
        });
    }

    let mean = img.values.iter().sum::<f64>() / img.values.len() as f64;
    let mut spectrum: Vec<Complex64> = img
        .values
        .iter()
        .map(|&v| Complex64::new(v - mean, 0.0))
        .collect();
    fft2(&mut spectrum, rows, cols, false);

    let [gx, gy] = peak.g();
    let two_s2 = 2.0 * peak.mask_sigma * peak.mask_sigma;
    let (dkx, dky) = (1.0 / (cols as f64 * px), 1.0 / (rows as f64 * px));
    for r in 0..rows {
        let ky = signed_bin(r, rows) as f64 * dky - gy;
        for c in 0..cols {
            let kx = signed_bin(c, cols) as f64 * dkx - gx;
            spectrum[r * cols + c] *= (-(kx * kx + ky * ky) / two_s2).exp();
        }
    }
    fft2(&mut spectrum, rows, cols, true);

    let values = (0..rows * cols)
        .map(|i| {
            let (r, c) = (i / cols, i % cols);
            let carrier = 2.0 * PI * (gx * c as f64 + gy * r as f64) * px;
            wrap_phase(spectrum[i].arg() - carrier)
        })
        .collect();
    Ok(PhaseMap {
        raster: Raster {
            rows,
            cols,
            pixel_size_nm: px,
            values,
        },
        unwrapped: false,
    })
}

/// Row-wise unwrapping followed by alignment of every row to the unwrapped
/// first column. Noise-induced phase residues propagate along rows.
pub fn unwrap_phase(phase: &PhaseMap) -> PhaseMap {
    let src = &phase.raster;
    let (rows, cols) = (src.rows, src.cols);
    let mut values = src.values.clone();
    for r in 0..rows {
        let row = &mut values[r * cols..(r + 1) * cols];
        for c in 1..cols {
            let d = wrap_phase(src.get(r, c) - src.get(r, c - 1));
            row[c] = row[c - 1] + d;
        }
    }
    let mut seam = src.get(0, 0);
    for r in 1..rows {
        seam += wrap_phase(src.get(r, 0) - src.get(r - 1, 0));
        let shift = seam - values[r * cols];
        for v in &mut values[r * cols..(r + 1) * cols] {
            *v += shift;
        }
    }
    PhaseMap {
        raster: Raster {
            values,
            ..*src
        },
        unwrapped: true,
    }
}

/// Derivative of the phase along `ĝ` converted to strain, then shifted so
/// the mean over `reference` is zero.
pub fn strain_from_phase(
    phase: &PhaseMap,
    peak: &ReciprocalPeak,
    reference: Rect,
) -> Result<StrainMap, GpaError> {
    let src = &phase.raster;
    let (rows, cols, px) = (src.rows, src.cols, src.pixel_size_nm);
    if !reference.fits(rows, cols) {
        return Err(GpaError::InvalidReference(format!(
            "{reference:?} exceeds the {rows}x{cols} map"
        )));
    }
    if reference.area() < 16 {
        return Err(GpaError::InvalidReference(format!(
            "area {} px is below the 16 px minimum",
            reference.area()
        )));
    }
    if rows < 2 || cols < 2 {
        return Err(GpaError::InvalidRaster("phase map must be at least 2x2".into()));
    }
    let g = peak.magnitude();
    let [ux, uy] = peak.g().map(|v| v / g);
    let scale = -1.0 / (2.0 * PI * g);

    let deriv = |lo: f64, hi: f64, span: usize| (hi - lo) / (span as f64 * px);
    let mut values = vec![0.0; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let (c0, c1) = (c.saturating_sub(1), (c + 1).min(cols - 1));
            let (r0, r1) = (r.saturating_sub(1), (r + 1).min(rows - 1));
            let dx = deriv(src.get(r, c0), src.get(r, c1), c1 - c0);
            let dy = deriv(src.get(r0, c), src.get(r1, c), r1 - r0);
            values[r * cols + c] = scale * (ux * dx + uy * dy);
        }
    }
    let mut raster = Raster {
        rows,
        cols,
        pixel_size_nm: px,
        values,
    };
    let offset = raster.mean_over(&reference);
    for v in &mut raster.values {
        *v -= offset;
    }
    let border_px = (3.0 * peak.correlation_length_px(px)).ceil() as usize;
    Ok(StrainMap {
        raster,
        reference,
        border_px,
    })
}

/// Phase map, unwrapping and strain in one call.
pub fn strain_map(
    image: &LatticeImage,
    peak: &ReciprocalPeak,
    reference: Rect,
) -> Result<StrainMap, GpaError> {
    let phase = compute_phase_map(image, peak)?;
    strain_from_phase(&unwrap_phase(&phase), peak, reference)
}

/// Point in fractional pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelPoint {
    pub row: f64,
    pub col: f64,
}

impl PixelPoint {
    pub fn new(row: f64, col: f64) -> Self {
        Self { row, col }
    }
}

/// Samples spaced at most one pixel apart from `p0` to `p1`, each averaged
/// over `avg_width_px` samples perpendicular to the segment. Returns
/// `(distance_nm, value)` pairs.
pub fn line_scan(
    map: &Raster,
    p0: PixelPoint,
    p1: PixelPoint,
    avg_width_px: usize,
) -> Result<Vec<(f64, f64)>, GpaError> {
    let in_bounds = |p: PixelPoint| {
        (0.0..=(map.rows - 1) as f64).contains(&p.row) && (0.0..=(map.cols - 1) as f64).contains(&p.col)
    };
    if !in_bounds(p0) || !in_bounds(p1) {
        return Err(GpaError::InvalidScan(format!(
            "endpoints {p0:?}, {p1:?} outside the {}x{} map",
            map.rows, map.cols
        )));
    }
    if avg_width_px == 0 {
        return Err(GpaError::InvalidScan("averaging width must be >= 1".into()));
    }
    let (dr, dc) = (p1.row - p0.row, p1.col - p0.col);
    let length = dr.hypot(dc);
    if length == 0.0 {
        return Err(GpaError::InvalidScan("zero-length segment".into()));
    }
    let n = length.ceil() as usize + 1;
    let (ur, uc) = (dr / length, dc / length);
    // Unit normal; offsets are symmetric so its sign is irrelevant.
    let (nr, nc) = (-uc, ur);
    let half = (avg_width_px - 1) as f64 / 2.0;
    Ok((0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            let (row, col) = (p0.row + dr * t, p0.col + dc * t);
            let sum: f64 = (0..avg_width_px)
                .map(|k| {
                    let o = k as f64 - half;
                    map.sample(row + nr * o, col + nc * o)
                })
                .sum();
            (t * length * map.pixel_size_nm, sum / avg_width_px as f64)
        })
        .collect())
}

/// The `k` strongest local maxima of the Fourier magnitude in the upper
/// half plane, as `(gx, gy, magnitude)`, DC excluded. Helps choose `g`.
pub fn fft_peaks(image: &LatticeImage, k: usize) -> Vec<(f64, f64, f64)> {
    let img = image.raster();
    let (rows, cols, px) = (img.rows, img.cols, img.pixel_size_nm);
    let mean = img.values.iter().sum::<f64>() / img.values.len() as f64;
    let mut spectrum: Vec<Complex64> = img
        .values
        .iter()
        .map(|&v| Complex64::new(v - mean, 0.0))
        .collect();
    fft2(&mut spectrum, rows, cols, false);
    let mag = |r: usize, c: usize| spectrum[r * cols + c].norm();

    let mut peaks = Vec::new();
    for r in 0..rows {
        let fy = signed_bin(r, rows);
        for c in 0..cols {
            let fx = signed_bin(c, cols);
            if fy < 0 || (fy == 0 && fx <= 0) || fx.abs() + fy.abs() <= 2 {
                continue;
            }
            let m = mag(r, c);
            let is_max = (-1i64..=1).all(|a| {
                (-1i64..=1).all(|b| {
                    let rr = (r as i64 + a).rem_euclid(rows as i64) as usize;
                    let cc = (c as i64 + b).rem_euclid(cols as i64) as usize;
                    (a == 0 && b == 0) || mag(rr, cc) <= m
                })
            });
            if is_max {
                peaks.push((
                    fx as f64 / (cols as f64 * px),
                    fy as f64 / (rows as f64 * px),
                    m,
                ));
            }
        }
    }
    peaks.sort_by(|a, b| b.2.total_cmp(&a.2));
    peaks.truncate(k);
    peaks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cosine_image(n: usize, px: f64, gx: f64, gy: f64) -> LatticeImage {
        let values = (0..n * n)
            .map(|i| {
                let (r, c) = ((i / n) as f64 * px, (i % n) as f64 * px);
                2.0 + (2.0 * PI * (gx * c + gy * r)).cos()
            })
            .collect();
        LatticeImage::new(Raster::new(n, n, px, values).unwrap()).unwrap()
    }

    #[test]
    fn wrapping() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
        assert!((wrap_phase(0.3 - 4.0 * PI) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn commensurate_lattice_has_flat_phase() {
        // 8 px period on a 64 px grid sits exactly on an FFT bin.
        let px = 0.1;
        let img = cosine_image(64, px, 1.0 / 0.8, 0.0);
        let peak = ReciprocalPeak::with_default_mask(1.0 / 0.8, 0.0).unwrap();
        let phase = compute_phase_map(&img, &peak).unwrap();
        for v in phase.raster.values() {
            assert!(v.abs() < 1e-6, "phase {v}");
        }
    }

    #[test]
    fn peak_validation() {
        assert!(ReciprocalPeak::new(0.0, 0.0, 0.1).is_err());
        assert!(ReciprocalPeak::new(1.0, 0.0, 0.5).is_err());
        assert!(ReciprocalPeak::new(1.0, 0.0, 0.0).is_err());
        assert!(ReciprocalPeak::new(1.0, 0.0, 0.49).is_ok());
        let img = cosine_image(64, 0.1, 1.25, 0.0);
        let outside = ReciprocalPeak::with_default_mask(5.0, 0.0).unwrap();
        assert!(matches!(
            compute_phase_map(&img, &outside),
            Err(GpaError::OutsideNyquist { .. })
        ));
    }

    #[test]
    fn ramp_unwraps_linearly() {
        let (rows, cols) = (8, 60);
        let slope = 6.0 * PI / (cols - 1) as f64;
        let wrapped = (0..rows * cols)
            .map(|i| wrap_phase(slope * (i % cols) as f64 + 0.2 * (i / cols) as f64))
            .collect();
        let phase = PhaseMap {
            raster: Raster::new(rows, cols, 1.0, wrapped).unwrap(),
            unwrapped: false,
        };
        let u = unwrap_phase(&phase);
        for r in 0..rows {
            for c in 0..cols {
                let truth = slope * c as f64 + 0.2 * r as f64;
                let offset = u.raster.get(r, c) - truth;
                assert!((offset - u.raster.get(0, 0)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn constant_phase_unchanged() {
        let phase = PhaseMap {
            raster: Raster::new(4, 5, 1.0, vec![1.25; 20]).unwrap(),
            unwrapped: false,
        };
        assert_eq!(unwrap_phase(&phase).raster.values(), phase.raster.values());
    }

    #[test]
    fn reference_region_checks() {
        let phase = PhaseMap {
            raster: Raster::new(10, 10, 1.0, vec![0.0; 100]).unwrap(),
            unwrapped: true,
        };
        let peak = ReciprocalPeak::with_default_mask(0.25, 0.0).unwrap();
        assert!(strain_from_phase(&phase, &peak, Rect::new(0, 0, 3, 5)).is_err());
        assert!(strain_from_phase(&phase, &peak, Rect::new(8, 0, 4, 4)).is_err());
        assert!(strain_from_phase(&phase, &peak, Rect::new(0, 0, 4, 4)).is_ok());
    }

    #[test]
    fn line_scan_basics() {
        let map = Raster::new(10, 10, 0.5, vec![0.7; 100]).unwrap();
        let prof = line_scan(&map, PixelPoint::new(2.0, 1.0), PixelPoint::new(2.0, 8.0), 3).unwrap();
        assert_eq!(prof.len(), 8);
        assert!(prof.iter().all(|p| (p.1 - 0.7).abs() < 1e-15));
        assert!((prof[7].0 - 3.5).abs() < 1e-12);
        assert!(line_scan(&map, PixelPoint::new(2.0, 2.0), PixelPoint::new(2.0, 2.0), 1).is_err());
        assert!(line_scan(&map, PixelPoint::new(2.0, 2.0), PixelPoint::new(2.0, 10.0), 1).is_err());
        assert!(line_scan(&map, PixelPoint::new(2.0, 2.0), PixelPoint::new(2.0, 5.0), 0).is_err());
    }

    #[test]
    fn bilinear_sampling() {
        let map = Raster::new(2, 2, 1.0, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(map.sample(0.5, 0.5), 1.5);
        assert_eq!(map.sample(0.0, 0.25), 0.25);
        assert_eq!(map.sample(5.0, 5.0), 3.0);
    }

    #[test]
    fn peaks_find_the_lattice() {
        let img = cosine_image(64, 0.1, 1.25, 0.0);
        let peaks = fft_peaks(&img, 1);
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0].0 - 1.25).abs() < 1e-12 && peaks[0].1.abs() < 1e-12);
    }

    #[test]
    fn raster_validation() {
        assert!(Raster::new(2, 2, 1.0, vec![0.0; 3]).is_err());
        assert!(Raster::new(2, 2, 0.0, vec![0.0; 4]).is_err());
        assert!(Raster::new(2, 2, 1.0, vec![0.0, f64::NAN, 0.0, 0.0]).is_err());
        let small = Raster::new(16, 16, 1.0, vec![0.0; 256]).unwrap();
        assert!(LatticeImage::new(small).is_err());
    }
}
