//! Cross-section shape energetics.
//!
//! The wire cross-section is a rectangle of fixed area with two vertical
//! (110) side facets and a flat (111) top facet; the base sits on the
//! template ridge. Energy per unit length at aspect ratio `r = h/w`:
//!
//! ```text
//! E(r) = 2 γ_side h + (γ_top - γ_interface) w + M ε0² A / (1 + k r)
//! h = sqrt(A r),  w = sqrt(A / r)
//! ```
//!
//! The last term is the elastic energy of the misfit strain, relaxed by the
//! factor `R(r) = 1 / (1 + k r)` as the wire grows taller.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MorphologyError {
    #[error("Miller index triple must be nonzero")]
    ZeroPlane,
    #[error("aspect ratio must be finite and > 0, got {0}")]
    InvalidAspectRatio(f64),
    #[error("invalid bracket [{0}, {1}]: need 0 < r_lo < r_hi")]
    InvalidBracket(f64, f64),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Miller = [i32; 3];

/// Angle between two cubic planes, in degrees, folded into [0, 90].
pub fn facet_dihedral(a: Miller, b: Miller) -> Result<f64, MorphologyError> {
    let norm = |m: Miller| (m.iter().map(|&x| f64::from(x).powi(2)).sum::<f64>()).sqrt();
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return Err(MorphologyError::ZeroPlane);
    }
    let dot: i64 = a.iter().zip(&b).map(|(&x, &y)| i64::from(x) * i64::from(y)).sum();
    if dot == 0 {
        return Ok(90.0);
    }
    let cos = (dot.abs() as f64 / (na * nb)).min(1.0);
    Ok(cos.acos().to_degrees())
}

/// Lattice constants (nm) used for the default misfit.
pub const GAAS_LATTICE_NM: f64 = 0.565_33;
pub const INAS_LATTICE_NM: f64 = 0.605_83;

/// `(a_GaAs - a_InAs) / a_GaAs`, about -0.072 (compressive).
pub fn inas_on_gaas_misfit() -> f64 {
    (GAAS_LATTICE_NM - INAS_LATTICE_NM) / GAAS_LATTICE_NM
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSectionModel {
    /// (111) top facet energy (J/m²).
    pub gamma_top: f64,
    /// (110) side facet energy (J/m²).
    pub gamma_side: f64,
    /// Energy of the interface replaced at the base (J/m²).
    pub gamma_interface: f64,
    /// Cross-sectional area (m²).
    pub area: f64,
    pub misfit: f64,
    /// Effective biaxial modulus (Pa).
    pub modulus: f64,
    pub relaxation_k: f64,
}

impl Default for CrossSectionModel {
    /// Illustrative InAs-on-GaAs values; every field is meant to be
    /// overridden from a parameter file.
    fn default() -> Self {
        Self {
            gamma_top: 0.56,
            gamma_side: 0.66,
            gamma_interface: 0.0,
            area: 20e-9 * 10e-9,
            misfit: inas_on_gaas_misfit(),
            modulus: 124e9,
            relaxation_k: 0.05,
        }
    }
}

impl CrossSectionModel {
    pub fn validate(&self) -> Result<(), MorphologyError> {
        let bad = |what: &str, v: f64| Err(MorphologyError::InvalidModel(format!("{what} = {v}")));
        for (name, v) in [
            ("gamma_top", self.gamma_top),
            ("gamma_side", self.gamma_side),
            ("gamma_interface", self.gamma_interface),
            ("relaxation_k", self.relaxation_k),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(name, v);
            }
        }
        if !(self.area > 0.0 && self.area.is_finite()) {
            return bad("area", self.area);
        }
        if !(self.modulus > 0.0 && self.modulus.is_finite()) {
            return bad("modulus", self.modulus);
        }
        if !self.misfit.is_finite() {
            return bad("misfit", self.misfit);
        }
        Ok(())
    }

    /// Elastic energy per length of the unrelaxed wire, `M ε0² A` (J/m).
    pub fn strain_energy_scale(&self) -> f64 {
        self.modulus * self.misfit * self.misfit * self.area
    }

    /// Same model with the strain term removed.
    pub fn without_strain(mut self) -> Self {
        self.misfit = 0.0;
        self
    }

    pub fn shape(&self, r: f64) -> CrossSectionShape {
        CrossSectionShape {
            width: (self.area / r).sqrt(),
            height: (self.area * r).sqrt(),
            aspect_ratio: r,
        }
    }
}

/// `R(r) = 1 / (1 + k r)`.
pub fn relaxation_factor(relaxation_k: f64, r: f64) -> f64 {
    1.0 / (1.0 + relaxation_k * r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSectionShape {
    pub width: f64,
    pub height: f64,
    pub aspect_ratio: f64,
}

pub fn total_energy(model: &CrossSectionModel, r: f64) -> Result<f64, MorphologyError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(MorphologyError::InvalidAspectRatio(r));
    }
    let s = model.shape(r);
    Ok(2.0 * model.gamma_side * s.height
        + (model.gamma_top - model.gamma_interface) * s.width
        + model.strain_energy_scale() * relaxation_factor(model.relaxation_k, r))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeOptimum {
    pub aspect_ratio: f64,
    pub energy: f64,
    pub shape: CrossSectionShape,
    /// The minimum lies on the bracket boundary.
    pub edge_minimum: bool,
}

/// Relative tolerance on the optimal aspect ratio.
pub const ASPECT_RATIO_TOL: f64 = 1e-8;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the energy minimum over `[r_lo, r_hi]`.
///
/// The search runs in `ln r`, so the tolerance is relative in `r` and wide
/// brackets are handled evenly.
pub fn minimize_aspect_ratio(
    model: &CrossSectionModel,
    r_lo: f64,
    r_hi: f64,
) -> Result<ShapeOptimum, MorphologyError> {
    if !(r_lo > 0.0 && r_hi > r_lo && r_hi.is_finite()) {
        return Err(MorphologyError::InvalidBracket(r_lo, r_hi));
    }
    model.validate()?;
    let energy = |x: f64| total_energy(model, x.exp()).expect("r > 0");

    let (mut a, mut b) = (r_lo.ln(), r_hi.ln());
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (energy(c), energy(d));
    while b - a > ASPECT_RATIO_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = energy(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = energy(d);
        }
    }
    let mut x = 0.5 * (a + b);
    let mut f = energy(x);
    // Compare against the bracket ends; golden section only sees the interior.
    let (lo, hi) = (r_lo.ln(), r_hi.ln());
    let (f_lo, f_hi) = (energy(lo), energy(hi));
    if f_lo < f {
        x = lo;
        f = f_lo;
    }
    if f_hi < f {
        x = hi;
        f = f_hi;
    }
    let edge_minimum = x - lo <= 2.0 * ASPECT_RATIO_TOL || hi - x <= 2.0 * ASPECT_RATIO_TOL;
    let r = if x == lo {
        r_lo
    } else if x == hi {
        r_hi
    } else {
        x.exp()
    };
    Ok(ShapeOptimum {
        aspect_ratio: r,
        energy: f,
        shape: model.shape(r),
        edge_minimum,
    })
}

/// Energy table on `n` log-spaced aspect ratios over the bracket.
pub fn energy_table(
    model: &CrossSectionModel,
    r_lo: f64,
    r_hi: f64,
    n: usize,
) -> Result<Vec<(f64, f64)>, MorphologyError> {
    if !(r_lo > 0.0 && r_hi > r_lo && r_hi.is_finite()) || n < 2 {
        return Err(MorphologyError::InvalidBracket(r_lo, r_hi));
    }
    let (a, b) = (r_lo.ln(), r_hi.ln());
    (0..n)
        .map(|i| {
            let r = (a + (b - a) * i as f64 / (n - 1) as f64).exp();
            total_energy(model, r).map(|e| (r, e))
        })
        .collect()
}
