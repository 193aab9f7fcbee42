//! Quasi-1D weak-localization magnetoconductance kernels.
//!
//! All quantities are SI (meter, tesla, second, siemens). Field-dependent
//! quantities depend on |B| only. At B = 0 the magnetic lengths and the
//! dephasing time are `f64::INFINITY`, so `1/l_B^2` evaluates to exactly zero
//! downstream.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransportError {
    #[error("{name} must be finite and > 0, got {value}")]
    NonPositive { name: &'static str, value: f64 },
}

fn positive(name: &'static str, value: f64) -> Result<f64, TransportError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(TransportError::NonPositive { name, value })
    }
}

/// Exact SI-defined constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Elementary charge (C).
    pub e: f64,
    /// Planck constant (J s).
    pub h: f64,
    /// Reduced Planck constant (J s).
    pub hbar: f64,
}

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    e: 1.602_176_634e-19,
    h: 6.626_070_15e-34,
    hbar: 6.626_070_15e-34 / (2.0 * PI),
};

impl PhysicalConstants {
    /// Conductance quantum 2e^2/h (S).
    pub fn conductance_quantum(&self) -> f64 {
        2.0 * self.e * self.e / self.h
    }
}

/// Contact spacing and conducting channel width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportGeometry {
    contact_spacing: f64,
    channel_width: f64,
}

impl TransportGeometry {
    pub fn new(contact_spacing: f64, channel_width: f64) -> Result<Self, TransportError> {
        Ok(Self {
            contact_spacing: positive("contact spacing L", contact_spacing)?,
            channel_width: positive("channel width W", channel_width)?,
        })
    }

    pub fn contact_spacing(&self) -> f64 {
        self.contact_spacing
    }

    pub fn channel_width(&self) -> f64 {
        self.channel_width
    }

    /// Diffusive-regime check `W >= 5 l_e`. A `false` here is a warning, the
    /// model can still be evaluated.
    pub fn is_diffusive(&self, mean_free_path: f64) -> bool {
        self.channel_width >= 5.0 * mean_free_path
    }
}

/// Parameters of the weak-localization correction. `l_so = None` means no
/// spin-orbit term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WlParams {
    l_phi: f64,
    l_so: Option<f64>,
    geometry: TransportGeometry,
}

impl WlParams {
    pub fn new(
        l_phi: f64,
        l_so: Option<f64>,
        geometry: TransportGeometry,
    ) -> Result<Self, TransportError> {
        let l_phi = positive("coherence length l_phi", l_phi)?;
        let l_so = l_so.map(|v| positive("spin-orbit length l_so", v)).transpose()?;
        Ok(Self {
            l_phi,
            l_so,
            geometry,
        })
    }

    pub fn l_phi(&self) -> f64 {
        self.l_phi
    }

    pub fn l_so(&self) -> Option<f64> {
        self.l_so
    }

    pub fn geometry(&self) -> TransportGeometry {
        self.geometry
    }

    pub fn with_l_so(self, l_so: Option<f64>) -> Result<Self, TransportError> {
        Self::new(self.l_phi, l_so, self.geometry)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    fermi_velocity: f64,
    mean_free_path: f64,
}

impl MaterialParams {
    pub fn new(fermi_velocity: f64, mean_free_path: f64) -> Result<Self, TransportError> {
        Ok(Self {
            fermi_velocity: positive("Fermi velocity v_F", fermi_velocity)?,
            mean_free_path: positive("mean free path l_e", mean_free_path)?,
        })
    }

    pub fn fermi_velocity(&self) -> f64 {
        self.fermi_velocity
    }

    pub fn mean_free_path(&self) -> f64 {
        self.mean_free_path
    }
}

/// Which magnetoconductance model to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WlModel {
    Base,
    SpinOrbit,
}

/// `l_m = sqrt(hbar / (e |B|))`; infinite at zero field.
pub fn magnetic_length(field: f64) -> f64 {
    let b = field.abs();
    if b == 0.0 {
        return f64::INFINITY;
    }
    (CONSTANTS.hbar / (CONSTANTS.e * b)).sqrt()
}

/// `1/l_B^2 = W^2 e^2 B^2 / (3 hbar^2)`, computed without forming l_m so it
/// is exactly zero at B = 0.
pub(crate) fn inverse_dephasing_length_sq(field: f64, width: f64) -> f64 {
    let eb_over_hbar = CONSTANTS.e * field.abs() / CONSTANTS.hbar;
    width * width * eb_over_hbar * eb_over_hbar / 3.0
}

/// `l_B = sqrt(3) l_m^2 / W`. The diffusion constant cancels between
/// `l_B = sqrt(D tau_B)` and `tau_B = 3 l_m^4 / (W^2 D)`.
pub fn magnetic_dephasing_length(field: f64, width: f64) -> Result<f64, TransportError> {
    let width = positive("channel width W", width)?;
    let lm = magnetic_length(field);
    Ok(3f64.sqrt() * lm * lm / width)
}

/// `tau_B = 3 l_m^4 / (W^2 D)`.
pub fn magnetic_dephasing_time(
    field: f64,
    width: f64,
    diffusion: f64,
) -> Result<f64, TransportError> {
    let width = positive("channel width W", width)?;
    let diffusion = positive("diffusion constant D", diffusion)?;
    let lm2 = magnetic_length(field).powi(2);
    Ok(3.0 * lm2 * lm2 / (width * width * diffusion))
}

/// One-dimensional diffusion constant `D = v_F l_e`.
pub fn diffusion_constant_1d(material: &MaterialParams) -> f64 {
    material.fermi_velocity * material.mean_free_path
}

/// Base quasi-1D weak-localization correction:
/// `dG = -(2e^2/(hL)) (1/l_phi^2 + 1/l_B^2)^(-1/2)`. Any `l_so` in `params`
/// is ignored.
pub fn wl_delta_g(field: f64, params: &WlParams) -> f64 {
    let g = params.geometry;
    let rate = params.l_phi.powi(-2) + inverse_dephasing_length_sq(field, g.channel_width);
    -CONSTANTS.conductance_quantum() / g.contact_spacing / rate.sqrt()
}

/// Triplet/singlet extension with spin-orbit scattering:
/// `dG = -(e^2/(hL)) [3 (1/l_phi^2 + 4/(3 l_so^2) + 1/l_B^2)^(-1/2)
///                    - (1/l_phi^2 + 1/l_B^2)^(-1/2)]`.
///
/// Without `l_so` this is identical to [`wl_delta_g`].
pub fn wl_so_delta_g(field: f64, params: &WlParams) -> f64 {
    let Some(l_so) = params.l_so else {
        return wl_delta_g(field, params);
    };
    let g = params.geometry;
    let singlet = params.l_phi.powi(-2) + inverse_dephasing_length_sq(field, g.channel_width);
    let triplet = singlet + 4.0 / (3.0 * l_so * l_so);
    let half_quantum = CONSTANTS.e * CONSTANTS.e / CONSTANTS.h;
    -half_quantum / g.contact_spacing * (3.0 / triplet.sqrt() - 1.0 / singlet.sqrt())
}

/// Dispatches to the selected model.
pub fn delta_g(model: WlModel, field: f64, params: &WlParams) -> f64 {
    match model {
        WlModel::Base => wl_delta_g(field, params),
        WlModel::SpinOrbit => wl_so_delta_g(field, params),
    }
}
