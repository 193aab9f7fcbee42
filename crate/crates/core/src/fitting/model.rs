//! Model value and analytic partial derivatives with respect to the length
//! parameters, in natural (SI) units.

use crate::transport::{inverse_dephasing_length_sq, CONSTANTS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Lengths {
    pub l_phi: f64,
    pub l_so: Option<f64>,
    pub width: f64,
    pub contact_spacing: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ModelPoint {
    pub value: f64,
    pub d_l_phi: f64,
    pub d_l_so: f64,
    pub d_width: f64,
}

pub(crate) fn evaluate(field: f64, p: &Lengths) -> ModelPoint {
    let half_quantum = CONSTANTS.e * CONSTANTS.e / CONSTANTS.h / p.contact_spacing;
    let q = inverse_dephasing_length_sq(field, p.width);
    let singlet = p.l_phi.powi(-2) + q;
    let s_m12 = singlet.sqrt().recip();
    let s_m32 = s_m12 * s_m12 * s_m12;
    let dphi_rate = -2.0 / p.l_phi.powi(3);
    let dw_rate = if q == 0.0 { 0.0 } else { 2.0 * q / p.width };

    match p.l_so {
        None => {
            // dG = -2c' S^(-1/2);  d dG/dS = c' S^(-3/2)
            let d_rate = half_quantum * s_m32;
            ModelPoint {
                value: -2.0 * half_quantum * s_m12,
                d_l_phi: d_rate * dphi_rate,
                d_l_so: 0.0,
                d_width: d_rate * dw_rate,
            }
        }
        Some(l_so) => {
            let triplet = singlet + 4.0 / (3.0 * l_so * l_so);
            let t_m12 = triplet.sqrt().recip();
            let t_m32 = t_m12 * t_m12 * t_m12;
            // S and T both shift with 1/l_phi^2 and 1/l_B^2.
            let d_rate = half_quantum * (1.5 * t_m32 - 0.5 * s_m32);
            ModelPoint {
                value: -half_quantum * (3.0 * t_m12 - s_m12),
                d_l_phi: d_rate * dphi_rate,
                d_l_so: -4.0 * half_quantum * t_m32 / l_so.powi(3),
                d_width: d_rate * dw_rate,
            }
        }
    }
}
