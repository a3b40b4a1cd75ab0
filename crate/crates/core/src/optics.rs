//! Observables derived from the probe susceptibility: refractive and group
//! index, slow-down factor and absorption.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensemble::{average_chi_stencil, EnsembleSpec, QuadratureOptions};
use crate::error::{Error, Result};
use crate::susceptibility::{ComplexResponse, SchemeParams};
use crate::units::SPEED_OF_LIGHT;

/// Relative Richardson disagreement beyond which a derivative is rejected.
pub const DERIVATIVE_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpticalMetrics {
    pub chi: [f64; 2],
    pub n: f64,
    pub n_g: f64,
    pub slowdown: f64,
    /// Field absorption coefficient (1/m).
    pub alpha: f64,
}

/// n = Re √(n_bg² + χ).
pub fn refractive_index(chi: ComplexResponse, n_bg: f64) -> f64 {
    (Complex64::new(n_bg * n_bg, 0.0) + chi).sqrt().re
}

/// Offsets at which [`group_index`] samples χ.
pub fn stencil_offsets(h: f64) -> [f64; 5] {
    [-h, -0.5 * h, 0.0, 0.5 * h, h]
}

/// Finite-difference step: a hundredth of the narrowest spectral feature,
/// never below 10⁻⁴ γ₁₃.
pub fn derivative_step(p: &SchemeParams, rabi: f64) -> f64 {
    let g = p.dephasing.g13;
    let w = if rabi > 0.0 { g.min(rabi).max(1e-2 * g) } else { g };
    w / 100.0
}

/// Runs `f` at [`derivative_step`] and, if the Richardson check rejects
/// it, at successively smaller steps and finally one larger step.
pub fn with_step_fallback<T, F>(h: f64, mut f: F) -> Result<T>
where
    F: FnMut(f64) -> Result<T>,
{
    let mut last = None;
    for scale in [1.0, 0.25, 0.0625, 0.015625, 4.0] {
        match f(h * scale) {
            Err(Error::Derivative(d)) => last = Some(d),
            other => return other,
        }
    }
    Err(Error::Derivative(last.unwrap_or(f64::NAN)))
}

/// Group index n + ω dn/dω from χ sampled on [`stencil_offsets`].
///
/// `chi_at` receives the offsets (rad/s, relative to ω) and returns χ at
/// each. Central differences at h and h/2 are Richardson-combined.
pub fn group_index<F>(mut chi_at: F, omega: f64, h: f64, n_bg: f64) -> Result<(ComplexResponse, f64)>
where
    F: FnMut(&[f64]) -> Result<Vec<ComplexResponse>>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid("step", "finite-difference step must be positive"));
    }
    let offsets = stencil_offsets(h);
    let chi = chi_at(&offsets)?;
    if chi.len() != offsets.len() {
        return Err(Error::invalid("chi_at", "must return one value per offset"));
    }
    group_index_from_stencil(&chi, omega, h, n_bg).map(|ng| (chi[2], ng))
}

/// Group index from χ already evaluated on [`stencil_offsets`].
pub fn group_index_from_stencil(chi: &[ComplexResponse], omega: f64, h: f64, n_bg: f64) -> Result<f64> {
    let n: Vec<f64> = chi.iter().map(|c| refractive_index(*c, n_bg)).collect();
    let coarse = (n[4] - n[0]) / (2.0 * h);
    let fine = (n[3] - n[1]) / h;
    let slope = (4.0 * fine - coarse) / 3.0;
    // Relative to the size of the complex response slope, so that points
    // where dn/dω itself crosses zero are not rejected.
    let chi_slope = (chi[4] - chi[0]).norm() / (2.0 * h) / (2.0 * n_bg);
    let scale = (omega * slope).abs().max(omega * chi_slope) + n[2].abs();
    let disagreement = omega * (fine - coarse).abs() / scale;
    if !disagreement.is_finite() || disagreement > DERIVATIVE_TOLERANCE {
        return Err(Error::Derivative(disagreement));
    }
    Ok(n[2] + omega * slope)
}

/// α = ω χ''/(2 n_bg c), field amplitude convention.
pub fn absorption_coefficient(chi_im: f64, omega: f64, n_bg: f64) -> f64 {
    omega * chi_im / (2.0 * n_bg * SPEED_OF_LIGHT)
}

/// χ''(Ω_c)/χ''(Ω_c = 0).
pub fn normalized_absorption(chi_im: f64, baseline_chi_im: f64) -> Result<f64> {
    if !(baseline_chi_im.abs() > 0.0) || !baseline_chi_im.is_finite() {
        return Err(Error::invalid("baseline", "absorption without coupling must be non-zero"));
    }
    Ok(chi_im / baseline_chi_im)
}

/// Ensemble-averaged probe metrics at detuning Δ_p.
pub fn ensemble_metrics(
    spec: &EnsembleSpec,
    p: &SchemeParams,
    delta_p: f64,
    delta_c: f64,
    rabi: f64,
    n_bg: f64,
    opts: &QuadratureOptions,
) -> Result<OpticalMetrics> {
    let omega = p.probe_frequency + delta_p;
    let (chi, n_g) = with_step_fallback(derivative_step(p, rabi), |h| {
        group_index(
            |offs| Ok(average_chi_stencil(spec, p, delta_p, offs, delta_c, rabi, opts)?.values),
            omega,
            h,
            n_bg,
        )
    })?;
    Ok(OpticalMetrics {
        chi: [chi.re, chi.im],
        n: refractive_index(chi, n_bg),
        n_g,
        slowdown: n_g / n_bg,
        alpha: absorption_coefficient(chi.im, omega, n_bg),
    })
}
