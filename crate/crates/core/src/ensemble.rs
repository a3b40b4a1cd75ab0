//! Inhomogeneous size distribution and the ensemble-averaged susceptibility
//! ⟨χ(Δ_p)⟩ = ∫ f(Δ_ih) χ(Δ_p − Δ_ih, Δ_c − κΔ_ih) dΔ_ih.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dressed::quadrature_breakpoints;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureOutcome, Tolerance};
use crate::susceptibility::{chi, ComplexResponse, SchemeParams};

/// Gaussian FWHM per standard deviation, 2√(2 ln 2).
pub const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    #[default]
    Gaussian,
    /// Homogeneous ensemble: a single sub-ensemble at Δ_ih = 0.
    Delta,
}

/// Spectral distribution of the probe transition across the ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub distribution: Distribution,
    /// FWHM σ_ih in rad/s, referred to the ground-state transition.
    pub fwhm: f64,
    /// Half-width of the integration window in FWHM multiples.
    pub truncation: f64,
    norm: f64,
}

impl EnsembleSpec {
    pub const DEFAULT_TRUNCATION: f64 = 4.0;

    pub fn gaussian(fwhm: f64) -> Result<Self> {
        Self::gaussian_truncated(fwhm, Self::DEFAULT_TRUNCATION)
    }

    pub fn gaussian_truncated(fwhm: f64, truncation: f64) -> Result<Self> {
        if !(fwhm.is_finite() && fwhm > 0.0) {
            return Err(Error::invalid("sigma_ih", "FWHM must be positive"));
        }
        if !(truncation.is_finite() && truncation > 0.0) {
            return Err(Error::invalid("truncation", "must be positive"));
        }
        let mut spec = Self {
            distribution: Distribution::Gaussian,
            fwhm,
            truncation,
            norm: 1.0,
        };
        spec.norm = spec.window_mass();
        Ok(spec)
    }

    pub fn delta() -> Self {
        Self {
            distribution: Distribution::Delta,
            fwhm: 0.0,
            truncation: 0.0,
            norm: 1.0,
        }
    }

    pub fn is_delta(&self) -> bool {
        self.distribution == Distribution::Delta
    }

    pub fn half_window(&self) -> f64 {
        self.truncation * self.fwhm
    }

    fn sigma(&self) -> f64 {
        self.fwhm / FWHM_PER_SIGMA
    }

    fn raw_density(&self, x: f64) -> f64 {
        let s = self.sigma();
        (-0.5 * (x / s).powi(2)).exp() / (s * (2.0 * std::f64::consts::PI).sqrt())
    }

    // Mass of the untruncated Gaussian inside the window.
    fn window_mass(&self) -> f64 {
        let w = self.half_window();
        let edges: Vec<f64> = (0..=64).map(|k| -w + 2.0 * w * k as f64 / 64.0).collect();
        let tol = Tolerance { relative: 1e-14, absolute: 0.0, max_subdivisions: 200 };
        integrate(&edges, 1, tol, |x, o| {
            o[0] = Complex64::new(self.raw_density(x), 0.0);
            Ok(())
        })
        .map(|r| r.values[0].re)
        .unwrap_or(1.0)
    }

    /// f(Δ_ih) in 1/(rad/s); zero outside the window. The delta variant has
    /// no density and returns 0.
    pub fn density(&self, delta_ih: f64) -> f64 {
        match self.distribution {
            Distribution::Delta => 0.0,
            Distribution::Gaussian => {
                if delta_ih.abs() > self.half_window() {
                    0.0
                } else {
                    self.raw_density(delta_ih) / self.norm
                }
            }
        }
    }

    pub fn peak_density(&self) -> f64 {
        self.density(0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Seed the panel set with dressed-resonance breakpoints.
    pub use_breakpoints: bool,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            max_subdivisions: 4000,
            use_breakpoints: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AverageOutcome {
    /// ⟨χ⟩ at Δ_p + offset, one per requested offset.
    pub values: Vec<ComplexResponse>,
    pub error_estimate: f64,
    pub kernel_calls: usize,
    pub panels: usize,
}

/// Smallest positive dephasing rate; sets the scale of the narrowest
/// integrand feature.
fn narrowest_width(p: &SchemeParams, rabi: f64) -> f64 {
    let d = &p.dephasing;
    let mut w = f64::INFINITY;
    for g in [d.g13, d.g23, d.g12] {
        if g > 0.0 {
            w = w.min(g);
        }
    }
    if !w.is_finite() {
        w = if rabi > 0.0 { rabi } else { 1.0 };
    }
    w
}

/// Initial panel edges: window ends, breakpoints and a geometric ladder
/// around each breakpoint down to the homogeneous width.
pub fn initial_edges(
    spec: &EnsembleSpec,
    p: &SchemeParams,
    delta_p: f64,
    delta_c: f64,
    rabi: f64,
    use_breakpoints: bool,
) -> Vec<f64> {
    let half = spec.half_window();
    let base = narrowest_width(p, rabi);
    let mut edges = vec![-half, half];
    if use_breakpoints {
        let merge = p.dephasing.g13.max(base) / 10.0;
        let points = quadrature_breakpoints(p.scheme.family(), delta_p, delta_c, p.kappa, rabi, merge);
        for bp in points {
            if bp.abs() >= half {
                continue;
            }
            edges.push(bp);
            let mut step = base;
            while step < 2.0 * half {
                for x in [bp - step, bp + step] {
                    if x.abs() < half {
                        edges.push(x);
                    }
                }
                step *= 4.0;
            }
        }
    } else {
        // Without resonance information the window is tiled uniformly at
        // the homogeneous width; correct but expensive.
        let n = ((2.0 * half / (2.0 * base)).ceil() as usize).clamp(16, 2_000_000);
        edges.extend((1..n).map(|k| -half + 2.0 * half * k as f64 / n as f64));
    }
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * base);
    edges
}

/// ⟨χ⟩ at Δ_p + each offset, on one shared panel set.
pub fn average_chi_stencil(
    spec: &EnsembleSpec,
    p: &SchemeParams,
    delta_p: f64,
    offsets: &[f64],
    delta_c: f64,
    rabi: f64,
    opts: &QuadratureOptions,
) -> Result<AverageOutcome> {
    if spec.is_delta() {
        let values = offsets
            .iter()
            .map(|o| chi(delta_p + o, delta_c, 0.0, p, rabi))
            .collect::<Result<Vec<_>>>()?;
        return Ok(AverageOutcome {
            values,
            error_estimate: 0.0,
            kernel_calls: offsets.len(),
            panels: 0,
        });
    }
    let edges = initial_edges(spec, p, delta_p, delta_c, rabi, opts.use_breakpoints);
    // Absolute floor well below the unbroadened Voigt scale pref·f(0).
    let floor = opts.rel_tol * 1e-3 * p.prefactor() * spec.peak_density();
    let tol = Tolerance {
        relative: opts.rel_tol,
        absolute: floor,
        max_subdivisions: opts.max_subdivisions,
    };
    let calls = AtomicUsize::new(0);
    let out: QuadratureOutcome = integrate(&edges, offsets.len(), tol, |x, o| {
        let w = spec.density(x);
        for (slot, off) in o.iter_mut().zip(offsets) {
            *slot = if w == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                w * chi(delta_p + off, delta_c, x, p, rabi)?
            };
        }
        calls.fetch_add(offsets.len(), Ordering::Relaxed);
        Ok(())
    })?;
    let error_estimate = out
        .errors
        .iter()
        .zip(&out.values)
        .map(|(e, v)| e / v.norm().max(floor))
        .fold(0.0, f64::max);
    Ok(AverageOutcome {
        values: out.values,
        error_estimate,
        kernel_calls: calls.into_inner(),
        panels: out.panels,
    })
}

/// ⟨χ(Δ_p)⟩ with coupling detuning Δ_c and Rabi frequency Ω_c.
pub fn average_chi(
    spec: &EnsembleSpec,
    p: &SchemeParams,
    delta_p: f64,
    delta_c: f64,
    rabi: f64,
    opts: &QuadratureOptions,
) -> Result<ComplexResponse> {
    Ok(average_chi_stencil(spec, p, delta_p, &[0.0], delta_c, rabi, opts)?.values[0])
}
