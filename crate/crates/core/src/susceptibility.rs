//! First-order probe susceptibility of a single sub-ensemble.
//!
//! Conventions: `rabi` arguments are the coupling matrix element
//! Ω_c = μ₂₃E_c/(2ħ) of the rotating-frame Hamiltonian. The closed-form
//! steady-state expressions are written in terms of the full Rabi
//! frequency Ω_R = 2Ω_c; [`full_rabi`] is the single place where that
//! factor enters.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scheme::{KernelFamily, SchemeKind};
use crate::units::{DipoleMoment, HBAR, VACUUM_PERMITTIVITY};

/// Complex susceptibility χ' + iχ'' (dimensionless).
pub type ComplexResponse = Complex64;

const SINGULAR_FLOOR: f64 = 1e-30;

/// Population decay rates Γ_ij in rad/s.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PopulationRates {
    pub g13: f64,
    pub g23: f64,
    pub g12: f64,
}

/// Coherence (dephasing) rates γ_ij in rad/s.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DephasingRates {
    pub g13: f64,
    pub g23: f64,
    pub g12: f64,
}

/// How the Λ-kernel numerator is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaNumerator {
    /// 2(δ₋ + iγ₁₂), the form that overlays the Ξ kernel.
    #[default]
    Parenthesized,
    /// 2δ₋ + iγ₁₂ as typeset in some printings; kept for comparison only.
    AsPrinted,
}

/// One excitation configuration of a quantum-dot sub-ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub scheme: SchemeKind,
    pub mu13: DipoleMoment,
    pub mu23: DipoleMoment,
    pub population: PopulationRates,
    pub dephasing: DephasingRates,
    /// Confinement factor Γ_conf ∈ (0, 1].
    pub confinement: f64,
    /// Quantum-dot volume in m³.
    pub volume: f64,
    pub kappa: f64,
    /// Mean probe transition frequency ω̄₁₃ (rad/s).
    pub probe_frequency: f64,
    /// Mean coupling transition frequency ω̄₂₃ (rad/s).
    pub coupling_frequency: f64,
    #[serde(default)]
    pub lambda_numerator: LambdaNumerator,
}

/// Effective detunings (Δ̃_p, Δ̃_c) of a sub-ensemble, rad/s.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DetuningPair {
    pub probe: f64,
    pub coupling: f64,
}

impl DetuningPair {
    /// Δ̃_p = Δ_p − Δ_ih and Δ̃_c = Δ_c − κΔ_ih.
    pub fn shifted(delta_p: f64, delta_c: f64, delta_ih: f64, kappa: f64) -> Self {
        Self {
            probe: delta_p - delta_ih,
            coupling: delta_c - kappa * delta_ih,
        }
    }

    pub fn two_photon_sum(&self) -> f64 {
        self.probe + self.coupling
    }

    pub fn two_photon_difference(&self) -> f64 {
        self.probe - self.coupling
    }
}

/// Full Rabi frequency entering the steady-state expressions.
#[inline]
pub fn full_rabi(rabi: f64) -> f64 {
    2.0 * rabi
}

impl SchemeParams {
    /// Γ_conf μ₁₃²/(V ε₀ ħ), the scale of every susceptibility value.
    pub fn prefactor(&self) -> f64 {
        let mu = self.mu13.coulomb_meter();
        self.confinement * mu * mu / (self.volume * VACUUM_PERMITTIVITY * HBAR)
    }

    /// Same prefactor with the dipole of the coupling transition.
    pub fn coupling_prefactor(&self) -> f64 {
        let mu = self.mu23.coulomb_meter();
        self.confinement * mu * mu / (self.volume * VACUUM_PERMITTIVITY * HBAR)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.population;
        let d = &self.dephasing;
        for (name, v) in [
            ("Gamma13", p.g13),
            ("Gamma23", p.g23),
            ("Gamma12", p.g12),
            ("gamma13", d.g13),
            ("gamma23", d.g23),
            ("gamma12", d.g12),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite("rate"));
            }
            if v < 0.0 {
                return Err(Error::invalid(name, "rate must be non-negative"));
            }
        }
        if !(self.confinement > 0.0 && self.confinement <= 1.0) {
            return Err(Error::invalid("confinement", "must lie in (0, 1]"));
        }
        if !(self.volume.is_finite() && self.volume > 0.0) {
            return Err(Error::invalid("volume", "must be positive"));
        }
        if !self.kappa.is_finite() {
            return Err(Error::NonFinite("kappa"));
        }
        if !(self.probe_frequency.is_finite() && self.probe_frequency > 0.0) {
            return Err(Error::invalid("probe_frequency", "must be positive"));
        }
        Ok(())
    }

    /// Replace all dephasing rates by their lifetime-limited values.
    pub fn with_lifetime_limited_dephasing(mut self) -> Self {
        self.dephasing = lifetime_limited_dephasing(self.scheme, self.population);
        self
    }
}

/// γ_ij = ½(total population loss of |i⟩ + total population loss of |j⟩).
///
/// Each Γ_ij empties whichever of |i⟩, |j⟩ lies higher in the scheme's
/// level ordering.
pub fn lifetime_limited_dephasing(scheme: SchemeKind, rates: PopulationRates) -> DephasingRates {
    let rank = scheme.family().level_rank();
    let mut loss = [0.0f64; 3];
    for (i, j, g) in [(0, 2, rates.g13), (1, 2, rates.g23), (0, 1, rates.g12)] {
        let upper = if rank[i] > rank[j] { i } else { j };
        loss[upper] += g;
    }
    DephasingRates {
        g13: 0.5 * (loss[0] + loss[2]),
        g23: 0.5 * (loss[1] + loss[2]),
        g12: 0.5 * (loss[0] + loss[1]),
    }
}

/// Bare two-level line of the probe transition in the normalization of the
/// given kernel family (Ξ and Λ carry an extra factor ½ relative to V).
pub fn two_level_limit(family: KernelFamily, d: DetuningPair, p: &SchemeParams) -> ComplexResponse {
    let line = Complex64::new(d.probe, p.dephasing.g13);
    let scale = match family {
        KernelFamily::Xi | KernelFamily::Lambda => 0.5,
        KernelFamily::V => 1.0,
    };
    -p.prefactor() * scale / line
}

fn checked_ratio(num: Complex64, den: Complex64, what: &str, d: DetuningPair) -> Result<Complex64> {
    if !(den.norm() > SINGULAR_FLOOR) {
        return Err(Error::Singular(format!(
            "{what} denominator vanishes at probe detuning {:e}, coupling detuning {:e}",
            d.probe, d.coupling
        )));
    }
    let r = num / den;
    if !(r.re.is_finite() && r.im.is_finite()) {
        return Err(Error::Singular(format!("{what} evaluation overflowed")));
    }
    Ok(r)
}

/// Ξ ladder: χ = pref · 2(δ₊ + iγ₁₂) / (Ω_R² − 4(δ₊ + iγ₁₂)(Δ̃_p + iγ₁₃)).
pub fn chi_xi(d: DetuningPair, p: &SchemeParams, rabi: f64) -> Result<ComplexResponse> {
    two_photon_kernel(KernelFamily::Xi, d, d.two_photon_sum(), p, rabi, false)
}

/// Λ: as Ξ with δ₊ → δ₋.
pub fn chi_lambda(d: DetuningPair, p: &SchemeParams, rabi: f64) -> Result<ComplexResponse> {
    let as_printed = p.lambda_numerator == LambdaNumerator::AsPrinted;
    two_photon_kernel(KernelFamily::Lambda, d, d.two_photon_difference(), p, rabi, as_printed)
}

fn two_photon_kernel(
    family: KernelFamily,
    d: DetuningPair,
    delta: f64,
    p: &SchemeParams,
    rabi: f64,
    as_printed: bool,
) -> Result<ComplexResponse> {
    let what = if family == KernelFamily::Xi { "xi" } else { "lambda" };
    if rabi == 0.0 && !as_printed {
        // The two-photon factor cancels identically.
        return Ok(two_level_limit(family, d, p));
    }
    let g = &p.dephasing;
    let w = full_rabi(rabi);
    let two_photon = Complex64::new(delta, g.g12);
    let probe = Complex64::new(d.probe, g.g13);
    let num = if as_printed {
        Complex64::new(2.0 * delta, g.g12)
    } else {
        2.0 * two_photon
    };
    let den = w * w - 4.0 * two_photon * probe;
    Ok(p.prefactor() * checked_ratio(num, den, what, d)?)
}

/// V scheme: the closed form including population dynamics,
///
/// χ = pref · 2 · ({γ₂₃[iΓ₁₃Γ₂ − 2Γ₁(Δ̃_p + iγ₁₂)] + Δ̃_c(Γ₁₃Γ₂ + 2γ₂₃Γ₁)}Ω_R² − 2(δ₋ + iγ₁₂)ζ)
///         / ([4(δ₋ + iγ₁₂)(iγ₁₃ + Δ̃_p) − Ω_R²][ζ + γ₂₃(2Γ₁₃ + Γ₁₂)Ω_R²])
///
/// with Γ₁ = Γ₁₃ − Γ₁₂, Γ₂ = Γ₂₃ + Γ₁₂ and ζ = 2Γ₁₃Γ₂(Δ̃_c² + γ₂₃²).
pub fn chi_v(d: DetuningPair, p: &SchemeParams, rabi: f64) -> Result<ComplexResponse> {
    if rabi == 0.0 {
        return Ok(two_level_limit(KernelFamily::V, d, p));
    }
    let pop = &p.population;
    let g = &p.dephasing;
    let w2 = full_rabi(rabi).powi(2);
    let gamma1 = pop.g13 - pop.g12;
    let gamma2 = pop.g23 + pop.g12;
    let zeta = 2.0 * pop.g13 * gamma2 * (d.coupling * d.coupling + g.g23 * g.g23);
    let i = Complex64::i();

    let two_photon = Complex64::new(d.two_photon_difference(), g.g12);
    let bracket = g.g23 * (i * pop.g13 * gamma2 - 2.0 * gamma1 * Complex64::new(d.probe, g.g12));
    let num = (bracket + d.coupling * (pop.g13 * gamma2 + 2.0 * g.g23 * gamma1)) * w2
        - 2.0 * two_photon * zeta;

    let population_factor = zeta + g.g23 * (2.0 * pop.g13 + pop.g12) * w2;
    if !(population_factor.abs() > SINGULAR_FLOOR) {
        return Err(Error::Singular(format!(
            "v-scheme population factor vanishes (Gamma13 = {:e}, gamma23 = {:e}, rabi = {:e})",
            pop.g13, g.g23, rabi
        )));
    }
    let den = (4.0 * two_photon * Complex64::new(d.probe, g.g13) - w2) * population_factor;
    Ok(2.0 * p.prefactor() * checked_ratio(num, den, "v", d)?)
}

/// Kernel dispatch on the scheme family.
pub fn chi_kernel(d: DetuningPair, p: &SchemeParams, rabi: f64) -> Result<ComplexResponse> {
    match p.scheme.family() {
        KernelFamily::Xi => chi_xi(d, p, rabi),
        KernelFamily::V => chi_v(d, p, rabi),
        KernelFamily::Lambda => chi_lambda(d, p, rabi),
    }
}

/// Susceptibility of the sub-ensemble spectrally shifted by `delta_ih`.
pub fn chi(delta_p: f64, delta_c: f64, delta_ih: f64, p: &SchemeParams, rabi: f64) -> Result<ComplexResponse> {
    chi_kernel(DetuningPair::shifted(delta_p, delta_c, delta_ih, p.kappa), p, rabi)
}
