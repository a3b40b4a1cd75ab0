//! Default quantum-dot material and the per-scheme parameter assembly.
//!
//! States: |a⟩ valence ground, |b⟩ and |c⟩ the two electron states
//! (|b⟩ = |101⟩ lower, |c⟩ = |111⟩ upper). Transition data are given per
//! physical transition and mapped onto the |1⟩, |2⟩, |3⟩ labels of each
//! scheme.

use serde::{Deserialize, Serialize};

use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::scheme::SchemeKind;
use crate::structure::{kappa, FssSlopes};
use crate::susceptibility::{LambdaNumerator, PopulationRates, SchemeParams};
use crate::units::{AngularFrequency, DipoleMoment, DEFAULT_BACKGROUND_INDEX};

/// One optical transition of the three-level dot.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    /// ħω in eV.
    pub energy_ev: f64,
    /// Dipole moment in e·nm.
    pub dipole_e_nm: f64,
    /// Population decay rate ħΓ in μeV.
    pub decay_uev: f64,
}

/// Material and geometry shared by all schemes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Material {
    /// Height-to-radius aspect ratio η.
    pub eta: f64,
    pub confinement: f64,
    /// Dot volume in nm³.
    pub volume_nm3: f64,
    /// Inhomogeneous FWHM in meV (ground-state transition).
    pub sigma_ih_mev: f64,
    pub n_bg: f64,
    pub ab: Transition,
    pub bc: Transition,
    pub ac: Transition,
    pub fss: FssSlopes,
    /// Optional κ override applied to every scheme.
    pub kappa_override: Option<f64>,
}

impl Default for Material {
    fn default() -> Self {
        Self::table_one()
    }
}

/// Decay overrides layered on top of the lifetime-limited model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RateOverrides {
    /// Replace Γ₁₂ (μeV).
    pub gamma12_pop_uev: Option<f64>,
    /// Γ₁₂ as a multiple of Γ₁₃; applied after `gamma12_pop_uev`.
    pub gamma12_pop_ratio: Option<f64>,
    /// Multiply the lifetime-limited γ₁₂.
    pub gamma12_dephasing_factor: Option<f64>,
    /// Replace γ₁₂, γ₁₃, γ₂₃ (μeV); applied before the factor.
    pub dephasing_uev: [Option<f64>; 3],
}

impl Material {
    /// The reference parameter set.
    pub fn table_one() -> Self {
        Self {
            eta: 0.3,
            confinement: 6e-3,
            volume_nm3: 1200.0,
            sigma_ih_mev: 10.0,
            n_bg: DEFAULT_BACKGROUND_INDEX,
            ab: Transition { energy_ev: 0.999, dipole_e_nm: 0.7, decay_uev: 2.6 },
            bc: Transition { energy_ev: 0.061, dipole_e_nm: 4.7, decay_uev: 0.16 },
            ac: Transition { energy_ev: 1.06, dipole_e_nm: 0.10, decay_uev: 2.6 },
            fss: FssSlopes::default(),
            kappa_override: None,
        }
    }

    pub fn ensemble(&self) -> Result<EnsembleSpec> {
        EnsembleSpec::gaussian(AngularFrequency::from_mev(self.sigma_ih_mev)?.0)
    }

    /// (probe, coupling, third) transitions of a scheme. For the exciton
    /// schemes all three are the ground exciton line.
    pub fn transitions(&self, scheme: SchemeKind) -> [Transition; 3] {
        match scheme {
            SchemeKind::Xi => [self.ab, self.bc, self.ac],
            SchemeKind::V => [self.ab, self.ac, self.bc],
            SchemeKind::Lambda => [self.ac, self.bc, self.ab],
            SchemeKind::AltV => [self.ac, self.ab, self.bc],
            SchemeKind::FssXi | SchemeKind::FssV | SchemeKind::FssLambda => {
                let x = Transition { decay_uev: self.ab.decay_uev, ..self.ab };
                [x, x, Transition { decay_uev: 0.0, ..x }]
            }
        }
    }

    /// Probe/coupling dipoles in C·m.
    pub fn dipoles(&self, scheme: SchemeKind) -> Result<(DipoleMoment, DipoleMoment)> {
        let [p, c, _] = self.transitions(scheme);
        Ok((DipoleMoment::from_e_nm(p.dipole_e_nm)?, DipoleMoment::from_e_nm(c.dipole_e_nm)?))
    }

    /// Fully resolved parameters with lifetime-limited dephasing.
    pub fn scheme_params(&self, scheme: SchemeKind, overrides: RateOverrides) -> Result<SchemeParams> {
        self.validate()?;
        let [probe, coupling, third] = self.transitions(scheme);
        let uev = |x: f64| AngularFrequency::from_uev(x).map(|w| w.0);
        let mut population = PopulationRates {
            g13: uev(probe.decay_uev)?,
            g23: uev(coupling.decay_uev)?,
            g12: uev(third.decay_uev)?,
        };
        if scheme == SchemeKind::AltV {
            // |1⟩ = |c⟩ lies above |2⟩ = |b⟩; the kernel only carries 2 → 1
            // relaxation, so the intraband channel is dropped.
            population.g12 = 0.0;
        }
        if let Some(g) = overrides.gamma12_pop_uev {
            population.g12 = uev(g)?;
        }
        if let Some(r) = overrides.gamma12_pop_ratio {
            population.g12 = r * population.g13;
        }
        let kappa = match self.kappa_override {
            Some(k) => k,
            None => kappa(scheme, self.eta, self.fss)?.value,
        };
        let (mu13, mu23) = self.dipoles(scheme)?;
        let mut params = SchemeParams {
            scheme,
            mu13,
            mu23,
            population,
            dephasing: Default::default(),
            confinement: self.confinement,
            volume: self.volume_nm3 * 1e-27,
            kappa,
            probe_frequency: AngularFrequency::from_ev(probe.energy_ev)?.0,
            coupling_frequency: AngularFrequency::from_ev(coupling.energy_ev)?.0,
            lambda_numerator: LambdaNumerator::default(),
        }
        .with_lifetime_limited_dephasing();
        let [d12, d13, d23] = dephasing_overrides(overrides.dephasing_uev)?;
        if let Some(g) = d12 {
            params.dephasing.g12 = g;
        }
        if let Some(g) = d13 {
            params.dephasing.g13 = g;
        }
        if let Some(g) = d23 {
            params.dephasing.g23 = g;
        }
        if let Some(f) = overrides.gamma12_dephasing_factor {
            params.dephasing.g12 *= f;
        }
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::invalid("eta", "aspect ratio must be positive (disc-potential precondition)"));
        }
        if !(self.n_bg.is_finite() && self.n_bg > 0.0) {
            return Err(Error::invalid("n_bg", "must be positive"));
        }
        if !(self.sigma_ih_mev.is_finite() && self.sigma_ih_mev > 0.0) {
            return Err(Error::invalid("sigma_ih", "FWHM must be positive"));
        }
        for (name, t) in [("ab", self.ab), ("bc", self.bc), ("ac", self.ac)] {
            if !(t.decay_uev.is_finite() && t.decay_uev >= 0.0) {
                return Err(Error::invalid(format!("{name}.decay"), "rate must be non-negative"));
            }
            if !(t.dipole_e_nm.is_finite() && t.dipole_e_nm >= 0.0) {
                return Err(Error::invalid(format!("{name}.dipole"), "must be non-negative"));
            }
            if !(t.energy_ev.is_finite() && t.energy_ev > 0.0) {
                return Err(Error::invalid(format!("{name}.energy"), "must be positive"));
            }
        }
        Ok(())
    }
}

fn dephasing_overrides(d: [Option<f64>; 3]) -> Result<[Option<f64>; 3]> {
    let mut out = [None; 3];
    for (slot, (v, name)) in out.iter_mut().zip(d.into_iter().zip(["gamma12", "gamma13", "gamma23"])) {
        if let Some(v) = v {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!("dephasing.{name}"), "rate must be non-negative"));
            }
            *slot = Some(AngularFrequency::from_uev(v)?.0);
        }
    }
    Ok(out)
}
