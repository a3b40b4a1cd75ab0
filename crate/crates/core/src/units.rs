//! Physical constants and the unit conversions used throughout the crate.
//!
//! Every rate, detuning and Rabi frequency is carried internally as an
//! angular frequency in rad/s. Inputs arrive in the mixed units of the
//! material tables (eV, meV, μeV, W/cm², e·nm) and are converted once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Elementary charge (C), exact in SI 2019.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 6.626_070_15e-34 / (2.0 * std::f64::consts::PI);
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity (F/m), CODATA 2018.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// Electron rest mass (kg), CODATA 2018.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Default background refractive index (GaAs-like host).
pub const DEFAULT_BACKGROUND_INDEX: f64 = 3.5;

/// Signed angular frequency in rad/s.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngularFrequency(pub f64);

impl AngularFrequency {
    pub const ZERO: Self = Self(0.0);

    pub fn from_ev(e: f64) -> Result<Self> {
        energy_to_angular_frequency(e)
    }

    pub fn from_mev(e: f64) -> Result<Self> {
        energy_to_angular_frequency(e * 1e-3)
    }

    pub fn from_uev(e: f64) -> Result<Self> {
        energy_to_angular_frequency(e * 1e-6)
    }

    pub fn rad_per_s(self) -> f64 {
        self.0
    }

    pub fn to_ev(self) -> f64 {
        self.0 * HBAR / ELEMENTARY_CHARGE
    }
}

/// Transition dipole moment in C·m.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DipoleMoment(f64);

impl DipoleMoment {
    pub fn from_coulomb_meter(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite("dipole moment"));
        }
        if value < 0.0 {
            return Err(Error::invalid("dipole moment", "must be non-negative"));
        }
        Ok(Self(value))
    }

    /// Dipole moment given in units of e·nm.
    pub fn from_e_nm(value: f64) -> Result<Self> {
        Self::from_coulomb_meter(value * ELEMENTARY_CHARGE * 1e-9)
    }

    pub fn coulomb_meter(self) -> f64 {
        self.0
    }

    pub fn e_nm(self) -> f64 {
        self.0 / (ELEMENTARY_CHARGE * 1e-9)
    }
}

/// Optical intensity in W/m².
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Intensity(f64);

impl Intensity {
    pub fn from_w_m2(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite("intensity"));
        }
        if value < 0.0 {
            return Err(Error::invalid("intensity", "must be non-negative"));
        }
        Ok(Self(value))
    }

    pub fn from_w_cm2(value: f64) -> Result<Self> {
        Self::from_w_m2(value * 1e4)
    }

    pub fn w_m2(self) -> f64 {
        self.0
    }

    pub fn w_cm2(self) -> f64 {
        self.0 * 1e-4
    }
}

/// Converts a photon/transition energy in eV to an angular frequency.
pub fn energy_to_angular_frequency(e: f64) -> Result<AngularFrequency> {
    if !e.is_finite() {
        return Err(Error::NonFinite("energy"));
    }
    Ok(AngularFrequency(e * ELEMENTARY_CHARGE / HBAR))
}

/// Coupling Rabi frequency Ω = μE/(2ħ) of a plane wave with I = ½ n c ε₀ |E|².
///
/// This is the off-diagonal element of the rotating-frame Hamiltonian
/// (in units of ħ), not the full Rabi flopping frequency μE/ħ.
pub fn intensity_to_rabi(i: Intensity, mu: DipoleMoment, n_bg: f64) -> Result<AngularFrequency> {
    check_dipole_and_index(mu, n_bg)?;
    let field = (2.0 * i.w_m2() / (n_bg * SPEED_OF_LIGHT * VACUUM_PERMITTIVITY)).sqrt();
    Ok(AngularFrequency(mu.coulomb_meter() * field / (2.0 * HBAR)))
}

/// Inverse of [`intensity_to_rabi`]: I = 2 n c ε₀ (ħΩ/μ)².
pub fn rabi_to_intensity(rabi: AngularFrequency, mu: DipoleMoment, n_bg: f64) -> Result<Intensity> {
    check_dipole_and_index(mu, n_bg)?;
    if !rabi.0.is_finite() {
        return Err(Error::NonFinite("rabi frequency"));
    }
    let ratio = HBAR * rabi.0 / mu.coulomb_meter();
    Intensity::from_w_m2(2.0 * n_bg * SPEED_OF_LIGHT * VACUUM_PERMITTIVITY * ratio * ratio)
}

fn check_dipole_and_index(mu: DipoleMoment, n_bg: f64) -> Result<()> {
    if mu.coulomb_meter() <= 0.0 {
        return Err(Error::invalid(
            "dipole moment",
            "Rabi frequency undefined for a zero dipole moment",
        ));
    }
    if !(n_bg.is_finite() && n_bg > 0.0) {
        return Err(Error::invalid("n_bg", "background index must be positive"));
    }
    Ok(())
}
