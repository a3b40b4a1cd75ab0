//! User scenario files: JSON with an explicit unit on every physical
//! quantity, e.g. `"2.6ueV"`, `"10meV"`, `"1200nm3"`, `"0.7enm"`,
//! `"500W/cm2"`, `"5mm"`.

use serde::Deserialize;
use serde_json::Value as Json;

use crate::ensemble::QuadratureOptions;
use crate::error::{Error, Result};
use crate::material::{Material, RateOverrides, Transition};
use crate::scenario::{builtin_scenario, linspace, logspace, symlog, Curve, Scenario, Sweep};
use crate::scheme::SchemeKind;
use crate::units::{ELEMENTARY_CHARGE, HBAR};

/// Physical dimension of a quantity string.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    /// Canonical unit eV; `rad/s` is accepted and converted with ħ.
    Energy,
    /// nm³.
    Volume,
    /// e·nm.
    Dipole,
    /// W/cm².
    Intensity,
    /// m.
    Length,
    /// dB.
    Ratio,
}

fn units(dim: Dimension) -> &'static [(&'static str, f64)] {
    match dim {
        Dimension::Energy => &[
            ("eV", 1.0),
            ("meV", 1e-3),
            ("ueV", 1e-6),
            ("μeV", 1e-6),
            ("µeV", 1e-6),
            ("rad/s", HBAR / ELEMENTARY_CHARGE),
        ],
        Dimension::Volume => &[("nm3", 1.0), ("nm^3", 1.0), ("m3", 1e27), ("m^3", 1e27)],
        Dimension::Dipole => &[("enm", 1.0), ("e*nm", 1.0), ("e·nm", 1.0), ("Cm", 1.0 / (ELEMENTARY_CHARGE * 1e-9))],
        Dimension::Intensity => &[("W/cm2", 1.0), ("kW/cm2", 1e3), ("MW/cm2", 1e6), ("W/m2", 1e-4)],
        Dimension::Length => &[("m", 1.0), ("cm", 1e-2), ("mm", 1e-3), ("um", 1e-6), ("μm", 1e-6), ("nm", 1e-9)],
        Dimension::Ratio => &[("dB", 1.0)],
    }
}

/// Parses `"<number><unit>"` into the canonical unit of `dim`.
pub fn parse_quantity(raw: &str, dim: Dimension) -> Result<f64> {
    let s = raw.trim();
    let split = s
        .char_indices()
        .map(|(i, _)| i)
        .chain([s.len()])
        .filter(|&i| s[..i].trim().parse::<f64>().is_ok())
        .last();
    let Some(k) = split else {
        return Err(Error::Config(format!("`{raw}`: expected a number followed by a unit")));
    };
    let value: f64 = s[..k].trim().parse().unwrap_or(f64::NAN);
    let unit = s[k..].trim();
    if unit.is_empty() {
        return Err(Error::Config(format!("`{raw}`: missing unit")));
    }
    let Some(&(_, scale)) = units(dim).iter().find(|(u, _)| *u == unit) else {
        let known: Vec<&str> = units(dim).iter().map(|(u, _)| *u).collect();
        return Err(Error::Config(format!("`{raw}`: unknown unit `{unit}` (expected one of {})", known.join(", "))));
    };
    if !value.is_finite() {
        return Err(Error::Config(format!("`{raw}`: not a finite number")));
    }
    Ok(value * scale)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionConfig {
    pub energy: Option<String>,
    pub dipole: Option<String>,
    pub decay: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub eta: Option<f64>,
    pub confinement: Option<f64>,
    pub volume: Option<String>,
    pub sigma_ih: Option<String>,
    pub n_bg: Option<f64>,
    pub ab: Option<TransitionConfig>,
    pub bc: Option<TransitionConfig>,
    pub ac: Option<TransitionConfig>,
    pub kappa: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DephasingConfig {
    pub gamma12: Option<String>,
    pub gamma13: Option<String>,
    pub gamma23: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub label: Option<String>,
    pub scheme: String,
    #[serde(default = "yes")]
    pub ihb: bool,
    pub gamma12_decay: Option<String>,
    pub gamma12_ratio: Option<f64>,
    pub gamma12_dephasing_factor: Option<f64>,
    #[serde(default)]
    pub dephasing: DephasingConfig,
    pub eta: Option<f64>,
    pub kappa: Option<f64>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum AxisConfig {
    Values(Vec<String>),
    Range {
        from: String,
        to: String,
        points: usize,
        #[serde(default)]
        spacing: Spacing,
    },
}

#[derive(Debug, Default, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
    /// Symmetric: 0 and ±10^d between |from| and |to|.
    Symlog,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SweepConfig {
    Intensity { intensities: AxisConfig },
    Spectrum { rabi: AxisConfig, detunings: AxisConfig },
    DotMap { rabi: String, delta_ih: AxisConfig, detunings: AxisConfig },
    PropagationMap { intensities: AxisConfig, z_max: String, n_z: usize },
    FixedTransmission { intensities: AxisConfig, target: String, z_max: String, n_z: usize },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub id: Option<String>,
    /// Builtin scenario the file starts from.
    pub base: Option<String>,
    pub description: Option<String>,
    #[serde(default)]
    pub material: MaterialConfig,
    pub curves: Option<Vec<CurveConfig>>,
    pub sweep: Option<SweepConfig>,
    pub tolerance: Option<f64>,
    pub max_subdivisions: Option<usize>,
}

/// A parsed file: the resolved scenario and the document it came from.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub scenario: Scenario,
    pub input: Json,
}

struct Ctx<'a> {
    src: &'a str,
}

impl Ctx<'_> {
    /// Error tagged with the field path and, when the offending literal can
    /// be found in the source, its line.
    fn err(&self, path: &str, raw: Option<&str>, msg: impl std::fmt::Display) -> Error {
        let line = raw.and_then(|r| {
            let needle = format!("\"{r}\"");
            self.src.find(&needle).map(|at| self.src[..at].matches('\n').count() + 1)
        });
        match line {
            Some(l) => Error::Config(format!("line {l}: {path}: {msg}")),
            None => Error::Config(format!("{path}: {msg}")),
        }
    }

    fn quantity(&self, path: &str, raw: &str, dim: Dimension) -> Result<f64> {
        parse_quantity(raw, dim).map_err(|e| match e {
            Error::Config(m) => self.err(path, Some(raw), m),
            other => other,
        })
    }

    fn rate(&self, path: &str, raw: &str) -> Result<f64> {
        let ev = self.quantity(path, raw, Dimension::Energy)?;
        if ev < 0.0 {
            return Err(self.err(path, Some(raw), "rate must be non-negative"));
        }
        Ok(ev)
    }

    fn axis(&self, path: &str, a: &AxisConfig, dim: Dimension) -> Result<Vec<f64>> {
        let out = match a {
            AxisConfig::Values(v) => v
                .iter()
                .enumerate()
                .map(|(i, r)| self.quantity(&format!("{path}[{i}]"), r, dim))
                .collect::<Result<Vec<_>>>()?,
            AxisConfig::Range { from, to, points, spacing } => {
                let lo = self.quantity(&format!("{path}.from"), from, dim)?;
                let hi = self.quantity(&format!("{path}.to"), to, dim)?;
                match spacing {
                    Spacing::Linear => linspace(lo, hi, *points),
                    Spacing::Log => {
                        if !(lo > 0.0 && hi > 0.0) {
                            return Err(self.err(path, Some(from), "log spacing needs positive bounds"));
                        }
                        logspace(lo, hi, *points)
                    }
                    Spacing::Symlog => {
                        let (a, b) = (lo.abs().min(hi.abs()), lo.abs().max(hi.abs()));
                        if !(a > 0.0) {
                            return Err(self.err(path, Some(from), "symlog spacing needs non-zero bounds"));
                        }
                        symlog(1.0, a.log10(), b.log10(), *points)
                    }
                }
            }
        };
        if out.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(self.err(path, None, "grid must be strictly increasing"));
        }
        Ok(out)
    }
}

fn ev_to_rad_s(ev: f64) -> f64 {
    ev * ELEMENTARY_CHARGE / HBAR
}

impl ScenarioConfig {
    fn resolve(self, src: &str) -> Result<Scenario> {
        let cx = Ctx { src };
        let mut s = match &self.base {
            Some(b) => builtin_scenario(b)?,
            None => Scenario {
                id: String::new(),
                description: String::new(),
                material: Material::table_one(),
                curves: vec![],
                sweep: Sweep::Intensity { intensities_w_cm2: vec![] },
                quadrature: QuadratureOptions::default(),
            },
        };
        if let Some(id) = self.id {
            s.id = id;
        }
        if let Some(d) = self.description {
            s.description = d;
        }
        let m = &mut s.material;
        let mc = self.material;
        if let Some(x) = mc.eta {
            if !(x > 0.0 && x.is_finite()) {
                return Err(cx.err("material.eta", None, "aspect ratio must be positive (disc-potential precondition)"));
            }
            m.eta = x;
        }
        if let Some(x) = mc.confinement {
            m.confinement = x;
        }
        if let Some(x) = mc.n_bg {
            m.n_bg = x;
        }
        if let Some(k) = mc.kappa {
            m.kappa_override = Some(k);
        }
        if let Some(v) = &mc.volume {
            m.volume_nm3 = cx.quantity("material.volume", v, Dimension::Volume)?;
        }
        if let Some(v) = &mc.sigma_ih {
            m.sigma_ih_mev = cx.rate("material.sigma_ih", v)? * 1e3;
        }
        for (name, tc, slot) in [("ab", mc.ab, &mut m.ab), ("bc", mc.bc, &mut m.bc), ("ac", mc.ac, &mut m.ac)] {
            let Some(tc) = tc else { continue };
            *slot = resolve_transition(&cx, name, &tc, *slot)?;
        }
        if let Some(curves) = self.curves {
            s.curves = curves
                .into_iter()
                .enumerate()
                .map(|(i, c)| resolve_curve(&cx, i, c))
                .collect::<Result<_>>()?;
        }
        if let Some(sw) = self.sweep {
            s.sweep = resolve_sweep(&cx, sw)?;
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(cx.err("tolerance", None, "must be positive"));
            }
            s.quadrature.rel_tol = t;
        }
        if let Some(n) = self.max_subdivisions {
            s.quadrature.max_subdivisions = n;
        }
        if s.id.is_empty() {
            return Err(cx.err("id", None, "required when no base scenario is given"));
        }
        s.validate().map_err(|e| cx.err("scenario", None, e))?;
        Ok(s)
    }
}

fn resolve_transition(cx: &Ctx<'_>, name: &str, tc: &TransitionConfig, mut t: Transition) -> Result<Transition> {
    if let Some(e) = &tc.energy {
        t.energy_ev = cx.quantity(&format!("material.{name}.energy"), e, Dimension::Energy)?;
        if !(t.energy_ev > 0.0) {
            return Err(cx.err(&format!("material.{name}.energy"), Some(e), "must be positive"));
        }
    }
    if let Some(d) = &tc.dipole {
        t.dipole_e_nm = cx.quantity(&format!("material.{name}.dipole"), d, Dimension::Dipole)?;
        if t.dipole_e_nm < 0.0 {
            return Err(cx.err(&format!("material.{name}.dipole"), Some(d), "must be non-negative"));
        }
    }
    if let Some(g) = &tc.decay {
        t.decay_uev = cx.rate(&format!("material.{name}.decay"), g)? * 1e6;
    }
    Ok(t)
}

fn resolve_curve(cx: &Ctx<'_>, i: usize, c: CurveConfig) -> Result<Curve> {
    let path = format!("curves[{i}]");
    let scheme: SchemeKind = c
        .scheme
        .parse()
        .map_err(|e: Error| cx.err(&format!("{path}.scheme"), Some(&c.scheme), e))?;
    let mut o = RateOverrides {
        gamma12_pop_ratio: c.gamma12_ratio,
        gamma12_dephasing_factor: c.gamma12_dephasing_factor,
        ..Default::default()
    };
    if let Some(g) = &c.gamma12_decay {
        o.gamma12_pop_uev = Some(cx.rate(&format!("{path}.gamma12_decay"), g)? * 1e6);
    }
    if let Some(r) = c.gamma12_ratio {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(cx.err(&format!("{path}.gamma12_ratio"), None, "must be non-negative"));
        }
    }
    if let Some(f) = c.gamma12_dephasing_factor {
        if !(f >= 0.0 && f.is_finite()) {
            return Err(cx.err(&format!("{path}.gamma12_dephasing_factor"), None, "must be non-negative"));
        }
    }
    let d = &c.dephasing;
    for (k, (name, raw)) in [("gamma12", &d.gamma12), ("gamma13", &d.gamma13), ("gamma23", &d.gamma23)]
        .into_iter()
        .enumerate()
    {
        if let Some(raw) = raw {
            o.dephasing_uev[k] = Some(cx.rate(&format!("{path}.dephasing.{name}"), raw)? * 1e6);
        }
    }
    if let Some(eta) = c.eta {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(cx.err(&format!("{path}.eta"), None, "aspect ratio must be positive (disc-potential precondition)"));
        }
    }
    Ok(Curve {
        label: c.label.unwrap_or_else(|| scheme.name().to_string()),
        scheme,
        ihb: c.ihb,
        overrides: o,
        eta: c.eta,
        kappa: c.kappa,
    })
}

fn resolve_sweep(cx: &Ctx<'_>, sw: SweepConfig) -> Result<Sweep> {
    let energy_axis = |path: &str, a: &AxisConfig| -> Result<Vec<f64>> {
        Ok(cx.axis(path, a, Dimension::Energy)?.into_iter().map(ev_to_rad_s).collect())
    };
    Ok(match sw {
        SweepConfig::Intensity { intensities } => Sweep::Intensity {
            intensities_w_cm2: cx.axis("sweep.intensities", &intensities, Dimension::Intensity)?,
        },
        SweepConfig::Spectrum { rabi, detunings } => Sweep::Spectrum {
            rabi: energy_axis("sweep.rabi", &rabi)?,
            detunings: energy_axis("sweep.detunings", &detunings)?,
        },
        SweepConfig::DotMap { rabi, delta_ih, detunings } => Sweep::DotMap {
            rabi: ev_to_rad_s(cx.rate("sweep.rabi", &rabi)?),
            delta_ih: energy_axis("sweep.delta_ih", &delta_ih)?,
            detunings: energy_axis("sweep.detunings", &detunings)?,
        },
        SweepConfig::PropagationMap { intensities, z_max, n_z } => Sweep::PropagationMap {
            intensities_w_cm2: cx.axis("sweep.intensities", &intensities, Dimension::Intensity)?,
            z_max: cx.quantity("sweep.z_max", &z_max, Dimension::Length)?,
            n_z,
        },
        SweepConfig::FixedTransmission { intensities, target, z_max, n_z } => Sweep::FixedTransmission {
            intensities_w_cm2: cx.axis("sweep.intensities", &intensities, Dimension::Intensity)?,
            target_db: cx.quantity("sweep.target", &target, Dimension::Ratio)?,
            z_max: cx.quantity("sweep.z_max", &z_max, Dimension::Length)?,
            n_z,
        },
    })
}

/// Parses and validates a scenario file.
pub fn load_config(src: &str) -> Result<LoadedConfig> {
    let input: Json = serde_json::from_str(src).map_err(|e| Error::Config(format!("malformed config: {e}")))?;
    let cfg: ScenarioConfig =
        serde_json::from_str(src).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
    let scenario = cfg.resolve(src)?;
    Ok(LoadedConfig { scenario, input })
}

/// The reference parameter set written out as a config document.
pub fn table_one_config() -> String {
    let m = Material::table_one();
    let t = |t: Transition| {
        serde_json::json!({
            "energy": format!("{}eV", t.energy_ev),
            "dipole": format!("{}enm", t.dipole_e_nm),
            "decay": format!("{}ueV", t.decay_uev),
        })
    };
    let doc = serde_json::json!({
        "id": "table_one",
        "material": {
            "eta": m.eta,
            "confinement": m.confinement,
            "volume": format!("{}nm3", m.volume_nm3),
            "sigma_ih": format!("{}meV", m.sigma_ih_mev),
            "n_bg": m.n_bg,
            "ab": t(m.ab),
            "bc": t(m.bc),
            "ac": t(m.ac),
        },
        "curves": [
            { "scheme": "xi" },
            { "scheme": "v" },
            { "scheme": "lambda" },
        ],
        "sweep": {
            "kind": "intensity",
            "intensities": { "from": "1e-2W/cm2", "to": "1e10W/cm2", "points": 61, "spacing": "log" },
        },
    });
    serde_json::to_string_pretty(&doc).unwrap_or_default()
}

/// Rate in rad/s of an energy quantity string.
pub fn rate_rad_s(raw: &str) -> Result<f64> {
    parse_quantity(raw, Dimension::Energy).map(ev_to_rad_s)
}
