//! Named parameter sets and sweeps, and the tabular datasets they produce.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::ensemble::{average_chi, EnsembleSpec, QuadratureOptions};
use crate::error::{Error, Result};
use crate::material::{Material, RateOverrides};
use crate::optics::{ensemble_metrics, normalized_absorption};
use crate::parallel::{par_map, Execution};
use crate::propagation::{delay_at_fixed_transmission, propagate_column, PropagationGrid, PropagationSetup};
use crate::scheme::SchemeKind;
use crate::susceptibility::{chi, SchemeParams};
use crate::units::{intensity_to_rabi, AngularFrequency, Intensity};

/// Bumped whenever a builtin definition or a column layout changes.
pub const SCENARIO_VERSION: u32 = 1;

pub const BUILTIN_IDS: [&str; 12] = [
    "fig3", "fig4", "fig5a", "fig5b", "fig5c", "fig6", "fig7", "fig9v", "fig9l", "fig10", "fig11", "fig11xi",
];

pub const DEFAULT_INTENSITY_POINTS: usize = 61;
pub const DEFAULT_DETUNING_POINTS: usize = 201;

/// One curve of a scenario: a scheme with optional parameter tweaks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub label: String,
    pub scheme: SchemeKind,
    /// Average over the size distribution; `false` for a single dot.
    pub ihb: bool,
    #[serde(default)]
    pub overrides: RateOverrides,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub kappa: Option<f64>,
}

impl Curve {
    pub fn new(label: impl Into<String>, scheme: SchemeKind, ihb: bool) -> Self {
        Self { label: label.into(), scheme, ihb, overrides: RateOverrides::default(), eta: None, kappa: None }
    }

    fn with_overrides(mut self, o: RateOverrides) -> Self {
        self.overrides = o;
        self
    }

    fn with_eta(mut self, eta: f64) -> Self {
        self.eta = Some(eta);
        self
    }

    fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = Some(kappa);
        self
    }

    pub fn params(&self, material: &Material) -> Result<SchemeParams> {
        let mut m = material.clone();
        if let Some(eta) = self.eta {
            m.eta = eta;
        }
        if let Some(k) = self.kappa {
            m.kappa_override = Some(k);
        }
        m.scheme_params(self.scheme, self.overrides)
    }

    pub fn ensemble(&self, material: &Material) -> Result<EnsembleSpec> {
        if self.ihb {
            material.ensemble()
        } else {
            Ok(EnsembleSpec::delta())
        }
    }
}

/// Sweep axes. Rabi frequencies and detunings are in rad/s.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sweep {
    /// Normalized absorption and slow-down at Δ_p = 0 vs coupling intensity.
    Intensity { intensities_w_cm2: Vec<f64> },
    /// χ vs probe detuning for each Rabi frequency.
    Spectrum { rabi: Vec<f64>, detunings: Vec<f64> },
    /// Single-dot χ over (Δ_ih, Δ_p).
    DotMap { rabi: f64, delta_ih: Vec<f64>, detunings: Vec<f64> },
    /// Delay and transmission over (I₀, z).
    PropagationMap { intensities_w_cm2: Vec<f64>, z_max: f64, n_z: usize },
    /// Delay on a fixed-transmission contour.
    FixedTransmission { intensities_w_cm2: Vec<f64>, target_db: f64, z_max: f64, n_z: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    pub description: String,
    pub material: Material,
    pub curves: Vec<Curve>,
    pub sweep: Sweep,
    #[serde(default)]
    pub quadrature: QuadratureOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Num(f64),
    Text(String),
    Bool(bool),
    Missing,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", content = "message", rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// Target transmission not reached inside the grid.
    Unreachable,
    Failed(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub values: Vec<Value>,
    pub status: RowStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Dataset {
    pub id: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    pub metadata: Json,
}

impl Dataset {
    pub fn failures(&self) -> impl Iterator<Item = (usize, &str)> {
        self.rows.iter().enumerate().filter_map(|(i, r)| match &r.status {
            RowStatus::Failed(m) => Some((i, m.as_str())),
            _ => None,
        })
    }

    pub fn is_partial(&self) -> bool {
        self.failures().next().is_some()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric cell, `None` if missing or not a number.
    pub fn num(&self, row: usize, col: &str) -> Option<f64> {
        match self.rows.get(row)?.values.get(self.column(col)?)? {
            Value::Num(x) => Some(*x),
            _ => None,
        }
    }

    pub fn text(&self, row: usize, col: &str) -> Option<&str> {
        match self.rows.get(row)?.values.get(self.column(col)?)? {
            Value::Text(s) => Some(s),
            _ => None,
        }
    }
}

pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64)).collect(),
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Symmetric log grid: 0 and ±scale·10^d for d in [lo_decade, hi_decade],
/// `n` points in total (n odd).
pub fn symlog(scale: f64, lo_decade: f64, hi_decade: f64, n: usize) -> Vec<f64> {
    let half = n.saturating_sub(1) / 2;
    let side: Vec<f64> = (0..half)
        .map(|k| scale * 10f64.powf(lo_decade + (hi_decade - lo_decade) * k as f64 / (half.max(2) - 1) as f64))
        .collect();
    let mut out: Vec<f64> = side.iter().rev().map(|x| -x).collect();
    out.push(0.0);
    out.extend(side);
    out
}

fn uev(x: f64) -> f64 {
    AngularFrequency::from_uev(x).map(|w| w.0).unwrap_or(f64::NAN)
}

/// Γ₁₃ of the reference material, the detuning scale of the spectra.
fn gamma_ref() -> f64 {
    uev(Material::table_one().ab.decay_uev)
}

pub fn builtin_scenario(id: &str) -> Result<Scenario> {
    let material = Material::table_one();
    let g = gamma_ref();
    let omega10 = uev(10.0);
    let schemes = [SchemeKind::Xi, SchemeKind::V, SchemeKind::Lambda];
    let (curves, sweep, description): (Vec<Curve>, Sweep, &str) = match id {
        "fig3" => (
            [true, false]
                .into_iter()
                .flat_map(|ihb| schemes.map(|s| Curve::new(s.name(), s, ihb)))
                .collect(),
            Sweep::Intensity { intensities_w_cm2: logspace(1e-2, 1e10, DEFAULT_INTENSITY_POINTS) },
            "normalized absorption and slow-down vs coupling intensity, with and without IHB",
        ),
        "fig4" => (
            schemes.map(|s| Curve::new(s.name(), s, false).with_eta(1.0)).to_vec(),
            Sweep::DotMap {
                rabi: omega10,
                delta_ih: linspace(-40.0 * g, 40.0 * g, 161),
                detunings: linspace(-20.0 * g, 20.0 * g, DEFAULT_DETUNING_POINTS),
            },
            "single-dot susceptibility over probe detuning and spectral shift, eta = 1",
        ),
        "fig5a" | "fig5b" | "fig5c" => {
            let (label, o) = decay_case(&id[4..]);
            (
                vec![Curve::new(label, SchemeKind::V, true).with_overrides(o)],
                Sweep::Intensity { intensities_w_cm2: logspace(1e-2, 1e8, DEFAULT_INTENSITY_POINTS) },
                "V-scheme decay-rate case",
            )
        }
        "fig6" => (
            [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0]
                .into_iter()
                .map(|r| {
                    Curve::new(format!("g12_ratio={r}"), SchemeKind::V, false)
                        .with_overrides(RateOverrides { gamma12_pop_ratio: Some(r), ..Default::default() })
                })
                .collect(),
            Sweep::Spectrum { rabi: vec![omega10], detunings: linspace(-30.0 * g, 30.0 * g, DEFAULT_DETUNING_POINTS) },
            "single-dot V susceptibility vs probe detuning for several intraband decay rates",
        ),
        "fig7" => (
            vec![
                // Same rates as the alternative scheme, which has no intraband channel.
                Curve::new("v", SchemeKind::V, true)
                    .with_eta(1.0)
                    .with_overrides(RateOverrides { gamma12_pop_uev: Some(0.0), ..Default::default() }),
                Curve::new("alt_v_kappa_0.43", SchemeKind::AltV, true).with_eta(1.0).with_kappa(0.43),
                Curve::new("alt_v_kappa_disc", SchemeKind::AltV, true).with_eta(1.0),
            ],
            Sweep::Spectrum { rabi: vec![0.0, omega10], detunings: linspace(-40.0 * g, 40.0 * g, DEFAULT_DETUNING_POINTS) },
            "alternative V scheme against the standard V scheme, eta = 1",
        ),
        "fig9v" | "fig9l" => {
            let s = if id == "fig9v" { SchemeKind::FssV } else { SchemeKind::FssLambda };
            let both = [Curve::new(s.name(), s, true), Curve::new(format!("{}_single", s.name()), s, false)];
            (
                both.to_vec(),
                Sweep::Spectrum {
                    rabi: vec![0.0, 2.0 * uev(material.ab.decay_uev)],
                    detunings: symlog(g, -3.0, 2.0, DEFAULT_DETUNING_POINTS),
                },
                "fine-structure-split exciton scheme, ensemble and single dot",
            )
        }
        "fig10" => (
            [SchemeKind::Lambda, SchemeKind::V, SchemeKind::Xi].map(|s| Curve::new(s.name(), s, true)).to_vec(),
            Sweep::PropagationMap { intensities_w_cm2: logspace(1.0, 1e6, DEFAULT_INTENSITY_POINTS), z_max: 5e-3, n_z: 101 },
            "delay and transmission vs injected coupling intensity and length",
        ),
        "fig11" | "fig11xi" => {
            let s = if id == "fig11" { SchemeKind::V } else { SchemeKind::Xi };
            (
                vec![Curve::new(s.name(), s, true)],
                Sweep::FixedTransmission {
                    intensities_w_cm2: logspace(1.0, 1e8, DEFAULT_INTENSITY_POINTS),
                    target_db: -10.0,
                    z_max: 5e-2,
                    n_z: 401,
                },
                "delay at fixed transmission vs injected coupling intensity",
            )
        }
        _ => {
            return Err(Error::UnknownScenario { id: id.to_string(), available: BUILTIN_IDS.join(", ") });
        }
    };
    Ok(Scenario {
        id: id.to_string(),
        description: description.to_string(),
        material,
        curves,
        sweep,
        quadrature: QuadratureOptions::default(),
    })
}

/// (a) no intraband decay, (b) as (a) with γ₁₂ ×1000, (c) Γ₁₂ = 25 Γ₁₃.
fn decay_case(case: &str) -> (&'static str, RateOverrides) {
    match case {
        "a" => ("v_case_a", RateOverrides { gamma12_pop_uev: Some(0.0), ..Default::default() }),
        "b" => (
            "v_case_b",
            RateOverrides { gamma12_pop_uev: Some(0.0), gamma12_dephasing_factor: Some(1000.0), ..Default::default() },
        ),
        _ => ("v_case_c", RateOverrides { gamma12_pop_ratio: Some(25.0), ..Default::default() }),
    }
}

fn check_axis(name: &str, xs: &[f64], positive: bool) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite() || (positive && *x < 0.0)) {
        return Err(Error::invalid(name, "values must be finite and non-negative"));
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid(name, "grid must be strictly increasing"));
    }
    Ok(())
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.id.trim().is_empty() {
            return Err(Error::invalid("id", "must not be empty"));
        }
        self.material.validate()?;
        for (i, c) in self.curves.iter().enumerate() {
            if self.curves[..i].iter().any(|o| o.label == c.label && o.ihb == c.ihb) {
                return Err(Error::invalid("curves", format!("duplicate label `{}`", c.label)));
            }
            c.params(&self.material)?;
        }
        let q = &self.quadrature;
        if !(q.rel_tol.is_finite() && q.rel_tol > 0.0) {
            return Err(Error::invalid("tolerance", "must be positive"));
        }
        match &self.sweep {
            Sweep::Intensity { intensities_w_cm2 } => check_axis("intensities", intensities_w_cm2, true),
            Sweep::Spectrum { rabi, detunings } => {
                check_axis("rabi", rabi, true)?;
                check_axis("detunings", detunings, false)
            }
            Sweep::DotMap { rabi, delta_ih, detunings } => {
                check_axis("rabi", &[*rabi], true)?;
                check_axis("delta_ih", delta_ih, false)?;
                check_axis("detunings", detunings, false)
            }
            Sweep::PropagationMap { intensities_w_cm2, z_max, n_z } => {
                check_axis("intensities", intensities_w_cm2, true)?;
                PropagationGrid::new(*z_max, *n_z).map(|_| ())
            }
            Sweep::FixedTransmission { intensities_w_cm2, target_db, z_max, n_z } => {
                check_axis("intensities", intensities_w_cm2, true)?;
                if !(*target_db < 0.0) {
                    return Err(Error::invalid("target_db", "must be negative"));
                }
                PropagationGrid::new(*z_max, *n_z).map(|_| ())
            }
        }
    }

    pub fn columns(&self) -> Vec<String> {
        let cols: &[&str] = match &self.sweep {
            Sweep::Intensity { .. } => &["intensity_w_cm2", "scheme", "ihb", "norm_absorption", "slowdown"],
            Sweep::Spectrum { .. } => &[
                "curve",
                "ihb",
                "rabi_rad_s",
                "delta_p_rad_s",
                "delta_p_scaled",
                "chi_re",
                "chi_im",
                "chi_re_scaled",
                "chi_im_scaled",
            ],
            Sweep::DotMap { .. } => {
                &["curve", "delta_ih_rad_s", "delta_p_rad_s", "chi_re", "chi_im", "chi_re_scaled", "chi_im_scaled"]
            }
            Sweep::PropagationMap { .. } => {
                &["curve", "intensity_w_cm2", "z_m", "coupling_w_cm2", "delay_s", "transmission_db"]
            }
            Sweep::FixedTransmission { .. } => &["intensity_w_cm2", "z_star_m", "delay_s", "transmission_db"],
        };
        let mut out: Vec<String> = cols.iter().map(|s| s.to_string()).collect();
        if matches!(self.sweep, Sweep::FixedTransmission { .. }) && self.curves.len() > 1 {
            out.insert(0, "curve".into());
        }
        out
    }
}

struct Resolved {
    params: SchemeParams,
    spec: EnsembleSpec,
}

fn failed(n: usize, e: &Error) -> Row {
    Row { values: vec![Value::Missing; n], status: RowStatus::Failed(e.to_string()) }
}

fn ok(values: Vec<Value>) -> Row {
    Row { values, status: RowStatus::Ok }
}

fn rabi_from(p: &SchemeParams, n_bg: f64, i_w_cm2: f64) -> Result<f64> {
    Ok(intensity_to_rabi(Intensity::from_w_cm2(i_w_cm2)?, p.mu23, n_bg)?.0)
}

/// Evaluates every sweep point. Per-point failures become rows with
/// [`RowStatus::Failed`]; the run itself only fails on invalid input.
pub fn run_scenario(s: &Scenario, exec: Execution) -> Result<Dataset> {
    s.validate()?;
    let columns = s.columns();
    let width = columns.len();
    let resolved: Vec<Resolved> = s
        .curves
        .iter()
        .map(|c| Ok(Resolved { params: c.params(&s.material)?, spec: c.ensemble(&s.material)? }))
        .collect::<Result<_>>()?;
    let n_bg = s.material.n_bg;
    let opts = s.quadrature;
    let rows: Vec<Row> = match &s.sweep {
        Sweep::Intensity { intensities_w_cm2 } => {
            let baselines = par_map(&resolved, exec, |r| {
                ensemble_metrics(&r.spec, &r.params, 0.0, 0.0, 0.0, n_bg, &opts).map(|m| m.chi[1])
            });
            let points: Vec<(usize, f64)> =
                (0..s.curves.len()).flat_map(|c| intensities_w_cm2.iter().map(move |&i| (c, i))).collect();
            par_map(&points, exec, |&(c, i)| {
                let r = &resolved[c];
                let eval = || -> Result<(f64, f64)> {
                    let base = baselines[c].as_ref().map_err(|e| Error::Config(format!("baseline: {e}")))?;
                    let rabi = rabi_from(&r.params, n_bg, i)?;
                    let m = ensemble_metrics(&r.spec, &r.params, 0.0, 0.0, rabi, n_bg, &opts)?;
                    Ok((normalized_absorption(m.chi[1], *base)?, m.slowdown))
                };
                match eval() {
                    Ok((a, sl)) => ok(vec![
                        Value::Num(i),
                        Value::Text(s.curves[c].label.clone()),
                        Value::Bool(s.curves[c].ihb),
                        Value::Num(a),
                        Value::Num(sl),
                    ]),
                    Err(e) => {
                        let mut row = failed(width, &e);
                        row.values[0] = Value::Num(i);
                        row.values[1] = Value::Text(s.curves[c].label.clone());
                        row.values[2] = Value::Bool(s.curves[c].ihb);
                        row
                    }
                }
            })
        }
        Sweep::Spectrum { rabi, detunings } => {
            let points: Vec<(usize, f64, f64)> = (0..s.curves.len())
                .flat_map(|c| rabi.iter().flat_map(move |&w| detunings.iter().map(move |&d| (c, w, d))))
                .collect();
            par_map(&points, exec, |&(c, w, d)| {
                let r = &resolved[c];
                let head = vec![
                    Value::Text(s.curves[c].label.clone()),
                    Value::Bool(s.curves[c].ihb),
                    Value::Num(w),
                    Value::Num(d),
                    Value::Num(d / r.params.population.g13),
                ];
                match average_chi(&r.spec, &r.params, d, 0.0, w, &opts) {
                    Ok(x) => {
                        let pref = r.params.prefactor();
                        let mut v = head;
                        v.extend([x.re, x.im, x.re / pref, x.im / pref].map(Value::Num));
                        ok(v)
                    }
                    Err(e) => {
                        let mut row = failed(width, &e);
                        row.values.splice(0..5, head);
                        row
                    }
                }
            })
        }
        Sweep::DotMap { rabi, delta_ih, detunings } => {
            let points: Vec<(usize, f64)> =
                (0..s.curves.len()).flat_map(|c| delta_ih.iter().map(move |&x| (c, x))).collect();
            par_map(&points, exec, |&(c, x)| {
                let r = &resolved[c];
                let pref = r.params.prefactor();
                detunings
                    .iter()
                    .map(|&d| {
                        let head = vec![Value::Text(s.curves[c].label.clone()), Value::Num(x), Value::Num(d)];
                        match chi(d, 0.0, x, &r.params, *rabi) {
                            Ok(v) => {
                                let mut out = head;
                                out.extend([v.re, v.im, v.re / pref, v.im / pref].map(Value::Num));
                                ok(out)
                            }
                            Err(e) => {
                                let mut row = failed(width, &e);
                                row.values.splice(0..3, head);
                                row
                            }
                        }
                    })
                    .collect::<Vec<_>>()
            })
            .into_iter()
            .flatten()
            .collect()
        }
        Sweep::PropagationMap { intensities_w_cm2, z_max, n_z } => {
            let grid = PropagationGrid::new(*z_max, *n_z)?;
            let points: Vec<(usize, f64)> =
                (0..s.curves.len()).flat_map(|c| intensities_w_cm2.iter().map(move |&i| (c, i))).collect();
            par_map(&points, exec, |&(c, i)| {
                let r = &resolved[c];
                let setup = PropagationSetup { params: &r.params, spec: &r.spec, n_bg, opts };
                let label = Value::Text(s.curves[c].label.clone());
                match Intensity::from_w_cm2(i).and_then(|i0| propagate_column(&setup, i0, &grid)) {
                    Ok(col) => col
                        .iter()
                        .map(|rec| {
                            ok(vec![
                                label.clone(),
                                Value::Num(i),
                                Value::Num(rec.z),
                                Value::Num(rec.coupling_intensity * 1e-4),
                                Value::Num(rec.delay),
                                Value::Num(rec.transmission_db),
                            ])
                        })
                        .collect(),
                    Err(e) => grid
                        .points()
                        .into_iter()
                        .map(|z| {
                            let mut row = failed(width, &e);
                            row.values.splice(0..3, [label.clone(), Value::Num(i), Value::Num(z)]);
                            row
                        })
                        .collect::<Vec<_>>(),
                }
            })
            .into_iter()
            .flatten()
            .collect()
        }
        Sweep::FixedTransmission { intensities_w_cm2, target_db, z_max, n_z } => {
            let grid = PropagationGrid::new(*z_max, *n_z)?;
            let labelled = width == 5;
            let points: Vec<(usize, f64)> =
                (0..s.curves.len()).flat_map(|c| intensities_w_cm2.iter().map(move |&i| (c, i))).collect();
            par_map(&points, exec, |&(c, i)| {
                let r = &resolved[c];
                let setup = PropagationSetup { params: &r.params, spec: &r.spec, n_bg, opts };
                let mut head = vec![Value::Num(i)];
                if labelled {
                    head.insert(0, Value::Text(s.curves[c].label.clone()));
                }
                let res = Intensity::from_w_cm2(i)
                    .and_then(|i0| delay_at_fixed_transmission(&setup, i0, &grid, *target_db));
                let mut row = match res {
                    Ok(Some(x)) => ok(vec![
                        Value::Missing,
                        Value::Num(x.z_star),
                        Value::Num(x.delay),
                        Value::Num(x.transmission_db),
                    ]),
                    Ok(None) => Row { values: vec![Value::Missing; 4], status: RowStatus::Unreachable },
                    Err(e) => failed(4, &e),
                };
                row.values.splice(0..1, head);
                row
            })
        }
    };
    let metadata = metadata(s, &resolved, &columns, &rows);
    Ok(Dataset { id: s.id.clone(), columns, rows, metadata })
}

fn metadata(s: &Scenario, resolved: &[Resolved], columns: &[String], rows: &[Row]) -> Json {
    let curves: Vec<Json> = s
        .curves
        .iter()
        .zip(resolved)
        .map(|(c, r)| json!({ "curve": c, "resolved_si": r.params, "ensemble": r.spec }))
        .collect();
    let failures: Vec<Json> = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| match &r.status {
            RowStatus::Failed(m) => Some(json!({ "row": i, "message": m })),
            _ => None,
        })
        .collect();
    let unreachable = rows.iter().filter(|r| r.status == RowStatus::Unreachable).count();
    json!({
        "scenario": s.id,
        "description": s.description,
        "scenario_version": SCENARIO_VERSION,
        "code_version": env!("CARGO_PKG_VERSION"),
        "columns": columns,
        "material_input": s.material,
        "curves": curves,
        "sweep": s.sweep,
        "quadrature": s.quadrature,
        "conventions": {
            "angular_frequency": "rad/s, converted from energy as E/hbar",
            "rabi": "Omega_c = mu E / (2 hbar), I = n_bg c eps0 |E|^2 / 2",
            "absorption": "field coefficient alpha = omega chi'' / (2 n_bg c)",
            "transmission_db": "intensity ratio, -20 <alpha> z log10(e)",
            "norm_absorption": "<chi''>(Omega_c) / <chi''>(0) at zero probe detuning",
            "scaled": "chi / (Gamma_conf mu13^2 / (V eps0 hbar)), detuning / Gamma13",
        },
        "rows": rows.len(),
        "unreachable": unreachable,
        "failures": failures,
    })
}
