//! One-dimensional propagation of a cw probe alongside a coupling field
//! that is itself absorbed (V scheme) as a saturable two-level medium.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensemble::{average_chi_stencil, EnsembleSpec, QuadratureOptions};
use crate::error::{Error, Result};
use crate::optics::{derivative_step, group_index_from_stencil, stencil_offsets, with_step_fallback};
use crate::quadrature::{integrate, Tolerance};
use crate::scheme::KernelFamily;
use crate::susceptibility::SchemeParams;
use crate::units::{intensity_to_rabi, Intensity, SPEED_OF_LIGHT};

/// Relative step-halving tolerance on I(z_max).
pub const COUPLING_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropagationGrid {
    pub z_max: f64,
    pub n_z: usize,
}

impl PropagationGrid {
    pub fn new(z_max: f64, n_z: usize) -> Result<Self> {
        if !(z_max.is_finite() && z_max > 0.0) {
            return Err(Error::invalid("z_max", "must be positive"));
        }
        if n_z < 2 {
            return Err(Error::invalid("n_z", "need at least two grid points"));
        }
        Ok(Self { z_max, n_z })
    }

    pub fn step(&self) -> f64 {
        self.z_max / (self.n_z - 1) as f64
    }

    pub fn z(&self, i: usize) -> f64 {
        if i + 1 == self.n_z {
            self.z_max
        } else {
            i as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_z).map(|i| self.z(i)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropagationRecord {
    pub z: f64,
    /// Coupling intensity (W/m²).
    pub coupling_intensity: f64,
    pub rabi: f64,
    pub avg_n_g: f64,
    /// z-averaged field absorption coefficient (1/m).
    pub avg_alpha: f64,
    pub delay: f64,
    pub transmission_db: f64,
    /// Pointwise ⟨χ''⟩ at this z.
    pub local_chi_im: f64,
    /// Pointwise ⟨χ'⟩ + ω∂⟨χ'⟩/∂ω at this z.
    pub local_dispersion: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingProfile {
    pub z: Vec<f64>,
    /// W/m².
    pub intensity: Vec<f64>,
    pub rabi: Vec<f64>,
}

/// Effective relaxation of the coupled upper level, Γ₂₃ + (Γ₁₂⁻¹ + Γ₁₃⁻¹)⁻¹.
pub fn effective_decay(p: &SchemeParams) -> f64 {
    let pop = &p.population;
    let cascade = if pop.g12 > 0.0 && pop.g13 > 0.0 {
        1.0 / (1.0 / pop.g12 + 1.0 / pop.g13)
    } else {
        0.0
    };
    pop.g23 + cascade
}

/// Settings shared by the propagation routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagationSetup<'a> {
    pub params: &'a SchemeParams,
    pub spec: &'a EnsembleSpec,
    pub n_bg: f64,
    pub opts: QuadratureOptions,
}

impl PropagationSetup<'_> {
    fn rabi(&self, intensity_w_m2: f64) -> Result<f64> {
        Ok(intensity_to_rabi(Intensity::from_w_m2(intensity_w_m2.max(0.0))?, self.params.mu23, self.n_bg)?.0)
    }

    fn absorbs_coupling(&self) -> bool {
        self.params.scheme.family() == KernelFamily::V && self.params.mu23.coulomb_meter() > 0.0
    }

    /// Ensemble-averaged intensity absorption coefficient of the coupling
    /// field (1/m) at intensity `i` (W/m²) and coupling detuning Δ_c = 0.
    pub fn coupling_absorption(&self, i: f64) -> Result<f64> {
        if !self.absorbs_coupling() {
            return Ok(0.0);
        }
        let p = self.params;
        let rabi = self.rabi(i)?;
        let g = p.dephasing.g23;
        let saturation = 4.0 * rabi * rabi * g / effective_decay(p);
        let line = |d: f64| p.coupling_prefactor() * g / (d * d + g * g + saturation);
        let chi_im = if self.spec.is_delta() {
            line(0.0)
        } else {
            let half = self.spec.half_window();
            let kappa = p.kappa;
            let width = (g * g + saturation).sqrt() / kappa.abs().max(1e-300);
            let mut edges = vec![-half, half, 0.0];
            let mut step = width.min(half);
            while step < half {
                edges.extend([-step, step]);
                step *= 4.0;
            }
            edges.sort_by(f64::total_cmp);
            edges.dedup();
            let tol = Tolerance {
                relative: self.opts.rel_tol.min(1e-9),
                absolute: 0.0,
                max_subdivisions: self.opts.max_subdivisions,
            };
            integrate(&edges, 1, tol, |x, o| {
                o[0] = Complex64::new(self.spec.density(x) * line(kappa * x), 0.0);
                Ok(())
            })?
            .values[0]
                .re
        };
        Ok(2.0 * p.coupling_frequency * chi_im / (2.0 * self.n_bg * SPEED_OF_LIGHT))
    }
}

fn rk4_sweep(setup: &PropagationSetup<'_>, i0: f64, z_max: f64, steps: usize, keep: usize) -> Result<Vec<f64>> {
    let h = z_max / steps as f64;
    let stride = steps / (keep - 1);
    let mut out = Vec::with_capacity(keep);
    let mut i = i0;
    out.push(i);
    let deriv = |v: f64| -> Result<f64> { Ok(-setup.coupling_absorption(v)? * v) };
    for n in 0..steps {
        let z = n as f64 * h;
        let k1 = deriv(i)?;
        let k2 = deriv(i + 0.5 * h * k1)?;
        let k3 = deriv(i + 0.5 * h * k2)?;
        let k4 = deriv(i + h * k3)?;
        i += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !(i >= 0.0) || !i.is_finite() {
            return Err(Error::Propagation { z: z + h, reason: format!("coupling intensity became {i:e}") });
        }
        if (n + 1) % stride == 0 {
            out.push(i);
        }
    }
    Ok(out)
}

/// Coupling intensity along the grid by fixed-step RK4, refined by step
/// halving until I(z_max) changes by less than [`COUPLING_TOLERANCE`].
pub fn propagate_coupling(setup: &PropagationSetup<'_>, i0: Intensity, grid: &PropagationGrid) -> Result<CouplingProfile> {
    let z = grid.points();
    let i0 = i0.w_m2();
    let intensity = if !setup.absorbs_coupling() || i0 == 0.0 {
        vec![i0; grid.n_z]
    } else {
        let intervals = grid.n_z - 1;
        let mut steps = intervals;
        let mut prev = rk4_sweep(setup, i0, grid.z_max, steps, grid.n_z)?;
        loop {
            steps *= 2;
            let next = rk4_sweep(setup, i0, grid.z_max, steps, grid.n_z)?;
            let a = *prev.last().unwrap();
            let b = *next.last().unwrap();
            if (a - b).abs() <= COUPLING_TOLERANCE * b.abs().max(1e-300 * i0) || steps > intervals * 1024 {
                if (a - b).abs() > COUPLING_TOLERANCE * b.abs() {
                    return Err(Error::Propagation {
                        z: grid.z_max,
                        reason: "coupling integration did not converge under step halving".into(),
                    });
                }
                break next;
            }
            prev = next;
        }
    };
    let rabi = intensity.iter().map(|&v| setup.rabi(v)).collect::<Result<Vec<_>>>()?;
    Ok(CouplingProfile { z, intensity, rabi })
}

/// Pointwise probe response at one z: (χ' + ω∂χ'/∂ω, χ'') at Δ_p = Δ_c = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
struct LocalResponse {
    dispersion: f64,
    absorption: f64,
}

fn local_response(setup: &PropagationSetup<'_>, rabi: f64) -> Result<LocalResponse> {
    with_step_fallback(derivative_step(setup.params, rabi), |h| local_response_at(setup, rabi, h))
}

fn local_response_at(setup: &PropagationSetup<'_>, rabi: f64, h: f64) -> Result<LocalResponse> {
    let p = setup.params;
    let offsets = stencil_offsets(h);
    let chi = average_chi_stencil(setup.spec, p, 0.0, &offsets, 0.0, rabi, &setup.opts)?.values;
    let omega = p.probe_frequency;
    // Runs the Richardson consistency check on the full index.
    group_index_from_stencil(&chi, omega, h, setup.n_bg)?;
    let coarse = (chi[4].re - chi[0].re) / (2.0 * h);
    let fine = (chi[3].re - chi[1].re) / h;
    let slope = (4.0 * fine - coarse) / 3.0;
    Ok(LocalResponse {
        dispersion: chi[2].re + omega * slope,
        absorption: chi[2].im,
    })
}

fn transmission_db(avg_alpha: f64, z: f64) -> f64 {
    -20.0 * avg_alpha * z * std::f64::consts::LOG10_E
}

/// Probe metrics on every grid point for a given coupling profile.
pub fn probe_metrics_along_z(setup: &PropagationSetup<'_>, profile: &CouplingProfile) -> Result<Vec<PropagationRecord>> {
    let constant = profile.rabi.windows(2).all(|w| w[0] == w[1]);
    let local: Vec<LocalResponse> = if constant && !profile.rabi.is_empty() {
        vec![local_response(setup, profile.rabi[0])?; profile.rabi.len()]
    } else {
        profile
            .rabi
            .iter()
            .zip(&profile.z)
            .map(|(&r, &z)| {
                local_response(setup, r).map_err(|e| Error::Propagation { z, reason: e.to_string() })
            })
            .collect::<Result<_>>()?
    };
    Ok(records_from_local(setup, profile, &local))
}

fn records_from_local(setup: &PropagationSetup<'_>, profile: &CouplingProfile, local: &[LocalResponse]) -> Vec<PropagationRecord> {
    let n_bg = setup.n_bg;
    let omega = setup.params.probe_frequency;
    let mut int_disp = 0.0;
    let mut int_abs = 0.0;
    let mut out = Vec::with_capacity(local.len());
    for k in 0..local.len() {
        let z = profile.z[k];
        if k > 0 {
            let dz = z - profile.z[k - 1];
            int_disp += 0.5 * dz * (local[k].dispersion + local[k - 1].dispersion);
            int_abs += 0.5 * dz * (local[k].absorption + local[k - 1].absorption);
        }
        let (avg_n_g, avg_alpha) = if z > 0.0 {
            (
                n_bg + int_disp / (2.0 * n_bg * z),
                omega * int_abs / (2.0 * n_bg * SPEED_OF_LIGHT * z),
            )
        } else {
            (
                n_bg + local[0].dispersion / (2.0 * n_bg),
                omega * local[0].absorption / (2.0 * n_bg * SPEED_OF_LIGHT),
            )
        };
        out.push(PropagationRecord {
            z,
            coupling_intensity: profile.intensity[k],
            rabi: profile.rabi[k],
            avg_n_g,
            avg_alpha,
            delay: z / SPEED_OF_LIGHT * (avg_n_g - n_bg),
            transmission_db: transmission_db(avg_alpha, z),
            local_chi_im: local[k].absorption,
            local_dispersion: local[k].dispersion,
        });
    }
    out
}

/// One column of the delay/transmission map.
pub fn propagate_column(setup: &PropagationSetup<'_>, i0: Intensity, grid: &PropagationGrid) -> Result<Vec<PropagationRecord>> {
    let profile = propagate_coupling(setup, i0, grid)?;
    probe_metrics_along_z(setup, &profile)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FixedTransmissionPoint {
    /// W/m².
    pub i0: f64,
    pub z_star: f64,
    pub delay: f64,
    pub transmission_db: f64,
}

/// z* where T_dB(z*) = `target_db` on a computed column, or `None` if the
/// column never gets that dark.
///
/// Between grid points the pointwise integrands are linear, so the prefix
/// integrals are quadratic in z; z* is found by bisection on that
/// interpolant, consistent with the trapezoid sums at the grid points.
pub fn crossing(setup: &PropagationSetup<'_>, column: &[PropagationRecord], target_db: f64) -> Option<FixedTransmissionPoint> {
    let k = column.iter().position(|r| r.transmission_db <= target_db)?;
    if k == 0 {
        return None;
    }
    let (a, b) = (&column[k - 1], &column[k]);
    let n_bg = setup.n_bg;
    let omega = setup.params.probe_frequency;
    let dz = b.z - a.z;
    // Prefix integrals of χ'' and of the dispersion term at the cell start.
    let abs_a = a.avg_alpha * a.z * 2.0 * n_bg * SPEED_OF_LIGHT / omega;
    let disp_a = (a.avg_n_g - n_bg) * a.z * 2.0 * n_bg;
    let prefix = |t: f64, start: f64, fa: f64, fb: f64| start + dz * (t * fa + 0.5 * t * t * (fb - fa));
    let db = |t: f64| {
        let alpha_z = omega * prefix(t, abs_a, a.local_chi_im, b.local_chi_im) / (2.0 * n_bg * SPEED_OF_LIGHT);
        transmission_db(alpha_z, 1.0)
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if db(mid) <= target_db {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let disp = prefix(t, disp_a, a.local_dispersion, b.local_dispersion);
    Some(FixedTransmissionPoint {
        i0: column[0].coupling_intensity,
        z_star: a.z + t * dz,
        delay: disp / (2.0 * n_bg * SPEED_OF_LIGHT),
        transmission_db: db(t),
    })
}

/// −10 dB-style contour point for one injected intensity.
///
/// The column is first computed on `grid`; if the crossing falls in the
/// first quarter of the grid, the column is recomputed on a grid ending just
/// past z* so the crossing is resolved by at least three quarters of the
/// points. `Ok(None)` means the target is not reached within `grid.z_max`.
pub fn delay_at_fixed_transmission(
    setup: &PropagationSetup<'_>,
    i0: Intensity,
    grid: &PropagationGrid,
    target_db: f64,
) -> Result<Option<FixedTransmissionPoint>> {
    if !(target_db < 0.0) {
        return Err(Error::invalid("target_db", "transmission target must be negative"));
    }
    let column = propagate_column(setup, i0, grid)?;
    let Some(first) = crossing(setup, &column, target_db) else {
        return Ok(None);
    };
    if first.z_star > 0.25 * grid.z_max {
        return Ok(Some(first));
    }
    let fine = PropagationGrid::new(first.z_star * 4.0 / 3.0, grid.n_z)?;
    let column = propagate_column(setup, i0, &fine)?;
    Ok(crossing(setup, &column, target_db).or(Some(first)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::{Material, RateOverrides};
    use crate::scheme::SchemeKind;
    use approx::assert_relative_eq;

    fn params(s: SchemeKind) -> SchemeParams {
        Material::table_one().scheme_params(s, RateOverrides::default()).unwrap()
    }

    fn gaussian() -> EnsembleSpec {
        Material::table_one().ensemble().unwrap()
    }

    fn w_cm2(i: f64) -> Intensity {
        Intensity::from_w_cm2(i).unwrap()
    }

    #[test]
    fn grid_points() {
        let g = PropagationGrid::new(1e-3, 11).unwrap();
        let z = g.points();
        assert_eq!(z[0], 0.0);
        assert_eq!(*z.last().unwrap(), 1e-3);
        assert!(PropagationGrid::new(0.0, 5).is_err());
        assert!(PropagationGrid::new(1e-3, 1).is_err());
    }

    #[test]
    fn effective_decay_channels() {
        let mut p = params(SchemeKind::V);
        let pop = p.population;
        assert_relative_eq!(effective_decay(&p), pop.g23 + 1.0 / (1.0 / pop.g12 + 1.0 / pop.g13));
        p.population.g12 = 0.0;
        p.population.g13 = 0.0;
        assert_eq!(effective_decay(&p), p.population.g23);
    }

    #[test]
    fn zero_coupling_strength_is_lossless() {
        let mut p = params(SchemeKind::V);
        p.confinement = 0.0;
        let spec = gaussian();
        let setup = PropagationSetup { params: &p, spec: &spec, n_bg: 3.5, opts: Default::default() };
        let prof = propagate_coupling(&setup, w_cm2(10.0), &PropagationGrid::new(1e-2, 11).unwrap()).unwrap();
        assert!(prof.intensity.iter().all(|&i| i == w_cm2(10.0).w_m2()));
    }

    #[test]
    fn beer_lambert_limit() {
        let p = params(SchemeKind::V);
        let spec = gaussian();
        let setup = PropagationSetup { params: &p, spec: &spec, n_bg: 3.5, opts: Default::default() };
        let alpha0 = setup.coupling_absorption(0.0).unwrap();
        assert!(alpha0 > 0.0);
        let i0 = w_cm2(1e-9);
        let grid = PropagationGrid::new(3.0 / alpha0, 31).unwrap();
        let prof = propagate_coupling(&setup, i0, &grid).unwrap();
        for (z, i) in prof.z.iter().zip(&prof.intensity) {
            assert_relative_eq!(*i, i0.w_m2() * (-alpha0 * z).exp(), max_relative = 1e-6);
        }
    }

    #[test]
    fn deep_saturation_decays_linearly() {
        let p = params(SchemeKind::V);
        let spec = EnsembleSpec::delta();
        let setup = PropagationSetup { params: &p, spec: &spec, n_bg: 3.5, opts: Default::default() };
        let i0 = w_cm2(1e9).w_m2();
        // Saturated loss rate α·I tends to a constant.
        let rate = setup.coupling_absorption(i0).unwrap() * i0;
        let grid = PropagationGrid::new(1e-3 * i0 / rate, 5).unwrap();
        let prof = propagate_coupling(&setup, w_cm2(1e9), &grid).unwrap();
        let drops: Vec<f64> = prof.intensity.windows(2).map(|w| w[0] - w[1]).collect();
        for d in &drops {
            assert_relative_eq!(*d, drops[0], max_relative = 1e-3);
        }
        assert_relative_eq!(drops[0], rate * grid.step(), max_relative = 1e-3);
    }

    #[test]
    fn xi_and_lambda_coupling_not_absorbed() {
        let spec = gaussian();
        for s in [SchemeKind::Xi, SchemeKind::Lambda] {
            let p = params(s);
            let setup = PropagationSetup { params: &p, spec: &spec, n_bg: 3.5, opts: Default::default() };
            let prof = propagate_coupling(&setup, w_cm2(1e5), &PropagationGrid::new(1e-2, 11).unwrap()).unwrap();
            assert!(prof.intensity.iter().all(|&i| i == w_cm2(1e5).w_m2()));
        }
    }

    fn v_column(n_z: usize) -> (SchemeParams, EnsembleSpec, Vec<PropagationRecord>) {
        let p = params(SchemeKind::V);
        let spec = gaussian();
        let setup = PropagationSetup { params: &p, spec: &spec, n_bg: 3.5, opts: Default::default() };
        let col = propagate_column(&setup, w_cm2(1e3), &PropagationGrid::new(1e-3, n_z).unwrap()).unwrap();
        (p, spec, col)
    }

    #[test]
    fn records_consistent() {
        let (p, _, col) = v_column(21);
        let (n_bg, w) = (3.5, p.probe_frequency);
        for r in &col {
            assert_eq!(r.delay, r.z / SPEED_OF_LIGHT * (r.avg_n_g - n_bg));
            assert!(r.local_chi_im >= 0.0);
        }
        for pair in col.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            assert!(b.transmission_db <= a.transmission_db);
            let piece = w * 0.5 * (b.z - a.z) * (a.local_chi_im + b.local_chi_im) / (2.0 * n_bg * SPEED_OF_LIGHT);
            assert_relative_eq!(b.avg_alpha * b.z, a.avg_alpha * a.z + piece, max_relative = 1e-9);
        }
        assert!(col.last().unwrap().coupling_intensity < col[0].coupling_intensity);
    }

    #[test]
    fn constant_coupling_average_is_pointwise() {
        let p = params(SchemeKind::Xi);
        let spec = EnsembleSpec::delta();
        let setup = PropagationSetup { params: &p, spec: &spec, n_bg: 3.5, opts: Default::default() };
        let col = propagate_column(&setup, w_cm2(1e6), &PropagationGrid::new(1e-4, 9).unwrap()).unwrap();
        let alpha = p.probe_frequency * col[0].local_chi_im / (2.0 * 3.5 * SPEED_OF_LIGHT);
        let slope = col[1].delay / col[1].z;
        for r in &col[1..] {
            assert_relative_eq!(r.avg_alpha, alpha, max_relative = 1e-14);
            assert_relative_eq!(r.delay / r.z, slope, max_relative = 1e-12);
        }
    }

    #[test]
    fn zero_response_gives_no_delay() {
        let p = params(SchemeKind::Xi);
        let spec = EnsembleSpec::delta();
        let setup = PropagationSetup { params: &p, spec: &spec, n_bg: 3.5, opts: Default::default() };
        let profile = CouplingProfile { z: vec![0.0, 1e-3, 2e-3], intensity: vec![1.0; 3], rabi: vec![1e9; 3] };
        let local = vec![LocalResponse { dispersion: 0.0, absorption: 0.0 }; 3];
        let recs = records_from_local(&setup, &profile, &local);
        assert!(recs.iter().all(|r| r.delay == 0.0 && r.transmission_db == 0.0));
        assert!(crossing(&setup, &recs, -10.0).is_none());
    }

    #[test]
    fn crossing_hits_target() {
        let (p, spec, col) = v_column(41);
        let setup = PropagationSetup { params: &p, spec: &spec, n_bg: 3.5, opts: Default::default() };
        let x = crossing(&setup, &col, -10.0).expect("reachable within 1 mm");
        assert!((x.transmission_db + 10.0).abs() < 0.01);
        let k = col.iter().position(|r| r.z >= x.z_star).unwrap();
        assert!(col[k - 1].delay <= x.delay * (1.0 + 1e-9) && x.delay <= col[k].delay * (1.0 + 1e-9));
        assert!(x.delay > 0.0);
    }

    #[test]
    fn fixed_transmission_refines_and_converges() {
        let p = params(SchemeKind::V);
        let spec = gaussian();
        let setup = PropagationSetup { params: &p, spec: &spec, n_bg: 3.5, opts: Default::default() };
        let a = delay_at_fixed_transmission(&setup, w_cm2(1e3), &PropagationGrid::new(5e-2, 201).unwrap(), -10.0)
            .unwrap()
            .unwrap();
        let b = delay_at_fixed_transmission(&setup, w_cm2(1e3), &PropagationGrid::new(5e-2, 401).unwrap(), -10.0)
            .unwrap()
            .unwrap();
        assert!((a.delay - b.delay).abs() < 5e-3 * b.delay);
        assert!((a.z_star - b.z_star).abs() < 5e-3 * b.z_star);
        let lossless = PropagationSetup { params: &p, spec: &EnsembleSpec::delta(), n_bg: 3.5, opts: Default::default() };
        let far = delay_at_fixed_transmission(&lossless, w_cm2(1e12), &PropagationGrid::new(1e-9, 3).unwrap(), -10.0).unwrap();
        assert!(far.is_none());
        assert!(delay_at_fixed_transmission(&setup, w_cm2(1.0), &PropagationGrid::new(1e-3, 3).unwrap(), 1.0).is_err());
    }
}
