//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_UNATTAINABLE` are reported but do not fail the
//! run; every other FAIL exits nonzero.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use qdslow::dressed::{absorbing_shift_exists, dressed_eigenvalues};
use qdslow::ensemble::{average_chi, EnsembleSpec, QuadratureOptions};
use qdslow::material::Material;
use qdslow::optics::{ensemble_metrics, group_index};
use qdslow::parallel::Execution;
use qdslow::propagation::{propagate_coupling, PropagationGrid, PropagationSetup};
use qdslow::scenario::{builtin_scenario, run_scenario, Curve, Dataset, RowStatus, Sweep};
use qdslow::structure::{kappa, shift_coefficient, DiscPotentialState, FssSlopes};
use qdslow::susceptibility::{chi_kernel, two_level_limit, DetuningPair, SchemeParams};
use qdslow::units::{intensity_to_rabi, Intensity};
use qdslow::{KernelFamily, SchemeKind};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const KNOWN_UNATTAINABLE: [u32; 2] = [4, 9];

struct Outcome {
    pass: bool,
    details: String,
}

fn outcome(pass: bool, details: String) -> Outcome {
    Outcome { pass, details }
}

fn run(id: &str) -> Dataset {
    let d = run_scenario(&builtin_scenario(id).unwrap(), Execution::Auto).unwrap();
    assert!(!d.is_partial(), "{id}: {:?}", d.failures().collect::<Vec<_>>());
    d
}

/// (intensity, value) of rows matching `label` and `ihb`.
fn series(d: &Dataset, label: &str, ihb: bool, col: &str) -> Vec<(f64, f64)> {
    (0..d.rows.len())
        .filter(|&r| d.text(r, "scheme") == Some(label) && d.rows[r].values[2] == qdslow::scenario::Value::Bool(ihb))
        .map(|r| (d.num(r, "intensity_w_cm2").unwrap(), d.num(r, col).unwrap()))
        .collect()
}

fn argmax(xs: &[(f64, f64)]) -> usize {
    (0..xs.len()).max_by(|&a, &b| xs[a].1.total_cmp(&xs[b].1)).unwrap()
}

fn slowdown_at(p: &SchemeParams, spec: &EnsembleSpec, n_bg: f64, i_w_cm2: f64) -> f64 {
    let rabi = intensity_to_rabi(Intensity::from_w_cm2(i_w_cm2).unwrap(), p.mu23, n_bg).unwrap().0;
    ensemble_metrics(spec, p, 0.0, 0.0, rabi, n_bg, &QuadratureOptions::default()).unwrap().slowdown
}

/// Golden-section refinement of the slow-down peak in log₁₀ I between the
/// grid neighbours of the sampled maximum.
fn refined_peak(curve: &Curve, grid: &[(f64, f64)]) -> (f64, f64) {
    let m = Material::table_one();
    let p = curve.params(&m).unwrap();
    let spec = curve.ensemble(&m).unwrap();
    let k = argmax(grid);
    let (mut a, mut b) = (grid[k.saturating_sub(1)].0.log10(), grid[(k + 1).min(grid.len() - 1)].0.log10());
    let f = |x: f64| slowdown_at(&p, &spec, m.n_bg, 10f64.powf(x));
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - r * (b - a), a + r * (b - a));
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-3 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let best = if fc > fd { (c, fc) } else { (d, fd) };
    if best.1 >= grid[k].1 { (10f64.powf(best.0), best.1) } else { grid[k] }
}

fn criterion_1() -> Outcome {
    let k = |s| kappa(s, 0.3, FssSlopes::default()).unwrap().value;
    let (xi, v, l) = (k(SchemeKind::Xi), k(SchemeKind::V), k(SchemeKind::Lambda));
    let pass = (xi - 0.077).abs() <= 0.001 && (v - 1.08).abs() <= 0.01 && (l - 0.072).abs() <= 0.001;
    outcome(pass, format!("kappa xi={xi:.5} v={v:.5} lambda={l:.5}"))
}

fn criterion_2() -> Outcome {
    let c101 = shift_coefficient(DiscPotentialState::GROUND, 0.3).unwrap().0;
    let c111 = shift_coefficient(DiscPotentialState::FIRST_EXCITED, 0.3).unwrap().0;
    let kv = kappa(SchemeKind::V, 0.3, FssSlopes::default()).unwrap().value;
    let consistent = (c111 / c101 - kv).abs() < 1e-12 && (kv - 1.08).abs() <= 0.01;
    let pass = (c101 - 115.4).abs() <= 0.1 && consistent;
    outcome(
        pass,
        format!("C101={c101:.3} C111={c111:.3} C111/C101={:.5} (half-valued C111 {:.2} would give {:.3})", c111 / c101, c111 / 2.0, c111 / 2.0 / c101),
    )
}

fn criterion_3(fig3: &Dataset) -> Outcome {
    let xi = series(fig3, "xi", false, "norm_absorption");
    let la = series(fig3, "lambda", false, "norm_absorption");
    let worst = xi.iter().zip(&la).map(|(a, b)| (a.1 - b.1).abs() / a.1.abs().max(b.1.abs())).fold(0.0, f64::max);
    let v_opt = series(fig3, "v", false, "slowdown")[argmax(&series(fig3, "v", false, "slowdown"))].0;
    let xi_s = series(fig3, "xi", false, "slowdown");
    let xi_opt = xi_s[argmax(&xi_s)].0;
    outcome(
        worst < 1e-4 && v_opt > xi_opt,
        format!("max xi/lambda relative difference {worst:.2e}; optimum I v={v_opt:.3e} xi={xi_opt:.3e} W/cm2"),
    )
}

fn criterion_4(fig3: &Dataset) -> Outcome {
    let peak = |s: SchemeKind| refined_peak(&Curve::new(s.name(), s, true), &series(fig3, s.name(), true, "slowdown"));
    let (iv, sv) = peak(SchemeKind::V);
    let (ix, sx) = peak(SchemeKind::Xi);
    let (il, sl) = peak(SchemeKind::Lambda);
    let ratio = (ix / iv).log10();
    let ratio_l = (il / iv).log10();
    let pass = sv > 100.0 && sx < 2.0 && sl < 2.0 && (ratio - 3.0).abs() <= 1.0 && (ratio_l - 3.0).abs() <= 1.0;
    outcome(
        pass,
        format!(
            "peak S v={sv:.2} at {iv:.3e}, xi={sx:.4} at {ix:.3e}, lambda={sl:.4} at {il:.3e} W/cm2; log10 optimum ratio xi/v={ratio:.2} lambda/v={ratio_l:.2}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let m = Material::table_one();
    let k = |s| m.scheme_params(s, Default::default()).unwrap().kappa;
    let rabis: Vec<f64> = (-3..=3).map(|e| 1e10 * 10f64.powi(e)).collect();
    let v_none = rabis.iter().all(|&w| absorbing_shift_exists(KernelFamily::V, k(SchemeKind::V), w).is_none());
    let real = |f, kk| rabis.iter().all(|&w| absorbing_shift_exists(f, kk, w).is_some_and(|r| r.iter().all(|x| x.is_finite() && *x != 0.0)));
    let xi = real(KernelFamily::Xi, k(SchemeKind::Xi));
    let la = real(KernelFamily::Lambda, k(SchemeKind::Lambda));
    outcome(v_none && xi && la, format!("v none={v_none} xi roots={xi} lambda roots={la} over {} Rabi values", rabis.len()))
}

fn criterion_6(a: &Dataset, b: &Dataset, c: &Dataset) -> Outcome {
    let sa = series(a, "v_case_a", true, "slowdown");
    let sb = series(b, "v_case_b", true, "slowdown");
    let ratio = sa[argmax(&sa)].1 / sb[argmax(&sb)].1;
    let ab = series(b, "v_case_b", true, "norm_absorption");
    // Grid is 6 points per decade: compare each point with one decade later.
    let half = ab.windows(7).find(|w| {
        let (x, y) = (w[0].1, w[6].1);
        (0.4..=0.6).contains(&x) && (0.4..=0.6).contains(&y) && (x - y).abs() < 0.05
    });
    let gain = series(c, "v_case_c", true, "norm_absorption").into_iter().find(|p| p.1 < 0.0);
    let gain_ok = gain.is_some_and(|(i, _)| (1e3..=1e5).contains(&i));
    let pass = (ratio - 2.5).abs() <= 0.5 && half.is_some() && gain_ok;
    outcome(
        pass,
        format!(
            "peak S ratio a/b={ratio:.3}; b plateau {}; c first gain {}",
            half.map_or("none".into(), |w| format!("{:.3}->{:.3} over {:.2e}..{:.2e} W/cm2", w[0].1, w[6].1, w[0].0, w[6].0)),
            gain.map_or("none".into(), |(i, x)| format!("{x:.3} at {i:.3e} W/cm2")),
        ),
    )
}

fn center_absorption(d: &Dataset, label: &str) -> f64 {
    let rows: Vec<usize> = (0..d.rows.len()).filter(|&r| d.text(r, "curve") == Some(label)).collect();
    let at = |rabi_zero: bool| {
        rows.iter()
            .filter(|&&r| (d.num(r, "rabi_rad_s").unwrap() == 0.0) == rabi_zero)
            .min_by(|&&x, &&y| d.num(x, "delta_p_rad_s").unwrap().abs().total_cmp(&d.num(y, "delta_p_rad_s").unwrap().abs()))
            .map(|&r| d.num(r, "chi_im").unwrap())
            .unwrap()
    };
    at(false) / at(true)
}

fn criterion_7(fig7: &Dataset) -> Outcome {
    let v = center_absorption(fig7, "v");
    let a43 = center_absorption(fig7, "alt_v_kappa_0.43");
    let adisc = center_absorption(fig7, "alt_v_kappa_disc");
    outcome(a43 > v && adisc > v, format!("normalized absorption at line center v={v:.4} alt(0.43)={a43:.4} alt(disc)={adisc:.4}"))
}

/// Full width of the transparency dip at half its depth.
fn dip_width(p: &SchemeParams, spec: &EnsembleSpec, rabi: f64, scale: f64) -> f64 {
    let o = QuadratureOptions::default();
    let f = |dp: f64| average_chi(spec, p, dp, 0.0, rabi, &o).unwrap().im;
    let base = average_chi(spec, p, 0.0, 0.0, 0.0, &o).unwrap().im;
    let level = 0.5 * (base + f(0.0));
    let edge = |sign: f64| {
        let mut lo = 0.0;
        let mut hi = scale * 1e-3;
        while f(sign * hi) < level {
            lo = hi;
            hi *= 1.25;
            assert!(hi < 1e4 * scale, "no dip edge");
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if f(sign * mid) < level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    edge(1.0) + edge(-1.0)
}

fn criterion_8() -> Outcome {
    let m = Material::table_one();
    let setup = |id: &str| {
        let s = builtin_scenario(id).unwrap();
        let rabi = match &s.sweep {
            Sweep::Spectrum { rabi, .. } => rabi[1],
            _ => unreachable!(),
        };
        let c = &s.curves[0];
        (c.params(&m).unwrap(), c.ensemble(&m).unwrap(), rabi)
    };
    let (pv, sv, rv) = setup("fig9v");
    let (pl, sl, rl) = setup("fig9l");
    let g = pv.dephasing.g13;
    let wv = dip_width(&pv, &sv, rv, g);
    let wl = dip_width(&pl, &sl, rl, g);
    let o = QuadratureOptions::default();
    let depth = |p: &SchemeParams, s: &EnsembleSpec, r: f64| {
        average_chi(s, p, 0.0, 0.0, r, &o).unwrap().im / average_chi(s, p, 0.0, 0.0, 0.0, &o).unwrap().im
    };
    let dv = depth(&pv, &sv, rv);
    // Same coupling strength on the disc-potential V scheme.
    let disc = m.scheme_params(SchemeKind::V, Default::default()).unwrap();
    let ddisc = depth(&disc, &m.ensemble().unwrap(), rv);
    let no_absorber = absorbing_shift_exists(KernelFamily::V, pv.kappa, rv).is_none()
        && absorbing_shift_exists(KernelFamily::V, disc.kappa, rv).is_none();
    let pass = wl < wv && no_absorber && dv < 1.0 && ddisc < 1.0;
    outcome(
        pass,
        format!(
            "dip FWHM fss_v={:.3} g13, fss_lambda={:.3} g13; center absorption fss_v={dv:.4} disc v={ddisc:.4}; no absorbing sub-ensemble={no_absorber}",
            wv / g,
            wl / g
        ),
    )
}

fn fixed_series(d: &Dataset) -> Vec<(f64, f64, f64)> {
    (0..d.rows.len())
        .filter(|&r| d.rows[r].status == RowStatus::Ok)
        .map(|r| (d.num(r, "intensity_w_cm2").unwrap(), d.num(r, "z_star_m").unwrap(), d.num(r, "delay_s").unwrap()))
        .collect()
}

fn criterion_9(v: &Dataset, xi: &Dataset) -> Outcome {
    let vs = fixed_series(v);
    let high: Vec<f64> = vs.iter().filter(|p| p.0 > 500.0).map(|p| p.2).collect();
    let (lo, hi) = high.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let variation = (hi - lo) / hi;
    let max_delay = vs.iter().map(|p| p.2).fold(f64::NEG_INFINITY, f64::max);
    let order_ns = (1e-10..=1e-8).contains(&max_delay);
    let onset = vs.iter().find(|p| p.2 >= 0.94 * max_delay).unwrap();
    let z_ok = (onset.1 / 1e-3).log10().abs() <= 0.5;
    let xs = fixed_series(xi);
    let mono = xs.windows(2).all(|w| w[1].2 > w[0].2);
    let unreachable = xi.rows.iter().filter(|r| r.status == RowStatus::Unreachable).count();
    let pass = order_ns && variation < 0.06 && z_ok && mono;
    outcome(
        pass,
        format!(
            "v delay max {:.3} ns, variation above 500 W/cm2 {:.1}% (delay {:.3}..{:.3} ns); plateau onset {:.3e} W/cm2 with z*={:.3} mm; xi monotone={mono} over {} reachable points ({unreachable} unreachable)",
            max_delay * 1e9,
            variation * 100.0,
            lo * 1e9,
            hi * 1e9,
            onset.0,
            onset.1 * 1e3,
            xs.len()
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    let schemes = [
        SchemeKind::Xi,
        SchemeKind::V,
        SchemeKind::Lambda,
        SchemeKind::AltV,
        SchemeKind::FssV,
        SchemeKind::FssLambda,
        SchemeKind::FssXi,
    ];
    let mut two_level = 0.0f64;
    for i in 0..100 {
        let p = common::table_one(schemes[i % schemes.len()]);
        let g = p.dephasing.g13;
        let d = DetuningPair { probe: g * rng.random_range(-50.0..50.0), coupling: g * rng.random_range(-50.0..50.0) };
        let exact = two_level_limit(p.scheme.family(), d, &p);
        let err = (chi_kernel(d, &p, 0.0).unwrap() - exact).norm() / exact.norm();
        two_level = two_level.max(err);
    }

    let mut oracle = 0.0f64;
    let mut calls = 0;
    for c in common::oracle_cases(25, 7) {
        let reference = common::trapezoid(&c, common::TRAPEZOID_POINTS);
        let (value, n) = common::adaptive(&c, &QuadratureOptions::default());
        oracle = oracle.max((value - reference).norm() / reference.norm());
        calls = calls.max(n);
    }

    let (a, g, n_bg, omega) = (1e7, 2e9, 3.5, 2e15);
    let mut lorentz = 0.0f64;
    for x0 in [0.0, 0.3 * g, -2.0 * g, 7.0 * g] {
        let line = |x: f64| -a / Complex64::new(x, g);
        let (c, ng) = group_index(|o| Ok(o.iter().map(|d| line(x0 + d)).collect()), omega, g / 100.0, n_bg).unwrap();
        let root = (Complex64::new(n_bg * n_bg, 0.0) + c).sqrt();
        let exact = root.re + omega * (a / Complex64::new(x0, g).powi(2) / (2.0 * root)).re;
        lorentz = lorentz.max((ng - exact).abs() / exact.abs());
    }

    let p = common::table_one(SchemeKind::V);
    let spec = Material::table_one().ensemble().unwrap();
    let setup = PropagationSetup { params: &p, spec: &spec, n_bg: 3.5, opts: Default::default() };
    let alpha0 = setup.coupling_absorption(0.0).unwrap();
    let i0 = Intensity::from_w_cm2(1e-9).unwrap();
    let prof = propagate_coupling(&setup, i0, &PropagationGrid::new(3.0 / alpha0, 31).unwrap()).unwrap();
    let beer = prof
        .z
        .iter()
        .zip(&prof.intensity)
        .map(|(z, i)| {
            let e = i0.w_m2() * (-alpha0 * z).exp();
            (i - e).abs() / e
        })
        .fold(0.0, f64::max);

    let mut identity = 0.0f64;
    for _ in 0..1000 {
        let d2 = 1e10 * rng.random_range(-100.0..100.0);
        let w = 1e10 * 10f64.powf(rng.random_range(-3.0..2.0));
        let l = dressed_eigenvalues(d2, w);
        let sum = ((l.plus + l.minus) + d2).abs() / (l.plus.abs() + l.minus.abs());
        let prod = ((l.plus * l.minus) + w * w).abs() / (w * w);
        identity = identity.max(sum).max(prod);
    }

    let pass = two_level < 1e-10 && oracle < 1e-5 && calls <= 10_000 && lorentz < 1e-6 && beer < 1e-6 && identity < 1e-14;
    outcome(
        pass,
        format!(
            "two-level {two_level:.1e}; oracle {oracle:.1e} ({calls} calls max); lorentzian n_g {lorentz:.1e}; beer-lambert {beer:.1e}; dressed identities {identity:.1e}"
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let fig3 = run("fig3");
    let checks: Vec<(u32, Box<dyn FnOnce() -> Outcome + '_>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(criterion_2)),
        (3, Box::new(|| criterion_3(&fig3))),
        (4, Box::new(|| criterion_4(&fig3))),
        (5, Box::new(criterion_5)),
        (6, Box::new(|| criterion_6(&run("fig5a"), &run("fig5b"), &run("fig5c")))),
        (7, Box::new(|| criterion_7(&run("fig7")))),
        (8, Box::new(criterion_8)),
        (9, Box::new(|| criterion_9(&run("fig11"), &run("fig11xi")))),
        (10, Box::new(criterion_10)),
    ];
    let mut unexpected = vec![];
    for (n, check) in checks {
        let t = Instant::now();
        let o = check();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n}: {verdict} ({}) [{:.1}s]", o.details, t.elapsed().as_secs_f64());
        if !o.pass && !KNOWN_UNATTAINABLE.contains(&n) {
            unexpected.push(n);
        }
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
