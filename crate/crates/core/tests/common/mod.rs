#![allow(dead_code)]

use num_complex::Complex64;
use qdslow::ensemble::{average_chi_stencil, EnsembleSpec, QuadratureOptions};
use qdslow::material::{Material, RateOverrides};
use qdslow::susceptibility::{chi, SchemeParams};
use qdslow::SchemeKind;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const TRAPEZOID_POINTS: usize = 1_000_001;

/// One randomized ensemble-average problem.
#[derive(Clone, Debug)]
pub struct OracleCase {
    pub params: SchemeParams,
    pub spec: EnsembleSpec,
    pub delta_p: f64,
    pub rabi: f64,
}

pub fn table_one(s: SchemeKind) -> SchemeParams {
    Material::table_one().scheme_params(s, RateOverrides::default()).unwrap()
}

pub fn oracle_cases(n: usize, seed: u64) -> Vec<OracleCase> {
    let mut rng = StdRng::seed_from_u64(seed);
    let schemes = [SchemeKind::Xi, SchemeKind::V, SchemeKind::Lambda];
    (0..n)
        .map(|i| {
            let params = table_one(schemes[i % 3]);
            let spec = Material::table_one().ensemble().unwrap();
            let g = params.dephasing.g13;
            let rabi = if rng.random_bool(0.2) { 0.0 } else { g * 10f64.powf(rng.random_range(-1.0..2.0)) };
            let delta_p = g * rng.random_range(-30.0..30.0);
            OracleCase { params, spec, delta_p, rabi }
        })
        .collect()
}

/// Uniform trapezoid over the truncation window.
pub fn trapezoid(c: &OracleCase, points: usize) -> Complex64 {
    let w = c.spec.half_window();
    let h = 2.0 * w / (points - 1) as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..points {
        let x = -w + h * k as f64;
        let weight = if k == 0 || k + 1 == points { 0.5 } else { 1.0 };
        sum += weight * c.spec.density(x) * chi(c.delta_p, 0.0, x, &c.params, c.rabi).unwrap();
    }
    sum * h
}

pub fn adaptive(c: &OracleCase, opts: &QuadratureOptions) -> (Complex64, usize) {
    let out = average_chi_stencil(&c.spec, &c.params, c.delta_p, &[0.0], 0.0, c.rabi, opts).unwrap();
    (out.values[0], out.kernel_calls)
}
