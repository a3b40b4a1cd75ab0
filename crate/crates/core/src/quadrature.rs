//! Globally adaptive Gauss-Kronrod (7, 15) quadrature for vector-valued
//! complex integrands.
//!
//! Every component is integrated on the same panel set, so finite
//! differences between components (e.g. neighbouring probe detunings) are
//! not polluted by panel-placement noise.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
/// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integrand evaluations per panel.
pub const NODES_PER_PANEL: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub relative: f64,
    /// Absolute floor per component, for integrals that vanish.
    pub absolute: f64,
    /// Panels that may be added by bisection beyond the initial set.
    pub max_subdivisions: usize,
}

#[derive(Clone, Debug)]
pub struct QuadratureOutcome {
    pub values: Vec<Complex64>,
    pub errors: Vec<f64>,
    pub panels: usize,
    pub evaluations: usize,
}

struct Panel {
    lo: f64,
    hi: f64,
    values: Vec<Complex64>,
    errors: Vec<f64>,
    priority: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .total_cmp(&other.priority)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

/// Integrates `f` over consecutive panels delimited by `edges`.
///
/// `f(x, out)` writes `m` components at abscissa `x`. Converged when, for
/// every component, the summed error estimate is below
/// `max(relative·|I|, absolute)`.
pub fn integrate<F>(edges: &[f64], m: usize, tol: Tolerance, mut f: F) -> Result<QuadratureOutcome>
where
    F: FnMut(f64, &mut [Complex64]) -> Result<()>,
{
    if edges.len() < 2 || m == 0 {
        return Ok(QuadratureOutcome {
            values: vec![Complex64::new(0.0, 0.0); m],
            errors: vec![0.0; m],
            panels: 0,
            evaluations: 0,
        });
    }
    let mut scratch = vec![Complex64::new(0.0, 0.0); m];
    let mut evaluations = 0usize;
    let mut heap = BinaryHeap::new();
    let mut total = vec![Complex64::new(0.0, 0.0); m];
    let mut total_err = vec![0.0; m];

    let mut initial = Vec::with_capacity(edges.len());
    for w in edges.windows(2) {
        if !(w[1] > w[0]) {
            continue;
        }
        let panel = gk15(w[0], w[1], m, &mut scratch, &mut f)?;
        evaluations += NODES_PER_PANEL;
        for j in 0..m {
            total[j] += panel.values[j];
            total_err[j] += panel.errors[j];
        }
        initial.push(panel);
    }
    // Panel ranking uses a fixed reference scale so priorities stay
    // comparable across the whole run.
    let reference: Vec<f64> = total
        .iter()
        .map(|v| (tol.relative * v.norm()).max(tol.absolute))
        .collect();
    for mut panel in initial {
        panel.priority = weighted(&panel.errors, &reference);
        heap.push(panel);
    }

    let mut added = 0usize;
    loop {
        let scale: Vec<f64> = total
            .iter()
            .map(|v| (tol.relative * v.norm()).max(tol.absolute))
            .collect();
        if total_err.iter().zip(&scale).all(|(e, s)| e <= s) {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        if added >= tol.max_subdivisions || !(mid > worst.lo && mid < worst.hi) {
            let residual = total_err
                .iter()
                .zip(&scale)
                .map(|(e, s)| e / s)
                .fold(0.0, f64::max);
            return Err(Error::Quadrature {
                lo: worst.lo,
                hi: worst.hi,
                residual,
            });
        }
        let left = gk15(worst.lo, mid, m, &mut scratch, &mut f)?;
        let right = gk15(mid, worst.hi, m, &mut scratch, &mut f)?;
        evaluations += 2 * NODES_PER_PANEL;
        added += 1;
        for j in 0..m {
            total[j] += left.values[j] + right.values[j] - worst.values[j];
            total_err[j] += left.errors[j] + right.errors[j] - worst.errors[j];
        }
        let mut left = left;
        let mut right = right;
        left.priority = weighted(&left.errors, &reference);
        right.priority = weighted(&right.errors, &reference);
        heap.push(left);
        heap.push(right);
    }

    // Final sums in panel order, independent of heap history.
    let mut panels = heap.into_vec();
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut values = vec![Complex64::new(0.0, 0.0); m];
    let mut errors = vec![0.0; m];
    for p in &panels {
        for j in 0..m {
            values[j] += p.values[j];
            errors[j] += p.errors[j];
        }
    }
    Ok(QuadratureOutcome {
        values,
        errors,
        panels: panels.len(),
        evaluations,
    })
}

fn weighted(errors: &[f64], scale: &[f64]) -> f64 {
    errors
        .iter()
        .zip(scale)
        .map(|(e, s)| e / s.max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

fn gk15<F>(lo: f64, hi: f64, m: usize, scratch: &mut [Complex64], f: &mut F) -> Result<Panel>
where
    F: FnMut(f64, &mut [Complex64]) -> Result<()>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut kronrod = vec![Complex64::new(0.0, 0.0); m];
    let mut gauss = vec![Complex64::new(0.0, 0.0); m];
    // Node-major samples: slot k (< 7) left of center, 7 center, 8 + k right.
    let mut values = vec![Complex64::new(0.0, 0.0); NODES_PER_PANEL * m];

    f(center, scratch)?;
    values[7 * m..8 * m].copy_from_slice(scratch);
    for j in 0..m {
        kronrod[j] += WGK[7] * scratch[j];
        gauss[j] += WG[3] * scratch[j];
    }
    for k in 0..7 {
        let dx = half * XGK[k];
        for (slot, x) in [(k, center - dx), (8 + k, center + dx)] {
            f(x, scratch)?;
            values[slot * m..(slot + 1) * m].copy_from_slice(scratch);
            for j in 0..m {
                kronrod[j] += WGK[k] * scratch[j];
                if k % 2 == 1 {
                    gauss[j] += WG[k / 2] * scratch[j];
                }
            }
        }
    }
    let mut errors = Vec::with_capacity(m);
    for j in 0..m {
        let mean = kronrod[j] * 0.5;
        // ∫|f − mean| with Kronrod weights, the reference for the
        // QUADPACK error scaling.
        let mut asc = WGK[7] * (values[7 * m + j] - mean).norm();
        for k in 0..7 {
            asc += WGK[k] * ((values[k * m + j] - mean).norm() + (values[(8 + k) * m + j] - mean).norm());
        }
        kronrod[j] *= half;
        gauss[j] *= half;
        asc *= half;
        let raw = (kronrod[j] - gauss[j]).norm();
        let e = if asc > 0.0 && raw > 0.0 {
            asc * (200.0 * raw / asc).powf(1.5).min(1.0)
        } else {
            raw
        };
        if !e.is_finite() {
            return Err(Error::NonFinite("quadrature panel"));
        }
        errors.push(e);
    }
    let priority = 0.0;
    Ok(Panel {
        lo,
        hi,
        values: kronrod,
        errors,
        priority,
    })
}
