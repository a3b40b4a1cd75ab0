//! Dressed-state picture of the coupled transition.
//!
//! With H = −ħ[[Δ₁, 0, Ω_p], [0, Δ₂, Ω_c], [Ω_p, Ω_c, 0]] and Ω_p → 0 the
//! probe sees the bare shift λ₁ = −Δ₁ and the dressed shifts
//! λ± = ½(−Δ₂ ± √(4Ω_c² + Δ₂²)). The sign conventions are
//! Δ₁ = Δ_p − Δ_ih (V), Δ₁ = −Δ_p + Δ_ih (Ξ, Λ);
//! Δ₂ = Δ_c − κΔ_ih (V, Ξ), Δ₂ = −Δ_c + κΔ_ih (Λ).

use serde::Serialize;

use crate::scheme::KernelFamily;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DressedShifts {
    pub plus: f64,
    pub minus: f64,
}

/// Dressed shifts λ±, evaluated without cancellation for |Δ₂| ≫ Ω_c.
pub fn dressed_eigenvalues(delta2: f64, rabi: f64) -> DressedShifts {
    let root = (4.0 * rabi * rabi + delta2 * delta2).sqrt();
    if root == 0.0 {
        return DressedShifts { plus: 0.0, minus: 0.0 };
    }
    let omega2 = rabi * rabi;
    if delta2 >= 0.0 {
        let minus = -0.5 * (delta2 + root);
        DressedShifts { plus: -omega2 / minus, minus }
    } else {
        let plus = 0.5 * (root - delta2);
        DressedShifts { plus, minus: -omega2 / plus }
    }
}

/// Bare probe-level shift λ₁ = −Δ₁ of a sub-ensemble.
pub fn bare_shift(family: KernelFamily, delta_p: f64, delta_ih: f64) -> f64 {
    match family {
        KernelFamily::V => -(delta_p - delta_ih),
        KernelFamily::Xi | KernelFamily::Lambda => delta_p - delta_ih,
    }
}

/// Δ₂ of a sub-ensemble with spectral shift Δ_ih.
pub fn coupling_shift(family: KernelFamily, delta_c: f64, kappa: f64, delta_ih: f64) -> f64 {
    match family {
        KernelFamily::V | KernelFamily::Xi => delta_c - kappa * delta_ih,
        KernelFamily::Lambda => -delta_c + kappa * delta_ih,
    }
}

/// Spectral shifts ±Δ_ih at which a dressed state is resonant with a probe at
/// Δ_p = 0, i.e. real roots of ([2 ± κ]² − κ²)Δ_ih² = 4Ω_c² (sum for Ξ,
/// difference for V and Λ). `None` when no sub-ensemble qualifies.
pub fn absorbing_shift_exists(family: KernelFamily, kappa: f64, rabi: f64) -> Option<[f64; 2]> {
    let signed = match family {
        KernelFamily::Xi => kappa,
        KernelFamily::V | KernelFamily::Lambda => -kappa,
    };
    let coefficient = (2.0 + signed).powi(2) - kappa * kappa;
    if !(coefficient > 0.0) || rabi <= 0.0 {
        return None;
    }
    let root = 2.0 * rabi / coefficient.sqrt();
    Some([-root, root])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResonanceAsymptotes {
    /// dΔ_ih/dΔ_p of the primary resonance.
    pub primary_slope: f64,
    /// (1 ± κ)⁻¹; `None` when the secondary asymptote is vertical.
    pub secondary_slope: Option<f64>,
}

impl ResonanceAsymptotes {
    /// A negative secondary slope means the far-detuned secondary resonance
    /// never crosses Δ_p = 0.
    pub fn secondary_crosses_line_center(&self) -> bool {
        self.secondary_slope.is_some_and(|s| s > 0.0)
    }
}

pub fn resonance_asymptotes(family: KernelFamily, kappa: f64) -> ResonanceAsymptotes {
    let denom = match family {
        KernelFamily::Xi => 1.0 + kappa,
        KernelFamily::V | KernelFamily::Lambda => 1.0 - kappa,
    };
    ResonanceAsymptotes {
        primary_slope: 1.0,
        secondary_slope: (denom != 0.0).then(|| 1.0 / denom),
    }
}

/// All Δ_ih where the probe at Δ_p is resonant with a dressed level, plus
/// the primary line Δ_ih = Δ_p and, for the V family under coupling, the
/// saturated sub-ensemble at Δ₂ = 0; sorted and merged within `merge_tol`.
pub fn quadrature_breakpoints(
    family: KernelFamily,
    delta_p: f64,
    delta_c: f64,
    kappa: f64,
    rabi: f64,
    merge_tol: f64,
) -> Vec<f64> {
    // λ = u + vΔ_ih must satisfy λ² + Δ₂λ − Ω² = 0 with Δ₂ = a + bΔ_ih.
    let (u, v) = match family {
        KernelFamily::V => (-delta_p, 1.0),
        KernelFamily::Xi | KernelFamily::Lambda => (delta_p, -1.0),
    };
    let (a, b) = match family {
        KernelFamily::V | KernelFamily::Xi => (delta_c, -kappa),
        KernelFamily::Lambda => (-delta_c, kappa),
    };
    let qa = v * v + b * v;
    let qb = 2.0 * u * v + a * v + b * u;
    let qc = u * u + a * u - rabi * rabi;

    let mut points = vec![delta_p];
    points.extend(real_roots(qa, qb, qc));
    if family == KernelFamily::V && rabi > 0.0 && kappa != 0.0 {
        points.push(delta_c / kappa);
    }
    points.retain(|x| x.is_finite());
    points.sort_by(f64::total_cmp);
    let mut merged: Vec<f64> = Vec::with_capacity(points.len());
    for x in points {
        match merged.last() {
            Some(&last) if (x - last).abs() <= merge_tol => {}
            _ => merged.push(x),
        }
    }
    merged
}

fn real_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(1e-300);
    if a.abs() <= 1e-14 * scale {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / a, c / q]
}
