//! l1-norm coherence, mixedness and their complementarity.
//!
//! Coherence is always measured in the computational (σz) basis, the basis in
//! which the Hamiltonian is written.

use serde::Serialize;

use crate::error::Result;
use crate::propagator::{kernel, DensityMatrix, KernelRegime};

/// `Σ_{i≠j} |ρ_ij| = 2|ρ01|`.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    2.0 * rho.entry(0, 1).norm()
}

/// Normalized linear entropy `2(1 − Tr ρ²)`.
pub fn mixedness(rho: &DensityMatrix) -> f64 {
    2.0 * (1.0 - rho.purity())
}

/// Shared pieces of the closed forms for the evolved maximally mixed state:
/// `sinh²θ` and `α² cosh 2θ − 1`, both multiplied by `e^{−2·log_scale}`,
/// plus the same scale applied to 1.
struct MixedStateTerms {
    sinh_sq: f64,
    denominator: f64,
    unit: f64,
    near_ep: bool,
}

fn mixed_state_terms(alpha: f64, tau: f64) -> Result<MixedStateTerms> {
    let k = kernel(alpha, tau)?;
    let s2 = (alpha - 1.0) * (alpha + 1.0);
    let unit = (-2.0 * k.log_scale).exp();
    let sinh_sq = s2 * k.k1 * k.k1;
    // α² cosh 2θ − 1 = (α² − 1) + 2α² sinh²θ
    let denominator = s2 * unit + 2.0 * alpha * alpha * sinh_sq;
    Ok(MixedStateTerms {
        sinh_sq,
        denominator,
        unit,
        near_ep: k.regime == KernelRegime::Series,
    })
}

/// Coherence of `I/2` evolved for `τ`:
/// `2|α sinh²θ / (α² cosh 2θ − 1)|`, `θ = τ√(α² − 1)`.
///
/// Inside the series window the common factor `α² − 1` is cancelled
/// analytically, which gives `2αk1²/(1 + 2α²k1²)` (`2τ²/(1 + 2τ²)` at α = 1).
pub fn coherence_closed_form(alpha: f64, tau: f64) -> Result<f64> {
    let t = mixed_state_terms(alpha, tau)?;
    if t.near_ep {
        let k = kernel(alpha, tau)?;
        let k1_sq = k.k1 * k.k1;
        return Ok(2.0 * alpha * k1_sq / (t.unit + 2.0 * alpha * alpha * k1_sq));
    }
    Ok(2.0 * (alpha * t.sinh_sq / t.denominator).abs())
}

/// Mixedness of `I/2` evolved for `τ`: `(α² − 1)² / (α² cosh 2θ − 1)²`
/// (`1/(1 + 2τ²)²` at α = 1).
pub fn mixedness_closed_form(alpha: f64, tau: f64) -> Result<f64> {
    let t = mixed_state_terms(alpha, tau)?;
    if t.near_ep {
        let k = kernel(alpha, tau)?;
        let d = t.unit + 2.0 * alpha * alpha * k.k1 * k.k1;
        return Ok(t.unit * t.unit / (d * d));
    }
    let s2 = (alpha - 1.0) * (alpha + 1.0);
    let ratio = s2 * t.unit / t.denominator;
    Ok(ratio * ratio)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherenceReport {
    pub coherence: f64,
    pub mixedness: f64,
    pub purity: f64,
    pub bloch_z: f64,
    /// `1 − C² − μ`; equals `bloch_z²` for a qubit.
    pub complementarity_slack: f64,
}

pub fn coherence_report(rho: &DensityMatrix) -> CoherenceReport {
    let coherence = l1_coherence(rho);
    let purity = rho.purity();
    let mixedness = 2.0 * (1.0 - purity);
    CoherenceReport {
        coherence,
        mixedness,
        purity,
        bloch_z: rho.bloch()[2],
        complementarity_slack: 1.0 - coherence * coherence - mixedness,
    }
}
