//! The gain/loss Hamiltonian `H = [[iγ, J], [J, −iγ]]`, its symmetry phase,
//! and the operators of the Naimark dilation.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};
use crate::mat2::{Mat2C, Vec2C};
use crate::propagator::propagator;

/// Default half-width of the exceptional band used by [`classify_phase`].
pub const DEFAULT_EP_TOL: f64 = 1e-9;

/// `|α − 1|` below which the intertwiner `O` is treated as singular.
const NAIMARK_EP_TOL: f64 = 1e-12;

/// Validated PT-symmetric two-level Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtHamiltonian {
    j: f64,
    gamma: f64,
    alpha: f64,
}

impl PtHamiltonian {
    pub fn new(j: f64, gamma: f64) -> Result<Self> {
        ensure_finite("J", j)?;
        ensure_finite("gamma", gamma)?;
        if j <= 0.0 {
            return Err(Error::Domain(format!("J must be > 0, got {j}")));
        }
        if gamma < 0.0 {
            return Err(Error::Domain(format!("gamma must be >= 0, got {gamma}")));
        }
        Ok(Self {
            j,
            gamma,
            alpha: gamma / j,
        })
    }

    /// Hamiltonian in units of `J` (J = 1, γ = α).
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        Self::new(1.0, alpha)
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Dimensionless gain/loss ratio γ/J.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn matrix(&self) -> Mat2C {
        let ig = Complex64::new(0.0, self.gamma);
        let j = Complex64::new(self.j, 0.0);
        Mat2C::new(ig, j, j, -ig)
    }
}

/// Same as [`PtHamiltonian::new`].
pub fn make_hamiltonian(j: f64, gamma: f64) -> Result<PtHamiltonian> {
    PtHamiltonian::new(j, gamma)
}

/// Coupling strength `|1 − e^{−iφ}| = 2|sin(φ/2)|` produced by a relative phase φ.
pub fn coupling_from_phase(phi: f64) -> f64 {
    (Complex64::new(1.0, 0.0) - Complex64::new(0.0, -phi).exp()).norm()
}

/// Eigenvalues `(E+, E−) = (±√(J² − γ²))`, pure imaginary in the broken phase.
pub fn spectrum(h: &PtHamiltonian) -> (Complex64, Complex64) {
    let disc = (h.j - h.gamma) * (h.j + h.gamma);
    let root = Complex64::new(disc, 0.0).sqrt();
    (root, -root)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    PtSymmetric,
    Exceptional,
    PtBroken,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::PtSymmetric => "PTSymmetric",
            Phase::Exceptional => "Exceptional",
            Phase::PtBroken => "PTBroken",
        })
    }
}

/// Phase label together with the band half-width that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseClass {
    pub phase: Phase,
    pub tolerance: f64,
}

pub fn classify_phase(h: &PtHamiltonian, tol: f64) -> Result<PhaseClass> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    let phase = if (h.alpha - 1.0).abs() <= tol {
        Phase::Exceptional
    } else if h.alpha < 1.0 {
        Phase::PtSymmetric
    } else {
        Phase::PtBroken
    };
    Ok(PhaseClass {
        phase,
        tolerance: tol,
    })
}

/// Dilation operators for one Hamiltonian.
///
/// `eta = O·O†` is the metric candidate, `c` the sum of reciprocal eigenvalues
/// of `eta`, and `xi = c·eta − I` the ancilla coupling. In the broken phase
/// (`alpha > 1`) the operators are still well defined but `eta` is indefinite,
/// so no valid dilation exists; `broken_phase` records that.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaimarkSet {
    pub o: Mat2C,
    pub eta: Mat2C,
    pub xi: Mat2C,
    pub c: f64,
    pub broken_phase: bool,
}

pub fn naimark_operators(h: &PtHamiltonian) -> Result<NaimarkSet> {
    let alpha = h.alpha;
    if (alpha - 1.0).abs() <= NAIMARK_EP_TOL {
        return Err(Error::ExceptionalPoint { alpha });
    }
    let (j, g) = (h.j, h.gamma);
    let root = spectrum(h).0;
    let ig = Complex64::new(0.0, g);
    let jc = Complex64::new(j, 0.0);
    let o = Mat2C::new(ig - root, ig + root, jc, jc).scale_real(1.0 / j);
    let eta = Mat2C::new(jc, ig, -ig, jc).scale_real(2.0 / j);
    // eigenvalues of eta are 2(1 ± alpha)
    let c = 1.0 / ((1.0 - alpha) * (1.0 + alpha));
    let xi = eta.scale_real(c) - Mat2C::identity();
    Ok(NaimarkSet {
        o,
        eta,
        xi,
        c,
        broken_phase: alpha > 1.0,
    })
}

/// Metric used to weight the bilinear form `⟨ψ|M|ψ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// `η⁻¹`: conserved under `exp(−iHt)` with the explicit `η` above.
    EtaInverse,
    /// `η` itself: drifts in time.
    Eta,
}

/// `⟨ψ(τ)|M|ψ(τ)⟩` along `ψ(τ) = U(τ)ψ₀` with the unnormalized propagator,
/// using `M = η⁻¹` (the conserved choice).
pub fn conserved_bilinear(h: &PtHamiltonian, psi0: &Vec2C, tau_grid: &[f64]) -> Result<Vec<f64>> {
    metric_bilinear(h, psi0, tau_grid, Metric::EtaInverse)
}

pub fn metric_bilinear(
    h: &PtHamiltonian,
    psi0: &Vec2C,
    tau_grid: &[f64],
    metric: Metric,
) -> Result<Vec<f64>> {
    if h.alpha >= 1.0 {
        return Err(Error::BrokenPhase { alpha: h.alpha });
    }
    if psi0.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::Domain("initial state must be nonzero".into()));
    }
    let ops = naimark_operators(h)?;
    let m = match metric {
        Metric::Eta => ops.eta,
        Metric::EtaInverse => ops
            .eta
            .inverse()
            .ok_or_else(|| Error::Numerical("metric is singular".into()))?,
    };
    tau_grid
        .iter()
        .map(|&tau| {
            let psi = propagator(h.alpha, tau)?.apply(psi0);
            Ok(m.sandwich(&psi, &psi).re)
        })
        .collect()
}

/// Spread `max − min` of a series.
pub fn spread(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if values.is_empty() {
        0.0
    } else {
        hi - lo
    }
}
