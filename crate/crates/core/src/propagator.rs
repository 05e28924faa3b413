//! Non-unitary time evolution `U(τ) = exp(−i(σx + iασz)τ)` in units of `J`.
//!
//! With `A = ασz − iσx` one has `A² = (α² − 1)·I`, so
//! `U = k0·I + k1·A` where `k0 = cosh(τs)`, `k1 = sinh(τs)/s`, `s = √(α² − 1)`.
//! [`kernel`] evaluates `(k0, k1)` on the branch that is accurate for the
//! given `(α, τ)`; [`propagator_oracle`] computes the same exponential by
//! scaling and squaring without using the kernel at all.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{ensure_alpha_tau, Error, Result};
use crate::mat2::{Mat2C, Vec2C};

/// `|τ²(α² − 1)|` below which the Taylor branch is used.
pub const SERIES_THRESHOLD: f64 = 1e-6;

/// Hyperbolic argument above which the kernel is returned with `e^θ` factored out.
pub const OVERFLOW_THETA: f64 = 350.0;

const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelRegime {
    /// `α < 1`: `cos(ωτ)`, `sin(ωτ)/ω` with `ω = √(1 − α²)`.
    Trig,
    /// Near the exceptional point: truncated Taylor series in `τ²(α² − 1)`.
    Series,
    /// `α > 1`: `cosh(θ)`, `sinh(θ)/s`.
    Hyper,
}

/// Scalar coefficients of the propagator.
///
/// The true values are `k0·e^{log_scale}` and `k1·e^{log_scale}`;
/// `log_scale` is zero except for very large hyperbolic arguments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kernel {
    pub k0: f64,
    pub k1: f64,
    pub log_scale: f64,
    pub regime: KernelRegime,
}

impl Kernel {
    /// Relative residual of `k0² − (α² − 1)·k1² = 1`.
    pub fn invariant_residual(&self, alpha: f64) -> f64 {
        let s2 = (alpha - 1.0) * (alpha + 1.0);
        let unit = (-2.0 * self.log_scale).exp();
        let lhs = self.k0 * self.k0 - s2 * self.k1 * self.k1;
        (lhs - unit).abs() / unit.max(self.k0 * self.k0)
    }

    /// True `(k0, k1)`; may overflow when `log_scale > 0`.
    pub fn unscaled(&self) -> (f64, f64) {
        let f = self.log_scale.exp();
        (self.k0 * f, self.k1 * f)
    }
}

pub fn kernel(alpha: f64, tau: f64) -> Result<Kernel> {
    ensure_alpha_tau(alpha, tau)?;
    let s2 = (alpha - 1.0) * (alpha + 1.0);
    let x = tau * tau * s2;
    if x.abs() < SERIES_THRESHOLD {
        let k0 = 1.0 + x / 2.0 + x * x / 24.0 + x * x * x / 720.0;
        let k1 = tau * (1.0 + x / 6.0 + x * x / 120.0 + x * x * x / 5040.0);
        return Ok(Kernel {
            k0,
            k1,
            log_scale: 0.0,
            regime: KernelRegime::Series,
        });
    }
    if s2 < 0.0 {
        let omega = (-s2).sqrt();
        let phase = omega * tau;
        return Ok(Kernel {
            k0: phase.cos(),
            k1: phase.sin() / omega,
            log_scale: 0.0,
            regime: KernelRegime::Trig,
        });
    }
    let s = s2.sqrt();
    let theta = s * tau;
    let (k0, k1, log_scale) = if theta > OVERFLOW_THETA {
        let tail = (-2.0 * theta).exp();
        (0.5 * (1.0 + tail), 0.5 * (1.0 - tail) / s, theta)
    } else {
        (theta.cosh(), theta.sinh() / s, 0.0)
    };
    Ok(Kernel {
        k0,
        k1,
        log_scale,
        regime: KernelRegime::Hyper,
    })
}

fn assemble(alpha: f64, k0: f64, k1: f64) -> Mat2C {
    let off = MINUS_I * k1;
    Mat2C::new(
        Complex64::new(k0 + alpha * k1, 0.0),
        off,
        off,
        Complex64::new(k0 - alpha * k1, 0.0),
    )
}

/// Closed-form `U(τ) = [[k0 + αk1, −ik1], [−ik1, k0 − αk1]]`.
pub fn propagator(alpha: f64, tau: f64) -> Result<Mat2C> {
    let k = kernel(alpha, tau)?;
    let (k0, k1) = k.unscaled();
    let u = assemble(alpha, k0, k1);
    if !u.norm_max().is_finite() {
        return Err(Error::Numerical(format!(
            "propagator overflows at alpha = {alpha}, tau = {tau}"
        )));
    }
    Ok(u)
}

/// `U(τ)·e^{−log_scale}` together with `log_scale`; finite for every valid input.
pub fn scaled_propagator(alpha: f64, tau: f64) -> Result<(Mat2C, f64)> {
    let k = kernel(alpha, tau)?;
    Ok((assemble(alpha, k.k0, k.k1), k.log_scale))
}

/// Number of Taylor terms used by [`matrix_exp`].
const TAYLOR_TERMS: usize = 24;

/// `exp(A)` by scaling and squaring around a truncated Taylor series.
///
/// `A` is scaled by `2^{−s}` until its 1-norm is at most `2^{−5}`.
pub fn matrix_exp(a: &Mat2C) -> Mat2C {
    let norm = a.norm_1();
    let squarings = if norm > 1.0 / 32.0 {
        (norm * 32.0).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale_real(2f64.powi(-squarings));
    let mut term = Mat2C::identity();
    let mut sum = Mat2C::identity();
    for n in 1..=TAYLOR_TERMS {
        term = (term * scaled).scale_real(1.0 / n as f64);
        sum = sum + term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// Independent reference for [`propagator`]: `exp(−i(σx + iασz)τ)` via [`matrix_exp`].
pub fn propagator_oracle(alpha: f64, tau: f64) -> Result<Mat2C> {
    ensure_alpha_tau(alpha, tau)?;
    let generator = Mat2C::sigma_x() + Mat2C::sigma_z().scale(Complex64::new(0.0, alpha));
    Ok(matrix_exp(&generator.scale(MINUS_I * tau)))
}

/// Validated qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Mat2C);

/// Tolerance for the Hermiticity, trace, and positivity checks.
pub const STATE_TOL: f64 = 1e-12;

impl DensityMatrix {
    pub fn new(m: Mat2C) -> Result<Self> {
        if !m.norm_max().is_finite() {
            return Err(Error::Domain("density matrix has non-finite entries".into()));
        }
        if !m.is_hermitian(STATE_TOL) {
            return Err(Error::Domain("density matrix is not Hermitian".into()));
        }
        if (m.trace() - 1.0).norm() > STATE_TOL {
            return Err(Error::Domain(format!(
                "density matrix trace is {}, expected 1",
                m.trace()
            )));
        }
        if m.hermitian_eigenvalues().0 < -STATE_TOL {
            return Err(Error::Domain("density matrix is not positive semidefinite".into()));
        }
        Ok(Self(m))
    }

    pub fn maximally_mixed() -> Self {
        Self(Mat2C::identity().scale_real(0.5))
    }

    /// `|ψ⟩⟨ψ|/⟨ψ|ψ⟩`.
    pub fn pure(psi: &Vec2C) -> Result<Self> {
        let norm2 = psi[0].norm_sqr() + psi[1].norm_sqr();
        if !(norm2 > 0.0) || !norm2.is_finite() {
            return Err(Error::Domain("pure state vector must be nonzero and finite".into()));
        }
        Ok(Self(Mat2C::outer(psi, psi).scale_real(1.0 / norm2)))
    }

    /// `(I + xσx + yσy + zσz)/2` with `x² + y² + z² ≤ 1`.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        let r2 = x * x + y * y + z * z;
        if !r2.is_finite() || r2 > 1.0 + STATE_TOL {
            return Err(Error::Domain(format!("Bloch vector length² {r2} exceeds 1")));
        }
        let m = Mat2C::identity()
            + Mat2C::sigma_x().scale_real(x)
            + Mat2C::sigma_y().scale_real(y)
            + Mat2C::sigma_z().scale_real(z);
        Ok(Self(m.scale_real(0.5)))
    }

    pub fn matrix(&self) -> &Mat2C {
        &self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0.get(row, col)
    }

    /// `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)`.
    pub fn bloch(&self) -> [f64; 3] {
        let off = self.0.get(0, 1);
        [
            2.0 * off.re,
            -2.0 * off.im,
            (self.0.get(0, 0) - self.0.get(1, 1)).re,
        ]
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// `Tr[Pρ]` for a projector (or any observable) `P`.
    pub fn expectation(&self, op: &Mat2C) -> f64 {
        (*op * self.0).trace().re
    }

    /// Normalizes `m` by its trace and Hermitizes it; `m` must be a
    /// positive operator up to rounding.
    pub(crate) fn from_positive(m: Mat2C) -> Result<Self> {
        let tr = m.trace().re;
        if !(tr >= 1e-300) || !tr.is_finite() {
            return Err(Error::Numerical(format!("state norm {tr:e} cannot be normalized")));
        }
        let n = m.scale_real(1.0 / tr);
        Ok(Self((n + n.adjoint()).scale_real(0.5)))
    }
}

/// `UρU† / Tr[UρU†]` with `U = U(α, τ)`.
pub fn evolve_state(rho: &DensityMatrix, alpha: f64, tau: f64) -> Result<DensityMatrix> {
    let (u, _) = scaled_propagator(alpha, tau)?;
    DensityMatrix::from_positive(u * rho.0 * u.adjoint())
}

/// Normalized components `(c1, c2)` of `U(τ)|+⟩ ∝ c1|+⟩ + c2|−⟩`.
pub fn evolve_plus_coefficients(alpha: f64, tau: f64) -> Result<(Complex64, Complex64)> {
    let k = kernel(alpha, tau)?;
    let c1 = Complex64::new(k.k0, -k.k1);
    let c2 = Complex64::new(alpha * k.k1, 0.0);
    let norm = (c1.norm_sqr() + c2.norm_sqr()).sqrt();
    Ok((c1 / norm, c2 / norm))
}
