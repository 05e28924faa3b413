//! Closed forms for the equal-spacing schedule (`τ₀ = τ`).
//!
//! Both expressions are rational in `cosh(nΘ)`, `Θ = τ√(α² − 1)`, continued to
//! `cos(nτ√(1 − α²))` for `α < 1`. In the hyperbolic regime every factor of
//! the form `a·cosh(mΘ) + b` is evaluated as `a·cosh(mΘ)e^{−mΘ} + b·e^{−mΘ}`;
//! numerator and denominator of each ratio carry the same total exponent, so
//! the ratios are unchanged and nothing overflows.
//!
//! At `α = 1` every ratio is 0/0. Inside `|α − 1| ≤ 1e-6` the functions return
//! [`Error::EpWindow`] and callers fall back on the sequential chain.

use crate::error::{ensure_alpha_tau, Error, Result};

/// Half-width of the exceptional-point window around `α = 1`.
pub const EP_WINDOW: f64 = 1e-6;

/// Denominators with magnitude below this are reported as poles.
pub const POLE_TOL: f64 = 1e-12;

/// `cosh(mΘ)` continued analytically in `α`, with an optional `e^{−mΘ}` factor.
#[derive(Debug, Clone, Copy)]
enum Argument {
    /// `α < 1`: `cosh(mΘ) = cos(mφ)`, `φ = τ√(1 − α²)`.
    Trig(f64),
    /// `α > 1`: `Θ` itself.
    Hyper(f64),
}

impl Argument {
    fn new(alpha: f64, tau: f64) -> Self {
        let s2 = (alpha - 1.0) * (alpha + 1.0);
        if s2 < 0.0 {
            Argument::Trig(tau * (-s2).sqrt())
        } else {
            Argument::Hyper(tau * s2.sqrt())
        }
    }

    /// `cosh(mΘ)·e^{−mΘ}` (plain `cos(mφ)` in the trig regime).
    fn cosh(self, m: f64) -> f64 {
        match self {
            Argument::Trig(phi) => (m * phi).cos(),
            Argument::Hyper(theta) => 0.5 * (1.0 + (-2.0 * m * theta).exp()),
        }
    }

    /// `sinh²(mΘ)·e^{−2mΘ}` (`−sin²(mφ)` in the trig regime).
    fn sinh_sq(self, m: f64) -> f64 {
        match self {
            Argument::Trig(phi) => -(m * phi).sin().powi(2),
            Argument::Hyper(theta) => (0.5 * (1.0 - (-2.0 * m * theta).exp())).powi(2),
        }
    }

    /// `e^{−mΘ}` (1 in the trig regime).
    fn decay(self, m: f64) -> f64 {
        match self {
            Argument::Trig(_) => 1.0,
            Argument::Hyper(theta) => (-m * theta).exp(),
        }
    }

    /// `a·cosh(mΘ) + b`, scaled by `e^{−mΘ}`.
    fn linear(self, a: f64, m: f64, b: f64) -> f64 {
        a * self.cosh(m) + b * self.decay(m)
    }

    /// `log` of the factor removed from a product of total degree `m`.
    fn log_scale(self, m: f64) -> f64 {
        match self {
            Argument::Trig(_) => 0.0,
            Argument::Hyper(theta) => m * theta,
        }
    }

    /// Chebyshev-style `cosh(mΘ)` scaled by `e^{−lΘ}` for `m ≤ l`.
    fn cosh_scaled_to(self, m: f64, l: f64) -> f64 {
        match self {
            Argument::Trig(phi) => (m * phi).cos(),
            Argument::Hyper(theta) => {
                0.5 * (((m - l) * theta).exp() + (-(m + l) * theta).exp())
            }
        }
    }
}

fn check_closed_domain(alpha: f64, tau: f64) -> Result<Argument> {
    ensure_alpha_tau(alpha, tau)?;
    if tau == 0.0 {
        return Err(Error::Domain("measurement spacing must be > 0".into()));
    }
    if (alpha - 1.0).abs() <= EP_WINDOW {
        return Err(Error::EpWindow { alpha });
    }
    Ok(Argument::new(alpha, tau))
}

fn check_pole(scaled: f64, arg: Argument, degree: f64) -> Result<()> {
    let magnitude = scaled.abs() * arg.log_scale(degree).exp();
    if magnitude < POLE_TOL {
        Err(Error::NearPole {
            denominator: magnitude,
        })
    } else {
        Ok(())
    }
}

/// Coefficients `c0..c9` of the `K_Q` expansion as they are usually printed,
/// with `a = α²` and rows holding the coefficients of `1, a, a², a³, a⁴`.
pub const PRINTED_K3_COEFFICIENTS: [[f64; 5]; 10] = [
    [0.0, 16.0, 26.0, -44.0, 12.0],
    [64.0, -104.0, 20.0, 28.0, -14.0],
    [-32.0, -32.0, 92.0, -60.0, 24.0],
    [-32.0, 48.0, 2.0, -10.0, 0.0],
    [48.0, -24.0, -48.0, 16.0, 0.0],
    [-24.0, 16.0, 14.0, 0.0, 0.0],
    [0.0, 4.0, -4.0, 8.0, 0.0],
    [0.0, 12.0, -13.0, -2.0, 0.0],
    [0.0, -2.0, -4.0, 4.0, 0.0],
    [0.0, 0.0, 1.0, 0.0, 0.0],
];

/// Coefficients that reproduce the sequential chain (times 32), same layout.
///
/// Relative to [`PRINTED_K3_COEFFICIENTS`], rows 3..=9 carry an extra factor
/// `a` and row 5 gains the missing `−6a³` term.
const K3_COEFFICIENTS: [[f64; 5]; 10] = [
    [0.0, 16.0, 26.0, -44.0, 12.0],
    [64.0, -104.0, 20.0, 28.0, -14.0],
    [-32.0, -32.0, 92.0, -60.0, 24.0],
    [0.0, -32.0, 48.0, 2.0, -10.0],
    [0.0, 48.0, -24.0, -48.0, 16.0],
    [0.0, -24.0, 16.0, 14.0, -6.0],
    [0.0, 0.0, 4.0, -4.0, 8.0],
    [0.0, 0.0, 12.0, -13.0, -2.0],
    [0.0, 0.0, -2.0, -4.0, 4.0],
    [0.0, 0.0, 0.0, 1.0, 0.0],
];

fn polynomial(coeffs: &[f64; 5], a: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * a + c)
}

/// `Σₙ cₙ cosh(2nΘ) / (scale · N)` with
/// `N = (αC₂ − 1)(αC₄ − 1)(α²C₂ − 1)(α²C₄ − 1)(αC₂ + 1)(αC₄ + 1)`,
/// `C_k = cosh(kΘ)`.
fn k3_expansion(alpha: f64, tau: f64, table: &[[f64; 5]; 10], scale: f64) -> Result<f64> {
    let arg = check_closed_domain(alpha, tau)?;
    let a = alpha * alpha;
    // total degree of N in units of Θ: 2 + 4 + 2 + 4 + 2 + 4
    let degree = 18.0;
    let numerator: f64 = table
        .iter()
        .enumerate()
        .map(|(n, row)| polynomial(row, a) * arg.cosh_scaled_to(2.0 * n as f64, degree))
        .sum();
    let n = arg.linear(alpha, 2.0, -1.0)
        * arg.linear(alpha, 4.0, -1.0)
        * arg.linear(a, 2.0, -1.0)
        * arg.linear(a, 4.0, -1.0)
        * arg.linear(alpha, 2.0, 1.0)
        * arg.linear(alpha, 4.0, 1.0);
    check_pole(n, arg, degree)?;
    Ok(numerator / (scale * n))
}

/// Standard Leggett-Garg combination `K_Q` in closed form.
pub fn k3_closed_form(alpha: f64, tau: f64) -> Result<f64> {
    k3_expansion(alpha, tau, &K3_COEFFICIENTS, 32.0)
}

/// `K_Q` evaluated with [`PRINTED_K3_COEFFICIENTS`] and no normalization.
///
/// Kept for comparison only: it does not reduce to `2cos2τ − cos4τ` at α = 0
/// and disagrees with the sequential chain everywhere.
pub fn k3_printed_form(alpha: f64, tau: f64) -> Result<f64> {
    k3_expansion(alpha, tau, &PRINTED_K3_COEFFICIENTS, 1.0)
}

/// Wigner-form combination `W_Q` (form W1, all signs `−1`) in closed form.
pub fn wq_closed_form(alpha: f64, tau: f64) -> Result<f64> {
    let arg = check_closed_domain(alpha, tau)?;
    let a = alpha * alpha;
    let lift = (alpha + 1.0) * (alpha + 1.0);

    let cosh1_sq = arg.cosh(1.0).powi(2);
    let cosh2 = arg.cosh(2.0);
    let sinh1_sq = arg.sinh_sq(1.0);

    let p2 = arg.linear(alpha, 2.0, 1.0);
    let m2 = arg.linear(alpha, 2.0, -1.0);
    let p4 = arg.linear(alpha, 4.0, 1.0);
    let m4 = arg.linear(alpha, 4.0, -1.0);
    let q2 = arg.linear(a, 2.0, -1.0);
    let q4 = arg.linear(a, 4.0, -1.0);

    let d1 = p2 * q4;
    let d2 = q2 * p4;
    let d3 = m2 * q2;
    check_pole(d1, arg, 6.0)?;
    check_pole(d2, arg, 6.0)?;
    check_pole(d3, arg, 4.0)?;

    let first = lift * m4 * cosh1_sq / d1;
    let second = lift * cosh2 * cosh2 * m2 / d2;
    let third = (a - 1.0) * sinh1_sq * p2 / d3;
    Ok(0.5 * (first - second - third))
}
