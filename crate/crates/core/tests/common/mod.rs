//! Reference implementations used as oracles by the integration tests.
//!
//! Nothing here calls into the closed-form kernel or the library chain: the
//! propagator is a plain Taylor exponential on raw arrays, and the
//! sequential-measurement probabilities follow the textbook trace formula.

#![allow(dead_code)]

use num_complex::Complex64 as C;

pub type M = [[C; 2]; 2];

const Z: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

pub fn mul(a: &M, b: &M) -> M {
    let mut r = [[Z; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

pub fn adj(a: &M) -> M {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

pub fn scale(a: &M, s: C) -> M {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

pub fn trace(a: &M) -> C {
    a[0][0] + a[1][1]
}

pub fn max_abs(a: &M) -> f64 {
    a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn diff(a: &M, b: &M) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

/// `exp(A)`: halve until every entry is below 1/4, 30 Taylor terms, square back.
pub fn expm(a: &M) -> M {
    let mut s = 0;
    let mut x = *a;
    while max_abs(&x) > 0.25 {
        x = scale(&x, C::new(0.5, 0.0));
        s += 1;
    }
    let mut term = [[ONE, Z], [Z, ONE]];
    let mut sum = term;
    for n in 1..=30 {
        term = scale(&mul(&term, &x), C::new(1.0 / n as f64, 0.0));
        for i in 0..2 {
            for j in 0..2 {
                sum[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..s {
        sum = mul(&sum, &sum);
    }
    sum
}

/// `exp(−iτ(σx + iασz))`.
pub fn u(alpha: f64, tau: f64) -> M {
    let h = [[C::new(0.0, alpha), ONE], [ONE, C::new(0.0, -alpha)]];
    expm(&scale(&h, C::new(0.0, -tau)))
}

pub fn evolve(rho: &M, alpha: f64, tau: f64) -> M {
    let u = u(alpha, tau);
    let r = mul(&mul(&u, rho), &adj(&u));
    let t = trace(&r);
    scale(&r, ONE / t)
}

pub fn mixed() -> M {
    [[C::new(0.5, 0.0), Z], [Z, C::new(0.5, 0.0)]]
}

/// `(I + sσy)/2`.
pub fn proj(s: f64) -> M {
    [
        [C::new(0.5, 0.0), C::new(0.0, -0.5 * s)],
        [C::new(0.0, 0.5 * s), C::new(0.5, 0.0)],
    ]
}

/// `p(a at t_i, b at t_j)` from `ρ(t_i)` and the gap `Δ = t_j − t_i`:
/// `Tr[Π_b U Π_a ρ Π_a U†] / Tr[U Π_a ρ Π_a U†] · Tr[Π_a ρ]`.
pub fn joint(alpha: f64, rho_i: &M, gap: f64, a: f64, b: f64) -> f64 {
    let pa = proj(a);
    let reduced = mul(&mul(&pa, rho_i), &pa);
    let first = trace(&reduced).re;
    if first < 1e-14 {
        return 0.0;
    }
    let u = u(alpha, gap);
    let later = mul(&mul(&u, &reduced), &adj(&u));
    first * trace(&mul(&proj(b), &later)).re / trace(&later).re
}

/// Joint tables for the pairs (1,2), (2,3), (1,3) with times `τ0, τ0 + τ, τ0 + 2τ`,
/// indexed `[pair][a][b]` with 0 = +1 and 1 = −1.
pub fn tables(alpha: f64, tau0: f64, tau: f64) -> [[[f64; 2]; 2]; 3] {
    let r1 = if tau0 > 0.0 { evolve(&mixed(), alpha, tau0) } else { mixed() };
    let r2 = evolve(&mixed(), alpha, tau0 + tau);
    let signs = [1.0, -1.0];
    let mut out = [[[0.0; 2]; 2]; 3];
    for (ia, &a) in signs.iter().enumerate() {
        for (ib, &b) in signs.iter().enumerate() {
            out[0][ia][ib] = joint(alpha, &r1, tau, a, b);
            out[1][ia][ib] = joint(alpha, &r2, tau, a, b);
            out[2][ia][ib] = joint(alpha, &r1, 2.0 * tau, a, b);
        }
    }
    out
}

pub fn correlator(t: &[[f64; 2]; 2]) -> f64 {
    t[0][0] - t[0][1] - t[1][0] + t[1][1]
}

/// `K = C12 + C23 − C13` with `τ0 = τ`.
pub fn k3(alpha: f64, tau: f64) -> f64 {
    let t = tables(alpha, tau, tau);
    correlator(&t[0]) + correlator(&t[1]) - correlator(&t[2])
}

/// `P23(−,−) − P12(+,−) − P13(−,−)` with `τ0 = τ`.
pub fn wq(alpha: f64, tau: f64) -> f64 {
    let t = tables(alpha, tau, tau);
    t[1][1][1] - t[0][0][1] - t[2][1][1]
}

/// l1 coherence `2|α sinh²θ / (α² cosh 2θ − 1)|` with complex `θ = τ√(α² − 1)`;
/// at α = 1 the limit `2τ²/(1 + 2τ²)`.
pub fn coherence_formula(alpha: f64, tau: f64) -> f64 {
    if alpha == 1.0 {
        return 2.0 * tau * tau / (1.0 + 2.0 * tau * tau);
    }
    let theta = C::new(alpha * alpha - 1.0, 0.0).sqrt() * tau;
    let s = theta.sinh();
    (C::new(2.0 * alpha, 0.0) * s * s / (theta.scale(2.0).cosh() * alpha * alpha - 1.0)).norm()
}

/// Mixedness `(α² − 1)² / (α² cosh 2θ − 1)²`; at α = 1 the limit `1/(1 + 2τ²)²`.
pub fn mixedness_formula(alpha: f64, tau: f64) -> f64 {
    if alpha == 1.0 {
        return 1.0 / (1.0 + 2.0 * tau * tau).powi(2);
    }
    let theta = C::new(alpha * alpha - 1.0, 0.0).sqrt() * tau;
    let d = theta.scale(2.0).cosh() * alpha * alpha - 1.0;
    ((alpha * alpha - 1.0).powi(2) / (d * d)).norm()
}
