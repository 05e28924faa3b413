//! One-dimensional maximization over the measurement spacing.

use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};

/// Width of the golden-section bracket at termination.
pub const REFINE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Maximum {
    pub tau: f64,
    pub value: f64,
    /// The coarse maximum sat on the first or last grid point.
    pub boundary: bool,
}

fn score(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Values closer than this (relative) are treated as ties; ties go to the
/// smaller `τ`.
pub const TIE_TOL: f64 = 1e-12;

/// Number of coarse local maxima that are refined.
const MAX_CANDIDATES: usize = 8;

fn beats(a: f64, b: f64) -> bool {
    a > b + TIE_TOL * b.abs().max(1.0)
}

fn golden_section<F: FnMut(f64) -> f64>(f: &mut F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = score(f(x1));
    let mut f2 = score(f(x2));
    while hi - lo > REFINE_TOL {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = score(f(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = score(f(x2));
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Coarse scan of `f` on `grid_step, 2·grid_step, …, tau_max`, then
/// golden-section refinement inside the brackets around the best coarse local
/// maxima.
///
/// NaN values count as `−∞`. Near-equal maxima resolve to the earliest `τ`, so
/// periodic objectives report their first peak and a constant objective
/// reports the first grid point with `boundary = true`.
pub fn maximize_over_tau<F>(mut f: F, tau_max: f64, grid_step: f64) -> Result<Maximum>
where
    F: FnMut(f64) -> f64,
{
    ensure_finite("tau_max", tau_max)?;
    ensure_finite("grid_step", grid_step)?;
    if tau_max <= 0.0 || grid_step <= 0.0 {
        return Err(Error::Domain(format!(
            "tau_max and grid_step must be > 0, got {tau_max} and {grid_step}"
        )));
    }
    let steps = (tau_max / grid_step).floor();
    if steps > 1e7 {
        return Err(Error::Domain(format!("{steps} grid points requested")));
    }
    let steps = steps as usize;
    let mut grid: Vec<f64> = (1..=steps).map(|i| i as f64 * grid_step).collect();
    if grid.last().is_none_or(|&t| tau_max - t > 1e-12 * tau_max) {
        grid.push(tau_max);
    }
    let values: Vec<f64> = grid.iter().map(|&t| score(f(t))).collect();
    let last = grid.len() - 1;

    // local maxima of the coarse scan; a plateau contributes its first point
    let mut candidates: Vec<usize> = (0..=last)
        .filter(|&i| {
            let left = i == 0 || values[i] > values[i - 1];
            let right = i == last || values[i] >= values[i + 1];
            left && right && values[i] > f64::NEG_INFINITY
        })
        .collect();
    if candidates.is_empty() {
        return Ok(Maximum {
            tau: grid[0],
            value: values[0],
            boundary: true,
        });
    }
    candidates.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    candidates.truncate(MAX_CANDIDATES);
    candidates.sort_unstable();

    let mut best: Option<(usize, Maximum)> = None;
    for i in candidates {
        let (mut tau, mut value) = (grid[i], values[i]);
        if grid.len() >= 3 {
            let lo = if i == 0 { grid[0] } else { grid[i - 1] };
            let hi = if i == last { grid[last] } else { grid[i + 1] };
            let (t, v) = golden_section(&mut f, lo, hi);
            // never worse than the grid point that seeded the bracket
            if v >= value {
                tau = t;
                value = v;
            }
        }
        let m = Maximum {
            tau,
            value,
            boundary: i == 0 || i == last,
        };
        match &best {
            Some((_, b)) if !beats(m.value, b.value) => {}
            _ => best = Some((i, m)),
        }
    }
    Ok(best.map(|(_, m)| m).expect("at least one candidate"))
}
