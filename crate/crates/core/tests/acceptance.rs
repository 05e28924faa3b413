//! Acceptance report: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Reference values come from the raw-array oracle in
//! `common`, not from the library's own closed forms.

mod common;

use std::f64::consts::{FRAC_PI_6, PI};
use std::process::Command;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ptqubit::lgi::{
    k3_closed_form, k3_direct, maximize_over_tau, sequential_tables, wq_closed_form, MeasurementSchedule,
    Pair, Tau0Mode, WignerInequality,
};
use ptqubit::observables::{coherence_closed_form, mixedness_closed_form};
use ptqubit::propagator::propagator;
use ptqubit::ptcore::{naimark_operators, PtHamiltonian};
use ptqubit::Mat2C;

struct Verdict {
    pass: bool,
    detail: String,
}

fn alphas_c1() -> Vec<f64> {
    let mut a: Vec<f64> = (0..=20).map(|i| i as f64 / 10.0).collect();
    a.extend([1.0 - 1e-7, 1.0 + 1e-7]);
    a
}

const TAUS_C1: [f64; 6] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
const ALPHAS_C5: [f64; 8] = [0.0, 0.25, 0.5, 5.0 / 6.0, 0.95, 1.2, 1.5, 2.0];

fn taus_c5() -> Vec<f64> {
    (1..=60).map(|i| i as f64 / 10.0).collect()
}

fn to_arr(m: &Mat2C) -> common::M {
    m.m
}

fn rel(a: &common::M, b: &common::M) -> f64 {
    common::diff(a, b) / common::max_abs(b).max(1.0)
}

fn det(m: &common::M) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Norms are relative to `max(1, ‖U‖max)`: entries reach ~3.5e7 at α = 2, τ = 10,
/// where one ulp already exceeds 1e-10 in absolute terms.
fn criterion_1() -> Verdict {
    let (mut eq, mut dt, mut sg, mut abs) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for a in alphas_c1() {
        for t in TAUS_C1 {
            let u = to_arr(&propagator(a, t).unwrap());
            let o = common::u(a, t);
            eq = eq.max(rel(&u, &o));
            abs = abs.max(common::diff(&u, &o));
            dt = dt.max((det(&u) - 1.0).norm() / common::max_abs(&u).powi(2).max(1.0));
            let split = common::mul(
                &to_arr(&propagator(a, 0.4 * t).unwrap()),
                &to_arr(&propagator(a, 0.6 * t).unwrap()),
            );
            sg = sg.max(rel(&split, &u));
        }
    }
    Verdict {
        pass: eq < 1e-10 && dt < 1e-10 && sg < 1e-10,
        detail: format!("normwise-relative: oracle {eq:.2e}, det {dt:.2e}, semigroup {sg:.2e} (tol 1e-10); absolute {abs:.2e}"),
    }
}

fn close(a: f64, b: f64) -> f64 {
    // > 1 means outside max(1e-9|b|, 1e-12)
    (a - b).abs() / (1e-9 * b.abs()).max(1e-12)
}

fn state_c_mu(alpha: f64, tau: f64) -> (f64, f64) {
    let r = common::evolve(&common::mixed(), alpha, tau);
    let c = 2.0 * r[0][1].norm();
    let purity = (r[0][0] * r[0][0] + r[0][1] * r[1][0] * 2.0 + r[1][1] * r[1][1]).re;
    (c, 2.0 * (1.0 - purity))
}

fn criterion_2() -> Verdict {
    let mut worst: f64 = 0.0;
    for a in alphas_c1() {
        for t in TAUS_C1 {
            let (c, m) = state_c_mu(a, t);
            worst = worst.max(close(coherence_closed_form(a, t).unwrap(), c));
            worst = worst.max(close(mixedness_closed_form(a, t).unwrap(), m));
        }
    }
    let mut ep: f64 = 0.0;
    for t in TAUS_C1 {
        let s = 1.0 + 2.0 * t * t;
        ep = ep.max((coherence_closed_form(1.0, t).unwrap() - 2.0 * t * t / s).abs());
        ep = ep.max((mixedness_closed_form(1.0, t).unwrap() - 1.0 / (s * s)).abs());
    }
    let c50 = coherence_closed_form(1.0, 50.0).unwrap();
    let m50 = mixedness_closed_form(1.0, 50.0).unwrap();
    Verdict {
        pass: worst <= 1.0 && ep < 1e-9 && c50 >= 0.999 && m50 <= 1e-6,
        detail: format!(
            "worst error/tolerance {worst:.2e}; EP limit dev {ep:.2e}; C(1,50) = {c50:.6}, mu(1,50) = {m50:.2e}"
        ),
    }
}

fn identity_residual(r: &common::M) -> f64 {
    let c = 2.0 * r[0][1].norm();
    let purity = (r[0][0] * r[0][0] + r[0][1] * r[1][0] * 2.0 + r[1][1] * r[1][1]).re;
    let mu = 2.0 * (1.0 - purity);
    let z = (r[0][0] - r[1][1]).re;
    (c * c + mu - (1.0 - z * z)).abs()
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let mut sampled = 0;
    while sampled < 1000 {
        let v: [f64; 3] = [rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)];
        if v.iter().map(|x| x * x).sum::<f64>() > 1.0 {
            continue;
        }
        let r = [
            [Complex64::new(0.5 * (1.0 + v[2]), 0.0), Complex64::new(0.5 * v[0], -0.5 * v[1])],
            [Complex64::new(0.5 * v[0], 0.5 * v[1]), Complex64::new(0.5 * (1.0 - v[2]), 0.0)],
        ];
        worst = worst.max(identity_residual(&r));
        sampled += 1;
    }
    for a in alphas_c1() {
        for t in TAUS_C1 {
            let rho = ptqubit::propagator::evolve_state(&ptqubit::DensityMatrix::maximally_mixed(), a, t).unwrap();
            worst = worst.max(identity_residual(&rho.matrix().m));
        }
    }
    Verdict {
        pass: worst < 1e-10,
        detail: format!("max |C^2 + mu - (1 - z^2)| = {worst:.2e} over 1000 random + grid states"),
    }
}

fn k3_at(alpha: f64, tau: f64) -> f64 {
    k3_direct(alpha, &MeasurementSchedule::equal_spacing(tau).unwrap()).unwrap().value_direct
}

fn criterion_4() -> Verdict {
    let mut worst: f64 = 0.0;
    for i in 1..=3142 {
        let t = (i as f64 * 1e-3).min(PI);
        worst = worst.max((k3_at(0.0, t) - (2.0 * (2.0 * t).cos() - (4.0 * t).cos())).abs());
    }
    let m = maximize_over_tau(|t| k3_at(0.0, t), PI, 0.01).unwrap();
    let (dt, dv) = ((m.tau - FRAC_PI_6).abs(), (m.value - 1.5).abs());
    Verdict {
        pass: worst < 1e-9 && dt < 1e-6 && dv < 1e-9,
        detail: format!("max dev {worst:.2e}; argmax {:.9} (|d| {dt:.1e}), max {:.12}", m.tau, m.value),
    }
}

fn criterion_5() -> Verdict {
    let (mut k_dev, mut w_dev, mut chain_dev) = (0.0f64, 0.0f64, 0.0f64);
    let mut skipped = 0;
    for a in ALPHAS_C5 {
        for t in taus_c5() {
            let tables = sequential_tables(a, &MeasurementSchedule::equal_spacing(t).unwrap()).unwrap();
            let k = tables.k3().value_direct;
            let w = tables.wigner(WignerInequality::WQ).value_direct;
            chain_dev = chain_dev.max((k - common::k3(a, t)).abs()).max((w - common::wq(a, t)).abs());
            match (k3_closed_form(a, t), wq_closed_form(a, t)) {
                (Ok(kc), Ok(wc)) => {
                    k_dev = k_dev.max((kc - k).abs());
                    w_dev = w_dev.max((wc - w).abs());
                }
                _ => skipped += 1,
            }
        }
    }
    Verdict {
        pass: k_dev < 1e-8 && w_dev < 1e-8,
        detail: format!(
            "max |K_closed - K_chain| {k_dev:.2e}, max |W_closed - W_chain| {w_dev:.2e}, {skipped} flagged; \
             chain vs trace-formula oracle {chain_dev:.2e}"
        ),
    }
}

fn oracle_max(alpha: f64, wigner: bool) -> (f64, f64) {
    let m = maximize_over_tau(
        |t| if wigner { common::wq(alpha, t) } else { common::k3(alpha, t) },
        10.0,
        0.01,
    )
    .unwrap();
    (m.tau, m.value)
}

fn criterion_6() -> Verdict {
    let mut matching = Vec::new();
    let mut parts = Vec::new();
    for (label, alpha) in [("5/6", 5.0 / 6.0), ("0.9", 0.9)] {
        let (kt, k) = oracle_max(alpha, false);
        let (wt, w) = oracle_max(alpha, true);
        if (k - 2.54).abs() <= 0.05 && (w - 0.84).abs() <= 0.02 {
            matching.push(label);
        }
        parts.push(format!("alpha={label}: K*={k:.4} (tau {kt:.3}), W*={w:.4} (tau {wt:.3})"));
    }
    Verdict {
        pass: !matching.is_empty(),
        detail: format!("matching alpha: {}; {}", if matching.is_empty() { "none".into() } else { matching.join(",") }, parts.join("; ")),
    }
}

/// At α = 1 the vector (1, −i)/√2 (the σy = −1 eigenstate) spans the kernel
/// of H, so the measured chain locks onto it and all three correlators tend
/// to +1. The bounds below are not reachable; the α → 1⁻ values are reported
/// for comparison.
fn criterion_7() -> Verdict {
    let (_, k) = oracle_max(1.0, false);
    let (_, w) = oracle_max(1.0, true);
    let t = common::tables(1.0, 8.0, 8.0);
    let (c12, c23, c13) = (common::correlator(&t[0]), common::correlator(&t[1]), common::correlator(&t[2]));
    let (_, k99) = oracle_max(0.99, false);
    let (_, w99) = oracle_max(0.99, true);
    Verdict {
        pass: k >= 2.95 && w >= 0.98 && c12 >= 0.98 && c23 >= 0.98 && c13 <= -0.98,
        detail: format!(
            "alpha=1: K*={k:.4}, W*={w:.4}, C12={c12:.4}, C23={c23:.4}, C13={c13:.4}; \
             alpha=0.99: K*={k99:.4}, W*={w99:.4}"
        ),
    }
}

fn criterion_8() -> Verdict {
    let mut alphas = ALPHAS_C5.to_vec();
    alphas.push(1.0);
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for a in alphas {
        for t in taus_c5() {
            for mode in [Tau0Mode::EqualSpacing, Tau0Mode::Zero, Tau0Mode::Explicit(0.5)] {
                let s = MeasurementSchedule::new(t, mode).unwrap();
                let tables = sequential_tables(a, &s).unwrap();
                let times = s.times();
                for pair in Pair::ALL {
                    let tab = tables.table(pair);
                    let (i, _) = pair.indices();
                    let rho = if times[i] > 0.0 {
                        common::evolve(&common::mixed(), a, times[i])
                    } else {
                        common::mixed()
                    };
                    for (ia, sa) in [1.0, -1.0].into_iter().enumerate() {
                        let single = common::trace(&common::mul(&common::proj(sa), &rho)).re;
                        worst = worst.max((tab.p[ia][0] + tab.p[ia][1] - single).abs());
                        for p in tab.p[ia] {
                            worst = worst.max(-p).max(p - 1.0);
                        }
                    }
                    worst = worst.max((tab.total() - 1.0).abs());
                }
                points += 1;
            }
        }
    }
    Verdict {
        pass: worst <= 1e-12,
        detail: format!("{points} schedules, worst violation {worst:.2e} (tol 1e-12)"),
    }
}

fn criterion_9() -> Verdict {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |x: f64| Complex64::new(x, 0.0);
    let states = [[c(1.0), c(0.0)], [c(0.0), c(1.0)], [c(s), c(s)]];
    let (mut f, mut h, mut x, mut spread, mut drift) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for alpha in [0.0, 0.25, 0.5, 0.75, 0.9] {
        let ham = PtHamiltonian::from_alpha(alpha).unwrap();
        let ops = naimark_operators(&ham).unwrap();
        let (o, eta, xi) = (ops.o.m, ops.eta.m, ops.xi.m);
        f = f.max(common::diff(&eta, &common::mul(&o, &common::adj(&o))));
        let he = common::mul(&ham.matrix().m, &eta);
        h = h.max(common::diff(&he, &common::adj(&he)));
        let lhs = common::scale(&xi, c(4.0 * (1.0 - alpha * alpha)));
        x = x.max(common::diff(&lhs, &common::mul(&eta, &eta)));
        let d = det(&eta);
        let inv = [[eta[1][1] / d, -eta[0][1] / d], [-eta[1][0] / d, eta[0][0] / d]];
        for psi in &states {
            let bilinear = |m: &common::M, t: f64| {
                let u = common::u(alpha, t);
                let v = [u[0][0] * psi[0] + u[0][1] * psi[1], u[1][0] * psi[0] + u[1][1] * psi[1]];
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..2 {
                    for j in 0..2 {
                        acc += v[i].conj() * m[i][j] * v[j];
                    }
                }
                acc.re
            };
            let taus: Vec<f64> = (0..=100).map(|i| i as f64 * 0.05).collect();
            let range = |m: &common::M| {
                let vals: Vec<f64> = taus.iter().map(|&t| bilinear(m, t)).collect();
                vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - vals.iter().cloned().fold(f64::INFINITY, f64::min)
            };
            spread = spread.max(range(&inv));
            drift = drift.max(range(&eta));
        }
    }
    Verdict {
        pass: f < 1e-12 && h < 1e-12 && x < 1e-10 && spread < 1e-9,
        detail: format!(
            "eta=OO^dag {f:.1e}, H.eta Hermitian {h:.1e}, xi relation {x:.1e}, \
             <eta^-1> spread {spread:.1e}; <eta> drift {drift:.3} (reported)"
        ),
    }
}

fn criterion_10() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_ptqubit");
    let runs: Vec<Vec<&str>> = vec![
        vec!["sweep", "--quantity", "coherence", "--alpha", "0:2:0.05", "--tau", "0:10:0.25", "--closed"],
        vec!["sweep", "--quantity", "k3", "--alpha", "0:2:0.1", "--tau", "0.1:6:0.1", "--closed"],
        vec!["sweep", "--quantity", "wigner", "--alpha", "0.5:1.5:0.25", "--tau", "0.1:6:0.1", "--closed"],
        vec!["correlators", "--alpha", "1", "--tau", "0.1:10:0.1"],
    ];
    let mut identical = true;
    let mut bytes = 0;
    for args in &runs {
        let a = Command::new(bin).args(args).output().unwrap();
        let b = Command::new(bin).args(args).output().unwrap();
        identical &= a.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
        bytes += a.stdout.len();
    }
    Verdict {
        pass: identical,
        detail: format!("{} sweeps run twice, {bytes} bytes compared", runs.len()),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("propagator oracle equivalence", criterion_1),
        ("coherence/mixedness closed forms", criterion_2),
        ("complementarity identity", criterion_3),
        ("Hermitian-limit LGI", criterion_4),
        ("closed-form LGI equivalence", criterion_5),
        ("PT-symmetric-phase maxima", criterion_6),
        ("EP algebraic maxima", criterion_7),
        ("probability soundness", criterion_8),
        ("Naimark checks", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let v = run();
        if !v.pass {
            failed += 1;
        }
        println!("criterion {:>2} {} {title}: {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
