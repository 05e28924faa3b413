//! Sequential-measurement chain on density matrices.

use serde::Serialize;

use super::{
    JointProbTable, LgiKind, LgiResult, MeasurementSchedule, Outcome, Pair, WignerInequality,
};
use crate::error::{ensure_finite, Error, Result};
use crate::propagator::{evolve_state, DensityMatrix};

/// First-measurement probability below which a branch is dropped.
pub const DEGENERATE_BRANCH: f64 = 1e-14;

fn state_at(alpha: f64, time: f64) -> Result<DensityMatrix> {
    evolve_state(&DensityMatrix::maximally_mixed(), alpha, time)
}

fn table_from_state(alpha: f64, pair: Pair, rho: &DensityMatrix, span: f64) -> Result<JointProbTable> {
    let mut p = [[0.0; 2]; 2];
    let mut first = [0.0; 2];
    let mut degenerate = false;
    for a in Outcome::BOTH {
        let proj = a.projector();
        let pa = rho.expectation(&proj).clamp(0.0, 1.0);
        first[a.index()] = pa;
        if pa < DEGENERATE_BRANCH {
            degenerate = true;
            continue;
        }
        let reduced = DensityMatrix::from_positive(proj * *rho.matrix() * proj)?;
        let later = evolve_state(&reduced, alpha, span)?;
        let plus = later.expectation(&Outcome::Plus.projector()).clamp(0.0, 1.0);
        // conditional probabilities of one branch sum to 1 by construction
        p[a.index()] = [pa * plus, pa * (1.0 - plus)];
    }
    Ok(JointProbTable {
        pair,
        p,
        first,
        degenerate,
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    ensure_finite("alpha", alpha)?;
    if alpha < 0.0 {
        return Err(Error::Domain(format!("alpha must be >= 0, got {alpha}")));
    }
    Ok(())
}

/// Joint probabilities of σy outcomes at the two times of `pair`.
pub fn joint_table(alpha: f64, sched: &MeasurementSchedule, pair: Pair) -> Result<JointProbTable> {
    check_alpha(alpha)?;
    let times = sched.times();
    let (i, j) = pair.indices();
    let rho = state_at(alpha, times[i])?;
    table_from_state(alpha, pair, &rho, times[j] - times[i])
}

/// `p(a at t_i, b at t_j)`.
pub fn joint_probability(
    alpha: f64,
    sched: &MeasurementSchedule,
    pair: Pair,
    a: Outcome,
    b: Outcome,
) -> Result<f64> {
    Ok(joint_table(alpha, sched, pair)?.get(a, b))
}

/// `⟨σy(t_i)σy(t_j)⟩ = Σ ab·p(a, b)`.
pub fn correlator(alpha: f64, sched: &MeasurementSchedule, pair: Pair) -> Result<f64> {
    Ok(joint_table(alpha, sched, pair)?.correlator())
}

/// The three pairwise tables of one schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SequentialTables {
    pub t12: JointProbTable,
    pub t23: JointProbTable,
    pub t13: JointProbTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correlators {
    pub c12: f64,
    pub c23: f64,
    pub c13: f64,
    pub degenerate: bool,
}

impl Correlators {
    pub fn k3(&self) -> f64 {
        self.c12 + self.c23 - self.c13
    }
}

impl SequentialTables {
    pub fn table(&self, pair: Pair) -> &JointProbTable {
        match pair {
            Pair::P12 => &self.t12,
            Pair::P23 => &self.t23,
            Pair::P13 => &self.t13,
        }
    }

    pub fn degenerate(&self) -> bool {
        self.t12.degenerate || self.t23.degenerate || self.t13.degenerate
    }

    pub fn correlators(&self) -> Correlators {
        Correlators {
            c12: self.t12.correlator(),
            c23: self.t23.correlator(),
            c13: self.t13.correlator(),
            degenerate: self.degenerate(),
        }
    }

    pub fn k3(&self) -> LgiResult {
        LgiResult::direct(LgiKind::K3, self.correlators().k3(), self.degenerate())
    }

    pub fn wigner(&self, ineq: WignerInequality) -> LgiResult {
        let value = ineq.evaluate(&self.t12, &self.t23, &self.t13);
        LgiResult::direct(LgiKind::Wigner(ineq), value, self.degenerate())
    }
}

pub fn sequential_tables(alpha: f64, sched: &MeasurementSchedule) -> Result<SequentialTables> {
    check_alpha(alpha)?;
    let [t1, t2, t3] = sched.times();
    let rho1 = state_at(alpha, t1)?;
    let rho2 = state_at(alpha, t2)?;
    Ok(SequentialTables {
        t12: table_from_state(alpha, Pair::P12, &rho1, t2 - t1)?,
        t23: table_from_state(alpha, Pair::P23, &rho2, t3 - t2)?,
        t13: table_from_state(alpha, Pair::P13, &rho1, t3 - t1)?,
    })
}

/// `K = C12 + C23 − C13` from the sequential chain.
pub fn k3_direct(alpha: f64, sched: &MeasurementSchedule) -> Result<LgiResult> {
    Ok(sequential_tables(alpha, sched)?.k3())
}

/// Left-hand side of one Wigner-form inequality from the sequential chain.
pub fn wigner_direct(alpha: f64, sched: &MeasurementSchedule, ineq: WignerInequality) -> Result<LgiResult> {
    Ok(sequential_tables(alpha, sched)?.wigner(ineq))
}
