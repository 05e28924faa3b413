//! Leggett-Garg quantities for σy measured at three times.
//!
//! The measurement times are `J·t ∈ {τ₀, τ₀ + τ, τ₀ + 2τ}` and the system is
//! prepared in `I/2` at `t = 0`. Two independent routes are provided:
//!
//! * [`chain`]: sequential projective measurements on 2×2 density matrices,
//!   renormalizing after every non-unitary segment and every state reduction.
//!   This is the ground truth.
//! * [`closed`]: rational expressions in `cosh(nΘ)`, `Θ = τ√(α² − 1)`, valid
//!   for the equal-spacing schedule away from the exceptional point.

pub mod chain;
pub mod closed;
pub mod maximize;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};
use crate::mat2::Mat2C;

pub use chain::{
    correlator, joint_probability, joint_table, k3_direct, sequential_tables, wigner_direct,
    Correlators, SequentialTables,
};
pub use closed::{k3_closed_form, k3_printed_form, wq_closed_form, PRINTED_K3_COEFFICIENTS};
pub use maximize::{maximize_over_tau, Maximum};

/// Macrorealist bound of `K = C12 + C23 − C13`.
pub const K3_BOUND: f64 = 1.0;
/// Macrorealist bound of every Wigner-form combination.
pub const WIGNER_BOUND: f64 = 0.0;

/// Rounding margin above a bound before a value counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-12;

/// `(Π₊, Π₋) = ((I + σy)/2, (I − σy)/2)`.
pub fn sigma_y_projectors() -> (Mat2C, Mat2C) {
    let i = Mat2C::identity();
    let y = Mat2C::sigma_y();
    ((i + y).scale_real(0.5), (i - y).scale_real(0.5))
}

/// Outcome of a σy measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }

    pub fn from_sign(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            other => Err(Error::Domain(format!("outcome must be +1 or -1, got {other}"))),
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn projector(self) -> Mat2C {
        let (plus, minus) = sigma_y_projectors();
        match self {
            Outcome::Plus => plus,
            Outcome::Minus => minus,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Plus => "+",
            Outcome::Minus => "-",
        })
    }
}

/// Choice of the first measurement time `τ₀ = J·t₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Tau0Mode {
    /// `τ₀ = τ`: all three gaps (preparation included) are equal.
    EqualSpacing,
    /// `τ₀ = 0`: the first measurement acts on `I/2`.
    Zero,
    Explicit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementSchedule {
    tau: f64,
    tau0: f64,
    mode: Tau0Mode,
}

impl MeasurementSchedule {
    pub fn new(tau: f64, mode: Tau0Mode) -> Result<Self> {
        ensure_finite("tau", tau)?;
        if tau <= 0.0 {
            return Err(Error::Domain(format!("measurement spacing must be > 0, got {tau}")));
        }
        let tau0 = match mode {
            Tau0Mode::EqualSpacing => tau,
            Tau0Mode::Zero => 0.0,
            Tau0Mode::Explicit(t) => {
                ensure_finite("tau0", t)?;
                if t < 0.0 {
                    return Err(Error::Domain(format!("tau0 must be >= 0, got {t}")));
                }
                t
            }
        };
        Ok(Self { tau, tau0, mode })
    }

    pub fn equal_spacing(tau: f64) -> Result<Self> {
        Self::new(tau, Tau0Mode::EqualSpacing)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    pub fn mode(&self) -> Tau0Mode {
        self.mode
    }

    /// Dimensionless measurement times `[τ₀, τ₀ + τ, τ₀ + 2τ]`.
    pub fn times(&self) -> [f64; 3] {
        [self.tau0, self.tau0 + self.tau, self.tau0 + 2.0 * self.tau]
    }
}

/// Pair of measurement times `(t_i, t_j)`, `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Pair {
    P12,
    P23,
    P13,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::P12, Pair::P23, Pair::P13];

    /// Zero-based indices into [`MeasurementSchedule::times`].
    pub fn indices(self) -> (usize, usize) {
        match self {
            Pair::P12 => (0, 1),
            Pair::P23 => (1, 2),
            Pair::P13 => (0, 2),
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.indices();
        write!(f, "({},{})", i + 1, j + 1)
    }
}

/// Sequential joint probabilities `p(a at t_i, b at t_j)` for one pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointProbTable {
    pub pair: Pair,
    /// `p[a][b]`, index 0 is `+1`, index 1 is `−1`.
    pub p: [[f64; 2]; 2],
    /// Single-time probabilities of the first measurement.
    pub first: [f64; 2],
    /// Set when a first-measurement branch had probability below `1e-14`;
    /// its entries are zero.
    pub degenerate: bool,
}

impl JointProbTable {
    pub fn get(&self, a: Outcome, b: Outcome) -> f64 {
        self.p[a.index()][b.index()]
    }

    pub fn total(&self) -> f64 {
        self.p.iter().flatten().sum()
    }

    /// `Σ ab·p(a, b)`.
    pub fn correlator(&self) -> f64 {
        let mut sum = 0.0;
        for a in Outcome::BOTH {
            for b in Outcome::BOTH {
                sum += a.sign() * b.sign() * self.get(a, b);
            }
        }
        sum
    }

    /// Largest deviation between `Σ_b p(a, b)` and the single-time
    /// probability of `a`, over non-degenerate branches.
    pub fn marginal_residual(&self) -> f64 {
        Outcome::BOTH
            .iter()
            .filter(|a| self.first[a.index()] >= chain::DEGENERATE_BRANCH)
            .map(|&a| {
                let row = self.p[a.index()];
                (row[0] + row[1] - self.first[a.index()]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Entries in `[0, 1]`, total within `tol` of 1, marginals within `tol`.
    pub fn is_sound(&self, tol: f64) -> bool {
        self.p.iter().flatten().all(|&v| (0.0..=1.0).contains(&v))
            && (self.total() - 1.0).abs() <= tol
            && self.marginal_residual() <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum WignerForm {
    /// `P(m2, m3) − P(−m1, m2) − P(m1, m3) ≤ 0`
    W1,
    /// `P(m1, m3) − P(m1, −m2) − P(m2, m3) ≤ 0`
    W2,
    /// `P(m1, m2) − P(m2, −m3) − P(m1, m3) ≤ 0`
    W3,
}

/// One of the 24 Wigner-form inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct WignerInequality {
    pub form: WignerForm,
    pub signs: [Outcome; 3],
}

impl WignerInequality {
    /// The combination whose value is given by [`wq_closed_form`]:
    /// form W1 with all signs `−1`, i.e. `P23(−,−) − P12(+,−) − P13(−,−)`.
    pub const WQ: WignerInequality = WignerInequality {
        form: WignerForm::W1,
        signs: [Outcome::Minus, Outcome::Minus, Outcome::Minus],
    };

    pub fn new(form: WignerForm, m1: Outcome, m2: Outcome, m3: Outcome) -> Self {
        Self {
            form,
            signs: [m1, m2, m3],
        }
    }

    /// All 3 × 8 combinations, form-major.
    pub fn all() -> impl Iterator<Item = WignerInequality> {
        [WignerForm::W1, WignerForm::W2, WignerForm::W3]
            .into_iter()
            .flat_map(|form| {
                (0..8).map(move |bits| {
                    let pick = |k: u32| {
                        if bits & (4 >> k) == 0 {
                            Outcome::Plus
                        } else {
                            Outcome::Minus
                        }
                    };
                    WignerInequality::new(form, pick(0), pick(1), pick(2))
                })
            })
    }

    /// Left-hand side evaluated on the three joint tables.
    pub fn evaluate(&self, t12: &JointProbTable, t23: &JointProbTable, t13: &JointProbTable) -> f64 {
        let [m1, m2, m3] = self.signs;
        match self.form {
            WignerForm::W1 => t23.get(m2, m3) - t12.get(m1.flip(), m2) - t13.get(m1, m3),
            WignerForm::W2 => t13.get(m1, m3) - t12.get(m1, m2.flip()) - t23.get(m2, m3),
            WignerForm::W3 => t12.get(m1, m2) - t23.get(m2, m3.flip()) - t13.get(m1, m3),
        }
    }
}

impl fmt::Display for WignerInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = match self.form {
            WignerForm::W1 => "w1",
            WignerForm::W2 => "w2",
            WignerForm::W3 => "w3",
        };
        let [a, b, c] = self.signs;
        write!(f, "{form}:{a}{b}{c}")
    }
}

/// Parses `w1:---`, `w2:+-+` and similar.
impl FromStr for WignerInequality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("cannot parse Wigner inequality '{s}' (expected e.g. w1:---)"));
        let (form, signs) = s.split_once(':').ok_or_else(bad)?;
        let form = match form.trim().to_ascii_lowercase().as_str() {
            "w1" => WignerForm::W1,
            "w2" => WignerForm::W2,
            "w3" => WignerForm::W3,
            _ => return Err(bad()),
        };
        let signs: Vec<Outcome> = signs
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(Outcome::Plus),
                '-' => Ok(Outcome::Minus),
                _ => Err(bad()),
            })
            .collect::<Result<_>>()?;
        match signs.as_slice() {
            &[a, b, c] => Ok(WignerInequality::new(form, a, b, c)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LgiKind {
    K3,
    Wigner(WignerInequality),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LgiResult {
    pub kind: LgiKind,
    pub value_direct: f64,
    pub value_closed: Option<f64>,
    /// Direct value exceeds the macrorealist bound.
    pub violation: bool,
    /// A measurement branch was dropped as degenerate.
    pub degenerate: bool,
}

impl LgiResult {
    pub(crate) fn direct(kind: LgiKind, value: f64, degenerate: bool) -> Self {
        let bound = match kind {
            LgiKind::K3 => K3_BOUND,
            LgiKind::Wigner(_) => WIGNER_BOUND,
        };
        Self {
            kind,
            value_direct: value,
            value_closed: None,
            violation: value > bound + VIOLATION_TOL,
            degenerate,
        }
    }

    pub fn with_closed(mut self, closed: Option<f64>) -> Self {
        self.value_closed = closed;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::DensityMatrix;
    use std::collections::HashSet;

    #[test]
    fn projector_algebra() {
        let (p, m) = sigma_y_projectors();
        let i = Mat2C::identity();
        assert!((p + m).max_abs_diff(&i) < 1e-15);
        assert!((p * m).norm_max() < 1e-15);
        assert!((p * p).max_abs_diff(&p) < 1e-15);
        assert!((m * m).max_abs_diff(&m) < 1e-15);
        assert!((DensityMatrix::maximally_mixed().expectation(&p) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn twenty_four_distinct_inequalities() {
        let all: Vec<_> = WignerInequality::all().collect();
        assert_eq!(all.len(), 24);
        let unique: HashSet<_> = all.iter().copied().collect();
        assert_eq!(unique.len(), 24);
        assert!(all.contains(&WignerInequality::WQ));
    }

    #[test]
    fn inequality_parse_round_trip() {
        for w in WignerInequality::all() {
            assert_eq!(w.to_string().parse::<WignerInequality>().unwrap(), w);
        }
        assert!("w4:---".parse::<WignerInequality>().is_err());
        assert!("w1:--".parse::<WignerInequality>().is_err());
        assert!("w1---".parse::<WignerInequality>().is_err());
    }

    #[test]
    fn schedule_times() {
        let s = MeasurementSchedule::equal_spacing(0.5).unwrap();
        assert_eq!(s.times(), [0.5, 1.0, 1.5]);
        let s = MeasurementSchedule::new(0.5, Tau0Mode::Zero).unwrap();
        assert_eq!(s.times(), [0.0, 0.5, 1.0]);
        let s = MeasurementSchedule::new(0.5, Tau0Mode::Explicit(2.0)).unwrap();
        assert_eq!(s.times(), [2.0, 2.5, 3.0]);
        assert!(MeasurementSchedule::equal_spacing(0.0).is_err());
        assert!(MeasurementSchedule::new(1.0, Tau0Mode::Explicit(-1.0)).is_err());
    }

    #[test]
    fn outcome_signs() {
        assert_eq!(Outcome::from_sign(1).unwrap(), Outcome::Plus);
        assert_eq!(Outcome::from_sign(-1).unwrap().sign(), -1.0);
        assert!(Outcome::from_sign(0).is_err());
    }
}
