//! Parameter sweeps over `(α, τ)` grids and their CSV / JSON-lines rendering.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lgi::{
    k3_closed_form, sequential_tables, wq_closed_form, MeasurementSchedule, Tau0Mode,
    WignerInequality,
};
use crate::observables::{coherence_closed_form, l1_coherence, mixedness, mixedness_closed_form};
use crate::propagator::{evolve_state, DensityMatrix};

/// Largest grid a single sweep may evaluate.
pub const MAX_GRID: usize = 10_000_000;

pub const DEFAULT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Coherence,
    Mixedness,
    K3,
    Wigner,
    Correlators,
}

impl Quantity {
    fn needs_schedule(self) -> bool {
        matches!(self, Quantity::K3 | Quantity::Wigner | Quantity::Correlators)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Coherence => "coherence",
            Quantity::Mixedness => "mixedness",
            Quantity::K3 => "k3",
            Quantity::Wigner => "wigner",
            Quantity::Correlators => "correlators",
        })
    }
}

/// Row annotations. Their CSV tokens are fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Flag {
    /// Closed-form denominator too close to zero.
    Pole,
    /// Closed form undefined inside the exceptional-point window.
    Epwin,
    /// A measurement branch was dropped.
    Degen,
    /// A maximum sits on the edge of the scanned interval.
    Boundary,
}

impl Flag {
    pub fn token(self) -> &'static str {
        match self {
            Flag::Pole => "POLE",
            Flag::Epwin => "EPWIN",
            Flag::Degen => "DEGEN",
            Flag::Boundary => "BOUNDARY",
        }
    }
}

pub fn join_flags(flags: &[Flag]) -> String {
    flags.iter().map(|f| f.token()).collect::<Vec<_>>().join(";")
}

/// Inclusive arithmetic range `min, min + step, …, ≤ max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Range {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && step.is_finite()) {
            return Err(Error::Domain("range bounds must be finite".into()));
        }
        if min > max {
            return Err(Error::Domain(format!("empty range {min}:{max}")));
        }
        if step <= 0.0 {
            return Err(Error::Domain(format!("range step must be > 0, got {step}")));
        }
        Ok(Self { min, max, step })
    }

    pub fn single(v: f64) -> Result<Self> {
        Self::new(v, v, 1.0)
    }

    /// Number of points; the upper bound is included when it lies on the grid
    /// up to rounding.
    pub fn len(&self) -> usize {
        let n = ((self.max - self.min) / self.step * (1.0 + 1e-12) + 1e-9).floor();
        if n >= MAX_GRID as f64 {
            MAX_GRID + 1
        } else {
            n as usize + 1
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.min + i as f64 * self.step)
            .collect()
    }
}

impl FromStr for Range {
    type Err = Error;

    /// `min:max:step` or a single number.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("cannot parse '{t}' as a number")))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Self::single(parse(v)?),
            [a, b, c] => Self::new(parse(a)?, parse(b)?, parse(c)?),
            _ => Err(Error::Domain(format!("expected min:max:step, got '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepConfig {
    pub quantity: Quantity,
    pub alpha: Range,
    pub tau: Range,
    pub tau0_mode: Tau0Mode,
    pub emit_closed_form: bool,
    pub digits: usize,
    /// Inequality evaluated by `Quantity::Wigner`.
    pub wigner: WignerInequality,
}

impl SweepConfig {
    pub fn new(quantity: Quantity, alpha: Range, tau: Range) -> Self {
        Self {
            quantity,
            alpha,
            tau,
            tau0_mode: Tau0Mode::EqualSpacing,
            emit_closed_form: false,
            digits: DEFAULT_DIGITS,
            wigner: WignerInequality::WQ,
        }
    }

    pub fn grid_size(&self) -> usize {
        self.alpha.len().saturating_mul(self.tau.len())
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_size() > MAX_GRID {
            return Err(Error::Domain(format!(
                "grid of {} points exceeds the limit of {MAX_GRID}",
                self.grid_size()
            )));
        }
        if self.alpha.min < 0.0 {
            return Err(Error::Domain("alpha range must be >= 0".into()));
        }
        if self.tau.min < 0.0 {
            return Err(Error::Domain("tau range must be >= 0".into()));
        }
        if self.quantity.needs_schedule() && self.tau.min <= 0.0 {
            return Err(Error::Domain(format!(
                "{} needs measurement spacing tau > 0",
                self.quantity
            )));
        }
        if !(1..=17).contains(&self.digits) {
            return Err(Error::Domain(format!("digits must be in 1..=17, got {}", self.digits)));
        }
        if let Tau0Mode::Explicit(t) = self.tau0_mode {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::Domain(format!("tau0 must be >= 0, got {t}")));
            }
        }
        if self.quantity == Quantity::Correlators && self.alpha.len() != 1 {
            return Err(Error::Domain("correlators sweep takes a single alpha".into()));
        }
        if self.emit_closed_form {
            match self.quantity {
                Quantity::Coherence | Quantity::Mixedness => {}
                Quantity::K3 | Quantity::Wigner if self.tau0_mode != Tau0Mode::EqualSpacing => {
                    return Err(Error::Domain(
                        "closed forms exist only for the equal-spacing schedule".into(),
                    ))
                }
                Quantity::Wigner if self.wigner != WignerInequality::WQ => {
                    return Err(Error::Domain(format!(
                        "no closed form for inequality {}; only {} has one",
                        self.wigner,
                        WignerInequality::WQ
                    )))
                }
                Quantity::K3 | Quantity::Wigner => {}
                Quantity::Correlators => {
                    return Err(Error::Domain("correlators have no closed-form column".into()))
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub tau: f64,
    pub value_direct: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_closed: Option<f64>,
    /// `(C12, C23, C13)` for correlator sweeps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlators: Option<[f64; 3]>,
    pub flags: Vec<Flag>,
}

fn closed_value(r: Result<f64>, flags: &mut Vec<Flag>) -> Result<f64> {
    match r {
        Ok(v) => Ok(v),
        Err(Error::NearPole { .. }) => {
            flags.push(Flag::Pole);
            Ok(f64::NAN)
        }
        Err(Error::EpWindow { .. }) => {
            flags.push(Flag::Epwin);
            Ok(f64::NAN)
        }
        Err(e) => Err(e),
    }
}

/// Evaluates one grid point.
pub fn evaluate_point(cfg: &SweepConfig, alpha: f64, tau: f64) -> Result<SweepRow> {
    let mut flags = Vec::new();
    let mut closed = None;
    let mut correlators = None;
    let value_direct = match cfg.quantity {
        Quantity::Coherence | Quantity::Mixedness => {
            let rho = evolve_state(&DensityMatrix::maximally_mixed(), alpha, tau)?;
            let coherence = cfg.quantity == Quantity::Coherence;
            if cfg.emit_closed_form {
                closed = Some(if coherence {
                    coherence_closed_form(alpha, tau)?
                } else {
                    mixedness_closed_form(alpha, tau)?
                });
            }
            if coherence {
                l1_coherence(&rho)
            } else {
                mixedness(&rho)
            }
        }
        Quantity::K3 | Quantity::Wigner | Quantity::Correlators => {
            let sched = MeasurementSchedule::new(tau, cfg.tau0_mode)?;
            let tables = sequential_tables(alpha, &sched)?;
            if tables.degenerate() {
                flags.push(Flag::Degen);
            }
            match cfg.quantity {
                Quantity::K3 => {
                    if cfg.emit_closed_form {
                        closed = Some(closed_value(k3_closed_form(alpha, tau), &mut flags)?);
                    }
                    tables.k3().value_direct
                }
                Quantity::Wigner => {
                    if cfg.emit_closed_form {
                        closed = Some(closed_value(wq_closed_form(alpha, tau), &mut flags)?);
                    }
                    tables.wigner(cfg.wigner).value_direct
                }
                _ => {
                    let c = tables.correlators();
                    correlators = Some([c.c12, c.c23, c.c13]);
                    c.k3()
                }
            }
        }
    };
    flags.sort();
    Ok(SweepRow {
        alpha,
        tau,
        value_direct,
        value_closed: closed,
        correlators,
        flags,
    })
}

/// Best finite direct value over a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSummary {
    pub grid_size: usize,
    pub max_value: f64,
    pub argmax_alpha: f64,
    pub argmax_tau: f64,
    pub flagged_rows: usize,
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "grid={} max={} at alpha={} tau={} flagged={}",
            self.grid_size,
            format_sig(self.max_value, DEFAULT_DIGITS),
            format_sig(self.argmax_alpha, DEFAULT_DIGITS),
            format_sig(self.argmax_tau, DEFAULT_DIGITS),
            self.flagged_rows
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
}

impl SweepOutput {
    pub fn summary(&self) -> SweepSummary {
        let mut s = SweepSummary {
            grid_size: self.rows.len(),
            max_value: f64::NAN,
            argmax_alpha: f64::NAN,
            argmax_tau: f64::NAN,
            flagged_rows: 0,
        };
        for r in &self.rows {
            if !r.flags.is_empty() {
                s.flagged_rows += 1;
            }
            if r.value_direct.is_finite() && !(r.value_direct <= s.max_value) {
                s.max_value = r.value_direct;
                s.argmax_alpha = r.alpha;
                s.argmax_tau = r.tau;
            }
        }
        s
    }

    pub fn csv_header(&self) -> String {
        if self.config.quantity == Quantity::Correlators {
            "tau,c12,c23,c13,flags".to_string()
        } else if self.config.emit_closed_form {
            "alpha,tau,value_direct,value_closed,flags".to_string()
        } else {
            "alpha,tau,value_direct,flags".to_string()
        }
    }

    pub fn write_csv<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        let d = self.config.digits;
        writeln!(out, "{}", self.csv_header())?;
        for r in &self.rows {
            let flags = join_flags(&r.flags);
            if let Some([c12, c23, c13]) = r.correlators {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    format_sig(r.tau, d),
                    format_sig(c12, d),
                    format_sig(c23, d),
                    format_sig(c13, d),
                    flags
                )?;
                continue;
            }
            write!(
                out,
                "{},{},{}",
                format_sig(r.alpha, d),
                format_sig(r.tau, d),
                format_sig(r.value_direct, d)
            )?;
            if self.config.emit_closed_form {
                write!(out, ",{}", format_sig(r.value_closed.unwrap_or(f64::NAN), d))?;
            }
            writeln!(out, ",{flags}")?;
        }
        Ok(())
    }

    /// One JSON object per row.
    pub fn write_json_lines<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        for r in &self.rows {
            serde_json::to_writer(&mut *out, r)?;
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Evaluates the grid row-major (α outer, τ inner). Points are computed in
/// parallel and collected in order, so the output does not depend on the
/// number of worker threads.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let alphas = cfg.alpha.values();
    let taus = cfg.tau.values();
    let nt = taus.len();
    let rows = (0..alphas.len() * nt)
        .into_par_iter()
        .map(|k| evaluate_point(cfg, alphas[k / nt], taus[k % nt]))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepOutput { config: *cfg, rows })
}

/// `%g`-style formatting with `digits` significant digits: trailing zeros are
/// dropped and exponents outside `[-5, digits)` switch to scientific notation.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let digits = digits.clamp(1, 17);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
