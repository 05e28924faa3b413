//! Command-line front end. All file and terminal I/O of the crate lives here.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::error::Error;
use crate::lgi::{sequential_tables, MeasurementSchedule, Tau0Mode, WignerInequality};
use crate::observables::coherence_report;
use crate::propagator::{evolve_state, DensityMatrix};
use crate::ptcore::{classify_phase, spectrum, PtHamiltonian, DEFAULT_EP_TOL};
use crate::sweep::{format_sig, join_flags, run_sweep, Flag, Quantity, Range, SweepConfig, DEFAULT_DIGITS};
use crate::verify::{run_suite, Profile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ptqubit", version, about = "PT-symmetric qubit: coherence and Leggett-Garg tests")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum and symmetry phase of H.
    Phase {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        output: Output,
    },
    /// Evolve I/2 for a time tau and report the normalized state.
    Evolve {
        #[command(flatten)]
        params: Params,
        #[arg(long, allow_hyphen_values = true)]
        tau: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate a quantity on an (alpha, tau) grid.
    Sweep {
        #[arg(long, value_enum)]
        quantity: QuantityArg,
        #[command(flatten)]
        grid: Grid,
    },
    /// Sweep of C12, C23, C13 over tau at a single alpha.
    Correlators {
        #[command(flatten)]
        grid: Grid,
    },
    /// Maximize K or a Wigner combination over the spacing tau.
    Maximize {
        #[arg(long, value_enum, default_value = "k3")]
        kind: KindArg,
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 10.0)]
        tau_max: f64,
        #[arg(long, default_value_t = 0.01)]
        grid_step: f64,
        #[command(flatten)]
        schedule: Schedule,
        #[arg(long, default_value = "w1:---")]
        wigner: String,
        #[command(flatten)]
        output: Output,
    },
    /// Run the invariant and oracle suite; exit 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "standard")]
        profile: ProfileArg,
        #[arg(long, value_enum, default_value = "text")]
        report: ReportArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Either `--alpha` or `--j` with `--gamma`.
#[derive(Debug, Args)]
pub struct Params {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct Schedule {
    #[arg(long = "tau0-mode", value_enum, default_value = "equal")]
    pub tau0_mode: Tau0Arg,
    #[arg(long, allow_hyphen_values = true)]
    pub tau0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "text")]
    pub format: FormatArg,
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    pub digits: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Grid {
    /// Single value or `min:max:step`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Single value or `min:max:step`.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: String,
    #[command(flatten)]
    pub schedule: Schedule,
    /// Add the closed-form column (equal spacing only for LGI quantities).
    #[arg(long)]
    pub closed: bool,
    #[arg(long, default_value = "w1:---")]
    pub wigner: String,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    pub digits: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantityArg {
    Coherence,
    Mixedness,
    K3,
    Wigner,
    Correlators,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    K3,
    Wigner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Tau0Arg {
    Equal,
    Zero,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Standard,
    Loose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportArg {
    Text,
    Json,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(io::Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                return EXIT_USAGE;
            }
            return match write!(stdout, "{text}") {
                Ok(()) => EXIT_OK,
                Err(_) => EXIT_IO,
            };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(Failure::Verify) => EXIT_VERIFY_FAILED,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_IO
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::Phase { params, output } => cmd_phase(&params, &output, stdout),
        Command::Evolve { params, tau, output } => cmd_evolve(&params, tau, &output, stdout),
        Command::Sweep { quantity, grid } => {
            let q = match quantity {
                QuantityArg::Coherence => Quantity::Coherence,
                QuantityArg::Mixedness => Quantity::Mixedness,
                QuantityArg::K3 => Quantity::K3,
                QuantityArg::Wigner => Quantity::Wigner,
                QuantityArg::Correlators => Quantity::Correlators,
            };
            cmd_sweep(q, &grid, stdout, stderr)
        }
        Command::Correlators { grid } => cmd_sweep(Quantity::Correlators, &grid, stdout, stderr),
        Command::Maximize {
            kind,
            params,
            tau_max,
            grid_step,
            schedule,
            wigner,
            output,
        } => cmd_maximize(kind, &params, tau_max, grid_step, &schedule, &wigner, &output, stdout),
        Command::Verify {
            profile,
            report,
            out,
        } => cmd_verify(profile, report, out.as_ref(), stdout),
    }
}

/// Reconciles `--alpha` with `--j/--gamma`.
pub fn resolve_hamiltonian(alpha: Option<f64>, j: Option<f64>, gamma: Option<f64>) -> crate::Result<PtHamiltonian> {
    match (alpha, j, gamma) {
        (a, Some(j), Some(g)) => {
            let h = PtHamiltonian::new(j, g)?;
            if let Some(a) = a {
                if !((a - h.alpha()).abs() <= 1e-12 * a.abs().max(1.0)) {
                    return Err(Error::Domain(format!(
                        "--alpha {a} is inconsistent with --gamma/--j = {}",
                        h.alpha()
                    )));
                }
            }
            Ok(h)
        }
        (_, Some(_), None) | (_, None, Some(_)) => {
            Err(Error::Domain("--j and --gamma must be given together".into()))
        }
        (Some(a), None, None) => PtHamiltonian::from_alpha(a),
        (None, None, None) => Err(Error::Domain("give --alpha or --j with --gamma".into())),
    }
}

fn resolve_schedule_mode(s: &Schedule) -> crate::Result<Tau0Mode> {
    match (s.tau0_mode, s.tau0) {
        (Tau0Arg::Explicit, Some(t)) => {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::Domain(format!("tau0 must be >= 0, got {t}")));
            }
            Ok(Tau0Mode::Explicit(t))
        }
        (Tau0Arg::Explicit, None) => Err(Error::Domain("--tau0-mode explicit needs --tau0".into())),
        (_, Some(_)) => Err(Error::Domain("--tau0 requires --tau0-mode explicit".into())),
        (Tau0Arg::Equal, None) => Ok(Tau0Mode::EqualSpacing),
        (Tau0Arg::Zero, None) => Ok(Tau0Mode::Zero),
    }
}

fn check_digits(digits: usize) -> crate::Result<()> {
    if (1..=17).contains(&digits) {
        Ok(())
    } else {
        Err(Error::Domain(format!("--digits must be in 1..=17, got {digits}")))
    }
}

/// Opens `--out` (or hands back standard output) and runs `body` on it.
fn with_output(
    path: Option<&PathBuf>,
    stdout: &mut dyn Write,
    body: &mut dyn FnMut(&mut dyn Write) -> io::Result<()>,
) -> CliResult<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            body(stdout)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

enum Field {
    Num(f64),
    Text(String),
    Bool(bool),
}

/// Ordered key/value report rendered as text, CSV or a single JSON object.
struct KeyValues(Vec<(&'static str, Field)>);

impl KeyValues {
    fn render(&self, format: FormatArg, digits: usize, w: &mut dyn Write) -> io::Result<()> {
        let show = |f: &Field| match f {
            Field::Num(v) => format_sig(*v, digits),
            Field::Text(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
        };
        match format {
            FormatArg::Text => {
                for (k, v) in &self.0 {
                    writeln!(w, "{k:<22} {}", show(v))?;
                }
            }
            FormatArg::Csv => {
                writeln!(w, "key,value")?;
                for (k, v) in &self.0 {
                    writeln!(w, "{k},{}", show(v))?;
                }
            }
            FormatArg::Json => {
                let mut map = Map::new();
                for (k, v) in &self.0 {
                    let value = match v {
                        Field::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
                        Field::Text(s) => Value::String(s.clone()),
                        Field::Bool(b) => Value::Bool(*b),
                    };
                    map.insert((*k).to_string(), value);
                }
                serde_json::to_writer(&mut *w, &Value::Object(map))?;
                writeln!(w)?;
            }
        }
        Ok(())
    }
}

fn cmd_phase(params: &Params, output: &Output, stdout: &mut dyn Write) -> CliResult<()> {
    check_digits(output.digits)?;
    let h = resolve_hamiltonian(params.alpha, params.j, params.gamma)?;
    let phase = classify_phase(&h, DEFAULT_EP_TOL)?;
    let (ep, em) = spectrum(&h);
    let report = KeyValues(vec![
        ("j", Field::Num(h.j())),
        ("gamma", Field::Num(h.gamma())),
        ("alpha", Field::Num(h.alpha())),
        ("phase", Field::Text(phase.phase.to_string())),
        ("e_plus_re", Field::Num(ep.re)),
        ("e_plus_im", Field::Num(ep.im)),
        ("e_minus_re", Field::Num(em.re)),
        ("e_minus_im", Field::Num(em.im)),
    ]);
    with_output(output.out.as_ref(), stdout, &mut |w| report.render(output.format, output.digits, w))
}

fn cmd_evolve(params: &Params, tau: f64, output: &Output, stdout: &mut dyn Write) -> CliResult<()> {
    check_digits(output.digits)?;
    let h = resolve_hamiltonian(params.alpha, params.j, params.gamma)?;
    let rho = evolve_state(&DensityMatrix::maximally_mixed(), h.alpha(), tau)?;
    let r = coherence_report(&rho);
    let [x, y, z] = rho.bloch();
    let off = rho.entry(0, 1);
    let report = KeyValues(vec![
        ("alpha", Field::Num(h.alpha())),
        ("tau", Field::Num(tau)),
        ("rho00", Field::Num(rho.entry(0, 0).re)),
        ("rho01_re", Field::Num(off.re)),
        ("rho01_im", Field::Num(off.im)),
        ("rho11", Field::Num(rho.entry(1, 1).re)),
        ("coherence", Field::Num(r.coherence)),
        ("mixedness", Field::Num(r.mixedness)),
        ("purity", Field::Num(r.purity)),
        ("bloch_x", Field::Num(x)),
        ("bloch_y", Field::Num(y)),
        ("bloch_z", Field::Num(z)),
        ("complementarity_slack", Field::Num(r.complementarity_slack)),
    ]);
    with_output(output.out.as_ref(), stdout, &mut |w| report.render(output.format, output.digits, w))
}

fn cmd_sweep(quantity: Quantity, g: &Grid, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let alpha = match (&g.alpha, g.j, g.gamma) {
        (Some(a), None, None) => a.parse::<Range>()?,
        (a, j, gamma) => {
            let single = match a {
                Some(s) => {
                    let r: Range = s.parse()?;
                    if r.len() != 1 {
                        return Err(Failure::Usage(
                            "--j/--gamma fix a single alpha; drop the --alpha range".into(),
                        ));
                    }
                    Some(r.min)
                }
                None => None,
            };
            Range::single(resolve_hamiltonian(single, j, gamma)?.alpha())?
        }
    };
    let mut cfg = SweepConfig::new(quantity, alpha, g.tau.parse()?);
    cfg.tau0_mode = resolve_schedule_mode(&g.schedule)?;
    cfg.emit_closed_form = g.closed;
    cfg.digits = g.digits;
    cfg.wigner = g.wigner.parse::<WignerInequality>()?;
    if g.format == FormatArg::Text {
        return Err(Failure::Usage("sweep output is csv or json".into()));
    }
    let out = run_sweep(&cfg)?;
    with_output(g.out.as_ref(), stdout, &mut |w| match g.format {
        FormatArg::Json => out.write_json_lines(w),
        _ => out.write_csv(w),
    })?;
    let line = format!("{quantity}: {}", out.summary());
    // keep standard output clean when it carries the data
    if g.out.is_some() {
        writeln!(stdout, "{line}")?;
    } else {
        writeln!(stderr, "{line}")?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_maximize(
    kind: KindArg,
    params: &Params,
    tau_max: f64,
    grid_step: f64,
    schedule: &Schedule,
    wigner: &str,
    output: &Output,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    check_digits(output.digits)?;
    let h = resolve_hamiltonian(params.alpha, params.j, params.gamma)?;
    let mode = resolve_schedule_mode(schedule)?;
    let ineq: WignerInequality = wigner.parse()?;
    let alpha = h.alpha();
    let eval = |t: f64| -> crate::Result<(f64, bool)> {
        let tables = sequential_tables(alpha, &MeasurementSchedule::new(t, mode)?)?;
        let r = match kind {
            KindArg::K3 => tables.k3(),
            KindArg::Wigner => tables.wigner(ineq),
        };
        Ok((r.value_direct, r.degenerate))
    };
    let mut failure = None;
    let m = crate::lgi::maximize_over_tau(
        |t| match eval(t) {
            Ok((v, _)) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        tau_max,
        grid_step,
    )?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    let mut flags = Vec::new();
    if eval(m.tau)?.1 {
        flags.push(Flag::Degen);
    }
    if m.boundary {
        flags.push(Flag::Boundary);
    }
    let kind_label = match kind {
        KindArg::K3 => "k3".to_string(),
        KindArg::Wigner => ineq.to_string(),
    };
    let report = KeyValues(vec![
        ("kind", Field::Text(kind_label)),
        ("alpha", Field::Num(alpha)),
        ("tau_max", Field::Num(tau_max)),
        ("tau_star", Field::Num(m.tau)),
        ("value", Field::Num(m.value)),
        ("boundary", Field::Bool(m.boundary)),
        ("flags", Field::Text(join_flags(&flags))),
    ]);
    with_output(output.out.as_ref(), stdout, &mut |w| report.render(output.format, output.digits, w))
}

fn cmd_verify(profile: ProfileArg, report: ReportArg, out: Option<&PathBuf>, stdout: &mut dyn Write) -> CliResult<()> {
    let profile = match profile {
        ProfileArg::Standard => Profile::Standard,
        ProfileArg::Loose => Profile::Loose,
    };
    let r = run_suite(profile);
    with_output(out, stdout, &mut |w| match report {
        ReportArg::Text => r.write_text(w),
        ReportArg::Json => r.write_json_lines(w),
    })?;
    if r.passed() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}
