mod angle;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gnu_msd::analytic::{abc_general, final_state, success_probability, InputEnsemble};
use gnu_msd::datasets::{figure, FigureId};
use gnu_msd::gnu::GnuParams;
use gnu_msd::protocols::{
    bk_h_error, bk_t_error, find_threshold, repetition_curve, Composition, ErrorCurve, HFormula,
    MagicTarget, ThresholdKind,
};
use gnu_msd::qmath::{m2_density, trace_distance, PureQubit};
use gnu_msd::solver::{magic_curve, output_magic, solve_for_magic, solve_input_params, TargetSpec};
use gnu_msd::verify::run_all;
use gnu_msd::{Error, Execution};

use crate::angle::parse_angle;
use crate::output::{write_atomic, Cell, Output};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "gnu-msd",
    version,
    about = "Magic-state distillation with gnu codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distilled state, success probability and magic for one input.
    Distill(Opts),
    /// Dataset behind a figure: 1c, 2b, 2c, 3b or 4.
    Figure {
        id: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Error threshold of a curve.
    Threshold {
        /// Which error curve to search.
        #[arg(long, value_enum, default_value_t = CurveKind::Protocol)]
        curve: CurveKind,
        #[command(flatten)]
        opts: Opts,
    },
    /// Noiseless inputs (v, theta) that distil the target.
    Solve(Opts),
    /// Noiseless output magic against v, or the v that gives --magic.
    MagicCurve {
        /// Return the smallest v whose output has this magic.
        #[arg(long)]
        magic: Option<f64>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Two-qubit protocol followed by one Bravyi-Kitaev round.
    Compose(Opts),
    /// Run the oracle, circuit and closed-form self-checks.
    Verify(Opts),
}

#[derive(Args, Debug, Clone)]
struct Opts {
    #[arg(long, default_value_t = 1)]
    g: u32,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value_t = 2.0)]
    u: f64,
    /// Input angle in radians; `pi/4`-style literals accepted.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    v: Option<f64>,
    /// Input phase in radians; `pi/4`-style literals accepted.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Target state; `custom` uses --v/--theta as cos v|0> + e^{i theta} sin v|1>.
    #[arg(long, value_enum, ignore_case = true)]
    target: Option<TargetKind>,
    /// Grid spacing for magic-curve (radians) and compose (eps) sweeps.
    #[arg(long, value_parser = parse_angle)]
    grid_step: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write here (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum TargetKind {
    #[value(name = "T")]
    T,
    #[value(name = "H")]
    H,
    #[value(name = "XT")]
    Xt,
    #[value(name = "XH")]
    Xh,
    Custom,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum CurveKind {
    /// Max-error curve of the code with its canonical solved input.
    Protocol,
    /// Bravyi-Kitaev map for the target (T or H).
    Bk,
    /// Bravyi-Kitaev H map with the 1+15q^8 denominator.
    BkOriginal,
    /// Two-qubit protocol followed by Bravyi-Kitaev.
    Combined,
    /// Repetition code (2,1,1) with exact-target inputs.
    Repetition,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::OutOfRange(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

type CmdResult<T> = Result<T, Failure>;

impl Opts {
    fn code(&self) -> CmdResult<GnuParams> {
        if self.g == 0 || self.n == 0 {
            return Err(Failure::Usage("--g and --n must be positive".into()));
        }
        if !(self.u > 0.0 && self.u.is_finite()) {
            return Err(Failure::Usage("--u must be positive".into()));
        }
        Ok(GnuParams::new(self.g, self.n, self.u)?)
    }

    fn eps_or(&self, default: f64) -> CmdResult<f64> {
        let e = self.eps.unwrap_or(default);
        if (0.0..=1.0).contains(&e) {
            Ok(e)
        } else {
            Err(Failure::Usage(format!("--eps {e} outside [0, 1]")))
        }
    }

    fn target_spec(&self) -> CmdResult<Option<TargetSpec>> {
        Ok(match self.target {
            None => None,
            Some(TargetKind::T) => Some(TargetSpec::T),
            Some(TargetKind::H) => Some(TargetSpec::H),
            Some(TargetKind::Xt) => Some(TargetSpec::XT),
            Some(TargetKind::Xh) => Some(TargetSpec::XH),
            Some(TargetKind::Custom) => {
                let (Some(v), Some(theta)) = (self.v, self.theta) else {
                    return Err(Failure::Usage(
                        "--target custom needs --v and --theta".into(),
                    ));
                };
                Some(TargetSpec::Custom(PureQubit::from_angles(v, theta)))
            }
        })
    }

    fn require_target(&self) -> CmdResult<TargetSpec> {
        self.target_spec()?
            .ok_or_else(|| Failure::Usage("--target is required".into()))
    }

    fn magic_target(&self) -> CmdResult<MagicTarget> {
        match self.target {
            Some(TargetKind::T) => Ok(MagicTarget::T),
            Some(TargetKind::H) => Ok(MagicTarget::H),
            _ => Err(Failure::Usage("--target must be T or H here".into())),
        }
    }

    fn grid_divisions(&self, span: f64, default: usize) -> CmdResult<usize> {
        let Some(step) = self.grid_step else {
            return Ok(default);
        };
        if step.is_nan() || step <= 0.0 || step > span {
            return Err(Failure::Usage(format!(
                "--grid-step {step} must lie in (0, {span}]"
            )));
        }
        let k = (span / step).round();
        if (k * step - span).abs() > 1e-9 * span {
            return Err(Failure::Usage(format!(
                "--grid-step {step} does not divide {span}"
            )));
        }
        if k > 1e6 {
            return Err(Failure::Usage("--grid-step too small".into()));
        }
        Ok(k as usize)
    }
}

fn cmd_distill(o: &Opts) -> CmdResult<Output> {
    let code = o.code()?;
    let (v, theta, eps) = (o.v.unwrap_or(0.0), o.theta.unwrap_or(0.0), o.eps_or(0.0)?);
    let input = InputEnsemble::new(v, theta, eps)?;
    let p = abc_general(&code, &input)?;
    let rho = final_state(&p)?;
    let mut out = Output::default()
        .field("g", code.g())
        .field("n", code.n())
        .field("u", code.u())
        .field("qubits", code.qubits())
        .field("v", v)
        .field("theta", input.theta())
        .field("eps", eps)
        .field("a", p.a)
        .field("b", p.b)
        .field("c_re", p.c.re)
        .field("c_im", p.c.im)
        .field("ps", success_probability(&p))
        .field("rho_00", rho.m00())
        .field("rho_11", rho.m11())
        .field("rho_01_re", rho.m01().re)
        .field("rho_01_im", rho.m01().im)
        .field("rho_10_re", rho.m10().re)
        .field("rho_10_im", rho.m10().im)
        .field("m2", m2_density(&rho));
    // custom targets reuse --v/--theta, so only named targets are compared
    if let Some(t) = o
        .target_spec()?
        .filter(|t| !matches!(t, TargetSpec::Custom(_)))
    {
        out = out
            .field("target", t.to_string())
            .field("trace_distance", trace_distance(&rho, &t.density()));
    }
    Ok(out)
}

fn cmd_figure(id: &str, exec: Execution) -> CmdResult<Output> {
    let id: FigureId = id.parse()?;
    let d = figure(id, exec)?;
    let rows = d
        .rows
        .iter()
        .map(|r| r.iter().map(|&x| Cell::Num(x)).collect())
        .collect();
    Ok(Output::default()
        .field("figure", d.name.as_str())
        .with_table(d.columns, rows))
}

fn threshold_curve(kind: CurveKind, o: &Opts) -> CmdResult<ErrorCurve> {
    Ok(match kind {
        CurveKind::Protocol => ErrorCurve::solved(o.code()?, &o.require_target()?)?,
        CurveKind::Bk => match o.magic_target()? {
            MagicTarget::T => ErrorCurve::bk_t(),
            MagicTarget::H => ErrorCurve::bk_h(HFormula::Printed),
        },
        CurveKind::BkOriginal => ErrorCurve::bk_h(HFormula::Original),
        CurveKind::Combined => Composition::new(o.magic_target()?)?.curve(),
        CurveKind::Repetition => repetition_curve(o.magic_target()?),
    })
}

fn cmd_threshold(kind: CurveKind, o: &Opts) -> CmdResult<Output> {
    let curve = threshold_curve(kind, o)?;
    let r = find_threshold(&curve)?;
    let kind_label = match r.kind {
        ThresholdKind::Crossing => "crossing",
        ThresholdKind::GridCertified => "grid-certified",
        ThresholdKind::Degenerate => "degenerate",
    };
    Ok(Output::default()
        .field("curve", curve.label())
        .field("threshold", r.threshold)
        .field("kind", kind_label)
        .field("certified", r.kind == ThresholdKind::GridCertified)
        .field("bracket_width", r.bracket_width)
        .field("evaluations", r.evaluations))
}

fn cmd_solve(o: &Opts) -> CmdResult<Output> {
    let code = o.code()?;
    let target = o.require_target()?;
    let sols = solve_input_params(&code, &target, 1e-10)?;
    let rows = sols
        .iter()
        .enumerate()
        .map(|(i, s)| {
            vec![
                s.v.into(),
                s.theta.into(),
                s.residual.into(),
                s.input_magic.into(),
                (i == 0).into(),
            ]
        })
        .collect();
    Ok(Output::default()
        .field("code", code.to_string())
        .field("target", target.to_string())
        .field("target_magic", target.magic())
        .with_table(
            ["v", "theta", "residual", "input_magic", "canonical"]
                .map(String::from)
                .to_vec(),
            rows,
        ))
}

fn cmd_magic_curve(magic: Option<f64>, o: &Opts) -> CmdResult<Output> {
    let code = o.code()?;
    let theta = o.theta.unwrap_or(std::f64::consts::FRAC_PI_4);
    if let Some(m) = magic {
        let v = solve_for_magic(&code, theta, m)?;
        return Ok(Output::default()
            .field("code", code.to_string())
            .field("theta", theta)
            .field("magic", m)
            .field("v", v)
            .field("achieved", output_magic(&code, theta, v)?));
    }
    let divisions = o.grid_divisions(
        std::f64::consts::FRAC_PI_2,
        gnu_msd::solver::MAGIC_GRID_DIVISIONS,
    )?;
    let vs = gnu_msd::solver::v_grid(divisions);
    let curve = magic_curve(&code, theta, &vs)?;
    let rows = vs
        .iter()
        .map(|&v| {
            vec![
                v.into(),
                curve.points.iter().find(|p| p.0 == v).map(|p| p.1).into(),
            ]
        })
        .collect();
    Ok(Output::default()
        .field("code", code.to_string())
        .field("theta", theta)
        .field("skipped", curve.skipped.len())
        .with_table(vec!["v".into(), "m2".into()], rows))
}

fn cmd_compose(o: &Opts) -> CmdResult<Output> {
    let target = o.magic_target()?;
    let comp = Composition::new(target)?;
    let bk = |e: f64| match target {
        MagicTarget::T => bk_t_error(e),
        MagicTarget::H => bk_h_error(e),
    };
    let row = |e: f64| -> CmdResult<Vec<Cell>> {
        let a = comp.stage_a_error(e)?;
        Ok(vec![
            e.into(),
            a.into(),
            comp.stage_b_error(a)?.into(),
            bk(e)?.into(),
        ])
    };
    let columns = ["eps", "stage_a_error", "total_error", "bk_error"]
        .map(String::from)
        .to_vec();
    let base = Output::default()
        .field("target", target.to_string())
        .field("v", comp.input.v)
        .field("theta", comp.input.theta);
    if let Some(e) = o.eps {
        if !(e > 0.0 && e <= 0.5) {
            return Err(Failure::Usage(format!("--eps {e} outside (0, 0.5]")));
        }
        return Ok(base.with_table(columns, vec![row(e)?]));
    }
    let divisions = o.grid_divisions(0.5, 500)?;
    let rows = (1..=divisions)
        .map(|k| row(0.5 * (k as f64 / divisions as f64)))
        .collect::<CmdResult<Vec<_>>>()?;
    Ok(base.with_table(columns, rows))
}

fn cmd_verify(exec: Execution) -> CmdResult<(Output, bool)> {
    let report = run_all(exec)?;
    let rows = report
        .suites
        .iter()
        .map(|s| {
            vec![
                s.name.into(),
                s.passed().into(),
                s.checks.into(),
                s.max_deviation.into(),
                s.tolerance.into(),
            ]
        })
        .collect();
    for s in &report.suites {
        eprintln!("{s}");
    }
    let out = Output::default()
        .field("passed", report.passed())
        .with_table(
            ["suite", "passed", "checks", "max_deviation", "tolerance"]
                .map(String::from)
                .to_vec(),
            rows,
        );
    Ok((out, report.passed()))
}

fn configure_threads() -> CmdResult<Execution> {
    let Ok(raw) = std::env::var("MSD_THREADS") else {
        return Ok(Execution::Parallel);
    };
    let threads: usize =
        raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
            Failure::Usage(format!("MSD_THREADS='{raw}' must be a positive integer"))
        })?;
    if threads == 1 {
        return Ok(Execution::Sequential);
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Other(e.to_string()))?;
    Ok(Execution::Parallel)
}

fn emit(out: &Output, opts: &Opts) -> CmdResult<()> {
    let text = match opts.format {
        Format::Csv => out.to_csv(),
        Format::Json => out.to_json(),
    };
    match &opts.out {
        Some(path) => write_atomic(path, &text)
            .map_err(|e| Failure::Other(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
            {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(Failure::Other(format!("cannot write to stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn run(cli: Cli) -> CmdResult<bool> {
    let exec = configure_threads()?;
    let (out, opts, ok) = match &cli.command {
        Command::Distill(o) => (cmd_distill(o)?, o, true),
        Command::Figure { id, opts } => (cmd_figure(id, exec)?, opts, true),
        Command::Threshold { curve, opts } => (cmd_threshold(*curve, opts)?, opts, true),
        Command::Solve(o) => (cmd_solve(o)?, o, true),
        Command::MagicCurve { magic, opts } => (cmd_magic_curve(*magic, opts)?, opts, true),
        Command::Compose(o) => (cmd_compose(o)?, o, true),
        Command::Verify(o) => {
            let (out, ok) = cmd_verify(exec)?;
            (out, o, ok)
        }
    };
    emit(&out, opts)?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILURE),
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Numeric(m) => (EXIT_NUMERIC, m),
                Failure::Other(m) => (EXIT_FAILURE, m),
            };
            eprintln!("gnu-msd: {msg}");
            ExitCode::from(code)
        }
    }
}
