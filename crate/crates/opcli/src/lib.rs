//! Command-line front end for `hermite-io2`.
//!
//! [`run`] is the whole program; `main` only wires it to the process streams.
//! Exit codes: 0 success, 1 a numerical check failed, 2 usage error,
//! 3 unparsable expression or input data, 4 any other runtime failure.

pub mod formats;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

use hermite_io2::checks::{run_all, run_suite, CheckOutcome, Suite};
use hermite_io2::expr::{parse_operator, ExprError};
use hermite_io2::hermite::{eval_psi, gauss_hermite, HermiteError, MAX_QUADRATURE_ORDER};
use hermite_io2::rep::{apply, compile, compile_exact, compile_guarded, uncertainty_product, RepError};
use hermite_io2::transforms::{
    analyze, fourier_num, synthesize_p, synthesize_x, translate_phase, FunctionSpec, TransformError,
};
use hermite_io2::uea::{Basis, UeaElement, UeaError};
use hermite_io2::{CoeffVector64, FrameParams64, QuadratureRule64};

use formats::{complex_array_json, complex_json, parse_coeffs_json, read_samples_csv, write_csv, write_json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_RUNTIME: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Expr(ExprError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Algebra(#[from] UeaError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Hermite(#[from] HermiteError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::Algebra(a) => CliError::Algebra(a),
            other => CliError::Expr(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Expr(_) | CliError::Input(_) => EXIT_PARSE,
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_RUNTIME,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "opcli",
    version,
    about = "io(2) operator algebra and Hermite-function transforms"
)]
struct Cli {
    /// Output format; symbolic commands default to canonical text, numeric ones to JSON.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print an expression in PBW normal order.
    NormalOrder {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Reduce modulo the Casimir to at most one D per monomial.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// [A, B] in normal order.
    Commutator {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Rewrite in the (ad, N, a) basis.
    ToLadder {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Rewrite in the (X, D, N) basis.
    FromLadder {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Matrix of an expression on the number basis.
    Compile {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=4096))]
        dim: u32,
        /// Use the truncated band-product route with this guard band.
        #[arg(long, conflicts_with = "exact")]
        guard: Option<usize>,
        /// Emit exact entries as text.
        #[arg(long)]
        exact: bool,
    },
    /// Apply an expression to a coefficient vector.
    Apply {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[command(flatten)]
        input: FnInput,
    },
    /// Convert a function between number, position and momentum profiles.
    Transform {
        #[command(flatten)]
        input: FnInput,
        #[arg(long, value_enum, default_value_t = Target::N)]
        to: Target,
        /// Evaluation points: `lo,hi,count`, or `nodes` for the quadrature nodes.
        #[arg(long, default_value = "-6,6,49", allow_hyphen_values = true)]
        grid: Grid,
    },
    /// Check that Hermite functions are eigenvectors of the numerical Fourier transform.
    FourierCheck {
        #[arg(long, default_value_t = 32)]
        nmax: usize,
        #[arg(long, default_value_t = 96, value_parser = quad_order)]
        quad: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value = "-6,6,49", allow_hyphen_values = true)]
        grid: Grid,
    },
    /// Position and momentum spreads of a Hermite function.
    Uncertainty {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
    },
    /// Gauss–Hermite nodes and plain-dx weights.
    Quad {
        #[arg(long, default_value_t = 40, value_parser = quad_order)]
        quad: usize,
        #[arg(long, allow_hyphen_values = true)]
        frame: Option<Frame>,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: SuiteChoice,
    },
}

#[derive(Debug, Args)]
struct FnInput {
    /// `csv:<path>` with columns x,re,im at quadrature nodes, or `coeffs:<json>` / `coeffs:<path>`.
    #[arg(long = "fn")]
    source: FnSource,
    /// Coefficients kept when analyzing samples.
    #[arg(long, default_value_t = 32)]
    nmax: usize,
    /// Quadrature order for `--grid nodes`; samples must sit on the nodes of this order.
    #[arg(long, value_parser = quad_order)]
    quad: Option<usize>,
    /// Affine frame `x0,s` with x = x0 + s·u.
    #[arg(long, allow_hyphen_values = true)]
    frame: Option<Frame>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    N,
    X,
    P,
}

#[derive(Debug, Clone)]
enum FnSource {
    Csv(PathBuf),
    Coeffs(String),
}

impl FromStr for FnSource {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(path) = s.strip_prefix("csv:") {
            Ok(FnSource::Csv(path.into()))
        } else if let Some(body) = s.strip_prefix("coeffs:") {
            Ok(FnSource::Coeffs(body.to_string()))
        } else {
            Err("expected csv:<path> or coeffs:<json>".into())
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Frame(FrameParams64);

impl FromStr for Frame {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once(',').ok_or("expected x0,s")?;
        let x0: f64 = a.trim().parse().map_err(|e| format!("x0: {e}"))?;
        let sc: f64 = b.trim().parse().map_err(|e| format!("s: {e}"))?;
        if !x0.is_finite() {
            return Err("x0 must be finite".into());
        }
        FrameParams64::new(x0, sc).map(Frame).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy)]
enum Grid {
    Uniform { lo: f64, hi: f64, count: usize },
    Nodes,
}

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "nodes" {
            return Ok(Grid::Nodes);
        }
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [lo, hi, count] = parts[..] else {
            return Err("expected lo,hi,count or nodes".into());
        };
        let lo: f64 = lo.parse().map_err(|e| format!("lo: {e}"))?;
        let hi: f64 = hi.parse().map_err(|e| format!("hi: {e}"))?;
        let count: usize = count.parse().map_err(|e| format!("count: {e}"))?;
        if !(lo.is_finite() && hi.is_finite()) || count == 0 || (count == 1 && lo != hi) {
            return Err("need finite bounds and count ≥ 1 (count 1 only when lo = hi)".into());
        }
        Ok(Grid::Uniform { lo, hi, count })
    }
}

impl Grid {
    fn points(self, rule: Option<&QuadratureRule64>, frame: &FrameParams64) -> Result<Vec<f64>, CliError> {
        match self {
            Grid::Uniform { lo, hi, count } => {
                let step = if count > 1 { (hi - lo) / (count - 1) as f64 } else { 0.0 };
                Ok((0..count).map(|i| lo + step * i as f64).collect())
            }
            Grid::Nodes => {
                let rule = rule.ok_or_else(|| CliError::Usage("--grid nodes needs --quad".into()))?;
                Ok(rule.nodes().iter().map(|&u| frame.x0() + frame.s() * u).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct SuiteChoice(Option<Suite>);

impl FromStr for SuiteChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            Ok(SuiteChoice(None))
        } else {
            s.parse().map(|x| SuiteChoice(Some(x)))
        }
    }
}

/// Shortest round-trip float text, as in the JSON output.
fn num(v: f64) -> String {
    format!("{v:?}")
}

fn quad_order(s: &str) -> Result<usize, String> {
    let m: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (1..=MAX_QUADRATURE_ORDER).contains(&m) {
        Ok(m)
    } else {
        Err(format!("quadrature order must be in 1..={MAX_QUADRATURE_ORDER}"))
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::NormalOrder { expr } => emit_element(out, fmt, &parse_operator(expr)?.lower()?),
        Command::Reduce { expr } => {
            let reduced = parse_operator(expr)?.lower_in(Basis::Differential)?.casimir_reduce()?;
            emit_element(out, fmt, reduced.as_element())
        }
        Command::Commutator { left, right } => {
            let (l, r) = (parse_operator(left)?, parse_operator(right)?);
            let basis = if l.natural_basis() == Basis::Ladder && r.natural_basis() == Basis::Ladder {
                Basis::Ladder
            } else {
                Basis::Differential
            };
            emit_element(out, fmt, &l.lower_in(basis)?.commutator(&r.lower_in(basis)?)?)
        }
        Command::ToLadder { expr } => emit_element(out, fmt, &parse_operator(expr)?.lower_in(Basis::Ladder)?),
        Command::FromLadder { expr } => emit_element(out, fmt, &parse_operator(expr)?.lower_in(Basis::Differential)?),
        Command::Compile {
            expr,
            dim,
            guard,
            exact,
        } => cmd_compile(out, fmt, &parse_operator(expr)?.lower()?, *dim as usize, *guard, *exact),
        Command::Apply { expr, input } => {
            let a = parse_operator(expr)?.lower()?;
            let f = load_coeffs(input)?;
            let result = apply(&a, &f)?;
            emit_coeffs(out, fmt, result.coeffs())
        }
        Command::Transform { input, to, grid } => cmd_transform(out, fmt, input, *to, *grid),
        Command::FourierCheck { nmax, quad, tol, grid } => cmd_fourier_check(out, fmt, *nmax, *quad, *tol, *grid),
        Command::Uncertainty { n, s } => {
            if !(s.is_finite() && *s > 0.0) {
                return Err(CliError::Usage(format!("--s must be positive, got {s}")));
            }
            let u = uncertainty_product::<f64>(*n, *s)?;
            match fmt {
                Some(Format::Csv) => write_csv(
                    out,
                    &["n", "s", "delta_x", "delta_p", "product"],
                    [vec![
                        n.to_string(),
                        num(*s),
                        num(u.delta_x),
                        num(u.delta_p),
                        num(u.product),
                    ]],
                )?,
                _ => write_json(
                    out,
                    &json!({"n": n, "s": s, "delta_x": u.delta_x, "delta_p": u.delta_p, "product": u.product}),
                )?,
            }
            Ok(EXIT_OK)
        }
        Command::Quad { quad, frame } => {
            let frame = frame.map_or_else(FrameParams64::standard, |f| f.0);
            let rule = gauss_hermite::<f64>(*quad)?;
            let xs: Vec<f64> = rule.nodes().iter().map(|&u| frame.x0() + frame.s() * u).collect();
            let ws: Vec<f64> = rule.weights().iter().map(|&w| w * frame.s()).collect();
            match fmt {
                Some(Format::Csv) => write_csv(
                    out,
                    &["x", "weight"],
                    xs.iter().zip(&ws).map(|(x, w)| vec![num(*x), num(*w)]),
                )?,
                _ => write_json(out, &json!({"nodes": xs, "weights": ws}))?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify { suite } => {
            let outcomes = match suite.0 {
                Some(s) => run_suite(s),
                None => run_all(),
            };
            emit_verify(out, fmt, &outcomes)
        }
    }
}

fn element_json(a: &UeaElement) -> Value {
    let terms: Vec<Value> = a
        .terms_grlex_desc()
        .into_iter()
        .map(|(e, c)| json!({"exponents": e, "coeff": c.to_string()}))
        .collect();
    json!({
        "basis": a.basis().to_string(),
        "letters": a.basis().letters(),
        "text": a.to_string(),
        "terms": terms,
    })
}

fn emit_element(out: &mut dyn Write, fmt: Option<Format>, a: &UeaElement) -> Result<i32, CliError> {
    match fmt {
        None => writeln!(out, "{a}")?,
        Some(Format::Json) => write_json(out, &element_json(a))?,
        Some(Format::Csv) => {
            let [l0, l1, l2] = a.basis().letters();
            write_csv(
                out,
                &[l0, l1, l2, "coeff"],
                a.terms_grlex_desc()
                    .into_iter()
                    .map(|(e, c)| vec![e[0].to_string(), e[1].to_string(), e[2].to_string(), c.to_string()]),
            )?
        }
    }
    Ok(EXIT_OK)
}

fn cmd_compile(
    out: &mut dyn Write,
    fmt: Option<Format>,
    a: &UeaElement,
    dim: usize,
    guard: Option<usize>,
    exact: bool,
) -> Result<i32, CliError> {
    let cells: Vec<Vec<Value>> = if exact {
        let m = compile_exact(a, dim)?;
        (0..dim)
            .map(|r| (0..dim).map(|c| Value::String(m.get(r, c).to_string())).collect())
            .collect()
    } else {
        let m = match guard {
            Some(g) => compile_guarded::<f64>(a, dim, g)?,
            None => compile::<f64>(a, dim)?,
        };
        m.rows()
            .map(|row| row.iter().copied().map(complex_json).collect())
            .collect()
    };
    match fmt {
        Some(Format::Csv) => {
            let header: &[&str] = if exact {
                &["row", "col", "value"]
            } else {
                &["row", "col", "re", "im"]
            };
            let rows = cells.iter().enumerate().flat_map(|(r, row)| {
                row.iter().enumerate().map(move |(c, v)| {
                    let mut rec = vec![r.to_string(), c.to_string()];
                    match v {
                        Value::String(s) => rec.push(s.clone()),
                        Value::Array(pair) => rec.extend(pair.iter().map(Value::to_string)),
                        other => rec.push(other.to_string()),
                    }
                    rec
                })
            });
            write_csv(out, header, rows)?
        }
        _ => write_json(out, &json!({"dim": dim, "exact": exact, "entries": cells}))?,
    }
    Ok(EXIT_OK)
}

fn frame_of(input: &FnInput) -> FrameParams64 {
    input.frame.map_or_else(FrameParams64::standard, |f| f.0)
}

/// Coefficients on the input's frame, from JSON directly or by analyzing node samples.
fn load_coeffs(input: &FnInput) -> Result<CoeffVector64, CliError> {
    let frame = frame_of(input);
    match &input.source {
        FnSource::Coeffs(body) => {
            let text = if body.trim_start().starts_with('[') {
                body.clone()
            } else {
                std::fs::read_to_string(body)?
            };
            let coeffs = parse_coeffs_json(&text).map_err(CliError::Input)?;
            Ok(CoeffVector64::new(coeffs).with_frame(frame))
        }
        FnSource::Csv(path) => {
            let rows = read_samples_csv(File::open(path)?).map_err(CliError::Input)?;
            if rows.is_empty() || rows.len() > MAX_QUADRATURE_ORDER {
                return Err(CliError::Input(format!(
                    "need 1..={MAX_QUADRATURE_ORDER} samples, got {}",
                    rows.len()
                )));
            }
            if let Some(m) = input.quad.filter(|&m| m != rows.len()) {
                return Err(CliError::Input(format!(
                    "--quad {m} but the file has {} samples",
                    rows.len()
                )));
            }
            let rule = gauss_hermite::<f64>(rows.len())?;
            for (i, ((x, _), &u)) in rows.iter().zip(rule.nodes()).enumerate() {
                let want = frame.x0() + frame.s() * u;
                if (x - want).abs() > 1e-9 * (1.0 + want.abs()) {
                    return Err(CliError::Input(format!(
                        "sample {} at x = {x} is not quadrature node {want} (see `opcli quad --quad {}`)",
                        i + 1,
                        rows.len()
                    )));
                }
            }
            let values = rows.into_iter().map(|(_, v)| v).collect();
            let unit = analyze(&FunctionSpec::samples(values), input.nmax, &rule)?;
            // ∫ψ[n,x0,s](x) f(x) dx = √s ∫ψ_n(u) f(x0 + s u) du
            let root_s = frame.s().sqrt();
            Ok(CoeffVector64::new(unit.coeffs().iter().map(|c| c * root_s).collect()).with_frame(frame))
        }
    }
}

fn emit_coeffs(out: &mut dyn Write, fmt: Option<Format>, coeffs: &[Complex64]) -> Result<i32, CliError> {
    match fmt {
        Some(Format::Csv) => write_csv(
            out,
            &["n", "re", "im"],
            coeffs
                .iter()
                .enumerate()
                .map(|(n, z)| vec![n.to_string(), num(z.re), num(z.im)]),
        )?,
        _ => write_json(out, &complex_array_json(coeffs))?,
    }
    Ok(EXIT_OK)
}

fn emit_profile(
    out: &mut dyn Write,
    fmt: Option<Format>,
    axis: &str,
    points: &[f64],
    values: &[Complex64],
) -> Result<i32, CliError> {
    match fmt {
        Some(Format::Csv) => write_csv(
            out,
            &[axis, "re", "im"],
            points
                .iter()
                .zip(values)
                .map(|(p, z)| vec![num(*p), num(z.re), num(z.im)]),
        )?,
        _ => write_json(out, &json!({ axis: points, "values": complex_array_json(values) }))?,
    }
    Ok(EXIT_OK)
}

fn cmd_transform(
    out: &mut dyn Write,
    fmt: Option<Format>,
    input: &FnInput,
    to: Target,
    grid: Grid,
) -> Result<i32, CliError> {
    let c = load_coeffs(input)?;
    let frame = frame_of(input);
    let rule = input.quad.map(gauss_hermite::<f64>).transpose()?;
    let (x0, s) = (frame.x0(), frame.s());
    match to {
        Target::N => emit_coeffs(out, fmt, c.coeffs()),
        Target::X => {
            let xs = grid.points(rule.as_ref(), &frame)?;
            let us: Vec<f64> = xs.iter().map(|&x| (x - x0) / s).collect();
            let values: Vec<Complex64> = synthesize_x(&c, &us).into_iter().map(|v| v / s.sqrt()).collect();
            emit_profile(out, fmt, "x", &xs, &values)
        }
        Target::P => {
            let ps = grid.points(rule.as_ref(), &FrameParams64::standard())?;
            let scaled: Vec<f64> = ps.iter().map(|&p| s * p).collect();
            let unit: Vec<Complex64> = synthesize_p(&c, &scaled).into_iter().map(|v| v * s.sqrt()).collect();
            let values = translate_phase(&unit, &ps, x0)?;
            emit_profile(out, fmt, "p", &ps, &values)
        }
    }
}

fn cmd_fourier_check(
    out: &mut dyn Write,
    fmt: Option<Format>,
    nmax: usize,
    quad: usize,
    tol: f64,
    grid: Grid,
) -> Result<i32, CliError> {
    let rule = gauss_hermite::<f64>(quad)?;
    let ps = grid.points(Some(&rule), &FrameParams64::standard())?;
    let mut per_n = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let got = fourier_num(&FunctionSpec::real(move |x| eval_psi(n, x)), &rule, &ps)?;
        let phase = Complex64::i().powu(n as u32);
        let worst = got
            .iter()
            .zip(&ps)
            .map(|(g, &p)| (g - phase * eval_psi(n, p)).norm())
            .fold(0.0, f64::max);
        per_n.push(worst);
    }
    let max_error = per_n.iter().copied().fold(0.0, f64::max);
    let passed = max_error <= tol;
    match fmt {
        Some(Format::Csv) => write_csv(
            out,
            &["n", "max_error"],
            per_n.iter().enumerate().map(|(n, e)| vec![n.to_string(), num(*e)]),
        )?,
        _ => write_json(
            out,
            &json!({"nmax": nmax, "quad": quad, "tol": tol, "max_error": max_error, "per_n": per_n, "passed": passed}),
        )?,
    }
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn emit_verify(out: &mut dyn Write, fmt: Option<Format>, outcomes: &[CheckOutcome]) -> Result<i32, CliError> {
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    match fmt {
        None => {
            for o in outcomes {
                writeln!(out, "{o}")?;
            }
            writeln!(out, "{} checks, {failed} failed", outcomes.len())?;
        }
        Some(Format::Json) => {
            let rows: Vec<Value> = outcomes
                .iter()
                .map(|o| json!({"suite": o.suite.name(), "name": o.name, "passed": o.passed, "detail": o.detail}))
                .collect();
            write_json(out, &json!({"checks": rows, "failed": failed}))?
        }
        Some(Format::Csv) => write_csv(
            out,
            &["suite", "name", "passed", "detail"],
            outcomes.iter().map(|o| {
                vec![
                    o.suite.name().to_string(),
                    o.name.to_string(),
                    o.passed.to_string(),
                    o.detail.clone(),
                ]
            }),
        )?,
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}
