//! The `puiseux` command line: argument handling, input loading and the
//! text, LaTeX and JSON renderings of an [`Expansion`].

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::engine::{expand_all, Diagnostic, ExpandOptions, Expansion, PuiseuxSeries};
use crate::error::Error;
use crate::field::{format_real, Backend, Coeff};
use crate::mpoly::{full_digits, parse_poly, Style, XYPoly};
use crate::polygon::{characteristic_poly, expansion_segments, newton_polygon, polygon_svg};
use crate::verify::{check_branch, OracleVerdict, DEFAULT_SAMPLES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_SYNTAX: i32 = 2;
pub const EXIT_NON_RATIONAL: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Overrides the default precision of the numeric backend.
pub const PRECISION_ENV: &str = "PUISEUX_PRECISION";

const TEXT_DIGITS: usize = 12;
const RETRIES: u32 = 2;

#[derive(Parser, Debug)]
#[command(name = "puiseux", version, about = "Newton-Puiseux expansions of plane curve branches through the origin")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand every branch through the origin.
    Expand(ExpandArgs),
    /// Expand, then check every branch against the residual, the oracle and
    /// the numeric slope.
    Verify(VerifyArgs),
    /// Print the Newton polygon of the input.
    Polygon(PolygonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BackendKind {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Args, Debug)]
struct Source {
    /// Polynomial in x and y, or @path to read it from a file.
    input: String,
    #[arg(long, value_enum, default_value_t = BackendKind::Exact)]
    backend: BackendKind,
    /// Bits of precision for the numeric backend [default: 256].
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Args, Debug)]
struct Budget {
    /// Terms per branch.
    #[arg(long, default_value_t = 8)]
    terms: usize,
    /// Shift-substitutions per branch.
    #[arg(long, default_value_t = 32)]
    depth: u32,
    /// Explore sibling branches on several threads.
    #[arg(long)]
    parallel: bool,
    /// Print the step diagnostics on standard error.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Args, Debug)]
struct ExpandArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    budget: Budget,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write step_<branch>_<depth>.svg for every visited iterate.
    #[arg(long)]
    svg_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    budget: Budget,
    /// Sample points of the slope check, each in (0, 0.1].
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SAMPLES.to_vec())]
    samples: Vec<f64>,
}

#[derive(Args, Debug)]
struct PolygonArgs {
    #[command(flatten)]
    source: Source,
    /// Write polygon.svg into this directory.
    #[arg(long)]
    svg_dir: Option<PathBuf>,
}

/// A failure together with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. } | Error::NegativeExponent { .. } | Error::ImaginaryInExactBackend { .. } => EXIT_SYNTAX,
            Error::NonRationalRoot { .. } => EXIT_NON_RATIONAL,
            _ => EXIT_FAILURE,
        };
        let mut message = e.to_string();
        if code == EXIT_NON_RATIONAL {
            message.push_str("; rerun with --backend numeric");
        }
        Failure { code, message }
    }
}

fn failure(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_FAILURE,
        message: message.into(),
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Results go to `stdout`, messages to `stderr`.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                EXIT_FAILURE
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    let env_precision = std::env::var(PRECISION_ENV).ok();
    let outcome = match cli.command {
        Command::Expand(a) => expand(&a, env_precision.as_deref(), stdout, stderr),
        Command::Verify(a) => verify(&a, env_precision.as_deref(), stdout, stderr),
        Command::Polygon(a) => polygon(&a, env_precision.as_deref(), stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    failure(format!("{}: {e}", path.display()))
}

impl Source {
    fn text(&self) -> Result<String, Failure> {
        match self.input.strip_prefix('@') {
            Some(path) => fs::read_to_string(path)
                .map(|s| s.trim().to_string())
                .map_err(|e| io_error(Path::new(path), e)),
            None => Ok(self.input.clone()),
        }
    }

    fn precision(&self, env: Option<&str>) -> Result<u32, Failure> {
        let p = match (self.precision, env) {
            (Some(p), _) => p,
            (None, Some(v)) => v
                .trim()
                .parse()
                .map_err(|_| failure(format!("{PRECISION_ENV} must be a bit count, got {v:?}")))?,
            (None, None) => Backend::DEFAULT_PRECISION,
        };
        if p < Backend::MIN_PRECISION {
            return Err(failure(format!("precision must be at least {} bits", Backend::MIN_PRECISION)));
        }
        Ok(p)
    }

    fn backend(&self, precision: u32) -> Backend {
        match self.backend {
            BackendKind::Exact => Backend::Exact,
            BackendKind::Numeric => Backend::numeric(precision),
        }
    }
}

/// Parses the input and expands it, doubling the numeric precision when an
/// iterate loses its polygon to rounding.
fn load_and_expand(
    source: &Source,
    budget: &Budget,
    env: Option<&str>,
    record_polygons: bool,
    stderr: &mut dyn Write,
) -> Result<(String, XYPoly, Expansion), Failure> {
    let text = source.text()?;
    let mut precision = source.precision(env)?;
    let mut attempt = 0;
    loop {
        let backend = source.backend(precision);
        let f = parse_poly(&text, backend)?;
        let opts = ExpandOptions {
            max_terms: budget.terms,
            max_depth: budget.depth,
            backend,
            parallel: budget.parallel,
            record_polygons,
            ..Default::default()
        };
        match expand_all(&f, &opts) {
            Err(Error::InconsistentState { branch }) if !backend.is_exact() && attempt < RETRIES => {
                let _ = writeln!(stderr, "warning: branch {branch} lost its polygon at {precision} bits, retrying at {}", precision * 2);
                precision *= 2;
                attempt += 1;
            }
            Err(e) => return Err(e.into()),
            Ok(e) => {
                if budget.verbose {
                    for d in &e.diagnostics {
                        let _ = writeln!(stderr, "[{}] depth {} {:?}: {}", d.branch, d.depth, d.kind, d.detail);
                    }
                }
                return Ok((text, f, e));
            }
        }
    }
}

fn render_line(b: &PuiseuxSeries, style: Style) -> String {
    let mut line = b.render(style, TEXT_DIGITS);
    if b.multiplicity > 1 {
        line.push_str(&format!("  (multiplicity {})", b.multiplicity));
    }
    line
}

fn expand(a: &ExpandArgs, env: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let (text, f, e) = load_and_expand(&a.source, &a.budget, env, a.svg_dir.is_some(), stderr)?;
    if let Some(dir) = &a.svg_dir {
        fs::create_dir_all(dir).map_err(|err| io_error(dir, err))?;
        for s in &e.snapshots {
            let path = dir.join(format!("step_{}_{}.svg", s.branch, s.depth));
            let title = format!("branch {} depth {}", s.branch, s.depth);
            fs::write(&path, polygon_svg(&s.points, &s.chain, &title)).map_err(|err| io_error(&path, err))?;
        }
    }
    let out = match a.format {
        Format::Text => e.branches.iter().map(|b| render_line(b, Style::Plain) + "\n").collect(),
        Format::Latex => e.branches.iter().map(|b| render_line(b, Style::Latex) + "\n").collect(),
        Format::Json => to_json(&text, f.backend(), &e) + "\n",
    };
    if e.branches.is_empty() && a.format != Format::Json {
        let _ = writeln!(stderr, "no branch passes through the origin");
    }
    stdout.write_all(out.as_bytes()).map_err(|err| failure(err.to_string()))?;
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs, env: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let (_, f, e) = load_and_expand(&a.source, &a.budget, env, false, stderr)?;
    let precision = f.backend().precision().unwrap_or(a.source.precision(env)?);
    let mut all = true;
    let mut out = String::new();
    for (i, b) in e.branches.iter().enumerate() {
        let c = check_branch(&f, b, &a.samples, precision)?;
        all &= c.passed();
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!("branch {}: {verdict}  {}\n", i + 1, render_line(b, Style::Plain)));
        let vals: Vec<String> = c.valuations.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!(
            "  residual orders: {}{}\n",
            vals.join(", "),
            if c.monotone { "" } else { "  (not increasing)" }
        ));
        let oracle = match &c.oracle {
            OracleVerdict::Agrees { jet } => format!("agrees from a {jet}-term jet"),
            OracleVerdict::ExactSolution => "exact solution".to_string(),
            OracleVerdict::ConsistentCluster => "consistent unresolved cluster".to_string(),
            OracleVerdict::Disagrees { detail } => format!("disagrees: {detail}"),
        };
        out.push_str(&format!("  oracle: {oracle}\n"));
        let slope = match c.slope {
            Some(m) => format!("{m:.4}"),
            None => "residual vanishes".to_string(),
        };
        out.push_str(&format!("  slope: {slope}{}\n", if c.slope_ok { "" } else { "  (off)" }));
    }
    if e.branches.is_empty() {
        out.push_str("no branch passes through the origin\n");
    }
    stdout.write_all(out.as_bytes()).map_err(|err| failure(err.to_string()))?;
    Ok(if all { EXIT_OK } else { EXIT_VERIFY })
}

fn polygon(a: &PolygonArgs, env: Option<&str>, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let text = a.source.text()?;
    let f = parse_poly(&text, a.source.backend(a.source.precision(env)?))?;
    let points = f.support_points()?;
    let chain = newton_polygon(&points);
    let fmt_points = |ps: &[crate::mpoly::Monomial]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = format!("points: {}\nchain: {}\n", fmt_points(&points), fmt_points(&chain));
    for seg in expansion_segments(&chain) {
        let phi = characteristic_poly(&f, &seg)?;
        out.push_str(&format!(
            "segment {} -> {}: gamma={} beta={} span={} phi={}\n",
            seg.start, seg.end, seg.gamma, seg.beta, seg.span, phi
        ));
    }
    if let Some(dir) = &a.svg_dir {
        fs::create_dir_all(dir).map_err(|err| io_error(dir, err))?;
        let path = dir.join("polygon.svg");
        fs::write(&path, polygon_svg(&points, &chain, &text)).map_err(|err| io_error(&path, err))?;
    }
    stdout.write_all(out.as_bytes()).map_err(|err| failure(err.to_string()))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct JsonExpansion<'a> {
    input: &'a str,
    backend: &'static str,
    branches: Vec<JsonBranch>,
    diagnostics: &'a [Diagnostic],
}

#[derive(Serialize)]
struct JsonBranch {
    ramification: u64,
    exact: bool,
    multiplicity: u32,
    terms: Vec<JsonTerm>,
    truncation_order: Option<String>,
}

#[derive(Serialize)]
struct JsonTerm {
    exponent: String,
    coeff: JsonCoeff,
}

#[derive(Serialize)]
#[serde(untagged)]
enum JsonCoeff {
    Rational { num: String, den: String },
    Complex { re: String, im: String },
}

fn json_coeff(c: &Coeff) -> JsonCoeff {
    match c {
        Coeff::Exact(r) => JsonCoeff::Rational {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        },
        Coeff::Complex(z) => {
            let digits = full_digits(z.prec().0);
            JsonCoeff::Complex {
                re: format_real(z.real(), digits),
                im: format_real(z.imag(), digits),
            }
        }
    }
}

/// The documented JSON document for one expansion.
pub fn to_json(input: &str, backend: Backend, e: &Expansion) -> String {
    let doc = JsonExpansion {
        input,
        backend: backend.name(),
        branches: e
            .branches
            .iter()
            .map(|b| JsonBranch {
                ramification: b.ramification,
                exact: b.exact,
                multiplicity: b.multiplicity,
                terms: b
                    .terms
                    .iter()
                    .map(|t| JsonTerm {
                        exponent: t.exponent.to_string(),
                        coeff: json_coeff(&t.coeff),
                    })
                    .collect(),
                truncation_order: b.truncation_order.as_ref().map(|o| o.to_string()),
            })
            .collect(),
        diagnostics: &e.diagnostics,
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}
