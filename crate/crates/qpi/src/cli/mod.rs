//! Command-line driver: loads a datum, runs one computation and writes a deterministic report.
//!
//! Exit codes: 0 success, 1 invalid datum or parameters, 2 failed assertion (a JSON failure
//! report is written), 64 usage error, 74 I/O error.

mod commands;
mod report;
mod verify;

pub use report::{tex_escape, Format, Node, Renderer, TEX_PREAMBLE};

use crate::datum::{builtin, builtin_names, Datum, DatumDescriptor, DatumError, Violation};
use crate::free_half::FreeError;
use crate::iqsp::IqspError;
use crate::modules::ModuleError;
use crate::quasi::QuasiError;
use crate::scalar::parse_scalar;
use clap::{Args, CommandFactory, Parser, Subcommand};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_ASSERTION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "QPI_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "qpi",
    version,
    about = "Exact computations for quantum covering groups and ıquantum covering groups"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Built-in datum name or path to a JSON datum descriptor.
    #[arg(long, global = true, default_value = "rank1")]
    pub datum: String,
    /// Truncation: components of height N and above are discarded.
    #[arg(long, global = true, value_name = "N")]
    pub height: Option<i64>,
    /// Specialize every printed scalar at π = 1 or π = −1.
    #[arg(long, global = true, allow_negative_numbers = true, value_parser = parse_pi)]
    pub pi: Option<i8>,
    /// Comma-separated ς_i overriding the datum, e.g. "q^-1,1".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub varsigma: Option<String>,
    /// Comma-separated labels τ(i) overriding the datum.
    #[arg(long, global = true)]
    pub tau: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed of the randomized checks in `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check the Cartan datum, root datum and ı-parameters.
    Validate,
    /// Quasi-K-matrix Υ by height.
    Upsilon,
    /// Quasi-R-matrix Θ by height.
    Theta,
    /// Θ^ı by height of the second leg.
    ThetaI,
    /// Table of ı-divided powers.
    Idp {
        /// Label of the index; all indices by default.
        #[arg(long)]
        index: Option<i64>,
        /// Largest m.
        #[arg(long, default_value_t = 4)]
        max: usize,
    },
    /// Simple module L(λ) with its weight spaces, action and canonical basis.
    Module {
        /// Comma-separated ⟨i,λ⟩; the first fundamental weight by default.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// ı-canonical basis of L(λ) or L(λ)⊗L(μ) (rank one).
    Icb {
        /// Highest weight ⟨1,λ⟩ of the first factor.
        #[arg(long)]
        lambda: i64,
        /// Highest weight ⟨1,μ⟩ of a second factor.
        #[arg(long)]
        mu: Option<i64>,
    },
    /// Stabilization of ı-canonical basis coefficients along L(λ+s)⊗L(μ+s) (rank one).
    Stabilize {
        /// Degree a of the first label F^(a)η.
        #[arg(long, default_value_t = 0)]
        b1: usize,
        /// Degree b of the second label F^(b)η.
        #[arg(long, default_value_t = 0)]
        b2: usize,
        /// Parity class ζ ∈ {0,1}: λ − μ = ζ.
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        zeta: u8,
        /// Number of (λ, μ) steps, at least 2.
        #[arg(long, default_value_t = 4)]
        steps: usize,
    },
    /// Run the invariant suite.
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Upsilon => "upsilon",
            Command::Theta => "theta",
            Command::ThetaI => "theta-i",
            Command::Idp { .. } => "idp",
            Command::Module { .. } => "module",
            Command::Icb { .. } => "icb",
            Command::Stabilize { .. } => "stabilize",
            Command::Verify => "verify",
        }
    }
}

fn parse_pi(s: &str) -> Result<i8, String> {
    match s {
        "1" | "+1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(format!("expected 1 or -1, got {s:?}")),
    }
}

/// A named check that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub check: String,
    pub detail: String,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Assertion(Vec<Failure>),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Assertion(_) => EXIT_ASSERTION,
            CliError::Io(_) => EXIT_IO,
        }
    }

    pub fn assertion(check: &str, detail: impl Into<String>) -> Self {
        CliError::Assertion(vec![Failure {
            check: check.into(),
            detail: detail.into(),
        }])
    }
}

impl From<ModuleError> for CliError {
    fn from(e: ModuleError) -> Self {
        match e {
            ModuleError::NotDominant(_)
            | ModuleError::RankUnsupported
            | ModuleError::DepthExceeded { .. } => CliError::Usage(e.to_string()),
            ModuleError::Quasi(q) => q.into(),
            other => CliError::assertion("module", other.to_string()),
        }
    }
}

impl From<QuasiError> for CliError {
    fn from(e: QuasiError) -> Self {
        match e {
            QuasiError::Unsupported => CliError::Validation(e.to_string()),
            QuasiError::Free(f) => f.into(),
            other => CliError::assertion("consistency", other.to_string()),
        }
    }
}

impl From<FreeError> for CliError {
    fn from(e: FreeError) -> Self {
        match e {
            FreeError::HeightExceeded { .. } => CliError::Usage(e.to_string()),
            other => CliError::assertion("free-half", other.to_string()),
        }
    }
}

impl From<crate::covering::PbwError> for CliError {
    fn from(e: crate::covering::PbwError) -> Self {
        CliError::assertion("pbw", e.to_string())
    }
}

impl From<IqspError> for CliError {
    fn from(e: IqspError) -> Self {
        CliError::assertion("iquantum", e.to_string())
    }
}

/// Everything a command needs after argument parsing and validation.
pub struct Context {
    pub datum: Datum,
    pub args: GlobalArgs,
    pub violations: Vec<Violation>,
}

impl Context {
    /// Inclusive internal height for a command whose default truncation is `default`.
    pub fn inclusive_height(&self, default: i64) -> i64 {
        self.args.height.unwrap_or(default) - 1
    }
}

/// Loads a built-in datum or a descriptor file and applies parameter overrides.
pub fn load_datum(args: &GlobalArgs) -> Result<Datum, CliError> {
    let mut d = if builtin_names().contains(&args.datum.as_str()) {
        builtin(&args.datum).map_err(|e| CliError::Usage(e.to_string()))?
    } else {
        let path = PathBuf::from(&args.datum);
        if !path.exists() {
            return Err(CliError::Usage(format!(
                "{:?} is neither a built-in datum ({}) nor a file",
                args.datum,
                builtin_names().join(", ")
            )));
        }
        let src = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let desc =
            DatumDescriptor::from_json(&src).map_err(|e| CliError::Validation(e.to_string()))?;
        desc.to_datum()
            .map_err(|e: DatumError| CliError::Validation(e.to_string()))?
    };
    let n = d.rank();
    if let Some(v) = &args.varsigma {
        let vals = v
            .split(',')
            .map(|s| {
                parse_scalar(s.trim())
                    .map_err(|e| CliError::Usage(format!("--varsigma {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if vals.len() != n {
            return Err(CliError::Usage(format!(
                "--varsigma needs {n} entries, got {}",
                vals.len()
            )));
        }
        d = d.with_varsigma(vals);
    }
    if let Some(t) = &args.tau {
        let labels = t
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|e| CliError::Usage(format!("--tau {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if labels.len() != n {
            return Err(CliError::Usage(format!(
                "--tau needs {n} entries, got {}",
                labels.len()
            )));
        }
        d.params.tau = labels
            .iter()
            .map(|l| {
                d.cartan
                    .index_of_label(*l)
                    .ok_or_else(|| CliError::Usage(format!("--tau label {l} is not in I")))
            })
            .collect::<Result<_, _>>()?;
    }
    Ok(d)
}

fn failure_report(cmd: &str, datum: &str, failures: &[Failure]) -> String {
    let doc = serde_json::json!({
        "status": "failed",
        "command": cmd,
        "datum": datum,
        "failures": failures.iter().map(|f| serde_json::json!({"check": f.check, "detail": f.detail})).collect::<Vec<_>>(),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))
        })?;
        if n == 0 {
            return Err(CliError::Usage(format!("{THREADS_ENV} must be positive")));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Usage(e.to_string()))
}

/// Runs one command and returns its report; `Validate` reports violations instead of failing.
pub fn execute(cli: &Cli) -> Result<(Node, i32), CliError> {
    let datum = load_datum(&cli.global)?;
    if let Some(h) = cli.global.height {
        if h < 0 {
            return Err(CliError::Usage(format!(
                "--height must be nonnegative, got {h}"
            )));
        }
    }
    let mut violations = datum.validate_datum();
    if violations.is_empty() {
        violations.extend(datum.validate_params());
    }
    let ctx = Context {
        datum,
        args: cli.global.clone(),
        violations,
    };
    if let Command::Validate = cli.command {
        let node = commands::validate(&ctx);
        let code = if ctx.violations.is_empty() {
            EXIT_OK
        } else {
            EXIT_VALIDATION
        };
        return Ok((node, code));
    }
    if !ctx.violations.is_empty() {
        let msg = ctx
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(CliError::Validation(format!(
            "invalid datum {}: {msg}",
            ctx.datum.name
        )));
    }
    let pool = thread_pool()?;
    let node = pool.install(|| match &cli.command {
        Command::Validate => unreachable!(),
        Command::Upsilon => commands::upsilon(&ctx),
        Command::Theta => commands::theta(&ctx),
        Command::ThetaI => commands::theta_i(&ctx),
        Command::Idp { index, max } => commands::idp(&ctx, *index, *max),
        Command::Module { lambda } => commands::module(&ctx, lambda.as_deref()),
        Command::Icb { lambda, mu } => commands::icb(&ctx, *lambda, *mu),
        Command::Stabilize {
            b1,
            b2,
            zeta,
            steps,
        } => commands::stabilize(&ctx, *b1, *b2, *zeta, *steps),
        Command::Verify => verify::verify(&ctx),
    })?;
    Ok((node, EXIT_OK))
}

/// Parses `argv` (including the program name), runs, writes the report and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_USAGE,
                _ => {
                    eprintln!("\n{}", Cli::command().render_help());
                    EXIT_USAGE
                }
            };
        }
    };
    let cmd = cli.command.name();
    let renderer = Renderer {
        format: cli.global.format,
        pi: cli.global.pi,
    };
    let outcome = execute(&cli).and_then(|(node, code)| {
        let title = format!("{cmd} {}", cli.global.datum);
        write_output(cli.global.out.as_ref(), &renderer.render(&title, &node))?;
        if code == EXIT_VALIDATION {
            if let Some(Node::List(v)) = node.get("violations") {
                for x in v {
                    if let (Some(Node::Str(c)), Some(Node::Str(d))) =
                        (x.get("condition"), x.get("detail"))
                    {
                        eprintln!("invalid datum: {c}: {d}");
                    }
                }
            }
        }
        Ok(code)
    });
    match outcome {
        Ok(code) => code,
        Err(CliError::Assertion(f)) => {
            for x in &f {
                eprintln!("assertion failed: {}: {}", x.check, x.detail);
            }
            match write_output(
                cli.global.out.as_ref(),
                &failure_report(cmd, &cli.global.datum, &f),
            ) {
                Ok(()) => EXIT_ASSERTION,
                Err(e) => {
                    eprintln!("error: {e:?}");
                    EXIT_IO
                }
            }
        }
        Err(e) => {
            let code = e.code();
            match &e {
                CliError::Usage(m) => {
                    eprintln!("error: {m}");
                    let mut c = Cli::command();
                    c.build();
                    if let Some(s) = c.find_subcommand_mut(cmd) {
                        eprintln!("\n{}", s.render_help());
                    }
                }
                CliError::Validation(m) => eprintln!("error: {m}"),
                CliError::Io(m) => eprintln!("I/O error: {m}"),
                CliError::Assertion(_) => unreachable!(),
            }
            code
        }
    }
}
