//! Command-line front end for `genmetric`.
//!
//! Every subcommand builds a report, prints it as text or (with `--json`) as a
//! single JSON document with sorted keys, and maps the outcome to an exit code:
//! 0 for passing verdicts, 1 for negative verdicts and 2 for usage or input
//! errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use genmetric::space::Tolerance;
use serde_json::Value;

mod commands;
mod solve;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "genmetric",
    version,
    about = "Check, build and explore generalized metric spaces"
)]
pub struct Cli {
    /// Absolute tolerance for every numerical comparison.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every axiom of a space's declared kind.
    Check {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Apply a construction and print the resulting space file.
    Derive {
        #[arg(value_enum)]
        construction: Construction,
        #[command(flatten)]
        space: SpaceArgs,
        /// Target arity for `lift`.
        #[arg(long)]
        n: Option<usize>,
        /// Shift constant for `shift`.
        #[arg(long, allow_hyphen_values = true)]
        r: Option<f64>,
    },
    /// Score words under a gap alignment scheme.
    Align {
        /// Scheme JSON file.
        #[arg(long)]
        scheme: PathBuf,
        /// Plain text word list, one word per line.
        #[arg(long)]
        words: Option<PathBuf>,
        /// Print the alignment space of this arity over the words instead.
        #[arg(long, value_name = "N")]
        as_space: Option<usize>,
        /// Inline words, after any read from `--words`.
        #[arg(value_name = "WORD")]
        inline: Vec<String>,
    },
    /// Generate the ball topology and report separation.
    Topology {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Classify a finite sequence prefix as Cauchy and test limit candidates.
    Sequence(SequenceArgs),
    /// Run a fixed, common fixed or coincidence point procedure.
    Solve(SolveArgs),
    /// List the built-in spaces, or print one as a space file.
    Catalog {
        /// Catalog name; lists the catalog when absent.
        name: Option<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Vec<f64>,
        /// List the built-in maps instead of the spaces.
        #[arg(long, conflicts_with = "name")]
        maps: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    /// Metric induced by a partial (n-)metric.
    Induce,
    /// Pairwise-sum lift of a pairwise kind to arity `--n`.
    Lift,
    /// Strong partial (n-)metric obtained by adding `--r` to every value.
    Shift,
}

/// Where a finite space comes from.
#[derive(Debug, Clone, Args)]
pub struct SpaceArgs {
    /// Space JSON file.
    #[arg(long, conflicts_with = "catalog")]
    pub space: Option<PathBuf>,
    /// Catalog space name.
    #[arg(long)]
    pub catalog: Option<String>,
    /// Catalog parameters, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        requires = "catalog"
    )]
    pub params: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SequenceArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// JSON array of point labels in the finite space.
    #[arg(long, conflicts_with = "points_file")]
    pub points: Option<String>,
    /// File holding a JSON array of point labels.
    #[arg(long)]
    pub points_file: Option<PathBuf>,
    /// Closed-form real family; the sequence is the orbit of `--map` from `--x0`.
    #[arg(long, conflicts_with_all = ["space", "catalog", "points", "points_file"])]
    pub real: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub arity: usize,
    /// Built-in map generating the orbit.
    #[arg(long, requires = "real")]
    pub map: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub map_params: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Number of terms of the orbit.
    #[arg(long, default_value_t = 31)]
    pub len: usize,
    /// Limit candidate to test; repeatable.
    #[arg(long = "limit", allow_hyphen_values = true)]
    pub limits: Vec<String>,
    #[arg(long)]
    pub window: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Problem description in JSON.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub window: Option<usize>,
    /// Contraction constant.
    #[arg(long)]
    pub c: Option<f64>,
    /// Central distance.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
}

/// A finished command: its report and whether the verdict was positive.
pub(crate) struct Report {
    pub json: Value,
    pub text: String,
    pub passed: bool,
}

/// Parses `args` (including the program name), runs the command and writes
/// the report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let printed = if cli.json {
                serde_json::to_string_pretty(&report.json).map(|s| s + "\n")
            } else {
                Ok(report.text)
            };
            match printed
                .map_err(anyhow::Error::from)
                .and_then(|s| Ok(out.write_all(s.as_bytes())?))
            {
                Ok(()) if report.passed => EXIT_PASS,
                Ok(()) => EXIT_FAIL,
                Err(e) => {
                    let _ = writeln!(err, "error: {e:#}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<Report> {
    let tol = Tolerance::new(cli.tol)?;
    match &cli.command {
        Command::Check { space } => commands::check(space, tol),
        Command::Derive {
            construction,
            space,
            n,
            r,
        } => commands::derive(*construction, space, *n, *r),
        Command::Align {
            scheme,
            words,
            as_space,
            inline,
        } => commands::align(scheme, words.as_deref(), *as_space, inline),
        Command::Topology { space } => commands::topology(space),
        Command::Sequence(args) => commands::sequence(args, tol),
        Command::Solve(args) => solve::solve(args, tol),
        Command::Catalog { name, params, maps } => {
            commands::catalog(name.as_deref(), params, *maps)
        }
    }
}
