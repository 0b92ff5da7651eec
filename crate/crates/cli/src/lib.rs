//! The `preper` command line: parse maps and points, run analyses, print
//! text or JSON reports.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use preper_core::dynamics::{OrbitBudget, DEFAULT_NODE_BUDGET, DEFAULT_SEARCH_BUDGET};
use preper_core::sunit::DEFAULT_UNIT_BUDGET;
use preper_core::{Error, FpPolyRing, Integers};

mod commands;
pub mod report;

pub use report::Report;

/// Base field of the computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    FunctionField(u64),
}

impl FromStr for FieldSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let p = s
            .strip_prefix("Fp:")
            .ok_or_else(|| format!("expected Q or Fp:<prime>, got {s:?}"))?;
        p.parse()
            .map(FieldSpec::FunctionField)
            .map_err(|_| format!("bad prime {p:?}"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "preper",
    version,
    about = "Periodic and preperiodic points of rational maps over Q and Fp(t)"
)]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct FieldArg {
    /// `Q` or `Fp:<prime>` for the rational function field over F_p.
    #[arg(long, default_value = "Q")]
    pub field: FieldSpec,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Iteration limit per orbit.
    #[arg(long, default_value_t = OrbitBudget::DEFAULT_MAX_STEPS)]
    pub max_steps: usize,

    /// Height at which an orbit is abandoned (field default when omitted).
    #[arg(long)]
    pub height_cap: Option<BigUint>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree, resultant, bad places and bounds of a map.
    Analyze {
        #[command(flatten)]
        field: FieldArg,
        #[arg(allow_hyphen_values = true)]
        map: String,
        /// Places of S as comma-separated tokens (`inf`, `p:7`, `pi:1,0,1`).
        #[arg(long = "S")]
        places: Option<String>,
    },
    /// Forward orbit of one point.
    Orbit {
        #[command(flatten)]
        field: FieldArg,
        #[arg(allow_hyphen_values = true)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long = "S")]
        places: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// All preperiodic points up to a height.
    Search {
        #[command(flatten)]
        field: FieldArg,
        #[arg(allow_hyphen_values = true)]
        map: String,
        #[arg(long, default_value_t = 10)]
        height: u64,
        #[arg(long = "S")]
        places: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Maximum number of starting points.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        cap: u64,
    },
    /// Functional graph of the reduction at a place.
    Graph {
        #[command(flatten)]
        field: FieldArg,
        #[arg(allow_hyphen_values = true)]
        map: String,
        #[arg(long)]
        place: String,
        /// Maximum number of graph nodes.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        cap: u64,
    },
    /// Orbit, cycle, residue field and unit equation bounds.
    Bounds {
        /// Characteristic: 0 or a prime.
        #[arg(long = "char")]
        characteristic: u64,
        /// Degree of the field over Q or F_p(t).
        #[arg(long, default_value_t = 1)]
        degree: u32,
        /// Number of places in S.
        #[arg(long)]
        s: u64,
        #[arg(long)]
        map_degree: Option<u64>,
    },
    /// Solutions of a x + b y = 1 in S-units with bounded exponents.
    SunitSolve {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long = "S")]
        places: String,
        #[arg(long, default_value_t = 4)]
        cap: u32,
    },
    /// Sweep z^2 + c (or maps read from a file) and check cycle and orbit
    /// bounds for maps with good reduction everywhere.
    VerifyCorollary3 {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
        c_min: i64,
        #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
        c_max: i64,
        #[arg(long, default_value_t = 50)]
        height: u64,
        /// One map per line; `#` starts a comment.
        #[arg(long)]
        file: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

/// Exit status for a failed invocation.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Computation(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(_) | Error::Unsupported(_) | Error::UnsupportedPlace(_) => {
                Failure::Computation(e)
            }
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Computation(_) => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Computation(Error::Budget(_)) => "budget",
            Failure::Computation(_) => "unsupported",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Computation(e) => e.to_string(),
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Report, Failure> {
    use commands::*;
    macro_rules! with_ring {
        ($field:expr, $ring:ident => $body:expr) => {
            match $field.field {
                FieldSpec::Rationals => {
                    let $ring = &Integers;
                    $body
                }
                FieldSpec::FunctionField(p) => {
                    let $ring = &FpPolyRing::new(p)?;
                    $body
                }
            }
        };
    }
    match &cli.command {
        Command::Analyze { field, map, places } => {
            with_ring!(field, r => analyze(r, map, places.as_deref()))
        }
        Command::Orbit {
            field,
            map,
            point,
            places,
            budget,
        } => {
            with_ring!(field, r => orbit(r, map, point, places.as_deref(), budget))
        }
        Command::Search {
            field,
            map,
            height,
            places,
            budget,
            cap,
        } => {
            with_ring!(field, r => search(r, map, *height, places.as_deref(), budget, *cap))
        }
        Command::Graph {
            field,
            map,
            place,
            cap,
        } => with_ring!(field, r => graph(r, map, place, *cap)),
        Command::Bounds {
            characteristic,
            degree,
            s,
            map_degree,
        } => bounds(*characteristic, *degree, *s, *map_degree),
        Command::SunitSolve {
            field,
            a,
            b,
            places,
            cap,
        } => {
            with_ring!(field, r => sunit_solve(r, a, b, places, *cap, DEFAULT_UNIT_BUDGET))
        }
        Command::VerifyCorollary3 {
            field,
            c_min,
            c_max,
            height,
            file,
            budget,
        } => match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
                with_ring!(field, r => sweep_corpus(r, &text, *height, budget))
            }
            None if field.field == FieldSpec::Rationals => {
                sweep_quadratics(*c_min, *c_max, *height, budget)
            }
            None => Err(Failure::Usage(
                "the z^2 + c sweep runs over Q; pass --file for other fields".into(),
            )),
        },
    }
}

/// Runs one invocation, writing the report to `out` and diagnostics to
/// `err`, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let body = if cli.json {
                report.to_json() + "\n"
            } else {
                report.to_text()
            };
            let _ = out.write_all(body.as_bytes());
            if report.violations() > 0 {
                let _ = writeln!(err, "error: {} bound violations", report.violations());
                3
            } else {
                0
            }
        }
        Err(f) => {
            if cli.json {
                let diag =
                    serde_json::json!({ "error": { "kind": f.kind(), "message": f.message() } });
                let _ = writeln!(err, "{diag}");
            } else {
                let _ = writeln!(err, "error: {}", f.message());
            }
            f.exit_code()
        }
    }
}
