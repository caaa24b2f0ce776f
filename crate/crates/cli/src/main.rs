//! `veechkit` command-line frontend. Reports are JSON on stdout; a one-line
//! summary goes to stderr. Exit codes: 0 success, 1 a mathematical check
//! failed, 2 invalid input.

mod commands;
mod input;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use veechkit::affine::DEFAULT_ORBIT_CAP;
use veechkit::flow::DEFAULT_MAX_SEPARATRIX_CROSSINGS;
use veechkit::scalar::{interval_precision, set_interval_precision};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Math(String),
}

#[derive(Parser, Debug)]
#[command(name = "veechkit", version, about = "Exact computations on flat surfaces and their Veech groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Genus, cone points and area of a surface.
    Analyze {
        input: String,
        /// Also compute the Veech group, section candidates and bounds.
        #[arg(long)]
        pipeline: bool,
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        orbit_cap: usize,
        #[arg(long, default_value_t = 6)]
        word_length: usize,
    },
    /// Cylinder decomposition in a direction.
    Cylinders {
        input: String,
        #[arg(long, value_name = "DX,DY", allow_hyphen_values = true)]
        direction: String,
        /// Separatrix crossing bound.
        #[arg(long, default_value_t = DEFAULT_MAX_SEPARATRIX_CROSSINGS)]
        max: usize,
    },
    /// Veech group of a square-tiled surface, or checks of given elements.
    Veech {
        input: String,
        /// Matrices `a,b,c,d` separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        check: Option<String>,
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        orbit_cap: usize,
    },
    /// Affine automorphisms with derivative plus or minus the identity.
    Kernel { input: String },
    /// Points fixed up to the kernel by every Veech group generator.
    Sections {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        check: Option<String>,
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        orbit_cap: usize,
    },
    /// Counting bounds and the inequalities behind them.
    Bounds {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        check: Option<String>,
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        orbit_cap: usize,
        /// Word length for the cusp estimates.
        #[arg(long, default_value_t = 6)]
        word_length: usize,
    },
    /// Ford region, Shimizu check and short elements of a Fuchsian group.
    Ford {
        /// JSON list of 4-tuples.
        #[arg(long)]
        generators: String,
        #[arg(long, default_value_t = 6)]
        word_length: usize,
    },
    /// Sections of the curve family through Weierstrass points.
    Dioph {
        #[arg(long)]
        family: u32,
        /// A solution `X;Y;Z` to verify, components polynomial in `t` and `zeta`.
        #[arg(long, allow_hyphen_values = true)]
        verify: Option<String>,
    },
    /// Print a built-in surface.
    Corpus {
        key: String,
        /// Rerun the exhaustive search that selected the surface.
        #[arg(long)]
        rederive: bool,
    },
}

fn command_echo(c: &Command) -> Value {
    match c {
        Command::Analyze { input, pipeline, orbit_cap, word_length } => json!({
            "name": "analyze", "input": input, "pipeline": pipeline, "orbit_cap": orbit_cap, "word_length": word_length,
        }),
        Command::Cylinders { input, direction, max } => {
            json!({"name": "cylinders", "input": input, "direction": direction, "max": max})
        }
        Command::Veech { input, check, orbit_cap } => {
            json!({"name": "veech", "input": input, "check": check, "orbit_cap": orbit_cap})
        }
        Command::Kernel { input } => json!({"name": "kernel", "input": input}),
        Command::Sections { input, check, orbit_cap } => {
            json!({"name": "sections", "input": input, "check": check, "orbit_cap": orbit_cap})
        }
        Command::Bounds { input, check, orbit_cap, word_length } => {
            json!({"name": "bounds", "input": input, "check": check, "orbit_cap": orbit_cap, "word_length": word_length})
        }
        Command::Ford { generators, word_length } => {
            json!({"name": "ford", "generators": generators, "word_length": word_length})
        }
        Command::Dioph { family, verify } => json!({"name": "dioph", "family": family, "verify": verify}),
        Command::Corpus { key, rederive } => json!({"name": "corpus", "key": key, "rederive": rederive}),
    }
}

fn run(c: &Command) -> Result<commands::Outcome, CliError> {
    match c {
        Command::Analyze { input, pipeline, orbit_cap, word_length } => {
            commands::analyze(input, *pipeline, *orbit_cap, *word_length)
        }
        Command::Cylinders { input, direction, max } => commands::cylinders(input, direction, *max),
        Command::Veech { input, check, orbit_cap } => commands::veech(input, check.as_deref(), *orbit_cap),
        Command::Kernel { input } => commands::kernel(input),
        Command::Sections { input, check, orbit_cap } => commands::sections(input, check.as_deref(), *orbit_cap),
        Command::Bounds { input, check, orbit_cap, word_length } => {
            commands::bounds(input, check.as_deref(), *orbit_cap, *word_length)
        }
        Command::Ford { generators, word_length } => commands::ford(generators, *word_length),
        Command::Dioph { family, verify } => commands::dioph_cmd(*family, verify.as_deref()),
        Command::Corpus { key, rederive } => commands::corpus_cmd(key, *rederive),
    }
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(bits) = std::env::var("VEECHKIT_PRECISION") {
        match bits.trim().parse::<u32>() {
            Ok(b) if b >= 8 => set_interval_precision(b),
            _ => {
                eprintln!("error: VEECHKIT_PRECISION must be an integer of at least 8, got {bits:?}");
                return ExitCode::from(2);
            }
        }
    }
    let echo = command_echo(&cli.command);
    let version = env!("CARGO_PKG_VERSION");
    match run(&cli.command) {
        Ok(out) => {
            let mut warnings = out.warnings;
            if out.backend == Some(veechkit::Field::Interval) {
                warnings.push(format!(
                    "interval backend: signs certified at {} bits or more, with up to {} precision doublings",
                    interval_precision(),
                    veechkit::scalar::MAX_PRECISION_RETRIES
                ));
            }
            print(&json!({
                "command": echo,
                "version": version,
                "backend": out.backend.map(|f| f.name()),
                "ok": out.ok,
                "results": out.results,
                "warnings": warnings,
            }));
            eprintln!("{}{}", out.summary, if out.ok { "" } else { " (check failed)" });
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            let (kind, msg, code) = match e {
                CliError::Input(m) => ("input", m, 2),
                CliError::Math(m) => ("verdict", m, 1),
            };
            print(&json!({"command": echo, "version": version, "ok": false, "error": {"kind": kind, "message": msg}}));
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
