//! `consim` command line.
//!
//! ```text
//! consim run --config FILE [--replications N] [--seed S] [--out FILE.csv] [--trace FILE]
//! consim validate --config FILE
//! consim demo
//! ```
//!
//! Exit codes: 0 success, 1 invalid configuration or failed run, 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::experiment::{export_csv, run_experiment, run_replication, write_csv, ExperimentResult};
use crate::model::{validate_config, ModelConfig, ModelKind};
use crate::stochastic::mean_of;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "consim", version, about = "Consanguinity population simulation on a Classic DEVS kernel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run seeded replications and write the aggregated report.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        replications: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Event trace of replication 0, tab separated.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check a configuration file and list every violation.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the population growth submodel with default parameters.
    Demo,
}

/// Entry point used by the binary. Returns the process exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match cli.command {
        Command::Run {
            config,
            replications,
            seed,
            out,
            trace,
        } => run(&config, replications, seed, out.as_deref(), trace.as_deref()),
        Command::Validate { config } => validate(&config),
        Command::Demo => demo(),
    }
}

fn load(path: &Path) -> Result<ModelConfig, i32> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_USAGE
    })?;
    ModelConfig::from_json(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_INVALID
    })
}

fn validate(path: &Path) -> i32 {
    let config = match load(path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let violations = validate_config(&config);
    if violations.is_empty() {
        println!("{}: ok", path.display());
        EXIT_OK
    } else {
        for v in &violations {
            println!("{v}");
        }
        EXIT_INVALID
    }
}

fn run(path: &Path, replications: Option<u64>, seed: Option<u64>, out: Option<&Path>, trace: Option<&Path>) -> i32 {
    let mut config = match load(path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if let Some(n) = replications {
        config.replications = n;
    }
    if let Some(s) = seed {
        config.base_seed = s;
    }
    let result = match run_experiment(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };

    let written = match out {
        Some(p) => export_csv(&result, p).map_err(|e| e.to_string()),
        None => write_csv(&result.rows, io::stdout().lock()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_INVALID;
    }
    if let Some(p) = trace {
        if let Err(e) = write_trace(&config, p) {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    }
    summarize(&result, &mut io::stderr().lock());
    EXIT_OK
}

fn write_trace(config: &ModelConfig, path: &Path) -> Result<(), String> {
    let (_, trace) = run_replication(config, 0, true).map_err(|e| e.to_string())?;
    let file = fs::File::create(path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    let mut w = BufWriter::new(file);
    trace
        .unwrap_or_default()
        .write_tsv(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn summarize(result: &ExperimentResult, w: &mut impl Write) {
    let n = result.replications.len();
    let _ = writeln!(w, "replications: {n}, base seed: {}", result.metadata.base_seed);
    for label in ["MP", "FP", "Child_C", "Child_NC", "Child"] {
        let total: u64 = result.replications.iter().map(|r| r.labeled(label)).sum();
        if total == 0 {
            continue;
        }
        let (destroyed, affected) = result
            .replications
            .iter()
            .map(|r| r.destroyed_and_affected(label))
            .fold((0, 0), |(d, a), (x, y)| (d + x, a + y));
        if label.starts_with("Child_") && destroyed > 0 {
            let _ = writeln!(
                w,
                "{label}: {total} created, {affected} affected ({:.3e})",
                affected as f64 / destroyed as f64
            );
        } else {
            let _ = writeln!(w, "{label}: {total} created");
        }
    }
}

/// Mean children per marriage in the population growth submodel.
pub fn demo_summary() -> Result<(u64, u64, f64), String> {
    let config = ModelConfig {
        model: ModelKind::PopulationGrowth,
        ..ModelConfig::default()
    };
    let result = run_experiment(&config).map_err(|e| e.to_string())?;
    let marriages: u64 = result
        .replications
        .iter()
        .filter_map(|r| r.object("PopulationGrowth"))
        .map(|s| s.processed)
        .sum();
    let children: u64 = result.replications.iter().map(|r| r.labeled("Child")).sum();
    Ok((marriages, children, children as f64 / marriages.max(1) as f64))
}

fn demo() -> i32 {
    match demo_summary() {
        Ok((marriages, children, mean)) => {
            let expected = mean_of(&ModelConfig::default().offspring_distribution);
            println!("population growth submodel, default parameters");
            println!("marriages: {marriages}");
            println!("children:  {children}");
            println!("mean children per marriage: {mean:.4} (distribution mean {expected:.4})");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}
