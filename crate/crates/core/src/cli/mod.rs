//! The `threshold-sim` command line.
//!
//! Every subcommand accepts `--config <file.json>`: a JSON object whose
//! keys are the subcommand's long flag names (`-` spelled `_`). Flags
//! given on the command line take precedence over the document.
//!
//! Exit status: 0 on success, 1 for invalid input, 2 for runtime failures
//! (infeasible topologies, I/O), 3 when an analysis finds no answer
//! (no α_crit crossing, effective size out of range, degenerate
//! correlation).

mod args;
mod commands;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
pub use args::*;

#[derive(Debug, Parser)]
#[command(name = "threshold-sim", version, about = "Threshold games on structured populations")]
pub struct Cli {
    /// JSON document with default values for the subcommand's flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for independent runs.
    #[arg(long, global = true, env = "THRESHOLD_SIM_WORKERS")]
    pub workers: Option<usize>,
    /// Progress on standard error (repeat for more).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph and print its edge list and structure metrics.
    Net(NetArgs),
    /// Mean-field fixed points and the insufficiency probability.
    Meanfield(MeanfieldArgs),
    /// A single simulation.
    Run(RunArgs),
    /// Cooperation against α and the collapse point α_crit.
    Sweep(SweepArgs),
    /// Effective fully mixed population size of networks.
    Leff(LeffArgs),
    /// α_crit against match size on random regular graphs.
    Ndep(NdepArgs),
    /// Cooperation against noise amplitude.
    Noise(NoiseArgs),
}

/// Progress reporting to standard error.
pub struct Log {
    level: u8,
}

impl Log {
    pub fn info(&self, args: fmt::Arguments<'_>) {
        if self.level > 0 {
            eprintln!("{args}");
        }
    }
}

/// Exit status for a failed command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidParameter { .. }
        | Error::ConfigMismatch(_)
        | Error::ThresholdExceedsMatch { .. }
        | Error::EdgeList { .. } => 1,
        Error::InfeasibleTopology { .. } | Error::Io { .. } => 2,
        Error::NoCrossing { .. } | Error::OutOfRange { .. } | Error::DegenerateVariance(_) => 3,
    }
}

fn read_document(path: &Path) -> Result<Map<String, Value>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(Error::invalid("config", "document must be a JSON object")),
        Err(e) => Err(Error::invalid("config", e.to_string())),
    }
}

/// Overlays explicitly given flags on the document's values.
pub fn merge<T: Serialize + DeserializeOwned>(flags: &T, doc: &Map<String, Value>) -> Result<T> {
    let Value::Object(given) = serde_json::to_value(flags).map_err(|e| Error::invalid("config", e.to_string()))? else {
        unreachable!("flag structs serialize to objects")
    };
    if let Some(key) = doc.keys().find(|k| !given.contains_key(*k)) {
        return Err(Error::InvalidParameter {
            field: "config",
            reason: format!("unknown key `{key}` for this subcommand"),
        });
    }
    let mut merged = doc.clone();
    for (k, v) in given {
        if !(v.is_null() || v == Value::Bool(false)) {
            merged.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| Error::invalid("config", e.to_string()))
}

fn resolve<T: Serialize + DeserializeOwned>(flags: T, doc: &Option<Map<String, Value>>) -> Result<T> {
    match doc {
        Some(doc) => merge(&flags, doc),
        None => Ok(flags),
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let mut doc = cli.config.as_deref().map(read_document).transpose()?;
    let doc_workers = match doc.as_mut().and_then(|d| d.remove("workers")) {
        Some(v) => Some(
            v.as_u64()
                .ok_or_else(|| Error::invalid("workers", "must be a positive integer"))? as usize,
        ),
        None => None,
    };
    let workers = cli.workers.or(doc_workers);
    let log = Log { level: cli.verbose };

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::invalid("workers", "must be positive"));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool.build().map_err(|e| Error::invalid("workers", e.to_string()))?;

    pool.install(|| match cli.command {
        Command::Net(a) => commands::net(resolve(a, &doc)?, &log),
        Command::Meanfield(a) => commands::meanfield(resolve(a, &doc)?),
        Command::Run(a) => commands::run(resolve(a, &doc)?, &log),
        Command::Sweep(a) => commands::sweep(resolve(a, &doc)?, &log),
        Command::Leff(a) => commands::leff(resolve(a, &doc)?, &log),
        Command::Ndep(a) => commands::ndep(resolve(a, &doc)?, &log),
        Command::Noise(a) => commands::noise(resolve(a, &doc)?, &log),
    })
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
