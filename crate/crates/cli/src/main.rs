//! `hyplatt` command-line front end.
//!
//! Every subcommand produces one table, written as CSV (default) or JSON to
//! stdout or `--out`. A run manifest goes to stderr or `--manifest`.
//! Exit codes: 0 success, 2 usage, 3 data or validation, 4 numeric contract.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::collections::BTreeMap;
use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hyplatt::{GroupModel, Point};
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

#[derive(Parser, Debug)]
#[command(name = "hyplatt", version, about = "Hyperbolic lattice point counts, error terms and spectral checks")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the run manifest here instead of stderr.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

fn display<S: Serializer, T: Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(clap::Args, Debug, Serialize)]
pub struct Pair {
    /// Group: psl2z, gamma0:N or gammaN:N.
    #[arg(long, default_value = "psl2z")]
    #[serde(serialize_with = "display")]
    pub group: GroupModel,
    /// First point as x,y.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    #[serde(serialize_with = "display")]
    pub z: Point,
    /// Second point as x,y.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    #[serde(serialize_with = "display")]
    pub w: Point,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// N(X; z, w) at every orbit value up to --xmax, or on a geometric grid.
    Count {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        xmax: f64,
        /// `geometric:RATIO` or `linear:STEP` from 2; default is every orbit value.
        #[arg(long, value_parser = commands::parse_grid)]
        #[serde(serialize_with = "commands::display_opt")]
        grid: Option<commands::GridSpec>,
    },
    /// N, main term, E, e and e/sqrt(X) on the grid 2·ratio^k.
    Error {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        xmax: f64,
        #[arg(long, default_value_t = 1.01)]
        ratio: f64,
        /// Maass registry for small eigenvalues and t = 0 forms.
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// The averaged error M(X) on the grid 2·ratio^k, k ≥ 1.
    Average {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        xmax: f64,
        #[arg(long, default_value_t = 1.01)]
        ratio: f64,
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Phillips–Rudnick mean at z for each T.
    PrMean {
        #[arg(long, default_value = "psl2z")]
        #[serde(serialize_with = "display")]
        group: GroupModel,
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        #[serde(serialize_with = "display")]
        z: Point,
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Truncated spectral model of M(e^R) with its error budget.
    SpectralM {
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        #[serde(serialize_with = "display")]
        z: Point,
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        #[serde(serialize_with = "display")]
        w: Point,
        #[arg(long = "R", value_delimiter = ',', required = true)]
        r: Vec<f64>,
        #[arg(long = "A")]
        a: f64,
        #[arg(long)]
        registry: PathBuf,
        /// Also compute M(e^R) from the lattice count.
        #[arg(long)]
        with_average: bool,
    },
    /// h_X(t) by quadrature and asymptotics, with A(X).
    Transform {
        #[arg(long = "x", visible_alias = "X", value_delimiter = ',', required = true)]
        x: Vec<f64>,
        #[arg(long = "t", value_delimiter = ',', default_value = "1")]
        t: Vec<f64>,
    },
    /// The three Gamma sign quantities on (0, tmax]; the threshold c goes to the manifest.
    Signs {
        #[arg(long, default_value_t = 5.0)]
        tmax: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Loads a Maass registry and optionally evaluates each form at a point.
    MaassLoad {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        #[serde(serialize_with = "commands::display_opt")]
        eval: Option<Point>,
    },
    /// E(z, 1/2 + it) and φ(1/2 + it).
    Eisenstein {
        #[arg(long, allow_hyphen_values = true)]
        #[serde(serialize_with = "display")]
        z: Point,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        t: Vec<f64>,
    },
    /// Local Weyl sums at z.
    Weyl {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        #[serde(serialize_with = "display")]
        z: Point,
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// R ≥ M with |e^{i r_j R} − 1| < 1/T for all j.
    Dirichlet {
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<f64>,
        #[arg(long = "M")]
        m: f64,
        #[arg(long = "T")]
        t: f64,
    },
    /// Convolves a uniform (R, value) series with the triangle mollifier.
    Mollify {
        #[arg(long)]
        eps: f64,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Mollified e(e^R)/e^{R/2} over a window, with extremes and sign counts.
    OmegaScan {
        #[command(flatten)]
        pair: Pair,
        /// Window as R1:R2.
        #[arg(long, value_parser = commands::parse_window)]
        window: (f64, f64),
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Emit the mollified series instead of the summary.
        #[arg(long)]
        series: bool,
    },
}

#[derive(Serialize)]
struct Manifest<'a> {
    command_line: Vec<String>,
    parameters: &'a Command,
    version: &'static str,
    threads: usize,
    data_files: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    notes: BTreeMap<&'static str, f64>,
    wall_clock_seconds: f64,
    output_sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("HYPLATT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| format!("HYPLATT_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

/// Maps an error chain onto the exit-code contract.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<hyplatt::Error>() {
            return match e {
                hyplatt::Error::Domain(_) => 2,
                e if e.is_data_error() => 3,
                _ => 4,
            };
        }
        if cause.is::<std::io::Error>() || cause.is::<csv::Error>() || cause.is::<commands::DataError>() {
            return 3;
        }
    }
    4
}

fn run(cli: &Cli) -> Result<()> {
    let start = Instant::now();
    let outcome = commands::dispatch(&cli.command)?;
    let text = match cli.format {
        Format::Csv => outcome.table.to_csv(),
        Format::Json => outcome.table.to_json(),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    let manifest = Manifest {
        command_line: std::env::args().collect(),
        parameters: &cli.command,
        version: env!("CARGO_PKG_VERSION"),
        threads: rayon::current_num_threads(),
        data_files: outcome.data_files,
        notes: outcome.notes,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        output_sha256: sha256_hex(text.as_bytes()),
    };
    let json = serde_json::to_string_pretty(&manifest)? + "\n";
    match &cli.manifest {
        Some(path) => std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stderr().write_all(json.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
