//! `wielandt analyze | generate | scan`.
//!
//! Exit codes: 0 clean, 1 runtime failure, 2 unreadable input or invalid
//! arguments, 3 bound violation or anomaly (the report is still written).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wielandt::analysis::{self, AnalyzeOptions};
use wielandt::generators::{self, EnsembleSpec, Family};
use wielandt::io::{self, MapFile};
use wielandt::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "wielandt", version, about = "Primitivity indices and multiplicative domains of maps on M_D")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a map file and emit a JSON report.
    Analyze {
        file: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Relative Choi eigenvalue floor for complete positivity.
        #[arg(long)]
        tol_psd: Option<f64>,
        /// Relative singular-value threshold for word-span ranks.
        #[arg(long)]
        tol_rank: Option<f64>,
        /// Search cap for q on maps without Schwarz or 2-positivity credentials.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Write one member of a family as a map file with provenance.
    Generate {
        family: Family,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        kraus: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Analyze every member of an ensemble and write one CSV row each.
    Scan {
        spec: PathBuf,
        #[arg(long)]
        csv: PathBuf,
        /// Worker threads; defaults to the number of processors.
        #[arg(long)]
        jobs: Option<usize>,
        /// Overrides the seed in the ensemble file.
        #[arg(long = "seed-override", env = "WIELANDT_SEED", hide = true)]
        seed_override: Option<u64>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }

    fn runtime(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_FAILURE,
            message: e.to_string(),
        }
    }
}

/// Unreadable or malformed input maps to the input exit code.
fn classify(e: Error) -> Failure {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::Io(_) => Failure::input(e),
        Error::DimensionMismatch { .. }
        | Error::DimensionTooSmall(_)
        | Error::NotSquare { .. }
        | Error::EmptyKraus
        | Error::InvalidEnsemble(_) => Failure::input(e),
        other => Failure::runtime(other),
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))
}

fn analyze(file: &Path, out: Option<&Path>, tol_psd: Option<f64>, tol_rank: Option<f64>, cap: Option<usize>) -> Result<u8, Failure> {
    let phi = io::read_map(file).map_err(|e| {
        let f = classify(e);
        Failure {
            message: format!("{}: {}", file.display(), f.message),
            ..f
        }
    })?;
    let mut opts = AnalyzeOptions {
        cap,
        ..AnalyzeOptions::default()
    };
    if let Some(x) = tol_psd {
        opts.tol.psd_rel = x;
    }
    if let Some(x) = tol_rank {
        opts.tol.rank_rel = x;
    }
    let report = analysis::analyze(&phi, &opts);
    let json = serde_json::to_string_pretty(&report).map_err(Failure::runtime)? + "\n";
    match out {
        Some(p) => write_text(p, &json)?,
        None => print!("{json}"),
    }
    Ok(if report.clean() { 0 } else { EXIT_VIOLATION })
}

fn generate(family: Family, dim: usize, kraus: usize, seed: u64, out: &Path) -> Result<u8, Failure> {
    let g = generators::generate(family, dim, kraus, seed).map_err(classify)?;
    let mut file = MapFile::from_superop(&g.map);
    file.metadata = serde_json::json!({});
    file.provenance = Some(g.provenance);
    io::write_map(out, &file).map_err(classify)?;
    Ok(0)
}

fn scan(spec_path: &Path, csv: &Path, jobs: Option<usize>, seed_override: Option<u64>) -> Result<u8, Failure> {
    let text = fs::read_to_string(spec_path).map_err(|e| Failure::input(format!("{}: {e}", spec_path.display())))?;
    let mut spec: EnsembleSpec =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", spec_path.display())))?;
    if let Some(s) = seed_override {
        spec.seed = s;
    }
    let result = analysis::scan(&spec, &AnalyzeOptions::default(), jobs).map_err(classify)?;
    write_text(csv, &result.to_csv().map_err(Failure::runtime)?)?;
    for i in &result.instances {
        if let Some(e) = &i.error {
            eprintln!("seed {}: {e}", i.seed);
        }
    }
    let clean = result.violations == 0 && result.errors == 0;
    Ok(if clean { 0 } else { EXIT_VIOLATION })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Analyze {
            file,
            out,
            tol_psd,
            tol_rank,
            cap,
        } => analyze(&file, out.as_deref(), tol_psd, tol_rank, cap),
        Command::Generate {
            family,
            dim,
            kraus,
            seed,
            out,
        } => generate(family, dim, kraus, seed, &out),
        Command::Scan {
            spec,
            csv,
            jobs,
            seed_override,
        } => scan(&spec, &csv, jobs, seed_override),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
