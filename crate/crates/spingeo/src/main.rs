use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spingeo::cli::{
    self, cmd_angle, cmd_distance, cmd_spectra, cmd_sweep, cmd_verify, cmd_volume, load_config,
    render_sweep_csv, render_sweep_json, CliError, OutputFormat, RunConfig,
};
use spingeo::half::HalfInt;

/// Empirical geometry of Euclidean-invariant elementary quantum systems.
#[derive(Parser)]
#[command(name = "spingeo", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite of quadrature and algebra cross-checks.
    Verify {
        /// Largest spin weight |s| in the sweep (half-integers allowed).
        #[arg(long, default_value_t = 2.0)]
        smax: f64,
        /// Largest harmonic index j in the sweep.
        #[arg(long, default_value_t = 6.0)]
        jmax: f64,
        /// Tolerance applied to the checks.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Pairwise empirical distances of the configured systems.
    Distance {
        #[arg(long)]
        config: PathBuf,
    },
    /// Pairwise empirical angles.
    Angle {
        #[arg(long)]
        config: PathBuf,
    },
    /// Empirical 3-volume elements of system triples.
    Volume {
        #[arg(long)]
        config: PathBuf,
    },
    /// Eigenvalues of the centre-of-mass-square operator family.
    Spectra {
        #[arg(long)]
        config: PathBuf,
    },
    /// Classical-limit sweep over line pairs and j values.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Write the table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_config(path: &PathBuf) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    load_config(&text)
}

fn run() -> Result<ExitCode, CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { smax, jmax, tol } => {
            let smax = HalfInt::try_from_f64(smax)
                .map_err(|e| CliError::Config(format!("--smax: {e}")))?;
            let jmax = HalfInt::try_from_f64(jmax)
                .map_err(|e| CliError::Config(format!("--jmax: {e}")))?;
            let (report, all_pass) = cmd_verify(smax, jmax, tol);
            print!("{report}");
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Distance { config } => {
            print!("{}", cmd_distance(&read_config(&config)?)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Angle { config } => {
            print!("{}", cmd_angle(&read_config(&config)?)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Volume { config } => {
            print!("{}", cmd_volume(&read_config(&config)?)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Spectra { config } => {
            print!("{}", cmd_spectra(&read_config(&config)?)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { config, out } => {
            let config = read_config(&config)?;
            let rows = cmd_sweep(&config)?;
            let format = config
                .output
                .as_ref()
                .map(|o| o.format)
                .unwrap_or(OutputFormat::Csv);
            let rendered = match format {
                OutputFormat::Csv => render_sweep_csv(&rows),
                OutputFormat::Json => render_sweep_json(&rows),
            };
            let path = out
                .map(|p| p.display().to_string())
                .or_else(|| config.output.as_ref().and_then(|o| o.path.clone()));
            match path {
                Some(path) => std::fs::write(&path, rendered)
                    .map_err(|e| CliError::Io(format!("{path}: {e}")))?,
                None => print!("{rendered}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            match e {
                cli::CliError::Config(_) | cli::CliError::Io(_) => ExitCode::from(2),
            }
        }
    }
}
