use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use biqpca_cli::{
    cmd_fit, cmd_recognize, cmd_reconstruct, cmd_select_weighting, load_config, CliError, RecognizeOutputs,
    ReconstructOutputs,
};
use clap::{Parser, Subcommand};

/// Bilateral quaternion Lp-PCA for color images.
#[derive(Parser)]
#[command(name = "biqpca", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a projector basis on the training split and save it.
    Fit {
        #[arg(long)]
        config: PathBuf,
        /// Where to write the basis file.
        #[arg(long)]
        basis: PathBuf,
    },
    /// Choose a weighting manner by repeated validation splits.
    SelectWeighting {
        #[arg(long)]
        config: PathBuf,
        /// JSON manifest to record the choice in (created if missing).
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Classify the test split by nearest neighbor in feature space.
    Recognize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        basis: PathBuf,
        /// Write per-class confusion counts as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Sweep k1 = k2 = 1..=K and record accuracy per k.
        #[arg(long, value_name = "K", requires = "sweep_out")]
        sweep: Option<usize>,
        #[arg(long, value_name = "PATH", requires = "sweep")]
        sweep_out: Option<PathBuf>,
    },
    /// Reconstruct every dataset image from its features.
    Reconstruct {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        basis: PathBuf,
        /// Export reconstructed images under this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Write the ratio for every (k1, k2) truncation as CSV.
        #[arg(long, value_name = "PATH")]
        sweep_out: Option<PathBuf>,
    },
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Fit { config, basis } => {
            cmd_fit(&load_config(&config)?, &basis, out)?;
        }
        Command::SelectWeighting { config, manifest } => {
            cmd_select_weighting(&load_config(&config)?, manifest.as_deref(), out)?;
        }
        Command::Recognize { config, basis, csv, sweep, sweep_out } => {
            let outputs = RecognizeOutputs {
                confusion_csv: csv,
                sweep: sweep.zip(sweep_out),
            };
            cmd_recognize(&load_config(&config)?, &basis, &outputs, out)?;
        }
        Command::Reconstruct { config, basis, out_dir, sweep_out } => {
            let outputs = ReconstructOutputs {
                image_dir: out_dir,
                sweep_csv: sweep_out,
            };
            cmd_reconstruct(&load_config(&config)?, &basis, &outputs, out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
