//! `genrebar` command-line entry point.
//!
//! Exit codes: 0 success, 1 domain or validation error (including bad
//! flags), 2 environment or I/O error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "genrebar",
    version,
    about = "Soft-genre datasets, playlist search and the genre bar service"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a dataset file and report every invalid record.
    Validate { file: PathBuf },
    /// Rank the songs closest to a genre mix.
    Query {
        file: PathBuf,
        /// Comma-separated proportions in genre order (fractions or percentages).
        #[arg(long, allow_hyphen_values = true)]
        proportions: String,
        /// Number of songs to return.
        #[arg(short = 'k', default_value_t = genrebar_service::DEFAULT_K, allow_negative_numbers = true)]
        k: usize,
        /// Tab-separated output without padding.
        #[arg(long)]
        porcelain: bool,
    },
    /// Write a synthetic dataset to standard output.
    Gen {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        songs: usize,
        /// Comma-separated genre names, at least two.
        #[arg(long)]
        genres: String,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "GENREBAR_DATASET")]
        dataset: PathBuf,
        #[arg(long, env = "GENREBAR_PORT", default_value_t = genrebar_service::DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = genrebar_service::DEFAULT_K)]
        default_k: usize,
        #[arg(long, default_value_t = genrebar_service::DEFAULT_MAX_K)]
        max_k: usize,
        /// Directory with the built web UI, served at `/`.
        #[arg(long, env = "GENREBAR_WEBUI", default_value = "webui/dist")]
        webui: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(commands::EXIT_DOMAIN)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let code = match cli.command {
        Command::Validate { file } => commands::validate(&file),
        Command::Query {
            file,
            proportions,
            k,
            porcelain,
        } => commands::query(&file, &proportions, k, porcelain),
        Command::Gen {
            seed,
            songs,
            genres,
        } => commands::gen(seed, songs, &genres),
        Command::Serve {
            dataset,
            port,
            host,
            default_k,
            max_k,
            webui,
        } => {
            let config = genrebar_service::ServiceConfig {
                port,
                dataset_path: dataset,
                default_k,
                max_k,
                webui_dir: Some(webui),
            };
            commands::serve(config, &host)
        }
    };
    ExitCode::from(code)
}
