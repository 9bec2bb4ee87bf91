use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hamdec_cli::{
    cmd_experiment, cmd_generate, cmd_oracle, cmd_solve, CliError, GenerateArgs, SolveArgs,
};
use hamdec_core::{Algorithm, InstanceKind};

#[derive(Parser)]
#[command(
    name = "hamdec",
    version,
    about = "Second Hamiltonian decomposition solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate seeded instance files and a manifest
    Generate {
        #[arg(long, value_parser = parse_kind)]
        kind: InstanceKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        directed: bool,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Solve one instance and append a CSV row
    Solve {
        instance: PathBuf,
        #[arg(long, value_parser = parse_algorithm)]
        algorithm: Algorithm,
        #[arg(long, default_value_t = 60_000)]
        time_limit_ms: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        attempt_limit: usize,
        #[arg(long, default_value_t = 5)]
        depth_limit: usize,
        /// write the final model in LP format
        #[arg(long)]
        export_lp: Option<PathBuf>,
        /// append the row here instead of printing it
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[arg(long)]
        witness_dir: Option<PathBuf>,
        /// record time_ms as 0
        #[arg(long)]
        no_timing: bool,
    },
    /// Run an experiment grid from a JSON config
    Experiment {
        config: PathBuf,
        #[arg(long)]
        out_csv: PathBuf,
        #[arg(long)]
        no_timing: bool,
    },
    /// Count decompositions of a small instance exhaustively
    Oracle { instance: PathBuf },
}

fn parse_kind(s: &str) -> Result<InstanceKind, String> {
    s.parse().map_err(|e: hamdec_core::Error| e.to_string())
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: hamdec_core::Error| e.to_string())
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var("HAMDEC_THREADS") {
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&k| k > 0)
            .map(Some)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "HAMDEC_THREADS must be a positive integer, got {v:?}"
                ))
            }),
        Err(_) => Ok(None),
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Generate {
            kind,
            n,
            count,
            seed,
            directed,
            out_dir,
        } => {
            let paths = cmd_generate(&GenerateArgs {
                kind,
                n,
                count,
                seed,
                directed,
                out_dir,
            })?;
            println!("wrote {} instances", paths.len());
        }
        Command::Solve {
            instance,
            algorithm,
            time_limit_ms,
            seed,
            attempt_limit,
            depth_limit,
            export_lp,
            out_csv,
            witness_dir,
            no_timing,
        } => {
            let print = out_csv.is_none();
            let row = cmd_solve(&SolveArgs {
                instance,
                algorithm,
                time_limit_ms,
                seed,
                attempt_limit,
                depth_limit,
                export_lp,
                out_csv,
                witness_dir,
                no_timing,
            })?;
            if print {
                print!("{}", hamdec_cli::files::rows_to_csv(&[row]));
            } else {
                println!(
                    "{}: {} after {} iterations",
                    row.instance_id, row.verdict, row.iterations
                );
            }
        }
        Command::Experiment {
            config,
            out_csv,
            no_timing,
        } => {
            let (_, summary) = cmd_experiment(&config, &out_csv, no_timing, threads_from_env()?)?;
            print!("{summary}");
        }
        Command::Oracle { instance } => println!("{}", cmd_oracle(&instance)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
