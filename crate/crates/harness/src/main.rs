use agto_harness::{
    read_runs, run_campaign, run_hpo_session, BenchSettings, FileConfig, HarnessError, HpoSettings, Tables,
};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Benchmark campaigns, statistics reports and hyperparameter searches
/// with the amended gorilla troops optimizer.
#[derive(Parser)]
#[command(name = "agto", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark campaign.
    Bench {
        /// TOML file with a [bench] table; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        settings: BenchSettings,
    },
    /// Recompute rank and p-value tables from a campaign directory.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Tune hyperparameters.
    Hpo {
        /// TOML file with an [hpo] table; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        settings: HpoSettings,
    },
}

fn file_config(path: Option<PathBuf>) -> Result<FileConfig, HarnessError> {
    path.map_or_else(|| Ok(FileConfig::default()), |p| FileConfig::load(&p))
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Bench { config, settings } => {
            let cfg = settings.or(file_config(config)?.bench).into_config()?;
            let campaign = run_campaign(&cfg)?;
            if campaign.resumed > 0 {
                eprintln!("resumed {} completed runs", campaign.resumed);
            }
            println!("{}", campaign.tables.final_rank_line());
        }
        Command::Report { input } => {
            let tables = Tables::from_runs(&read_runs(&input.join("runs.csv"))?)?;
            print!("{}", tables.render());
        }
        Command::Hpo { config, settings } => {
            let run = settings.or(file_config(config)?.hpo).into_run()?;
            let outcome = run_hpo_session(&run)?;
            let b = &outcome.best;
            println!(
                "best trial {}: fitness {} neurons {} learning_rate {} batch_size {} epochs {} activation {}",
                b.trial_id,
                b.fitness,
                b.params.neurons,
                b.params.learning_rate,
                b.params.batch_size,
                b.params.epochs,
                b.params.activation
            );
            println!("{} trials, {} cache hits", outcome.history.len(), outcome.cache_hits);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
