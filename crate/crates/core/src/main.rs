use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sh_core::agents::{parse_agent_list, AgentSpec};
use sh_core::harness::{
    aggregate_file, parse_player_counts, run_batch, trace_game, BatchConfig, GroupBy, TraceOptions,
};

#[derive(Parser)]
#[command(name = "shbots", version, about = "Secret Hitler agents and batch experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch of randomized games and append one record per game.
    Simulate {
        #[arg(long)]
        games: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma separated: random, selfish, ismcts (or ismcts:N:K).
        #[arg(long, default_value = "random,selfish,ismcts")]
        agents: String,
        /// A list such as 5,7 or a range such as 5-10.
        #[arg(long, default_value = "5-10")]
        players: String,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        ismcts_iterations: Option<u32>,
        #[arg(long)]
        ismcts_k: Option<f64>,
    },
    /// Win rates with 95% confidence intervals from a record file.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = clap::builder::ValueParser::new(str::parse::<GroupBy>))]
        by: GroupBy,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Play one game and print what happens.
    Trace {
        #[arg(long)]
        players: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// One spec per seat, or a single spec for every seat.
        #[arg(long, default_value = "random")]
        agents: String,
        #[arg(long)]
        ismcts_iterations: Option<u32>,
        #[arg(long)]
        ismcts_k: Option<f64>,
        /// Show root statistics of every search.
        #[arg(long)]
        search: bool,
        /// Print the final state in canonical form.
        #[arg(long)]
        final_state: bool,
    },
}

fn agents_with(list: &str, iterations: Option<u32>, k: Option<f64>) -> Result<Vec<AgentSpec>, String> {
    parse_agent_list(list)
        .and_then(|v| v.into_iter().map(|a| a.with_search(iterations, k)).collect())
        .map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Simulate {
            games,
            seed,
            agents,
            players,
            parallelism,
            out,
            ismcts_iterations,
            ismcts_k,
        } => {
            let batch = BatchConfig {
                num_games: games,
                master_seed: seed,
                allowed_agents: agents_with(&agents, ismcts_iterations, ismcts_k)?,
                allowed_player_counts: parse_player_counts(&players).map_err(|e| e.to_string())?,
                parallelism,
            };
            let summary = run_batch(&batch, &out).map_err(|e| e.to_string())?;
            for abort in &summary.aborted {
                eprintln!("{abort}");
            }
            eprintln!(
                "{} written, {} already present, {} aborted -> {}",
                summary.written,
                summary.skipped,
                summary.aborted.len(),
                out.display()
            );
            Ok(summary.aborted.is_empty())
        }
        Command::Analyze { input, by, format } => {
            let agg = aggregate_file(&input, by).map_err(|e| e.to_string())?;
            for bad in &agg.malformed {
                eprintln!("{}:{}: {}", input.display(), bad.line, bad.message);
            }
            if agg.records == 0 {
                return Err(format!("{}: no valid records", input.display()));
            }
            match format {
                Format::Table => print!("{}", agg.to_table()),
                Format::Csv => print!("{}", agg.to_csv()),
            }
            Ok(agg.malformed.is_empty())
        }
        Command::Trace {
            players,
            seed,
            agents,
            ismcts_iterations,
            ismcts_k,
            search,
            final_state,
        } => {
            let mut specs = agents_with(&agents, ismcts_iterations, ismcts_k)?;
            if specs.len() == 1 {
                specs = vec![specs[0]; players];
            }
            if specs.len() != players {
                return Err(format!("{} agent specs for {players} players", specs.len()));
            }
            let text = trace_game(&specs, seed, TraceOptions { search, final_state }).map_err(|e| e.to_string())?;
            print!("{text}");
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
