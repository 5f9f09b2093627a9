//! Batch experiments: randomized table configurations, game execution,
//! line-delimited result files and win-rate analysis.

mod analyze;
mod batch;
mod config;
mod record;
mod run;
mod trace;

pub use analyze::{aggregate, aggregate_file, confidence_interval, Aggregate, GroupBy, GroupKey, MalformedLine, WinRateEntry};
pub use batch::{run_batch, BatchSummary};
pub use config::{game_seed, parse_player_counts, random_config, BatchConfig};
pub use record::{read_records, GameRecord, SeatRecord, SCHEMA_VERSION};
pub use run::{play_game, run_game, run_game_with, GameAbort, SeatRngs};
pub use trace::{trace_game, TraceOptions};
