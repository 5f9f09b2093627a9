use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufReader, Read, Seek, SeekFrom, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use crate::error::Result;
use crate::rng::{derive_seed, rng_from_seed};

use super::config::{game_seed, random_config, BatchConfig};
use super::record::{read_records, GameRecord};
use super::run::{run_game, GameAbort};

const CONFIG_STREAM: u64 = 0xC0F1;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BatchSummary {
    /// Records appended by this run.
    pub written: u64,
    /// Games already present in the file from an earlier run.
    pub skipped: u64,
    pub aborted: Vec<GameAbort>,
}

/// Plays the game at `index` of the batch.
fn play_index(batch: &BatchConfig, index: u64) -> Result<GameRecord, GameAbort> {
    let seed = game_seed(batch.master_seed, index);
    let mut rng = rng_from_seed(derive_seed(seed, CONFIG_STREAM));
    let (_, agents) = random_config(batch, &mut rng);
    run_game(&agents, seed)
}

/// Game seeds already recorded in `file`. A torn final line left by an
/// interrupted run is cut off so appends start on a fresh line.
fn existing_seeds(file: &mut File) -> Result<HashSet<u64>> {
    let mut text = String::new();
    file.seek(SeekFrom::Start(0))?;
    file.read_to_string(&mut text)?;
    let complete = text.rfind('\n').map_or(0, |i| i + 1);
    if complete < text.len() {
        file.set_len(complete as u64)?;
    }
    let (records, _) = read_records(BufReader::new(&text.as_bytes()[..complete]))?;
    Ok(records.into_iter().map(|r| r.game_seed).collect())
}

/// Runs every game of `batch` not already in `out`, appending one line per
/// finished game. Workers share an index counter; a single writer owns the
/// file.
pub fn run_batch(batch: &BatchConfig, out: &Path) -> Result<BatchSummary> {
    batch.validate()?;
    let mut file = OpenOptions::new().read(true).create(true).append(true).open(out)?;
    let done = existing_seeds(&mut file)?;
    let pending: Vec<u64> = (0..batch.num_games)
        .filter(|&i| !done.contains(&game_seed(batch.master_seed, i)))
        .collect();
    let mut summary = BatchSummary {
        skipped: batch.num_games - pending.len() as u64,
        ..BatchSummary::default()
    };

    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<Result<GameRecord, GameAbort>>();
    let workers = batch.parallelism.min(pending.len()).max(1);
    let mut write_error = None;
    thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, pending) = (&next, &pending);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&index) = pending.get(i) else { break };
                if tx.send(play_index(batch, index)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for result in rx {
            match result {
                Ok(record) => {
                    let line = record.to_line();
                    if let Err(e) = writeln!(file, "{line}").and_then(|_| file.flush()) {
                        // Dropping the receiver stops the workers; lines
                        // already written stay on disk.
                        write_error = Some(e);
                        break;
                    }
                    summary.written += 1;
                }
                Err(abort) => summary.aborted.push(abort),
            }
        }
    });
    if let Some(e) = write_error {
        return Err(e.into());
    }
    summary.aborted.sort_by_key(|a| a.game_seed);
    Ok(summary)
}
