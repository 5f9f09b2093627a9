use std::io::BufRead;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::agents::AgentSpec;
use crate::game::{EndReason, Party, Role};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeatRecord {
    pub agent: AgentSpec,
    pub role: Role,
    pub won: bool,
}

/// One finished game, stored as a single JSON line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameRecord {
    pub schema_version: u32,
    pub game_seed: u64,
    pub num_players: usize,
    pub seats: Vec<SeatRecord>,
    pub winner: Party,
    pub reason: EndReason,
    pub rounds: u32,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl GameRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }

    pub fn from_line(line: &str) -> Result<GameRecord, String> {
        let r: GameRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
        r.check()?;
        Ok(r)
    }

    fn check(&self) -> Result<(), String> {
        if self.seats.len() != self.num_players {
            return Err(format!("{} seats for {} players", self.seats.len(), self.num_players));
        }
        if self.reason.winner() != self.winner {
            return Err(format!("{:?} cannot be won by {:?}", self.reason, self.winner));
        }
        if let Some(i) = self
            .seats
            .iter()
            .position(|s| s.won != (s.role.party() == self.winner))
        {
            return Err(format!("seat {i} won flag disagrees with the winner"));
        }
        Ok(())
    }
}

/// Parses every line of a record file. Blank lines are skipped; bad lines
/// come back as `(line number, message)`.
pub fn read_records<R: BufRead>(reader: R) -> std::io::Result<(Vec<GameRecord>, Vec<(usize, String)>)> {
    let mut records = Vec::new();
    let mut bad = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match GameRecord::from_line(&line) {
            Ok(r) => records.push(r),
            Err(e) => bad.push((i + 1, e)),
        }
    }
    Ok((records, bad))
}
