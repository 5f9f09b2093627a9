use thiserror::Error;

use crate::game::{Action, Phase};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("player count {0} outside 5..=10")]
    PlayerCount(usize),
    #[error("fascist slot {0} outside 1..=6")]
    FascistSlot(u8),
    #[error("seat {seat} out of range for {num_players} players")]
    SeatOutOfRange { seat: usize, num_players: usize },
    #[error("action {action:?} is not legal in phase {phase:?}")]
    IllegalAction { action: Action, phase: Phase },
    #[error("game is already over")]
    GameOver,
    #[error("confidence interval needs at least one trial")]
    EmptySample,
    #[error("wins {wins} exceed total {total}")]
    WinsExceedTotal { wins: u64, total: u64 },
    #[error("invalid agent spec: {0}")]
    AgentSpec(String),
    #[error("invalid player list {0:?}")]
    PlayerList(String),
    #[error("no legal actions to choose from")]
    NoLegalActions,
    #[error("invalid batch config: {0}")]
    BatchConfig(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
