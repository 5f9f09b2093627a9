//! Secret Hitler rules engine, baseline and SO-ISMCTS agents, and a batch
//! simulation harness for measuring agent win rates.

pub mod agents;
pub mod error;
pub mod game;
pub mod harness;
pub mod ismcts;
pub mod rng;

pub use error::{Error, Result};
