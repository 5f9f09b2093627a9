//! Fascist track layouts. The three published boards differ only in which
//! early slots grant a power; slots 4 and 5 are always Execution and the veto
//! unlocks once the fifth Fascist policy is on the board.

use super::types::{Power, VETO_UNLOCK};
use crate::error::{Error, Result};

use Power::*;

/// Power granted by each of the six Fascist slots, indexed by `slot - 1`.
const SMALL_BOARD: [Option<Power>; 6] = [None, None, Some(PolicyPeek), Some(Execution), Some(Execution), None];
const MEDIUM_BOARD: [Option<Power>; 6] = [
    None,
    Some(InvestigateLoyalty),
    Some(SpecialElection),
    Some(Execution),
    Some(Execution),
    None,
];
const LARGE_BOARD: [Option<Power>; 6] = [
    Some(InvestigateLoyalty),
    Some(InvestigateLoyalty),
    Some(SpecialElection),
    Some(Execution),
    Some(Execution),
    None,
];

fn layout(num_players: usize) -> Result<&'static [Option<Power>; 6]> {
    match num_players {
        5 | 6 => Ok(&SMALL_BOARD),
        7 | 8 => Ok(&MEDIUM_BOARD),
        9 | 10 => Ok(&LARGE_BOARD),
        n => Err(Error::PlayerCount(n)),
    }
}

/// Executive power the president receives when the `fascist_slot`-th Fascist
/// policy is enacted by a government.
pub fn board_power(num_players: usize, fascist_slot: u8) -> Result<Option<Power>> {
    let board = layout(num_players)?;
    if !(1..=6).contains(&fascist_slot) {
        return Err(Error::FascistSlot(fascist_slot));
    }
    Ok(board[fascist_slot as usize - 1])
}

pub fn veto_unlocked(fascist_enacted: u8) -> bool {
    fascist_enacted >= VETO_UNLOCK
}
