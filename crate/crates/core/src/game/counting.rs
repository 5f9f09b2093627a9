//! Closed-form sizes of the hidden state and of the game tree.

use num_bigint::BigUint;

use super::types::{fascist_count, DECK_SIZE, LIBERAL_CARDS};
use crate::error::Result;

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Hitler seat times the ways to place the remaining fascists.
pub fn count_role_assignments(num_players: usize) -> Result<u64> {
    let f = fascist_count(num_players)? as u64;
    let n = num_players as u64;
    Ok(n * binomial(n - 1, f))
}

/// Distinguishable orderings of 11 Fascist and 6 Liberal cards.
pub fn count_distinct_decks() -> u64 {
    binomial(DECK_SIZE as u64, LIBERAL_CARDS as u64)
}

pub fn count_hidden_states(num_players: usize) -> Result<u64> {
    Ok(count_role_assignments(num_players)? * count_distinct_decks())
}

/// Lower bound on the five-player tree: ten enacted policies, each taking up
/// to three elections, each election with C(5,2) governments and C(5,3)
/// failing vote splits.
pub fn tree_size_lower_bound() -> BigUint {
    let per_election = BigUint::from(binomial(5, 3) * binomial(5, 2));
    per_election.pow(3 * 10)
}
