//! Rules engine: setup, legal moves, transitions and per-seat views.

mod action;
mod board;
mod counting;
mod event;
mod observe;
mod state;
mod types;

pub use action::{Action, Phase};
pub use board::{board_power, veto_unlocked};
pub use counting::{binomial, count_distinct_decks, count_hidden_states, count_role_assignments, tree_size_lower_bound};
pub use event::{PrivateEvent, PublicEvent, Stamped, VoteRecord};
pub use observe::{knows_role_of, Observation};
pub use state::{next_alive_after, CardCounts, Deck, GameState, Hand, HiddenState, PublicState};
pub use types::*;
