//! Information set Monte Carlo tree search for a single observer.

pub mod determinize;
pub mod filter;
pub mod knowledge;
pub mod search;

pub use determinize::{sample_determinization, Determinizer};
pub use filter::{ObservedEvent, RoleAssignment, RoleFilter};
pub use knowledge::CardKnowledge;
pub use search::{
    so_ismcts, terminal_reward, ucb_value, Edge, SearchOptions, SearchReport, SearchStats, Searcher, Tree,
    DEFAULT_EXPLORATION, DEFAULT_ITERATIONS,
};
