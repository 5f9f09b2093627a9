use std::time::Instant;

use crate::agents::{choose, AgentContext, AgentSpec};
use crate::error::Error;
use crate::game::{Action, GameConfig, GameState, Seat};
use crate::rng::{derive_seed, rng_from_seed, GameRng};

use super::record::{GameRecord, SeatRecord, SCHEMA_VERSION};

const ENGINE_STREAM: u64 = 0;
const SEAT_STREAM_BASE: u64 = 1;

/// A game that could not be finished, with the reason.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("game {game_seed} aborted: {error}")]
pub struct GameAbort {
    pub game_seed: u64,
    pub error: Error,
}

/// Independent random streams for each seat, derived from the game seed.
pub struct SeatRngs(Vec<GameRng>);

impl SeatRngs {
    pub fn new(game_seed: u64, num_players: usize) -> Self {
        SeatRngs(
            (0..num_players as u64)
                .map(|s| rng_from_seed(derive_seed(game_seed, SEAT_STREAM_BASE + s)))
                .collect(),
        )
    }

    pub fn seat(&mut self, seat: Seat) -> &mut GameRng {
        &mut self.0[seat.idx()]
    }
}

/// Plays one game to the end, asking `decide` for every move. The engine
/// and every seat draw from their own streams of `game_seed`.
pub fn play_game<D>(num_players: usize, game_seed: u64, mut decide: D) -> Result<GameState, GameAbort>
where
    D: FnMut(&GameState, Seat, &mut AgentContext<'_>) -> crate::Result<Action>,
{
    let abort = |error| GameAbort { game_seed, error };
    let config = GameConfig::new(num_players).map_err(abort)?;
    let mut engine = rng_from_seed(derive_seed(game_seed, ENGINE_STREAM));
    let mut seats = SeatRngs::new(game_seed, num_players);
    let mut state = GameState::new_game(config, &mut engine).map_err(abort)?;
    let mut legal = Vec::new();
    while !state.is_terminal() {
        let actor = state.legal_actions_into(&mut legal).map_err(abort)?;
        let observation = state.observe(actor).map_err(abort)?;
        let mut ctx = AgentContext {
            observation: &observation,
            legal: &legal,
            rng: seats.seat(actor),
        };
        let action = decide(&state, actor, &mut ctx).map_err(abort)?;
        state.apply_action(action, &mut engine).map_err(abort)?;
    }
    Ok(state)
}

/// Like [`run_game`] but with a custom decision function.
pub fn run_game_with<D>(
    agents: &[AgentSpec],
    game_seed: u64,
    decide: D,
) -> Result<GameRecord, GameAbort>
where
    D: FnMut(&GameState, Seat, &mut AgentContext<'_>) -> crate::Result<Action>,
{
    let start = Instant::now();
    let state = play_game(agents.len(), game_seed, decide)?;
    let outcome = state.outcome().expect("finished game has an outcome");
    let seats = state
        .roles()
        .iter()
        .zip(agents)
        .map(|(&role, &agent)| SeatRecord {
            agent,
            role,
            won: role.party() == outcome.winning_team,
        })
        .collect();
    Ok(GameRecord {
        schema_version: SCHEMA_VERSION,
        game_seed,
        num_players: agents.len(),
        seats,
        winner: outcome.winning_team,
        reason: outcome.reason,
        rounds: state.public.round,
        wall_time: start.elapsed(),
    })
}

/// Plays one game with `agents[i]` in seat `i`.
pub fn run_game(agents: &[AgentSpec], game_seed: u64) -> Result<GameRecord, GameAbort> {
    run_game_with(agents, game_seed, |_, seat, ctx| choose(agents[seat.idx()], ctx))
}
