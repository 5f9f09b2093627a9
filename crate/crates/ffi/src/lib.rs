//! C interface to the engine, the agents and the statistics helpers.
//!
//! Games are opaque `ShGame` handles. Every fallible call returns an
//! `ShStatus`; on failure `sh_last_error()` describes the problem for the
//! calling thread. Strings returned by the library must be released with
//! `sh_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sh_core::agents::{choose, AgentContext, AgentSpec};
use sh_core::game::{
    count_distinct_decks, count_hidden_states, count_role_assignments, Action, EndReason, GameConfig, GameState,
    Party, Seat,
};
use sh_core::harness::confidence_interval;
use sh_core::rng::{derive_seed, rng_from_seed, GameRng};
use sh_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    IllegalAction = 3,
    GameOver = 4,
    OutOfRange = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShActionKind {
    Nominate = 0,
    Vote = 1,
    PresidentDiscard = 2,
    ChancellorEnact = 3,
    Investigate = 4,
    ChooseSpecialElection = 5,
    AcknowledgePeek = 6,
    Execute = 7,
    ProposeVeto = 8,
    VetoDecision = 9,
}

/// An action as a kind plus one argument: a seat, a hand position, or
/// 0/1 for votes and veto answers. Unused for the argument-free kinds.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShAction {
    pub kind: ShActionKind,
    pub arg: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShParty {
    Liberal = 0,
    Fascist = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShEndReason {
    HitlerElected = 0,
    SixFascistPolicies = 1,
    FiveLiberalPolicies = 2,
    HitlerKilled = 3,
}

/// Opaque game handle.
pub struct ShGame {
    state: GameState,
    rng: GameRng,
    seed: u64,
    agent_calls: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> ShStatus {
    match e {
        Error::IllegalAction { .. } | Error::NoLegalActions => ShStatus::IllegalAction,
        Error::GameOver => ShStatus::GameOver,
        Error::SeatOutOfRange { .. } => ShStatus::OutOfRange,
        _ => ShStatus::InvalidArgument,
    }
}

fn fail(status: ShStatus, msg: impl Into<String>) -> ShStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> ShStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `f`, turning a panic into `ShStatus::Panic`.
fn guard(f: impl FnOnce() -> ShStatus) -> ShStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(ShStatus::Panic, "internal panic"),
    }
}

macro_rules! deref {
    ($p:expr) => {
        match unsafe { $p.as_ref() } {
            Some(v) => v,
            None => return fail(ShStatus::NullPointer, concat!(stringify!($p), " is null")),
        }
    };
}

macro_rules! deref_mut {
    ($p:expr) => {
        match unsafe { $p.as_mut() } {
            Some(v) => v,
            None => return fail(ShStatus::NullPointer, concat!(stringify!($p), " is null")),
        }
    };
}

fn to_ffi(a: Action) -> ShAction {
    let (kind, arg) = match a {
        Action::Nominate(s) => (ShActionKind::Nominate, s.0 as u32),
        Action::Vote(ja) => (ShActionKind::Vote, ja as u32),
        Action::PresidentDiscard(i) => (ShActionKind::PresidentDiscard, i as u32),
        Action::ChancellorEnact(i) => (ShActionKind::ChancellorEnact, i as u32),
        Action::Investigate(s) => (ShActionKind::Investigate, s.0 as u32),
        Action::ChooseSpecialElection(s) => (ShActionKind::ChooseSpecialElection, s.0 as u32),
        Action::AcknowledgePeek => (ShActionKind::AcknowledgePeek, 0),
        Action::Execute(s) => (ShActionKind::Execute, s.0 as u32),
        Action::ProposeVeto => (ShActionKind::ProposeVeto, 0),
        Action::VetoDecision(yes) => (ShActionKind::VetoDecision, yes as u32),
    };
    ShAction { kind, arg }
}

fn from_ffi(a: ShAction) -> Option<Action> {
    let seat = || u8::try_from(a.arg).ok().map(Seat);
    let small = || u8::try_from(a.arg).ok();
    let flag = || match a.arg {
        0 => Some(false),
        1 => Some(true),
        _ => None,
    };
    Some(match a.kind {
        ShActionKind::Nominate => Action::Nominate(seat()?),
        ShActionKind::Vote => Action::Vote(flag()?),
        ShActionKind::PresidentDiscard => Action::PresidentDiscard(small()?),
        ShActionKind::ChancellorEnact => Action::ChancellorEnact(small()?),
        ShActionKind::Investigate => Action::Investigate(seat()?),
        ShActionKind::ChooseSpecialElection => Action::ChooseSpecialElection(seat()?),
        ShActionKind::AcknowledgePeek => Action::AcknowledgePeek,
        ShActionKind::Execute => Action::Execute(seat()?),
        ShActionKind::ProposeVeto => Action::ProposeVeto,
        ShActionKind::VetoDecision => Action::VetoDecision(flag()?),
    })
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates a game with default rules. The engine's randomness comes from
/// `seed`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sh_game_new(num_players: u32, seed: u64, out: *mut *mut ShGame) -> ShStatus {
    guard(|| {
        let out = deref_mut!(out);
        let config = match GameConfig::new(num_players as usize) {
            Ok(c) => c,
            Err(e) => return from_error(e),
        };
        let mut rng = rng_from_seed(seed);
        match GameState::new_game(config, &mut rng) {
            Ok(state) => {
                *out = Box::into_raw(Box::new(ShGame {
                    state,
                    rng,
                    seed,
                    agent_calls: 0,
                }));
                ShStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `game` must come from `sh_game_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sh_game_free(game: *mut ShGame) {
    if !game.is_null() {
        drop(unsafe { Box::from_raw(game) });
    }
}

/// The seat whose move it is.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sh_game_current_seat(game: *const ShGame, out: *mut u32) -> ShStatus {
    guard(|| {
        let (game, out) = (deref!(game), deref_mut!(out));
        match game.state.actor() {
            Some(s) => {
                *out = s.0 as u32;
                ShStatus::Ok
            }
            None => fail(ShStatus::GameOver, "game is already over"),
        }
    })
}

/// Number of legal actions; zero once the game is over.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sh_game_legal_count(game: *const ShGame, out: *mut usize) -> ShStatus {
    guard(|| {
        let (game, out) = (deref!(game), deref_mut!(out));
        *out = game.state.legal_actions().map_or(0, |(_, l)| l.len());
        ShStatus::Ok
    })
}

/// The `index`-th legal action, in the engine's stable order.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sh_game_legal_action(game: *const ShGame, index: usize, out: *mut ShAction) -> ShStatus {
    guard(|| {
        let (game, out) = (deref!(game), deref_mut!(out));
        let legal = match game.state.legal_actions() {
            Ok((_, l)) => l,
            Err(e) => return from_error(e),
        };
        match legal.get(index) {
            Some(&a) => {
                *out = to_ffi(a);
                ShStatus::Ok
            }
            None => fail(ShStatus::OutOfRange, format!("index {index} of {} legal actions", legal.len())),
        }
    })
}

/// Applies an action. An illegal action leaves the game unchanged.
///
/// # Safety
/// `game` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn sh_game_apply(game: *mut ShGame, action: ShAction) -> ShStatus {
    guard(|| {
        let game = deref_mut!(game);
        let Some(action) = from_ffi(action) else {
            return fail(ShStatus::InvalidArgument, format!("argument {} out of range", action.arg));
        };
        match game.state.apply_action(action, &mut game.rng) {
            Ok(_) => ShStatus::Ok,
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sh_game_is_over(game: *const ShGame, out: *mut bool) -> ShStatus {
    guard(|| {
        let (game, out) = (deref!(game), deref_mut!(out));
        *out = game.state.is_terminal();
        ShStatus::Ok
    })
}

/// Winning team and reason of a finished game.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sh_game_outcome(
    game: *const ShGame,
    winner: *mut ShParty,
    reason: *mut ShEndReason,
) -> ShStatus {
    guard(|| {
        let (game, winner, reason) = (deref!(game), deref_mut!(winner), deref_mut!(reason));
        let Some(o) = game.state.outcome() else {
            return fail(ShStatus::InvalidArgument, "game is still running");
        };
        *winner = match o.winning_team {
            Party::Liberal => ShParty::Liberal,
            Party::Fascist => ShParty::Fascist,
        };
        *reason = match o.reason {
            EndReason::HitlerElected => ShEndReason::HitlerElected,
            EndReason::SixFascistPolicies => ShEndReason::SixFascistPolicies,
            EndReason::FiveLiberalPolicies => ShEndReason::FiveLiberalPolicies,
            EndReason::HitlerKilled => ShEndReason::HitlerKilled,
        };
        ShStatus::Ok
    })
}

/// Full state, hidden parts included, as canonical JSON.
///
/// # Safety
/// `game` must be a valid handle. Free the result with `sh_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sh_game_to_json(game: *const ShGame) -> *mut c_char {
    let Some(game) = (unsafe { game.as_ref() }) else {
        set_error("game is null");
        return ptr::null_mut();
    };
    into_c_string(game.state.to_canonical_string())
}

/// What `seat` can see, as JSON.
///
/// # Safety
/// `game` must be a valid handle. Free the result with `sh_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sh_game_observation_json(game: *const ShGame, seat: u32) -> *mut c_char {
    let Some(game) = (unsafe { game.as_ref() }) else {
        set_error("game is null");
        return ptr::null_mut();
    };
    let Ok(seat) = u8::try_from(seat) else {
        set_error(format!("seat {seat} out of range"));
        return ptr::null_mut();
    };
    match game.state.observe(Seat(seat)) {
        Ok(o) => into_c_string(serde_json::to_string(&o).expect("observations serialize")),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Asks an agent (`random`, `selfish`, `ismcts` or `ismcts:N:K`) for the
/// current seat's move without applying it. The agent's randomness is
/// derived from the game seed and a per-handle call counter, so a replayed
/// sequence of calls gives the same answers.
///
/// # Safety
/// `game` must be a valid handle, `agent` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn sh_agent_choose(game: *mut ShGame, agent: *const c_char, out: *mut ShAction) -> ShStatus {
    guard(|| {
        let (game, out) = (deref_mut!(game), deref_mut!(out));
        if agent.is_null() {
            return fail(ShStatus::NullPointer, "agent is null");
        }
        let Ok(text) = unsafe { CStr::from_ptr(agent) }.to_str() else {
            return fail(ShStatus::InvalidArgument, "agent is not UTF-8");
        };
        let spec: AgentSpec = match text.parse() {
            Ok(s) => s,
            Err(e) => return from_error(e),
        };
        let (seat, legal) = match game.state.legal_actions() {
            Ok(v) => v,
            Err(e) => return from_error(e),
        };
        let observation = match game.state.observe(seat) {
            Ok(o) => o,
            Err(e) => return from_error(e),
        };
        game.agent_calls += 1;
        let mut rng = rng_from_seed(derive_seed(game.seed, game.agent_calls));
        let mut ctx = AgentContext {
            observation: &observation,
            legal: &legal,
            rng: &mut rng,
        };
        match choose(spec, &mut ctx) {
            Ok(a) => {
                *out = to_ffi(a);
                ShStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Number of distinct orderings of the 17-card deck by party.
#[no_mangle]
pub extern "C" fn sh_count_distinct_decks() -> u64 {
    count_distinct_decks()
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_count_role_assignments(num_players: u32, out: *mut u64) -> ShStatus {
    guard(|| {
        let out = deref_mut!(out);
        match count_role_assignments(num_players as usize) {
            Ok(v) => {
                *out = v;
                ShStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Role assignments times deck orderings for a table size.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_count_hidden_states(num_players: u32, out: *mut u64) -> ShStatus {
    guard(|| {
        let out = deref_mut!(out);
        match count_hidden_states(num_players as usize) {
            Ok(v) => {
                *out = v;
                ShStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// 95% normal-approximation interval for `wins` out of `total`.
///
/// # Safety
/// `low` and `high` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sh_confidence_interval(wins: u64, total: u64, low: *mut f64, high: *mut f64) -> ShStatus {
    guard(|| {
        let (low, high) = (deref_mut!(low), deref_mut!(high));
        match confidence_interval(wins, total) {
            Ok((l, h)) => {
                *low = l;
                *high = h;
                ShStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
