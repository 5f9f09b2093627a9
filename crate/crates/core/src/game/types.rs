use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_PLAYERS: usize = 5;
pub const MAX_PLAYERS: usize = 10;
pub const FASCIST_CARDS: u8 = 11;
pub const LIBERAL_CARDS: u8 = 6;
pub const DECK_SIZE: usize = (FASCIST_CARDS + LIBERAL_CARDS) as usize;
pub const LIBERAL_POLICIES_TO_WIN: u8 = 5;
pub const FASCIST_POLICIES_TO_WIN: u8 = 6;
pub const HITLER_ZONE: u8 = 3;
pub const VETO_UNLOCK: u8 = 5;
pub const CHAOS_THRESHOLD: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    Liberal,
    Fascist,
}

impl Party {
    pub fn opposite(self) -> Party {
        match self {
            Party::Liberal => Party::Fascist,
            Party::Fascist => Party::Liberal,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Party::Liberal => 'L',
            Party::Fascist => 'F',
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::Liberal => "Liberal",
            Party::Fascist => "Fascist",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    Liberal,
    Fascist,
    Hitler,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::Liberal, Role::Fascist, Role::Hitler];

    pub fn party(self) -> Party {
        match self {
            Role::Liberal => Party::Liberal,
            Role::Fascist | Role::Hitler => Party::Fascist,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Liberal => "Liberal",
            Role::Fascist => "Fascist",
            Role::Hitler => "Hitler",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Power {
    InvestigateLoyalty,
    SpecialElection,
    PolicyPeek,
    Execution,
    Veto,
}

/// A seat at the table, `0..num_players`, in clockwise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seat(pub u8);

impl Seat {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Seat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

/// Bitset of seats; at most ten players so a `u16` suffices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeatSet(pub u16);

impl SeatSet {
    pub fn full(n: usize) -> Self {
        SeatSet(((1u32 << n) - 1) as u16)
    }

    pub fn contains(self, seat: Seat) -> bool {
        self.0 & (1 << seat.0) != 0
    }

    pub fn insert(&mut self, seat: Seat) {
        self.0 |= 1 << seat.0;
    }

    pub fn remove(&mut self, seat: Seat) {
        self.0 &= !(1 << seat.0);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Seat> {
        (0..16u8).filter(move |i| self.0 & (1 << i) != 0).map(Seat)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameConfig {
    pub num_players: usize,
    pub term_limits_enabled: bool,
    pub investigate_once_per_target: bool,
}

impl GameConfig {
    pub fn new(num_players: usize) -> Result<Self> {
        let config = GameConfig {
            num_players,
            term_limits_enabled: true,
            investigate_once_per_target: true,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if (MIN_PLAYERS..=MAX_PLAYERS).contains(&self.num_players) {
            Ok(())
        } else {
            Err(Error::PlayerCount(self.num_players))
        }
    }

    pub fn fascists(&self) -> usize {
        self.num_players.saturating_sub(1) / 2 - 1
    }
}

/// Number of non-Hitler fascists at a table of `num_players`.
pub fn fascist_count(num_players: usize) -> Result<usize> {
    if !(MIN_PLAYERS..=MAX_PLAYERS).contains(&num_players) {
        return Err(Error::PlayerCount(num_players));
    }
    Ok((num_players - 1) / 2 - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EndReason {
    HitlerElected,
    SixFascistPolicies,
    FiveLiberalPolicies,
    HitlerKilled,
}

impl EndReason {
    pub const ALL: [EndReason; 4] = [
        EndReason::HitlerElected,
        EndReason::SixFascistPolicies,
        EndReason::FiveLiberalPolicies,
        EndReason::HitlerKilled,
    ];

    pub fn winner(self) -> Party {
        match self {
            EndReason::HitlerElected | EndReason::SixFascistPolicies => Party::Fascist,
            EndReason::FiveLiberalPolicies | EndReason::HitlerKilled => Party::Liberal,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EndReason::HitlerElected => "Hitler Elected",
            EndReason::SixFascistPolicies => "Six Fascist Policies",
            EndReason::FiveLiberalPolicies => "Five Liberal Policies",
            EndReason::HitlerKilled => "Hitler Killed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Outcome {
    pub winning_team: Party,
    pub reason: EndReason,
}

impl Outcome {
    pub fn new(reason: EndReason) -> Self {
        Outcome {
            winning_team: reason.winner(),
            reason,
        }
    }
}
