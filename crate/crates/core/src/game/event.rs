use serde::{Deserialize, Serialize};

use super::types::{Outcome, Party, Power, Seat, SeatSet};

/// Ballots of one completed election.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct VoteRecord {
    pub voters: SeatSet,
    pub ja: SeatSet,
}

impl VoteRecord {
    pub fn ja_count(&self) -> usize {
        self.ja.len()
    }

    pub fn nein_count(&self) -> usize {
        self.voters.len() - self.ja.len()
    }

    pub fn vote_of(&self, seat: Seat) -> Option<bool> {
        self.voters.contains(seat).then(|| self.ja.contains(seat))
    }
}

/// Everything the whole table sees, in the order it happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PublicEvent {
    Nominated { president: Seat, chancellor: Seat },
    Election {
        president: Seat,
        chancellor: Seat,
        votes: VoteRecord,
        passed: bool,
        /// Fascist policies on the board when the votes were counted.
        fascist_enacted: u8,
    },
    Chaos { party: Party },
    Reshuffled { deck_len: u8 },
    PresidentDrew { president: Seat },
    PresidentDiscarded { president: Seat },
    PolicyEnacted { party: Party, president: Seat, chancellor: Seat },
    PowerGranted { president: Seat, power: Power },
    Investigated { president: Seat, target: Seat },
    SpecialElectionCalled { president: Seat, candidate: Seat },
    PolicyPeeked { president: Seat },
    Executed { president: Seat, target: Seat, was_hitler: bool },
    VetoProposed { chancellor: Seat },
    VetoResolved { president: Seat, agreed: bool },
    GameEnded(Outcome),
}

/// Card and role information revealed to a single seat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrivateEvent {
    Drew([Party; 3]),
    Discarded { discarded: Party, passed: [Party; 2] },
    Received([Party; 2]),
    Peeked([Party; 3]),
    InvestigationResult { target: Seat, party: Party },
}

/// A private event stamped with the number of public events that preceded it,
/// so a seat's two logs can be merged back into one timeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Stamped {
    pub after: u32,
    pub event: PrivateEvent,
}
