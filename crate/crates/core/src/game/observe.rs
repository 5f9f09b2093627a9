use serde::{Deserialize, Serialize};

use super::event::{PrivateEvent, Stamped};
use super::state::{GameState, PublicState};
use super::types::{GameConfig, Party, Role, Seat};
use crate::error::{Error, Result};

/// What one seat knows: the public board plus its own private information.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub config: GameConfig,
    pub seat: Seat,
    pub own_role: Role,
    /// Indexed by seat; `None` where this seat does not know the role.
    pub known_roles: Vec<Option<Role>>,
    pub public: PublicState,
    pub private_card_events: Vec<Stamped>,
    /// Indexed by seat; parties this seat learned by investigating.
    pub investigation_results: Vec<Option<Party>>,
    /// Cards this seat is holding right now.
    pub hand: Vec<Party>,
    /// This seat's ballot in the election still being collected.
    pub own_ballot: Option<bool>,
}

impl Observation {
    pub fn num_players(&self) -> usize {
        self.public.num_players as usize
    }

    pub fn own_party(&self) -> Party {
        self.own_role.party()
    }
}

/// Whether `seat` is told the roles of others at the start, and which.
pub fn knows_role_of(roles: &[Role], seat: Seat, other: Seat) -> bool {
    if seat == other {
        return true;
    }
    let n = roles.len();
    match roles[seat.idx()] {
        Role::Liberal => false,
        Role::Fascist => roles[other.idx()] != Role::Liberal,
        Role::Hitler => n <= 6 && roles[other.idx()] == Role::Fascist,
    }
}

impl GameState {
    pub fn observe(&self, seat: Seat) -> Result<Observation> {
        let n = self.num_players();
        if seat.idx() >= n {
            return Err(Error::SeatOutOfRange {
                seat: seat.idx(),
                num_players: n,
            });
        }
        let roles = self.roles();
        let known_roles = (0..n as u8)
            .map(Seat)
            .map(|other| knows_role_of(roles, seat, other).then(|| roles[other.idx()]))
            .collect();
        let private_card_events = self.private_events(seat).to_vec();
        let mut investigation_results = vec![None; n];
        for e in &private_card_events {
            if let PrivateEvent::InvestigationResult { target, party } = e.event {
                investigation_results[target.idx()] = Some(party);
            }
        }
        let p = &self.public;
        let hand = if p.president == seat && !self.hidden.president_hand.is_empty() {
            self.hidden.president_hand.to_vec()
        } else if p.nominated_chancellor == Some(seat) && !self.hidden.chancellor_hand.is_empty() {
            self.hidden.chancellor_hand.to_vec()
        } else {
            Vec::new()
        };
        let own_ballot = p
            .ballots_cast
            .contains(seat)
            .then(|| self.hidden.pending_ja.contains(seat));
        Ok(Observation {
            config: self.config,
            seat,
            own_role: roles[seat.idx()],
            known_roles,
            public: p.clone(),
            private_card_events,
            investigation_results,
            hand,
            own_ballot,
        })
    }
}
