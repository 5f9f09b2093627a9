use arrayvec::ArrayVec;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::game::{
    fascist_count, Observation, PrivateEvent, PublicEvent, Role, Seat, SeatSet, HITLER_ZONE,
    MAX_PLAYERS,
};

/// One way of dealing the secret roles: where Hitler sits and which seats
/// hold the other fascists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RoleAssignment {
    pub hitler: Seat,
    pub fascists: SeatSet,
}

impl RoleAssignment {
    pub fn from_roles(roles: &[Role]) -> Self {
        let mut hitler = Seat(0);
        let mut fascists = SeatSet::default();
        for (i, r) in roles.iter().enumerate() {
            match r {
                Role::Hitler => hitler = Seat(i as u8),
                Role::Fascist => fascists.insert(Seat(i as u8)),
                Role::Liberal => {}
            }
        }
        RoleAssignment { hitler, fascists }
    }

    pub fn role(&self, seat: Seat) -> Role {
        if seat == self.hitler {
            Role::Hitler
        } else if self.fascists.contains(seat) {
            Role::Fascist
        } else {
            Role::Liberal
        }
    }

    pub fn roles(&self, num_players: usize) -> ArrayVec<Role, MAX_PLAYERS> {
        (0..num_players as u8).map(|s| self.role(Seat(s))).collect()
    }
}

/// The role assignments still consistent with everything one seat has seen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleFilter {
    num_players: usize,
    candidates: Vec<RoleAssignment>,
}

/// Either kind of log entry a filter can learn from.
#[derive(Debug, Clone, Copy)]
pub enum ObservedEvent<'a> {
    Public(&'a PublicEvent),
    Private(&'a PrivateEvent),
}

impl RoleFilter {
    /// All `n * C(n-1, f)` assignments for a table of `num_players`.
    pub fn all(num_players: usize) -> Self {
        let f = fascist_count(num_players).expect("valid player count");
        let mut candidates = Vec::new();
        for h in 0..num_players as u8 {
            for mask in 0u16..(1 << num_players) {
                if mask.count_ones() as usize == f && mask & (1 << h) == 0 {
                    candidates.push(RoleAssignment {
                        hitler: Seat(h),
                        fascists: SeatSet(mask),
                    });
                }
            }
        }
        RoleFilter {
            num_players,
            candidates,
        }
    }

    /// Candidates consistent with the observer's own role, the roles it was
    /// shown at setup, and every event in its logs.
    pub fn from_observation(obs: &Observation) -> Self {
        let mut filter = RoleFilter::all(obs.num_players());
        filter.retain(|a| {
            obs.known_roles
                .iter()
                .enumerate()
                .all(|(i, known)| known.map_or(true, |r| a.role(Seat(i as u8)) == r))
        });
        let events = &obs.public.public_events;
        let mut private = obs.private_card_events.iter().peekable();
        for i in 0..=events.len() {
            while let Some(p) = private.next_if(|p| p.after as usize <= i) {
                filter.update(ObservedEvent::Private(&p.event));
            }
            let Some(event) = events.get(i) else { break };
            // An election that handed the game to Hitler says the opposite.
            let ends_game = matches!(events.get(i + 1), Some(PublicEvent::GameEnded(_)));
            if ends_game && matches!(event, PublicEvent::Election { .. }) {
                continue;
            }
            filter.update(ObservedEvent::Public(event));
        }
        filter
    }

    /// Removes assignments the event rules out.
    pub fn update(&mut self, event: ObservedEvent<'_>) {
        match event {
            ObservedEvent::Public(PublicEvent::Election {
                chancellor,
                passed: true,
                fascist_enacted,
                ..
            }) if *fascist_enacted >= HITLER_ZONE => {
                let c = *chancellor;
                self.retain(|a| a.hitler != c);
            }
            ObservedEvent::Public(PublicEvent::Executed { target, was_hitler, .. }) => {
                let (t, hit) = (*target, *was_hitler);
                self.retain(|a| (a.hitler == t) == hit);
            }
            ObservedEvent::Private(PrivateEvent::InvestigationResult { target, party }) => {
                let (t, p) = (*target, *party);
                self.retain(|a| a.role(t).party() == p);
            }
            _ => {}
        }
    }

    fn retain(&mut self, keep: impl Fn(&RoleAssignment) -> bool) {
        self.candidates.retain(|a| keep(a));
    }

    pub fn num_players(&self) -> usize {
        self.num_players
    }

    pub fn candidates(&self) -> &[RoleAssignment] {
        &self.candidates
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn contains(&self, assignment: &RoleAssignment) -> bool {
        self.candidates.contains(assignment)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> RoleAssignment {
        assert!(!self.is_empty(), "role filter emptied; the true assignment is always a candidate");
        self.candidates[rng.gen_range(0..self.candidates.len())]
    }
}
