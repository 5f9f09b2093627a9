use std::fmt;

use serde::{Deserialize, Serialize};

use super::types::{Power, Seat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    Nomination,
    Election,
    LegislativePresident,
    LegislativeChancellor,
    ExecutiveAction(Power),
    VetoConsent,
    GameOver,
}

/// Every move a seat can make. Card actions carry a position in the actor's
/// current hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Nominate(Seat),
    Vote(bool),
    PresidentDiscard(u8),
    ChancellorEnact(u8),
    Investigate(Seat),
    ChooseSpecialElection(Seat),
    AcknowledgePeek,
    Execute(Seat),
    ProposeVeto,
    VetoDecision(bool),
}

impl Action {
    pub fn target(self) -> Option<Seat> {
        match self {
            Action::Nominate(s)
            | Action::Investigate(s)
            | Action::ChooseSpecialElection(s)
            | Action::Execute(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Nominate(s) => write!(f, "nominate {s}"),
            Action::Vote(true) => f.write_str("vote ja"),
            Action::Vote(false) => f.write_str("vote nein"),
            Action::PresidentDiscard(i) => write!(f, "discard #{i}"),
            Action::ChancellorEnact(i) => write!(f, "enact #{i}"),
            Action::Investigate(s) => write!(f, "investigate {s}"),
            Action::ChooseSpecialElection(s) => write!(f, "special election {s}"),
            Action::AcknowledgePeek => f.write_str("acknowledge peek"),
            Action::Execute(s) => write!(f, "execute {s}"),
            Action::ProposeVeto => f.write_str("propose veto"),
            Action::VetoDecision(true) => f.write_str("accept veto"),
            Action::VetoDecision(false) => f.write_str("reject veto"),
        }
    }
}
