//! What a single seat can soundly infer about card locations from its logs.
//!
//! Every claim made here holds in the true state: when an inference is
//! ambiguous the tracker keeps the weaker statement.

use crate::game::{CardCounts, Observation, Party, PrivateEvent, PublicEvent};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CardKnowledge {
    /// Known cards on top of the deck, top first.
    pub top: Vec<Party>,
    /// Lower bound on the discard pile's contents.
    pub discard: CardCounts,
    /// Cards the sitting chancellor holds, when this seat knows them.
    pub chancellor_hand: Option<[Party; 2]>,
    session: Option<Session>,
}

/// The three cards drawn for the current legislative session. `known` holds
/// the ones with a known party whose location (hand or discard) has not
/// been credited yet; `unknown` counts the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Session {
    known: Vec<Party>,
    unknown: u8,
}

impl CardKnowledge {
    pub fn from_observation(obs: &Observation) -> Self {
        let mut k = CardKnowledge::default();
        let events = &obs.public.public_events;
        let mut private = obs.private_card_events.iter().peekable();
        for i in 0..=events.len() {
            while let Some(p) = private.next_if(|p| p.after as usize <= i) {
                k.private(&p.event);
            }
            match events.get(i) {
                Some(e) => k.public(e),
                None => break,
            }
        }
        k
    }

    fn public(&mut self, event: &PublicEvent) {
        match *event {
            PublicEvent::Reshuffled { .. } => {
                self.top.clear();
                self.discard = CardCounts::default();
            }
            PublicEvent::PresidentDrew { .. } => {
                let k = self.top.len().min(3);
                let known: Vec<Party> = self.top.drain(..k).collect();
                self.session = Some(Session {
                    unknown: 3 - known.len() as u8,
                    known,
                });
            }
            PublicEvent::PolicyEnacted { party, .. } => {
                if let Some(mut s) = self.session.take() {
                    if let Some(i) = s.known.iter().position(|&c| c == party) {
                        s.known.remove(i);
                    } else {
                        s.unknown = s.unknown.saturating_sub(1);
                    }
                    for c in s.known {
                        self.discard.add(c);
                    }
                }
                self.chancellor_hand = None;
            }
            PublicEvent::VetoResolved { agreed: true, .. } => {
                if let Some(s) = self.session.take() {
                    for c in s.known {
                        self.discard.add(c);
                    }
                }
                self.chancellor_hand = None;
            }
            PublicEvent::Chaos { party } => {
                if !self.top.is_empty() {
                    if self.top[0] == party {
                        self.top.remove(0);
                    } else {
                        self.top.clear();
                    }
                }
            }
            _ => {}
        }
    }

    fn private(&mut self, event: &PrivateEvent) {
        match *event {
            PrivateEvent::Drew(cards) => {
                self.session = Some(Session {
                    known: cards.to_vec(),
                    unknown: 0,
                });
            }
            PrivateEvent::Discarded { discarded, passed } => {
                self.discard.add(discarded);
                self.session = Some(Session {
                    known: passed.to_vec(),
                    unknown: 0,
                });
                self.chancellor_hand = Some(passed);
            }
            PrivateEvent::Received(hand) => {
                if let Some(s) = &self.session {
                    if s.unknown == 0 && s.known.len() == 3 {
                        let mut rest = s.known.clone();
                        for c in hand {
                            if let Some(i) = rest.iter().position(|&x| x == c) {
                                rest.remove(i);
                            }
                        }
                        if let [discarded] = rest[..] {
                            self.discard.add(discarded);
                        }
                    }
                }
                self.session = Some(Session {
                    known: hand.to_vec(),
                    unknown: 0,
                });
                self.chancellor_hand = Some(hand);
            }
            PrivateEvent::Peeked(cards) => self.top = cards.to_vec(),
            PrivateEvent::InvestigationResult { .. } => {}
        }
    }
}
