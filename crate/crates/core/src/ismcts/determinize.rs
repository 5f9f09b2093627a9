use rand::seq::SliceRandom;
use rand::Rng;

use super::filter::RoleFilter;
use super::knowledge::CardKnowledge;
use crate::game::{
    CardCounts, Deck, GameConfig, GameState, Hand, HiddenState, Observation, Party, Phase, SeatSet, FASCIST_CARDS,
    LIBERAL_CARDS,
};

/// Samples full states from one seat's information set. Role candidates and
/// card knowledge are computed once; each sample only shuffles.
#[derive(Debug, Clone)]
pub struct Determinizer {
    observation: Observation,
    config: GameConfig,
    filter: RoleFilter,
    knowledge: CardKnowledge,
    president_hand: Option<Vec<Party>>,
    president_hand_len: usize,
    chancellor_hand: Option<Vec<Party>>,
    chancellor_hand_len: usize,
    /// Cards whose location this seat cannot pin down.
    unseen: CardCounts,
}

impl Determinizer {
    pub fn new(observation: &Observation, filter: RoleFilter) -> Self {
        assert!(!filter.is_empty(), "determinizing from an empty role filter");
        let obs = observation;
        let p = &obs.public;
        let knowledge = CardKnowledge::from_observation(obs);
        let holds_president_hand = p.phase == Phase::LegislativePresident;
        let holds_chancellor_hand = matches!(p.phase, Phase::LegislativeChancellor | Phase::VetoConsent);
        let president_hand_len = if holds_president_hand { 3 } else { 0 };
        let chancellor_hand_len = if holds_chancellor_hand { 2 } else { 0 };

        let president_hand = (holds_president_hand && p.president == obs.seat).then(|| obs.hand.clone());
        let chancellor_hand = if holds_chancellor_hand && p.nominated_chancellor == Some(obs.seat) {
            Some(obs.hand.clone())
        } else if holds_chancellor_hand && p.president == obs.seat {
            knowledge.chancellor_hand.map(|h| h.to_vec())
        } else {
            None
        };

        let mut accounted = CardCounts::of(&knowledge.top) + knowledge.discard;
        for hand in president_hand.iter().chain(chancellor_hand.iter()) {
            accounted = accounted + CardCounts::of(hand);
        }
        let unseen = CardCounts {
            liberal: LIBERAL_CARDS - p.liberal_enacted - accounted.liberal,
            fascist: FASCIST_CARDS - p.fascist_enacted - accounted.fascist,
        };
        let slots = p.deck_len as usize - knowledge.top.len() + p.discard_len as usize - knowledge.discard.total()
            + if president_hand.is_none() { president_hand_len } else { 0 }
            + if chancellor_hand.is_none() { chancellor_hand_len } else { 0 };
        assert_eq!(slots, unseen.total(), "card knowledge inconsistent with the public board");

        Determinizer {
            observation: obs.clone(),
            config: obs.config,
            filter,
            knowledge,
            president_hand,
            president_hand_len,
            chancellor_hand,
            chancellor_hand_len,
            unseen,
        }
    }

    pub fn observation(&self) -> &Observation {
        &self.observation
    }

    pub fn filter(&self) -> &RoleFilter {
        &self.filter
    }

    pub fn knowledge(&self) -> &CardKnowledge {
        &self.knowledge
    }

    /// One full state: a uniform role candidate and a uniform placement of
    /// the unseen cards into every unknown position.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GameState {
        let obs = &self.observation;
        let p = &obs.public;
        let n = self.config.num_players;
        let roles = self.filter.sample(rng).roles(n);

        let mut pool = Deck::new();
        for _ in 0..self.unseen.fascist {
            pool.push(Party::Fascist);
        }
        for _ in 0..self.unseen.liberal {
            pool.push(Party::Liberal);
        }
        pool.shuffle(rng);
        let mut pool = pool.into_iter();

        let mut deck = Deck::new();
        deck.extend(self.knowledge.top.iter().copied());
        while deck.len() < p.deck_len as usize {
            deck.push(pool.next().expect("pool covers the deck"));
        }
        let mut discard = self.knowledge.discard;
        while discard.total() < p.discard_len as usize {
            discard.add(pool.next().expect("pool covers the discard"));
        }
        let mut fill = |known: &Option<Vec<Party>>, len: usize| -> Hand {
            match known {
                Some(cards) => cards.iter().copied().collect(),
                None => (0..len).map(|_| pool.next().expect("pool covers the hands")).collect(),
            }
        };
        let president_hand = fill(&self.president_hand, self.president_hand_len);
        let chancellor_hand = fill(&self.chancellor_hand, self.chancellor_hand_len);

        let mut pending_ja = SeatSet::default();
        for voter in p.ballots_cast.iter() {
            let ja = if voter == obs.seat {
                obs.own_ballot.unwrap_or(false)
            } else {
                rng.gen_bool(0.5)
            };
            if ja {
                pending_ja.insert(voter);
            }
        }

        let mut private = vec![Vec::new(); n];
        private[obs.seat.idx()] = obs.private_card_events.clone();
        let hidden = HiddenState {
            roles,
            deck,
            discard,
            president_hand,
            chancellor_hand,
            pending_ja,
        };
        let mut state = GameState::from_parts(self.config, p.clone(), hidden, private);
        state.set_record_events(false);
        state
    }
}

/// Convenience wrapper building a one-off [`Determinizer`].
pub fn sample_determinization<R: Rng + ?Sized>(
    observation: &Observation,
    filter: &RoleFilter,
    rng: &mut R,
) -> GameState {
    Determinizer::new(observation, filter.clone()).sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Action, CardCounts, Role};
    use crate::ismcts::filter::RoleAssignment;
    use crate::rng::rng_from_seed;

    fn play_random_until<F: Fn(&GameState) -> bool>(n: usize, seed: u64, stop: F) -> Option<GameState> {
        let mut rng = rng_from_seed(seed);
        let mut g = GameState::new_game(GameConfig::new(n).unwrap(), &mut rng).unwrap();
        let mut buf = Vec::new();
        while !g.is_terminal() {
            if stop(&g) {
                return Some(g);
            }
            g.legal_actions_into(&mut buf).unwrap();
            let a = buf[rng.gen_range(0..buf.len())];
            g.apply_action(a, &mut rng).unwrap();
        }
        None
    }

    fn check_valid(truth: &GameState, samples: usize, seed: u64) {
        let seat = truth.actor().unwrap();
        let obs = truth.observe(seat).unwrap();
        let filter = RoleFilter::from_observation(&obs);
        assert!(filter.contains(&RoleAssignment::from_roles(truth.roles())));
        let det = Determinizer::new(&obs, filter);
        let mut rng = rng_from_seed(seed);
        for _ in 0..samples {
            let d = det.sample(&mut rng);
            assert_eq!(d.observe(seat).unwrap(), obs);
            assert_eq!(d.card_totals(), CardCounts { liberal: 6, fascist: 11 });
            assert_eq!(d.legal_actions().unwrap(), truth.legal_actions().unwrap());
        }
    }

    #[test]
    fn samples_reproduce_observation_across_phases() {
        for seed in 0..60u64 {
            let n = 5 + (seed % 6) as usize;
            for depth in [0usize, 7, 25, 60, 120] {
                let mut steps = 0usize;
                let truth = {
                    let mut rng = rng_from_seed(seed);
                    let mut g = GameState::new_game(GameConfig::new(n).unwrap(), &mut rng).unwrap();
                    let mut buf = Vec::new();
                    while !g.is_terminal() && steps < depth {
                        g.legal_actions_into(&mut buf).unwrap();
                        let a = buf[rng.gen_range(0..buf.len())];
                        g.apply_action(a, &mut rng).unwrap();
                        steps += 1;
                    }
                    g
                };
                if !truth.is_terminal() {
                    check_valid(&truth, 20, seed);
                }
            }
        }
    }

    #[test]
    fn legislative_and_veto_points() {
        for (phase, seed) in [
            (Phase::LegislativePresident, 1u64),
            (Phase::LegislativeChancellor, 2),
            (Phase::VetoConsent, 3),
            (Phase::ExecutiveAction(crate::game::Power::PolicyPeek), 4),
        ] {
            let mut hits = 0;
            for s in seed * 1000..seed * 1000 + 400 {
                if let Some(g) = play_random_until(5, s, |g| g.phase() == phase) {
                    check_valid(&g, 10, s);
                    hits += 1;
                }
            }
            assert!(hits > 0, "never reached {phase:?}");
        }
    }

    #[test]
    fn fascist_observer_only_deck_varies() {
        let g = play_random_until(5, 9, |g| {
            let a = g.actor().unwrap();
            g.role(a) == Role::Fascist
        })
        .unwrap();
        let seat = g.actor().unwrap();
        let obs = g.observe(seat).unwrap();
        let det = Determinizer::new(&obs, RoleFilter::from_observation(&obs));
        let mut rng = rng_from_seed(1);
        let first = det.sample(&mut rng);
        let mut deck_varied = false;
        for _ in 0..50 {
            let d = det.sample(&mut rng);
            assert_eq!(d.roles(), g.roles());
            deck_varied |= d.hidden.deck != first.hidden.deck;
        }
        assert!(deck_varied);
    }

    #[test]
    fn president_knows_passed_cards_during_veto() {
        let mut hits = 0;
        for s in 0..2000u64 {
            let Some(g) = play_random_until(5, s, |g| g.phase() == Phase::VetoConsent) else { continue };
            let obs = g.observe(g.public.president).unwrap();
            let det = Determinizer::new(&obs, RoleFilter::from_observation(&obs));
            let d = det.sample(&mut rng_from_seed(s));
            assert_eq!(d.hidden.chancellor_hand, g.hidden.chancellor_hand);
            hits += 1;
            if hits > 5 {
                break;
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn peeked_cards_stay_on_top() {
        let mut hits = 0;
        for s in 0..3000u64 {
            let Some(mut g) =
                play_random_until(5, s, |g| g.phase() == Phase::ExecutiveAction(crate::game::Power::PolicyPeek))
            else {
                continue;
            };
            let peeker = g.public.president;
            g.apply_action(Action::AcknowledgePeek, &mut rng_from_seed(0)).unwrap();
            let obs = g.observe(peeker).unwrap();
            let det = Determinizer::new(&obs, RoleFilter::from_observation(&obs));
            for i in 0..5 {
                let d = det.sample(&mut rng_from_seed(i));
                assert_eq!(&d.hidden.deck[..3], &g.hidden.deck[..3]);
            }
            hits += 1;
            if hits > 5 {
                break;
            }
        }
        assert!(hits > 0);
    }
}
