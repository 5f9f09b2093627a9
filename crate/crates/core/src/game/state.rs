use std::sync::Arc;

use arrayvec::ArrayVec;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::action::{Action, Phase};
use super::board::{board_power, veto_unlocked};
use super::event::{PrivateEvent, PublicEvent, Stamped, VoteRecord};
use super::types::*;
use crate::error::{Error, Result};

pub type Deck = ArrayVec<Party, DECK_SIZE>;
pub type Hand = ArrayVec<Party, 3>;

/// Fascist/Liberal card tally for an unordered pile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CardCounts {
    pub liberal: u8,
    pub fascist: u8,
}

impl CardCounts {
    pub fn of(cards: &[Party]) -> Self {
        let mut c = CardCounts::default();
        for &card in cards {
            c.add(card);
        }
        c
    }

    pub fn add(&mut self, card: Party) {
        match card {
            Party::Liberal => self.liberal += 1,
            Party::Fascist => self.fascist += 1,
        }
    }

    pub fn total(&self) -> usize {
        (self.liberal + self.fascist) as usize
    }

    pub fn get(&self, party: Party) -> u8 {
        match party {
            Party::Liberal => self.liberal,
            Party::Fascist => self.fascist,
        }
    }
}

impl std::ops::Add for CardCounts {
    type Output = CardCounts;
    fn add(self, rhs: CardCounts) -> CardCounts {
        CardCounts {
            liberal: self.liberal + rhs.liberal,
            fascist: self.fascist + rhs.fascist,
        }
    }
}

/// Everything on the table that every seat can see.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicState {
    pub num_players: u8,
    pub liberal_enacted: u8,
    pub fascist_enacted: u8,
    pub election_tracker: u8,
    pub president: Seat,
    /// Nominee during an election, sitting chancellor during a session.
    pub nominated_chancellor: Option<Seat>,
    pub last_elected_president: Option<Seat>,
    pub last_elected_chancellor: Option<Seat>,
    pub alive: SeatSet,
    pub phase: Phase,
    /// Ballots of the most recent completed election.
    pub vote_record: Option<VoteRecord>,
    /// Seats that have voted in the open election; their choices stay hidden.
    pub ballots_cast: SeatSet,
    pub deck_len: u8,
    pub discard_len: u8,
    pub investigated: SeatSet,
    /// Seat after which rotation resumes once a special-election president is done.
    pub special_election_return: Option<Seat>,
    pub veto_refused: bool,
    /// Presidencies started so far, counting the current one.
    pub round: u32,
    pub public_events: Arc<Vec<PublicEvent>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HiddenState {
    pub roles: ArrayVec<Role, MAX_PLAYERS>,
    /// Index 0 is the top of the deck.
    pub deck: Deck,
    pub discard: CardCounts,
    pub president_hand: Hand,
    pub chancellor_hand: Hand,
    /// Ja ballots among `PublicState::ballots_cast`.
    pub pending_ja: SeatSet,
}

/// A complete game snapshot. Transitions only through [`GameState::apply_action`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub config: GameConfig,
    pub public: PublicState,
    pub hidden: HiddenState,
    pub(crate) private_events: Arc<Vec<Vec<Stamped>>>,
    outcome: Option<Outcome>,
    #[serde(skip, default = "default_true")]
    record_events: bool,
}

fn default_true() -> bool {
    true
}

impl GameState {
    /// Deals roles, shuffles the 17-card deck and seats a random first president.
    pub fn new_game<R: Rng + ?Sized>(config: GameConfig, rng: &mut R) -> Result<GameState> {
        config.validate()?;
        let n = config.num_players;
        let mut roles: ArrayVec<Role, MAX_PLAYERS> = ArrayVec::new();
        roles.push(Role::Hitler);
        for _ in 0..config.fascists() {
            roles.push(Role::Fascist);
        }
        while roles.len() < n {
            roles.push(Role::Liberal);
        }
        roles.shuffle(rng);

        let mut deck = Deck::new();
        for _ in 0..FASCIST_CARDS {
            deck.push(Party::Fascist);
        }
        for _ in 0..LIBERAL_CARDS {
            deck.push(Party::Liberal);
        }
        deck.shuffle(rng);

        let president = Seat(rng.gen_range(0..n) as u8);
        Ok(GameState {
            config,
            public: PublicState {
                num_players: n as u8,
                liberal_enacted: 0,
                fascist_enacted: 0,
                election_tracker: 0,
                president,
                nominated_chancellor: None,
                last_elected_president: None,
                last_elected_chancellor: None,
                alive: SeatSet::full(n),
                phase: Phase::Nomination,
                vote_record: None,
                ballots_cast: SeatSet::default(),
                deck_len: DECK_SIZE as u8,
                discard_len: 0,
                investigated: SeatSet::default(),
                special_election_return: None,
                veto_refused: false,
                round: 1,
                public_events: Arc::new(Vec::new()),
            },
            hidden: HiddenState {
                roles,
                deck,
                discard: CardCounts::default(),
                president_hand: Hand::new(),
                chancellor_hand: Hand::new(),
                pending_ja: SeatSet::default(),
            },
            private_events: Arc::new(vec![Vec::new(); n]),
            outcome: None,
            record_events: true,
        })
    }

    pub(crate) fn from_parts(
        config: GameConfig,
        public: PublicState,
        hidden: HiddenState,
        private_events: Vec<Vec<Stamped>>,
    ) -> GameState {
        GameState {
            config,
            public,
            hidden,
            private_events: Arc::new(private_events),
            outcome: None,
            record_events: true,
        }
    }

    /// Stops appending to the event logs. Search copies use this; the logs
    /// they inherited stay intact.
    pub fn set_record_events(&mut self, record: bool) {
        self.record_events = record;
    }

    pub fn num_players(&self) -> usize {
        self.config.num_players
    }

    pub fn phase(&self) -> Phase {
        self.public.phase
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.outcome
    }

    pub fn is_terminal(&self) -> bool {
        self.outcome.is_some()
    }

    pub fn role(&self, seat: Seat) -> Role {
        self.hidden.roles[seat.idx()]
    }

    pub fn roles(&self) -> &[Role] {
        &self.hidden.roles
    }

    pub fn public_events(&self) -> &[PublicEvent] {
        &self.public.public_events
    }

    pub fn private_events(&self, seat: Seat) -> &[Stamped] {
        &self.private_events[seat.idx()]
    }

    pub fn chancellor(&self) -> Option<Seat> {
        self.public.nominated_chancellor
    }

    /// Cards of each party across deck, discard, both hands and the board.
    pub fn card_totals(&self) -> CardCounts {
        let h = &self.hidden;
        CardCounts::of(&h.deck)
            + h.discard
            + CardCounts::of(&h.president_hand)
            + CardCounts::of(&h.chancellor_hand)
            + CardCounts {
                liberal: self.public.liberal_enacted,
                fascist: self.public.fascist_enacted,
            }
    }

    /// The seat that must act next, or `None` once the game is over.
    pub fn actor(&self) -> Option<Seat> {
        let p = &self.public;
        match p.phase {
            Phase::GameOver => None,
            Phase::Election => self.next_voter(),
            Phase::LegislativeChancellor => p.nominated_chancellor,
            Phase::Nomination
            | Phase::LegislativePresident
            | Phase::ExecutiveAction(_)
            | Phase::VetoConsent => Some(p.president),
        }
    }

    fn next_voter(&self) -> Option<Seat> {
        let pending = self.public.alive.0 & !self.public.ballots_cast.0;
        (pending != 0).then(|| Seat(pending.trailing_zeros() as u8))
    }

    pub fn eligible_chancellor(&self, candidate: Seat) -> bool {
        let p = &self.public;
        if candidate == p.president || !p.alive.contains(candidate) {
            return false;
        }
        if self.config.term_limits_enabled {
            if p.last_elected_chancellor == Some(candidate) {
                return false;
            }
            if p.alive.len() > 5 && p.last_elected_president == Some(candidate) {
                return false;
            }
        }
        true
    }

    fn power_target(&self, target: Seat, power: Power) -> bool {
        let p = &self.public;
        if target == p.president || !p.alive.contains(target) {
            return false;
        }
        !(power == Power::InvestigateLoyalty
            && self.config.investigate_once_per_target
            && p.investigated.contains(target))
    }

    /// Acting seat and its legal actions.
    pub fn legal_actions(&self) -> Result<(Seat, Vec<Action>)> {
        let mut buf = Vec::new();
        let seat = self.legal_actions_into(&mut buf)?;
        Ok((seat, buf))
    }

    /// Same as [`legal_actions`](Self::legal_actions) but reuses `buf`.
    pub fn legal_actions_into(&self, buf: &mut Vec<Action>) -> Result<Seat> {
        buf.clear();
        let actor = self.actor().ok_or(Error::GameOver)?;
        let p = &self.public;
        let n = self.num_players() as u8;
        match p.phase {
            Phase::GameOver => unreachable!(),
            Phase::Nomination => {
                buf.extend(
                    (0..n)
                        .map(Seat)
                        .filter(|&s| self.eligible_chancellor(s))
                        .map(Action::Nominate),
                );
            }
            Phase::Election => buf.extend([Action::Vote(true), Action::Vote(false)]),
            Phase::LegislativePresident => {
                buf.extend((0..self.hidden.president_hand.len() as u8).map(Action::PresidentDiscard));
            }
            Phase::LegislativeChancellor => {
                buf.extend((0..self.hidden.chancellor_hand.len() as u8).map(Action::ChancellorEnact));
                if veto_unlocked(p.fascist_enacted) && !p.veto_refused {
                    buf.push(Action::ProposeVeto);
                }
            }
            Phase::VetoConsent => buf.extend([Action::VetoDecision(true), Action::VetoDecision(false)]),
            Phase::ExecutiveAction(power) => match power {
                Power::PolicyPeek => buf.push(Action::AcknowledgePeek),
                Power::InvestigateLoyalty | Power::SpecialElection | Power::Execution => {
                    let make = match power {
                        Power::InvestigateLoyalty => Action::Investigate,
                        Power::SpecialElection => Action::ChooseSpecialElection,
                        _ => Action::Execute,
                    };
                    buf.extend(
                        (0..n)
                            .map(Seat)
                            .filter(|&s| self.power_target(s, power))
                            .map(make),
                    );
                }
                Power::Veto => unreachable!("veto is never an executive phase"),
            },
        }
        debug_assert!(!buf.is_empty(), "deadlock in {:?}", p.phase);
        Ok(actor)
    }

    pub fn is_legal(&self, action: Action) -> bool {
        let p = &self.public;
        match (p.phase, action) {
            (Phase::GameOver, _) => false,
            (Phase::Nomination, Action::Nominate(s)) => s.idx() < self.num_players() && self.eligible_chancellor(s),
            (Phase::Election, Action::Vote(_)) => true,
            (Phase::LegislativePresident, Action::PresidentDiscard(i)) => {
                (i as usize) < self.hidden.president_hand.len()
            }
            (Phase::LegislativeChancellor, Action::ChancellorEnact(i)) => {
                (i as usize) < self.hidden.chancellor_hand.len()
            }
            (Phase::LegislativeChancellor, Action::ProposeVeto) => {
                veto_unlocked(p.fascist_enacted) && !p.veto_refused
            }
            (Phase::VetoConsent, Action::VetoDecision(_)) => true,
            (Phase::ExecutiveAction(Power::PolicyPeek), Action::AcknowledgePeek) => true,
            (Phase::ExecutiveAction(Power::InvestigateLoyalty), Action::Investigate(s))
            | (Phase::ExecutiveAction(Power::SpecialElection), Action::ChooseSpecialElection(s))
            | (Phase::ExecutiveAction(Power::Execution), Action::Execute(s)) => {
                let power = match p.phase {
                    Phase::ExecutiveAction(pw) => pw,
                    _ => unreachable!(),
                };
                s.idx() < self.num_players() && self.power_target(s, power)
            }
            _ => false,
        }
    }

    /// Applies a legal action. Illegal actions are rejected and leave the
    /// state untouched. `rng` is only consumed when a reshuffle happens.
    pub fn apply_action<R: Rng + ?Sized>(&mut self, action: Action, rng: &mut R) -> Result<Option<Outcome>> {
        if self.is_terminal() {
            return Err(Error::GameOver);
        }
        if !self.is_legal(action) {
            return Err(Error::IllegalAction {
                action,
                phase: self.public.phase,
            });
        }
        match action {
            Action::Nominate(c) => {
                self.public.nominated_chancellor = Some(c);
                self.public.phase = Phase::Election;
                self.public.ballots_cast = SeatSet::default();
                self.hidden.pending_ja = SeatSet::default();
                self.emit(PublicEvent::Nominated {
                    president: self.public.president,
                    chancellor: c,
                });
            }
            Action::Vote(ja) => {
                let voter = self.next_voter().expect("election with no pending voter");
                self.public.ballots_cast.insert(voter);
                if ja {
                    self.hidden.pending_ja.insert(voter);
                }
                if self.public.ballots_cast == self.public.alive {
                    self.resolve_election(rng);
                }
            }
            Action::PresidentDiscard(i) => {
                let president = self.public.president;
                let chancellor = self.public.nominated_chancellor.expect("session without chancellor");
                let discarded = self.hidden.president_hand.remove(i as usize);
                self.to_discard(discarded);
                let passed = [self.hidden.president_hand[0], self.hidden.president_hand[1]];
                self.hidden.chancellor_hand = self.hidden.president_hand.take();
                self.public.phase = Phase::LegislativeChancellor;
                self.emit(PublicEvent::PresidentDiscarded { president });
                self.emit_private(president, PrivateEvent::Discarded { discarded, passed });
                self.emit_private(chancellor, PrivateEvent::Received(passed));
            }
            Action::ChancellorEnact(i) => {
                let party = self.hidden.chancellor_hand.remove(i as usize);
                let rest = self.hidden.chancellor_hand.take();
                for card in rest {
                    self.to_discard(card);
                }
                self.enact_from_government(party, rng);
            }
            Action::ProposeVeto => {
                self.public.phase = Phase::VetoConsent;
                let chancellor = self.public.nominated_chancellor.expect("session without chancellor");
                self.emit(PublicEvent::VetoProposed { chancellor });
            }
            Action::VetoDecision(agreed) => {
                let president = self.public.president;
                self.emit(PublicEvent::VetoResolved { president, agreed });
                if agreed {
                    let hand = self.hidden.chancellor_hand.take();
                    for card in hand {
                        self.to_discard(card);
                    }
                    self.advance_tracker(rng);
                    if !self.is_terminal() {
                        self.end_session(None);
                    }
                } else {
                    self.public.veto_refused = true;
                    self.public.phase = Phase::LegislativeChancellor;
                }
            }
            Action::Investigate(target) => {
                let president = self.public.president;
                self.public.investigated.insert(target);
                let party = self.role(target).party();
                self.emit(PublicEvent::Investigated { president, target });
                self.emit_private(president, PrivateEvent::InvestigationResult { target, party });
                self.end_session(None);
            }
            Action::ChooseSpecialElection(candidate) => {
                let president = self.public.president;
                self.public.special_election_return = Some(president);
                self.emit(PublicEvent::SpecialElectionCalled { president, candidate });
                self.end_session(Some(candidate));
            }
            Action::AcknowledgePeek => self.end_session(None),
            Action::Execute(target) => {
                let president = self.public.president;
                let was_hitler = self.role(target) == Role::Hitler;
                self.emit(PublicEvent::Executed {
                    president,
                    target,
                    was_hitler,
                });
                if was_hitler {
                    self.finish(EndReason::HitlerKilled);
                } else {
                    self.public.alive.remove(target);
                    self.end_session(None);
                }
            }
        }
        Ok(self.outcome)
    }

    fn resolve_election<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let p = &mut self.public;
        let votes = VoteRecord {
            voters: p.ballots_cast,
            ja: self.hidden.pending_ja,
        };
        let passed = votes.ja_count() * 2 > p.alive.len();
        let chancellor = p.nominated_chancellor.expect("election without nominee");
        let president = p.president;
        let fascist_enacted = p.fascist_enacted;
        p.vote_record = Some(votes);
        p.ballots_cast = SeatSet::default();
        self.hidden.pending_ja = SeatSet::default();
        self.emit(PublicEvent::Election {
            president,
            chancellor,
            votes,
            passed,
            fascist_enacted,
        });
        if passed {
            if self.role(chancellor) == Role::Hitler && fascist_enacted >= HITLER_ZONE {
                self.finish(EndReason::HitlerElected);
                return;
            }
            self.public.last_elected_president = Some(president);
            self.public.last_elected_chancellor = Some(chancellor);
            self.ensure_deck(rng);
            let drawn: [Party; 3] = [self.hidden.deck[0], self.hidden.deck[1], self.hidden.deck[2]];
            self.hidden.deck.drain(..3);
            self.hidden.president_hand = Hand::from(drawn);
            self.public.deck_len -= 3;
            self.public.phase = Phase::LegislativePresident;
            self.emit(PublicEvent::PresidentDrew { president });
            self.emit_private(president, PrivateEvent::Drew(drawn));
        } else {
            self.public.nominated_chancellor = None;
            self.advance_tracker(rng);
            if !self.is_terminal() {
                self.end_session(None);
            }
        }
    }

    /// A failed government. Three in a row enacts the top card.
    fn advance_tracker<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        self.public.election_tracker += 1;
        if self.public.election_tracker < CHAOS_THRESHOLD {
            return;
        }
        self.ensure_deck(rng);
        let party = self.hidden.deck.remove(0);
        self.public.deck_len -= 1;
        self.public.election_tracker = 0;
        self.public.last_elected_president = None;
        self.public.last_elected_chancellor = None;
        self.count_enacted(party);
        self.emit(PublicEvent::Chaos { party });
        self.check_policy_win();
    }

    fn enact_from_government<R: Rng + ?Sized>(&mut self, party: Party, rng: &mut R) {
        let president = self.public.president;
        let chancellor = self.public.nominated_chancellor.expect("session without chancellor");
        self.count_enacted(party);
        self.public.election_tracker = 0;
        self.emit(PublicEvent::PolicyEnacted {
            party,
            president,
            chancellor,
        });
        if self.check_policy_win() {
            return;
        }
        if party == Party::Fascist {
            let power = board_power(self.num_players(), self.public.fascist_enacted)
                .expect("fascist slot within board");
            if let Some(power) = power {
                if self.grant_power(power, rng) {
                    return;
                }
            }
        }
        self.end_session(None);
    }

    /// Enters the executive phase. Returns false when the power has no
    /// legal target and is skipped.
    fn grant_power<R: Rng + ?Sized>(&mut self, power: Power, rng: &mut R) -> bool {
        let president = self.public.president;
        let has_target = match power {
            Power::PolicyPeek => true,
            _ => (0..self.num_players() as u8)
                .map(Seat)
                .any(|s| self.power_target(s, power)),
        };
        if !has_target {
            return false;
        }
        self.public.phase = Phase::ExecutiveAction(power);
        self.emit(PublicEvent::PowerGranted { president, power });
        if power == Power::PolicyPeek {
            self.ensure_deck(rng);
            let top = [self.hidden.deck[0], self.hidden.deck[1], self.hidden.deck[2]];
            self.emit(PublicEvent::PolicyPeeked { president });
            self.emit_private(president, PrivateEvent::Peeked(top));
        }
        true
    }

    fn count_enacted(&mut self, party: Party) {
        match party {
            Party::Liberal => self.public.liberal_enacted += 1,
            Party::Fascist => self.public.fascist_enacted += 1,
        }
    }

    fn check_policy_win(&mut self) -> bool {
        if self.public.liberal_enacted >= LIBERAL_POLICIES_TO_WIN {
            self.finish(EndReason::FiveLiberalPolicies);
            true
        } else if self.public.fascist_enacted >= FASCIST_POLICIES_TO_WIN {
            self.finish(EndReason::SixFascistPolicies);
            true
        } else {
            false
        }
    }

    fn finish(&mut self, reason: EndReason) {
        let outcome = Outcome::new(reason);
        self.outcome = Some(outcome);
        self.public.phase = Phase::GameOver;
        self.emit(PublicEvent::GameEnded(outcome));
    }

    fn to_discard(&mut self, card: Party) {
        self.hidden.discard.add(card);
        self.public.discard_len += 1;
    }

    /// Shuffles the discard back under the remaining deck when fewer than
    /// three cards are left.
    fn ensure_deck<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        if self.hidden.deck.len() >= 3 {
            return;
        }
        let discard = std::mem::take(&mut self.hidden.discard);
        for _ in 0..discard.fascist {
            self.hidden.deck.push(Party::Fascist);
        }
        for _ in 0..discard.liberal {
            self.hidden.deck.push(Party::Liberal);
        }
        self.hidden.deck.shuffle(rng);
        self.public.deck_len = self.hidden.deck.len() as u8;
        self.public.discard_len = 0;
        self.emit(PublicEvent::Reshuffled {
            deck_len: self.public.deck_len,
        });
    }

    /// Closes the current presidency and seats the next president.
    fn end_session(&mut self, special_candidate: Option<Seat>) {
        let p = &mut self.public;
        p.veto_refused = false;
        p.nominated_chancellor = None;
        p.round += 1;
        p.president = match special_candidate {
            Some(candidate) => candidate,
            None => {
                let from = p.special_election_return.take().unwrap_or(p.president);
                next_alive_after(p.alive, from, self.config.num_players)
            }
        };
        p.phase = Phase::Nomination;
    }

    fn emit(&mut self, event: PublicEvent) {
        if self.record_events {
            Arc::make_mut(&mut self.public.public_events).push(event);
        }
    }

    fn emit_private(&mut self, seat: Seat, event: PrivateEvent) {
        if self.record_events {
            let after = self.public.public_events.len() as u32;
            Arc::make_mut(&mut self.private_events)[seat.idx()].push(Stamped { after, event });
        }
    }

    /// Canonical text form used by trace output.
    pub fn to_canonical_string(&self) -> String {
        serde_json::to_string(self).expect("state serializes")
    }
}

/// Next living seat clockwise from `from` (which may itself be dead).
pub fn next_alive_after(alive: SeatSet, from: Seat, num_players: usize) -> Seat {
    (1..=num_players)
        .map(|k| Seat(((from.idx() + k) % num_players) as u8))
        .find(|&s| alive.contains(s))
        .expect("at least one seat alive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn game(n: usize, seed: u64) -> GameState {
        GameState::new_game(GameConfig::new(n).unwrap(), &mut rng_from_seed(seed)).unwrap()
    }

    /// Replaces the deck with `top` followed by the remaining cards in a fixed
    /// order, keeping the 11/6 split.
    /// Puts `top` on the deck and the rest of the cards not on the board below it.
    fn stack_deck(g: &mut GameState, top: &[Party]) {
        let mut f = FASCIST_CARDS as usize - g.public.fascist_enacted as usize - top.iter().filter(|&&c| c == Party::Fascist).count();
        let mut l = LIBERAL_CARDS as usize - g.public.liberal_enacted as usize - top.iter().filter(|&&c| c == Party::Liberal).count();
        let mut deck = Deck::new();
        deck.extend(top.iter().copied());
        while f + l > 0 {
            if l > 0 {
                deck.push(Party::Liberal);
                l -= 1;
            }
            if f > 0 {
                deck.push(Party::Fascist);
                f -= 1;
            }
        }
        g.public.deck_len = deck.len() as u8;
        g.hidden.deck = deck;
    }

    fn vote_all(g: &mut GameState, ja: bool) {
        let mut rng = rng_from_seed(0);
        while g.phase() == Phase::Election {
            g.apply_action(Action::Vote(ja), &mut rng).unwrap();
        }
    }

    fn elect(g: &mut GameState, chancellor: Seat) {
        let mut rng = rng_from_seed(0);
        g.apply_action(Action::Nominate(chancellor), &mut rng).unwrap();
        vote_all(g, true);
    }

    fn seat_with(g: &GameState, role: Role) -> Seat {
        Seat(g.roles().iter().position(|&r| r == role).unwrap() as u8)
    }

    fn some_other_seat(g: &GameState, not: &[Seat], pred: impl Fn(Role) -> bool) -> Seat {
        (0..g.num_players() as u8)
            .map(Seat)
            .find(|s| !not.contains(s) && pred(g.role(*s)) && g.public.alive.contains(*s))
            .unwrap()
    }

    #[test]
    fn new_game_setup() {
        let g = game(5, 11);
        let mut counts = [0; 3];
        for r in g.roles() {
            counts[*r as usize] += 1;
        }
        assert_eq!(counts, [3, 1, 1]);
        assert_eq!(g.hidden.deck.len(), 17);
        assert_eq!(CardCounts::of(&g.hidden.deck).fascist, 11);
        assert_eq!(g.phase(), Phase::Nomination);
        assert_eq!(g.public.election_tracker, 0);
        assert_eq!(g, game(5, 11));
    }

    #[test]
    fn first_nomination_has_everyone_else() {
        let g = game(5, 3);
        let (actor, legal) = g.legal_actions().unwrap();
        assert_eq!(actor, g.public.president);
        assert_eq!(legal.len(), 4);
        assert!(legal.iter().all(|a| matches!(a, Action::Nominate(s) if *s != actor)));
    }

    #[test]
    fn term_limits() {
        let mut g = game(7, 5);
        let pres = g.public.president;
        let chanc = some_other_seat(&g, &[pres], |_| true);
        g.public.last_elected_president = Some(pres);
        g.public.last_elected_chancellor = Some(chanc);
        // rotate to someone else
        let next = next_alive_after(g.public.alive, pres, 7);
        let next = if next == chanc { next_alive_after(g.public.alive, next, 7) } else { next };
        g.public.president = next;
        let (_, legal) = g.legal_actions().unwrap();
        assert!(!legal.contains(&Action::Nominate(chanc)));
        assert!(!legal.contains(&Action::Nominate(pres)));
        assert_eq!(legal.len(), 7 - 3);

        let mut relaxed = g.clone();
        relaxed.config.term_limits_enabled = false;
        assert_eq!(relaxed.legal_actions().unwrap().1.len(), 6);

        // five alive: the previous president becomes eligible again
        g.public.alive.remove(some_other_seat(&g, &[pres, chanc, next], |_| true));
        g.public.alive.remove(some_other_seat(&g, &[pres, chanc, next], |_| true));
        let (_, legal) = g.legal_actions().unwrap();
        assert!(legal.contains(&Action::Nominate(pres)));
        assert!(!legal.contains(&Action::Nominate(chanc)));
    }

    #[test]
    fn three_failed_elections_cause_chaos() {
        let mut g = game(5, 9);
        stack_deck(&mut g, &[Party::Liberal]);
        let mut rng = rng_from_seed(1);
        for expected_tracker in [1, 2] {
            let (_, legal) = g.legal_actions().unwrap();
            g.apply_action(legal[0], &mut rng).unwrap();
            vote_all(&mut g, false);
            assert_eq!(g.public.election_tracker, expected_tracker);
            assert_eq!(g.phase(), Phase::Nomination);
        }
        let (_, legal) = g.legal_actions().unwrap();
        g.apply_action(legal[0], &mut rng).unwrap();
        vote_all(&mut g, false);
        assert_eq!(g.public.election_tracker, 0);
        assert_eq!(g.public.liberal_enacted, 1);
        assert_eq!(g.public.deck_len, 16);
        assert_eq!(g.public.last_elected_chancellor, None);
        assert!(matches!(g.public_events().iter().rev().nth(0), Some(PublicEvent::Chaos { party: Party::Liberal })));
    }

    #[test]
    fn tied_vote_fails() {
        let mut g = game(6, 2);
        let mut rng = rng_from_seed(1);
        let (_, legal) = g.legal_actions().unwrap();
        g.apply_action(legal[0], &mut rng).unwrap();
        for i in 0..6 {
            g.apply_action(Action::Vote(i % 2 == 0), &mut rng).unwrap();
        }
        assert_eq!(g.public.election_tracker, 1);
        assert_eq!(g.public.vote_record.unwrap().ja_count(), 3);
    }

    #[test]
    fn hitler_elected_after_three_fascist_policies() {
        let mut g = game(5, 4);
        g.public.fascist_enacted = 3;
        let hitler = seat_with(&g, Role::Hitler);
        if g.public.president == hitler {
            g.public.president = next_alive_after(g.public.alive, hitler, 5);
        }
        elect(&mut g, hitler);
        assert_eq!(g.outcome(), Some(Outcome::new(EndReason::HitlerElected)));
        assert_eq!(g.outcome().unwrap().winning_team, Party::Fascist);
        assert_eq!(g.phase(), Phase::GameOver);
        assert_eq!(g.legal_actions(), Err(Error::GameOver));
    }

    #[test]
    fn hitler_elected_early_is_harmless() {
        let mut g = game(5, 4);
        g.public.fascist_enacted = 2;
        let hitler = seat_with(&g, Role::Hitler);
        if g.public.president == hitler {
            g.public.president = next_alive_after(g.public.alive, hitler, 5);
        }
        elect(&mut g, hitler);
        assert_eq!(g.outcome(), None);
        assert_eq!(g.phase(), Phase::LegislativePresident);
    }

    #[test]
    fn legislative_session_passes_two_cards() {
        let mut g = game(5, 6);
        stack_deck(&mut g, &[Party::Fascist, Party::Fascist, Party::Liberal]);
        let pres = g.public.president;
        let chanc = next_alive_after(g.public.alive, pres, 5);
        elect(&mut g, chanc);
        assert_eq!(g.hidden.president_hand.as_slice(), &[Party::Fascist, Party::Fascist, Party::Liberal]);
        let mut rng = rng_from_seed(0);
        g.apply_action(Action::PresidentDiscard(2), &mut rng).unwrap();
        assert_eq!(g.actor(), Some(chanc));
        let (_, legal) = g.legal_actions().unwrap();
        assert_eq!(legal, vec![Action::ChancellorEnact(0), Action::ChancellorEnact(1)]);
        g.apply_action(Action::ChancellorEnact(1), &mut rng).unwrap();
        assert_eq!(g.public.fascist_enacted, 1);
        assert_eq!(g.hidden.discard, CardCounts { liberal: 1, fascist: 1 });
        assert_eq!(g.public.president, next_alive_after(g.public.alive, pres, 5));
        assert_eq!(g.public.last_elected_chancellor, Some(chanc));
        assert_eq!(g.private_events(pres).len(), 2);
        assert_eq!(
            g.private_events(chanc)[0].event,
            PrivateEvent::Received([Party::Fascist, Party::Fascist])
        );
    }

    #[test]
    fn illegal_action_leaves_state_unchanged() {
        let mut g = game(5, 6);
        let before = g.clone();
        let pres = g.public.president;
        let mut rng = rng_from_seed(0);
        assert!(matches!(
            g.apply_action(Action::Nominate(pres), &mut rng),
            Err(Error::IllegalAction { .. })
        ));
        assert!(g.apply_action(Action::Vote(true), &mut rng).is_err());
        assert!(g.apply_action(Action::Nominate(Seat(9)), &mut rng).is_err());
        assert_eq!(g, before);
    }

    fn enact_fascist(g: &mut GameState) {
        let pres = g.public.president;
        let chanc = some_other_seat(g, &[pres], |r| r != Role::Hitler);
        let chanc = if g.eligible_chancellor(chanc) {
            chanc
        } else {
            (0..g.num_players() as u8)
                .map(Seat)
                .find(|&s| g.eligible_chancellor(s) && g.role(s) != Role::Hitler)
                .unwrap()
        };
        stack_deck(g, &[Party::Fascist, Party::Fascist, Party::Fascist]);
        elect(g, chanc);
        let mut rng = rng_from_seed(0);
        g.apply_action(Action::PresidentDiscard(0), &mut rng).unwrap();
        g.apply_action(Action::ChancellorEnact(0), &mut rng).unwrap();
    }

    #[test]
    fn execution_of_hitler_ends_game() {
        let mut g = game(5, 12);
        g.public.fascist_enacted = 3;
        let hitler = seat_with(&g, Role::Hitler);
        while g.public.president == hitler {
            g.public.president = next_alive_after(g.public.alive, hitler, 5);
        }
        g.config.term_limits_enabled = false;
        enact_fascist(&mut g);
        assert_eq!(g.phase(), Phase::ExecutiveAction(Power::Execution));
        let mut rng = rng_from_seed(0);
        g.apply_action(Action::Execute(hitler), &mut rng).unwrap();
        assert_eq!(g.outcome(), Some(Outcome::new(EndReason::HitlerKilled)));
        assert_eq!(g.outcome().unwrap().winning_team, Party::Liberal);
    }

    #[test]
    fn execution_removes_seat() {
        let mut g = game(5, 12);
        g.public.fascist_enacted = 3;
        let hitler = seat_with(&g, Role::Hitler);
        while g.public.president == hitler {
            g.public.president = next_alive_after(g.public.alive, hitler, 5);
        }
        let pres = g.public.president;
        g.config.term_limits_enabled = false;
        enact_fascist(&mut g);
        let victim = some_other_seat(&g, &[pres], |r| r != Role::Hitler);
        let mut rng = rng_from_seed(0);
        g.apply_action(Action::Execute(victim), &mut rng).unwrap();
        assert!(!g.public.alive.contains(victim));
        assert_eq!(g.outcome(), None);
        assert!(matches!(
            g.public_events().last(),
            Some(PublicEvent::Executed { was_hitler: false, .. })
        ));
        // dead seats are skipped for every purpose
        let (_, legal) = g.legal_actions().unwrap();
        assert!(!legal.contains(&Action::Nominate(victim)));
    }

    #[test]
    fn veto_flow() {
        let mut g = game(5, 21);
        g.public.fascist_enacted = 5;
        g.config.term_limits_enabled = false;
        let pres = g.public.president;
        let chanc = some_other_seat(&g, &[pres], |r| r != Role::Hitler);
        stack_deck(&mut g, &[Party::Fascist, Party::Fascist, Party::Liberal]);
        elect(&mut g, chanc);
        let mut rng = rng_from_seed(0);
        g.apply_action(Action::PresidentDiscard(2), &mut rng).unwrap();
        let (_, legal) = g.legal_actions().unwrap();
        assert!(legal.contains(&Action::ProposeVeto));
        g.apply_action(Action::ProposeVeto, &mut rng).unwrap();
        assert_eq!(g.actor(), Some(pres));

        let mut refused = g.clone();
        refused.apply_action(Action::VetoDecision(false), &mut rng).unwrap();
        assert_eq!(refused.phase(), Phase::LegislativeChancellor);
        assert!(!refused.legal_actions().unwrap().1.contains(&Action::ProposeVeto));

        let tracker = g.public.election_tracker;
        g.apply_action(Action::VetoDecision(true), &mut rng).unwrap();
        assert_eq!(g.public.election_tracker, tracker + 1);
        assert_eq!(g.hidden.discard.fascist, 2);
        assert_eq!(g.hidden.discard.liberal, 1);
        assert_eq!(g.phase(), Phase::Nomination);
        assert_eq!(g.card_totals(), CardCounts { liberal: 6, fascist: 11 });
    }

    #[test]
    fn no_veto_before_five() {
        let mut g = game(5, 21);
        g.public.fascist_enacted = 4;
        let pres = g.public.president;
        let next = next_alive_after(g.public.alive, pres, 5);
        elect(&mut g, next);
        g.apply_action(Action::PresidentDiscard(0), &mut rng_from_seed(0)).unwrap();
        assert!(!g.legal_actions().unwrap().1.contains(&Action::ProposeVeto));
    }

    #[test]
    fn special_election_resumes_rotation() {
        let mut g = game(7, 8);
        g.public.fascist_enacted = 2;
        g.config.term_limits_enabled = false;
        let pres = g.public.president;
        enact_fascist(&mut g);
        assert_eq!(g.phase(), Phase::ExecutiveAction(Power::SpecialElection));
        // pick a seat far from the natural successor
        let natural = next_alive_after(g.public.alive, pres, 7);
        let candidate = next_alive_after(g.public.alive, natural, 7);
        let mut rng = rng_from_seed(0);
        g.apply_action(Action::ChooseSpecialElection(candidate), &mut rng).unwrap();
        assert_eq!(g.public.president, candidate);
        // candidate's government fails; rotation resumes after the original president
        let (_, legal) = g.legal_actions().unwrap();
        g.apply_action(legal[0], &mut rng).unwrap();
        vote_all(&mut g, false);
        assert_eq!(g.public.president, natural);
    }

    #[test]
    fn investigation_reveals_party_once() {
        let mut g = game(9, 8);
        g.config.term_limits_enabled = false;
        let pres = g.public.president;
        enact_fascist(&mut g);
        assert_eq!(g.phase(), Phase::ExecutiveAction(Power::InvestigateLoyalty));
        let (_, legal) = g.legal_actions().unwrap();
        assert_eq!(legal.len(), 8);
        let Action::Investigate(target) = legal[0] else { panic!() };
        g.apply_action(legal[0], &mut rng_from_seed(0)).unwrap();
        let last = g.private_events(pres).last().unwrap().event;
        assert_eq!(
            last,
            PrivateEvent::InvestigationResult {
                target,
                party: g.role(target).party()
            }
        );
        assert!(g.public.investigated.contains(target));
    }

    #[test]
    fn peek_sees_next_draw() {
        let mut g = game(5, 30);
        g.public.fascist_enacted = 2;
        g.config.term_limits_enabled = false;
        let pres = g.public.president;
        enact_fascist(&mut g);
        assert_eq!(g.phase(), Phase::ExecutiveAction(Power::PolicyPeek));
        let PrivateEvent::Peeked(top) = g.private_events(pres).last().unwrap().event else {
            panic!("no peek")
        };
        assert_eq!(&g.hidden.deck[..3], &top);
        g.apply_action(Action::AcknowledgePeek, &mut rng_from_seed(0)).unwrap();
        assert_eq!(g.phase(), Phase::Nomination);
    }

    #[test]
    fn reshuffle_when_deck_runs_low() {
        let mut g = game(5, 40);
        g.hidden.deck.truncate(2);
        g.hidden.discard = CardCounts::of(&[Party::Fascist; 0]);
        // move the removed cards into the discard to keep totals
        let missing = CardCounts { liberal: 6, fascist: 11 };
        let kept = CardCounts::of(&g.hidden.deck);
        g.hidden.discard = CardCounts {
            liberal: missing.liberal - kept.liberal,
            fascist: missing.fascist - kept.fascist,
        };
        g.public.deck_len = 2;
        g.public.discard_len = 15;
        let pres = g.public.president;
        let next = next_alive_after(g.public.alive, pres, 5);
        elect(&mut g, next);
        assert_eq!(g.hidden.president_hand.len(), 3);
        assert_eq!(g.public.deck_len, 14);
        assert_eq!(g.public.discard_len, 0);
        assert!(g.public_events().iter().any(|e| matches!(e, PublicEvent::Reshuffled { deck_len: 17 })));
        assert_eq!(g.card_totals(), CardCounts { liberal: 6, fascist: 11 });
    }

    #[test]
    fn random_playouts_terminate_and_conserve_cards() {
        let mut buf = Vec::new();
        for seed in 0..200u64 {
            let n = 5 + (seed % 6) as usize;
            let mut g = game(n, seed);
            let mut rng = rng_from_seed(seed ^ 0xABCD);
            let mut steps = 0;
            while !g.is_terminal() {
                g.legal_actions_into(&mut buf).unwrap();
                assert!(!buf.is_empty());
                let a = buf[rng.gen_range(0..buf.len())];
                g.apply_action(a, &mut rng).unwrap();
                assert_eq!(g.card_totals(), CardCounts { liberal: 6, fascist: 11 });
                assert_eq!(g.public.deck_len as usize, g.hidden.deck.len());
                assert_eq!(g.public.discard_len as usize, g.hidden.discard.total());
                assert!(g.public.election_tracker < 3);
                assert!(g.public.alive.contains(g.public.president) || g.is_terminal());
                steps += 1;
                assert!(steps < 10_000);
            }
        }
    }

    #[test]
    fn canonical_string_is_stable() {
        let a = game(6, 77).to_canonical_string();
        let b = game(6, 77).to_canonical_string();
        assert_eq!(a, b);
        assert!(a.contains("\"phase\":\"Nomination\""));
    }
}
