//! Single-observer information set MCTS.
//!
//! One tree is grown from the searching seat's information set. Every
//! iteration samples a fresh determinization, descends with UCB over the
//! children compatible with it, expands one untried move, finishes with a
//! uniform random playout and backpropagates along the recorded path.
//!
//! The states visited on the way down are kept in a [`StateQueue`]; the
//! availability update reads compatibility from that queue and never steps
//! the game again. Replaying the path through the rules would reshuffle the
//! deck differently and invalidate card moves recorded during descent.

use std::fmt::{self, Write as _};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::determinize::Determinizer;
use super::filter::RoleFilter;
use crate::error::{Error, Result};
use crate::game::{Action, GameState, Observation, Party, Phase, Seat, MAX_PLAYERS};
use crate::rng::{derive_seed, rng_from_seed};

pub const DEFAULT_EXPLORATION: f64 = 0.7;
pub const DEFAULT_ITERATIONS: u32 = 10_000;

/// A tree edge. Card moves are keyed by the party of the card rather than
/// its position, so edges mean the same thing in every determinization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Edge {
    Discard(Party),
    Enact(Party),
    Act(Action),
}

impl Edge {
    pub fn of(state: &GameState, action: Action) -> Edge {
        match action {
            Action::PresidentDiscard(i) => Edge::Discard(state.hidden.president_hand[i as usize]),
            Action::ChancellorEnact(i) => Edge::Enact(state.hidden.chancellor_hand[i as usize]),
            other => Edge::Act(other),
        }
    }

    /// The concrete action for this edge in `state`, if the edge is legal there.
    pub fn to_action(self, state: &GameState) -> Option<Action> {
        let position = |hand: &[Party], party: Party| hand.iter().position(|&c| c == party).map(|i| i as u8);
        let action = match self {
            Edge::Discard(p) if state.phase() == Phase::LegislativePresident => {
                Action::PresidentDiscard(position(&state.hidden.president_hand, p)?)
            }
            Edge::Enact(p) if state.phase() == Phase::LegislativeChancellor => {
                Action::ChancellorEnact(position(&state.hidden.chancellor_hand, p)?)
            }
            Edge::Act(a) => a,
            _ => return None,
        };
        state.is_legal(action).then_some(action)
    }

    /// Same mapping from the acting seat's point of view.
    pub fn to_observed_action(self, obs: &Observation) -> Option<Action> {
        let position = |party: Party| obs.hand.iter().position(|&c| c == party).map(|i| i as u8);
        match self {
            Edge::Discard(p) => position(p).map(Action::PresidentDiscard),
            Edge::Enact(p) => position(p).map(Action::ChancellorEnact),
            Edge::Act(a) => Some(a),
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Edge::Discard(p) => write!(f, "discard {}", p.letter()),
            Edge::Enact(p) => write!(f, "enact {}", p.letter()),
            Edge::Act(a) => write!(f, "{a}"),
        }
    }
}

/// Distinct legal edges of `state`, in action order.
pub fn legal_edges(state: &GameState, buf: &mut Vec<Action>) -> Vec<Edge> {
    let mut edges = Vec::new();
    if state.legal_actions_into(buf).is_err() {
        return edges;
    }
    for &a in buf.iter() {
        let e = Edge::of(state, a);
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    edges
}

pub type Reward = [f64; MAX_PLAYERS];

/// Team-win vector of a finished game: 1 for every winning seat.
pub fn terminal_reward(state: &GameState) -> Option<Reward> {
    let outcome = state.outcome()?;
    let mut r = [0.0; MAX_PLAYERS];
    for (i, role) in state.roles().iter().enumerate() {
        if role.party() == outcome.winning_team {
            r[i] = 1.0;
        }
    }
    Some(r)
}

pub type NodeId = usize;

#[derive(Debug, Clone)]
pub struct Node {
    pub edge: Option<Edge>,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub visits: u32,
    pub availability: u32,
    pub reward: Reward,
}

impl Node {
    fn new(edge: Option<Edge>, parent: Option<NodeId>) -> Self {
        Node {
            edge,
            parent,
            children: Vec::new(),
            visits: 0,
            availability: 0,
            reward: [0.0; MAX_PLAYERS],
        }
    }
}

/// One queued step of an iteration: the state in which the next path node's
/// edge was taken, plus the edges legal in it.
#[derive(Debug, Clone)]
pub struct QueueEntry {
    pub state: GameState,
    pub legal: Vec<Edge>,
}

pub type StateQueue = Vec<QueueEntry>;

/// Counters collected over a search.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub iterations: u32,
    pub tree_transitions: u64,
    pub playout_transitions: u64,
    /// Transition-function calls made while backpropagating; always zero.
    pub backprop_transitions: u64,
    /// Path nodes whose own edge was missing from their queued legal set.
    pub compatibility_failures: u64,
    /// Reshuffles that happened during selection or expansion.
    pub tree_reshuffles: u64,
    /// Iterations whose path became illegal when replayed through the rules
    /// with a fresh random stream. Only counted with `audit_replay`.
    pub replay_divergences: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    Tree,
    Playout,
}

/// Every state transition made by the search goes through here so the
/// counters can prove which stage stepped the game.
#[derive(Debug, Default)]
struct Stepper {
    stats: SearchStats,
}

impl Stepper {
    fn total(&self) -> u64 {
        self.stats.tree_transitions + self.stats.playout_transitions
    }

    fn step<R: Rng + ?Sized>(&mut self, stage: Stage, state: &mut GameState, action: Action, rng: &mut R) {
        match stage {
            Stage::Tree => self.stats.tree_transitions += 1,
            Stage::Playout => self.stats.playout_transitions += 1,
        }
        let deck_before = state.public.deck_len;
        state.apply_action(action, rng).expect("search applies only legal actions");
        if stage == Stage::Tree && state.public.deck_len > deck_before {
            self.stats.tree_reshuffles += 1;
        }
    }
}

pub fn ucb_value(total_reward: f64, visits: u32, availability: u32, exploration: f64) -> f64 {
    let n = visits as f64;
    total_reward / n + exploration * ((availability as f64).ln() / n).sqrt()
}

#[derive(Debug, Clone)]
pub struct Tree {
    nodes: Vec<Node>,
}

impl Default for Tree {
    fn default() -> Self {
        Tree::new()
    }
}

impl Tree {
    pub fn new() -> Self {
        Tree {
            nodes: vec![Node::new(None, None)],
        }
    }

    pub const ROOT: NodeId = 0;

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn depth(&self, mut id: NodeId) -> usize {
        let mut d = 0;
        while let Some(p) = self.nodes[id].parent {
            id = p;
            d += 1;
        }
        d
    }

    fn child_with(&self, v: NodeId, edge: Edge) -> Option<NodeId> {
        self.nodes[v].children.iter().copied().find(|&c| self.nodes[c].edge == Some(edge))
    }

    /// Legal edges of `state` with no child under `v`.
    pub fn untried(&self, v: NodeId, legal: &[Edge]) -> Vec<Edge> {
        legal.iter().copied().filter(|&e| self.child_with(v, e).is_none()).collect()
    }

    /// Descends while the state is live and every legal edge already has a
    /// child, choosing by UCB for the seat to act.
    fn select<R: Rng + ?Sized>(
        &self,
        mut v: NodeId,
        state: &mut GameState,
        queue: &mut StateQueue,
        exploration: f64,
        stepper: &mut Stepper,
        buf: &mut Vec<Action>,
        rng: &mut R,
    ) -> (NodeId, Vec<Edge>) {
        loop {
            let legal = legal_edges(state, buf);
            if state.is_terminal() || !self.untried(v, &legal).is_empty() {
                return (v, legal);
            }
            let actor = state.actor().expect("live state has an actor").idx();
            let mut best = f64::NEG_INFINITY;
            let mut choice = None;
            for &c in &self.nodes[v].children {
                let node = &self.nodes[c];
                let edge = node.edge.expect("child has an edge");
                if !legal.contains(&edge) {
                    continue;
                }
                let value = ucb_value(node.reward[actor], node.visits, node.availability, exploration);
                if value > best {
                    best = value;
                    choice = Some((c, edge));
                }
            }
            let (c, edge) = choice.expect("fully expanded node has a compatible child");
            let action = edge.to_action(state).expect("compatible edge maps to a legal action");
            queue.push(QueueEntry {
                state: state.clone(),
                legal,
            });
            stepper.step(Stage::Tree, state, action, rng);
            v = c;
        }
    }

    /// Adds one child for a uniformly chosen untried edge and steps into it.
    fn expand<R: Rng + ?Sized>(
        &mut self,
        v: NodeId,
        state: &mut GameState,
        legal: Vec<Edge>,
        queue: &mut StateQueue,
        stepper: &mut Stepper,
        rng: &mut R,
    ) -> NodeId {
        let untried = self.untried(v, &legal);
        let edge = untried[rng.gen_range(0..untried.len())];
        let action = edge.to_action(state).expect("untried edge is legal");
        let w = self.nodes.len();
        self.nodes.push(Node::new(Some(edge), Some(v)));
        self.nodes[v].children.push(w);
        queue.push(QueueEntry {
            state: state.clone(),
            legal,
        });
        stepper.step(Stage::Tree, state, action, rng);
        w
    }

    /// Credits `reward` from `leaf` up to the root. Availability of siblings
    /// is decided by the legal sets stored in `queue`.
    pub fn backpropagate(&mut self, reward: &Reward, leaf: NodeId, queue: &StateQueue) -> Result<u64, QueueMismatch> {
        let depth = self.depth(leaf);
        if depth != queue.len() {
            return Err(QueueMismatch {
                path: depth,
                queue: queue.len(),
            });
        }
        let mut failures = 0;
        let mut v = leaf;
        let mut level = depth;
        loop {
            let node = &mut self.nodes[v];
            node.visits += 1;
            for (acc, r) in node.reward.iter_mut().zip(reward) {
                *acc += r;
            }
            let Some(parent) = node.parent else {
                node.availability += 1;
                break;
            };
            let own_edge = node.edge;
            let entry = &queue[level - 1];
            if !own_edge.is_some_and(|e| entry.legal.contains(&e)) {
                failures += 1;
            }
            let siblings = self.nodes[parent].children.clone();
            for s in siblings {
                let sib = &mut self.nodes[s];
                if sib.edge.is_some_and(|e| entry.legal.contains(&e)) {
                    sib.availability += 1;
                }
            }
            v = parent;
            level -= 1;
        }
        Ok(failures)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("path of length {path} backed by a queue of {queue} states")]
pub struct QueueMismatch {
    pub path: usize,
    pub queue: usize,
}

/// Plays uniformly random legal moves to the end and returns the team-win
/// vector.
pub fn simulate<R: Rng + ?Sized>(state: &mut GameState, rng: &mut R) -> Reward {
    let mut stepper = Stepper::default();
    let mut buf = Vec::new();
    playout(state, &mut stepper, &mut buf, rng)
}

fn playout<R: Rng + ?Sized>(state: &mut GameState, stepper: &mut Stepper, buf: &mut Vec<Action>, rng: &mut R) -> Reward {
    while !state.is_terminal() {
        state.legal_actions_into(buf).expect("live state has actions");
        let action = buf[rng.gen_range(0..buf.len())];
        stepper.step(Stage::Playout, state, action, rng);
    }
    terminal_reward(state).expect("terminal state has an outcome")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub iterations: u32,
    pub exploration: f64,
    /// Also replay every path through the rules to count divergences.
    pub audit_replay: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            iterations: DEFAULT_ITERATIONS,
            exploration: DEFAULT_EXPLORATION,
            audit_replay: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChildSummary {
    pub edge: Edge,
    pub visits: u32,
    pub availability: u32,
    /// Mean reward for the searching seat.
    pub mean_reward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub seat: Seat,
    pub phase: Phase,
    pub action: Action,
    pub root_visits: u32,
    pub nodes: usize,
    pub children: Vec<ChildSummary>,
    pub stats: SearchStats,
}

impl SearchReport {
    /// Line-oriented dump: a header line, then one line per root child.
    pub fn trace_lines(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "search seat={} phase={:?} iterations={} nodes={} chosen=\"{}\" tree_steps={} playout_steps={} backprop_steps={} compat_failures={} tree_reshuffles={}",
            self.seat,
            self.phase,
            self.stats.iterations,
            self.nodes,
            self.action,
            self.stats.tree_transitions,
            self.stats.playout_transitions,
            self.stats.backprop_transitions,
            self.stats.compatibility_failures,
            self.stats.tree_reshuffles,
        );
        for c in &self.children {
            let _ = writeln!(
                out,
                "  child edge=\"{}\" n={} n'={} mean={:.4}",
                c.edge, c.visits, c.availability, c.mean_reward
            );
        }
        out
    }
}

/// A search from one observation. Holds the tree after [`run`](Self::run) so
/// callers can inspect it.
#[derive(Debug)]
pub struct Searcher {
    determinizer: Determinizer,
    options: SearchOptions,
    tree: Tree,
    stepper: Stepper,
}

impl Searcher {
    pub fn new(observation: &Observation, filter: RoleFilter, options: SearchOptions) -> Self {
        Searcher {
            determinizer: Determinizer::new(observation, filter),
            options,
            tree: Tree::new(),
            stepper: Stepper::default(),
        }
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn stats(&self) -> &SearchStats {
        &self.stepper.stats
    }

    pub fn run<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<SearchReport> {
        let obs = self.determinizer.observation();
        if obs.public.phase == Phase::GameOver {
            return Err(Error::GameOver);
        }
        let mut buf = Vec::new();
        for _ in 0..self.options.iterations {
            self.iterate(&mut buf, rng);
        }
        self.report(rng)
    }

    fn iterate<R: Rng + ?Sized>(&mut self, buf: &mut Vec<Action>, rng: &mut R) {
        let mut state = self.determinizer.sample(rng);
        let mut queue = StateQueue::new();
        let (mut v, legal) = self.tree.select(
            Tree::ROOT,
            &mut state,
            &mut queue,
            self.options.exploration,
            &mut self.stepper,
            buf,
            rng,
        );
        if !state.is_terminal() {
            v = self
                .tree
                .expand(v, &mut state, legal, &mut queue, &mut self.stepper, rng);
        }
        let reward = playout(&mut state, &mut self.stepper, buf, rng);
        let before = self.stepper.total();
        let failures = self
            .tree
            .backpropagate(&reward, v, &queue)
            .expect("queue covers the whole path");
        self.stepper.stats.backprop_transitions += self.stepper.total() - before;
        self.stepper.stats.compatibility_failures += failures;
        self.stepper.stats.iterations += 1;
        if self.options.audit_replay && self.replay_diverges(v, &queue, rng.gen()) {
            self.stepper.stats.replay_divergences += 1;
        }
    }

    /// Re-derives the path from its first state through the rules, with a
    /// different random stream, and reports whether any recorded edge stops
    /// being legal along the way.
    fn replay_diverges(&self, leaf: NodeId, queue: &StateQueue, seed: u64) -> bool {
        let Some(first) = queue.first() else { return false };
        let mut edges = Vec::new();
        let mut v = leaf;
        while let Some(p) = self.tree.nodes[v].parent {
            edges.push(self.tree.nodes[v].edge.expect("child has an edge"));
            v = p;
        }
        edges.reverse();
        let mut rng = rng_from_seed(derive_seed(seed, 0x5EED));
        let mut state = first.state.clone();
        for edge in edges {
            match edge.to_action(&state) {
                Some(a) => {
                    state.apply_action(a, &mut rng).expect("mapped edge is legal");
                }
                None => return true,
            }
        }
        false
    }

    fn report<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SearchReport> {
        let obs = self.determinizer.observation();
        let root = self.tree.node(Tree::ROOT);
        if root.children.is_empty() {
            return Err(Error::NoLegalActions);
        }
        let seat = obs.seat;
        let children: Vec<ChildSummary> = root
            .children
            .iter()
            .map(|&c| {
                let n = self.tree.node(c);
                ChildSummary {
                    edge: n.edge.expect("child has an edge"),
                    visits: n.visits,
                    availability: n.availability,
                    mean_reward: n.reward[seat.idx()] / n.visits.max(1) as f64,
                }
            })
            .collect();
        let most = children.iter().map(|c| c.visits).max().unwrap_or(0);
        let best: Vec<&ChildSummary> = children.iter().filter(|c| c.visits == most).collect();
        let pick = best[rng.gen_range(0..best.len())];
        let action = pick
            .edge
            .to_observed_action(obs)
            .ok_or(Error::NoLegalActions)?;
        Ok(SearchReport {
            seat,
            phase: obs.public.phase,
            action,
            root_visits: root.visits,
            nodes: self.tree.len(),
            children,
            stats: self.stepper.stats.clone(),
        })
    }
}

/// Runs `iterations` rounds of SO-ISMCTS from `observation` and returns the
/// most visited root move.
pub fn so_ismcts<R: Rng + ?Sized>(
    observation: &Observation,
    filter: RoleFilter,
    iterations: u32,
    exploration: f64,
    rng: &mut R,
) -> Result<Action> {
    let options = SearchOptions {
        iterations: iterations.max(1),
        exploration,
        audit_replay: false,
    };
    Ok(Searcher::new(observation, filter, options).run(rng)?.action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameConfig;
    use crate::rng::rng_from_seed;

    fn opening(n: usize, seed: u64) -> (GameState, Observation) {
        let g = GameState::new_game(GameConfig::new(n).unwrap(), &mut rng_from_seed(seed)).unwrap();
        let o = g.observe(g.actor().unwrap()).unwrap();
        (g, o)
    }

    fn searched(obs: &Observation, iterations: u32, seed: u64) -> Searcher {
        let options = SearchOptions {
            iterations,
            ..SearchOptions::default()
        };
        let mut s = Searcher::new(obs, RoleFilter::from_observation(obs), options);
        s.run(&mut rng_from_seed(seed)).unwrap();
        s
    }

    #[test]
    fn ucb_matches_hand_computation() {
        // 5/10 + 0.7 * sqrt(ln 20 / 10)
        assert!((ucb_value(5.0, 10, 20, 0.7) - 0.883_133).abs() < 1e-6);
        assert_eq!(ucb_value(3.0, 4, 1, 0.7), 0.75);
    }

    #[test]
    fn root_children_account_for_every_iteration() {
        let (_, o) = opening(5, 4);
        let s = searched(&o, 300, 1);
        let tree = s.tree();
        let root = tree.node(Tree::ROOT);
        assert_eq!(root.visits, 300);
        let sum: u32 = root.children.iter().map(|&c| tree.node(c).visits).sum();
        assert_eq!(sum, 300);
        for n in tree.nodes().iter().skip(1) {
            assert!(n.availability >= n.visits);
        }
        assert_eq!(s.stats().backprop_transitions, 0);
        assert_eq!(s.stats().compatibility_failures, 0);
    }

    #[test]
    fn edges_are_card_parties_in_legislation() {
        let mut rng = rng_from_seed(3);
        let mut g = GameState::new_game(GameConfig::new(5).unwrap(), &mut rng).unwrap();
        while g.phase() != Phase::LegislativePresident {
            let (_, legal) = g.legal_actions().unwrap();
            let a = if g.phase() == Phase::Election { Action::Vote(true) } else { legal[0] };
            g.apply_action(a, &mut rng).unwrap();
        }
        let edges = legal_edges(&g, &mut Vec::new());
        let mut parties: Vec<Party> = g.hidden.president_hand.to_vec();
        parties.sort();
        parties.dedup();
        assert_eq!(edges.len(), parties.len());
        for e in edges {
            let a = e.to_action(&g).unwrap();
            assert_eq!(Edge::of(&g, a), e);
        }
    }

    #[test]
    fn backprop_rejects_short_queue() {
        let mut tree = Tree::new();
        let (g, _) = opening(5, 0);
        let mut queue = StateQueue::new();
        let legal = legal_edges(&g, &mut Vec::new());
        let leaf = tree.expand(Tree::ROOT, &mut g.clone(), legal, &mut queue, &mut Stepper::default(), &mut rng_from_seed(0));
        queue.clear();
        let err = tree.backpropagate(&[0.0; MAX_PLAYERS], leaf, &queue).unwrap_err();
        assert_eq!(err, QueueMismatch { path: 1, queue: 0 });
    }

    #[test]
    fn terminal_reward_marks_winning_team() {
        let mut rng = rng_from_seed(11);
        let mut g = GameState::new_game(GameConfig::new(7).unwrap(), &mut rng).unwrap();
        let r = simulate(&mut g, &mut rng);
        let winner = g.outcome().unwrap().winning_team;
        for (i, role) in g.roles().iter().enumerate() {
            assert_eq!(r[i] == 1.0, role.party() == winner);
        }
        assert!(r[7..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn same_seed_same_choice() {
        let (_, o) = opening(6, 2);
        let f = RoleFilter::from_observation(&o);
        let a = so_ismcts(&o, f.clone(), 200, 0.7, &mut rng_from_seed(9)).unwrap();
        let b = so_ismcts(&o, f, 200, 0.7, &mut rng_from_seed(9)).unwrap();
        assert_eq!(a, b);
    }
}
