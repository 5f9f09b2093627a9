//! Decision makers for a seat: the two rule-based baselines and the search
//! agent.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::game::{Action, Observation};
use crate::ismcts::{RoleFilter, SearchOptions, SearchReport, Searcher, DEFAULT_EXPLORATION, DEFAULT_ITERATIONS};
use crate::rng::GameRng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AgentSpec {
    Random,
    Selfish,
    Ismcts { iterations: u32, exploration_k: f64 },
}

impl AgentSpec {
    pub fn ismcts_default() -> Self {
        AgentSpec::Ismcts {
            iterations: DEFAULT_ITERATIONS,
            exploration_k: DEFAULT_EXPLORATION,
        }
    }

    /// Replaces the search parameters of an ISMCTS spec; other specs pass
    /// through unchanged.
    pub fn with_search(self, iterations: Option<u32>, exploration_k: Option<f64>) -> Result<Self> {
        match self {
            AgentSpec::Ismcts {
                iterations: n,
                exploration_k: k,
            } => AgentSpec::ismcts(iterations.unwrap_or(n), exploration_k.unwrap_or(k)),
            other => Ok(other),
        }
    }

    pub fn ismcts(iterations: u32, exploration_k: f64) -> Result<Self> {
        if iterations == 0 {
            return Err(Error::AgentSpec("ismcts needs at least one iteration".into()));
        }
        if !(exploration_k >= 0.0 && exploration_k.is_finite()) {
            return Err(Error::AgentSpec(format!("exploration constant {exploration_k} must be finite and non-negative")));
        }
        Ok(AgentSpec::Ismcts {
            iterations,
            exploration_k,
        })
    }

    /// Short family name, used as the grouping key in reports.
    pub fn family(&self) -> &'static str {
        match self {
            AgentSpec::Random => "random",
            AgentSpec::Selfish => "selfish",
            AgentSpec::Ismcts { .. } => "ismcts",
        }
    }
}

/// `random`, `selfish`, `ismcts` or `ismcts:N:K`.
impl FromStr for AgentSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or_default().to_ascii_lowercase();
        let rest: Vec<&str> = parts.collect();
        let bad = || Error::AgentSpec(format!("unknown agent {s:?}; expected random, selfish or ismcts[:N:K]"));
        match (head.as_str(), rest.as_slice()) {
            ("random", []) => Ok(AgentSpec::Random),
            ("selfish", []) => Ok(AgentSpec::Selfish),
            ("ismcts", []) => Ok(AgentSpec::ismcts_default()),
            ("ismcts", [n, k]) => {
                let n = n.parse().map_err(|_| bad())?;
                let k = k.parse().map_err(|_| bad())?;
                AgentSpec::ismcts(n, k)
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for AgentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentSpec::Ismcts {
                iterations,
                exploration_k,
            } => write!(f, "ismcts:{iterations}:{exploration_k}"),
            other => f.write_str(other.family()),
        }
    }
}

impl Serialize for AgentSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AgentSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a comma separated agent list.
pub fn parse_agent_list(s: &str) -> Result<Vec<AgentSpec>> {
    let specs = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<_>>>()?;
    if specs.is_empty() {
        return Err(Error::AgentSpec("empty agent list".into()));
    }
    Ok(specs)
}

/// Everything an agent may look at when deciding.
pub struct AgentContext<'a> {
    pub observation: &'a Observation,
    pub legal: &'a [Action],
    pub rng: &'a mut GameRng,
}

pub fn random_choose(ctx: &mut AgentContext<'_>) -> Result<Action> {
    uniform(ctx.legal, ctx.rng)
}

fn uniform(actions: &[Action], rng: &mut GameRng) -> Result<Action> {
    if actions.is_empty() {
        return Err(Error::NoLegalActions);
    }
    Ok(actions[rng.gen_range(0..actions.len())])
}

/// Enact a card of our own party if we can, else throw away an opposing
/// card, else play at random.
pub fn selfish_choose(ctx: &mut AgentContext<'_>) -> Result<Action> {
    let obs = ctx.observation;
    let own = obs.own_party();
    let card = |i: u8| obs.hand.get(i as usize).copied();
    let enact: Vec<Action> = ctx
        .legal
        .iter()
        .copied()
        .filter(|a| matches!(*a, Action::ChancellorEnact(i) if card(i) == Some(own)))
        .collect();
    if !enact.is_empty() {
        return uniform(&enact, ctx.rng);
    }
    let discard: Vec<Action> = ctx
        .legal
        .iter()
        .copied()
        .filter(|a| matches!(*a, Action::PresidentDiscard(i) if card(i) == Some(own.opposite())))
        .collect();
    if !discard.is_empty() {
        return uniform(&discard, ctx.rng);
    }
    random_choose(ctx)
}

/// Runs a fresh search from the current observation. Returns `None` for the
/// report when only one move was legal and no search was needed.
pub fn ismcts_choose_with_report(
    ctx: &mut AgentContext<'_>,
    iterations: u32,
    exploration_k: f64,
) -> Result<(Action, Option<SearchReport>)> {
    match ctx.legal {
        [] => return Err(Error::NoLegalActions),
        [only] => return Ok((*only, None)),
        _ => {}
    }
    let filter = RoleFilter::from_observation(ctx.observation);
    let options = SearchOptions {
        iterations: iterations.max(1),
        exploration: exploration_k,
        audit_replay: false,
    };
    let report = Searcher::new(ctx.observation, filter, options).run(ctx.rng)?;
    Ok((report.action, Some(report)))
}

pub fn ismcts_choose(ctx: &mut AgentContext<'_>, iterations: u32, exploration_k: f64) -> Result<Action> {
    ismcts_choose_with_report(ctx, iterations, exploration_k).map(|(a, _)| a)
}

pub fn choose(spec: AgentSpec, ctx: &mut AgentContext<'_>) -> Result<Action> {
    match spec {
        AgentSpec::Random => random_choose(ctx),
        AgentSpec::Selfish => selfish_choose(ctx),
        AgentSpec::Ismcts {
            iterations,
            exploration_k,
        } => ismcts_choose(ctx, iterations, exploration_k),
    }
}
