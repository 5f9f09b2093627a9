use rand::Rng;

use crate::agents::AgentSpec;
use crate::error::{Error, Result};
use crate::game::{MAX_PLAYERS, MIN_PLAYERS};
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct BatchConfig {
    pub num_games: u64,
    pub master_seed: u64,
    pub allowed_agents: Vec<AgentSpec>,
    pub allowed_player_counts: Vec<usize>,
    pub parallelism: usize,
}

impl BatchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_games == 0 {
            return Err(Error::BatchConfig("num_games must be at least 1".into()));
        }
        if self.allowed_agents.is_empty() {
            return Err(Error::BatchConfig("no agents allowed".into()));
        }
        if self.allowed_player_counts.is_empty() {
            return Err(Error::BatchConfig("no player counts allowed".into()));
        }
        if let Some(&n) = self
            .allowed_player_counts
            .iter()
            .find(|&&n| !(MIN_PLAYERS..=MAX_PLAYERS).contains(&n))
        {
            return Err(Error::PlayerCount(n));
        }
        if self.parallelism == 0 {
            return Err(Error::BatchConfig("parallelism must be at least 1".into()));
        }
        Ok(())
    }
}

/// Seed of the game at `index` in a batch.
pub fn game_seed(master_seed: u64, index: u64) -> u64 {
    derive_seed(master_seed, index)
}

/// Player count uniform over the allowed counts, then each seat's agent
/// drawn independently and uniformly.
pub fn random_config<R: Rng + ?Sized>(batch: &BatchConfig, rng: &mut R) -> (usize, Vec<AgentSpec>) {
    let counts = &batch.allowed_player_counts;
    let n = counts[rng.gen_range(0..counts.len())];
    let agents = &batch.allowed_agents;
    let seats = (0..n).map(|_| agents[rng.gen_range(0..agents.len())]).collect();
    (n, seats)
}

/// `5,7,9`, `5-10`, or a mix such as `5,7-8`.
pub fn parse_player_counts(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::PlayerList(s.to_string());
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((lo, hi)) => {
                let lo: usize = lo.trim().parse().map_err(|_| bad())?;
                let hi: usize = hi.trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    if let Some(&n) = out.iter().find(|&&n| !(MIN_PLAYERS..=MAX_PLAYERS).contains(&n)) {
        return Err(Error::PlayerCount(n));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
