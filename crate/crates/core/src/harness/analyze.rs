use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{EndReason, Role};

use super::record::{read_records, GameRecord};

const Z_95: f64 = 1.96;

/// Normal-approximation 95% interval for a win rate, clamped to [0, 1].
pub fn confidence_interval(wins: u64, total: u64) -> Result<(f64, f64)> {
    if total == 0 {
        return Err(Error::EmptySample);
    }
    if wins > total {
        return Err(Error::WinsExceedTotal { wins, total });
    }
    let p = wins as f64 / total as f64;
    let half = Z_95 * (p * (1.0 - p) / total as f64).sqrt();
    Ok(((p - half).max(0.0), (p + half).min(1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    Agent,
    AgentRole,
    AgentPlayers,
    Reason,
}

impl FromStr for GroupBy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "agent" => Ok(GroupBy::Agent),
            "role" => Ok(GroupBy::AgentRole),
            "players" => Ok(GroupBy::AgentPlayers),
            "reason" => Ok(GroupBy::Reason),
            _ => Err(format!("unknown grouping {s:?}; expected agent, role, players or reason")),
        }
    }
}

impl GroupBy {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            GroupBy::Agent => &["agent"],
            GroupBy::AgentRole => &["agent", "role"],
            GroupBy::AgentPlayers => &["agent", "players"],
            GroupBy::Reason => &["reason"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum GroupKey {
    Agent(String),
    AgentRole(String, Role),
    AgentPlayers(String, usize),
    Reason(EndReason),
}

impl GroupKey {
    pub fn cells(&self) -> Vec<String> {
        match self {
            GroupKey::Agent(a) => vec![a.clone()],
            GroupKey::AgentRole(a, r) => vec![a.clone(), format!("{r:?}")],
            GroupKey::AgentPlayers(a, n) => vec![a.clone(), n.to_string()],
            GroupKey::Reason(r) => vec![r.label().to_string()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WinRateEntry {
    pub key: GroupKey,
    pub wins: u64,
    pub total: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Groups seat trials (or games, for ending reasons) and attaches a
/// confidence interval to each group.
pub fn aggregate(records: &[GameRecord], by: GroupBy) -> Vec<WinRateEntry> {
    let mut counts: BTreeMap<GroupKey, (u64, u64)> = BTreeMap::new();
    let mut bump = |key, win: bool| {
        let c = counts.entry(key).or_insert((0, 0));
        c.0 += win as u64;
        c.1 += 1;
    };
    for r in records {
        if by == GroupBy::Reason {
            for reason in EndReason::ALL {
                bump(GroupKey::Reason(reason), r.reason == reason);
            }
            continue;
        }
        for s in &r.seats {
            let agent = s.agent.to_string();
            let key = match by {
                GroupBy::Agent => GroupKey::Agent(agent),
                GroupBy::AgentRole => GroupKey::AgentRole(agent, s.role),
                GroupBy::AgentPlayers => GroupKey::AgentPlayers(agent, r.num_players),
                GroupBy::Reason => unreachable!(),
            };
            bump(key, s.won);
        }
    }
    counts
        .into_iter()
        .map(|(key, (wins, total))| {
            let (ci_low, ci_high) = confidence_interval(wins, total).expect("every group has a trial");
            WinRateEntry {
                key,
                wins,
                total,
                rate: wins as f64 / total as f64,
                ci_low,
                ci_high,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedLine {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub by: GroupBy,
    pub entries: Vec<WinRateEntry>,
    pub records: usize,
    pub malformed: Vec<MalformedLine>,
}

impl Aggregate {
    pub fn to_table(&self) -> String {
        let header: Vec<String> = self
            .by
            .columns()
            .iter()
            .map(|c| c.to_string())
            .chain(["wins", "total", "rate", "95% CI"].map(String::from))
            .collect();
        let rows: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|e| {
                let mut row = e.key.cells();
                row.push(e.wins.to_string());
                row.push(e.total.to_string());
                row.push(format!("{:.3}", e.rate));
                row.push(format!("({:.3}, {:.3})", e.ci_low, e.ci_high));
                row
            })
            .collect();
        let mut widths: Vec<usize> = header.iter().map(String::len).collect();
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        for row in std::iter::once(&header).chain(&rows) {
            let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.by.columns().join(",");
        out.push_str(",wins,total,rate,ci_low,ci_high\n");
        for e in &self.entries {
            let key: Vec<String> = e.key.cells().iter().map(|c| csv_cell(c)).collect();
            let _ = writeln!(
                out,
                "{},{},{},{:.6},{:.6},{:.6}",
                key.join(","),
                e.wins,
                e.total,
                e.rate,
                e.ci_low,
                e.ci_high
            );
        }
        out
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Reads a record file and aggregates its well-formed lines.
pub fn aggregate_file(path: &Path, by: GroupBy) -> Result<Aggregate> {
    let (records, bad) = read_records(BufReader::new(File::open(path)?))?;
    Ok(Aggregate {
        by,
        entries: aggregate(&records, by),
        records: records.len(),
        malformed: bad
            .into_iter()
            .map(|(line, message)| MalformedLine { line, message })
            .collect(),
    })
}
