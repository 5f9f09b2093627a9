use std::fmt::Write as _;

use crate::agents::{choose, ismcts_choose_with_report, AgentSpec};
use crate::game::{GameState, Party, Power, PrivateEvent, PublicEvent, Role, Seat};
use crate::ismcts::SearchReport;

use super::run::{play_game, GameAbort};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TraceOptions {
    /// Print each search agent's root statistics before its move.
    pub search: bool,
    /// Print the final state in canonical form.
    pub final_state: bool,
}

fn cards(cs: &[Party]) -> String {
    cs.iter().map(|c| c.letter().to_string()).collect::<Vec<_>>().join(" ")
}

fn power_name(p: Power) -> &'static str {
    match p {
        Power::InvestigateLoyalty => "investigate loyalty",
        Power::SpecialElection => "call special election",
        Power::PolicyPeek => "policy peek",
        Power::Execution => "execution",
        Power::Veto => "veto",
    }
}

fn seats(set: impl Iterator<Item = Seat>) -> String {
    let v: Vec<String> = set.map(|s| s.to_string()).collect();
    if v.is_empty() {
        "nobody".into()
    } else {
        v.join(", ")
    }
}

/// Plays one game and narrates it turn by turn from an all-seeing
/// spectator's seat.
pub fn trace_game(agents: &[AgentSpec], game_seed: u64, options: TraceOptions) -> Result<String, GameAbort> {
    let mut reports: Vec<(usize, SearchReport)> = Vec::new();
    let state = play_game(agents.len(), game_seed, |state, seat, ctx| match agents[seat.idx()] {
        AgentSpec::Ismcts {
            iterations,
            exploration_k,
        } if options.search => {
            let (action, report) = ismcts_choose_with_report(ctx, iterations, exploration_k)?;
            if let Some(r) = report {
                reports.push((state.public_events().len(), r));
            }
            Ok(action)
        }
        spec => choose(spec, ctx),
    })?;
    Ok(narrate(&state, agents, game_seed, &reports, options))
}

fn narrate(
    state: &GameState,
    agents: &[AgentSpec],
    game_seed: u64,
    reports: &[(usize, SearchReport)],
    options: TraceOptions,
) -> String {
    let mut out = String::new();
    let n = state.num_players();
    let _ = writeln!(out, "game seed {game_seed}, {n} players");
    for (i, (agent, role)) in agents.iter().zip(state.roles()).enumerate() {
        let _ = writeln!(out, "  P{i:<2} {:<20} {role:?}", agent.to_string());
    }

    // Every seat's private events, keyed by the public event they follow.
    let mut private: Vec<Vec<(Seat, PrivateEvent)>> = vec![Vec::new(); state.public_events().len() + 1];
    for s in 0..n as u8 {
        for e in state.private_events(Seat(s)) {
            private[e.after as usize].push((Seat(s), e.event));
        }
    }
    let order = |e: &PrivateEvent| match e {
        PrivateEvent::Drew(_) => 0,
        PrivateEvent::Discarded { .. } => 1,
        PrivateEvent::Received(_) => 2,
        _ => 3,
    };
    for group in &mut private {
        group.sort_by_key(|(_, e)| order(e));
    }
    let (mut liberal, mut fascist, mut tracker) = (0, 0, 0);
    let mut report_iter = reports.iter().peekable();
    for (i, event) in state.public_events().iter().enumerate() {
        while let Some((_, r)) = report_iter.next_if(|(at, _)| *at <= i) {
            for line in r.trace_lines().lines() {
                let _ = writeln!(out, "    | {line}");
            }
        }
        let line = match *event {
            PublicEvent::Nominated { president, chancellor } => {
                format!("{president} is president and nominates {chancellor} for chancellor.")
            }
            PublicEvent::Election { votes, passed, .. } => {
                let ja = seats(votes.voters.iter().filter(|&s| votes.ja.contains(s)));
                let nein = seats(votes.voters.iter().filter(|&s| !votes.ja.contains(s)));
                if passed {
                    format!("The election passes (ja: {ja}; nein: {nein}).")
                } else {
                    tracker += 1;
                    format!("The election fails (ja: {ja}; nein: {nein}). Election tracker at {tracker}.")
                }
            }
            PublicEvent::Chaos { party } => {
                tracker = 0;
                match party {
                    Party::Liberal => liberal += 1,
                    Party::Fascist => fascist += 1,
                }
                format!(
                    "Three failed elections: the top policy is enacted and it is {party:?}. Score {liberal} liberal, {fascist} fascist."
                )
            }
            PublicEvent::Reshuffled { deck_len } => {
                format!("The discard pile is shuffled into the deck, which now holds {deck_len} policies.")
            }
            PublicEvent::PresidentDrew { president } => format!("{president} draws three policies."),
            PublicEvent::PresidentDiscarded { president } => {
                format!("{president} discards one policy and passes two to the chancellor.")
            }
            PublicEvent::PolicyEnacted { party, chancellor, .. } => {
                tracker = 0;
                match party {
                    Party::Liberal => liberal += 1,
                    Party::Fascist => fascist += 1,
                }
                format!("{chancellor} enacts a {party:?} policy. Score {liberal} liberal, {fascist} fascist.")
            }
            PublicEvent::PowerGranted { president, power } => {
                format!("{president} gains the {} power.", power_name(power))
            }
            PublicEvent::Investigated { president, target } => format!("{president} investigates {target}."),
            PublicEvent::SpecialElectionCalled { president, candidate } => {
                format!("{president} calls a special election; {candidate} will be the next president.")
            }
            PublicEvent::PolicyPeeked { president } => format!("{president} peeks at the top three policies."),
            PublicEvent::Executed { president, target, was_hitler } => {
                if was_hitler {
                    format!("{president} executes {target}, who was Hitler.")
                } else {
                    format!("{president} executes {target}. Everyone now knows {target} was not Hitler.")
                }
            }
            PublicEvent::VetoProposed { chancellor } => format!("{chancellor} proposes a veto."),
            PublicEvent::VetoResolved { president, agreed } => {
                if agreed {
                    tracker += 1;
                    format!("{president} agrees; both policies are discarded. Election tracker at {tracker}.")
                } else {
                    format!("{president} refuses the veto; the chancellor must enact.")
                }
            }
            PublicEvent::GameEnded(outcome) => {
                format!("Game over: {:?} team wins ({}).", outcome.winning_team, outcome.reason.label())
            }
        };
        let _ = writeln!(out, "{line}");
        for (seat, p) in &private[i + 1] {
            let text = match *p {
                PrivateEvent::Drew(c) => format!("{seat} sees {}", cards(&c)),
                PrivateEvent::Discarded { discarded, passed } => {
                    format!("{seat} discarded {} and passed {}", discarded.letter(), cards(&passed))
                }
                PrivateEvent::Received(c) => format!("{seat} holds {}", cards(&c)),
                PrivateEvent::Peeked(c) => format!("{seat} sees {} on top of the deck", cards(&c)),
                PrivateEvent::InvestigationResult { target, party } => {
                    format!("{seat} learns that {target} is {party:?}")
                }
            };
            let _ = writeln!(out, "    ({text})");
        }
    }
    if let Some(o) = state.outcome() {
        let winners: Vec<String> = state
            .roles()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.party() == o.winning_team)
            .map(|(i, r)| format!("P{i}{}", if *r == Role::Hitler { " (Hitler)" } else { "" }))
            .collect();
        let _ = writeln!(out, "Winners: {} after {} rounds.", winners.join(", "), state.public.round);
    }
    if options.final_state {
        let _ = writeln!(out, "final state: {}", state.to_canonical_string());
    }
    out
}
