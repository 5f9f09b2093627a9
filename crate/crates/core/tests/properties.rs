use proptest::prelude::*;
use rand::Rng;

use sh_core::agents::{choose, AgentContext, AgentSpec};
use sh_core::game::{Action, GameConfig, GameState, Phase, Seat};
use sh_core::harness::{aggregate, run_game, run_game_with, GroupBy};
use sh_core::ismcts::{Determinizer, RoleAssignment, RoleFilter};
use sh_core::rng::rng_from_seed;

fn position(n: usize, seed: u64, depth: usize) -> GameState {
    let mut rng = rng_from_seed(seed);
    let mut g = GameState::new_game(GameConfig::new(n).unwrap(), &mut rng).unwrap();
    let mut buf = Vec::new();
    for _ in 0..depth {
        let before = g.clone();
        g.legal_actions_into(&mut buf).unwrap();
        let a = buf[rng.gen_range(0..buf.len())];
        g.apply_action(a, &mut rng).unwrap();
        if g.is_terminal() {
            return before;
        }
    }
    g
}

/// Every action shape the engine knows, for probing illegal moves.
fn all_actions(n: usize) -> Vec<Action> {
    let seats = (0..n as u8).map(Seat);
    let mut v: Vec<Action> = Vec::new();
    for s in seats {
        v.extend([Action::Nominate(s), Action::Investigate(s), Action::ChooseSpecialElection(s), Action::Execute(s)]);
    }
    v.extend([Action::Vote(true), Action::Vote(false), Action::AcknowledgePeek, Action::ProposeVeto]);
    v.extend([Action::VetoDecision(true), Action::VetoDecision(false)]);
    v.extend((0..4).map(Action::PresidentDiscard));
    v.extend((0..3).map(Action::ChancellorEnact));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn illegal_actions_change_nothing(n in 5usize..=10, seed in any::<u64>(), depth in 0usize..120) {
        let g = position(n, seed, depth);
        let (_, legal) = g.legal_actions().unwrap();
        let before = g.to_canonical_string();
        for a in all_actions(n) {
            let mut h = g.clone();
            let r = h.apply_action(a, &mut rng_from_seed(0));
            prop_assert_eq!(r.is_ok(), legal.contains(&a), "{:?}", a);
            if r.is_err() {
                prop_assert_eq!(h.to_canonical_string(), before.clone());
            }
        }
    }

    #[test]
    fn games_replay_from_their_seed(n in 5usize..=10, seed in any::<u64>()) {
        let agents = vec![AgentSpec::Selfish; n];
        let mut a = run_game(&agents, seed).unwrap();
        let b = run_game(&agents, seed).unwrap();
        a.wall_time = b.wall_time;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn determinizations_match_what_the_seat_saw(n in 5usize..=10, seed in any::<u64>(), depth in 0usize..120, pick in any::<u8>()) {
        let g = position(n, seed, depth);
        let seat = Seat(pick % n as u8);
        let obs = g.observe(seat).unwrap();
        let filter = RoleFilter::from_observation(&obs);
        prop_assert!(filter.contains(&RoleAssignment::from_roles(g.roles())));
        let det = Determinizer::new(&obs, filter);
        let mut rng = rng_from_seed(seed ^ 1);
        for _ in 0..8 {
            let d = det.sample(&mut rng);
            prop_assert_eq!(d.observe(seat).unwrap(), obs.clone());
            prop_assert_eq!(d.card_totals(), g.card_totals());
        }
    }

    #[test]
    fn seat_trials_are_conserved(seed in any::<u64>(), games in 1usize..12) {
        let mut records = Vec::new();
        let mut total_seats = 0;
        for i in 0..games as u64 {
            let n = 5 + ((seed.wrapping_add(i)) % 6) as usize;
            let agents: Vec<AgentSpec> = (0..n).map(|s| if s % 2 == 0 { AgentSpec::Random } else { AgentSpec::Selfish }).collect();
            records.push(run_game(&agents, seed.wrapping_add(i)).unwrap());
            total_seats += n as u64;
        }
        for by in [GroupBy::Agent, GroupBy::AgentRole, GroupBy::AgentPlayers] {
            prop_assert_eq!(aggregate(&records, by).iter().map(|e| e.total).sum::<u64>(), total_seats);
        }
        let reasons = aggregate(&records, GroupBy::Reason);
        prop_assert!((reasons.iter().map(|e| e.rate).sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn agent_specs_round_trip(n in 1u32..100_000, k in 0.0f64..10.0) {
        let spec = AgentSpec::ismcts(n, k).unwrap();
        prop_assert_eq!(spec.to_string().parse::<AgentSpec>().unwrap(), spec);
    }
}

/// Every legislative move of a selfish seat follows its priority order.
#[test]
fn selfish_trace_follows_priorities() {
    let mut checked = 0;
    for seed in 0..300u64 {
        let n = 5 + (seed % 6) as usize;
        let agents = vec![AgentSpec::Selfish; n];
        run_game_with(&agents, seed, |state, seat, ctx: &mut AgentContext<'_>| {
            let a = choose(AgentSpec::Selfish, ctx)?;
            let own = state.role(seat).party();
            match (state.phase(), a) {
                (Phase::LegislativePresident, Action::PresidentDiscard(i)) => {
                    let hand = &state.hidden.president_hand;
                    if hand.contains(&own.opposite()) {
                        assert_eq!(hand[i as usize], own.opposite());
                    }
                    checked += 1;
                }
                (Phase::LegislativeChancellor, Action::ChancellorEnact(i)) => {
                    let hand = &state.hidden.chancellor_hand;
                    if hand.contains(&own) {
                        assert_eq!(hand[i as usize], own);
                    }
                    checked += 1;
                }
                (Phase::LegislativeChancellor, Action::ProposeVeto) => {
                    assert!(!state.hidden.chancellor_hand.contains(&own));
                }
                _ => {}
            }
            Ok(a)
        })
        .unwrap();
    }
    assert!(checked > 1000);
}
