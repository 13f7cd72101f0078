mod common;

use bidding_core::agents::draw_value_for;
use bidding_core::game::{reachable_postorder, Hex, TicTacToe};
use bidding_core::value::to_f64;
use bidding_core::{
    discrete_optimal_actions, discrete_threshold, optimal_first_moves, resolve_bids, safe_bids, solve_discrete,
    solve_richman, Bid, ChipState, DiscreteState, DrawPolicy, Game, Pile, Player, SolveError,
};
use common::BruteDiscrete;

fn states(total: u64) -> impl Iterator<Item = ChipState> {
    (0..=total).flat_map(move |a| Player::BOTH.map(|s| ChipState::new(a, total - a, s)))
}

/// Production table against brute force over all bid pairs: same winner,
/// exactly one side safe, the stored bid and the full safe-bid list agree.
fn check_against_brute<G: Game>(game: &G, total: u64, policy: DrawPolicy) {
    let table = solve_discrete(game, total, policy).unwrap();
    assert_eq!(table.undetermined(), 0);
    let mut brute = BruteDiscrete::new(game, policy);
    for pos in reachable_postorder(game).unwrap() {
        for chips in states(total) {
            let w = table.winner(&pos, chips).unwrap();
            assert_eq!(w, brute.winner(&pos, chips), "{} {chips}", game.encode(&pos));
            if game.outcome(&pos).is_terminal() {
                continue;
            }
            let (a, b) = brute.safety(&pos, chips);
            assert!(a != b, "{} {chips}: alice safe {a}, bob safe {b}", game.encode(&pos));
            let bid = table.safe_bid(&pos, chips).unwrap().expect("winner has a bid");
            assert!(brute.is_safe_bid(&pos, chips, w, bid));
            let state = DiscreteState {
                position: pos.clone(),
                chips,
            };
            let listed: Vec<Bid> = safe_bids(game, &table, &state, w).unwrap().into_iter().map(|(b, _)| b).collect();
            assert_eq!(listed, brute.safe_bids(&pos, chips, w), "{} {chips}", game.encode(&pos));
            assert!(safe_bids(game, &table, &state, w.opponent()).unwrap().is_empty());
        }
    }
}

/// An Alice win stays a win with a stronger pile (`k < k* < k+1`).
fn check_monotone<G: Game>(game: &G, total: u64, policy: DrawPolicy) {
    let table = solve_discrete(game, total, policy).unwrap();
    for pos in reachable_postorder(game).unwrap() {
        let mut ladder: Vec<(Pile, Player)> = states(total)
            .map(|c| (c.pile(Player::Alice), table.winner(&pos, c).unwrap()))
            .collect();
        ladder.sort();
        let first = ladder.iter().position(|&(_, w)| w == Player::Alice);
        if let Some(i) = first {
            assert!(ladder[i..].iter().all(|&(_, w)| w == Player::Alice), "{}", game.encode(&pos));
        }
    }
}

#[test]
fn determinacy_and_oracle_agreement_on_small_games() {
    for total in 0..=16 {
        for policy in [DrawPolicy::BobWins, DrawPolicy::AliceWins] {
            check_against_brute(&common::fixture("diamond.dag"), total, policy);
            check_against_brute(&common::fixture("chain.dag"), total, policy);
            check_against_brute(&Hex::new(2).unwrap(), total, policy);
        }
    }
    for total in 0..=8 {
        check_against_brute(&common::fixture("race.dag"), total, DrawPolicy::BobWins);
        check_against_brute(&common::fixture("stuck.dag"), total, DrawPolicy::BobWins);
        check_against_brute(&common::fixture("sample-game.dag"), total, DrawPolicy::AliceWins);
    }
}

#[test]
fn determinacy_on_tic_tac_toe_with_few_chips() {
    for total in 0..=2 {
        check_against_brute(&TicTacToe, total, DrawPolicy::BobWins);
    }
}

#[test]
fn monotone_in_chips() {
    for total in [0, 1, 2, 5, 8, 13, 16] {
        for name in common::DAG_FIXTURES {
            check_monotone(&common::fixture(name), total, DrawPolicy::BobWins);
        }
        check_monotone(&Hex::new(2).unwrap(), total, DrawPolicy::BobWins);
        check_monotone(&Hex::new(3).unwrap(), total, DrawPolicy::AliceWins);
        check_monotone(&TicTacToe, total, DrawPolicy::BobWins);
    }
}

#[test]
fn resolve_bid_examples_and_conservation() {
    let start = ChipState::new(10, 10, Player::Alice);
    let (mover, after) = resolve_bids(start, Bid::plain(5), Bid::plain(5)).unwrap();
    assert_eq!((mover, after), (Player::Bob, ChipState::new(15, 5, Player::Alice)));
    let (mover, after) = resolve_bids(start, Bid::new(0, true), Bid::plain(0)).unwrap();
    assert_eq!((mover, after), (Player::Alice, ChipState::new(10, 10, Player::Bob)));
    for a in 0..=4u64 {
        for chips in states(4) {
            for b in 0..=chips.bob {
                for (sa, sb) in [(false, false), (true, false), (false, true)] {
                    let (ba, bb) = (Bid::new(a.min(chips.alice), sa), Bid::new(b, sb));
                    match resolve_bids(chips, ba, bb) {
                        Ok((_, next)) => assert_eq!(next.total(), chips.total()),
                        Err(_) => assert!((sa && chips.star != Player::Alice) || (sb && chips.star != Player::Bob)),
                    }
                }
            }
        }
    }
}

#[test]
fn diamond_examples() {
    let g = common::fixture("diamond.dag");
    let t = solve_discrete(&g, 2, DrawPolicy::BobWins).unwrap();
    let root = g.initial();
    assert_eq!(t.winner(&root, ChipState::new(2, 0, Player::Alice)).unwrap(), Player::Alice);
    assert_eq!(t.winner(&root, ChipState::new(0, 2, Player::Bob)).unwrap(), Player::Bob);
    assert_eq!(t.winner(&root, ChipState::new(1, 1, Player::Alice)).unwrap(), Player::Alice);
    assert_eq!(t.winner(&root, ChipState::new(1, 1, Player::Bob)).unwrap(), Player::Bob);
    assert_eq!(t.threshold(&root).unwrap(), Some(Pile { chips: 1, star: true }));
    assert_eq!(
        discrete_threshold(&g, &root, 2, DrawPolicy::BobWins).unwrap(),
        Some(Pile { chips: 1, star: true })
    );

    let state = DiscreteState {
        position: root,
        chips: ChipState::new(2, 0, Player::Alice),
    };
    let advice = discrete_optimal_actions(&g, &t, None, &state, Player::Alice).unwrap();
    assert!(advice.winning);
    assert_eq!(advice.move_if_win.as_deref(), Some("take"));
    let (mover, after) = resolve_bids(state.chips, advice.bid, Bid::plain(0)).unwrap();
    assert_eq!(mover, Player::Alice);
    assert_eq!(t.winner(&g.node("left").unwrap(), after).unwrap(), Player::Alice);

    let even = DiscreteState {
        position: root,
        chips: ChipState::new(1, 1, Player::Alice),
    };
    let advice = discrete_optimal_actions(&g, &t, None, &even, Player::Alice).unwrap();
    assert_eq!(advice.bid, Bid::new(1, true));
    let loser = discrete_optimal_actions(&g, &t, None, &even, Player::Bob).unwrap();
    assert!(!loser.winning);
    assert_eq!(loser.bid, Bid::plain(0));

    let leaf = DiscreteState {
        position: g.node("left").unwrap(),
        chips: ChipState::new(1, 1, Player::Alice),
    };
    assert!(matches!(
        discrete_optimal_actions(&g, &t, None, &leaf, Player::Alice),
        Err(SolveError::Terminal(_))
    ));
}

#[test]
fn winner_can_depend_on_the_star_alone() {
    let g = common::fixture("diamond.dag");
    let t = solve_discrete(&g, 2, DrawPolicy::BobWins).unwrap();
    let witness = (1..2).find(|&a| {
        t.winner(&g.initial(), ChipState::new(a, 2 - a, Player::Alice)).unwrap()
            != t.winner(&g.initial(), ChipState::new(a, 2 - a, Player::Bob)).unwrap()
    });
    assert_eq!(witness, Some(1));

    let ttt = TicTacToe;
    let t = solve_discrete(&ttt, 8, DrawPolicy::BobWins).unwrap();
    let initial = ttt.initial();
    assert_eq!(t.winner(&initial, ChipState::new(4, 4, Player::Alice)).unwrap(), Player::Alice);
    assert_eq!(t.winner(&initial, ChipState::new(4, 4, Player::Bob)).unwrap(), Player::Bob);
}

/// Winner at the empty board for every Alice pile `0..=N`, as pairs
/// (`*` with Bob, `*` with Alice).
const TTT_WINNER_MAPS: [(u64, &str); 17] = [
    (0, "BB"),
    (1, "BB AA"),
    (2, "BB BA AA"),
    (3, "BB BB BA AA"),
    (4, "BB BB BA AA AA"),
    (5, "BB BB BB AA AA AA"),
    (6, "BB BB BB BB AA AA AA"),
    (7, "BB BB BB BB AA AA AA AA"),
    (8, "BB BB BB BB BA AA AA AA AA"),
    (9, "BB BB BB BB BB BA AA AA AA AA"),
    (10, "BB BB BB BB BB BA AA AA AA AA AA"),
    (11, "BB BB BB BB BB BB BA AA AA AA AA AA"),
    (12, "BB BB BB BB BB BB BB AA AA AA AA AA AA"),
    (13, "BB BB BB BB BB BB BB AA AA AA AA AA AA AA"),
    (14, "BB BB BB BB BB BB BB BB AA AA AA AA AA AA AA"),
    (15, "BB BB BB BB BB BB BB BB BA AA AA AA AA AA AA AA"),
    (16, "BB BB BB BB BB BB BB BB BB AA AA AA AA AA AA AA AA"),
];

#[test]
fn tic_tac_toe_winner_maps_are_pinned() {
    let g = TicTacToe;
    for (total, expected) in TTT_WINNER_MAPS {
        let t = solve_discrete(&g, total, DrawPolicy::BobWins).unwrap();
        let map: Vec<String> = (0..=total)
            .map(|a| {
                [Player::Bob, Player::Alice]
                    .iter()
                    .map(|&s| t.winner(&g.initial(), ChipState::new(a, total - a, s)).unwrap().letter())
                    .collect()
            })
            .collect();
        assert_eq!(map.join(" "), expected, "total {total}");
    }
}

fn worst_gap<G: Game>(game: &G, total: u64, policy: DrawPolicy) -> f64 {
    let values = solve_richman(game, &draw_value_for(policy)).unwrap();
    let table = solve_discrete(game, total, policy).unwrap();
    let mut worst: f64 = 0.0;
    for pos in table.positions() {
        let fraction = match table.threshold(pos).unwrap() {
            Some(p) => (p.chips as f64 + if p.star { 0.5 } else { 0.0 }) / total as f64,
            None => 1.0,
        };
        worst = worst.max((fraction - to_f64(values.value(pos).unwrap())).abs());
    }
    worst
}

#[test]
fn thresholds_approach_the_continuous_value() {
    for n in [8, 16, 32, 64] {
        let bound = 2.0 / n as f64;
        for name in common::DAG_FIXTURES {
            assert!(worst_gap(&common::fixture(name), n, DrawPolicy::BobWins) <= bound, "{name} {n}");
        }
        assert!(worst_gap(&Hex::new(2).unwrap(), n, DrawPolicy::BobWins) <= bound);
        assert!(worst_gap(&Hex::new(3).unwrap(), n, DrawPolicy::BobWins) <= bound);
        assert!(worst_gap(&TicTacToe, n, DrawPolicy::BobWins) <= bound);
        assert!(worst_gap(&TicTacToe, n, DrawPolicy::AliceWins) <= bound);
    }
}

fn ttt_first_moves(total: u64) -> (Player, Vec<String>) {
    let g = TicTacToe;
    let t = solve_discrete(&g, total, DrawPolicy::BobWins).unwrap();
    let state = DiscreteState {
        position: g.initial(),
        chips: ChipState::new(total - total / 2, total / 2, Player::Alice),
    };
    let w = t.winner(&state.position, state.chips).unwrap();
    (w, optimal_first_moves(&g, &t, &state, w).unwrap())
}

#[test]
fn tic_tac_toe_first_moves_depend_on_the_chip_count() {
    let corners_and_centre = ["a1", "c1", "b2", "a3", "c3"];
    assert_eq!(ttt_first_moves(8), (Player::Alice, vec!["b2".to_string()]));
    assert_eq!(ttt_first_moves(9).1, corners_and_centre);
    assert_eq!(ttt_first_moves(10), (Player::Alice, vec!["b2".to_string()]));
    let (w, all) = ttt_first_moves(11);
    assert_eq!((w, all.len()), (Player::Alice, 9));
}

#[test]
fn exports_and_zero_chips() {
    let g = common::fixture("diamond.dag");
    let t = solve_discrete(&g, 0, DrawPolicy::BobWins).unwrap();
    let text = t.export(&g);
    assert!(text.contains("dwin dag:root 0 A A\n"));
    assert!(text.contains("dwin dag:root 0 B B\n"));
    let thresholds = solve_discrete(&g, 4, DrawPolicy::BobWins).unwrap().export_thresholds(&g);
    assert!(thresholds.contains("dthresh dag:root 4 2*\n"));
    assert!(thresholds.contains("dthresh dag:right 4 none\n"));
    assert!(thresholds.contains("dthresh dag:left 4 0\n"));
}
