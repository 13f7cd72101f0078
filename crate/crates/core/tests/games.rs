mod common;

use std::collections::HashSet;

use bidding_core::game::{reachable_postorder, DagGame, DagOptions, Hex, HexPosition, TicTacToe};
use bidding_core::{AnyGame, Game, GameError, Outcome, Player};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn alternating_tic_tac_toe_has_5478_boards_all_reachable_under_bidding() {
    let alternating = common::alternating_ttt_boards();
    assert_eq!(alternating.len(), 5478);
    let game = TicTacToe;
    let bidding: HashSet<String> = reachable_postorder(&game)
        .unwrap()
        .iter()
        .map(|p| game.encode(p))
        .collect();
    assert!(alternating.is_subset(&bidding));
    assert_eq!(bidding.len(), common::reachable(&game).len());
}

#[test]
fn tic_tac_toe_reachable_set_is_every_board_without_two_winners() {
    let game = TicTacToe;
    let reachable: HashSet<String> = common::reachable(&game).iter().map(|p| game.encode(p)).collect();
    let mut expected = 0;
    for code in 0..3u32.pow(9) {
        let mut c = code;
        let cells: String = (0..9)
            .map(|_| {
                let ch = ['.', 'x', 'o'][(c % 3) as usize];
                c /= 3;
                ch
            })
            .collect();
        let Ok(pos) = game.decode(&format!("ttt3:{cells}")) else {
            continue;
        };
        // A terminal board is reachable iff its last stone can be removed
        // to leave a non-terminal board.
        let reachable_by_rule = game.outcome(&pos) == Outcome::Ongoing || {
            let b: Vec<char> = cells.chars().collect();
            (0..9).filter(|&i| b[i] != '.').any(|i| {
                let mut prev = b.clone();
                prev[i] = '.';
                let prev: String = prev.into_iter().collect();
                game.outcome(&game.decode(&format!("ttt3:{prev}")).unwrap()) == Outcome::Ongoing
            })
        };
        if reachable_by_rule {
            expected += 1;
            assert!(reachable.contains(&game.encode(&pos)), "{cells}");
        }
    }
    assert_eq!(reachable.len(), expected);
}

#[test]
fn tic_tac_toe_basic_rules() {
    let game = TicTacToe;
    assert_eq!(game.legal_moves(&game.initial(), Player::Alice).len(), 9);
    let won = game.decode("ttt3:xxx......").unwrap();
    assert_eq!(game.outcome(&won), Outcome::AliceWins);
    assert!(game.legal_moves(&won, Player::Bob).is_empty());
    let drawn = game.decode("ttt3:xoxxoooxx").unwrap();
    assert_eq!(game.outcome(&drawn), Outcome::Draw);
    assert!(matches!(game.decode("ttt3:xxxooo..."), Err(GameError::Encoding(_))));
}

fn full_boards_have_one_winner(hex: &Hex) {
    for mask in 0u128..(1 << hex.cells()) {
        let pos = HexPosition {
            alice: mask,
            bob: hex.board_mask() & !mask,
        };
        let a = hex.connects(pos.alice, Player::Alice);
        let b = hex.connects(pos.bob, Player::Bob);
        assert!(a != b, "{}", hex.encode(&pos));
        assert!(hex.outcome(&pos).is_terminal());
    }
}

#[test]
fn hex_full_boards_have_exactly_one_winner_small() {
    full_boards_have_one_winner(&Hex::new(2).unwrap());
    full_boards_have_one_winner(&Hex::new(3).unwrap());
}

#[test]
fn hex_random_5x5_fills_have_exactly_one_winner() {
    let hex = Hex::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let alice = rng.gen::<u128>() & hex.board_mask();
        let pos = HexPosition {
            alice,
            bob: hex.board_mask() & !alice,
        };
        let uf = hex.winner_union_find(&pos);
        let a = hex.connects(pos.alice, Player::Alice);
        let b = hex.connects(pos.bob, Player::Bob);
        assert!(a != b);
        assert_eq!(uf, Some(if a { Player::Alice } else { Player::Bob }));
    }
}

#[test]
fn hex_two_by_two_reachable_set_and_moves() {
    let hex = Hex::new(2).unwrap();
    assert_eq!(hex.legal_moves(&hex.initial(), Player::Alice).len(), 4);
    let order = reachable_postorder(&hex).unwrap();
    assert_eq!(order.len(), common::reachable(&hex).len());
    assert_eq!(order.last(), Some(&hex.initial()));
}

#[test]
fn dag_documents() {
    let single = DagGame::parse("dag-game v1\nnode only alice_wins\n", DagOptions::default()).unwrap();
    assert!(single.legal_moves(&single.initial(), Player::Alice).is_empty());
    assert_eq!(single.outcome(&single.initial()), Outcome::AliceWins);

    let cycle = "dag-game v1\nnode a\nnode b\nedge a alice x b\nedge a bob x b\nedge b alice y a\nedge b bob y a\n";
    assert!(matches!(DagGame::parse(cycle, DagOptions::default()), Err(GameError::Cycle(_))));

    let dangling = "dag-game v1\nnode a\nedge a alice x nowhere\n";
    assert!(DagGame::parse(dangling, DagOptions::default()).is_err());

    let terminal_moves = "dag-game v1\nnode a draw\nnode b draw\nedge a alice x b\n";
    assert!(DagGame::parse(terminal_moves, DagOptions::default()).is_err());

    let stuck = "dag-game v1\nnode a\nnode b alice_wins\nedge a alice x b\n";
    assert!(DagGame::parse(stuck, DagOptions::default()).is_err());
    assert!(DagGame::parse(stuck, DagOptions { allow_stuck: true }).is_ok());

    assert!(DagGame::parse("dag-game v1\nvertex a\n", DagOptions::default()).is_err());
    assert!(DagGame::parse("node a\n", DagOptions::default()).is_err());
}

#[test]
fn every_fixture_loads_and_round_trips() {
    for name in common::DAG_FIXTURES {
        let g = common::fixture(name);
        let again = DagGame::parse_named(
            g.name(),
            &g.to_text(),
            DagOptions {
                allow_stuck: name.starts_with("stuck"),
            },
        )
        .unwrap();
        assert_eq!(again.to_text(), g.to_text(), "{name}");
        for pos in reachable_postorder(&g).unwrap() {
            assert_eq!(g.decode(&g.encode(&pos)).unwrap(), pos);
        }
    }
}

#[test]
fn game_specs() {
    let opts = DagOptions::default();
    assert!(AnyGame::from_spec("ttt", opts).is_ok());
    assert_eq!(AnyGame::from_spec("hex:5", opts).unwrap().id(), "hex:5");
    assert!(AnyGame::from_spec("hex:1", opts).is_err());
    assert!(AnyGame::from_spec("chess", opts).is_err());
    let path = common::fixture_path("diamond.dag");
    let g = AnyGame::from_spec(&format!("dag:{}", path.display()), opts).unwrap();
    assert_eq!(g.id(), "dag:diamond");
}
