//! Independent reference implementations used as test oracles. They share
//! only the game rules with the production solvers: plain recursion, string
//! memo keys, fixed-width rationals, and full bid enumeration.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};
use std::path::PathBuf;

use bidding_core::game::{DagGame, DagOptions};
use bidding_core::{resolve_bids, Bid, ChipState, DrawPolicy, Game, Outcome, Player};

pub type Q = num_rational::Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn show(r: &Q) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> DagGame {
    let allow_stuck = name.starts_with("stuck");
    DagGame::load(&fixture_path(name), DagOptions { allow_stuck }).expect("fixture loads")
}

pub const DAG_FIXTURES: [&str; 5] = ["diamond.dag", "chain.dag", "race.dag", "stuck.dag", "sample-game.dag"];

/// R by direct recursion: 0 for an Alice win, 1 for a Bob win.
pub struct NaiveRichman<'a, G: Game> {
    game: &'a G,
    draw: Q,
    memo: HashMap<String, Q>,
}

impl<'a, G: Game> NaiveRichman<'a, G> {
    pub fn new(game: &'a G, draw: Q) -> Self {
        NaiveRichman {
            game,
            draw,
            memo: HashMap::new(),
        }
    }

    pub fn value(&mut self, v: &G::Position) -> Q {
        let key = self.game.encode(v);
        if let Some(r) = self.memo.get(&key) {
            return *r;
        }
        let r = match self.game.outcome(v) {
            Outcome::AliceWins => q(0, 1),
            Outcome::BobWins => q(1, 1),
            Outcome::Draw => self.draw,
            Outcome::Ongoing => {
                let mut lo = q(1, 1);
                for m in self.game.legal_moves(v, Player::Alice) {
                    lo = lo.min(self.value(&m.to));
                }
                let mut hi = q(0, 1);
                for m in self.game.legal_moves(v, Player::Bob) {
                    hi = hi.max(self.value(&m.to));
                }
                (lo + hi) / 2
            }
        };
        self.memo.insert(key, r);
        r
    }

    pub fn memo(&self) -> &HashMap<String, Q> {
        &self.memo
    }
}

/// P by direct recursion: 1 for an Alice win, 0 for a Bob win.
pub struct NaiveRandomTurn<'a, G: Game> {
    game: &'a G,
    draw: Q,
    memo: HashMap<String, Q>,
}

impl<'a, G: Game> NaiveRandomTurn<'a, G> {
    pub fn new(game: &'a G, draw: Q) -> Self {
        NaiveRandomTurn {
            game,
            draw,
            memo: HashMap::new(),
        }
    }

    pub fn value(&mut self, v: &G::Position) -> Q {
        let key = self.game.encode(v);
        if let Some(p) = self.memo.get(&key) {
            return *p;
        }
        let p = match self.game.outcome(v) {
            Outcome::AliceWins => q(1, 1),
            Outcome::BobWins => q(0, 1),
            Outcome::Draw => self.draw,
            Outcome::Ongoing => {
                let mut best = q(0, 1);
                for m in self.game.legal_moves(v, Player::Alice) {
                    best = best.max(self.value(&m.to));
                }
                let mut worst = q(1, 1);
                for m in self.game.legal_moves(v, Player::Bob) {
                    worst = worst.min(self.value(&m.to));
                }
                (best + worst) / 2
            }
        };
        self.memo.insert(key, p);
        p
    }
}

/// Discrete bidding by brute force over every pair of bids.
pub struct BruteDiscrete<'a, G: Game> {
    game: &'a G,
    policy: DrawPolicy,
    memo: HashMap<(String, u64, u64, Player), (bool, bool)>,
}

fn bids(chips: ChipState, p: Player) -> Vec<Bid> {
    let mut out = Vec::new();
    for amount in 0..=chips.chips(p) {
        out.push(Bid::new(amount, false));
        if chips.star == p {
            out.push(Bid::new(amount, true));
        }
    }
    out
}

impl<'a, G: Game> BruteDiscrete<'a, G> {
    pub fn new(game: &'a G, policy: DrawPolicy) -> Self {
        BruteDiscrete {
            game,
            policy,
            memo: HashMap::new(),
        }
    }

    /// Whether `p` wins after taking the auction at `v` with `chips` left.
    fn mover_wins(&mut self, v: &G::Position, p: Player, chips: ChipState) -> bool {
        let moves = self.game.legal_moves(v, p);
        moves.iter().any(|m| self.winner(&m.to, chips) == p)
    }

    /// Whether `bid` by `p` wins against every reply.
    pub fn is_safe_bid(&mut self, v: &G::Position, chips: ChipState, p: Player, bid: Bid) -> bool {
        bids(chips, p.opponent()).into_iter().all(|c| {
            let (a_bid, b_bid) = match p {
                Player::Alice => (bid, c),
                Player::Bob => (c, bid),
            };
            let (mover, after) = resolve_bids(chips, a_bid, b_bid).expect("valid bids");
            if mover == p {
                self.mover_wins(v, p, after)
            } else {
                !self.mover_wins(v, p.opponent(), after)
            }
        })
    }

    /// Every safe bid for `p`, in increasing strength.
    pub fn safe_bids(&mut self, v: &G::Position, chips: ChipState, p: Player) -> Vec<Bid> {
        bids(chips, p)
            .into_iter()
            .filter(|&b| self.is_safe_bid(v, chips, p, b))
            .collect()
    }

    fn safe(&mut self, v: &G::Position, chips: ChipState, p: Player) -> bool {
        bids(chips, p).into_iter().any(|b| self.is_safe_bid(v, chips, p, b))
    }

    /// (Alice has a safe bid, Bob has a safe bid) at a non-terminal state.
    pub fn safety(&mut self, v: &G::Position, chips: ChipState) -> (bool, bool) {
        let key = (self.game.encode(v), chips.alice, chips.bob, chips.star);
        if let Some(r) = self.memo.get(&key) {
            return *r;
        }
        let r = (self.safe(v, chips, Player::Alice), self.safe(v, chips, Player::Bob));
        self.memo.insert(key, r);
        r
    }

    pub fn winner(&mut self, v: &G::Position, chips: ChipState) -> Player {
        match self.game.outcome(v) {
            Outcome::Ongoing => {
                if self.safety(v, chips).0 {
                    Player::Alice
                } else {
                    Player::Bob
                }
            }
            Outcome::Draw => self.policy.winner(),
            o => o.winner().expect("decisive outcome"),
        }
    }
}

/// Every position reached by legal play from the start, by plain search.
pub fn reachable<G: Game>(game: &G) -> Vec<G::Position> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack = vec![game.initial()];
    while let Some(v) = stack.pop() {
        if !seen.insert(game.encode(&v)) {
            continue;
        }
        for p in Player::BOTH {
            for m in game.legal_moves(&v, p) {
                stack.push(m.to);
            }
        }
        out.push(v);
    }
    out
}

/// Tic-Tac-Toe boards reached when X and O strictly alternate, X first, and
/// play stops at the first line or a full board.
pub fn alternating_ttt_boards() -> HashSet<String> {
    fn lines(b: &[u8; 9], c: u8) -> bool {
        const L: [[usize; 3]; 8] = [
            [0, 1, 2],
            [3, 4, 5],
            [6, 7, 8],
            [0, 3, 6],
            [1, 4, 7],
            [2, 5, 8],
            [0, 4, 8],
            [2, 4, 6],
        ];
        L.iter().any(|l| l.iter().all(|&i| b[i] == c))
    }
    fn walk(b: &mut [u8; 9], turn: u8, seen: &mut HashSet<String>) {
        let key: String = b.iter().map(|&c| c as char).collect();
        if !seen.insert(key) {
            return;
        }
        if lines(b, b'x') || lines(b, b'o') || b.iter().all(|&c| c != b'.') {
            return;
        }
        for i in 0..9 {
            if b[i] == b'.' {
                b[i] = turn;
                walk(b, if turn == b'x' { b'o' } else { b'x' }, seen);
                b[i] = b'.';
            }
        }
    }
    let mut seen = HashSet::new();
    walk(&mut [b'.'; 9], b'x', &mut seen);
    seen.into_iter().map(|s| format!("ttt3:{s}")).collect()
}

pub fn to_q(r: &bidding_core::Ratio) -> Q {
    use num_traits::ToPrimitive;
    Q::new(r.numer().to_i128().expect("fits"), r.denom().to_i128().expect("fits"))
}

/// A random loop-free game text: `inner` ongoing nodes, each with one to
/// three moves per player to later nodes, and three terminal leaves.
pub fn random_dag_text(seed: u64, inner: usize, with_draw: bool) -> String {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::from("dag-game v1\n");
    for i in 0..inner {
        text.push_str(&format!("node n{i}\n"));
    }
    let leaves = ["alice_wins", "bob_wins", if with_draw { "draw" } else { "alice_wins" }];
    for (j, o) in leaves.iter().enumerate() {
        text.push_str(&format!("node t{j} {o}\n"));
    }
    let total = inner + leaves.len();
    let name = |k: usize| {
        if k < inner {
            format!("n{k}")
        } else {
            format!("t{}", k - inner)
        }
    };
    for i in 0..inner {
        for player in ["alice", "bob"] {
            let count = rng.gen_range(1..=3);
            let mut used = HashSet::new();
            for m in 0..count {
                let to = rng.gen_range(i + 1..total);
                if used.insert(to) {
                    text.push_str(&format!("edge n{i} {player} m{m} {}\n", name(to)));
                }
            }
        }
    }
    text
}

/// Game specs for every shipped game, DAG fixtures by absolute path.
pub fn game_specs() -> Vec<String> {
    let mut specs: Vec<String> = ["ttt", "hex:2", "hex:3", "hex:5"].map(String::from).to_vec();
    for name in DAG_FIXTURES {
        specs.push(format!("dag:{}", fixture_path(name).display()));
    }
    specs
}

pub fn load_spec(spec: &str) -> bidding_core::AnyGame {
    bidding_core::AnyGame::from_spec(spec, DagOptions { allow_stuck: true }).expect("shipped game")
}

/// One bot match with everything drawn from `seed`: game, chip split, `*`
/// holder, draw policy and both seats.
pub fn random_bot_match(
    seed: u64,
    tables: &bidding_core::agents::SolvedTables,
) -> (bidding_core::AnyGame, bidding_core::Transcript) {
    use bidding_core::agents::{build_agent, AgentSpec};
    use bidding_core::{run_match, MatchConfig};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let specs = game_specs();
    let spec = specs.choose(&mut rng).unwrap().clone();
    let game = load_spec(&spec);
    let total = *[0u64, 1, 2, 3, 7, 16, 40, 200].choose(&mut rng).unwrap();
    let alice_chips = rng.gen_range(0..=total);
    let star = if rng.gen_bool(0.5) { Player::Alice } else { Player::Bob };
    let policy = if rng.gen_bool(0.5) { DrawPolicy::BobWins } else { DrawPolicy::AliceWins };
    let mut seats: Vec<AgentSpec> = vec![AgentSpec::Random];
    if spec == "hex:5" {
        seats.push(AgentSpec::McHex { samples: 64 });
    } else {
        seats.extend([AgentSpec::Richman, AgentSpec::Discrete]);
        if spec.starts_with("hex") {
            seats.push(AgentSpec::McHex { samples: 64 });
        }
    }
    let a = *seats.choose(&mut rng).unwrap();
    let b = *seats.choose(&mut rng).unwrap();
    let config = MatchConfig {
        game: spec,
        alice_chips,
        bob_chips: total - alice_chips,
        star,
        draw_policy: policy,
        alice_seat: a.to_string(),
        bob_seat: b.to_string(),
        seed,
    };
    let mut alice = build_agent(a, &game, total, policy, seed, tables).unwrap();
    let mut bob = build_agent(b, &game, total, policy, seed ^ 0x9e37_79b9, tables).unwrap();
    let transcript = run_match(game.clone(), config, &mut alice, &mut bob);
    (game, transcript)
}
