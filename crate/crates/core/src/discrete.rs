//! Whole-chip bidding with the `*` tiebreaker.
//!
//! Both players bid a whole number of chips; the higher bid is paid to the
//! opponent and buys the move. The holder of `*` may attach it to break a
//! tie in their favour, in which case `*` is paid over with the bid. A holder
//! who ties without attaching `*` loses the tie and keeps it.
//!
//! A state is won by Alice iff she has a *safe bid*: one such that every
//! reply by Bob leads to a state she still wins. Determinacy (exactly one
//! side has a safe bid) is checked, not assumed; [`DiscreteTable::undetermined`]
//! counts violations.

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::game::{reachable_postorder_limited, Game, Outcome, Player};
use crate::richman::{SolveError, ValueTable};

/// A sealed bid. `star` attaches the tiebreaker chip.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Bid {
    pub amount: u64,
    pub star: bool,
}

impl Bid {
    pub fn new(amount: u64, star: bool) -> Self {
        Bid { amount, star }
    }

    pub fn plain(amount: u64) -> Self {
        Bid { amount, star: false }
    }

    fn code(self) -> u32 {
        (self.amount as u32) * 2 + self.star as u32
    }

    fn from_code(code: u32) -> Self {
        Bid::new((code / 2) as u64, code % 2 == 1)
    }
}

impl fmt::Display for Bid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.amount, if self.star { "*" } else { "" })
    }
}

impl FromStr for Bid {
    type Err = BidError;

    fn from_str(s: &str) -> Result<Self, BidError> {
        let (digits, star) = match s.strip_suffix('*') {
            Some(d) => (d, true),
            None => (s, false),
        };
        let amount = digits.parse().map_err(|_| BidError::Syntax(s.to_string()))?;
        Ok(Bid { amount, star })
    }
}

/// A chip count with or without `*`, ordered `k < k* < k+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pile {
    pub chips: u64,
    pub star: bool,
}

impl Pile {
    /// Pile size counting `*` as half a chip.
    pub fn as_f64(self) -> f64 {
        self.chips as f64 + if self.star { 0.5 } else { 0.0 }
    }
}

impl fmt::Display for Pile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.chips, if self.star { "*" } else { "" })
    }
}

impl FromStr for Pile {
    type Err = BidError;

    fn from_str(s: &str) -> Result<Self, BidError> {
        let b: Bid = s.parse()?;
        Ok(Pile {
            chips: b.amount,
            star: b.star,
        })
    }
}

/// Both piles plus the holder of `*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChipState {
    pub alice: u64,
    pub bob: u64,
    pub star: Player,
}

impl ChipState {
    pub fn new(alice: u64, bob: u64, star: Player) -> Self {
        ChipState { alice, bob, star }
    }

    pub fn total(&self) -> u64 {
        self.alice + self.bob
    }

    pub fn chips(&self, p: Player) -> u64 {
        match p {
            Player::Alice => self.alice,
            Player::Bob => self.bob,
        }
    }

    pub fn pile(&self, p: Player) -> Pile {
        Pile {
            chips: self.chips(p),
            star: self.star == p,
        }
    }

    fn chips_mut(&mut self, p: Player) -> &mut u64 {
        match p {
            Player::Alice => &mut self.alice,
            Player::Bob => &mut self.bob,
        }
    }

    /// Checks that `bid` can be made by `p` from this state.
    pub fn validate(&self, p: Player, bid: Bid) -> Result<(), BidError> {
        if bid.amount > self.chips(p) {
            return Err(BidError::ExceedsPile {
                player: p,
                amount: bid.amount,
                pile: self.chips(p),
            });
        }
        if bid.star && self.star != p {
            return Err(BidError::NoStar(p));
        }
        Ok(())
    }

    /// State after `payer` wins the auction with `bid`.
    pub fn pay(&self, payer: Player, bid: Bid) -> ChipState {
        let mut next = *self;
        *next.chips_mut(payer) -= bid.amount;
        *next.chips_mut(payer.opponent()) += bid.amount;
        if bid.star {
            next.star = payer.opponent();
        }
        next
    }
}

/// Renders as `<alice>[*]/<bob>[*]`, e.g. `113*/87`.
impl fmt::Display for ChipState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.pile(Player::Alice), self.pile(Player::Bob))
    }
}

impl FromStr for ChipState {
    type Err = BidError;

    fn from_str(s: &str) -> Result<Self, BidError> {
        let (a, b) = s.split_once('/').ok_or_else(|| BidError::Syntax(s.to_string()))?;
        let (a, b): (Pile, Pile) = (a.parse()?, b.parse()?);
        let star = match (a.star, b.star) {
            (true, false) => Player::Alice,
            (false, true) => Player::Bob,
            _ => return Err(BidError::Syntax(s.to_string())),
        };
        Ok(ChipState::new(a.chips, b.chips, star))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BidError {
    #[error("{player} bid {amount} but holds only {pile}")]
    ExceedsPile { player: Player, amount: u64, pile: u64 },
    #[error("{0} attached * without holding it")]
    NoStar(Player),
    #[error("cannot parse `{0}`")]
    Syntax(String),
}

/// Resolves one auction: returns the mover and the chips afterwards.
pub fn resolve_bids(chips: ChipState, alice: Bid, bob: Bid) -> Result<(Player, ChipState), BidError> {
    chips.validate(Player::Alice, alice)?;
    chips.validate(Player::Bob, bob)?;
    let winner = if alice.amount != bob.amount {
        if alice.amount > bob.amount {
            Player::Alice
        } else {
            Player::Bob
        }
    } else {
        let holder = chips.star;
        let holder_used = match holder {
            Player::Alice => alice.star,
            Player::Bob => bob.star,
        };
        if holder_used {
            holder
        } else {
            holder.opponent()
        }
    };
    let paid = match winner {
        Player::Alice => alice,
        Player::Bob => bob,
    };
    Ok((winner, chips.pay(winner, paid)))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DrawPolicy {
    /// Draws count as Bob wins.
    #[default]
    BobWins,
    AliceWins,
}

impl DrawPolicy {
    pub fn winner(self) -> Player {
        match self {
            DrawPolicy::BobWins => Player::Bob,
            DrawPolicy::AliceWins => Player::Alice,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DrawPolicy::BobWins => "draw_is_bob_win",
            DrawPolicy::AliceWins => "draw_is_alice_win",
        }
    }
}

impl FromStr for DrawPolicy {
    type Err = BidError;

    fn from_str(s: &str) -> Result<Self, BidError> {
        match s {
            "draw_is_bob_win" | "bob" => Ok(DrawPolicy::BobWins),
            "draw_is_alice_win" | "alice" => Ok(DrawPolicy::AliceWins),
            _ => Err(BidError::Syntax(s.to_string())),
        }
    }
}

/// A position together with the chips in play.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiscreteState<P> {
    pub position: P,
    pub chips: ChipState,
}

const NO_BID: u32 = u32::MAX;

/// Winner and certifying safe bid for every (position, Alice pile, `*` holder).
#[derive(Clone, Debug)]
pub struct DiscreteTable<P> {
    total: u64,
    policy: DrawPolicy,
    order: Vec<P>,
    index: HashMap<P, usize>,
    alice_wins: Vec<bool>,
    safe_bid: Vec<u32>,
    undetermined: usize,
}

fn slot(alice: u64, star: Player) -> usize {
    alice as usize * 2 + (star == Player::Alice) as usize
}

/// One candidate bid for a bidder holding `mine` chips against `theirs`.
#[derive(Clone, Copy, Debug)]
struct BidCase {
    bid: Bid,
    /// Bidder's (chips, holds `*`) after winning the auction; `None` when no
    /// reply lets the bidder win it.
    win: Option<(u64, bool)>,
    /// Every reply that beats this bid leaves the bidder winning.
    replies_ok: bool,
}

/// Enumerates the bidder's bids in increasing strength. `replies_ok(lo, hold)`
/// must report whether the bidder wins after the opponent moves, for every
/// bidder pile from `lo` to `mine + theirs` with the given `*` holding.
fn bid_cases(
    mine: u64,
    theirs: u64,
    hold: bool,
    replies_ok: impl Fn(u64, bool) -> bool,
) -> impl Iterator<Item = BidCase> {
    let stars: &'static [bool] = if hold { &[false, true] } else { &[false] };
    (0..=mine).flat_map(move |x| stars.iter().map(move |&s| (x, s))).map(move |(x, s)| {
        if hold {
            // Opponent needs at least `x + s` to beat this bid.
            let need = x + s as u64;
            BidCase {
                bid: Bid::new(x, s),
                win: (need > 0).then_some((mine - x, !s)),
                replies_ok: need > theirs || replies_ok(mine + need, true),
            }
        } else {
            // Opponent beats it with x+1 plain or with x plus `*`.
            let plain_ok = x + 1 > theirs || replies_ok(mine + x + 1, false);
            let star_ok = x > theirs || replies_ok(mine + x, true);
            BidCase {
                bid: Bid::plain(x),
                win: Some((mine - x, false)),
                replies_ok: plain_ok && star_ok,
            }
        }
    })
}

/// Per-position outcome arrays from one bidder's point of view, indexed by
/// the bidder's pile `k` and whether they hold `*`.
struct Branches {
    total: u64,
    /// Bidder wins after moving themself (false if stuck).
    mover: Vec<bool>,
    /// `suffix[lo*2+hold]`: bidder wins after any opponent move for every
    /// pile in `lo..=total`.
    suffix: Vec<bool>,
}

impl Branches {
    fn new(total: u64, mover: Vec<bool>, other: Vec<bool>) -> Self {
        let n = total as usize + 1;
        let mut suffix = vec![true; (n + 1) * 2];
        for k in (0..n).rev() {
            for h in 0..2 {
                suffix[k * 2 + h] = other[k * 2 + h] && suffix[(k + 1) * 2 + h];
            }
        }
        Branches { total, mover, suffix }
    }

    fn mover_ok(&self, k: u64, hold: bool) -> bool {
        self.mover[k as usize * 2 + hold as usize]
    }

    fn replies_ok(&self, lo: u64, hold: bool) -> bool {
        lo > self.total || self.suffix[lo as usize * 2 + hold as usize]
    }
}

/// Builds both bidders' branch arrays for `pos` from successor winners.
fn branches<G: Game>(
    game: &G,
    pos: &G::Position,
    total: u64,
    alice_wins_at: &impl Fn(&G::Position, u64, Player) -> bool,
) -> (Branches, Branches) {
    let n = total as usize + 1;
    let alice_moves = game.successors(pos, Player::Alice);
    let bob_moves = game.successors(pos, Player::Bob);
    // Indexed by Alice's pile and whether Alice holds `*`.
    let mut alice_moves_wins = vec![false; n * 2];
    let mut bob_moves_alice_wins = vec![true; n * 2];
    for a in 0..=total {
        for star in Player::BOTH {
            let i = slot(a, star);
            alice_moves_wins[i] = alice_moves.iter().any(|w| alice_wins_at(w, a, star));
            bob_moves_alice_wins[i] = bob_moves.iter().all(|w| alice_wins_at(w, a, star));
        }
    }
    let alice = Branches::new(total, alice_moves_wins.clone(), bob_moves_alice_wins.clone());
    // Bob's view: pile k means Alice holds total - k; Bob holds `*` iff Alice does not.
    let mut bob_mover = vec![false; n * 2];
    let mut bob_other = vec![false; n * 2];
    for k in 0..=total {
        for hold in [false, true] {
            let star = if hold { Player::Bob } else { Player::Alice };
            let i = slot(total - k, star);
            bob_mover[k as usize * 2 + hold as usize] = !bob_moves_alice_wins[i];
            bob_other[k as usize * 2 + hold as usize] = !alice_moves_wins[i];
        }
    }
    (alice, Branches::new(total, bob_mover, bob_other))
}

fn first_safe_bid(b: &Branches, mine: u64, theirs: u64, hold: bool) -> Option<Bid> {
    bid_cases(mine, theirs, hold, |lo, h| b.replies_ok(lo, h))
        .find(|c| c.replies_ok && c.win.is_none_or(|(k, s)| b.mover_ok(k, s)))
        .map(|c| c.bid)
}

/// Solves every reachable position for `total` chips in play.
pub fn solve_discrete<G: Game>(
    game: &G,
    total: u64,
    policy: DrawPolicy,
) -> Result<DiscreteTable<G::Position>, SolveError> {
    solve_discrete_limited(game, total, policy, usize::MAX)
}

pub fn solve_discrete_limited<G: Game>(
    game: &G,
    total: u64,
    policy: DrawPolicy,
    limit: usize,
) -> Result<DiscreteTable<G::Position>, SolveError> {
    let order = reachable_postorder_limited(game, limit)?;
    let per = (total as usize + 1) * 2;
    let mut table = DiscreteTable {
        total,
        policy,
        index: HashMap::with_capacity(order.len()),
        alice_wins: vec![false; order.len() * per],
        safe_bid: vec![NO_BID; order.len() * per],
        order: Vec::new(),
        undetermined: 0,
    };

    for (i, pos) in order.iter().enumerate() {
        let base = i * per;
        match game.outcome(pos) {
            Outcome::Ongoing => {
                let lookup = |w: &G::Position, a: u64, star: Player| {
                    table.alice_wins[table.index[w] * per + slot(a, star)]
                };
                let (alice, bob) = branches(game, pos, total, &lookup);
                let mut results = Vec::with_capacity(per);
                for a in 0..=total {
                    for star in Player::BOTH {
                        let cell = match first_safe_bid(&alice, a, total - a, star == Player::Alice) {
                            Some(bid) => (true, Some(bid)),
                            None => (false, first_safe_bid(&bob, total - a, a, star == Player::Bob)),
                        };
                        results.push((slot(a, star), cell));
                    }
                }
                for (s, (wins, bid)) in results {
                    table.alice_wins[base + s] = wins;
                    match bid {
                        Some(b) => table.safe_bid[base + s] = b.code(),
                        None => table.undetermined += 1,
                    }
                }
            }
            terminal => {
                let winner = terminal.winner().unwrap_or(policy.winner());
                for s in 0..per {
                    table.alice_wins[base + s] = winner == Player::Alice;
                }
            }
        }
        table.index.insert(pos.clone(), i);
    }
    table.order = order;
    Ok(table)
}

/// Declared winner plus the bid that certifies it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Advice {
    pub bid: Bid,
    /// Move to make if the bid wins; `None` only when stuck.
    pub move_if_win: Option<String>,
    /// Whether the advised player wins the state with correct play.
    pub winning: bool,
}

impl<P: Clone + Eq + std::hash::Hash + fmt::Debug> DiscreteTable<P> {
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn policy(&self) -> DrawPolicy {
        self.policy
    }

    pub fn positions(&self) -> &[P] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Non-terminal states where neither side had a safe bid.
    pub fn undetermined(&self) -> usize {
        self.undetermined
    }

    fn cell(&self, pos: &P, chips: ChipState) -> Result<usize, SolveError> {
        if chips.total() != self.total {
            return Err(SolveError::Missing(format!(
                "{pos:?} with {chips} (table total is {})",
                self.total
            )));
        }
        let i = self
            .index
            .get(pos)
            .ok_or_else(|| SolveError::Missing(format!("{pos:?}")))?;
        Ok(i * (self.total as usize + 1) * 2 + slot(chips.alice, chips.star))
    }

    pub fn winner(&self, pos: &P, chips: ChipState) -> Result<Player, SolveError> {
        let c = self.cell(pos, chips)?;
        Ok(if self.alice_wins[c] { Player::Alice } else { Player::Bob })
    }

    /// The stored safe bid of the winner, if any (none at terminals).
    pub fn safe_bid(&self, pos: &P, chips: ChipState) -> Result<Option<Bid>, SolveError> {
        let c = self.cell(pos, chips)?;
        Ok((self.safe_bid[c] != NO_BID).then(|| Bid::from_code(self.safe_bid[c])))
    }

    /// Least Alice pile (in the order `k < k* < k+1`) that wins at `pos`.
    pub fn threshold(&self, pos: &P) -> Result<Option<Pile>, SolveError> {
        for chips in 0..=self.total {
            for star in [false, true] {
                let state = ChipState::new(
                    chips,
                    self.total - chips,
                    if star { Player::Alice } else { Player::Bob },
                );
                if self.winner(pos, state)? == Player::Alice {
                    return Ok(Some(Pile { chips, star }));
                }
            }
        }
        Ok(None)
    }

    /// `dwin <position> <alice_chips> <star:A|B> <winner:A|B>` lines.
    pub fn export<G: Game<Position = P>>(&self, game: &G) -> String {
        let mut out = String::new();
        for pos in &self.order {
            for a in 0..=self.total {
                for star in Player::BOTH {
                    let w = self
                        .winner(pos, ChipState::new(a, self.total - a, star))
                        .expect("state in table");
                    writeln!(out, "dwin {} {a} {} {}", game.encode(pos), star.letter(), w.letter())
                        .expect("write to string");
                }
            }
        }
        out
    }

    /// `dthresh <position> <total> <threshold>[*]` lines (`none` when Alice
    /// cannot win even holding everything).
    pub fn export_thresholds<G: Game<Position = P>>(&self, game: &G) -> String {
        let mut out = String::new();
        for pos in &self.order {
            let t = self.threshold(pos).expect("position in table");
            let t = t.map_or_else(|| "none".to_string(), |p| p.to_string());
            writeln!(out, "dthresh {} {} {t}", game.encode(pos), self.total).expect("write to string");
        }
        out
    }
}

/// Least winning Alice pile at `pos` for `total` chips.
pub fn discrete_threshold<G: Game>(
    game: &G,
    pos: &G::Position,
    total: u64,
    policy: DrawPolicy,
) -> Result<Option<Pile>, SolveError> {
    let table = solve_discrete(game, total, policy)?;
    table.threshold(pos)
}

struct SafeBidQuery<'a, G: Game> {
    game: &'a G,
    table: &'a DiscreteTable<G::Position>,
}

impl<G: Game> SafeBidQuery<'_, G> {
    fn alice_wins(&self, w: &G::Position, a: u64, star: Player) -> bool {
        self.table
            .winner(w, ChipState::new(a, self.table.total - a, star))
            .map(|p| p == Player::Alice)
            .unwrap_or(false)
    }

    fn branches_for(&self, pos: &G::Position, player: Player) -> Branches {
        let (a, b) = branches(self.game, pos, self.table.total, &|w, a, s| self.alice_wins(w, a, s));
        match player {
            Player::Alice => a,
            Player::Bob => b,
        }
    }
}

/// Every safe bid for `player` at `state`, each with the moves that keep the
/// win when that bid takes the auction. Empty when `player` is losing.
pub fn safe_bids<G: Game>(
    game: &G,
    table: &DiscreteTable<G::Position>,
    state: &DiscreteState<G::Position>,
    player: Player,
) -> Result<Vec<(Bid, Vec<String>)>, SolveError> {
    let chips = state.chips;
    table.cell(&state.position, chips)?;
    if game.outcome(&state.position).is_terminal() {
        return Err(SolveError::Terminal(game.encode(&state.position)));
    }
    let q = SafeBidQuery { game, table };
    let b = q.branches_for(&state.position, player);
    let moves = game.legal_moves(&state.position, player);
    let mine = chips.chips(player);
    let theirs = chips.chips(player.opponent());
    let hold = chips.star == player;
    let mut out = Vec::new();
    for case in bid_cases(mine, theirs, hold, |lo, h| b.replies_ok(lo, h)) {
        if !case.replies_ok {
            continue;
        }
        let winning_moves: Vec<String> = match case.win {
            None => Vec::new(),
            Some(_) => {
                let after = chips.pay(player, case.bid);
                moves
                    .iter()
                    .filter(|m| table.winner(&m.to, after).ok() == Some(player))
                    .map(|m| m.label.clone())
                    .collect()
            }
        };
        if case.win.is_none() || !winning_moves.is_empty() {
            out.push((case.bid, winning_moves));
        }
    }
    Ok(out)
}

/// Moves that some safe bid for `player` commits to at `state`.
pub fn optimal_first_moves<G: Game>(
    game: &G,
    table: &DiscreteTable<G::Position>,
    state: &DiscreteState<G::Position>,
    player: Player,
) -> Result<Vec<String>, SolveError> {
    let mut labels: Vec<String> = Vec::new();
    for (_, moves) in safe_bids(game, table, state, player)? {
        for m in moves {
            if !labels.contains(&m) {
                labels.push(m);
            }
        }
    }
    let order: Vec<String> = game
        .legal_moves(&state.position, player)
        .into_iter()
        .map(|m| m.label)
        .collect();
    labels.sort_by_key(|l| order.iter().position(|o| o == l));
    Ok(labels)
}

/// Advice for `player` at `state`: the stored safe bid and a winning move
/// when `player` is winning; otherwise bid 0 and, if the bid still wins,
/// a move that wins outright if one exists, else the continuous-optimal move
/// from `values`, else the first legal move.
pub fn discrete_optimal_actions<G: Game>(
    game: &G,
    table: &DiscreteTable<G::Position>,
    values: Option<&ValueTable<G::Position>>,
    state: &DiscreteState<G::Position>,
    player: Player,
) -> Result<Advice, SolveError> {
    let chips = state.chips;
    let pos = &state.position;
    let winner = table.winner(pos, chips)?;
    if game.outcome(pos).is_terminal() {
        return Err(SolveError::Terminal(game.encode(pos)));
    }
    let moves = game.legal_moves(pos, player);
    let stored = table.safe_bid(pos, chips)?;
    let (bid, winning) = match stored {
        Some(b) if winner == player => (b, true),
        _ => (Bid::plain(0), false),
    };
    let after = chips.pay(player, bid);
    let winning_move = moves
        .iter()
        .find(|m| table.winner(&m.to, after).ok() == Some(player))
        .map(|m| m.label.clone());
    let fallback = || {
        let entry = values.and_then(|v| v.get(pos));
        let preferred = entry.and_then(|e| match player {
            Player::Alice => e.alice_optimal.first().cloned(),
            Player::Bob => e.bob_optimal.first().cloned(),
        });
        preferred.or_else(|| moves.first().map(|m| m.label.clone()))
    };
    Ok(Advice {
        bid,
        move_if_win: winning_move.or_else(fallback),
        winning,
    })
}
