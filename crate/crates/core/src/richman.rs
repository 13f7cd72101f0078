//! Exact continuous-bidding (Richman) values.
//!
//! `R(v)` is the critical fraction of all chips Alice needs at `v`: with more
//! she wins, with less she loses. Terminal Alice wins are 0, Bob wins are 1,
//! and every other position is the midpoint of `R⁺(v)` (the best Bob can
//! reach in one move) and `R⁻(v)` (the best Alice can reach).

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::game::{reachable_postorder_limited, Game, GameError, Outcome, Player};
use crate::value::{self, Ratio};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("draw value {0} is outside [0, 1]")]
    DrawValueOutOfRange(String),
    #[error("position `{0}` is terminal")]
    Terminal(String),
    #[error("position `{0}` is not in the table")]
    Missing(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueEntry {
    pub value: Ratio,
    /// Max over Bob's successors (0 if Bob is stuck). Equals `value` at
    /// terminals.
    pub plus: Ratio,
    /// Min over Alice's successors (1 if Alice is stuck). Equals `value` at
    /// terminals.
    pub minus: Ratio,
    /// Labels of Alice's moves reaching `minus`, canonical order.
    pub alice_optimal: Vec<String>,
    /// Labels of Bob's moves reaching `plus`, canonical order.
    pub bob_optimal: Vec<String>,
    pub terminal: bool,
}

/// Solved values for every reachable position.
#[derive(Clone, Debug)]
pub struct ValueTable<P> {
    order: Vec<P>,
    index: HashMap<P, usize>,
    entries: Vec<ValueEntry>,
    draw_value: Ratio,
}

impl<P: Clone + Eq + std::hash::Hash> ValueTable<P> {
    pub fn get(&self, pos: &P) -> Option<&ValueEntry> {
        self.index.get(pos).map(|&i| &self.entries[i])
    }

    pub fn value(&self, pos: &P) -> Option<&Ratio> {
        self.get(pos).map(|e| &e.value)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn draw_value(&self) -> &Ratio {
        &self.draw_value
    }

    /// Positions with their entries, children before parents.
    pub fn iter(&self) -> impl Iterator<Item = (&P, &ValueEntry)> {
        self.order.iter().zip(&self.entries)
    }

    pub fn positions(&self) -> &[P] {
        &self.order
    }

    /// One `value <position> <R> <R+> <R->` line per position.
    pub fn export<G: Game<Position = P>>(&self, game: &G) -> String {
        let mut out = String::new();
        for (pos, e) in self.iter() {
            writeln!(
                out,
                "value {} {} {} {}",
                game.encode(pos),
                value::format_ratio(&e.value),
                value::format_ratio(&e.plus),
                value::format_ratio(&e.minus)
            )
            .expect("write to string");
        }
        out
    }
}

/// A parsed `value` export line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueLine {
    pub position: String,
    pub value: Ratio,
    pub plus: Ratio,
    pub minus: Ratio,
}

pub fn parse_value_export(text: &str) -> Result<Vec<ValueLine>, GameError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| GameError::Definition {
            line: n + 1,
            msg: msg.to_string(),
        };
        let t: Vec<&str> = line.split_whitespace().collect();
        let ["value", position, r, plus, minus] = t.as_slice() else {
            return Err(err("expected `value <position> <R> <R+> <R->`"));
        };
        let num = |s: &str| value::parse_ratio(s).map_err(|e| err(&e.to_string()));
        out.push(ValueLine {
            position: position.to_string(),
            value: num(r)?,
            plus: num(plus)?,
            minus: num(minus)?,
        });
    }
    Ok(out)
}

/// Solves every reachable position by backward induction.
///
/// Terminal draws take `draw_value`. A player with no move at a non-terminal
/// position loses if they win the bid, so their side of the average is their
/// loss value.
pub fn solve_richman<G: Game>(game: &G, draw_value: &Ratio) -> Result<ValueTable<G::Position>, SolveError> {
    solve_richman_limited(game, draw_value, usize::MAX)
}

pub fn solve_richman_limited<G: Game>(
    game: &G,
    draw_value: &Ratio,
    limit: usize,
) -> Result<ValueTable<G::Position>, SolveError> {
    if !value::in_unit_interval(draw_value) {
        return Err(SolveError::DrawValueOutOfRange(value::format_ratio(draw_value)));
    }
    let order = reachable_postorder_limited(game, limit)?;
    let mut index: HashMap<G::Position, usize> = HashMap::with_capacity(order.len());
    let mut entries: Vec<ValueEntry> = Vec::with_capacity(order.len());

    for (i, pos) in order.iter().enumerate() {
        let entry = match game.outcome(pos) {
            Outcome::Ongoing => {
                let alice = game.legal_moves(pos, Player::Alice);
                let bob = game.legal_moves(pos, Player::Bob);
                let lookup = |p: &G::Position| -> &Ratio { &entries[index[p]].value };

                let minus = alice
                    .iter()
                    .map(|m| lookup(&m.to))
                    .min()
                    .cloned()
                    .unwrap_or_else(value::one);
                let plus = bob
                    .iter()
                    .map(|m| lookup(&m.to))
                    .max()
                    .cloned()
                    .unwrap_or_else(value::zero);
                let alice_optimal = alice
                    .iter()
                    .filter(|m| lookup(&m.to) == &minus)
                    .map(|m| m.label.clone())
                    .collect();
                let bob_optimal = bob
                    .iter()
                    .filter(|m| lookup(&m.to) == &plus)
                    .map(|m| m.label.clone())
                    .collect();
                ValueEntry {
                    value: value::average(&plus, &minus),
                    plus,
                    minus,
                    alice_optimal,
                    bob_optimal,
                    terminal: false,
                }
            }
            terminal => {
                let v = match terminal {
                    Outcome::AliceWins => value::zero(),
                    Outcome::BobWins => value::one(),
                    _ => draw_value.clone(),
                };
                ValueEntry {
                    plus: v.clone(),
                    minus: v.clone(),
                    value: v,
                    alice_optimal: Vec::new(),
                    bob_optimal: Vec::new(),
                    terminal: true,
                }
            }
        };
        entries.push(entry);
        index.insert(pos.clone(), i);
    }

    Ok(ValueTable {
        order,
        index,
        entries,
        draw_value: draw_value.clone(),
    })
}

/// `(R⁺(v) − R⁻(v)) / 2`: the optimal bid as a fraction of all chips.
pub fn optimal_bid<P: Clone + Eq + std::hash::Hash + std::fmt::Debug>(
    table: &ValueTable<P>,
    pos: &P,
) -> Result<Ratio, SolveError> {
    let e = table
        .get(pos)
        .ok_or_else(|| SolveError::Missing(format!("{pos:?}")))?;
    if e.terminal {
        return Err(SolveError::Terminal(format!("{pos:?}")));
    }
    Ok((&e.plus - &e.minus) / num_bigint::BigInt::from(2))
}

/// Who wins at `pos` holding `alice_fraction` of the chips under real-valued
/// bidding. `None` at exactly `R(v)`, where the outcome is not determined by
/// the threshold alone.
pub fn richman_winner<P: Clone + Eq + std::hash::Hash>(
    table: &ValueTable<P>,
    pos: &P,
    alice_fraction: &Ratio,
) -> Option<Player> {
    let r = table.value(pos)?;
    match alice_fraction.cmp(r) {
        std::cmp::Ordering::Greater => Some(Player::Alice),
        std::cmp::Ordering::Less => Some(Player::Bob),
        std::cmp::Ordering::Equal => None,
    }
}
