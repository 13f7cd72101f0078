//! Abstract two-player games where either player may move at any position.
//!
//! Bidding play has no alternation, so "whose turn" is not part of a
//! position: every position carries a separate move list for each player.

mod any;
mod dag;
mod hex;
mod tictactoe;
mod union_find;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use thiserror::Error;

pub use any::{AnyGame, AnyPosition};
pub use dag::{DagGame, DagOptions, NodeId};
pub use hex::{Hex, HexPosition, MAX_HEX_SIZE};
pub use tictactoe::{TicTacToe, TttPosition};
pub use union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::Alice, Player::Bob];

    pub fn opponent(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }

    /// Single-letter tag used by the text formats.
    pub fn letter(self) -> char {
        match self {
            Player::Alice => 'A',
            Player::Bob => 'B',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Player::Alice => "alice",
            Player::Bob => "bob",
        }
    }

    pub fn wins(self) -> Outcome {
        match self {
            Player::Alice => Outcome::AliceWins,
            Player::Bob => Outcome::BobWins,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Player {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" | "alice" | "ALICE" => Ok(Player::Alice),
            "B" | "b" | "bob" | "BOB" => Ok(Player::Bob),
            _ => Err(GameError::Parse(format!("unknown player `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    AliceWins,
    BobWins,
    Draw,
    Ongoing,
}

impl Outcome {
    pub fn is_terminal(self) -> bool {
        self != Outcome::Ongoing
    }

    pub fn winner(self) -> Option<Player> {
        match self {
            Outcome::AliceWins => Some(Player::Alice),
            Outcome::BobWins => Some(Player::Bob),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::AliceWins => "alice_wins",
            Outcome::BobWins => "bob_wins",
            Outcome::Draw => "draw",
            Outcome::Ongoing => "ongoing",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Outcome {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alice_wins" => Ok(Outcome::AliceWins),
            "bob_wins" => Ok(Outcome::BobWins),
            "draw" => Ok(Outcome::Draw),
            "ongoing" => Ok(Outcome::Ongoing),
            _ => Err(GameError::Parse(format!("unknown outcome `{s}`"))),
        }
    }
}

/// A legal move: a human-readable label and the resulting position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move<P> {
    pub label: String,
    pub to: P,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("malformed position encoding `{0}`")]
    Encoding(String),
    #[error("cycle detected through `{0}`")]
    Cycle(String),
    #[error("line {line}: {msg}")]
    Definition { line: usize, msg: String },
    #[error("invalid game definition: {0}")]
    Invalid(String),
    #[error("unknown game `{0}`")]
    UnknownGame(String),
    #[error("position space exceeds {0} positions")]
    TooLarge(usize),
    #[error("{0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// A finite, loop-free two-player game.
///
/// `legal_moves` must list moves in a canonical order (boards: row-major cell
/// order; DAG games: label order). Agents break ties by taking the first.
pub trait Game {
    type Position: Clone + Eq + Hash + fmt::Debug;

    /// Short game identifier, e.g. `ttt` or `hex:5`.
    fn id(&self) -> String;

    fn initial(&self) -> Self::Position;

    fn outcome(&self, pos: &Self::Position) -> Outcome;

    /// Complete, duplicate-free move list; empty iff terminal or stuck.
    fn legal_moves(&self, pos: &Self::Position, player: Player) -> Vec<Move<Self::Position>>;

    /// Canonical whitespace-free encoding usable as a map key in text formats.
    fn encode(&self, pos: &Self::Position) -> String;

    fn decode(&self, s: &str) -> Result<Self::Position, GameError>;

    /// Successor positions only, in canonical order.
    fn successors(&self, pos: &Self::Position, player: Player) -> Vec<Self::Position> {
        self.legal_moves(pos, player).into_iter().map(|m| m.to).collect()
    }

    /// Applies the move with `label`, if legal.
    fn apply(&self, pos: &Self::Position, player: Player, label: &str) -> Option<Self::Position> {
        self.legal_moves(pos, player)
            .into_iter()
            .find(|m| m.label == label)
            .map(|m| m.to)
    }
}

/// Every position reachable from the initial one, children before parents.
pub fn reachable_postorder<G: Game>(game: &G) -> Result<Vec<G::Position>, GameError> {
    reachable_postorder_limited(game, usize::MAX)
}

/// Like [`reachable_postorder`] but from `root`, failing once more than
/// `limit` positions have been discovered.
pub fn reachable_from_limited<G: Game>(
    game: &G,
    root: G::Position,
    limit: usize,
) -> Result<Vec<G::Position>, GameError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: HashMap<G::Position, Mark> = HashMap::new();
    let mut order = Vec::new();
    // Each frame holds a position and its not-yet-visited children.
    let mut stack: Vec<(G::Position, Vec<G::Position>)> = Vec::new();

    let children = |p: &G::Position| -> Vec<G::Position> {
        if game.outcome(p).is_terminal() {
            return Vec::new();
        }
        let mut out = game.successors(p, Player::Alice);
        out.extend(game.successors(p, Player::Bob));
        out
    };

    marks.insert(root.clone(), Mark::Open);
    let kids = children(&root);
    stack.push((root, kids));
    while let Some((_, kids)) = stack.last_mut() {
        match kids.pop() {
            Some(child) => match marks.get(&child) {
                Some(Mark::Done) => {}
                Some(Mark::Open) => return Err(GameError::Cycle(game.encode(&child))),
                None => {
                    if marks.len() >= limit {
                        return Err(GameError::TooLarge(limit));
                    }
                    marks.insert(child.clone(), Mark::Open);
                    let grandkids = children(&child);
                    stack.push((child, grandkids));
                }
            },
            None => {
                let (pos, _) = stack.pop().expect("non-empty stack");
                marks.insert(pos.clone(), Mark::Done);
                order.push(pos);
            }
        }
    }
    Ok(order)
}

pub fn reachable_postorder_limited<G: Game>(
    game: &G,
    limit: usize,
) -> Result<Vec<G::Position>, GameError> {
    reachable_from_limited(game, game.initial(), limit)
}

/// Cell label for boards: column letter then 1-based row, e.g. `a1`, `c3`.
pub(crate) fn cell_label(row: usize, col: usize) -> String {
    format!("{}{}", (b'a' + col as u8) as char, row + 1)
}
