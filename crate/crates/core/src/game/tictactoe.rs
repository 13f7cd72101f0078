use super::{cell_label, Game, GameError, Move, Outcome, Player};

const LINES: [[usize; 3]; 8] = [
    [0, 1, 2],
    [3, 4, 5],
    [6, 7, 8],
    [0, 3, 6],
    [1, 4, 7],
    [2, 5, 8],
    [0, 4, 8],
    [2, 4, 6],
];

const FULL: u16 = 0x1ff;
const PREFIX: &str = "ttt3:";

/// 3×3 Tic-Tac-Toe. Alice plays `x`, Bob plays `o`; the bid winner places
/// their own mark in any empty cell.
#[derive(Clone, Copy, Debug, Default)]
pub struct TicTacToe;

/// Cell sets as 9-bit masks, row-major (`a1` is bit 0, `c3` bit 8).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TttPosition {
    pub x: u16,
    pub o: u16,
}

fn has_line(mask: u16) -> bool {
    LINES
        .iter()
        .any(|l| l.iter().all(|&i| mask & (1 << i) != 0))
}

impl TttPosition {
    pub fn from_cells(cells: &str) -> Result<Self, GameError> {
        let bytes = cells.as_bytes();
        if bytes.len() != 9 {
            return Err(GameError::Encoding(cells.to_string()));
        }
        let mut pos = TttPosition::default();
        for (i, b) in bytes.iter().enumerate() {
            match b {
                b'x' => pos.x |= 1 << i,
                b'o' => pos.o |= 1 << i,
                b'.' => {}
                _ => return Err(GameError::Encoding(cells.to_string())),
            }
        }
        if has_line(pos.x) && has_line(pos.o) {
            return Err(GameError::Encoding(cells.to_string()));
        }
        Ok(pos)
    }

    pub fn cells(&self) -> String {
        (0..9)
            .map(|i| {
                if self.x & (1 << i) != 0 {
                    'x'
                } else if self.o & (1 << i) != 0 {
                    'o'
                } else {
                    '.'
                }
            })
            .collect()
    }

    pub fn empty(&self) -> u16 {
        FULL & !(self.x | self.o)
    }
}

impl Game for TicTacToe {
    type Position = TttPosition;

    fn id(&self) -> String {
        "ttt".to_string()
    }

    fn initial(&self) -> TttPosition {
        TttPosition::default()
    }

    fn outcome(&self, pos: &TttPosition) -> Outcome {
        if has_line(pos.x) {
            Outcome::AliceWins
        } else if has_line(pos.o) {
            Outcome::BobWins
        } else if pos.empty() == 0 {
            Outcome::Draw
        } else {
            Outcome::Ongoing
        }
    }

    fn legal_moves(&self, pos: &TttPosition, player: Player) -> Vec<Move<TttPosition>> {
        if self.outcome(pos).is_terminal() {
            return Vec::new();
        }
        let empty = pos.empty();
        (0..9)
            .filter(|i| empty & (1 << i) != 0)
            .map(|i| {
                let mut to = *pos;
                match player {
                    Player::Alice => to.x |= 1 << i,
                    Player::Bob => to.o |= 1 << i,
                }
                Move {
                    label: cell_label(i / 3, i % 3),
                    to,
                }
            })
            .collect()
    }

    fn encode(&self, pos: &TttPosition) -> String {
        format!("{PREFIX}{}", pos.cells())
    }

    fn decode(&self, s: &str) -> Result<TttPosition, GameError> {
        let cells = s
            .strip_prefix(PREFIX)
            .ok_or_else(|| GameError::Encoding(s.to_string()))?;
        TttPosition::from_cells(cells)
    }
}
