use super::{cell_label, Game, GameError, Move, Outcome, Player, UnionFind};

pub const MAX_HEX_SIZE: usize = 11;

/// Hex on an n×n rhombus. Alice (`x`) connects the left and right edges
/// (columns `a` and the last column); Bob (`o`) connects top and bottom rows.
///
/// Cell `(row, col)` touches `(row, col±1)`, `(row±1, col)`,
/// `(row-1, col+1)` and `(row+1, col-1)`.
#[derive(Clone, Debug)]
pub struct Hex {
    size: usize,
    board: u128,
    first_col: u128,
    last_col: u128,
    first_row: u128,
    last_row: u128,
}

/// Stone sets as row-major bitmasks (`a1` is bit 0).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HexPosition {
    pub alice: u128,
    pub bob: u128,
}

impl Hex {
    pub fn new(size: usize) -> Result<Self, GameError> {
        if !(2..=MAX_HEX_SIZE).contains(&size) {
            return Err(GameError::UnknownGame(format!(
                "hex:{size} (supported sizes are 2..={MAX_HEX_SIZE})"
            )));
        }
        let mut first_col = 0u128;
        let mut last_col = 0u128;
        for r in 0..size {
            first_col |= 1 << (r * size);
            last_col |= 1 << (r * size + size - 1);
        }
        let first_row = (1u128 << size) - 1;
        let last_row = first_row << (size * (size - 1));
        let board = if size * size == 128 {
            u128::MAX
        } else {
            (1u128 << (size * size)) - 1
        };
        Ok(Hex {
            size,
            board,
            first_col,
            last_col,
            first_row,
            last_row,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn cells(&self) -> usize {
        self.size * self.size
    }

    pub fn board_mask(&self) -> u128 {
        self.board
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.size + col
    }

    pub fn cell_label(&self, index: usize) -> String {
        cell_label(index / self.size, index % self.size)
    }

    pub fn empty(&self, pos: &HexPosition) -> u128 {
        self.board & !(pos.alice | pos.bob)
    }

    fn neighbors(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.size as isize;
        let (r, c) = ((index / self.size) as isize, (index % self.size) as isize);
        [(0, -1), (0, 1), (-1, 0), (1, 0), (-1, 1), (1, -1)]
            .into_iter()
            .map(move |(dr, dc)| (r + dr, c + dc))
            .filter(move |&(r, c)| r >= 0 && r < n && c >= 0 && c < n)
            .map(move |(r, c)| (r * n + c) as usize)
    }

    /// Winner by union-find over same-coloured neighbours plus four virtual
    /// edge nodes.
    pub fn winner_union_find(&self, pos: &HexPosition) -> Option<Player> {
        let cells = self.cells();
        let (left, right, top, bottom) = (cells, cells + 1, cells + 2, cells + 3);
        let mut uf = UnionFind::new(cells + 4);
        for i in 0..cells {
            let bit = 1u128 << i;
            let alice = pos.alice & bit != 0;
            if !alice && pos.bob & bit == 0 {
                continue;
            }
            let (own, a, b) = if alice {
                (pos.alice, left, right)
            } else {
                (pos.bob, top, bottom)
            };
            let (r, c) = (i / self.size, i % self.size);
            let (touches_a, touches_b) = if alice {
                (c == 0, c == self.size - 1)
            } else {
                (r == 0, r == self.size - 1)
            };
            if touches_a {
                uf.union(i, a);
            }
            if touches_b {
                uf.union(i, b);
            }
            for j in self.neighbors(i) {
                if own & (1 << j) != 0 {
                    uf.union(i, j);
                }
            }
        }
        if uf.connected(left, right) {
            Some(Player::Alice)
        } else if uf.connected(top, bottom) {
            Some(Player::Bob)
        } else {
            None
        }
    }

    fn spread(&self, x: u128) -> u128 {
        let n = self.size;
        let not_first = !self.first_col;
        let not_last = !self.last_col;
        let east = (x & not_last) << 1;
        let west = (x & not_first) >> 1;
        let south = x << n;
        let north = x >> n;
        let north_east = (x & not_last) >> (n - 1);
        let south_west = (x & not_first) << (n - 1);
        (x | east | west | south | north | north_east | south_west) & self.board
    }

    /// Cells of `stones` connected to the player's starting edge.
    pub fn flood(&self, stones: u128, player: Player) -> u128 {
        let start = match player {
            Player::Alice => self.first_col,
            Player::Bob => self.first_row,
        };
        self.flood_from(stones, stones & start)
    }

    /// Cells of `stones` connected to the player's far edge.
    pub fn flood_back(&self, stones: u128, player: Player) -> u128 {
        let goal = match player {
            Player::Alice => self.last_col,
            Player::Bob => self.last_row,
        };
        self.flood_from(stones, stones & goal)
    }

    fn flood_from(&self, stones: u128, seeds: u128) -> u128 {
        let mut reached = seeds;
        loop {
            let next = self.spread(reached) & stones;
            if next == reached {
                return reached;
            }
            reached = next;
        }
    }

    /// Whether `stones` join the player's two edges (bitboard flood fill).
    pub fn connects(&self, stones: u128, player: Player) -> bool {
        let goal = match player {
            Player::Alice => self.last_col,
            Player::Bob => self.last_row,
        };
        self.flood(stones, player) & goal != 0
    }
}

impl Game for Hex {
    type Position = HexPosition;

    fn id(&self) -> String {
        format!("hex:{}", self.size)
    }

    fn initial(&self) -> HexPosition {
        HexPosition::default()
    }

    fn outcome(&self, pos: &HexPosition) -> Outcome {
        match self.winner_union_find(pos) {
            Some(p) => p.wins(),
            None => Outcome::Ongoing,
        }
    }

    fn legal_moves(&self, pos: &HexPosition, player: Player) -> Vec<Move<HexPosition>> {
        if self.outcome(pos).is_terminal() {
            return Vec::new();
        }
        let empty = self.empty(pos);
        (0..self.cells())
            .filter(|i| empty & (1 << i) != 0)
            .map(|i| {
                let mut to = *pos;
                match player {
                    Player::Alice => to.alice |= 1 << i,
                    Player::Bob => to.bob |= 1 << i,
                }
                Move {
                    label: self.cell_label(i),
                    to,
                }
            })
            .collect()
    }

    fn successors(&self, pos: &HexPosition, player: Player) -> Vec<HexPosition> {
        if self.outcome(pos).is_terminal() {
            return Vec::new();
        }
        let empty = self.empty(pos);
        (0..self.cells())
            .filter(|i| empty & (1 << i) != 0)
            .map(|i| {
                let mut to = *pos;
                match player {
                    Player::Alice => to.alice |= 1 << i,
                    Player::Bob => to.bob |= 1 << i,
                }
                to
            })
            .collect()
    }

    fn encode(&self, pos: &HexPosition) -> String {
        let cells: String = (0..self.cells())
            .map(|i| {
                if pos.alice & (1 << i) != 0 {
                    'x'
                } else if pos.bob & (1 << i) != 0 {
                    'o'
                } else {
                    '.'
                }
            })
            .collect();
        format!("hex{}:{cells}", self.size)
    }

    fn decode(&self, s: &str) -> Result<HexPosition, GameError> {
        let bad = || GameError::Encoding(s.to_string());
        let cells = s
            .strip_prefix(&format!("hex{}:", self.size))
            .ok_or_else(bad)?;
        if cells.len() != self.cells() {
            return Err(bad());
        }
        let mut pos = HexPosition::default();
        for (i, b) in cells.bytes().enumerate() {
            match b {
                b'x' => pos.alice |= 1 << i,
                b'o' => pos.bob |= 1 << i,
                b'.' => {}
                _ => return Err(bad()),
            }
        }
        Ok(pos)
    }
}
