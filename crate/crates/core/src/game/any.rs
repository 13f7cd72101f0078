use std::path::Path;
use std::sync::Arc;

use super::{DagGame, DagOptions, Game, GameError, Hex, HexPosition, Move, NodeId, Outcome, Player};
use super::{TicTacToe, TttPosition};

/// Any shipped game, selected at runtime by a spec string:
/// `ttt`, `hex:<n>` or `dag:<path>`.
#[derive(Clone, Debug)]
pub enum AnyGame {
    TicTacToe(TicTacToe),
    Hex(Hex),
    Dag(Arc<DagGame>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnyPosition {
    Ttt(TttPosition),
    Hex(HexPosition),
    Node(NodeId),
}

impl AnyGame {
    pub fn from_spec(spec: &str, options: DagOptions) -> Result<Self, GameError> {
        if spec == "ttt" {
            return Ok(AnyGame::TicTacToe(TicTacToe));
        }
        if let Some(n) = spec.strip_prefix("hex:") {
            let n: usize = n
                .parse()
                .map_err(|_| GameError::UnknownGame(spec.to_string()))?;
            return Ok(AnyGame::Hex(Hex::new(n)?));
        }
        if let Some(path) = spec.strip_prefix("dag:") {
            return Ok(AnyGame::Dag(Arc::new(DagGame::load(Path::new(path), options)?)));
        }
        Err(GameError::UnknownGame(spec.to_string()))
    }

    pub fn hex(&self) -> Option<&Hex> {
        match self {
            AnyGame::Hex(h) => Some(h),
            _ => None,
        }
    }
}

impl From<TicTacToe> for AnyGame {
    fn from(g: TicTacToe) -> Self {
        AnyGame::TicTacToe(g)
    }
}

impl From<Hex> for AnyGame {
    fn from(g: Hex) -> Self {
        AnyGame::Hex(g)
    }
}

impl From<DagGame> for AnyGame {
    fn from(g: DagGame) -> Self {
        AnyGame::Dag(Arc::new(g))
    }
}

fn wrap<P>(moves: Vec<Move<P>>, f: impl Fn(P) -> AnyPosition) -> Vec<Move<AnyPosition>> {
    moves
        .into_iter()
        .map(|m| Move {
            label: m.label,
            to: f(m.to),
        })
        .collect()
}

macro_rules! dispatch {
    ($self:expr, $pos:expr, $g:ident, $p:ident => $body:expr, $fallback:expr) => {
        match ($self, $pos) {
            (AnyGame::TicTacToe($g), AnyPosition::Ttt($p)) => $body,
            (AnyGame::Hex($g), AnyPosition::Hex($p)) => $body,
            (AnyGame::Dag($g), AnyPosition::Node($p)) => $body,
            _ => $fallback,
        }
    };
}

impl Game for AnyGame {
    type Position = AnyPosition;

    fn id(&self) -> String {
        match self {
            AnyGame::TicTacToe(g) => g.id(),
            AnyGame::Hex(g) => g.id(),
            AnyGame::Dag(g) => g.id(),
        }
    }

    fn initial(&self) -> AnyPosition {
        match self {
            AnyGame::TicTacToe(g) => AnyPosition::Ttt(g.initial()),
            AnyGame::Hex(g) => AnyPosition::Hex(g.initial()),
            AnyGame::Dag(g) => AnyPosition::Node(g.initial()),
        }
    }

    fn outcome(&self, pos: &AnyPosition) -> Outcome {
        dispatch!(self, pos, g, p => g.outcome(p), panic!("position from a different game"))
    }

    fn legal_moves(&self, pos: &AnyPosition, player: Player) -> Vec<Move<AnyPosition>> {
        match (self, pos) {
            (AnyGame::TicTacToe(g), AnyPosition::Ttt(p)) => wrap(g.legal_moves(p, player), AnyPosition::Ttt),
            (AnyGame::Hex(g), AnyPosition::Hex(p)) => wrap(g.legal_moves(p, player), AnyPosition::Hex),
            (AnyGame::Dag(g), AnyPosition::Node(p)) => wrap(g.legal_moves(p, player), AnyPosition::Node),
            _ => Vec::new(),
        }
    }

    fn successors(&self, pos: &AnyPosition, player: Player) -> Vec<AnyPosition> {
        match (self, pos) {
            (AnyGame::TicTacToe(g), AnyPosition::Ttt(p)) => {
                g.successors(p, player).into_iter().map(AnyPosition::Ttt).collect()
            }
            (AnyGame::Hex(g), AnyPosition::Hex(p)) => {
                g.successors(p, player).into_iter().map(AnyPosition::Hex).collect()
            }
            (AnyGame::Dag(g), AnyPosition::Node(p)) => {
                g.successors(p, player).into_iter().map(AnyPosition::Node).collect()
            }
            _ => Vec::new(),
        }
    }

    fn encode(&self, pos: &AnyPosition) -> String {
        dispatch!(self, pos, g, p => g.encode(p), format!("{pos:?}"))
    }

    fn decode(&self, s: &str) -> Result<AnyPosition, GameError> {
        match self {
            AnyGame::TicTacToe(g) => g.decode(s).map(AnyPosition::Ttt),
            AnyGame::Hex(g) => g.decode(s).map(AnyPosition::Hex),
            AnyGame::Dag(g) => g.decode(s).map(AnyPosition::Node),
        }
    }
}
