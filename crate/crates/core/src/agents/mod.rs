//! Bot players.
//!
//! Every agent sees only public state and commits one [`AgentAction`] per
//! round: a sealed bid plus the move it will make if the bid wins.

mod catalog;
mod discrete_agent;
mod mc_hex;
mod random;
mod richman_agent;

use thiserror::Error;

use crate::discrete::{Bid, ChipState};
use crate::game::{Game, Player};
use crate::richman::SolveError;
use crate::value::Ratio;

pub use catalog::{build_agent, draw_value_for, AgentSpec, SolvedTables, EXACT_POSITION_LIMIT};
pub use discrete_agent::DiscreteAgent;
pub use mc_hex::{estimate_pivotal, mc_hex_agent_act, McHexAgent, PivotalEstimate};
pub use random::{random_agent_act, RandomAgent};
pub use richman_agent::{richman_agent_act, RichmanAgent};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgentAction {
    pub bid: Bid,
    /// `None` only when the agent has no legal move.
    pub move_if_win: Option<String>,
}

/// What a seat may see when deciding.
pub struct SeatView<'a, G: Game> {
    pub game: &'a G,
    pub player: Player,
    pub position: &'a G::Position,
    pub chips: ChipState,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AgentError {
    #[error("position is terminal")]
    Terminal,
    #[error("agent `{0}` only plays Hex")]
    NotHex(String),
    #[error("sample count must be positive")]
    ZeroSamples,
    #[error("unknown agent `{0}`")]
    Unknown(String),
    #[error("script exhausted after {0} rounds")]
    ScriptExhausted(usize),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

pub trait Agent<G: Game> {
    fn name(&self) -> String;

    fn act(&mut self, view: &SeatView<'_, G>) -> Result<AgentAction, AgentError>;
}

impl<G: Game, A: Agent<G> + ?Sized> Agent<G> for Box<A> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn act(&mut self, view: &SeatView<'_, G>) -> Result<AgentAction, AgentError> {
        (**self).act(view)
    }
}

fn clamp_bid(amount: u64, rounded_down: bool, pile: u64, holds_star: bool) -> Bid {
    if amount > pile {
        Bid::new(pile, holds_star)
    } else {
        Bid::new(amount, holds_star && rounded_down)
    }
}

/// Rounds `fraction · total` to the nearest chip (halves up), attaching `*`
/// when held and the rounding (or the pile clamp) fell short of the exact
/// amount.
pub fn round_bid(fraction: &Ratio, total: u64, pile: u64, holds_star: bool) -> Bid {
    let exact = fraction * Ratio::from_integer(total.into());
    let half = crate::value::half();
    let amount = (&exact + &half).floor();
    let rounded_down = amount < exact;
    let amount: u64 = amount.to_integer().try_into().unwrap_or(0);
    clamp_bid(amount, rounded_down, pile, holds_star)
}

/// Floating-point variant of [`round_bid`] for estimated fractions.
pub fn round_bid_f64(fraction: f64, total: u64, pile: u64, holds_star: bool) -> Bid {
    let exact = fraction.clamp(0.0, 1.0) * total as f64;
    let amount = (exact + 0.5).floor();
    clamp_bid(amount as u64, amount < exact, pile, holds_star)
}
