use std::hash::Hash;
use std::sync::Arc;

use super::{round_bid, Agent, AgentAction, AgentError, SeatView};
use crate::discrete::ChipState;
use crate::game::{Game, Player};
use crate::richman::{optimal_bid, SolveError, ValueTable};

/// Plays the continuous-optimal move and bids the optimal fraction of all
/// chips, rounded to a whole chip.
#[derive(Clone, Debug)]
pub struct RichmanAgent<P> {
    table: Arc<ValueTable<P>>,
}

impl<P> RichmanAgent<P> {
    pub fn new(table: Arc<ValueTable<P>>) -> Self {
        RichmanAgent { table }
    }
}

pub fn richman_agent_act<P: Clone + Eq + Hash + std::fmt::Debug>(
    table: &ValueTable<P>,
    position: &P,
    chips: ChipState,
    player: Player,
) -> Result<AgentAction, AgentError> {
    let entry = table
        .get(position)
        .ok_or_else(|| SolveError::Missing(format!("{position:?}")))?;
    if entry.terminal {
        return Err(AgentError::Terminal);
    }
    let fraction = optimal_bid(table, position)?;
    let bid = round_bid(&fraction, chips.total(), chips.chips(player), chips.star == player);
    let moves = match player {
        Player::Alice => &entry.alice_optimal,
        Player::Bob => &entry.bob_optimal,
    };
    Ok(AgentAction {
        bid,
        move_if_win: moves.first().cloned(),
    })
}

impl<G: Game> Agent<G> for RichmanAgent<G::Position> {
    fn name(&self) -> String {
        "richman".into()
    }

    fn act(&mut self, view: &SeatView<'_, G>) -> Result<AgentAction, AgentError> {
        richman_agent_act(&self.table, view.position, view.chips, view.player)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete::Bid;
    use crate::game::{DagGame, DagOptions};
    use crate::richman::solve_richman;
    use crate::value::half;

    #[test]
    fn diamond_root_bids_half_the_pool() {
        let g = DagGame::parse(
            "dag-game v1\nnode root\nnode win alice_wins\nnode loss bob_wins\nedge root alice take win\nedge root bob take loss\n",
            DagOptions::default(),
        )
        .unwrap();
        let t = solve_richman(&g, &half()).unwrap();
        let a = richman_agent_act(&t, &g.initial(), ChipState::new(50, 50, Player::Alice), Player::Alice).unwrap();
        assert_eq!(a.bid, Bid::new(50, false));
        assert_eq!(a.move_if_win.as_deref(), Some("take"));
        // Bob holds only 30 of the 100 chips: clamped.
        let b = richman_agent_act(&t, &g.initial(), ChipState::new(70, 30, Player::Alice), Player::Bob).unwrap();
        assert_eq!(b.bid, Bid::new(30, false));
        assert!(matches!(
            richman_agent_act(&t, &g.node("win").unwrap(), ChipState::new(1, 1, Player::Bob), Player::Bob),
            Err(AgentError::Terminal)
        ));
    }

    #[test]
    fn indifferent_position_bids_zero() {
        let g = DagGame::parse(
            "dag-game v1\nnode v\nnode w alice_wins\nedge v alice go w\nedge v bob go w\n",
            DagOptions::default(),
        )
        .unwrap();
        let t = solve_richman(&g, &half()).unwrap();
        let a = richman_agent_act(&t, &g.initial(), ChipState::new(3, 5, Player::Bob), Player::Bob).unwrap();
        assert_eq!(a.bid, Bid::new(0, false));
        assert_eq!(a.move_if_win.as_deref(), Some("go"));
    }
}
