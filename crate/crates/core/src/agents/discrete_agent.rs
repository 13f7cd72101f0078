use std::sync::Arc;

use super::{Agent, AgentAction, AgentError, SeatView};
use crate::discrete::{discrete_optimal_actions, DiscreteState, DiscreteTable};
use crate::game::Game;
use crate::richman::ValueTable;

/// Plays the certified safe bid from an exact discrete table. When losing it
/// bids nothing and falls back to continuous-optimal moves.
pub struct DiscreteAgent<P> {
    table: Arc<DiscreteTable<P>>,
    values: Option<Arc<ValueTable<P>>>,
}

impl<P> DiscreteAgent<P> {
    pub fn new(table: Arc<DiscreteTable<P>>, values: Option<Arc<ValueTable<P>>>) -> Self {
        DiscreteAgent { table, values }
    }
}

impl<G: Game> Agent<G> for DiscreteAgent<G::Position> {
    fn name(&self) -> String {
        "discrete".into()
    }

    fn act(&mut self, view: &SeatView<'_, G>) -> Result<AgentAction, AgentError> {
        if view.game.outcome(view.position).is_terminal() {
            return Err(AgentError::Terminal);
        }
        let state = DiscreteState {
            position: view.position.clone(),
            chips: view.chips,
        };
        let advice = discrete_optimal_actions(
            view.game,
            &self.table,
            self.values.as_deref(),
            &state,
            view.player,
        )?;
        Ok(AgentAction {
            bid: advice.bid,
            move_if_win: advice.move_if_win,
        })
    }
}
