use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Agent, AgentAction, AgentError, SeatView};
use crate::discrete::{Bid, ChipState};
use crate::game::{Game, Player};

/// Baseline: uniform legal move, uniform bid in `[0, pile]`, `*` attached
/// half the time when held.
pub struct RandomAgent {
    rng: ChaCha8Rng,
}

impl RandomAgent {
    pub fn new(seed: u64) -> Self {
        RandomAgent {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

pub fn random_agent_act<G: Game, R: Rng>(
    game: &G,
    position: &G::Position,
    chips: ChipState,
    player: Player,
    rng: &mut R,
) -> Result<AgentAction, AgentError> {
    if game.outcome(position).is_terminal() {
        return Err(AgentError::Terminal);
    }
    let moves = game.legal_moves(position, player);
    let move_if_win = (!moves.is_empty()).then(|| moves[rng.gen_range(0..moves.len())].label.clone());
    let amount = rng.gen_range(0..=chips.chips(player));
    let star = chips.star == player && rng.gen_bool(0.5);
    Ok(AgentAction {
        bid: Bid::new(amount, star),
        move_if_win,
    })
}

impl<G: Game> Agent<G> for RandomAgent {
    fn name(&self) -> String {
        "random".into()
    }

    fn act(&mut self, view: &SeatView<'_, G>) -> Result<AgentAction, AgentError> {
        random_agent_act(view.game, view.position, view.chips, view.player, &mut self.rng)
    }
}
