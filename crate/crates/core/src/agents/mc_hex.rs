//! Monte Carlo Hex agent.
//!
//! Each sample fills every empty cell independently and uniformly. A cell is
//! pivotal in a sample when flipping its owner flips the winner. The most
//! pivotal cell is the move; its pivotal probability estimates the value
//! spread `R⁺ − R⁻`, so half of it (times the chips in play) is the bid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{round_bid_f64, Agent, AgentAction, AgentError, SeatView};
use crate::discrete::ChipState;
use crate::game::{AnyGame, AnyPosition, Game, Hex, HexPosition, Player};

#[derive(Clone, Debug, PartialEq)]
pub struct PivotalEstimate {
    /// Per cell (row-major); 0 for occupied cells.
    pub pivotal: Vec<f64>,
    pub samples: u32,
    /// Fraction of completions Alice wins.
    pub win_estimate: f64,
}

impl PivotalEstimate {
    /// Most pivotal empty cell, ties to the lowest index.
    pub fn best_cell(&self, empty: u128) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, &p) in self.pivotal.iter().enumerate() {
            if empty & (1 << i) == 0 {
                continue;
            }
            if best.is_none_or(|b| p > self.pivotal[b]) {
                best = Some(i);
            }
        }
        best
    }
}

pub fn estimate_pivotal<R: Rng>(
    hex: &Hex,
    pos: &HexPosition,
    samples: u32,
    rng: &mut R,
) -> Result<PivotalEstimate, AgentError> {
    if samples == 0 {
        return Err(AgentError::ZeroSamples);
    }
    if hex.outcome(pos).is_terminal() {
        return Err(AgentError::Terminal);
    }
    let empty = hex.empty(pos);
    let mut counts = vec![0u32; hex.cells()];
    let mut alice_wins = 0u32;
    for _ in 0..samples {
        let fill = rng.gen::<u128>() & empty;
        let alice = pos.alice | fill;
        let bob = pos.bob | (empty & !fill);
        let (winner, stones) = if hex.connects(alice, Player::Alice) {
            alice_wins += 1;
            (Player::Alice, alice)
        } else {
            (Player::Bob, bob)
        };
        // Only empty cells on a winning chain can matter.
        let mut candidates = hex.flood(stones, winner) & hex.flood_back(stones, winner) & empty;
        while candidates != 0 {
            let i = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            if !hex.connects(stones & !(1 << i), winner) {
                counts[i] += 1;
            }
        }
    }
    let n = samples as f64;
    Ok(PivotalEstimate {
        pivotal: counts.iter().map(|&c| c as f64 / n).collect(),
        samples,
        win_estimate: alice_wins as f64 / n,
    })
}

/// One decision: most pivotal cell, bid `round(total · pivotal / 2)`.
pub fn mc_hex_agent_act(
    hex: &Hex,
    pos: &HexPosition,
    chips: ChipState,
    player: Player,
    samples: u32,
    rng_seed: u64,
) -> Result<AgentAction, AgentError> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    act_with(hex, pos, chips, player, samples, &mut rng).map(|(a, _)| a)
}

fn act_with<R: Rng>(
    hex: &Hex,
    pos: &HexPosition,
    chips: ChipState,
    player: Player,
    samples: u32,
    rng: &mut R,
) -> Result<(AgentAction, PivotalEstimate), AgentError> {
    let est = estimate_pivotal(hex, pos, samples, rng)?;
    let cell = est.best_cell(hex.empty(pos)).ok_or(AgentError::Terminal)?;
    let spread = est.pivotal[cell];
    let bid = round_bid_f64(spread / 2.0, chips.total(), chips.chips(player), chips.star == player);
    Ok((
        AgentAction {
            bid,
            move_if_win: Some(hex.cell_label(cell)),
        },
        est,
    ))
}

pub struct McHexAgent {
    samples: u32,
    rng: ChaCha8Rng,
}

impl McHexAgent {
    pub fn new(samples: u32, seed: u64) -> Self {
        McHexAgent {
            samples,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Agent<Hex> for McHexAgent {
    fn name(&self) -> String {
        format!("mc-hex:{}", self.samples)
    }

    fn act(&mut self, view: &SeatView<'_, Hex>) -> Result<AgentAction, AgentError> {
        act_with(view.game, view.position, view.chips, view.player, self.samples, &mut self.rng).map(|(a, _)| a)
    }
}

impl Agent<AnyGame> for McHexAgent {
    fn name(&self) -> String {
        format!("mc-hex:{}", self.samples)
    }

    fn act(&mut self, view: &SeatView<'_, AnyGame>) -> Result<AgentAction, AgentError> {
        match (view.game, view.position) {
            (AnyGame::Hex(hex), AnyPosition::Hex(pos)) => {
                act_with(hex, pos, view.chips, view.player, self.samples, &mut self.rng).map(|(a, _)| a)
            }
            _ => Err(AgentError::NotHex(view.game.id())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_the_completing_cell() {
        // Alice holds a2 and c2 on 3x3; b2 is the only way through because
        // Bob holds b1 and b3... leaving b2 pivotal in every sample.
        let hex = Hex::new(3).unwrap();
        let pos = hex.decode("hex3:.o.x.x.o.").unwrap();
        let chips = ChipState::new(50, 50, Player::Alice);
        let a = mc_hex_agent_act(&hex, &pos, chips, Player::Alice, 2000, 3).unwrap();
        assert_eq!(a.move_if_win.as_deref(), Some("b2"));
        let est = estimate_pivotal(&hex, &pos, 2000, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b2 = hex.index(1, 1);
        assert!(est.pivotal[b2] > 0.99, "{}", est.pivotal[b2]);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let hex = Hex::new(5).unwrap();
        let pos = hex.initial();
        let chips = ChipState::new(100, 100, Player::Bob);
        let a = mc_hex_agent_act(&hex, &pos, chips, Player::Bob, 500, 9).unwrap();
        let b = mc_hex_agent_act(&hex, &pos, chips, Player::Bob, 500, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors() {
        let hex = Hex::new(2).unwrap();
        let chips = ChipState::new(1, 1, Player::Bob);
        assert_eq!(
            mc_hex_agent_act(&hex, &hex.initial(), chips, Player::Bob, 0, 1),
            Err(AgentError::ZeroSamples)
        );
        let done = hex.decode("hex2:xx..").unwrap();
        assert_eq!(
            mc_hex_agent_act(&hex, &done, chips, Player::Bob, 10, 1),
            Err(AgentError::Terminal)
        );
    }
}
