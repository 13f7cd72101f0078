use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use super::{Agent, AgentError, DiscreteAgent, McHexAgent, RandomAgent, RichmanAgent};
use crate::discrete::{solve_discrete_limited, DiscreteTable, DrawPolicy};
use crate::game::{AnyGame, AnyPosition, Game};
use crate::richman::{solve_richman_limited, ValueTable};
use crate::value::{self, Ratio};

/// Exact agents refuse games with more reachable positions than this.
pub const EXACT_POSITION_LIMIT: usize = 250_000;

/// Agent identifier: `richman`, `discrete`, `mc-hex:<samples>` or `random`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AgentSpec {
    Richman,
    Discrete,
    McHex { samples: u32 },
    Random,
}

impl FromStr for AgentSpec {
    type Err = AgentError;

    fn from_str(s: &str) -> Result<Self, AgentError> {
        match s {
            "richman" => Ok(AgentSpec::Richman),
            "discrete" => Ok(AgentSpec::Discrete),
            "random" => Ok(AgentSpec::Random),
            _ => {
                let samples = s
                    .strip_prefix("mc-hex:")
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(|| AgentError::Unknown(s.to_string()))?;
                if samples == 0 {
                    return Err(AgentError::ZeroSamples);
                }
                Ok(AgentSpec::McHex { samples })
            }
        }
    }
}

impl fmt::Display for AgentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentSpec::Richman => f.write_str("richman"),
            AgentSpec::Discrete => f.write_str("discrete"),
            AgentSpec::McHex { samples } => write!(f, "mc-hex:{samples}"),
            AgentSpec::Random => f.write_str("random"),
        }
    }
}

/// The continuous draw value matching a discrete draw policy.
pub fn draw_value_for(policy: DrawPolicy) -> Ratio {
    match policy {
        DrawPolicy::BobWins => value::one(),
        DrawPolicy::AliceWins => value::zero(),
    }
}

type DiscreteKey = (String, u64, DrawPolicy);

/// Shared cache of solved tables, keyed by game id.
#[derive(Default)]
pub struct SolvedTables {
    values: Mutex<HashMap<(String, String), Arc<ValueTable<AnyPosition>>>>,
    discrete: Mutex<HashMap<DiscreteKey, Arc<DiscreteTable<AnyPosition>>>>,
}

impl SolvedTables {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn values(&self, game: &AnyGame, draw_value: &Ratio) -> Result<Arc<ValueTable<AnyPosition>>, AgentError> {
        let key = (game.id(), value::format_ratio(draw_value));
        if let Some(t) = self.values.lock().expect("cache lock").get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(solve_richman_limited(game, draw_value, EXACT_POSITION_LIMIT)?);
        self.values.lock().expect("cache lock").insert(key, t.clone());
        Ok(t)
    }

    pub fn discrete(
        &self,
        game: &AnyGame,
        total: u64,
        policy: DrawPolicy,
    ) -> Result<Arc<DiscreteTable<AnyPosition>>, AgentError> {
        let key = (game.id(), total, policy);
        if let Some(t) = self.discrete.lock().expect("cache lock").get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(solve_discrete_limited(game, total, policy, EXACT_POSITION_LIMIT)?);
        self.discrete.lock().expect("cache lock").insert(key, t.clone());
        Ok(t)
    }
}

/// Builds an agent for `game` with `total` chips in play.
pub fn build_agent(
    spec: AgentSpec,
    game: &AnyGame,
    total: u64,
    policy: DrawPolicy,
    seed: u64,
    tables: &SolvedTables,
) -> Result<Box<dyn Agent<AnyGame> + Send>, AgentError> {
    Ok(match spec {
        AgentSpec::Richman => Box::new(RichmanAgent::new(tables.values(game, &draw_value_for(policy))?)),
        AgentSpec::Discrete => {
            let values = tables.values(game, &draw_value_for(policy))?;
            Box::new(DiscreteAgent::new(tables.discrete(game, total, policy)?, Some(values)))
        }
        AgentSpec::McHex { samples } => {
            if game.hex().is_none() {
                return Err(AgentError::NotHex(game.id()));
            }
            Box::new(McHexAgent::new(samples, seed))
        }
        AgentSpec::Random => Box::new(RandomAgent::new(seed)),
    })
}
