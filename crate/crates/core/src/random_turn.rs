//! Random-turn play: a fair coin picks the mover each turn.
//!
//! `P(v)` is Alice's win probability under optimal play. This module computes
//! it on its own traversal, without the Richman solver's ordering or memo, so
//! that [`verify_richman_theorem`] compares two independent computations.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;

use crate::game::{Game, GameError, Outcome, Player};
use crate::richman::{solve_richman, SolveError};
use crate::value::{self, Ratio};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilityEntry {
    pub p: Ratio,
    /// Alice's moves maximizing `P`.
    pub alice_best: Vec<String>,
    /// Bob's moves minimizing `P`.
    pub bob_best: Vec<String>,
    pub terminal: bool,
}

#[derive(Clone, Debug)]
pub struct ProbabilityTable<P> {
    entries: HashMap<P, ProbabilityEntry>,
    draw_weight: Ratio,
}

impl<P: Clone + Eq + std::hash::Hash> ProbabilityTable<P> {
    pub fn get(&self, pos: &P) -> Option<&ProbabilityEntry> {
        self.entries.get(pos)
    }

    pub fn probability(&self, pos: &P) -> Option<&Ratio> {
        self.entries.get(pos).map(|e| &e.p)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn draw_weight(&self) -> &Ratio {
        &self.draw_weight
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P, &ProbabilityEntry)> {
        self.entries.iter()
    }

    /// One `prob <position> <P>` line per position, sorted by encoding.
    pub fn export<G: Game<Position = P>>(&self, game: &G) -> String {
        let mut lines: Vec<String> = self
            .entries
            .iter()
            .map(|(pos, e)| format!("prob {} {}\n", game.encode(pos), value::format_ratio(&e.p)))
            .collect();
        lines.sort();
        lines.concat()
    }
}

/// Solves random-turn play from the initial position. Draws score
/// `draw_weight` of a win for Alice.
pub fn solve_random_turn<G: Game>(
    game: &G,
    draw_weight: &Ratio,
) -> Result<ProbabilityTable<G::Position>, SolveError> {
    if !value::in_unit_interval(draw_weight) {
        return Err(SolveError::DrawValueOutOfRange(value::format_ratio(draw_weight)));
    }
    let mut entries: HashMap<G::Position, ProbabilityEntry> = HashMap::new();
    let mut on_path: HashMap<G::Position, ()> = HashMap::new();
    // Frames are revisited until all children are solved.
    let mut stack = vec![game.initial()];

    while let Some(pos) = stack.last().cloned() {
        if entries.contains_key(&pos) {
            stack.pop();
            on_path.remove(&pos);
            continue;
        }
        let outcome = game.outcome(&pos);
        if outcome.is_terminal() {
            let p = match outcome {
                Outcome::AliceWins => value::one(),
                Outcome::BobWins => value::zero(),
                _ => draw_weight.clone(),
            };
            entries.insert(
                pos.clone(),
                ProbabilityEntry {
                    p,
                    alice_best: Vec::new(),
                    bob_best: Vec::new(),
                    terminal: true,
                },
            );
            stack.pop();
            continue;
        }
        on_path.insert(pos.clone(), ());
        let alice = game.legal_moves(&pos, Player::Alice);
        let bob = game.legal_moves(&pos, Player::Bob);
        let mut pending = false;
        for m in alice.iter().chain(&bob) {
            if !entries.contains_key(&m.to) {
                if on_path.contains_key(&m.to) {
                    return Err(GameError::Cycle(game.encode(&m.to)).into());
                }
                stack.push(m.to.clone());
                pending = true;
            }
        }
        if pending {
            continue;
        }

        let p_of = |q: &G::Position| &entries[q].p;
        let alice_side = alice.iter().map(|m| p_of(&m.to)).max().cloned().unwrap_or_else(value::zero);
        let bob_side = bob.iter().map(|m| p_of(&m.to)).min().cloned().unwrap_or_else(value::one);
        let alice_best = alice
            .iter()
            .filter(|m| p_of(&m.to) == &alice_side)
            .map(|m| m.label.clone())
            .collect();
        let bob_best = bob
            .iter()
            .filter(|m| p_of(&m.to) == &bob_side)
            .map(|m| m.label.clone())
            .collect();
        let p = (alice_side + bob_side) / BigInt::from(2);
        entries.insert(
            pos.clone(),
            ProbabilityEntry {
                p,
                alice_best,
                bob_best,
                terminal: false,
            },
        );
        on_path.remove(&pos);
        stack.pop();
    }

    Ok(ProbabilityTable {
        entries,
        draw_weight: draw_weight.clone(),
    })
}

/// Result of comparing `R(v)` against `1 − P(v)` everywhere.
#[derive(Clone, Debug, Default)]
pub struct TheoremReport {
    pub game: String,
    pub positions: usize,
    /// Encodings where `R(v) ≠ 1 − P(v)`, with both values.
    pub value_mismatches: Vec<(String, String, String)>,
    /// Encodings where the optimal move sets differ.
    pub move_mismatches: Vec<String>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.value_mismatches.is_empty() && self.move_mismatches.is_empty()
    }

    /// Summary line, plus every discrepancy when `full` is set.
    pub fn render(&self, full: bool) -> String {
        let mut out = format!(
            "theorem {} positions {} value-mismatches {} move-mismatches {} {}\n",
            self.game,
            self.positions,
            self.value_mismatches.len(),
            self.move_mismatches.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        );
        if full {
            for (pos, r, p) in &self.value_mismatches {
                out.push_str(&format!("mismatch {pos} R={r} P={p}\n"));
            }
            for pos in &self.move_mismatches {
                out.push_str(&format!("moves {pos}\n"));
            }
        }
        out
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.render(false).trim_end())
    }
}

/// Runs both solvers (draws worth `draw_value` to the threshold and
/// `1 − draw_value` to the probability) and checks `R = 1 − P` plus equality
/// of the optimal move sets at every reachable position.
pub fn verify_richman_theorem<G: Game>(game: &G, draw_value: &Ratio) -> Result<TheoremReport, SolveError> {
    let values = solve_richman(game, draw_value)?;
    let probs = solve_random_turn(game, &(value::one() - draw_value))?;
    let mut report = TheoremReport {
        game: game.id(),
        positions: values.len(),
        ..Default::default()
    };
    if probs.len() != values.len() {
        report.value_mismatches.push((
            "<position count>".into(),
            values.len().to_string(),
            probs.len().to_string(),
        ));
    }
    for (pos, r) in values.iter() {
        let Some(p) = probs.get(pos) else {
            report
                .value_mismatches
                .push((game.encode(pos), value::format_ratio(&r.value), "missing".into()));
            continue;
        };
        if r.value != value::one() - &p.p {
            report.value_mismatches.push((
                game.encode(pos),
                value::format_ratio(&r.value),
                value::format_ratio(&p.p),
            ));
        }
        if r.alice_optimal != p.alice_best || r.bob_optimal != p.bob_best {
            report.move_mismatches.push(game.encode(pos));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{DagGame, DagOptions};
    use crate::value::{half, one};

    #[test]
    fn diamond_and_chain() {
        let diamond = DagGame::parse(
            "dag-game v1\nnode root\nnode win alice_wins\nnode loss bob_wins\nedge root alice take win\nedge root bob take loss\n",
            DagOptions::default(),
        )
        .unwrap();
        let t = solve_random_turn(&diamond, &half()).unwrap();
        assert_eq!(t.probability(&diamond.initial()), Some(&half()));
        assert!(verify_richman_theorem(&diamond, &half()).unwrap().passed());

        let chain = DagGame::parse(
            "dag-game v1\nnode v\nnode w alice_wins\nedge v alice go w\nedge v bob go w\n",
            DagOptions::default(),
        )
        .unwrap();
        let t = solve_random_turn(&chain, &half()).unwrap();
        assert_eq!(t.probability(&chain.initial()), Some(&one()));
        assert_eq!(t.export(&chain), "prob dag:v 1/1\nprob dag:w 1/1\n");
    }

    #[test]
    fn cycle_is_refused() {
        // Built through the trait so the DAG loader's own check is bypassed.
        struct Loop;
        impl Game for Loop {
            type Position = u8;
            fn id(&self) -> String {
                "loop".into()
            }
            fn initial(&self) -> u8 {
                0
            }
            fn outcome(&self, _: &u8) -> Outcome {
                Outcome::Ongoing
            }
            fn legal_moves(&self, p: &u8, _: Player) -> Vec<crate::game::Move<u8>> {
                vec![crate::game::Move { label: "next".into(), to: (p + 1) % 2 }]
            }
            fn encode(&self, p: &u8) -> String {
                p.to_string()
            }
            fn decode(&self, s: &str) -> Result<u8, GameError> {
                s.parse().map_err(|_| GameError::Encoding(s.into()))
            }
        }
        assert!(matches!(
            solve_random_turn(&Loop, &half()),
            Err(SolveError::Game(GameError::Cycle(_)))
        ));
        assert!(matches!(
            solve_richman(&Loop, &half()),
            Err(SolveError::Game(GameError::Cycle(_)))
        ));
    }

    #[test]
    fn report_rendering() {
        let mut r = TheoremReport {
            game: "g".into(),
            positions: 3,
            ..Default::default()
        };
        assert!(r.render(false).ends_with("PASS\n"));
        r.move_mismatches.push("dag:x".into());
        let text = r.render(true);
        assert!(text.contains("FAIL"));
        assert!(text.contains("moves dag:x"));
    }
}
