//! Match transcripts: the single record of a match.
//!
//! ```text
//! bidding-transcript v1
//! game ttt
//! chips 100*/100
//! draw-policy draw_is_bob_win
//! seat A human
//! seat B richman
//! seed 7
//! round 1 bidA 12 bidB 13 mover B chips 113*/87 move b2
//! end bob_wins terminal
//! ```
//!
//! Positions are not stored; they are re-derived by replaying the moves,
//! which is also how [`verify_transcript`] checks a transcript.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::discrete::{resolve_bids, Bid, ChipState, DrawPolicy};
use crate::game::{Game, Outcome, Player};

const HEADER: &str = "bidding-transcript v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchConfig {
    /// Game spec: `ttt`, `hex:<n>` or `dag:<path>`.
    pub game: String,
    pub alice_chips: u64,
    pub bob_chips: u64,
    pub star: Player,
    pub draw_policy: DrawPolicy,
    /// `human`, `script`, or an agent spec.
    pub alice_seat: String,
    pub bob_seat: String,
    pub seed: u64,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            game: "ttt".into(),
            alice_chips: 100,
            bob_chips: 100,
            star: Player::Alice,
            draw_policy: DrawPolicy::BobWins,
            alice_seat: "human".into(),
            bob_seat: "human".into(),
            seed: 0,
        }
    }
}

impl MatchConfig {
    pub fn initial_chips(&self) -> ChipState {
        ChipState::new(self.alice_chips, self.bob_chips, self.star)
    }

    pub fn seat(&self, p: Player) -> &str {
        match p {
            Player::Alice => &self.alice_seat,
            Player::Bob => &self.bob_seat,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub number: usize,
    pub alice_bid: Bid,
    pub bob_bid: Bid,
    pub mover: Player,
    pub chips: ChipState,
    /// `None` when the mover had no legal move.
    pub move_label: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndReason {
    Terminal,
    /// The player won a bid with no legal move.
    Stuck(Player),
    /// Illegal action or timeout by the player.
    Forfeit(Player),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchEnd {
    pub outcome: Outcome,
    pub reason: EndReason,
}

impl MatchEnd {
    pub fn loss_for(p: Player, reason: EndReason) -> Self {
        MatchEnd {
            outcome: p.opponent().wins(),
            reason,
        }
    }

    /// Winner after applying the draw policy to drawn games.
    pub fn winner(&self, policy: DrawPolicy) -> Player {
        self.outcome.winner().unwrap_or(policy.winner())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub config: MatchConfig,
    pub rounds: Vec<Round>,
    pub end: Option<MatchEnd>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("transcript line {line}: {msg}")]
pub struct TranscriptParseError {
    pub line: usize,
    pub msg: String,
}

impl Transcript {
    pub fn new(config: MatchConfig) -> Self {
        Transcript {
            config,
            rounds: Vec::new(),
            end: None,
        }
    }

    pub fn final_chips(&self) -> ChipState {
        self.rounds
            .last()
            .map(|r| r.chips)
            .unwrap_or_else(|| self.config.initial_chips())
    }

    /// Chip ledger after each round, rendered like `113*/87`.
    pub fn ledger(&self) -> Vec<String> {
        self.rounds.iter().map(|r| r.chips.to_string()).collect()
    }

    /// Positions after each round, re-derived from the moves.
    pub fn positions<G: Game>(&self, game: &G) -> Result<Vec<G::Position>, String> {
        let mut pos = game.initial();
        let mut out = Vec::with_capacity(self.rounds.len());
        for r in &self.rounds {
            if let Some(label) = &r.move_label {
                pos = game
                    .apply(&pos, r.mover, label)
                    .ok_or_else(|| format!("round {}: illegal move `{label}`", r.number))?;
            }
            out.push(pos.clone());
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self, TranscriptParseError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let err = |line: usize, msg: &str| TranscriptParseError {
            line: line + 1,
            msg: msg.to_string(),
        };
        match lines.next() {
            Some((_, l)) if l.trim() == HEADER => {}
            Some((n, _)) => return Err(err(n, "missing `bidding-transcript v1` header")),
            None => return Err(err(0, "empty transcript")),
        }
        let mut config = MatchConfig::default();
        let mut rounds = Vec::new();
        let mut end = None;
        for (n, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: &str| err(n, msg);
            if end.is_some() {
                return Err(bad("content after `end`"));
            }
            match t.as_slice() {
                ["game", g] => config.game = g.to_string(),
                ["chips", c] => {
                    let c: ChipState = c.parse().map_err(|_| bad("bad chips"))?;
                    config.alice_chips = c.alice;
                    config.bob_chips = c.bob;
                    config.star = c.star;
                }
                ["draw-policy", p] => config.draw_policy = p.parse().map_err(|_| bad("bad draw policy"))?,
                ["seat", "A", s] => config.alice_seat = s.to_string(),
                ["seat", "B", s] => config.bob_seat = s.to_string(),
                ["seed", s] => config.seed = s.parse().map_err(|_| bad("bad seed"))?,
                ["round", num, "bidA", a, "bidB", b, "mover", m, "chips", c, "move", mv] => {
                    let mover: Player = match *m {
                        "A" => Player::Alice,
                        "B" => Player::Bob,
                        _ => return Err(bad("mover must be A or B")),
                    };
                    rounds.push(Round {
                        number: num.parse().map_err(|_| bad("bad round number"))?,
                        alice_bid: a.parse().map_err(|_| bad("bad bidA"))?,
                        bob_bid: b.parse().map_err(|_| bad("bad bidB"))?,
                        mover,
                        chips: c.parse().map_err(|_| bad("bad chips"))?,
                        move_label: (*mv != "-").then(|| mv.to_string()),
                    });
                }
                ["end", outcome, reason @ ..] => {
                    let outcome: Outcome = outcome.parse().map_err(|_| bad("bad outcome"))?;
                    let reason = match reason {
                        ["terminal"] => EndReason::Terminal,
                        ["stuck", p] => EndReason::Stuck(p.parse().map_err(|_| bad("bad player"))?),
                        ["forfeit", p] => EndReason::Forfeit(p.parse().map_err(|_| bad("bad player"))?),
                        _ => return Err(bad("bad end reason")),
                    };
                    end = Some(MatchEnd { outcome, reason });
                }
                _ => return Err(bad("unrecognized line")),
            }
        }
        Ok(Transcript { config, rounds, end })
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        let mut out = String::new();
        writeln!(out, "{HEADER}")?;
        writeln!(out, "game {}", c.game)?;
        writeln!(out, "chips {}", c.initial_chips())?;
        writeln!(out, "draw-policy {}", c.draw_policy.as_str())?;
        writeln!(out, "seat A {}", c.alice_seat)?;
        writeln!(out, "seat B {}", c.bob_seat)?;
        writeln!(out, "seed {}", c.seed)?;
        for r in &self.rounds {
            writeln!(
                out,
                "round {} bidA {} bidB {} mover {} chips {} move {}",
                r.number,
                r.alice_bid,
                r.bob_bid,
                r.mover.letter(),
                r.chips,
                r.move_label.as_deref().unwrap_or("-")
            )?;
        }
        if let Some(end) = &self.end {
            let reason = match end.reason {
                EndReason::Terminal => "terminal".to_string(),
                EndReason::Stuck(p) => format!("stuck {}", p.letter()),
                EndReason::Forfeit(p) => format!("forfeit {}", p.letter()),
            };
            writeln!(out, "end {} {reason}", end.outcome)?;
        }
        f.write_str(&out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub rounds_checked: usize,
    /// First divergence: round number (0 for the header or the end line) and
    /// what went wrong.
    pub failure: Option<(usize, String)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "transcript OK ({} rounds)", self.rounds_checked),
            Some((0, msg)) => write!(f, "transcript FAILED: {msg}"),
            Some((n, msg)) => write!(f, "transcript FAILED at round {n}: {msg}"),
        }
    }
}

/// Replays every round from the configured start and reports the first
/// divergence from the recorded bids, movers, chips, moves or result.
pub fn verify_transcript<G: Game>(game: &G, t: &Transcript) -> VerifyReport {
    let mut report = VerifyReport {
        rounds_checked: 0,
        failure: None,
    };
    let fail = |round: usize, msg: String| VerifyReport {
        rounds_checked: round.saturating_sub(1),
        failure: Some((round, msg)),
    };
    let mut pos = game.initial();
    let mut chips = t.config.initial_chips();
    let total = chips.total();
    let mut stuck: Option<Player> = None;

    for (i, r) in t.rounds.iter().enumerate() {
        let n = i + 1;
        if r.number != n {
            return fail(n, format!("round numbered {}", r.number));
        }
        if stuck.is_some() {
            return fail(n, "round after a stuck mover".into());
        }
        if game.outcome(&pos).is_terminal() {
            return fail(n, "round played after the game ended".into());
        }
        let (mover, after) = match resolve_bids(chips, r.alice_bid, r.bob_bid) {
            Ok(x) => x,
            Err(e) => return fail(n, format!("invalid bids: {e}")),
        };
        if mover != r.mover {
            return fail(n, format!("mover is {} but {} was recorded", mover.letter(), r.mover.letter()));
        }
        if after != r.chips {
            return fail(n, format!("chips are {after} but {} was recorded", r.chips));
        }
        if after.total() != total {
            return fail(n, "chip total changed".into());
        }
        chips = after;
        match &r.move_label {
            Some(label) => match game.apply(&pos, mover, label) {
                Some(next) => pos = next,
                None => return fail(n, format!("illegal move `{label}` for {mover}")),
            },
            None => {
                if !game.legal_moves(&pos, mover).is_empty() {
                    return fail(n, format!("{mover} recorded as stuck but has moves"));
                }
                stuck = Some(mover);
            }
        }
        report.rounds_checked = n;
    }

    let outcome = game.outcome(&pos);
    match (&t.end, stuck) {
        (None, None) if !outcome.is_terminal() => {}
        (None, _) => return fail(0, "game is over but no end recorded".into()),
        (Some(end), Some(p)) => {
            if end.reason != EndReason::Stuck(p) || end.outcome != p.opponent().wins() {
                return fail(0, format!("expected a loss for stuck {p}"));
            }
        }
        (Some(end), None) => match end.reason {
            EndReason::Terminal => {
                if end.outcome != outcome || !outcome.is_terminal() {
                    return fail(0, format!("recorded {} but the position is {outcome}", end.outcome));
                }
            }
            EndReason::Stuck(p) => return fail(0, format!("{p} recorded as stuck without a stuck round")),
            EndReason::Forfeit(p) => {
                if outcome.is_terminal() {
                    return fail(0, "forfeit recorded after the game ended".into());
                }
                if end.outcome != p.opponent().wins() {
                    return fail(0, "forfeit must award the opponent".into());
                }
            }
        },
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rejects_junk() {
        assert!(Transcript::parse("").is_err());
        assert!(Transcript::parse("hello\n").is_err());
        let bad = format!("{HEADER}\nround 1 bidA x bidB 1 mover A chips 1*/1 move a\n");
        assert!(Transcript::parse(&bad).is_err());
        let after_end = format!("{HEADER}\nend draw terminal\nseed 1\n");
        assert!(Transcript::parse(&after_end).is_err());
    }

    #[test]
    fn stuck_and_forfeit_lines_round_trip() {
        let mut t = Transcript::new(MatchConfig::default());
        t.rounds.push(Round {
            number: 1,
            alice_bid: Bid::new(0, true),
            bob_bid: Bid::plain(0),
            mover: Player::Alice,
            chips: ChipState::new(100, 100, Player::Bob),
            move_label: None,
        });
        t.end = Some(MatchEnd::loss_for(Player::Alice, EndReason::Stuck(Player::Alice)));
        let text = t.to_string();
        assert!(text.contains("move -\nend bob_wins stuck A\n"));
        assert_eq!(Transcript::parse(&text).unwrap(), t);
        t.end = Some(MatchEnd::loss_for(Player::Bob, EndReason::Forfeit(Player::Bob)));
        assert_eq!(Transcript::parse(&t.to_string()).unwrap(), t);
    }
}
