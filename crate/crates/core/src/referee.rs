//! The match engine: sealed bids, resolution, moves and the transcript.

use thiserror::Error;

use crate::agents::{Agent, AgentAction, AgentError, SeatView};
use crate::discrete::{resolve_bids, Bid, BidError, ChipState};
use crate::game::{Game, Player};
use crate::transcript::{EndReason, MatchConfig, MatchEnd, Round, Transcript};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    AwaitingBids,
    AwaitingMove(Player),
    Finished,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchError {
    #[error("match is finished")]
    Finished,
    #[error("not accepting bids now")]
    NotBidding,
    #[error("{0} already committed a bid this round")]
    AlreadyCommitted(Player),
    #[error("{0} is not the mover")]
    NotMover(Player),
    #[error(transparent)]
    Bid(#[from] BidError),
    #[error("illegal move `{label}` for {player}")]
    IllegalMove { player: Player, label: String },
}

/// Both sealed bids of the current round. Neither is visible before both
/// are in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SealedBids {
    alice: Option<Bid>,
    bob: Option<Bid>,
}

impl SealedBids {
    fn slot(&mut self, p: Player) -> &mut Option<Bid> {
        match p {
            Player::Alice => &mut self.alice,
            Player::Bob => &mut self.bob,
        }
    }

    pub fn committed(&self, p: Player) -> bool {
        match p {
            Player::Alice => self.alice.is_some(),
            Player::Bob => self.bob.is_some(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Commit {
    /// Waiting for the other seat.
    Sealed,
    /// Both bids are in; the auction went to `mover`.
    Resolved { mover: Player, chips: ChipState },
}

/// Applies the rules to one match. Agents, humans and the service all drive
/// it through the same calls.
#[derive(Clone, Debug)]
pub struct Referee<G: Game> {
    game: G,
    position: G::Position,
    chips: ChipState,
    phase: Phase,
    sealed: SealedBids,
    pending: Option<(Bid, Bid)>,
    transcript: Transcript,
}

impl<G: Game> Referee<G> {
    pub fn new(game: G, config: MatchConfig) -> Self {
        let position = game.initial();
        let chips = config.initial_chips();
        let mut referee = Referee {
            game,
            position,
            chips,
            phase: Phase::AwaitingBids,
            sealed: SealedBids::default(),
            pending: None,
            transcript: Transcript::new(config),
        };
        referee.check_terminal();
        referee
    }

    pub fn game(&self) -> &G {
        &self.game
    }

    pub fn position(&self) -> &G::Position {
        &self.position
    }

    pub fn chips(&self) -> ChipState {
        self.chips
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn into_transcript(self) -> Transcript {
        self.transcript
    }

    pub fn committed(&self, p: Player) -> bool {
        self.sealed.committed(p)
    }

    pub fn end(&self) -> Option<MatchEnd> {
        self.transcript.end
    }

    pub fn round_number(&self) -> usize {
        self.transcript.rounds.len() + 1
    }

    pub fn view(&self, player: Player) -> SeatView<'_, G> {
        SeatView {
            game: &self.game,
            player,
            position: &self.position,
            chips: self.chips,
        }
    }

    fn check_terminal(&mut self) {
        let outcome = self.game.outcome(&self.position);
        if outcome.is_terminal() {
            self.finish(MatchEnd {
                outcome,
                reason: EndReason::Terminal,
            });
        }
    }

    fn finish(&mut self, end: MatchEnd) {
        self.phase = Phase::Finished;
        self.sealed = SealedBids::default();
        self.transcript.end = Some(end);
    }

    /// Seals `bid` for `p`. The second commit resolves the auction.
    pub fn commit_bid(&mut self, p: Player, bid: Bid) -> Result<Commit, MatchError> {
        match self.phase {
            Phase::Finished => return Err(MatchError::Finished),
            Phase::AwaitingMove(_) => return Err(MatchError::NotBidding),
            Phase::AwaitingBids => {}
        }
        if self.sealed.committed(p) {
            return Err(MatchError::AlreadyCommitted(p));
        }
        self.chips.validate(p, bid)?;
        *self.sealed.slot(p) = Some(bid);
        let (Some(a), Some(b)) = (self.sealed.alice, self.sealed.bob) else {
            return Ok(Commit::Sealed);
        };
        let (mover, after) = resolve_bids(self.chips, a, b)?;
        self.sealed = SealedBids::default();
        self.chips = after;
        if self.game.legal_moves(&self.position, mover).is_empty() {
            self.push_round(a, b, mover, None);
            self.finish(MatchEnd::loss_for(mover, EndReason::Stuck(mover)));
        } else {
            self.pending = Some((a, b));
            self.phase = Phase::AwaitingMove(mover);
        }
        Ok(Commit::Resolved { mover, chips: after })
    }

    fn push_round(&mut self, a: Bid, b: Bid, mover: Player, label: Option<String>) {
        let number = self.round_number();
        self.transcript.rounds.push(Round {
            number,
            alice_bid: a,
            bob_bid: b,
            mover,
            chips: self.chips,
            move_label: label,
        });
    }

    pub fn submit_move(&mut self, p: Player, label: &str) -> Result<(), MatchError> {
        match self.phase {
            Phase::Finished => return Err(MatchError::Finished),
            Phase::AwaitingMove(m) if m == p => {}
            _ => return Err(MatchError::NotMover(p)),
        }
        let next = self
            .game
            .apply(&self.position, p, label)
            .ok_or_else(|| MatchError::IllegalMove {
                player: p,
                label: label.to_string(),
            })?;
        let (a, b) = self.pending.take().expect("pending bids while awaiting a move");
        self.position = next;
        self.push_round(a, b, p, Some(label.to_string()));
        self.phase = Phase::AwaitingBids;
        self.check_terminal();
        Ok(())
    }

    /// Ends the match as a loss for `p` (illegal action or timeout). An
    /// auction already won but not yet moved is discarded.
    pub fn forfeit(&mut self, p: Player) -> Result<(), MatchError> {
        if self.phase == Phase::Finished {
            return Err(MatchError::Finished);
        }
        if self.pending.take().is_some() {
            let last = self.transcript.rounds.last().map(|r| r.chips);
            self.chips = last.unwrap_or_else(|| self.transcript.config.initial_chips());
        }
        self.finish(MatchEnd::loss_for(p, EndReason::Forfeit(p)));
        Ok(())
    }
}

/// Plays a match between two in-process agents. An agent error or illegal
/// output forfeits that seat.
pub fn run_match<G, A, B>(game: G, config: MatchConfig, alice: &mut A, bob: &mut B) -> Transcript
where
    G: Game,
    A: Agent<G> + ?Sized,
    B: Agent<G> + ?Sized,
{
    let mut referee = Referee::new(game, config);
    while referee.phase() != Phase::Finished {
        let actions: [Result<AgentAction, AgentError>; 2] =
            [alice.act(&referee.view(Player::Alice)), bob.act(&referee.view(Player::Bob))];
        let [a, b] = actions;
        let (a, b) = match (a, b) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(_), _) => {
                referee.forfeit(Player::Alice).expect("match in progress");
                break;
            }
            (_, Err(_)) => {
                referee.forfeit(Player::Bob).expect("match in progress");
                break;
            }
        };
        if referee.commit_bid(Player::Alice, a.bid).is_err() {
            referee.forfeit(Player::Alice).expect("match in progress");
            break;
        }
        let mover = match referee.commit_bid(Player::Bob, b.bid) {
            Ok(Commit::Resolved { mover, .. }) => mover,
            _ => {
                referee.forfeit(Player::Bob).expect("match in progress");
                break;
            }
        };
        if referee.phase() == Phase::Finished {
            break;
        }
        let label = match mover {
            Player::Alice => a.move_if_win,
            Player::Bob => b.move_if_win,
        };
        let ok = label.is_some_and(|l| referee.submit_move(mover, &l).is_ok());
        if !ok {
            referee.forfeit(mover).expect("match in progress");
        }
    }
    referee.into_transcript()
}

/// One scripted round: both bids and the move the auction winner plays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptRound {
    pub alice_bid: Bid,
    pub bob_bid: Bid,
    pub move_label: String,
}

/// Parses `bidA <amt>[*] bidB <amt>[*] move <label>` lines; `#` comments and
/// blank lines are skipped.
pub fn parse_script(text: &str) -> Result<Vec<ScriptRound>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let t: Vec<&str> = line.split_whitespace().collect();
        let ["bidA", a, "bidB", b, "move", m] = t.as_slice() else {
            return Err(format!("script line {}: expected `bidA <bid> bidB <bid> move <label>`", n + 1));
        };
        let bid = |s: &str| s.parse::<Bid>().map_err(|e| format!("script line {}: {e}", n + 1));
        out.push(ScriptRound {
            alice_bid: bid(a)?,
            bob_bid: bid(b)?,
            move_label: m.to_string(),
        });
    }
    Ok(out)
}

/// Replays one side of a script, one round per call.
pub struct ScriptedSeat {
    player: Player,
    rounds: Vec<ScriptRound>,
    next: usize,
}

impl ScriptedSeat {
    pub fn new(player: Player, rounds: Vec<ScriptRound>) -> Self {
        ScriptedSeat {
            player,
            rounds,
            next: 0,
        }
    }

    /// Both seats of a script.
    pub fn pair(rounds: Vec<ScriptRound>) -> (Self, Self) {
        (
            ScriptedSeat::new(Player::Alice, rounds.clone()),
            ScriptedSeat::new(Player::Bob, rounds),
        )
    }
}

impl<G: Game> Agent<G> for ScriptedSeat {
    fn name(&self) -> String {
        "script".into()
    }

    fn act(&mut self, _view: &SeatView<'_, G>) -> Result<AgentAction, AgentError> {
        let r = self.rounds.get(self.next).ok_or(AgentError::ScriptExhausted(self.next))?;
        self.next += 1;
        let bid = match self.player {
            Player::Alice => r.alice_bid,
            Player::Bob => r.bob_bid,
        };
        Ok(AgentAction {
            bid,
            move_if_win: Some(r.move_label.clone()),
        })
    }
}
