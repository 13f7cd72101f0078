//! One live or restored match. All mutation goes through the session lock,
//! so actions on a match are serialized.

use std::sync::{Arc, Mutex, MutexGuard};
use std::time::Duration;

use bidding_core::agents::Agent;
use bidding_core::{
    verify_transcript, AnyGame, Bid, EndReason, Game, MatchConfig, MatchError, Phase, Player, Referee, Transcript,
};
use tokio::sync::broadcast;

use crate::error::ServiceError;
use crate::schema::{
    BidRequest, ChipsJson, MatchConfigJson, MoveRequest, ResultJson, RoundJson, SeatPair, Snapshot,
};
use crate::store::Store;

pub type BotSeat = Box<dyn Agent<AnyGame> + Send>;

/// A serialized snapshot as sent to clients.
#[derive(Clone, Debug)]
pub struct Published {
    pub version: u64,
    pub json: Arc<str>,
    pub finished: bool,
}

/// Where the match stands; a human timeout is armed per stage.
pub type Stage = (usize, Phase);

struct Bot {
    agent: BotSeat,
    planned: Option<String>,
}

struct Inner {
    referee: Referee<AnyGame>,
    bots: [Option<Bot>; 2],
    current: Published,
    store: Option<Arc<Store>>,
    armed: Option<Stage>,
}

pub struct Session {
    id: String,
    tokens: [Option<String>; 2],
    timeout: Duration,
    inner: Mutex<Inner>,
    events: broadcast::Sender<Published>,
}

fn idx(p: Player) -> usize {
    match p {
        Player::Alice => 0,
        Player::Bob => 1,
    }
}

pub fn config_json(c: &MatchConfig) -> MatchConfigJson {
    MatchConfigJson {
        game: c.game.clone(),
        alice_chips: c.alice_chips,
        bob_chips: c.bob_chips,
        star: c.star.letter().to_string(),
        draw_policy: c.draw_policy.as_str().to_string(),
        alice: c.alice_seat.clone(),
        bob: c.bob_seat.clone(),
        seed: c.seed,
    }
}

fn phase_name(p: Phase) -> &'static str {
    match p {
        Phase::AwaitingBids => "awaiting_bids",
        Phase::AwaitingMove(_) => "awaiting_move",
        Phase::Finished => "finished",
    }
}

fn snapshot(id: &str, version: u64, timeout: Duration, r: &Referee<AnyGame>) -> Snapshot {
    let game = r.game();
    let t = r.transcript();
    let positions = t.positions(game).expect("referee transcript replays");
    let rounds = t
        .rounds
        .iter()
        .zip(&positions)
        .map(|(round, pos)| RoundJson {
            number: round.number,
            alice_bid: round.alice_bid.to_string(),
            bob_bid: round.bob_bid.to_string(),
            mover: round.mover.letter().to_string(),
            chips: round.chips.to_string(),
            move_label: round.move_label.clone(),
            position: game.encode(pos),
        })
        .collect();
    let phase = r.phase();
    let moves = |p: Player| -> Vec<String> {
        if phase == Phase::Finished {
            return Vec::new();
        }
        game.legal_moves(r.position(), p).into_iter().map(|m| m.label).collect()
    };
    let chips = r.chips();
    let result = r.end().map(|end| {
        let (reason, loser) = match end.reason {
            EndReason::Terminal => ("terminal", None),
            EndReason::Stuck(p) => ("stuck", Some(p.letter().to_string())),
            EndReason::Forfeit(p) => ("forfeit", Some(p.letter().to_string())),
        };
        ResultJson {
            outcome: end.outcome.as_str().to_string(),
            winner: end.winner(t.config.draw_policy).letter().to_string(),
            reason: reason.to_string(),
            loser,
            transcript_id: id.to_string(),
        }
    });
    Snapshot {
        match_id: id.to_string(),
        version,
        config: config_json(&t.config),
        timeout_secs: timeout.as_secs(),
        phase: phase_name(phase).to_string(),
        round: r.round_number(),
        mover: match phase {
            Phase::AwaitingMove(m) => Some(m.letter().to_string()),
            _ => None,
        },
        position: game.encode(r.position()),
        legal_moves: SeatPair {
            alice: moves(Player::Alice),
            bob: moves(Player::Bob),
        },
        chips: ChipsJson {
            alice: chips.alice,
            bob: chips.bob,
            star: chips.star.letter().to_string(),
            text: chips.to_string(),
        },
        committed: SeatPair {
            alice: r.committed(Player::Alice),
            bob: r.committed(Player::Bob),
        },
        rounds,
        result,
    }
}

/// Rebuilds the referee state of a recorded match by replaying it.
pub fn replay(game: AnyGame, t: &Transcript) -> Result<Referee<AnyGame>, String> {
    let report = verify_transcript(&game, t);
    if !report.passed() {
        return Err(report.to_string());
    }
    let mut r = Referee::new(game, t.config.clone());
    for round in &t.rounds {
        r.commit_bid(Player::Alice, round.alice_bid).map_err(|e| e.to_string())?;
        r.commit_bid(Player::Bob, round.bob_bid).map_err(|e| e.to_string())?;
        if let Some(label) = &round.move_label {
            r.submit_move(round.mover, label).map_err(|e| e.to_string())?;
        }
    }
    if let Some(end) = t.end {
        if let EndReason::Forfeit(p) = end.reason {
            r.forfeit(p).map_err(|e| e.to_string())?;
        }
    }
    if r.transcript() != t {
        return Err("replay does not reproduce the transcript".into());
    }
    Ok(r)
}

impl Inner {
    /// Recomputes the snapshot and pushes it to subscribers.
    fn publish(&mut self, id: &str, timeout: Duration, events: &broadcast::Sender<Published>) {
        let version = self.current.version + 1;
        self.current = Published {
            version,
            json: serde_json::to_string(&snapshot(id, version, timeout, &self.referee))
                .expect("snapshot serializes")
                .into(),
            finished: self.referee.phase() == Phase::Finished,
        };
        self.persist(id);
        let _ = events.send(self.current.clone());
    }

    fn persist(&mut self, id: &str) {
        if self.referee.phase() != Phase::Finished {
            return;
        }
        if let Some(store) = self.store.take() {
            if let Err(e) = store.save(id, self.referee.transcript()) {
                eprintln!("bidding-server: cannot save transcript {id}: {e}");
            }
        }
    }

    fn forfeit_bot(&mut self, p: Player) {
        let _ = self.referee.forfeit(p);
    }

    /// Lets bot seats act until a human seat is due or the match ends.
    /// Publishes after every transition.
    fn run_bots(&mut self, id: &str, timeout: Duration, events: &broadcast::Sender<Published>) {
        loop {
            match self.referee.phase() {
                Phase::Finished => return,
                Phase::AwaitingBids => {
                    let Some(p) = Player::BOTH
                        .into_iter()
                        .find(|&p| self.bots[idx(p)].is_some() && !self.referee.committed(p))
                    else {
                        return;
                    };
                    let bot = self.bots[idx(p)].as_mut().expect("bot seat");
                    match bot.agent.act(&self.referee.view(p)) {
                        Ok(action) => {
                            bot.planned = action.move_if_win;
                            if self.referee.commit_bid(p, action.bid).is_err() {
                                self.forfeit_bot(p);
                            }
                        }
                        Err(_) => self.forfeit_bot(p),
                    }
                }
                Phase::AwaitingMove(m) => {
                    let Some(bot) = self.bots[idx(m)].as_mut() else {
                        return;
                    };
                    match bot.planned.take() {
                        Some(label) => {
                            if self.referee.submit_move(m, &label).is_err() {
                                self.forfeit_bot(m);
                            }
                        }
                        None => self.forfeit_bot(m),
                    }
                }
            }
            self.publish(id, timeout, events);
        }
    }
}

impl Session {
    /// Registers a new match and lets bot seats make their first actions.
    pub fn start(
        id: String,
        game: AnyGame,
        config: MatchConfig,
        bots: [Option<BotSeat>; 2],
        tokens: [Option<String>; 2],
        timeout: Duration,
        store: Arc<Store>,
    ) -> Arc<Session> {
        let referee = Referee::new(game, config);
        let [a, b] = bots;
        let wrap = |agent: Option<BotSeat>| agent.map(|agent| Bot { agent, planned: None });
        let session = Session::assemble(id, referee, [wrap(a), wrap(b)], tokens, timeout, Some(store));
        {
            let mut inner = session.lock();
            inner.persist(&session.id);
            inner.run_bots(&session.id, timeout, &session.events);
        }
        session
    }

    /// A finished match loaded from its transcript; it accepts no actions.
    pub fn restore(id: String, game: AnyGame, t: &Transcript, timeout: Duration) -> Result<Arc<Session>, String> {
        let referee = replay(game, t)?;
        Ok(Session::assemble(id, referee, [None, None], [None, None], timeout, None))
    }

    fn assemble(
        id: String,
        referee: Referee<AnyGame>,
        bots: [Option<Bot>; 2],
        tokens: [Option<String>; 2],
        timeout: Duration,
        store: Option<Arc<Store>>,
    ) -> Arc<Session> {
        let current = Published {
            version: 0,
            json: serde_json::to_string(&snapshot(&id, 0, timeout, &referee))
                .expect("snapshot serializes")
                .into(),
            finished: referee.phase() == Phase::Finished,
        };
        let (events, _) = broadcast::channel(256);
        Arc::new(Session {
            id,
            tokens,
            timeout,
            inner: Mutex::new(Inner {
                referee,
                bots,
                current,
                store,
                armed: None,
            }),
            events,
        })
    }

    fn lock(&self) -> MutexGuard<'_, Inner> {
        self.inner.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn timeout(&self) -> Duration {
        self.timeout
    }

    pub fn current(&self) -> Published {
        self.lock().current.clone()
    }

    pub fn snapshot(&self) -> Snapshot {
        serde_json::from_str(&self.current().json).expect("snapshot round-trips")
    }

    pub fn transcript(&self) -> Transcript {
        self.lock().referee.transcript().clone()
    }

    /// The current snapshot plus a receiver for every later one, with no gap.
    pub fn subscribe(&self) -> (Published, broadcast::Receiver<Published>) {
        let inner = self.lock();
        (inner.current.clone(), self.events.subscribe())
    }

    fn seat(&self, token: &str) -> Result<Player, ServiceError> {
        Player::BOTH
            .into_iter()
            .find(|&p| self.tokens[idx(p)].as_deref() == Some(token))
            .ok_or_else(|| ServiceError::Unauthorized("token does not hold a seat in this match".into()))
    }

    fn check_round(inner: &Inner, round: Option<usize>) -> Result<(), ServiceError> {
        if inner.referee.phase() == Phase::Finished {
            return Err(ServiceError::WrongPhase("match is finished".into()));
        }
        match round {
            Some(n) if n != inner.referee.round_number() => Err(ServiceError::StaleRound(format!(
                "round {n} is not open; the open round is {}",
                inner.referee.round_number()
            ))),
            _ => Ok(()),
        }
    }

    pub fn submit_bid(&self, req: &BidRequest) -> Result<Published, ServiceError> {
        let p = self.seat(&req.token)?;
        let mut inner = self.lock();
        Session::check_round(&inner, req.round)?;
        match inner.referee.commit_bid(p, Bid::new(req.amount, req.star)) {
            Ok(_) => {}
            Err(MatchError::AlreadyCommitted(_)) => {
                return Err(ServiceError::StaleRound(format!(
                    "{p} already sealed a bid in round {}",
                    inner.referee.round_number()
                )))
            }
            Err(MatchError::NotBidding) => {
                return Err(ServiceError::WrongPhase("bids are closed; the auction winner must move".into()))
            }
            Err(MatchError::Finished) => return Err(ServiceError::WrongPhase("match is finished".into())),
            Err(e) => return Err(ServiceError::IllegalBid(e.to_string())),
        }
        inner.publish(&self.id, self.timeout, &self.events);
        inner.run_bots(&self.id, self.timeout, &self.events);
        Ok(inner.current.clone())
    }

    pub fn submit_move(&self, req: &MoveRequest) -> Result<Published, ServiceError> {
        let p = self.seat(&req.token)?;
        let mut inner = self.lock();
        Session::check_round(&inner, req.round)?;
        match inner.referee.phase() {
            Phase::AwaitingMove(m) if m == p => {}
            Phase::AwaitingMove(_) => {
                return Err(ServiceError::Unauthorized("only the auction winner may move".into()))
            }
            _ => return Err(ServiceError::WrongPhase("bids are still open".into())),
        }
        inner
            .referee
            .submit_move(p, &req.label)
            .map_err(|e| ServiceError::IllegalMove(e.to_string()))?;
        inner.publish(&self.id, self.timeout, &self.events);
        inner.run_bots(&self.id, self.timeout, &self.events);
        Ok(inner.current.clone())
    }

    /// The stage a human seat now owes an action for, if no timer covers it yet.
    pub fn arm(&self) -> Option<Stage> {
        let mut inner = self.lock();
        let phase = inner.referee.phase();
        if phase == Phase::Finished {
            return None;
        }
        let stage = (inner.referee.round_number(), phase);
        if inner.armed == Some(stage) {
            return None;
        }
        inner.armed = Some(stage);
        Some(stage)
    }

    /// Forfeits the human seat still owing an action at `stage`. With both
    /// bids missing, Alice forfeits. Returns whether the match ended.
    pub fn expire(&self, stage: Stage) -> bool {
        let mut inner = self.lock();
        let phase = inner.referee.phase();
        if (inner.referee.round_number(), phase) != stage {
            return false;
        }
        let late = match phase {
            Phase::Finished => return false,
            Phase::AwaitingMove(m) => m,
            Phase::AwaitingBids => match Player::BOTH.into_iter().find(|&p| !inner.referee.committed(p)) {
                Some(p) => p,
                None => return false,
            },
        };
        if inner.referee.forfeit(late).is_err() {
            return false;
        }
        inner.publish(&self.id, self.timeout, &self.events);
        true
    }
}
