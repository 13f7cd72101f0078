//! HTTP service for bidding-game matches.
//!
//! Routes (all JSON unless noted):
//!
//! | method | path | body | reply |
//! |---|---|---|---|
//! | GET | `/api/games` | | `[GameInfo]` |
//! | POST | `/api/matches` | `MatchConfigJson` | `CreateMatchResponse` |
//! | GET | `/api/matches/{id}` | | `Snapshot` |
//! | POST | `/api/matches/{id}/bid` | `BidRequest` | `Snapshot` |
//! | POST | `/api/matches/{id}/move` | `MoveRequest` | `Snapshot` |
//! | GET | `/api/matches/{id}/events` | | SSE: `snapshot` events, then one `end` event |
//! | GET | `/api/matches/{id}/transcript` | | transcript text |
//!
//! Errors reply with `ErrorJson`.

pub mod error;
pub mod schema;
pub mod session;
pub mod store;

use std::collections::{HashMap, VecDeque};
use std::convert::Infallible;
use std::io;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};
use std::time::Duration;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, State};
use axum::http::header::CONTENT_TYPE;
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use bidding_core::agents::{build_agent, AgentSpec, SolvedTables};
use bidding_core::game::{DagOptions, MAX_HEX_SIZE};
use bidding_core::{AnyGame, DrawPolicy, Game, MatchConfig, Player};
use futures::Stream;
use tokio::net::TcpListener;
use tokio::sync::broadcast::error::RecvError;
use tokio::sync::broadcast::Receiver;

pub use error::ServiceError;
use schema::{BidRequest, CreateMatchResponse, EndEvent, GameInfo, MatchConfigJson, MoveRequest, SeatPair};
pub use session::{Published, Session};
use store::Store;

/// Largest chip total a match may start with.
pub const MAX_CHIPS: u64 = 1_000_000_000_000;
/// A `discrete` seat is refused when positions · (total + 1) exceeds this.
pub const DISCRETE_STATE_LIMIT: usize = 4_000_000;

#[derive(Clone, Debug)]
pub struct ServerConfig {
    pub listen: SocketAddr,
    pub transcript_dir: PathBuf,
    /// Per-round limit for human seats; running out forfeits the match.
    pub timeout: Duration,
    /// Directory of `.dag` files offered as `dag:<name>`.
    pub dag_dir: Option<PathBuf>,
    /// Predictable match ids and tokens (`m1`, `m1-A`, ...). Tests only.
    pub sequential_ids: bool,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            listen: SocketAddr::from(([127, 0, 0, 1], 8080)),
            transcript_dir: PathBuf::from("transcripts"),
            timeout: Duration::from_secs(120),
            dag_dir: None,
            sequential_ids: false,
        }
    }
}

pub struct App {
    config: ServerConfig,
    store: Arc<Store>,
    sessions: RwLock<HashMap<String, Arc<Session>>>,
    tables: SolvedTables,
    counter: AtomicU64,
    restored: usize,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

impl App {
    /// Opens the transcript directory and restores every finished match in it.
    pub fn open(config: ServerConfig) -> io::Result<Arc<App>> {
        let store = Arc::new(Store::open(&config.transcript_dir)?);
        let mut app = App {
            config,
            store,
            sessions: RwLock::new(HashMap::new()),
            tables: SolvedTables::new(),
            counter: AtomicU64::new(0),
            restored: 0,
        };
        let mut sessions = HashMap::new();
        for (id, parsed) in app.store.load_all()? {
            let restored = parsed.and_then(|t| {
                let (game, _) = app.resolve_game(&t.config.game).map_err(|e| e.to_string())?;
                Session::restore(id.clone(), game, &t, app.config.timeout)
            });
            match restored {
                Ok(s) => {
                    sessions.insert(id, s);
                }
                Err(e) => eprintln!("bidding-server: skipping stored transcript {id}: {e}"),
            }
        }
        app.restored = sessions.len();
        app.counter.store(sessions.len() as u64, Ordering::SeqCst);
        app.sessions = RwLock::new(sessions);
        Ok(Arc::new(app))
    }

    pub fn config(&self) -> &ServerConfig {
        &self.config
    }

    pub fn transcript_dir(&self) -> &Path {
        self.store.dir()
    }

    /// Number of finished matches loaded at startup.
    pub fn restored(&self) -> usize {
        self.restored
    }

    fn dag_names(&self) -> Vec<String> {
        let Some(dir) = &self.config.dag_dir else {
            return Vec::new();
        };
        let Ok(entries) = std::fs::read_dir(dir) else {
            return Vec::new();
        };
        let mut names: Vec<String> = entries
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().and_then(|e| e.to_str()) == Some("dag"))
            .filter_map(|p| p.file_stem().and_then(|s| s.to_str()).map(str::to_string))
            .filter(|n| valid_name(n))
            .collect();
        names.sort();
        names
    }

    pub fn games(&self) -> Vec<GameInfo> {
        let exact = ["richman", "discrete", "random"];
        let owned = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let mut out = vec![GameInfo {
            id: "ttt".into(),
            description: "Tic-Tac-Toe; a draw goes to the draw-policy side".into(),
            agents: owned(&exact),
        }];
        for n in 2..=MAX_HEX_SIZE {
            let agents = if n <= 3 {
                owned(&["richman", "discrete", "random", "mc-hex:<samples>"])
            } else {
                owned(&["mc-hex:<samples>", "random"])
            };
            out.push(GameInfo {
                id: format!("hex:{n}"),
                description: format!("Hex on a {n}x{n} board; Alice joins the left and right edges"),
                agents,
            });
        }
        for name in self.dag_names() {
            out.push(GameInfo {
                id: format!("dag:{name}"),
                description: format!("game graph {name}.dag"),
                agents: owned(&exact),
            });
        }
        out
    }

    /// Loads a game and returns it with the game id recorded in transcripts.
    pub fn resolve_game(&self, spec: &str) -> Result<(AnyGame, String), ServiceError> {
        let unsupported = || ServiceError::InvalidConfig(format!("unsupported game `{spec}`"));
        if let Some(name) = spec.strip_prefix("dag:") {
            let name = name.strip_suffix(".dag").unwrap_or(name);
            let dir = self.config.dag_dir.as_ref().ok_or_else(unsupported)?;
            if !valid_name(name) {
                return Err(unsupported());
            }
            let path = dir.join(format!("{name}.dag"));
            if !path.is_file() {
                return Err(unsupported());
            }
            let game = AnyGame::from_spec(&format!("dag:{}", path.display()), DagOptions { allow_stuck: true })
                .map_err(|e| ServiceError::InvalidConfig(e.to_string()))?;
            return Ok((game, format!("dag:{name}.dag")));
        }
        if spec != "ttt" && !spec.starts_with("hex:") {
            return Err(unsupported());
        }
        let game = AnyGame::from_spec(spec, DagOptions::default()).map_err(|e| ServiceError::InvalidConfig(e.to_string()))?;
        Ok((game, spec.to_string()))
    }

    fn fresh_ids(&self) -> (String, [String; 2]) {
        let n = self.counter.fetch_add(1, Ordering::SeqCst) + 1;
        if self.config.sequential_ids {
            let id = format!("m{n}");
            return (id.clone(), [format!("{id}-A"), format!("{id}-B")]);
        }
        let token = || uuid::Uuid::new_v4().simple().to_string();
        (token(), [token(), token()])
    }

    /// Validates the request, builds bot seats and starts the match. Solving
    /// exact tables can take a while, so call this off the async runtime.
    pub fn create_match(&self, req: &MatchConfigJson) -> Result<CreateMatchResponse, ServiceError> {
        let invalid = |m: String| ServiceError::InvalidConfig(m);
        let (game, recorded) = self.resolve_game(&req.game)?;
        let star: Player = req.star.parse().map_err(|_| invalid(format!("star must be A or B, not `{}`", req.star)))?;
        let draw_policy: DrawPolicy = req
            .draw_policy
            .parse()
            .map_err(|_| invalid(format!("unknown draw policy `{}`", req.draw_policy)))?;
        let total = req
            .alice_chips
            .checked_add(req.bob_chips)
            .filter(|&t| t <= MAX_CHIPS)
            .ok_or_else(|| invalid(format!("at most {MAX_CHIPS} chips in play")))?;
        let config = MatchConfig {
            game: recorded,
            alice_chips: req.alice_chips,
            bob_chips: req.bob_chips,
            star,
            draw_policy,
            alice_seat: req.alice.clone(),
            bob_seat: req.bob.clone(),
            seed: req.seed,
        };
        let mut bots = [None, None];
        for (i, p) in Player::BOTH.into_iter().enumerate() {
            let seat = config.seat(p);
            if seat == "human" {
                continue;
            }
            let spec: AgentSpec = seat.parse().map_err(|e| invalid(format!("seat {p}: {e}")))?;
            if spec == AgentSpec::Discrete {
                let values = self
                    .tables
                    .values(&game, &bidding_core::agents::draw_value_for(draw_policy))
                    .map_err(|e| invalid(format!("seat {p}: {e}")))?;
                let states = (total as usize).saturating_add(1).saturating_mul(values.len());
                if states > DISCRETE_STATE_LIMIT {
                    return Err(invalid(format!(
                        "seat {p}: a discrete table for {} with {total} chips has {states} states (limit {DISCRETE_STATE_LIMIT})",
                        game.id()
                    )));
                }
            }
            let seed = config.seed.wrapping_add(i as u64);
            let agent = build_agent(spec, &game, total, draw_policy, seed, &self.tables)
                .map_err(|e| invalid(format!("seat {p}: {e}")))?;
            bots[i] = Some(agent);
        }
        let (id, [ta, tb]) = self.fresh_ids();
        let tokens = [
            (config.alice_seat == "human").then_some(ta),
            (config.bob_seat == "human").then_some(tb),
        ];
        let session = Session::start(
            id.clone(),
            game,
            config,
            bots,
            tokens.clone(),
            self.config.timeout,
            self.store.clone(),
        );
        let snapshot = session.snapshot();
        self.sessions.write().unwrap_or_else(|e| e.into_inner()).insert(id.clone(), session);
        let [alice, bob] = tokens;
        Ok(CreateMatchResponse {
            match_id: id,
            tokens: SeatPair { alice, bob },
            snapshot,
        })
    }

    pub fn session(&self, id: &str) -> Result<Arc<Session>, ServiceError> {
        self.sessions
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::UnknownMatch(id.to_string()))
    }
}

/// Starts the human timeout for the stage the match is now in.
pub fn arm_timeout(session: &Arc<Session>) {
    if let Some(stage) = session.arm() {
        let s = session.clone();
        tokio::spawn(async move {
            tokio::time::sleep(s.timeout()).await;
            if s.expire(stage) {
                arm_timeout(&s);
            }
        });
    }
}

fn json_text(p: &Published) -> Response {
    ([(CONTENT_TYPE, "application/json")], p.json.to_string()).into_response()
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> Result<T, ServiceError> {
    payload.map(|Json(t)| t).map_err(|e| ServiceError::BadRequest(e.body_text()))
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ServiceError> + Send + 'static) -> Result<T, ServiceError> {
    tokio::task::spawn_blocking(f)
        .await
        .unwrap_or_else(|e| Err(ServiceError::BadRequest(format!("request failed: {e}"))))
}

async fn list_games(State(app): State<Arc<App>>) -> Json<Vec<GameInfo>> {
    Json(app.games())
}

async fn create_match(
    State(app): State<Arc<App>>,
    payload: Result<Json<MatchConfigJson>, JsonRejection>,
) -> Result<Json<CreateMatchResponse>, ServiceError> {
    let req = body(payload)?;
    let worker = app.clone();
    let created = blocking(move || worker.create_match(&req)).await?;
    arm_timeout(&app.session(&created.match_id)?);
    Ok(Json(created))
}

async fn get_state(State(app): State<Arc<App>>, UrlPath(id): UrlPath<String>) -> Result<Response, ServiceError> {
    Ok(json_text(&app.session(&id)?.current()))
}

async fn submit_bid(
    State(app): State<Arc<App>>,
    UrlPath(id): UrlPath<String>,
    payload: Result<Json<BidRequest>, JsonRejection>,
) -> Result<Response, ServiceError> {
    let session = app.session(&id)?;
    let req = body(payload)?;
    let worker = session.clone();
    let published = blocking(move || worker.submit_bid(&req)).await?;
    arm_timeout(&session);
    Ok(json_text(&published))
}

async fn submit_move(
    State(app): State<Arc<App>>,
    UrlPath(id): UrlPath<String>,
    payload: Result<Json<MoveRequest>, JsonRejection>,
) -> Result<Response, ServiceError> {
    let session = app.session(&id)?;
    let req = body(payload)?;
    let worker = session.clone();
    let published = blocking(move || worker.submit_move(&req)).await?;
    arm_timeout(&session);
    Ok(json_text(&published))
}

async fn get_transcript(State(app): State<Arc<App>>, UrlPath(id): UrlPath<String>) -> Result<Response, ServiceError> {
    let text = app.session(&id)?.transcript().to_string();
    Ok(([(CONTENT_TYPE, "text/plain; charset=utf-8")], text).into_response())
}

struct Feed {
    session: Arc<Session>,
    rx: Receiver<Published>,
    queued: VecDeque<Event>,
    last_version: Option<u64>,
    done: bool,
}

impl Feed {
    fn push(&mut self, p: Published) {
        if self.last_version.is_some_and(|v| p.version <= v) {
            return;
        }
        self.last_version = Some(p.version);
        self.queued.push_back(Event::default().event("snapshot").data(p.json.to_string()));
        if p.finished {
            let snap = self.session.snapshot();
            let end = EndEvent {
                match_id: snap.match_id.clone(),
                transcript_id: snap.result.as_ref().map(|r| r.transcript_id.clone()).unwrap_or_default(),
                outcome: snap.result.map(|r| r.outcome).unwrap_or_default(),
            };
            let data = serde_json::to_string(&end).expect("end event serializes");
            self.queued.push_back(Event::default().event("end").data(data));
            self.done = true;
        }
    }
}

/// Current snapshot first, then one per change, then the end event.
pub fn snapshot_stream(session: Arc<Session>) -> impl Stream<Item = Result<Event, Infallible>> {
    let (first, rx) = session.subscribe();
    let mut feed = Feed {
        session,
        rx,
        queued: VecDeque::new(),
        last_version: None,
        done: false,
    };
    feed.push(first);
    futures::stream::unfold(feed, |mut feed| async move {
        loop {
            if let Some(event) = feed.queued.pop_front() {
                return Some((Ok(event), feed));
            }
            if feed.done {
                return None;
            }
            let next = match feed.rx.recv().await {
                Ok(p) => p,
                Err(RecvError::Lagged(_)) => feed.session.current(),
                Err(RecvError::Closed) => return None,
            };
            feed.push(next);
        }
    })
}

async fn subscribe(
    State(app): State<Arc<App>>,
    UrlPath(id): UrlPath<String>,
) -> Result<Sse<impl Stream<Item = Result<Event, Infallible>>>, ServiceError> {
    let session = app.session(&id)?;
    Ok(Sse::new(snapshot_stream(session)).keep_alive(KeepAlive::default()))
}

pub fn router(app: Arc<App>) -> Router {
    Router::new()
        .route("/api/games", get(list_games))
        .route("/api/matches", post(create_match))
        .route("/api/matches/{id}", get(get_state))
        .route("/api/matches/{id}/bid", post(submit_bid))
        .route("/api/matches/{id}/move", post(submit_move))
        .route("/api/matches/{id}/events", get(subscribe))
        .route("/api/matches/{id}/transcript", get(get_transcript))
        .with_state(app)
}

/// Serves on an already bound listener until the process stops.
pub async fn serve_on(app: Arc<App>, listener: TcpListener) -> io::Result<()> {
    axum::serve(listener, router(app)).await
}

pub async fn serve(config: ServerConfig) -> io::Result<()> {
    let listener = TcpListener::bind(config.listen).await?;
    let app = App::open(config)?;
    eprintln!(
        "bidding-server: listening on http://{} (transcripts in {}, {} restored)",
        listener.local_addr()?,
        app.transcript_dir().display(),
        app.restored()
    );
    serve_on(app, listener).await
}
