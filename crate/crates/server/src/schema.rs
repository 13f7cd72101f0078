//! JSON payloads exchanged with clients. Field names and string encodings
//! here are the wire contract.

use serde::{Deserialize, Serialize};

/// Requested match settings; also echoed in every snapshot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchConfigJson {
    /// `ttt`, `hex:<n>` or `dag:<name>` for a file in the server's DAG directory.
    pub game: String,
    #[serde(default = "default_chips")]
    pub alice_chips: u64,
    #[serde(default = "default_chips")]
    pub bob_chips: u64,
    /// Holder of the tiebreak chip: `A` or `B`.
    #[serde(default = "default_star")]
    pub star: String,
    /// `draw_is_bob_win` or `draw_is_alice_win`.
    #[serde(default = "default_policy")]
    pub draw_policy: String,
    /// `human` or an agent spec (`richman`, `discrete`, `random`, `mc-hex:<samples>`).
    #[serde(default = "default_seat")]
    pub alice: String,
    #[serde(default = "default_seat")]
    pub bob: String,
    #[serde(default)]
    pub seed: u64,
}

fn default_chips() -> u64 {
    100
}

fn default_star() -> String {
    "A".into()
}

fn default_policy() -> String {
    "draw_is_bob_win".into()
}

fn default_seat() -> String {
    "human".into()
}

/// One entry per seat.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeatPair<T> {
    pub alice: T,
    pub bob: T,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CreateMatchResponse {
    pub match_id: String,
    /// Secret tokens for human seats; bot seats have none.
    pub tokens: SeatPair<Option<String>>,
    pub snapshot: Snapshot,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BidRequest {
    pub token: String,
    pub amount: u64,
    /// Attach the tiebreak chip (only its holder may).
    #[serde(default)]
    pub star: bool,
    /// Round the client believes is open; a mismatch is rejected as stale.
    #[serde(default)]
    pub round: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRequest {
    pub token: String,
    pub label: String,
    #[serde(default)]
    pub round: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChipsJson {
    pub alice: u64,
    pub bob: u64,
    pub star: String,
    /// Ledger form, e.g. `113*/87`.
    pub text: String,
}

/// A completed round; both bids are public once revealed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundJson {
    pub number: usize,
    pub alice_bid: String,
    pub bob_bid: String,
    pub mover: String,
    /// Chips after the winner paid, ledger form.
    pub chips: String,
    /// `None` when the winner was stuck.
    pub move_label: Option<String>,
    /// Position encoding after the round.
    pub position: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultJson {
    /// `alice_wins`, `bob_wins` or `draw`.
    pub outcome: String,
    /// Winner after the draw policy: `A` or `B`.
    pub winner: String,
    /// `terminal`, `stuck` or `forfeit`.
    pub reason: String,
    /// Seat that got stuck or forfeited.
    pub loser: Option<String>,
    pub transcript_id: String,
}

/// Public match state. Contains nothing derived from an unrevealed bid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub match_id: String,
    /// Increases by one per state change.
    pub version: u64,
    pub config: MatchConfigJson,
    pub timeout_secs: u64,
    /// `awaiting_bids`, `awaiting_move` or `finished`.
    pub phase: String,
    /// Number of the open round.
    pub round: usize,
    pub mover: Option<String>,
    pub position: String,
    pub legal_moves: SeatPair<Vec<String>>,
    pub chips: ChipsJson,
    /// Whether each seat has sealed a bid this round.
    pub committed: SeatPair<bool>,
    pub rounds: Vec<RoundJson>,
    pub result: Option<ResultJson>,
}

/// Final event on a snapshot stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndEvent {
    pub match_id: String,
    pub transcript_id: String,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameInfo {
    pub id: String,
    pub description: String,
    /// Agent specs that can play this game.
    pub agents: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorJson {
    /// `invalid_config`, `unknown_match`, `unauthorized`, `wrong_phase`,
    /// `stale_round`, `illegal_bid`, `illegal_move` or `bad_request`.
    pub error: String,
    pub message: String,
}
