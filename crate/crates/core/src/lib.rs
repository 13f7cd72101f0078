//! Bidding combinatorial games.
//!
//! Instead of alternating turns, both players secretly bid chips for the
//! right to move; the higher bid is paid to the opponent and the winner moves.
//! Ties are broken by a single tiebreaker chip, `*`.
//!
//! The crate contains:
//!
//! * [`game`]: the abstract game interface plus Tic-Tac-Toe, Hex and
//!   file-defined DAG games.
//! * [`richman`]: exact continuous-bidding thresholds by backward induction.
//! * [`random_turn`]: optimal win probabilities when a fair coin picks the
//!   mover, and a position-by-position cross-check against [`richman`].
//! * [`discrete`]: integer chips with the `*` tiebreaker, solved exactly.
//! * [`agents`]: bot players.
//! * [`referee`] and [`transcript`]: sealed-bid match play with
//!   self-verifying transcripts.

pub mod agents;
pub mod discrete;
pub mod game;
pub mod random_turn;
pub mod referee;
pub mod richman;
pub mod transcript;
pub mod value;

pub use discrete::{
    discrete_optimal_actions, discrete_threshold, optimal_first_moves, resolve_bids, safe_bids, solve_discrete, Advice,
    Bid, BidError, ChipState, DiscreteState, DiscreteTable, DrawPolicy, Pile,
};
pub use game::{AnyGame, AnyPosition, Game, GameError, Move, Outcome, Player};
pub use random_turn::{solve_random_turn, verify_richman_theorem, ProbabilityTable, TheoremReport};
pub use referee::{parse_script, run_match, Commit, MatchError, Phase, Referee, ScriptRound, ScriptedSeat};
pub use richman::{optimal_bid, richman_winner, solve_richman, SolveError, ValueTable};
pub use transcript::{verify_transcript, EndReason, MatchConfig, MatchEnd, Round, Transcript, VerifyReport};
pub use value::Ratio;
