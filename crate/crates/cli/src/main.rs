//! `bidding`: solve bidding games, build discrete tables, run and check
//! matches, and serve matches over HTTP.
//!
//! Exit status: 0 success, 1 a check failed, 2 bad usage or input.

mod matches;

use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use bidding_core::discrete::solve_discrete_limited;
use bidding_core::game::DagOptions;
use bidding_core::richman::solve_richman_limited;
use bidding_core::value::{self, format_ratio, in_unit_interval, parse_ratio};
use bidding_core::{
    optimal_bid, optimal_first_moves, solve_random_turn, verify_richman_theorem, verify_transcript, AnyGame,
    ChipState, DiscreteState, DrawPolicy, Game, Player, Transcript,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bidding", version, about = "Richman and discrete bidding games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve continuous Richman values and optionally check them against
    /// random-turn play.
    Solve(SolveArgs),
    /// Solve discrete chip bidding for one or more chip totals.
    Discrete(DiscreteArgs),
    /// Play agent or scripted matches.
    Match(matches::MatchArgs),
    /// Replay a transcript and check every round.
    Verify(VerifyArgs),
    /// Run the HTTP match server.
    Serve(ServeArgs),
}

#[derive(Args)]
struct GameArgs {
    /// `ttt`, `hex:<n>` or `dag:<path>`.
    #[arg(long)]
    game: String,
    /// Accept DAG nodes where a player has no move.
    #[arg(long)]
    allow_stuck: bool,
    /// Give up on games with more reachable positions than this.
    #[arg(long, default_value_t = 2_000_000)]
    max_positions: usize,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Value of a draw to the threshold, as `num/den`.
    #[arg(long, default_value = "1/2")]
    draw_value: String,
    /// Write `value` lines here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write random-turn `prob` lines here.
    #[arg(long)]
    probabilities: Option<PathBuf>,
    /// Check R = 1 - P and the optimal move sets at every position.
    #[arg(long)]
    verify_theorem: bool,
}

#[derive(Args)]
struct DiscreteArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Chips in play.
    #[arg(long)]
    total: Option<u64>,
    /// `draw_is_bob_win` or `draw_is_alice_win`.
    #[arg(long, default_value = "draw_is_bob_win")]
    draw_policy: String,
    /// Write the full `dwin` table here.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write `dthresh` lines here.
    #[arg(long)]
    thresholds: Option<PathBuf>,
    /// Print the winner's optimal first moves at the split
    /// ceil(N/2)* / floor(N/2) for each listed total.
    #[arg(long, value_delimiter = ',')]
    first_moves: Vec<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    transcript: PathBuf,
    /// Game to replay against, overriding the transcript header.
    #[arg(long)]
    game: Option<String>,
    #[arg(long)]
    allow_stuck: bool,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, env = "BIDDING_LISTEN", default_value = "127.0.0.1:8080")]
    listen: SocketAddr,
    #[arg(long, env = "BIDDING_TRANSCRIPT_DIR", default_value = "transcripts")]
    transcript_dir: PathBuf,
    /// Seconds a human seat has per action before forfeiting.
    #[arg(long, env = "BIDDING_TIMEOUT", default_value_t = 120)]
    timeout: u64,
    /// Directory of `.dag` files offered as `dag:<name>`.
    #[arg(long, env = "BIDDING_DAG_DIR")]
    dag_dir: Option<PathBuf>,
}

pub enum Failure {
    Usage(String),
    Check(String),
}

pub type Run = Result<(), Failure>;

pub fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

pub fn load_game(spec: &str, allow_stuck: bool) -> Result<AnyGame, Failure> {
    AnyGame::from_spec(spec, DagOptions { allow_stuck }).map_err(usage)
}

/// Writes to `path`, or stdout when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> Run {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn parse_policy(s: &str) -> Result<DrawPolicy, Failure> {
    s.parse().map_err(|_| usage(format!("unknown draw policy `{s}`")))
}

fn solve(a: SolveArgs) -> Run {
    let game = load_game(&a.game.game, a.game.allow_stuck)?;
    let draw_value = parse_ratio(&a.draw_value)
        .ok()
        .filter(in_unit_interval)
        .ok_or_else(|| usage(format!("draw value `{}` is not a fraction in [0, 1]", a.draw_value)))?;
    let table = solve_richman_limited(&game, &draw_value, a.game.max_positions).map_err(usage)?;
    emit(a.output.as_deref(), &table.export(&game))?;
    let root = game.initial();
    let e = table.get(&root).expect("initial position solved");
    let bid = optimal_bid(&table, &root).map_or_else(|_| "-".to_string(), |b| format_ratio(&b));
    eprintln!(
        "{} positions {} root R {} R+ {} R- {} bid {} alice [{}] bob [{}]",
        game.id(),
        table.len(),
        format_ratio(&e.value),
        format_ratio(&e.plus),
        format_ratio(&e.minus),
        bid,
        e.alice_optimal.join(" "),
        e.bob_optimal.join(" ")
    );
    if let Some(path) = &a.probabilities {
        let probs = solve_random_turn(&game, &(value::one() - &draw_value)).map_err(usage)?;
        emit(Some(path), &probs.export(&game))?;
    }
    if a.verify_theorem {
        let report = verify_richman_theorem(&game, &draw_value).map_err(usage)?;
        print!("{}", report.render(true));
        if !report.passed() {
            return Err(Failure::Check(format!("R = 1 - P fails on {}", game.id())));
        }
    }
    Ok(())
}

fn discrete(a: DiscreteArgs) -> Run {
    let game = load_game(&a.game.game, a.game.allow_stuck)?;
    let policy = parse_policy(&a.draw_policy)?;
    if a.total.is_none() && a.first_moves.is_empty() {
        return Err(usage("give --total, --first-moves or both"));
    }
    let root = game.initial();
    if let Some(total) = a.total {
        let table = solve_discrete_limited(&game, total, policy, a.game.max_positions).map_err(usage)?;
        let enc = game.encode(&root);
        for alice in 0..=total {
            for star in Player::BOTH {
                let w = table
                    .winner(&root, ChipState::new(alice, total - alice, star))
                    .map_err(usage)?;
                println!("dwin {enc} {alice} {} {}", star.letter(), w.letter());
            }
        }
        let t = table.threshold(&root).map_err(usage)?;
        println!("dthresh {enc} {total} {}", t.map_or_else(|| "none".to_string(), |p| p.to_string()));
        if let Some(path) = &a.output {
            emit(Some(path), &table.export(&game))?;
        }
        if let Some(path) = &a.thresholds {
            emit(Some(path), &table.export_thresholds(&game))?;
        }
    }
    for &total in &a.first_moves {
        let table = solve_discrete_limited(&game, total, policy, a.game.max_positions).map_err(usage)?;
        let state = DiscreteState {
            position: root,
            chips: ChipState::new(total - total / 2, total / 2, Player::Alice),
        };
        let w = table.winner(&root, state.chips).map_err(usage)?;
        let moves = optimal_first_moves(&game, &table, &state, w).map_err(usage)?;
        println!(
            "first-moves {} total {total} chips {} winner {} moves {}",
            game.id(),
            state.chips,
            w.letter(),
            moves.join(" ")
        );
    }
    Ok(())
}

/// Resolves a relative `dag:` path against the transcript's directory first.
fn transcript_game(t: &Transcript, file: &Path, allow_stuck: bool) -> Result<AnyGame, Failure> {
    let spec = &t.config.game;
    if let Some(path) = spec.strip_prefix("dag:") {
        let beside = file.parent().unwrap_or(Path::new(".")).join(path);
        if Path::new(path).is_relative() && beside.is_file() {
            return load_game(&format!("dag:{}", beside.display()), allow_stuck);
        }
    }
    load_game(spec, allow_stuck)
}

pub fn verify_file(file: &Path, game: Option<&str>, allow_stuck: bool) -> Run {
    let text = fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let t = match Transcript::parse(&text) {
        Ok(t) => t,
        Err(e) => {
            println!("FAIL {e}");
            return Err(Failure::Check(format!("{} does not parse", file.display())));
        }
    };
    let game = match game {
        Some(spec) => load_game(spec, allow_stuck)?,
        None => transcript_game(&t, file, allow_stuck)?,
    };
    let report = verify_transcript(&game, &t);
    println!("{report}");
    if report.passed() {
        println!("ledger {}", t.ledger().join(" "));
        Ok(())
    } else {
        Err(Failure::Check(format!("{} failed verification", file.display())))
    }
}

fn serve(a: ServeArgs) -> Run {
    let config = bidding_server::ServerConfig {
        listen: a.listen,
        transcript_dir: a.transcript_dir,
        timeout: Duration::from_secs(a.timeout),
        dag_dir: a.dag_dir,
        sequential_ids: false,
    };
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(usage)?;
    runtime.block_on(bidding_server::serve(config)).map_err(usage)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Discrete(a) => discrete(a),
        Command::Match(a) => matches::run(a),
        Command::Verify(a) => verify_file(&a.transcript, a.game.as_deref(), a.allow_stuck),
        Command::Serve(a) => serve(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("bidding: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("bidding: {m}");
            ExitCode::from(2)
        }
    }
}
