use std::fs;
use std::path::PathBuf;

use bidding_core::agents::{build_agent, Agent, AgentSpec, SolvedTables};
use bidding_core::{
    parse_script, run_match, AnyGame, DrawPolicy, EndReason, MatchConfig, Player, ScriptRound, ScriptedSeat,
    Transcript,
};
use clap::Args;

use crate::{emit, load_game, parse_policy, usage, verify_file, Failure, Run};

#[derive(Args)]
pub struct MatchArgs {
    /// `ttt`, `hex:<n>` or `dag:<path>`.
    #[arg(long, required_unless_present = "replay")]
    game: Option<String>,
    #[arg(long)]
    allow_stuck: bool,
    /// Alice's seat: an agent spec or `script`.
    #[arg(long)]
    alice: Option<String>,
    /// Bob's seat: an agent spec or `script`.
    #[arg(long)]
    bob: Option<String>,
    #[arg(long, default_value_t = 100)]
    alice_chips: u64,
    #[arg(long, default_value_t = 100)]
    bob_chips: u64,
    /// Holder of the tiebreak chip.
    #[arg(long, default_value = "A")]
    star: String,
    #[arg(long, default_value = "draw_is_bob_win")]
    draw_policy: String,
    /// Alice's agent uses this seed, Bob's the next one.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `bidA <bid> bidB <bid> move <label>` lines for `script` seats. Seats
    /// default to `script` when given.
    #[arg(long)]
    script: Option<PathBuf>,
    /// Write the transcript here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Play this many matches on consecutive seeds and print a summary.
    #[arg(long)]
    matches: Option<u64>,
    /// In a series, swap the two seats on every other seed.
    #[arg(long)]
    alternate: bool,
    /// Round robin between these agent specs; every pair plays `--matches`
    /// games (default 10) with alternating seats.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["alice", "bob", "script"])]
    round_robin: Vec<String>,
    /// Save each series transcript as `<seed>.transcript` in this directory.
    #[arg(long)]
    transcripts: Option<PathBuf>,
    /// Check a transcript instead of playing.
    #[arg(long, conflicts_with_all = ["script", "matches", "round_robin"])]
    replay: Option<PathBuf>,
}

struct Setup {
    game: AnyGame,
    base: MatchConfig,
    script: Option<Vec<ScriptRound>>,
    tables: SolvedTables,
}

impl Setup {
    fn config(&self, alice: &str, bob: &str, seed: u64) -> MatchConfig {
        MatchConfig {
            alice_seat: alice.to_string(),
            bob_seat: bob.to_string(),
            seed,
            ..self.base.clone()
        }
    }

    fn seat(&self, config: &MatchConfig, p: Player) -> Result<Box<dyn Agent<AnyGame> + Send>, Failure> {
        let spec = config.seat(p);
        match spec {
            "script" => {
                let rounds = self.script.clone().ok_or_else(|| usage("a `script` seat needs --script"))?;
                Ok(Box::new(ScriptedSeat::new(p, rounds)))
            }
            "human" => Err(usage("human seats play through `bidding serve`")),
            _ => {
                let agent: AgentSpec = spec.parse().map_err(|e| usage(format!("seat {p}: {e}")))?;
                let seed = match p {
                    Player::Alice => config.seed,
                    Player::Bob => config.seed.wrapping_add(1),
                };
                let total = config.alice_chips + config.bob_chips;
                build_agent(agent, &self.game, total, config.draw_policy, seed, &self.tables)
                    .map_err(|e| usage(format!("seat {p}: {e}")))
            }
        }
    }

    fn play(&self, config: MatchConfig) -> Result<Transcript, Failure> {
        let mut alice = self.seat(&config, Player::Alice)?;
        let mut bob = self.seat(&config, Player::Bob)?;
        Ok(run_match(self.game.clone(), config, &mut alice, &mut bob))
    }

    fn save(&self, dir: Option<&PathBuf>, seed: u64, t: &Transcript) -> Run {
        if let Some(dir) = dir {
            fs::create_dir_all(dir).map_err(usage)?;
            let path = dir.join(format!("{seed}.transcript"));
            fs::write(&path, t.to_string()).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }
}

fn result_line(t: &Transcript, policy: DrawPolicy) -> String {
    let end = t.end.expect("finished match");
    let reason = match end.reason {
        EndReason::Terminal => "terminal".to_string(),
        EndReason::Stuck(p) => format!("stuck {}", p.letter()),
        EndReason::Forfeit(p) => format!("forfeit {}", p.letter()),
    };
    format!(
        "result {} {reason} winner {} rounds {} chips {}",
        end.outcome,
        end.winner(policy).letter(),
        t.rounds.len(),
        t.final_chips()
    )
}

/// Wins per seat label over a series.
struct Tally {
    labels: [String; 2],
    wins: [u64; 2],
    draws: u64,
    forfeits: u64,
    played: u64,
}

impl Tally {
    fn new(first: &str, second: &str) -> Self {
        Tally {
            labels: [first.to_string(), second.to_string()],
            wins: [0, 0],
            draws: 0,
            forfeits: 0,
            played: 0,
        }
    }

    /// `first_as` is the seat the first label played.
    fn add(&mut self, t: &Transcript, first_as: Player, policy: DrawPolicy) {
        let end = t.end.expect("finished match");
        self.played += 1;
        if end.outcome == bidding_core::Outcome::Draw {
            self.draws += 1;
        }
        if matches!(end.reason, EndReason::Forfeit(_)) {
            self.forfeits += 1;
        }
        let i = if end.winner(policy) == first_as { 0 } else { 1 };
        self.wins[i] += 1;
    }

    fn print(&self, game: &str) {
        let pct = |w: u64| 100.0 * w as f64 / self.played.max(1) as f64;
        println!(
            "series {game} matches {} draws {} forfeits {}",
            self.played, self.draws, self.forfeits
        );
        for i in 0..2 {
            println!("seat {} wins {} ({:.1}%)", self.labels[i], self.wins[i], pct(self.wins[i]));
        }
    }
}

pub fn run(a: MatchArgs) -> Run {
    if let Some(file) = &a.replay {
        return verify_file(file, a.game.as_deref(), a.allow_stuck);
    }
    let spec = a.game.clone().expect("clap requires --game");
    let game = load_game(&spec, a.allow_stuck)?;
    let script = match &a.script {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            Some(parse_script(&text).map_err(usage)?)
        }
        None => None,
    };
    let default_seat = if script.is_some() { "script" } else { "random" };
    let policy = parse_policy(&a.draw_policy)?;
    let star: Player = a.star.parse().map_err(|_| usage(format!("--star must be A or B, not `{}`", a.star)))?;
    let setup = Setup {
        game,
        base: MatchConfig {
            game: spec.clone(),
            alice_chips: a.alice_chips,
            bob_chips: a.bob_chips,
            star,
            draw_policy: policy,
            seed: a.seed,
            ..MatchConfig::default()
        },
        script,
        tables: SolvedTables::new(),
    };
    if !a.round_robin.is_empty() {
        return round_robin(&setup, &a, &spec);
    }
    let alice = a.alice.clone().unwrap_or_else(|| default_seat.to_string());
    let bob = a.bob.clone().unwrap_or_else(|| default_seat.to_string());

    let Some(n) = a.matches else {
        let t = setup.play(setup.config(&alice, &bob, a.seed))?;
        emit(a.output.as_deref(), &t.to_string())?;
        let summary = format!("{}\nledger {}", result_line(&t, policy), t.ledger().join(" "));
        if a.output.is_some() {
            println!("{summary}");
        } else {
            eprintln!("{summary}");
        }
        return Ok(());
    };
    let mut tally = Tally::new(&format!("{alice} (first)"), &format!("{bob} (second)"));
    for k in 0..n {
        let seed = a.seed.wrapping_add(k);
        let swap = a.alternate && k % 2 == 1;
        let (x, y, first_as) = if swap {
            (&bob, &alice, Player::Bob)
        } else {
            (&alice, &bob, Player::Alice)
        };
        let t = setup.play(setup.config(x, y, seed))?;
        setup.save(a.transcripts.as_ref(), seed, &t)?;
        tally.add(&t, first_as, policy);
    }
    tally.print(&spec);
    Ok(())
}

fn round_robin(setup: &Setup, a: &MatchArgs, spec: &str) -> Run {
    let seats = &a.round_robin;
    if seats.len() < 2 {
        return Err(usage("--round-robin needs at least two agent specs"));
    }
    let n = a.matches.unwrap_or(10);
    let mut totals = vec![0u64; seats.len()];
    let mut played = vec![0u64; seats.len()];
    let mut seed = a.seed;
    for i in 0..seats.len() {
        for j in i + 1..seats.len() {
            let mut tally = Tally::new(&seats[i], &seats[j]);
            for k in 0..n {
                let (x, y, first_as) = if k % 2 == 0 {
                    (&seats[i], &seats[j], Player::Alice)
                } else {
                    (&seats[j], &seats[i], Player::Bob)
                };
                let t = setup.play(setup.config(x, y, seed))?;
                setup.save(a.transcripts.as_ref(), seed, &t)?;
                tally.add(&t, first_as, setup.base.draw_policy);
                seed = seed.wrapping_add(1);
            }
            println!("pair {} vs {}: {} - {}", seats[i], seats[j], tally.wins[0], tally.wins[1]);
            totals[i] += tally.wins[0];
            totals[j] += tally.wins[1];
            played[i] += n;
            played[j] += n;
        }
    }
    println!("round-robin {spec} games per pair {n}");
    let mut order: Vec<usize> = (0..seats.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(totals[i]));
    for i in order {
        println!("standing {} wins {} of {}", seats[i], totals[i], played[i]);
    }
    Ok(())
}
