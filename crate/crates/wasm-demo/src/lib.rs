//! Browser bindings. Every export takes plain strings and numbers and returns
//! a JSON string; failures come back as `{"error": "..."}`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use bidding_core::agents::estimate_pivotal;
use bidding_core::game::{DagOptions, Hex};
use bidding_core::value::{format_ratio, in_unit_interval, parse_ratio, to_f64};
use bidding_core::{optimal_bid, resolve_bids, solve_richman, AnyGame, AnyPosition, Bid, ChipState, Game, ValueTable};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

/// Largest board the explorer solves exactly.
const EXPLORABLE: [&str; 3] = ["ttt", "hex:2", "hex:3"];

type Table = Rc<ValueTable<AnyPosition>>;

thread_local! {
    static TABLES: RefCell<HashMap<(String, String), Table>> = RefCell::new(HashMap::new());
}

fn reply(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn table(game: &AnyGame, spec: &str, draw: &str) -> Result<Table, String> {
    let key = (spec.to_string(), draw.to_string());
    if let Some(t) = TABLES.with(|c| c.borrow().get(&key).cloned()) {
        return Ok(t);
    }
    let dv = parse_ratio(draw)
        .ok()
        .filter(in_unit_interval)
        .ok_or_else(|| format!("draw value `{draw}` is not a fraction in [0, 1]"))?;
    let t = Rc::new(solve_richman(game, &dv).map_err(|e| e.to_string())?);
    TABLES.with(|c| c.borrow_mut().insert(key, t.clone()));
    Ok(t)
}

fn ratio_json(r: &bidding_core::Ratio) -> Value {
    json!({ "exact": format_ratio(r), "approx": to_f64(r) })
}

fn explore_inner(spec: &str, position: &str, draw: &str) -> Result<Value, String> {
    if !EXPLORABLE.contains(&spec) {
        return Err(format!("explorer supports {}", EXPLORABLE.join(", ")));
    }
    let game = AnyGame::from_spec(spec, DagOptions::default()).map_err(|e| e.to_string())?;
    let t = table(&game, spec, draw)?;
    let pos = if position.is_empty() {
        game.initial()
    } else {
        game.decode(position).map_err(|e| e.to_string())?
    };
    let e = t
        .get(&pos)
        .ok_or_else(|| format!("`{position}` is not reachable in {spec}"))?;
    let children = |p: bidding_core::Player| -> Vec<Value> {
        game.legal_moves(&pos, p)
            .into_iter()
            .map(|m| {
                json!({
                    "label": m.label,
                    "position": game.encode(&m.to),
                    "value": t.value(&m.to).map(format_ratio),
                })
            })
            .collect()
    };
    Ok(json!({
        "game": spec,
        "position": game.encode(&pos),
        "outcome": game.outcome(&pos).as_str(),
        "value": ratio_json(&e.value),
        "plus": ratio_json(&e.plus),
        "minus": ratio_json(&e.minus),
        "bid": optimal_bid(&t, &pos).ok().map(|b| ratio_json(&b)),
        "alice_optimal": e.alice_optimal,
        "bob_optimal": e.bob_optimal,
        "alice_moves": children(bidding_core::Player::Alice),
        "bob_moves": children(bidding_core::Player::Bob),
        "positions": t.len(),
    }))
}

/// Richman value, threshold spread, optimal bid and optimal moves at
/// `position` (an encoding, or empty for the start) of `ttt`, `hex:2` or
/// `hex:3`. Draws count `draw_value` toward the threshold.
#[wasm_bindgen]
pub fn explore(game: &str, position: &str, draw_value: &str) -> String {
    reply(explore_inner(game, position, draw_value))
}

fn ledger_inner(start: &str, rounds: &str) -> Result<Value, String> {
    let mut chips: ChipState = start.trim().parse().map_err(|e: bidding_core::BidError| e.to_string())?;
    let mut rows = Vec::new();
    for (n, line) in rounds.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fail = |m: String| format!("line {}: {m}", n + 1);
        let [a, b] = line.split_whitespace().collect::<Vec<_>>()[..] else {
            return Err(fail("expected `<alice bid> <bob bid>`".into()));
        };
        let a: Bid = a.parse().map_err(|e: bidding_core::BidError| fail(e.to_string()))?;
        let b: Bid = b.parse().map_err(|e: bidding_core::BidError| fail(e.to_string()))?;
        let (winner, after) = resolve_bids(chips, a, b).map_err(|e| fail(e.to_string()))?;
        rows.push(json!({
            "round": rows.len() + 1,
            "alice_bid": a.to_string(),
            "bob_bid": b.to_string(),
            "winner": winner.letter().to_string(),
            "before": chips.to_string(),
            "chips": after.to_string(),
        }));
        chips = after;
    }
    Ok(json!({ "start": start.trim(), "rounds": rows, "final": chips.to_string() }))
}

/// Resolves sealed-bid rounds from the chip state `start`, written the way
/// transcripts write chips (Alice first, `*` on the tiebreak holder). Each line of
/// `rounds` is `<alice bid> <bob bid>`, a trailing `*` spending the tiebreak
/// chip.
#[wasm_bindgen]
pub fn ledger(start: &str, rounds: &str) -> String {
    reply(ledger_inner(start, rounds))
}

fn heatmap_inner(size: u32, position: &str, samples: u32, seed: u32) -> Result<Value, String> {
    let hex = Hex::new(size as usize).map_err(|e| e.to_string())?;
    let pos = if position.is_empty() {
        hex.initial()
    } else {
        hex.decode(position).map_err(|e| e.to_string())?
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
    let est = estimate_pivotal(&hex, &pos, samples, &mut rng).map_err(|e| e.to_string())?;
    let best = est.best_cell(hex.empty(&pos));
    Ok(json!({
        "size": size,
        "position": hex.encode(&pos),
        "samples": samples,
        "win_estimate": est.win_estimate,
        "pivotal": est.pivotal,
        "labels": (0..hex.cells()).map(|i| hex.cell_label(i)).collect::<Vec<_>>(),
        "best": best.map(|i| hex.cell_label(i)),
        "bid_fraction": best.map(|i| est.pivotal[i] / 2.0),
    }))
}

/// Monte Carlo pivotal probability of every empty cell of a `size`×`size`
/// Hex position, from `samples` random completions.
#[wasm_bindgen]
pub fn heatmap(size: u32, position: &str, samples: u32, seed: u32) -> String {
    reply(heatmap_inner(size, position, samples, seed))
}
