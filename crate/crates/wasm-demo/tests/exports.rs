use bidding_wasm::{explore, heatmap, ledger};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

fn strings(v: &Value) -> Vec<&str> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect()
}

#[test]
fn explorer_on_empty_two_by_two_hex() {
    let v = parse(explore("hex:2", "", "1/2"));
    assert_eq!(v["value"]["exact"], "1/2");
    assert_eq!(v["plus"]["exact"], "3/4");
    assert_eq!(v["minus"]["exact"], "1/4");
    assert_eq!(v["bid"]["exact"], "1/4");
    assert_eq!(v["bid"]["approx"], 0.25);
    assert_eq!(strings(&v["alice_optimal"]), ["b1", "a2"]);
    assert_eq!(strings(&v["bob_optimal"]), ["b1", "a2"]);
    assert_eq!(v["positions"], 79);
    assert_eq!(v["alice_moves"].as_array().unwrap().len(), 4);
}

#[test]
fn explorer_walks_tic_tac_toe() {
    let root = parse(explore("ttt", "", "1/2"));
    assert_eq!(root["value"]["exact"], "1/2");
    assert!(strings(&root["alice_optimal"]).contains(&"b2"));
    let centre = root["alice_moves"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["label"] == "b2")
        .unwrap();
    let next = parse(explore("ttt", centre["position"].as_str().unwrap(), "1/2"));
    assert_eq!(next["value"]["exact"], centre["value"]);
    assert_eq!(next["outcome"], "ongoing");

    for draw in ["0", "1"] {
        let v = parse(explore("ttt", "", draw));
        let expected = if draw == "0" { "123/256" } else { "133/256" };
        assert_eq!(v["value"]["exact"], expected);
    }
}

#[test]
fn explorer_rejects_bad_input() {
    for (game, pos, draw) in [("hex:5", "", "1/2"), ("chess", "", "1/2"), ("ttt", "", "2"), ("ttt", "garbage", "1/2")] {
        assert!(parse(explore(game, pos, draw))["error"].is_string(), "{game} {pos} {draw}");
    }
}

#[test]
fn ledger_reproduces_the_sample_game() {
    let v = parse(ledger("100*/100", "12 13\n11* 11\n15 9\n22 15\n65 65*\n25 30\n"));
    let chips: Vec<&str> = v["rounds"].as_array().unwrap().iter().map(|r| r["chips"].as_str().unwrap()).collect();
    assert_eq!(chips, ["113*/87", "102/98*", "87/113*", "65/135*", "130*/70", "160*/40"]);
    let winners: String = v["rounds"].as_array().unwrap().iter().map(|r| r["winner"].as_str().unwrap()).collect();
    assert_eq!(winners, "BAAABB");
    assert_eq!(v["final"], "160*/40");
}

#[test]
fn ledger_reports_the_bad_line() {
    let v = parse(ledger("10/10*", "3 4\n# comment\n15 0\n"));
    let e = v["error"].as_str().unwrap();
    assert!(e.starts_with("line 3:"), "{e}");
    assert!(parse(ledger("10/10", ""))["error"].is_string());
    assert!(parse(ledger("10/10*", "1 2 3"))["error"].is_string());
}

#[test]
fn heatmap_on_empty_two_by_two() {
    let a = heatmap(2, "", 10_000, 9);
    assert_eq!(a, heatmap(2, "", 10_000, 9));
    let v = parse(a);
    let p: Vec<f64> = v["pivotal"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let labels = strings(&v["labels"]);
    assert_eq!(labels, ["a1", "b1", "a2", "b2"]);
    for (label, x) in labels.iter().zip(&p) {
        let expected = if matches!(*label, "b1" | "a2") { 0.5 } else { 0.25 };
        assert!((x - expected).abs() < 0.03, "{label}: {x}");
    }
    assert!(matches!(v["best"].as_str(), Some("b1" | "a2")));
    assert!((v["win_estimate"].as_f64().unwrap() - 0.5).abs() < 0.03);
    assert!(parse(heatmap(12, "", 10, 0))["error"].is_string());
    assert!(parse(heatmap(3, "", 0, 0))["error"].is_string());
}
