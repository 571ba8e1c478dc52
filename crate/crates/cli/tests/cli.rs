use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn hypb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypb")).args(args).env_remove("HYPB_SEED").output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.trim().lines().count(), 1, "one JSON document expected: {text}");
    serde_json::from_str(text.trim()).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hypb-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn triangle_is_rigid() {
    let out = hypb(&["classify", "--polygon", &data("triangle_237.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out), json!({ "verdict": "rigid", "reason": "triangle_tile" }));
}

#[test]
fn immediate_repeat_is_not_realizable() {
    let out = hypb(&["realize", "--polygon", &data("right_pentagon.json"), "--word", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out), json!({ "result": "no", "reason": "immediate_repeat" }));
}

#[test]
fn compare_is_byte_identical_for_a_seed() {
    let args = [
        "compare",
        "--p1",
        &data("right_pentagon_a.json"),
        "--p2",
        &data("right_pentagon_b.json"),
        "--samples",
        "20",
        "--len",
        "15",
        "--seed",
        "7",
    ];
    let (a, b) = (hypb(&args), hypb(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["one_sided_total"], json!(0));
}

#[test]
fn seed_falls_back_to_the_environment() {
    let base = ["compare", "--p1", &data("third_pentagon.json"), "--p2", &data("third_pentagon_b.json")];
    let run = |extra: &[&str], env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_hypb"));
        c.args(base).args(["--samples", "10", "--len", "12", "--diagonal-len", "0"]).args(extra);
        match env {
            Some(s) => c.env("HYPB_SEED", s),
            None => c.env_remove("HYPB_SEED"),
        };
        c.output().unwrap().stdout
    };
    assert_eq!(run(&["--seed", "3"], None), run(&[], Some("3")));
    assert_ne!(run(&["--seed", "3"], None), run(&["--seed", "4"], None));
}

#[test]
fn svg_does_not_change_the_report() {
    let svg = scratch("walk.svg");
    let poly = data("right_pentagon.json");
    let base = ["simulate", "--polygon", poly.as_str(), "--start", "0.1,-0.05", "--dir", "0.7", "--bounces", "12"];
    let plain = hypb(&base);
    let mut with_svg = base.to_vec();
    with_svg.extend(["--svg", svg.to_str().unwrap()]);
    let drawn = hypb(&with_svg);
    assert_eq!(plain.status.code(), Some(0));
    assert_eq!(plain.stdout, drawn.stdout);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml") && text.contains("<svg") && !text.contains("NaN"));

    let tile_svg = scratch("tile.svg");
    let a = hypb(&["tile", "--polygon", &poly]);
    let b = hypb(&["tile", "--polygon", &poly, "--svg", tile_svg.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    assert!(tile_svg.exists());
}

#[test]
fn input_errors_exit_with_one() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    for args in [
        vec!["classify", "--polygon", bad.to_str().unwrap()],
        vec!["classify", "--polygon", "/nonexistent/polygon.json"],
        vec!["realize", "--polygon", &data("right_pentagon.json"), "--word", "1,x"],
        vec!["realize", "--polygon", &data("right_pentagon.json"), "--word", "1,9"],
        vec!["polygon", "regular", "--n", "4", "--angle", "1/2"],
        vec!["cone", "orbifold-area", "--genus", "0", "--orders", "2,3,6"],
        vec!["frobnicate"],
    ] {
        let out = hypb(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let v = report(&out);
        assert!(v["error"]["kind"].is_string() && v["error"]["message"].is_string(), "{v}");
    }
}

#[test]
fn cover_commands() {
    let good = data("octagon_cover.json");
    let out = hypb(&["cone", "check-cover", "--data", &good]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["valid"], json!(true));

    let out = hypb(&["cone", "bound", "--data", &good]);
    let v = report(&out);
    assert_eq!((v["k"].clone(), v["rhs"].clone(), v["bound"].clone(), v["holds"].clone()), (json!(1), json!("32/3"), json!(32), json!(true)));

    let corrupt = scratch("cover.json");
    let text = std::fs::read_to_string(&good).unwrap().replace("\"degree\": 4", "\"degree\": 5");
    std::fs::write(&corrupt, text).unwrap();
    let out = hypb(&["cone", "check-cover", "--data", corrupt.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["valid"], json!(false));
    assert!(!v["failures"].as_array().unwrap().is_empty());
    assert_eq!(hypb(&["cone", "bound", "--data", corrupt.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn areas_are_exact_multiples_of_pi() {
    let v = report(&hypb(&["cone", "orbifold-area", "--genus", "0", "--orders", "2,3,7"]));
    assert_eq!(v["area"]["pi_multiple"], json!("1/21"));
    let v = report(&hypb(&["cone", "double", "--polygon", &data("right_pentagon.json")]));
    assert_eq!(v["area"]["pi_multiple"], json!("1"));
    let v = report(&hypb(&["cone", "area", "--genus", "2", "--angles", "4pi"]));
    assert_eq!(v["area"]["pi_multiple"], json!("2"));
}

#[test]
fn generated_polygons_round_trip() {
    let out = hypb(&["polygon", "regular", "--n", "6", "--angle", "1/3"]);
    assert_eq!(out.status.code(), Some(0));
    let file = scratch("hex.json");
    std::fs::write(&file, &out.stdout).unwrap();
    let v = report(&hypb(&["polygon", "validate", "--polygon", file.to_str().unwrap()]));
    assert_eq!(v["valid"], json!(true));
    let v = report(&hypb(&["polygon", "area", "--polygon", file.to_str().unwrap()]));
    assert!((v["area"].as_f64().unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn words_and_diagonals() {
    let poly = data("right_pentagon.json");
    let v = report(&hypb(&["realize", "--polygon", &poly, "--word", "1,3,5"]));
    assert_eq!(v["result"], json!("yes"));
    assert!(v["witness"]["chord"]["a"].is_array());
    let v = report(&hypb(&["grammar", "--polygon", &poly, "--word", "1,3,1,3"]));
    assert!(v["result"].is_string());
    let all = report(&hypb(&["diagonals", "--polygon", &poly, "--max-len", "2"]));
    let words = all["words"].as_array().unwrap();
    assert_eq!(all["count"].as_u64().unwrap() as usize, words.len());
    for w in words {
        let v = report(&hypb(&["diagonal", "--polygon", &poly, "--word", w.as_str().unwrap()]));
        assert_eq!(v["result"], json!("yes"), "{w}");
    }
}
