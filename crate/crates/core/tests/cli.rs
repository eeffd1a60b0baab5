//! End-to-end tests of the `anm` binary: every exit status, the documented
//! examples, replay, user strategies from files, and output determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn anm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anm")).args(args).output().expect("the binary runs")
}

fn status(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", stdout(out)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Arthur declaring 0 at once, whatever Merlin says.
const DECLARE_ZERO: &str = "# declare 0 immediately\nli r1 1\nli r2 0\npair r0 r1 r2\nhalt r0\n";

#[test]
fn omega_to_bit_wins_at_universe_eight() {
    let out = anm(&["--format", "json", "verify", "--witness", "omega_to_bit", "--universe", "8"]);
    assert_eq!(status(&out), 0, "{}", stdout(&out));
    assert_eq!(json(&out)["verdict"], "Win");
}

#[test]
fn exhausted_depth_is_unknown() {
    let out = anm(&["verify", "--witness", "omega_to_bit", "--universe", "8", "--depth", "8"]);
    assert_eq!(status(&out), 3, "{}", stdout(&out));
}

#[test]
fn decide_classifies_the_evens_and_odds_fixture() {
    let out = anm(&["--format", "json", "decide", "--pair", "2,5"]);
    assert_eq!(status(&out), 0);
    assert_eq!(json(&out)["verdict"], "InPxQ");
    let out = anm(&["--format", "json", "decide", "--pair", "5,2"]);
    assert_eq!(status(&out), 0);
    assert_eq!(json(&out)["verdict"], "InQxP");
}

#[test]
fn decide_without_fragments_is_unknown() {
    let out = anm(&["decide", "--pair", "2,5", "--fragment-max", "0"]);
    assert_eq!(status(&out), 3, "{}", stdout(&out));
}

#[test]
fn decide_reads_a_decoding_oracle() {
    let dir = TempDir::new().unwrap();
    let oracle = write(&dir, "d.json", r#"{"level": "T1", "domain_size": 4, "table": [0, 1, 0, 1]}"#);
    let out = anm(&["--format", "json", "decide", "--pair", "3,2", "--oracle", s(&oracle)]);
    assert_eq!(status(&out), 0, "{}", stdout(&out));
    assert_eq!(json(&out)["verdict"], "InQxP");
}

#[test]
fn frame_cot_prints_both_tables_and_agreement() {
    let out = anm(&["--format", "json", "frame", "--op", "cot", "--method", "both"]);
    assert_eq!(status(&out), 0, "{}", stdout(&out));
    let text = anm(&["frame", "--op", "cot", "--method", "both"]);
    assert!(stdout(&text).contains("agree: true"), "{}", stdout(&text));
}

#[test]
fn frame_check_is_seeded() {
    let a = anm(&["--format", "json", "frame", "--op", "check", "--fixture", "boolean:3", "--seed", "7"]);
    let b = anm(&["--format", "json", "frame", "--op", "check", "--fixture", "boolean:3", "--seed", "7"]);
    assert_eq!(status(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn a_non_nucleus_fails_the_check() {
    let out = anm(&["frame", "--op", "is-nucleus", "--fixture", "five", "--j", "0,4,2,3,4"]);
    assert_eq!(status(&out), 2);
    assert!(stdout(&out).contains("meet"), "{}", stdout(&out));
    let ok = anm(&["frame", "--op", "is-nucleus", "--fixture", "sierpinski", "--j", "0,2,2"]);
    assert_eq!(status(&ok), 0);
}

#[test]
fn frames_load_from_files() {
    let dir = TempDir::new().unwrap();
    // down-sets of the two-point chain: the three-element chain
    let frame = write(&dir, "f.json", r#"{"poset": [[], [0]]}"#);
    let out = anm(&["--format", "json", "frame", "--op", "nuclei", "--frame", s(&frame)]);
    assert_eq!(status(&out), 0, "{}", stdout(&out));
    let report = json(&out);
    assert_eq!(report["frame"]["elements"], 3);
    assert_eq!(report["count"], 4);
}

#[test]
fn user_strategies_win_and_lose() {
    let dir = TempDir::new().unwrap();
    let zeros = write(&dir, "zeros.json", r#"{"level": "T0", "domain_size": 2, "table": [0, 0]}"#);
    let bits = write(&dir, "bits.json", r#"{"level": "T0", "domain_size": 2, "table": [0, 1]}"#);
    let arthur = write(&dir, "arthur.txt", DECLARE_ZERO);
    let win = anm(&["verify", "--oracle", s(&zeros), "--oracle", s(&bits), "--arthur", s(&arthur)]);
    assert_eq!(status(&win), 0, "{}", stdout(&win));
    let lose = anm(&["verify", "--oracle", s(&bits), "--oracle", s(&bits), "--arthur", s(&arthur)]);
    assert_eq!(status(&lose), 2, "{}", stdout(&lose));
    assert!(stdout(&lose).contains("Lose"));
}

#[test]
fn programs_may_be_given_by_code() {
    let dir = TempDir::new().unwrap();
    let zeros = write(&dir, "zeros.json", r#"{"level": "T0", "domain_size": 2, "table": [0, 0]}"#);
    let program = anm_core::vm::asm::parse(DECLARE_ZERO).unwrap();
    let arthur = write(&dir, "arthur.code", &program.code().to_string());
    let out = anm(&["verify", "--oracle", s(&zeros), "--oracle", s(&zeros), "--arthur", s(&arthur)]);
    assert_eq!(status(&out), 0, "{}", stdout(&out));
}

#[test]
fn recorded_plays_replay() {
    let dir = TempDir::new().unwrap();
    let trace = dir.path().join("trace.json");
    let out = anm(&["verify", "--witness", "omega_to_bit", "--universe", "5", "--trace", s(&trace)]);
    assert_eq!(status(&out), 0);
    let replay =
        anm(&["--format", "json", "play", "--witness", "omega_to_bit", "--universe", "5", "--trace", s(&trace)]);
    assert_eq!(status(&replay), 0, "{}", stdout(&replay));
    let report = json(&replay);
    assert_eq!(report["matches_recording"], true);
    assert_eq!(report["verdict"], "Win");
}

#[test]
fn counterexamples_are_written_and_replay_as_losses() {
    let dir = TempDir::new().unwrap();
    let bits = write(&dir, "bits.json", r#"{"level": "T0", "domain_size": 2, "table": [0, 1]}"#);
    let arthur = write(&dir, "arthur.txt", DECLARE_ZERO);
    let trace = dir.path().join("lose.json");
    let args = ["--oracle", s(&bits), "--oracle", s(&bits), "--arthur", s(&arthur)];
    let out = anm(&[&["verify"], &args[..], &["--trace", s(&trace)]].concat());
    assert_eq!(status(&out), 2);
    let replay = anm(&[&["--format", "json", "play"], &args[..], &["--trace", s(&trace)]].concat());
    assert_eq!(status(&replay), 2, "{}", stdout(&replay));
    assert_eq!(json(&replay)["matches_recording"], true);
}

#[test]
fn usage_and_file_errors_exit_one() {
    assert_eq!(status(&anm(&["verify", "--no-such-flag"])), 1);
    assert_eq!(status(&anm(&["decide", "--pair", "2"])), 1);
    assert_eq!(status(&anm(&["verify", "--witness", "no_such_witness"])), 1);
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\"level\": \"T0\",\n \"table\": [0,");
    let arthur = write(&dir, "arthur.txt", DECLARE_ZERO);
    let out = anm(&["verify", "--oracle", s(&bad), "--oracle", s(&bad), "--arthur", s(&arthur)]);
    assert_eq!(status(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json") && err.contains("line 2"), "{err}");
}

#[test]
fn json_reports_are_deterministic() {
    let runs: [&[&str]; 5] = [
        &["--format", "json", "verify", "--witness", "bit_to_omega", "--universe", "4"],
        &["--format", "json", "decide", "--pair", "4,7"],
        &["--format", "json", "frame", "--op", "nuclei", "--fixture", "chain:4"],
        &["--format", "json", "frame", "--op", "cot", "--fixture", "boolean:2"],
        &["--format", "json", "registry", "--universe", "4"],
    ];
    for args in runs {
        let (a, b) = (anm(args), anm(args));
        assert_eq!(status(&a), 0, "{args:?}: {}", stdout(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        json(&a);
    }
}

#[test]
fn registry_lists_provenance() {
    let out = anm(&["registry"]);
    assert_eq!(status(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("omega_to_bit") && text.contains("bit_to_omega"), "{text}");
}
