use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/paper")
}

fn stretchkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stretchkit"))
        .current_dir(fixture_root())
        .env_remove("STRETCHKIT_SEED")
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).unwrap()
}

#[test]
fn fixtures_reproduce() {
    let cases = read_json(&fixture_root().join("cases.json"));
    let cases = cases.as_array().expect("case list");
    assert!(cases.len() >= 30, "only {} cases", cases.len());

    let mut failures = Vec::new();
    for case in cases {
        let name = case["name"].as_str().unwrap();
        let args: Vec<&str> = case["args"].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
        let want_exit = case["exit"].as_i64().unwrap() as i32;
        let out = stretchkit(&args);
        let code = out.status.code().unwrap_or(-1);
        if code != want_exit {
            failures.push(format!(
                "{name}: exit {code}, expected {want_exit}\n  stderr: {}",
                String::from_utf8_lossy(&out.stderr).trim()
            ));
            continue;
        }
        if code != 0 {
            if out.stderr.is_empty() {
                failures.push(format!("{name}: failed without a message"));
            }
            continue;
        }
        let Some(expected) = case["expected"].as_str() else { continue };
        let want = read_json(&fixture_root().join(expected));
        let got: Value = match serde_json::from_slice(&out.stdout) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("{name}: stdout is not JSON: {e}"));
                continue;
            }
        };
        if got != want {
            failures.push(format!("{name}: output differs\n  got:  {got}\n  want: {want}"));
        }
    }
    assert!(failures.is_empty(), "{} failing case(s):\n{}", failures.len(), failures.join("\n"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["convolve", "--left", "inputs/ab_tensor.json", "--right", "inputs/cd_tensor.json", "--map", "inputs/map_k11.json"];
    let (a, b) = (stretchkit(&args), stretchkit(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let suite = ["verify", "permutation", "--trials", "5", "--seed", "9"];
    assert_eq!(stretchkit(&suite).stdout, stretchkit(&suite).stdout);
}

#[test]
fn permuting_matches_stretching_reversed_factors() {
    let permuted = stretchkit(&["permute", "--tensor", "inputs/tp3_tensor.json", "--map", "inputs/map_mixed_radix.json", "--sigma", "3,2,1"]);
    let direct = stretchkit(&["stretch", "--tensor", "inputs/tp3_reversed_tensor.json", "--map", "inputs/map_mixed_radix.json"]);
    assert!(permuted.status.success() && direct.status.success());
    assert_eq!(permuted.stdout, direct.stdout);
}

#[test]
fn averaging_with_an_injective_map_reserializes_the_input() {
    let out = stretchkit(&["average", "--tensor", "inputs/ab_tensor.json", "--map", "inputs/map_mixed_radix.json"]);
    assert!(out.status.success());
    let input = read_json(&fixture_root().join("inputs/ab_tensor.json"));
    let reserialized = stretchkit::json::render(&input);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), reserialized);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("stretched.json");
    let out = stretchkit(&[
        "stretch",
        "--tensor",
        "inputs/ab_tensor.json",
        "--map",
        "inputs/map_k11.json",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = read_json(&target);
    assert_eq!(written, read_json(&fixture_root().join("expected/k11_stretch.json")));
}

#[test]
fn pretty_prints_a_labeled_table() {
    let out = stretchkit(&["stretch", "--tensor", "inputs/ab_tensor.json", "--map", "inputs/map_k1m1.json", "--pretty"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].split_whitespace().eq(["-1", "0", "1"]));
    assert!(lines[2].split_whitespace().eq(["0", "30", "70", "38"]), "{text}");
}

#[test]
fn seed_defaults_from_the_environment() {
    let run = |seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_stretchkit"));
        cmd.args(["verify", "homomorphism", "--trials", "2"]).env_remove("STRETCHKIT_SEED");
        if let Some(s) = seed {
            cmd.env("STRETCHKIT_SEED", s);
        }
        let out = cmd.output().unwrap();
        assert!(out.status.success());
        serde_json::from_slice::<Value>(&out.stdout).unwrap()["seed"].clone()
    };
    assert_eq!(run(None), 0);
    assert_eq!(run(Some("42")), 42);
}

#[test]
fn verify_suites_pass_from_the_command_line() {
    for (suite, trials) in [("homomorphism", "20"), ("averaging", "12"), ("jordan", "0"), ("tp-witness", "5")] {
        let out = stretchkit(&["verify", suite, "--trials", trials, "--seed", "7"]);
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(out.status.success(), "{report}");
        assert_eq!(report["failed"], 0);
    }
}
