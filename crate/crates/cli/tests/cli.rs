//! Command-line behavior: exit codes, output determinism, cache
//! transparency, and the documented JSON shapes.

use std::process::{Command, Output};

fn nilsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilsurf"))
        .args(args)
        .env_remove("NILSURF_CACHE")
        .output()
        .expect("binary runs")
}

fn nilsurf_with_cache(args: &[&str], cache_dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilsurf"))
        .args(args)
        .env("NILSURF_CACHE", cache_dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn dlens_table_output() {
    let out = nilsurf(&["dlens", "6", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0 5/4\n1 5/12\n2 -1/12\n3 -1/4\n4 -1/12\n5 5/12\n");
}

#[test]
fn dlens_single_label_and_json() {
    let out = nilsurf(&["dlens", "6", "5", "--label", "5"]);
    assert_eq!(stdout(&out), "-5/4\n");

    let out = nilsurf(&["dlens", "6", "5", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["p"], 6);
    assert_eq!(json["q"], 5);
    assert_eq!(json["d"][0], serde_json::json!(["-5", "12"]));
    assert_eq!(json["d"][5], serde_json::json!(["-5", "4"]));
}

#[test]
fn exit_codes() {
    // domain error: gcd(6, 2) != 1
    let out = nilsurf(&["dlens", "6", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    // usage error: unknown flag
    let out = nilsurf(&["dlens", "--nope"]);
    assert_eq!(out.status.code(), Some(2));

    // label out of range is a domain error
    let out = nilsurf(&["dlens", "6", "1", "--label", "6"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn deterministic_output() {
    for args in [
        vec!["nil-search", "--pmax", "72", "--format", "json"],
        vec!["dlens", "60", "11", "--format", "json"],
        vec!["bound", "--knot", "3,2", "--l", "6", "--r", "6"],
    ] {
        let first = stdout(&nilsurf(&args));
        let second = stdout(&nilsurf(&args));
        assert_eq!(first, second, "args: {args:?}");
        assert!(!first.is_empty());
    }
}

#[test]
fn cache_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["dlens", "144", "25", "--format", "json"];
    let plain = stdout(&nilsurf(&args));
    let cold = stdout(&nilsurf_with_cache(&args, dir.path()));
    assert!(dir.path().join("d_L_144_25.json").exists());
    let warm = stdout(&nilsurf_with_cache(&args, dir.path()));
    assert_eq!(plain, cold);
    assert_eq!(plain, warm);
}

#[test]
fn dsurgery_matches_library() {
    let out = nilsurf(&["dsurgery", "--knot", "3,2", "12", "1"]);
    let text = stdout(&out);
    assert!(text.starts_with("0 3/4\n"));
    assert_eq!(text.lines().count(), 12);

    // explicit V-sequence input, Poincare sphere
    let out = nilsurf(&["dsurgery", "--v", "1", "1", "1"]);
    assert_eq!(stdout(&out), "0 -2\n");

    // epsilon = -1 negates
    let out = nilsurf(&["dsurgery", "--v", "0", "6", "1", "--epsilon", "-1"]);
    assert_eq!(stdout(&out).lines().next().unwrap(), "0 -5/4");
}

#[test]
fn alex_commands() {
    let out = nilsurf(&["alex", "torus", "3", "2"]);
    assert_eq!(stdout(&out), "-1 + t + t^-1\nV: [1]\n");

    let out = nilsurf(&["alex", "torus", "3", "2", "--power", "5", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["a"], serde_json::json!([[0, -1], [5, 1]]));

    let out = nilsurf(&["alex", "from-v", "1,1,0"]);
    assert!(stdout(&out).starts_with("1 - t - t^-1 + t^2 + t^-2"));

    let out = nilsurf(&["alex", "torus", "4", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn match_json_schema() {
    let out = nilsurf(&[
        "match", "--knot", "3,2", "--p", "12", "--q", "1", "--Q", "1", "--epsilon", "1",
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["p"], 12);
    assert_eq!(json["q"], 1);
    assert_eq!(json["Q"], 1);
    assert_eq!(json["epsilon"], 1);
    let survivors = json["survivors"].as_array().unwrap();
    assert!(!survivors.is_empty());
    for key in ["a", "b", "alpha", "V", "alexander", "flags"] {
        assert!(survivors[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn bound_json_and_case_table() {
    let out = nilsurf(&["bound", "--knot", "3,2", "--l", "6", "--r", "6", "--Q", "1"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["N"], 3);
    assert_eq!(json["ck_count"], 18);
    assert_eq!(json["p_max"], "137733696");

    let out = nilsurf(&["bound", "--knot", "3,2", "--l", "6", "--r", "6", "--case-table"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 65);
    assert!(text.lines().skip(1).all(|line| line.ends_with(",false")));
}

#[test]
fn cables_table() {
    let out = nilsurf(&["cables"]);
    assert_eq!(
        stdout(&out),
        "cable  slope\n(29,5)  144/1\n(31,5)  156/1\n(41,7)  288/1\n(43,7)  300/1\n"
    );

    let out = nilsurf(&["cables", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 4);
    assert_eq!(json[0]["s"], 29);
}

#[test]
fn nil_search_json_shape() {
    let out = nilsurf(&["nil-search", "--pmax", "24", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["p_max"], 24);
    assert_eq!(json["trefoil_survivor_count"], 1);
    assert!(json.get("trefoil_survivors").is_none());

    let out = nilsurf(&["nil-search", "--pmax", "24", "--format", "json", "--include-trefoil"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = json["trefoil_survivors"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["p"], 12);
    assert_eq!(rows[0]["V"], serde_json::json!([1]));
}

#[test]
fn nil_search_table_mentions_suppressed_trefoil() {
    let out = nilsurf(&["nil-search", "--pmax", "60", "--format", "table"]);
    let text = stdout(&out);
    assert!(text.contains("60"));
    assert!(text.contains("suppressed"));

    let with = nilsurf(&["nil-search", "--pmax", "60", "--format", "table", "--include-trefoil"]);
    let text_with = stdout(&with);
    assert!(!text_with.contains("suppressed"));
    assert!(text_with.contains("   12"));
}

#[test]
fn output_is_independent_of_worker_count() {
    let single = nilsurf(&["--jobs", "1", "nil-search", "--pmax", "72", "--format", "json"]);
    let multi = nilsurf(&["--jobs", "4", "nil-search", "--pmax", "72", "--format", "json"]);
    assert!(single.status.success());
    assert_eq!(stdout(&single), stdout(&multi));
}
