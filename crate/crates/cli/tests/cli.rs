//! Golden tests for the CLI surface: exit codes, JSON shapes, and
//! byte-identical determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn ptkv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptkv"))
        .args(args)
        .env_remove("PTKV_SEED")
        .env_remove("PTKV_K_SIZE")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn check_true_exits_zero() {
    let out = ptkv(&[
        "check",
        "--model",
        &fixture("attacker.json"),
        "--world",
        "w1",
        "--formula",
        "Kv_1^{3/5}(t)",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_json(&out)["result"], true);
}

#[test]
fn check_false_exits_one() {
    let out = ptkv(&[
        "check",
        "--model",
        &fixture("attacker.json"),
        "--world",
        "w1",
        "--formula",
        "Kv_1^{7/10}(t)",
    ]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout_json(&out)["result"], false);
}

#[test]
fn check_malformed_formula_exits_two() {
    let out = ptkv(&[
        "check",
        "--model",
        &fixture("attacker.json"),
        "--world",
        "w1",
        "--formula",
        "(p ->",
    ]);
    assert_eq!(exit_code(&out), 2);
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).expect("structured error");
    assert!(err["error"].as_str().unwrap().contains("syntax error"));
}

#[test]
fn check_invalid_model_exits_two() {
    let out = ptkv(&[
        "check",
        "--model",
        &fixture("bad_sum.json"),
        "--world",
        "w1",
        "--formula",
        "t = t",
    ]);
    assert_eq!(exit_code(&out), 2);
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("sum"));
}

#[test]
fn check_unknown_world_exits_two() {
    let out = ptkv(&[
        "check",
        "--model",
        &fixture("attacker.json"),
        "--world",
        "w9",
        "--formula",
        "t = t",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn sat_positive_kv_is_checked_sat() {
    let out = ptkv(&["sat", "--formula", "Kv_1^{3/5}(t)"]);
    assert_eq!(exit_code(&out), 0);
    let json = stdout_json(&out);
    assert_eq!(json["result"], "sat");
    assert_eq!(json["checked"], true);
    assert!(json["model"]["worlds"].is_array());
}

#[test]
fn sat_boolean_contradiction_is_unsat() {
    let out = ptkv(&["sat", "--formula", "(p & ~p)"]);
    assert_eq!(exit_code(&out), 1);
    let json = stdout_json(&out);
    assert_eq!(json["result"], "unsat");
    assert_eq!(json["note"], "no model via canonical construction");
}

#[test]
fn sat_complementary_knowledge_is_unsat() {
    let out = ptkv(&["sat", "--formula", "(K_1^{3/4}p & K_1^{3/4}~p)"]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout_json(&out)["result"], "unsat");
}

#[test]
fn sat_parse_error_exits_two() {
    let out = ptkv(&["sat", "--formula", "Kv_1^{1/2}(t)"]);
    assert_eq!(exit_code(&out), 2);
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("threshold out of range"));
}

#[test]
fn sat_output_is_deterministic() {
    let a = ptkv(&["sat", "--formula", "(Kv_1^{3/5}(t) & K_2^{1/2}p)"]);
    let b = ptkv(&["sat", "--formula", "(Kv_1^{3/5}(t) & K_2^{1/2}p)"]);
    assert_eq!(exit_code(&a), 0);
    assert_eq!(a.stdout, b.stdout, "byte-identical output");
}

#[test]
fn sat_cross_check_reports_bounded_search() {
    let out = ptkv(&["sat", "--formula", "(p & ~p)", "--cross-check"]);
    assert_eq!(exit_code(&out), 1);
    let json = stdout_json(&out);
    assert_eq!(json["cross_check"]["model_found"], false);
}

#[test]
fn sat_materialized_replicas_scale_the_world_set() {
    let plain = stdout_json(&ptkv(&["sat", "--formula", "Kv_1^{3/5}(t)"]));
    let worlds = plain["model"]["worlds"].as_array().unwrap().len();
    let out = ptkv(&[
        "sat",
        "--formula",
        "Kv_1^{3/5}(t)",
        "--materialize-replicas",
        "3",
    ]);
    assert_eq!(exit_code(&out), 0);
    let json = stdout_json(&out);
    assert_eq!(
        json["model"]["worlds"].as_array().unwrap().len(),
        worlds * 3
    );
    assert_eq!(json["replicas"], 3);
    assert!(json["world"].as_str().unwrap().ends_with("_r1"));
}

#[test]
fn sat_k_size_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_ptkv"))
        .args(["sat", "--formula", "~Kv_1^{3/5}(t)"])
        .env("PTKV_K_SIZE", "paper")
        .output()
        .unwrap();
    // The documented single-term gap: unsatisfiable under the paper policy.
    assert_eq!(exit_code(&out), 1);
    let json = stdout_json(&out);
    assert_eq!(json["k_size_policy"], "paper");

    let out = ptkv(&["sat", "--formula", "~Kv_1^{3/5}(t)"]);
    assert_eq!(exit_code(&out), 0, "default plus-one policy finds a model");
}

#[test]
fn axioms_default_config_is_clean() {
    let out = ptkv(&["axioms", "--trials", "60", "--seed", "42"]);
    assert_eq!(exit_code(&out), 0);
    let json = stdout_json(&out);
    assert_eq!(json["schemas"]["KvMon"]["checks"], 60);
    assert_eq!(
        json["schemas"]["TAUT"]["counterexamples"]
            .as_array()
            .unwrap()
            .len(),
        0
    );
}

#[test]
fn axioms_negative_controls_exit_one_with_minimized_counterexample() {
    let out = ptkv(&[
        "axioms",
        "--trials",
        "500",
        "--seed",
        "42",
        "--negative-controls",
    ]);
    assert_eq!(exit_code(&out), 1);
    let json = stdout_json(&out);
    let factivity = &json["negative_controls"]["Factivity"]["counterexamples"];
    assert!(!factivity.as_array().unwrap().is_empty());
    let model = &factivity[0]["model"];
    assert!(model["worlds"].as_array().unwrap().len() <= 2);
}

#[test]
fn axioms_zero_trials_exit_two() {
    let out = ptkv(&["axioms", "--trials", "0"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn closure_of_atom() {
    let out = ptkv(&["closure", "--formula", "p"]);
    assert_eq!(exit_code(&out), 0);
    let json = stdout_json(&out);
    assert_eq!(json["members"].as_array().unwrap().len(), 2);
    assert_eq!(json["type_count"], 2);
    assert_eq!(json["type_star_count"], 2);
}

#[test]
fn closure_kv_policy_sensitivity() {
    let paper = stdout_json(&ptkv(&[
        "closure",
        "--formula",
        "Kv_1^{3/5}(t)",
        "--k-size",
        "paper",
    ]));
    assert_eq!(paper["type_count"], 2);
    assert_eq!(paper["type_star_count"], 1, "negative-Kv type eliminated");
    assert_eq!(paper["star_axioms"].as_array().unwrap().len(), 1);

    let plus_one = stdout_json(&ptkv(&["closure", "--formula", "Kv_1^{3/5}(t)"]));
    assert_eq!(plus_one["type_star_count"], 2, "both types survive");
}

#[test]
fn closure_includes_all_term_equalities() {
    let json = stdout_json(&ptkv(&["closure", "--formula", "K_1^{1/2}(t = s)"]));
    let members: Vec<String> = json["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    for needed in ["t = t", "s = s", "t = s", "s = t", "~t = s", "~s = t"] {
        assert!(members.iter().any(|m| m == needed), "missing {needed}");
    }
}

#[test]
fn closure_cap_exit_two() {
    let out = ptkv(&["closure", "--formula", "K_1^{1/2}(t = s)", "--closure-cap", "2"]);
    assert_eq!(exit_code(&out), 2);
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("closure too large"));
}

#[test]
fn output_flag_writes_file_with_same_bytes() {
    let dir = std::env::temp_dir().join(format!("ptkv-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("verdict.json");
    let to_file = ptkv(&[
        "sat",
        "--formula",
        "Kv_1^{3/5}(t)",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&to_file), 0);
    assert!(to_file.stdout.is_empty());
    let from_file = std::fs::read(&path).unwrap();
    let to_stdout = ptkv(&["sat", "--formula", "Kv_1^{3/5}(t)"]);
    assert_eq!(from_file, to_stdout.stdout);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn rationals_serialize_as_exact_fraction_strings() {
    let out = ptkv(&["sat", "--formula", "Kv_1^{3/5}(t)"]);
    let json = stdout_json(&out);
    let measures = json["model"]["measures"]["agent:1"].as_object().unwrap();
    for row in measures.values() {
        for mass in row.as_object().unwrap().values() {
            let text = mass.as_str().expect("mass is a string");
            assert!(
                text.split_once('/').is_some(),
                "expected a/b string, got {text}"
            );
        }
    }
}

#[test]
fn sat_explicit_k_size_too_small_exits_two() {
    // A type with two distinct terms needs two coordinates.
    let out = ptkv(&["sat", "--formula", "K_1^{1/2}~(t = s)", "--k-size", "1"]);
    assert_eq!(exit_code(&out), 2);
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"]
        .as_str()
        .unwrap()
        .contains("cannot be injected"));
}

#[test]
fn closure_star_axioms_listed_for_paper_gap() {
    let json = stdout_json(&ptkv(&[
        "closure",
        "--formula",
        "~Kv_1^{3/5}(t)",
        "--k-size",
        "paper",
    ]));
    assert_eq!(json["type_star_count"], 1);
    let axioms = json["star_axioms"].as_array().unwrap();
    assert_eq!(axioms.len(), 1);
    assert_eq!(axioms[0], "Kv_1^{3/5}(t)");
}
