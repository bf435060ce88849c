use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blowfiber")).args(args).current_dir(root()).output().unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn temp_config(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("blowfiber-{}-{name}.json", std::process::id()));
    std::fs::File::create(&path).unwrap().write_all(body.as_bytes()).unwrap();
    path
}

#[test]
fn check_passes_for_mbar05() {
    let out = run(&["check", "--config", "configs/mbar05.json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict        pass"));
    assert!(text.contains("factor margins 0 0"));
}

#[test]
fn solve_reports_dimension_seven() {
    let r = json(&["solve", "--config", "configs/p2-cubic-2pts.json", "--json"]);
    assert_eq!(r["projective_dim"], 7);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["kind"], "sigma");
    assert_eq!(r["kernel"].as_array().unwrap().len(), 8);
}

#[test]
fn solve_agrees_with_verify_trial_zero() {
    for config in ["configs/mbar05.json", "configs/p3-infinitesimal.json"] {
        let v = json(&["verify", "--config", config, "--json", "--stable", "--trials", "3"]);
        let trial0 = &v["suites"][0]["records"][0];
        let solve = json(&["solve", "--config", config, "--json"]);
        assert_eq!(trial0["trial"], 0);
        if let Some(observed) = trial0.get("observed") {
            assert_eq!(solve["projective_dim"], *observed);
        }
        if let Some(kp) = trial0.get("kp_splitting") {
            assert_eq!(solve["kp_splitting"], *kp);
        }
        let sample = json(&["sample", "--config", config, "--json"]);
        if let Some(t) = trial0.get("tangent_splitting") {
            assert_eq!(sample["splitting"], *t);
        }
    }
}

#[test]
fn sample_finds_a_free_member() {
    let r = json(&["sample", "--config", "configs/p2-delpezzo3.json", "--json", "--field", "q"]);
    assert_eq!(r["found"], true);
    assert_eq!(r["free"], true);
    assert_eq!(r["splitting"], serde_json::json!([[5, 4]]));
}

#[test]
fn seed_and_field_overrides_apply() {
    let r = json(&["verify", "--config", "configs/mbar05.json", "--json", "--stable", "--trials", "4", "--seed", "7", "--prime", "1048583"]);
    assert_eq!(r["seed"], 7);
    assert_eq!(r["field"]["prime"], 1048583);
    assert_eq!(r["suites"][0]["trials"], 4);
    assert!(r["suites"][0].get("wall_clock_ms").is_none());
    let r = json(&["verify", "--config", "configs/mbar05.json", "--json", "--trials", "2"]);
    assert!(r["suites"][0].get("wall_clock_ms").is_some());
}

#[test]
fn tau_fiber_from_jets() {
    let path = temp_config(
        "tau",
        r#"{"ambient":[1],"beta":{"degrees":[1],"e_total":[]},
            "jets":[{"p":["1","0"],"base":[["1","0"]],"values":[["0","1"]]}]}"#,
    );
    let r = json(&["solve", "--config", path.to_str().unwrap(), "--json"]);
    assert_eq!(r["kind"], "tau");
    assert_eq!(r["affine_dim"], 2);
}

#[test]
fn missing_prime_is_a_config_error() {
    let path = temp_config(
        "bad",
        r#"{"ambient":[2],"centers":[{"kind":"point","coords":[["1","0","0"]]}],
            "beta":{"degrees":[3],"e_total":[2]},"field":{"kind":"prime"},
            "experiment":{"kind":"fiber-dimension","trials":5}}"#,
    );
    let out = run(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/field/prime"));
}

#[test]
fn schema_violations_name_their_path() {
    for (body, pointer) in [
        (r#"{"ambient":[2],"extra":true}"#, "/extra"),
        (r#"{"ambient":[2],"experiment":{"kind":"fiber-dimension","trials":"x"}}"#, "/experiment/trials"),
        (r#"{"ambient":[2],"experiment":{"kind":"nope","trials":1}}"#, "/experiment/kind"),
        (r#"{"ambient":[2],"centers":[],"data":[{"p":["1","0"],"center":3}]}"#, "/data/0/center"),
        (r#"{"ambient":[2],"centers":[{"kind":"point","coords":[["1","0"]]}]}"#, "/centers"),
        (r#"{"ambient":[2],"field":{"kind":"prime","prime":1000}}"#, "/field/prime"),
    ] {
        let path = temp_config("schema", body);
        let out = run(&["dims", "--config", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{body}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(pointer), "{body}: {err}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["solve"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--config", "configs/does-not-exist.json"]).status.code(), Some(2));
}

#[test]
fn failed_hypotheses_exit_one() {
    let path = temp_config(
        "fail",
        r#"{"ambient":[2],"centers":[{"kind":"point","coords":[["1","0","0"]]}],
            "beta":{"degrees":[1],"e_total":[2]}}"#,
    );
    let out = run(&["check", "--config", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["hypotheses"]["factor_margins"], serde_json::json!([-1]));
}
