use std::path::PathBuf;
use std::process::{Command, Output};

use legsurg::poly::LaurentPoly;
use legsurg::surgery::SurgeryDiagram;
use serde_json::Value;

fn fixture(path: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(path)
}

fn legsurg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_legsurg")).args(args).output().expect("binary should run")
}

fn legsurg_with(fixtures: &[&str], args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_legsurg"));
    cmd.arg(args[0]);
    for f in fixtures {
        cmd.arg(fixture(f));
    }
    cmd.args(&args[1..]).output().expect("binary should run")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout should be JSON")
}

fn stdout_lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .expect("utf-8 output")
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line should be JSON"))
        .collect()
}

#[test]
fn annulus_family_d3_is_constant() {
    let out = legsurg_with(&["ln_family.json"], &["d3", "--n", "0..12"]);
    assert_eq!(code(&out), 0);
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 12);
    for (n, line) in lines.iter().enumerate() {
        assert_eq!(line["n"], n as u64);
        assert_eq!(line["d3"], lines[0]["d3"]);
    }
    assert_eq!(lines[0]["d3"][0], "-1/2");
}

#[test]
fn annulus_family_homology_is_z_and_euler_vanishes() {
    let file = fixture("ln_family.json");
    let out = legsurg(&["family", "annulus", file.to_str().unwrap(), "--n", "0..=12"]);
    assert_eq!(code(&out), 0);
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 13);
    for line in &lines {
        assert_eq!(line["h1"], serde_json::json!([0]));
        assert_eq!(line["euler"], serde_json::json!([[0]]));
    }
}

#[test]
fn homfly_of_l0_pd_matches_printed_polynomial() {
    let out = legsurg_with(&["L0.pd.json"], &["homfly"]);
    assert_eq!(code(&out), 0);
    let expected = LaurentPoly::from_terms(
        &["l", "m"],
        &[
            (vec![-6, 4], 1),
            (vec![-2, 2], 1),
            (vec![-4, 2], -2),
            (vec![-6, 2], -3),
            (vec![-8, 2], -1),
            (vec![-2, 0], -1),
            (vec![-4, 0], 2),
            (vec![-6, 0], 3),
            (vec![-8, 0], 1),
        ],
    );
    assert_eq!(stdout_json(&out)["homfly"], expected.to_string());
}

#[test]
fn front_and_pd_inputs_give_the_same_polynomials() {
    for cmd in ["homfly", "alexander"] {
        let a = legsurg_with(&["L0.pd.json"], &[cmd]);
        let b = legsurg_with(&["L0.front.json"], &[cmd]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn check_slope_exit_codes_follow_the_verdict() {
    let certified = legsurg(&["check-slope", "--class", "fig8", "--tb", "-1", "--rot", "0", "--slope", "-1"]);
    assert_eq!(code(&certified), 0);
    assert_eq!(stdout_json(&certified)["verdict"]["kind"], "characterizing_certified");

    let survives = legsurg(&["check-slope", "--class", "fig8", "--tb", "-5", "--rot", "0", "--slope", "-1"]);
    assert_eq!(code(&survives), 2);
    let report = stdout_json(&survives);
    assert_eq!(report["verdict"]["candidates"], serde_json::json!([{ "tb": 7, "rot": 6 }]));

    let scope = legsurg(&["check-slope", "--class", "unknot", "--tb", "-11", "--rot", "0", "--slope", "6"]);
    assert_eq!(code(&scope), 3);
    assert_eq!(stdout_json(&scope)["verdict"]["kind"], "out_of_method_scope");
}

#[test]
fn custom_class_file_is_accepted() {
    let text =
        std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../legsurg/data/knot_classes.json"))
            .unwrap();
    let all: Value = serde_json::from_str(&text).unwrap();
    let fig8 = all["classes"].as_array().unwrap().iter().find(|c| c["tag"] == "fig8").unwrap();
    let dir = std::env::temp_dir().join(format!("legsurg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig8.json");
    std::fs::write(&path, fig8.to_string()).unwrap();
    let out =
        legsurg(&["check-slope", "--class-file", path.to_str().unwrap(), "--tb", "-1", "--rot", "0", "--slope", "-1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn sweep_streams_one_record_per_knot() {
    let out = legsurg(&["sweep", "--class", "fig8", "--tb", "-10..=-1", "--slope", "-1"]);
    assert_eq!(code(&out), 2);
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 20);
    let survivors: Vec<_> =
        lines.iter().filter(|l| l["verdict"]["kind"] == "candidate_survives").map(|l| &l["query"]).collect();
    assert_eq!(survivors.len(), 1);
    assert_eq!((survivors[0]["tb"].as_i64(), survivors[0]["rot"].as_i64()), (Some(-5), Some(0)));
}

#[test]
fn euler_example_at_minus_two() {
    let a = stdout_json(&legsurg_with(&["diagrams/unknot_tb-3_rot2_minus2.json"], &["euler"]));
    let b = stdout_json(&legsurg_with(&["diagrams/unknot_tb-3_rot0_minus2.json"], &["euler"]));
    let set = |v: &Value| {
        let mut xs: Vec<i64> = v["euler"].as_array().unwrap().iter().map(|e| e[0].as_i64().unwrap()).collect();
        xs.sort();
        xs
    };
    assert_eq!(set(&a), [1, 3]);
    assert_eq!(set(&b), [1, 4]);
}

#[test]
fn branch_selection_and_normal_forms() {
    let all = stdout_json(&legsurg_with(&["diagrams/trefoil_minus7_2.json"], &["normalize"]));
    assert_eq!(all["count"], 4);
    let one = stdout_json(&legsurg_with(&["diagrams/trefoil_minus7_2.json"], &["normalize", "--branch", "2"]));
    assert_eq!(one["forms"].as_array().unwrap().len(), 1);
    assert_eq!(one["forms"][0], all["forms"][2]);
    // Every emitted diagram parses back and serializes to the same JSON.
    for form in all["forms"].as_array().unwrap() {
        let d: SurgeryDiagram = serde_json::from_value(form["diagram"].clone()).unwrap();
        assert_eq!(serde_json::to_value(&d).unwrap(), form["diagram"]);
    }
    let expanded = stdout_json(&legsurg_with(&["diagrams/trefoil_plus6.json"], &["normalize", "--style", "expanded"]));
    assert_eq!(expanded["count"], 2);
}

#[test]
fn replayed_scripts_preserve_invariants() {
    for (diagram, script) in [
        ("diagrams/trefoil_plus6.json", "scripts/annulus_twist_roundtrip.json"),
        ("diagrams/trefoil_plus6.json", "scripts/introduce_and_cancel.json"),
        ("diagrams/rgb_n3.json", "scripts/rgb_resolve_green.json"),
    ] {
        let out = legsurg_with(&[diagram, script], &["replay"]);
        assert_eq!(code(&out), 0, "{script}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout_json(&out)["invariant"], true, "{script}");
    }
}

#[test]
fn rgb_family_resolutions_agree() {
    let out = legsurg(&["family", "rgb", "--n", "0..=8"]);
    assert_eq!(code(&out), 0);
    for line in stdout_lines(&out) {
        let n = line["n"].as_i64().unwrap();
        assert_eq!(line["g"]["tb"].as_i64(), Some(2 * n - 6));
        assert_eq!(line["b"]["tb"].as_i64(), Some(2 * n - 6));
        assert_eq!(line["equal"], true);
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["invariants", "--format", "json"];
    let a = legsurg_with(&["diagrams/trefoil_5_3.json"], &args);
    let b = legsurg_with(&["diagrams/trefoil_5_3.json"], &args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn table_format_is_plain_text() {
    let out = legsurg_with(&["diagrams/unknot_tb-3_rot2_minus2.json"], &["homology", "--format", "table"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("order") && l.ends_with('5')), "{text}");
}

#[test]
fn error_exit_codes() {
    assert_eq!(code(&legsurg(&["d3"])), 64);
    assert_eq!(code(&legsurg(&["d3", "/nonexistent/diagram.json"])), 64);
    assert_eq!(code(&legsurg(&["check-slope", "--class", "nope", "--tb", "1", "--rot", "0", "--slope", "1"])), 64);

    let dir = std::env::temp_dir().join(format!("legsurg-cli-err-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"components": [{"abstract": {"tag": "k"}, "tb": 1, "rot": 0, "coeff": "0"}]}"#).unwrap();
    assert_eq!(code(&legsurg(&["d3", bad.to_str().unwrap()])), 65);
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&legsurg(&["d3", bad.to_str().unwrap()])), 65);

    let out = legsurg_with(&["diagrams/trefoil_minus7_2.json"], &["normalize", "--branch", "9"]);
    assert_eq!(code(&out), 70);
    let out = legsurg_with(&["diagrams/trefoil_plus6.json", "scripts/rgb_resolve_green.json"], &["replay"]);
    assert_eq!(code(&out), 70);
}
