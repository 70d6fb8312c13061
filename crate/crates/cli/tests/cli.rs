use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jetarc")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    serde_json::from_str(&stdout(&a)).unwrap()
}

#[test]
fn jet_eqs_prints_three_generators() {
    let cusp = data("cusp.json");
    let out = stdout(&["jet-eqs", "--ideal", &cusp, "--m", "2"]);
    assert_eq!(out.lines().count(), 3);
    assert!(out.lines().next().unwrap().contains("x_0^2"));
}

#[test]
fn cylinder_codim_of_the_cusp() {
    let cusp = data("cusp.json");
    assert_eq!(stdout(&["cylinder-codim", "--ideal", &cusp, "--jac-order", "3", "--m", "3"]), "2\n");
    let v = json(&["cylinder-codim", "--ideal", &cusp, "--jac-order", "6", "--m", "6"]);
    assert_eq!(v["codim"], 4);
}

#[test]
fn jet_dim_of_the_circle() {
    let v = json(&["jet-dim", "--ideal", &data("circle.json"), "--m", "3"]);
    assert_eq!(v["dimension"], 4);
}

#[test]
fn contact_dim_on_the_cusp() {
    let f = data("cusp_origin.json");
    assert_eq!(json(&["contact-dim", "--ideal", &f, "--order", "1", "--m", "3"])["dimension"], 4);
    // an arc of order exactly 1 at the cusp point has x² and y³ of different orders
    let v = json(&["contact-dim", "--ideal", &f, "--order", "1", "--m", "3", "--exact"]);
    assert_eq!(v["dimension"], "empty");
}

#[test]
fn mld_res_reports_the_witness_divisor() {
    let f = data("cusp_res.json");
    let out = stdout(&["mld-res", "--data", &f, "--q", "5/6"]);
    assert!(out.starts_with("mld = 0\n"), "{out}");
    assert!(out.contains("witness divisor: E3"));
    let v = json(&["mld-res", "--data", &f, "--q", "1"]);
    assert_eq!(v["mld"], "-inf");
    assert_eq!(v["mld_via_contact"], "-inf");
    let v = json(&["mld-res", "--data", &f, "--q", "3/4"]);
    assert_eq!(v["mld"], "1/2");
    assert_eq!(v["agree"], true);
}

#[test]
fn json_output_round_trips() {
    let args: [&[&str]; 3] = [
        &["mld-res", "--data", &data("cusp_res.json"), "--json"],
        &["mld-jets", "--pair", &data("cusp_pair.json"), "--json"],
        &["cov-probe", "--data", &data("blowup_probe.json"), "--m", "3", "--jac-order", "2", "--json"],
    ];
    for a in args {
        let out = stdout(a);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", out);
    }
}

#[test]
fn runs_are_deterministic() {
    let f = data("twisted_cubic_cone.json");
    let a = stdout(&["jacobian", "--ideal", &f, "--seed", "7", "--json"]);
    let b = stdout(&["jacobian", "--ideal", &f, "--seed", "7", "--json"]);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["ci_reduction"]["residue_inclusion"], true);
    assert_eq!(v["singular_locus_dimension"], 0);
}

#[test]
fn lifting_commands() {
    let cusp = data("cusp.json");
    let v = json(&["lift", "--ideal", &cusp, "--data", &data("cusp_perturbed.json"), "--m", "3", "--jac-order", "3"]);
    assert_eq!(v["liftable"], true);
    assert_eq!(v["lift"][0].as_array().unwrap().len(), 5);
    let v = json(&["lift", "--ideal", &cusp, "--data", &data("cusp_stuck.json"), "--m", "4", "--jac-order", "4"]);
    assert_eq!(v["liftable"], false);
    let v = json(&["in-image", "--ideal", &cusp, "--data", &data("cusp_arc.json"), "--m", "6", "--p", "3", "--jac-order", "3"]);
    assert_eq!(v["in_image"], true);
}

#[test]
fn pair_commands() {
    let cusp = data("cusp_pair.json");
    let v = json(&["mld-jets", "--pair", &cusp]);
    assert_eq!(v["value"], "0");
    assert_eq!(v["witness"]["w"][0], 6);
    let v = json(&["lc-check", "--pair", &cusp, "--q", "1"]);
    assert_eq!(v["log_canonical"], false);
    let v = json(&["ioa-check", "--pair", &data("quadric_cone_pair.json")]);
    assert_eq!(v["left"]["value"], "1");
    assert_eq!(v["right"]["value"], "1");
    assert_eq!(v["agree"], true);
}

#[test]
fn probe_on_the_blowup_chart() {
    let v = json(&["cov-probe", "--data", &data("blowup_probe.json"), "--m", "3", "--jac-order", "2"]);
    assert_eq!(v["direct_codim"], 2);
    assert_eq!(v["transformed_min"], 2);
    assert_eq!(v["argmin"], 1);
}

#[test]
fn exit_codes() {
    let out = run(&["jet-dim", "--ideal", "/nonexistent.json", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent.json"));
    let out = run(&["mld-res", "--data", &data("cusp_res.json"), "--q", "five"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--q"));
    let out = run(&["ioa-check", "--pair", &data("cusp_pair.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["jacobian", "--ideal", &data("twisted_cubic_cone.json"), "--max-pairs", "1"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["mld-jets", "--pair", &data("cusp_pair.json"), "--w", "5", "--m", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("m_max"));
}
