use std::process::{Command, Output};

use serde_json::Value;

fn galmub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galmub"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = galmub(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn strings(v: &Value) -> Vec<&str> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect()
}

#[test]
fn field_info_examples() {
    let v = json(&["field-info", "--p", "3", "--n", "2"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["modulus"], "x^2 + 1");
    assert_eq!(v["modulus_coeffs"], serde_json::json!([1, 0, 1]));

    let v = json(&["field-info", "--p", "5"]);
    assert_eq!(strings(&v["quadratic_residues"]), ["1", "4"]);
    assert_eq!(v["primitive_element"], "2");

    let v = json(&["field-info", "--p", "3", "--n", "3"]);
    assert_eq!(v["eta_order"], 56);
    assert_eq!(v["quadratic_residues"].as_array().unwrap().len(), 13);
}

#[test]
fn output_is_deterministic() {
    for args in [
        ["mub", "--p", "5", "--json"],
        ["balanced", "--p", "7", "--json"],
        ["verify-all", "--p", "3", "--json"],
    ] {
        let a = galmub(&args);
        let b = galmub(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("galmub-cli-test-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let a = galmub(&["cyclers", "--p", "5", "--json", "--out", p]);
    let written = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(a.stdout, written);
}

#[test]
fn usage_errors_name_the_constraint() {
    let out = galmub(&["balanced", "--p", "3", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n must be odd"));

    let out = galmub(&["field-info", "--p", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd prime"));

    let out = galmub(&["field-info", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = galmub(&["mub", "--p", "7", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--max-dim"));

    let out = galmub(&["polytope", "--p", "13"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--heavy-limit"));
}

#[test]
fn cyclers_at_seven() {
    let v = json(&["cyclers", "--p", "7"]);
    let classes = v["classes"].as_array().unwrap();
    let rs: Vec<u64> = classes.iter().map(|c| c["r"].as_u64().unwrap()).collect();
    assert_eq!(rs, [1, 3, 5, 7]);
    let mut anti = 0;
    for c in classes {
        let powers = c["powers"].as_array().unwrap();
        assert_eq!(powers.len(), 6);
        for g in powers {
            assert_eq!(g["is_cycler"], true);
            assert_eq!(g["suborder"], 8);
            assert_eq!(g["mobius_order"], 8);
            anti += g["antisymplectic"].as_bool().unwrap() as usize;
        }
    }
    // det G_0^e = 5^e runs over F_7^* and hits -1 for e ≡ 3 (mod 6).
    assert_eq!(anti, 8);
}

#[test]
fn balanced_at_seven() {
    let v = json(&["balanced", "--p", "7"]);
    assert_eq!(v["balanced"], true);
    assert_eq!(v["minimum_uncertainty"], true);
    assert_eq!(v["open_case"], false);
    assert_eq!(v["renyi"]["saturated"], true);
    let probs = v["probabilities"].as_object().unwrap();
    assert_eq!(probs.len(), 8);
    for row in probs.values() {
        assert_eq!(row.as_array().unwrap().len(), 7);
    }
}

#[test]
fn balanced_at_five_is_reported_as_open() {
    let v = json(&["balanced", "--p", "5"]);
    assert_eq!(v["open_case"], true);
    assert!(v["verdict"].as_str().unwrap().contains("open case"));
}

#[test]
fn verify_all_three_passes() {
    let out = galmub(&["verify-all", "--p", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 15);
}

#[test]
fn verify_all_nine_skips_cycler_checks() {
    let v = json(&["verify-all", "--p", "3", "--n", "2"]);
    assert_eq!(v["passed"], true);
    let skipped: Vec<u64> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "skip")
        .map(|r| r["id"].as_u64().unwrap())
        .collect();
    assert_eq!(skipped, [8, 9, 10, 11, 12, 14]);
}

#[test]
fn polytope_at_three() {
    let v = json(&["polytope", "--p", "3"]);
    assert_eq!(v["trace_table"]["one"], 12);
    assert_eq!(v["wigner_sum"]["exact"], "1");
    assert_eq!(v["census"]["stabilizer"], 48);
    assert_eq!(v["census"]["orbit"], 9);
    assert_eq!(v["amburg"]["direct_match"], true);
}
