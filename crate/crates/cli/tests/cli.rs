use std::process::{Command, Output};

use serde_json::Value;

fn pdcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdcalc"))
        .args(args)
        .env_remove("PDCALC_MAX_DEGREE")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = pdcalc(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn coefficient_rows(v: &Value) -> Vec<Vec<String>> {
    v["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["coefficients"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().to_string()).collect())
        .collect()
}

#[test]
fn additive_over_f3() {
    let v = json(&["invariant-forms", "--group", "ga", "--p", "3", "--m", "1", "--ring", "fp"]);
    assert_eq!(coefficient_rows(&v), [["1", "0", "0"], ["0", "0", "1"]]);
    assert_eq!(v["kernel_matches_d"], true);
}

#[test]
fn multiplicative_over_z4_contains_the_log_element() {
    let v = json(&["invariant-forms", "--group", "gm", "--p", "2", "--m", "1", "--ring", "zmod:4"]);
    let gens: Vec<Vec<i64>> =
        coefficient_rows(&v).iter().map(|g| g.iter().map(|c| c.parse().unwrap()).collect()).collect();
    // 2s - s^2 = (2, 3) mod 4 is an integer combination of the generators.
    let found = (0..4).any(|a| {
        (0..4).any(|b| {
            (0..2).all(|j| {
                let x: i64 = [a, b].iter().zip(&gens).map(|(c, g)| c * g.get(j).copied().unwrap_or(0)).sum();
                x.rem_euclid(4) == [2, 3][j]
            })
        })
    });
    assert!(found, "{gens:?}");
}

#[test]
fn legendre_generic_generator() {
    let v = json(&["invariant-forms", "--group", "legendre", "--p", "3", "--m", "1", "--ring", "fp-rational:lambda"]);
    assert_eq!(coefficient_rows(&v), [["0", "0", "1"]]);
}

#[test]
fn scan_over_f3_flags_minus_one() {
    let v = json(&["scan", "--p", "3", "--m", "1", "--ext", "1"]);
    let points = v["points"].as_array().unwrap();
    let flagged: Vec<&str> =
        points.iter().filter(|p| p["supersingular"] == true).map(|p| p["lambda"].as_str().unwrap()).collect();
    assert_eq!(flagged, ["2"]);
}

#[test]
fn scan_over_f9_flags_one_point_of_seven() {
    let v = json(&["scan", "--p", "3", "--m", "1", "--ext", "2"]);
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 7);
    assert_eq!(points.iter().filter(|p| p["supersingular"] == true).count(), 1);
}

#[test]
fn scan_at_level_zero_flags_nothing() {
    let v = json(&["scan", "--p", "3", "--m", "0", "--ext", "1"]);
    assert!(v["points"].as_array().unwrap().iter().all(|p| p["supersingular"] == false && p["rank"] == 1));
}

#[test]
fn scan_csv_columns() {
    let out = pdcalc(&["scan", "--p", "3", "--m", "1", "--ext", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,rank,supersingular,generators"));
    assert!(lines.next().unwrap().starts_with("2,2,true,"));
}

#[test]
fn legendre_law_coefficient() {
    let v = json(&["group-law", "--kind", "legendre", "--p", "3", "--prec", "6"]);
    let coeffs = v["law"]["coefficients"].as_array().unwrap();
    let c12 = coeffs.iter().find(|c| c["i"] == 1 && c["j"] == 2).unwrap();
    assert_eq!(c12["coeff"], "lambda + 1");
    assert!(v["axioms"]["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn legendre_delta_table_has_three_columns() {
    let v = json(&["delta-table", "--group", "legendre", "--p", "3", "--m", "1"]);
    let cols = v["columns"].as_array().unwrap();
    assert_eq!(cols.len(), 3);
    let terms = |j: usize| -> Vec<(String, String)> {
        cols[j]["reduced"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| (t["label"].as_str().unwrap().to_string(), t["coeff"].as_str().unwrap().to_string()))
            .collect()
    };
    let pair = |a: u32, b: u32| format!("z1^{{{a}}}@s1*z1^{{{b}}}@s2");
    assert_eq!(terms(0), [(pair(1, 2), "-lambda - 1".to_string()), (pair(2, 1), "-lambda - 1".to_string())]);
    assert_eq!(terms(1), [(pair(1, 1), "-2".to_string()), (pair(2, 2), "-lambda - 1".to_string())]);
    assert_eq!(terms(2), [(pair(1, 2), "-3".to_string()), (pair(2, 1), "-3".to_string())]);
}

#[test]
fn poincare_over_z9_is_exact() {
    let v = json(&["poincare", "--p", "3", "--m", "1", "--n", "1", "--ring", "zmod:9", "--D", "6"]);
    assert_eq!(v["all_exact"], true);
    assert_eq!(v["band"], 3);
    assert_eq!(v["checks"].as_array().unwrap().len(), 8);
}

#[test]
fn de_rham_control_is_not_exact() {
    let v = json(&["poincare", "--p", "3", "--m", "0", "--n", "1", "--D", "4", "--kind", "de-rham"]);
    assert_eq!(v["all_exact"], false);
}

#[test]
fn describe_reports_every_degree() {
    let v = json(&["describe", "--group", "ga", "--p", "2", "--ring", "zmod:4", "--D", "6"]);
    assert_eq!(v["degrees"].as_array().unwrap().len(), 3);
    assert_eq!(v["degrees"][1]["generators"], 2);
}

#[test]
fn identical_configs_give_identical_bytes() {
    for args in [
        &["invariant-forms", "--group", "gm", "--p", "2", "--ring", "zmod:4"][..],
        &["scan", "--p", "3", "--ext", "2"][..],
        &["delta-table", "--group", "legendre", "--p", "3"][..],
    ] {
        assert_eq!(pdcalc(args).stdout, pdcalc(args).stdout);
    }
}

#[test]
fn output_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("pdcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("law.json");
    let out = pdcalc(&["group-law", "--kind", "gm", "--p", "2", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["law"]["provenance"], "multiplicative");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn text_uses_bar_notation() {
    let out = pdcalc(&["invariant-forms", "--group", "ga", "--p", "3", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("t\u{304}^{{3}}"), "{text}");
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        &["invariant-forms", "--group", "ga", "--p", "4"][..],
        &["invariant-forms", "--group", "ga", "--p", "3", "--ring", "zmod:10"][..],
        &["invariant-forms", "--group", "legendre", "--p", "3", "--ring", "fp"][..],
        &["invariant-forms", "--group", "ga", "--p", "3", "--D", "4"][..],
        &["poincare", "--p", "3", "--D", "6", "--k", "9"][..],
        &["scan", "--p", "2"][..],
        &["no-such-command"][..],
    ] {
        assert_eq!(pdcalc(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn degree_cap_is_enforced() {
    let out = Command::new(env!("CARGO_BIN_EXE_pdcalc"))
        .args(["invariant-forms", "--group", "ga", "--p", "3"])
        .env("PDCALC_MAX_DEGREE", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PDCALC_MAX_DEGREE"));
}
