use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn fairtent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairtent"))
        .args(args)
        .env_remove("FAIRTENT_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn schema_validator() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/scan_output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

#[test]
fn entropy_at_two_with_both_methods() {
    let o = fairtent(&["entropy", "--a", "2", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("a,value,radius,status,method,terms,horizon,discrepancy\n"));
    let row = &csv_rows(&text)[0];
    let value: f64 = row[1].parse().unwrap();
    let disc: f64 = row[7].parse().unwrap();
    assert!((value - 0.5).abs() <= 1e-9 && disc <= 1e-9, "{row:?}");
}

#[test]
fn entropy_grid_is_nondecreasing() {
    let o = fairtent(&["entropy", "--a-lo", "1.5", "--a-hi", "1.9", "--count", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 100);
    let vals: Vec<(f64, f64)> = rows.iter().map(|r| (r[1].parse().unwrap(), r[2].parse().unwrap())).collect();
    assert!(vals.windows(2).all(|w| w[0].0 - w[1].0 <= w[0].1 + w[1].1));
}

#[test]
fn usage_errors() {
    assert_eq!(fairtent(&["entropy", "--a", "1"]).status.code(), Some(1));
    assert_eq!(fairtent(&["boundaries", "--r-max", "1"]).status.code(), Some(1));
    assert_eq!(fairtent(&["scan", "--a-lo", "1.6", "--a-hi", "1.5", "--count", "3"]).status.code(), Some(1));
}

#[test]
fn ambiguous_parameter_without_fallback() {
    let a = format!("{}", std::f64::consts::SQRT_2);
    let o = fairtent(&["entropy", "--a", &a]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains(",ambiguous,"));
    // the oracle handles it, with its mesh-limited radius
    let o = fairtent(&["entropy", "--a", &a, "--method", "phi", "--tol", "1e-2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = csv_rows(&stdout(&o))[0][1].parse().unwrap();
    assert!((v - 0.25).abs() < 5e-3);
}

#[test]
fn boundary_table() {
    let o = fairtent(&["boundaries", "--r-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert!(rows[0][1].starts_with("1.41421356"));
    assert!((rows[1][1].parse::<f64>().unwrap() - 1.695621).abs() < 1e-6);
    let rows = csv_rows(&stdout(&fairtent(&["boundaries", "--r-max", "12"])));
    let last: f64 = rows.last().unwrap()[1].parse().unwrap();
    assert!(last < 2.0 && 2.0 - last < 0.2);
}

#[test]
fn verify_suites() {
    let o = fairtent(&["verify", "--suite", "lemma22", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 21);
    for suite in ["core", "theorem12"] {
        let o = fairtent(&["verify", "--suite", suite, "--budget", "small"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
}

#[test]
fn lap_census_refines() {
    let coarse = csv_rows(&stdout(&fairtent(&["laps", "--a-lo", "1.5", "--a-hi", "1.6", "--n", "10"])));
    let fine = csv_rows(&stdout(&fairtent(&["laps", "--a-lo", "1.5", "--a-hi", "1.6", "--n", "11"])));
    let span = |r: &Vec<String>| (r[1].parse::<f64>().unwrap(), r[2].parse::<f64>().unwrap());
    assert!(fine.len() >= coarse.len());
    for f in &fine {
        let (l, r) = span(f);
        let parents = coarse.iter().map(span).filter(|&(pl, pr)| pl <= l && r <= pr).count();
        assert_eq!(parents, 1);
    }
}

#[test]
fn exponent_at_a_witness() {
    let o = fairtent(&["special", "--a-lo", "1.5", "--a-hi", "1.6", "--kind", "Q(2)", "--n-max", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let a = csv_rows(&stdout(&o))[0][0].clone();
    let o = fairtent(&["exponent", "--a", &a]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let a: f64 = a.parse().unwrap();
    let alpha = std::f64::consts::LN_2 / (2.0 * a.ln());
    let beta = v["beta_hat"].as_f64().unwrap();
    assert!((beta - alpha).abs() <= 0.15 * alpha, "{beta} vs {alpha}");
    for key in ["beta_lo", "beta_hi", "gamma_hat", "predicted_beta", "usable_scale_count", "config"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn acip_at_two_is_lebesgue() {
    let o = fairtent(&["acip", "--a", "2", "--interval", "0,1", "--iterations", "1000000"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["mass"].as_f64().unwrap() - 0.5).abs() <= 0.01);
}

#[test]
fn output_is_identical_across_worker_counts() {
    let args = ["scan", "--a-lo", "1.45", "--a-hi", "1.99", "--count", "40", "--quantity", "dimension", "--format", "json"];
    let one = fairtent(&[&args[..], &["--jobs", "1"]].concat());
    let four = fairtent(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, fairtent(&[&args[..], &["--jobs", "1"]].concat()).stdout);
}

#[test]
fn json_matches_the_schema() {
    let validator = schema_validator();
    for q in ["entropy", "gamma", "laps", "verify", "boundaries"] {
        let o = fairtent(&["scan", "--a-lo", "1.5", "--a-hi", "1.9", "--count", "7", "--quantity", q, "--format", "json"]);
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(validator.is_valid(&v), "{q}: {v}");
    }
    let o = fairtent(&["entropy", "--a-lo", "1.5", "--a-hi", "2", "--count", "3", "--method", "both", "--format", "json"]);
    assert!(validator.is_valid(&serde_json::from_slice(&o.stdout).unwrap()));
}

#[test]
fn radii_are_honoured() {
    let run = |tol: &str| -> Vec<(f64, f64)> {
        let o = fairtent(&["entropy", "--a-lo", "1.45", "--a-hi", "1.95", "--count", "25", "--tol", tol]);
        csv_rows(&stdout(&o)).iter().map(|r| (r[1].parse().unwrap(), r[2].parse().unwrap())).collect()
    };
    let (coarse, fine) = (run("1e-6"), run("1e-7"));
    for (c, f) in coarse.iter().zip(&fine) {
        assert!((c.0 - f.0).abs() < c.1, "{c:?} {f:?}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.conf");
    let out = dir.path().join("out.csv");
    std::fs::write(&cfg, "# entropy scan\na_lo = 1.5\na-hi = 1.9\ncount = 9\nquantity = entropy\n").unwrap();
    let o = fairtent(&["scan", "--config", cfg.to_str().unwrap(), "--count", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(csv_rows(&std::fs::read_to_string(&out).unwrap()).len(), 4);
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_fairtent"))
        .args(["entropy", "--a", "1.7", "--format", "json"])
        .env("FAIRTENT_PRECISION", "extended")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["precision"], "extended");
}
