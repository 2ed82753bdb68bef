use std::process::{Command, Output};

use serde_json::Value;

fn zetaps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetaps"))
        .args(args)
        .env_remove("ZETAPS_PREC_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = zetaps(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn rho_rows() {
    let rows = csv_rows(&stdout(&["rho", "--n", "3", "--k", "2"]));
    assert_eq!(rows[0][2], "Root");
    let v: f64 = rows[0][3].parse().unwrap();
    assert!((v + 1.0).abs() <= 1e-9);

    let rows = csv_rows(&stdout(&["rho", "--n", "4", "--k", "1"]));
    assert_eq!(rows[0][2], "NoRealZero");
    assert_eq!(rows[0][3], "inf");

    let rows = csv_rows(&stdout(&["rho", "--n", "2", "--k", "1"]));
    assert!(rows[0][3].parse::<f64>().unwrap().abs() <= 1e-9);
}

#[test]
fn rho_table_rows() {
    let text = stdout(&["rho-table", "--k", "full", "--n-from", "3", "--n-to", "3"]);
    assert!(text.starts_with("n,k,rho,rho_over_n\n"));
    let rows = csv_rows(&text);
    assert_eq!(&rows[0][..2], ["3", "2"]);
    assert!((rows[0][2].parse::<f64>().unwrap() + 1.0).abs() <= 1e-9);
    assert!((rows[0][3].parse::<f64>().unwrap() + 1.0 / 3.0).abs() <= 1e-9);

    let rows = csv_rows(&stdout(&["rho-table", "--k", "full", "--n-from", "100", "--n-to", "100"]));
    let q: f64 = rows[0][3].parse().unwrap();
    assert!((-0.72..=-0.66).contains(&q));

    let rows = csv_rows(&stdout(&["rho-table", "--k", "1", "--n-from", "50", "--n-to", "60"]));
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r[2] == "inf"));
}

#[test]
fn phi_json() {
    let v: Value = serde_json::from_str(&stdout(&["phi", "--n", "2", "--tau-max", "20"])).unwrap();
    assert!(v["complete"].as_bool().unwrap());
    assert!(v["phi_hat"].as_f64().unwrap().abs() <= 1e-9);
    let zeros = v["zeros"].as_array().unwrap();
    assert_eq!(zeros.len(), 2);
    for (j, z) in zeros.iter().enumerate() {
        let expected = (2 * j + 1) as f64 * std::f64::consts::PI / std::f64::consts::LN_2;
        assert!((z["tau"].as_f64().unwrap() - expected).abs() <= 1e-8);
    }

    let v: Value = serde_json::from_str(&stdout(&["phi", "--n", "2", "--tau-max", "1"])).unwrap();
    assert_eq!(v["phi_hat"], "inf");
    assert!(v["zeros"].as_array().unwrap().is_empty());

    let v: Value = serde_json::from_str(&stdout(&["phi", "--n", "3", "--tau-max", "50"])).unwrap();
    assert!(v["zeros"].as_array().unwrap().iter().all(|z| z["sigma"].as_f64().unwrap() >= -1.0 - 1e-6));
}

#[test]
fn chi_json() {
    let v: Value = serde_json::from_str(&stdout(&["chi", "--n", "6", "--k", "1"])).unwrap();
    assert_eq!(v["orientation"], -1);
    assert_eq!(v["overrides"], serde_json::json!({"3": -1}));
    assert_eq!(v["provenance"], "Case1");
    assert_eq!(v["verified"], true);

    let v: Value = serde_json::from_str(&stdout(&["chi", "--n", "16", "--k", "3"])).unwrap();
    assert_eq!(v["orientation"], 1);
    assert_eq!(v["overrides"], serde_json::json!({"5": -1, "7": -1, "13": -1}));

    let v: Value = serde_json::from_str(&stdout(&["chi", "--n", "8", "--k", "3", "--brute-force"])).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["oracle_agrees"], true);

    assert_eq!(zetaps(&["chi", "--n", "4", "--k", "3"]).status.code(), Some(3));
}

#[test]
fn limit_check_rows() {
    let text = stdout(&["limit-check", "--c", "1", "--k", "30", "--n", "1000"]);
    assert!(text.starts_with("n,k,c,scaled_value,limit,abs_err\n"));
    assert!(csv_rows(&text)[0][5].parse::<f64>().unwrap() <= 0.01);
    let rows = csv_rows(&stdout(&["limit-check", "--c", "0.693147", "--k", "50", "--n", "2000"]));
    assert!(rows[0][3].parse::<f64>().unwrap().abs() <= 0.05);
    let rows = csv_rows(&stdout(&["limit-check", "--c", "2", "--k", "30", "--n", "1000"]));
    assert!((rows[0][4].parse::<f64>().unwrap() - 0.843482357).abs() < 1e-8);
}

#[test]
fn arithmetic_pass_throughs() {
    assert_eq!(stdout(&["kernels", "--n", "8", "--k", "3"]), "m,kernel\n8,2\n7,7\n6,6\n5,5\n");
    assert_eq!(stdout(&["smooth-scan", "--k", "3", "--n-max", "10"]), "n\n4\n5\n6\n9\n");
    assert_eq!(stdout(&["smooth-scan", "--k", "2", "--n-max", "50"]), "n\n");
    let text = stdout(&["dioph", "--u", "1,1,1", "--kk", "0,9,16", "--bound", "100"]);
    assert!(text.starts_with("x,y,z,X,Y,alpha,beta,on_curve\n"));
    assert!(text.lines().any(|l| l == "5,4,3,25,60,9,16,true"));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["rho", "--n", "3"][..],
        &["rho", "--n", "3", "--k", "3"],
        &["rho-table", "--k", "zero", "--n-from", "3", "--n-to", "4"],
        &["dioph", "--u", "1,1", "--kk", "0,9,16", "--bound", "10"],
        &["dioph", "--u", "1,1,1", "--kk", "9,0,16", "--bound", "10"],
        &["rho", "--n", "3", "--k", "2", "--precision-bits", "512", "--precision-cap", "256"],
        &["rho", "--n", "3", "--k", "2", "--tolerance", "0"],
        &["frobnicate"],
    ] {
        let out = zetaps(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(zetaps(&["--help"]).status.code(), Some(0));
}

#[test]
fn incomplete_scan_exits_two() {
    let out = zetaps(&["phi", "--n", "2", "--tau-max", "20", "--max-boxes", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["complete"], false);
}

#[test]
fn output_independent_of_workers() {
    let args = ["rho-table", "--k", "full", "--n-from", "2", "--n-to", "40"];
    let one = stdout(&[&args[..], &["--workers", "1"]].concat());
    let four = stdout(&[&args[..], &["--workers", "4"]].concat());
    assert_eq!(one, four);
    let phi = ["phi", "--n", "5", "--tau-max", "30"];
    assert_eq!(stdout(&[&phi[..], &["--workers", "1"]].concat()), stdout(&[&phi[..], &["--workers", "3"]].concat()));
}

#[test]
fn precision_from_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_zetaps"));
        cmd.args(["rho", "--n", "5", "--k", "4"]).args(extra);
        match env {
            Some(v) => cmd.env("ZETAPS_PREC_BITS", v),
            None => cmd.env_remove("ZETAPS_PREC_BITS"),
        };
        let out = cmd.output().unwrap();
        csv_rows(&String::from_utf8(out.stdout).unwrap())[0][6].clone()
    };
    assert_eq!(run(None, &[]), "256");
    assert_eq!(run(Some("512"), &[]), "512");
    assert_eq!(run(Some("512"), &["--precision-bits", "1024"]), "1024");
}

#[test]
fn json_tables_and_out_file() {
    let v: Value = serde_json::from_str(&stdout(&["kernels", "--n", "8", "--k", "3", "--format", "json"])).unwrap();
    assert_eq!(v[0]["m"], 8);
    assert_eq!(v[0]["kernel"], 2);
    let dir = std::env::temp_dir().join(format!("zetaps-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.csv");
    let out = stdout(&["smooth-scan", "--k", "3", "--n-max", "10", "--out", path.to_str().unwrap()]);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "n\n4\n5\n6\n9\n");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn digits_flag() {
    let rows = csv_rows(&stdout(&["limit-check", "--c", "1", "--k", "30", "--n", "1000", "--digits", "4"]));
    assert_eq!(rows[0][4], "0.418");
}
