use std::f64::consts::PI;
use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bethe-asym")).args(args).output().expect("spawn bethe-asym")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// `# name = value` lines from stderr.
fn scalar(o: &Output, name: &str) -> f64 {
    let prefix = format!("# {name} = ");
    stderr(o)
        .lines()
        .find_map(|l| l.strip_prefix(&prefix).map(|v| v.parse().unwrap()))
        .unwrap_or_else(|| panic!("scalar {name} missing in {}", stderr(o)))
}

fn csv_rows(o: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(o);
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

#[test]
fn thermo_free_fermion_header() {
    let o = run(&["thermo", "--model", "xxz", "--zeta", "1.5707963", "--field", "2.0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (header, rows) = csv_rows(&o);
    assert_eq!(header, ["lambda", "rho", "Z", "eps"]);
    assert_eq!(rows.len(), 128);
    assert!((scalar(&o, "q") - 0.658479).abs() < 1e-6);
    assert!((scalar(&o, "p_F") - PI / 3.0).abs() < 1e-6);
    assert!((scalar(&o, "D") - 0.333333).abs() < 1e-6);
}

#[test]
fn thermo_bose_gas_consistency() {
    let o = run(&["thermo", "--model", "ll", "--c", "4", "--field", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(scalar(&o, "D_minus_pF_over_pi").abs() < 1e-12);
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        &["thermo", "--model", "xxz", "--zeta", "1.0"][..],
        &["thermo", "--zeta", "1", "--delta", "0.5", "--field", "1"],
        &["frobnicate"],
        &["szsz", "--model", "ll", "--c", "1", "--field", "1"],
        &["jj", "--zeta", "1", "--field", "1"],
        &["verify", "--only", "nonsense"],
        &["szsz", "--zeta", "1", "--field", "1", "--m", "5:1:1"],
        &["thermo", "--zeta", "1", "--field", "1", "--format", "xml"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains("Usage") || stderr(&o).contains("usage"), "{args:?}");
    }
}

#[test]
fn numeric_failure_exits_2() {
    // field above saturation: no Fermi sea
    let o = run(&["thermo", "--zeta", "1.5707963267948966", "--field", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Fermi"), "{}", stderr(&o));
}

#[test]
fn szsz_free_fermion_rows_match_closed_form() {
    let o = run(&["szsz", "--zeta", "1.5707963267948966", "--field", "2", "--m", "1:100:1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (header, rows) = csv_rows(&o);
    assert_eq!(header, ["m", "const_term", "power_term", "osc_term", "total"]);
    assert_eq!(rows.len(), 100);
    for (k, r) in rows.iter().enumerate() {
        let m: f64 = r[0].parse().unwrap();
        assert_eq!(m, (k + 1) as f64, "input order preserved");
        let total: f64 = r[4].parse().unwrap();
        let closed = 1.0 / 9.0 - 2.0 / (PI * PI * m * m) * (1.0 - (2.0 * PI * m / 3.0).cos());
        assert!((total - closed).abs() < 1e-10, "m = {m}: {total} vs {closed}");
    }
    for name in ["Z_q", "p_F", "D", "C0", "C1", "A_tilde", "F_sigma_sq"] {
        scalar(&o, name);
    }
}

#[test]
fn jj_weak_coupling_exponent() {
    let o = run(&["jj", "--model", "ll", "--c", "1e6", "--field", "1", "--m", "5,10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!((scalar(&o, "osc_exp") - 2.0).abs() < 1e-5);
}

#[test]
fn json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = run(&["szsz", "--delta", "0.5", "--field", "1", "--m", "2,7,30", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["command"], "szsz");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["rows"][1]["m"], 7.0);
    assert!(v["scalars"]["C0"].is_f64());
    // same numbers, bit for bit, as the CSV of the same run
    let c = run(&["szsz", "--delta", "0.5", "--field", "1", "--m", "2,7,30"]);
    let (header, rows) = csv_rows(&c);
    for (i, r) in rows.iter().enumerate() {
        for (j, name) in header.iter().enumerate() {
            let from_csv: f64 = r[j].parse().unwrap();
            assert_eq!(v["rows"][i][name.as_str()].as_f64().unwrap().to_bits(), from_csv.to_bits(), "{name}");
        }
    }

    let o = run(&["thermo", "--zeta", "1", "--field", "1", "--format", "json", "--nodes", "16"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["rows"][0]["Z"].is_f64());
}

#[test]
fn csv_is_deterministic() {
    let args = ["generating", "--zeta", "1.0471975511965976", "--field", "1", "--beta-re", "0.3", "--beta-im", "0.5", "--m", "10:40:10"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(csv_rows(&a).1.len(), 4);
    let v1 = run(&["verify", "--only", "fredholm", "--seed", "7"]);
    let v2 = run(&["verify", "--only", "fredholm", "--seed", "7"]);
    assert_eq!(v1.stdout, v2.stdout);
}

#[test]
fn gsk_check_residuals_decrease() {
    let o = run(&["gsk-check", "--gamma", "0.1", "--m", "100,200,400"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (_, rows) = csv_rows(&o);
    let res: Vec<f64> = rows.iter().map(|r| r[7].parse().unwrap()).collect();
    assert!(res[0] > res[1] && res[1] > res[2], "{res:?}");
    assert!(scalar(&o, "relation_residual") < 1e-10);
}

#[test]
fn verify_only_cycle() {
    let o = run(&["verify", "--only", "cycle"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,residual,tolerance,passed"));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    for r in rows {
        assert!(r.trim_start_matches('"').starts_with("cycle/") && r.ends_with(",true"), "{r}");
    }
}

#[test]
fn config_precedence() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# free-fermion point\nmodel = xxz\nzeta = 1.5707963267948966\nfield = 2\nm = 1,2\nformat = json").unwrap();
    let cfg = f.path().to_str().unwrap();

    let o = run(&["szsz", "--config", cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert!((v["scalars"]["D"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-10);

    // flags win over the file, including --delta over the file's zeta
    let o = run(&["szsz", "--config", cfg, "--m", "5", "--delta", "0.5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (_, rows) = csv_rows(&o);
    assert_eq!(rows.len(), 1);
    assert!(scalar(&o, "Z_q") > 0.5 && (scalar(&o, "Z_q") - 1.0).abs() > 1e-3);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "colour = blue").unwrap();
    assert_eq!(run(&["thermo", "--config", bad.path().to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["thermo", "--config", "/nonexistent/cfg"]).status.code(), Some(1));
}
