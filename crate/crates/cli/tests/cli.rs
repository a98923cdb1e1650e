//! End-to-end behaviour of the `casimir` binary.

use std::process::{Command, Output};

fn casimir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .env_remove("CASIMIR_THREADS")
        .output()
        .expect("run casimir")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok_json(args: &[&str]) -> serde_json::Value {
    let o = casimir(args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).expect("valid json")
}

/// Data rows of a CSV body, split into cells.
fn csv_rows(body: &str) -> Vec<Vec<String>> {
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("# schema=1"));
    let header = lines.next().unwrap();
    assert!(header.starts_with("axis_value,"), "{header}");
    lines
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn pfa_force_fifty_micron_sphere() {
    let v = ok_json(&[
        "force", "--a", "50", "--d", "1", "--model", "pfa", "--format", "json",
    ]);
    assert!((v["force_pn"].as_f64().unwrap() - 10.48).abs() < 0.01);
    assert!((v["ratio"].as_f64().unwrap() - 1.026_666_666_666_666_7).abs() < 1e-12);
}

#[test]
fn modesum_force_tracks_narrow_gap_formula() {
    let sum = ok_json(&[
        "force", "--a", "50", "--d", "1", "--model", "modesum", "--tol", "1e-6", "--format", "json",
    ]);
    let pfa = ok_json(&[
        "force", "--a", "50", "--d", "1", "--model", "pfa", "--format", "json",
    ]);
    let ratio = sum["force_pn"].as_f64().unwrap() / pfa["force_pn"].as_f64().unwrap();
    // The mode sum carries a first-order slope of 2/3, not 4/3; see README.
    let xi: f64 = 0.02;
    let expected = (1.0 + 2.0 / 3.0 * xi) / (1.0 + 4.0 / 3.0 * xi);
    assert!((ratio - expected).abs() < 0.005, "ratio {ratio}");
    let diag = &sum["observable"]["diagnostics"];
    assert!(diag["l_used"].as_u64().unwrap() > 0);
    assert!(diag["panels"].as_u64().unwrap() > 0);
}

#[test]
fn degenerate_geometry_is_config_error() {
    let o = casimir(&["force", "--a", "50", "--b", "50"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("gap must be positive"));
    let o = casimir(&["force", "--a", "50", "--b", "51", "--d", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exhausted_caps_exit_two() {
    let o = casimir(&["force", "--a", "50", "--d", "1", "--lmax", "5"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("convergence"));
}

#[test]
fn thermal_plateau_and_temperature_echo() {
    let v = ok_json(&[
        "thermal", "--a", "50", "--d", "2.5", "--t", "20", "--format", "json",
    ]);
    assert!(v["plateau_deviation"].as_f64().unwrap() <= 0.05);
    assert!(v["beta_f"].as_f64().unwrap() < 0.0);

    let o = casimir(&["thermal", "--a", "50", "--d", "2.5", "--T", "140"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let diag = text.lines().find(|l| l.starts_with("diagnostics")).unwrap();
    assert!(diag.contains("t = 19.2"), "{diag}");
}

#[test]
fn thermal_limits() {
    let v = ok_json(&[
        "thermal", "--limit", "plate", "--d", "1", "--format", "json",
    ]);
    let q = v["quadrature_per_um2"].as_f64().unwrap();
    let c = v["closed_form_per_um2"].as_f64().unwrap();
    assert!((c + 0.011_957).abs() < 1e-6);
    assert!(((q - c) / c).abs() < 1e-8);

    let stat = ok_json(&[
        "thermal", "--a", "50", "--d", "2.5", "--t", "1000", "--limit", "static", "--format",
        "json",
    ]);
    let full = ok_json(&[
        "thermal", "--a", "50", "--d", "2.5", "--t", "1000", "--format", "json",
    ]);
    let (s, f) = (
        stat["beta_f"].as_f64().unwrap(),
        full["beta_f"].as_f64().unwrap(),
    );
    assert!(((s - f) / s).abs() < 1e-6);

    let narrow = ok_json(&[
        "thermal", "--a", "50", "--d", "0.5", "--t", "1", "--limit", "narrow", "--format", "json",
    ]);
    let full = ok_json(&[
        "thermal", "--a", "50", "--d", "0.5", "--t", "1", "--format", "json",
    ]);
    let (n, f) = (
        narrow["beta_f"].as_f64().unwrap(),
        full["beta_f"].as_f64().unwrap(),
    );
    assert!(((n - f) / f).abs() < 0.03);

    let o = casimir(&["thermal", "--a", "50", "--d", "2.5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn stray_angle_sweep() {
    let o = casimir(&[
        "sweep", "--a", "50", "--d", "1", "--axis", "delta", "--start", "0", "--stop", "10",
        "--count", "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    let factors: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    for (got, want) in factors.iter().zip([1.0, 0.9924, 0.9698]) {
        assert!((got - want).abs() < 5e-5, "{got} vs {want}");
    }
}

#[test]
fn gap_ratio_sweep_slope() {
    let o = casimir(&[
        "sweep", "--a", "50", "--axis", "xi", "--start", "0.005", "--stop", "0.02", "--count", "3",
        "--scale", "log", "--tol", "1e-7",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[3].parse::<f64>().unwrap() - 1.0))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    // Measured first-order slope of the mode sum; see README.
    assert!((slope - 2.0 / 3.0).abs() < 0.05, "slope {slope}");
}

#[test]
fn sweep_rejects_bad_axis_ranges() {
    for args in [
        &[
            "sweep", "--a", "50", "--axis", "xi", "--start", "0.005", "--stop", "0.02", "--count",
            "1",
        ][..],
        &[
            "sweep", "--a", "50", "--axis", "xi", "--start", "0.02", "--stop", "0.005", "--count",
            "3",
        ][..],
        &[
            "sweep", "--a", "50", "--axis", "d", "--start", "0", "--stop", "1", "--count", "3",
            "--scale", "log",
        ][..],
    ] {
        assert_eq!(casimir(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn thermal_sweep_columns() {
    let o = casimir(&[
        "sweep", "--a", "10", "--d", "1", "--axis", "t", "--start", "1", "--stop", "100",
        "--count", "3", "--scale", "log",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let body = stdout(&o);
    assert!(body
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("axis_value,beta_F,"));
    let rows = csv_rows(&body);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[6].parse::<usize>().unwrap() >= 1));
}

#[test]
fn csv_cells_carry_full_precision() {
    let o = casimir(&[
        "sweep", "--a", "10", "--axis", "b", "--start", "10.5", "--stop", "12", "--count", "2",
    ]);
    let body = stdout(&o);
    for row in csv_rows(&body) {
        for cell in &row[..5] {
            let mantissa = cell
                .split('e')
                .next()
                .unwrap()
                .trim_start_matches('-')
                .replace('.', "");
            assert_eq!(mantissa.len(), 17, "{cell}");
        }
    }
    assert_eq!(
        body,
        stdout(&casimir(&[
            "sweep", "--a", "10", "--axis", "b", "--start", "10.5", "--stop", "12", "--count", "2"
        ]))
    );
}

#[test]
fn factor_table() {
    let o = casimir(&["factors", "--xi", "0.1"]);
    let text = stdout(&o);
    assert!(
        text.contains("f = 1.0050") && text.contains("f = 0.9500") && text.contains("f = 1.1333"),
        "{text}"
    );
    assert!(text.contains("opposite signs"));

    let v = ok_json(&["factors", "--xi", "0", "--format", "json"]);
    assert!(v
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["value"].as_f64() == Some(1.0)));

    let o = casimir(&["factors", "--xi", "0.3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("window"));
}

#[test]
fn selfcheck_suites() {
    let o = casimir(&["selfcheck"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(
        stdout(&o).contains("checks passed in suites: riccati, modes, observables, asymptotics")
    );

    let o = casimir(&["selfcheck", "--suite", "riccati"]);
    let text = stdout(&o);
    assert!(text.contains("wronskian") && text.contains("ode-residual"));
    assert!(!text.contains("decomposition"));
    assert_eq!(stdout(&casimir(&["selfcheck", "--riccati"])), text);

    let o = casimir(&["selfcheck", "--suite", "bogus"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn selfcheck_fault_injection() {
    let o = casimir(&[
        "selfcheck",
        "--modes",
        "--inject-fault",
        "decomposition-identity",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("modes/decomposition-identity"));
    assert!(stdout(&o).contains("FAIL modes"));
}

#[test]
fn config_file_precedence_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "a = 50\nd = 1\nmodel = \"pfa\"\nformat = \"json\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = ok_json(&["force", "--config", cfg]);
    assert!((from_file["force_pn"].as_f64().unwrap() - 10.48).abs() < 0.01);

    let overridden = ok_json(&["force", "--config", cfg, "--d", "2"]);
    assert!((overridden["geometry"]["d_um"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    let o = casimir(&["force", "--config", cfg, "--b", "52"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let out = dir.path().join("f.json");
    let o = casimir(&["force", "--config", cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written, from_file);

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "radius = 3\n").unwrap();
    let o = casimir(&["force", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown config key"));
}

#[test]
fn thread_variable_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(["factors", "--xi", "0.1"])
        .env("CASIMIR_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(casimir(&["force", "--a", "fifty"]).status.code(), Some(1));
    assert_eq!(casimir(&["nonsense"]).status.code(), Some(1));
    assert_eq!(casimir(&["--help"]).status.code(), Some(0));
}
