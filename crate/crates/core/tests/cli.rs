use std::path::Path;
use std::process::{Command, Output};

use casimir_core::cli::parse_grid;

fn casimir(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .current_dir(dir)
        .env_remove("CASIMIR_CONFIG_DIR")
        .output()
        .expect("spawn casimir")
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let lines = data_lines(text);
    let k = lines[0]
        .split(',')
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    lines[1..]
        .iter()
        .map(|l| l.split(',').nth(k).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn grid_syntax() {
    let g = parse_grid("100nm:500nm:1201").unwrap();
    assert_eq!(g.len(), 1201);
    assert_eq!(g[0], 1e-7);
    assert_eq!(g[1200], 5e-7);
    assert_eq!(parse_grid("1um:2um:1").unwrap(), vec![1e-6]);
    assert!(parse_grid("1um").is_err());
    assert!(parse_grid("1um:2um:0").is_err());
    let err = parse_grid("100nm:5xx:3").unwrap_err().to_string();
    assert!(err.contains("5xx"), "{err}");
    assert!(parse_grid("500nm:100nm:3").is_err());
}

#[test]
fn delta_force_default_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let out = casimir(&["delta-force", "--out", "df.csv"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(tmp.path().join("df.csv")).unwrap();
    assert!(text.starts_with("# casimir "));
    assert!(text.lines().any(|l| l.starts_with("# config: {")));
    let diel = column(&text, "delta_f_dielectric_N");
    let dc = column(&text, "delta_f_with_dc_N");
    assert_eq!(diel.len(), 1201);
    assert!(diel.iter().all(|&v| v < 0.0));
    assert!(diel.iter().zip(&dc).all(|(a, b)| a.abs() > b.abs()));
    let z = column(&text, "z_m");
    assert_eq!(z[0], 1e-7);
    assert_eq!(z[1200], 5e-7);
}

#[test]
fn synth_is_reproducible() {
    // Same output name in separate directories: the preamble records `--out`.
    let run = |args: &[&str]| {
        let tmp = tempfile::tempdir().unwrap();
        let mut full = args.to_vec();
        full.extend(["--out", "m.csv"]);
        let o = casimir(&full, tmp.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(tmp.path().join("m.csv")).unwrap()
    };
    let meas = |seed| {
        run(&[
            "synth",
            "--noise",
            "1e-13",
            "--seed",
            seed,
            "--grid",
            "100nm:300nm:21",
            "--pairs",
            "8",
        ])
    };
    assert_eq!(meas("7"), meas("7"));
    assert_ne!(meas("7"), meas("8"));
    let cal = |seed| run(&["synth", "--kind", "calibration", "--seed", seed, "--noise", "0.01"]);
    assert_eq!(cal("3"), cal("3"));
    assert_ne!(cal("3"), cal("4"));
}

#[test]
fn synth_then_analyze_recovers_truth() {
    let tmp = tempfile::tempdir().unwrap();
    let o = casimir(
        &["synth", "--grid", "100nm:200nm:5", "--pairs", "41", "--out", "m.csv"],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = casimir(&["analyze", "--input", "m.csv", "--out", "s.csv"], tmp.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = std::fs::read_to_string(tmp.path().join("s.csv")).unwrap();
    let mean = column(&summary, "mean_N");
    let o = casimir(
        &["delta-force", "--grid", "100nm:200nm:5", "--out", "t.csv"],
        tmp.path(),
    );
    assert!(o.status.success());
    let truth = column(
        &std::fs::read_to_string(tmp.path().join("t.csv")).unwrap(),
        "delta_f_dielectric_N",
    );
    assert_eq!(mean.len(), 5);
    for (m, t) in mean.iter().zip(&truth) {
        assert!((m - t).abs() < 1e-9 * t.abs(), "{m:e} vs {t:e}");
    }
}

#[test]
fn calibrate_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let o = casimir(&["synth", "--kind", "calibration", "--out", "cal.csv"], tmp.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = casimir(
        &[
            "calibrate",
            "--input",
            "cal.csv",
            "--format",
            "json",
            "--out",
            "fit.json",
        ],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(tmp.path().join("fit.json")).unwrap()).unwrap();
    assert_eq!(doc["command"], "calibrate");
    assert!(doc["config"].is_object());
    let text = doc["data"].to_string();
    assert!(text.contains("residual_potential_V0"), "{text}");
}

#[test]
fn illuminated_permittivity_exceeds_dark() {
    let tmp = tempfile::tempdir().unwrap();
    let o = casimir(&["permittivity", "--out", "eps.csv"], tmp.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(tmp.path().join("eps.csv")).unwrap();
    let light = column(&text, "si_illuminated");
    assert_eq!(light.len(), 201);
    for dark in ["si_dark_dielectric", "si_dark_with_dc"] {
        let d = column(&text, dark);
        assert!(light.iter().zip(&d).all(|(l, d)| l > d), "{dark}");
    }
    let o = casimir(&["permittivity", "--format", "json"], tmp.path());
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["data"]["xi_rad_s"].as_array().unwrap().len(), 201);
}

#[test]
fn malformed_input_reports_line() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("bad.csv"),
        "z_m,delta_f_tot_N,v_light_V,v_dark_V\n1e-7,-3e-12,-0.3,-0.2\n1e-7,oops,-0.3,-0.2\n",
    )
    .unwrap();
    let o = casimir(&["analyze", "--input", "bad.csv"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.csv") && err.contains('3'), "{err}");

    let o = casimir(&["force", "--grid", "100nm:abc:3"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("abc"));

    let o = casimir(&["force", "--no-such-flag"], tmp.path());
    assert_eq!(o.status.code(), Some(2));

    let o = casimir(&["force", "--profile", "unobtainium"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn truncated_matsubara_sum_leaves_partial_dump() {
    let tmp = tempfile::tempdir().unwrap();
    let o = casimir(
        &["force", "--grid", "100nm:3um:3", "--max-terms", "100", "--out", "f.csv"],
        tmp.path(),
    );
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!tmp.path().join("f.csv").exists());
    let text = std::fs::read_to_string(tmp.path().join("f.csv.partial")).unwrap();
    assert!(text.contains("# failed:"));
    let f = column(&text, "force_N");
    assert!(!f.is_empty() && f.len() < 3);
}

#[test]
fn profile_from_config_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = serde_json::json!({
        "profile": "si_illuminated",
        "drude": [{"omega_p": 1e15, "gamma": 1e13}, {"omega_p": 1e15, "gamma": 1e13}],
    });
    std::fs::write(tmp.path().join("doped.json"), spec.to_string()).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args([
            "permittivity",
            "--profile",
            "doped",
            "--profile",
            "si_illuminated",
            "--points",
            "5",
        ])
        .current_dir(tmp.path())
        .env("CASIMIR_CONFIG_DIR", tmp.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let doped = column(&text, "doped");
    let reference = column(&text, "si_illuminated");
    assert!(doped[0] > reference[0]);
}
