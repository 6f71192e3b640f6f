use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn octoqkd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_octoqkd")).args(args).output().expect("binary runs")
}

const NOISELESS: &str = r#"{
  "blocks": 1000,
  "v_a": 3.0,
  "channel": {"transmission": 1.0, "excess_noise": 0.0},
  "detector": {"eta": 1.0},
  "reconciliation": {"code": "peg-r1_2-n1024", "repetition": 1},
  "epsilon": {"pe": 0.5, "bar": 0.5, "pa": 0.5}
}"#;

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("config.json");
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn simulate(config: &str, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["simulate", "--config", config, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    octoqkd(&args)
}

#[test]
fn noiseless_run_writes_matching_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), NOISELESS);
    let out = simulate(&cfg, &dir.path().join("run"), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let alice = fs::read_to_string(dir.path().join("run/alice.key")).unwrap();
    let bob = fs::read_to_string(dir.path().join("run/bob.key")).unwrap();
    assert_eq!(alice, bob);
    assert!(!alice.trim().is_empty());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run/report.json")).unwrap()).unwrap();
    assert_eq!(report["keys_match"], true);
    assert_eq!(report["key_length"].as_u64().unwrap() as usize, alice.trim().len());
    assert_eq!(report["leakage"]["bits_per_frame"], 512 + 32);
}

#[test]
fn entanglement_breaking_noise_gives_empty_key_and_success() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &NOISELESS.replace(r#""excess_noise": 0.0"#, r#""excess_noise": 1.0"#));
    let out = simulate(&cfg, &dir.path().join("run"), &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no positive rate"));
    assert_eq!(fs::read_to_string(dir.path().join("run/alice.key")).unwrap(), "\n");
}

#[test]
fn fixed_seed_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), NOISELESS);
    assert!(simulate(&cfg, &dir.path().join("a"), &["--seed", "7"]).status.success());
    assert!(simulate(&cfg, &dir.path().join("b"), &["--seed", "7", "--workers", "1"]).status.success());
    for f in ["alice.key", "bob.key", "report.json"] {
        let a = fs::read(dir.path().join("a").join(f)).unwrap();
        let b = fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs");
    }
}

#[test]
fn figure_tables_have_headers() {
    let out = octoqkd(&["figure", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("v_a,delta_xi,z,z_tms,f"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r[1] > 0.0));

    let out = octoqkd(&["figure", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("v_a,k_beta_0.8,k_beta_0.9\n"));
}

#[test]
fn figure3_writes_four_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = octoqkd(&["figure", "3", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("figure3.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("distance_km,k_n1e8,k_n1e10,k_n1e12,k_n1e14"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(octoqkd(&["figure", "4"]).status.code(), Some(2));
    assert_eq!(octoqkd(&["bogus"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"unknown_key": 1}"#);
    assert_eq!(octoqkd(&["keyrate", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn numeric_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"detector": {"eta": 1.5}}"#);
    assert_eq!(octoqkd(&["keyrate", "--config", &cfg]).status.code(), Some(3));
    assert_eq!(octoqkd(&["keyrate", "--config", "/nonexistent/config.json"]).status.code(), Some(4));
    let cfg = write_config(dir.path(), r#"{"reconciliation": {"code": "/nonexistent/code.txt"}}"#);
    assert_eq!(octoqkd(&["recon-bench", "--config", &cfg]).status.code(), Some(4));
}

#[test]
fn keyrate_report_is_json() {
    let out = octoqkd(&["keyrate", "--optimize"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["k_asymptotic"].as_f64().unwrap() > 0.0);
    assert_eq!(v["eta"], 0.6);
}

#[test]
fn estimate_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("pairs.csv");
    fs::write(&p, "x,y\n1,1\n-1,1\n").unwrap();
    let out = octoqkd(&["estimate", "--input", p.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["t_hat"], 0.0);
    assert_eq!(v["sigma2_hat"], 1.0);
}

#[test]
fn recon_bench_reports_leakage() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"reconciliation": {"code": "peg-r1_2-n512", "repetition": 1, "bench_snr": [1.0, 3.0, 20.0], "bench_frames": 10}}"#,
    );
    let out = octoqkd(&["recon-bench", "--config", &cfg]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let headers = rd.headers().unwrap().clone();
    let fer = headers.iter().position(|h| h == "frame_error_rate").unwrap();
    let leak = headers.iter().position(|h| h == "leaked_bits_per_frame").unwrap();
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    let fers: Vec<f64> = rows.iter().map(|r| r[fer].parse().unwrap()).collect();
    assert!(fers.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(fers[2], 0.0);
    assert!(rows.iter().all(|r| &r[leak] == "288"));
}
