use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn ql(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ql")).args(args).env_remove("QL_OUT_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn spectrum_point_in_d1_is_negative_definite() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ql(&["spectrum", "--phi-w", "1.885", "--T", "0.157", "--n-eigs", "8", "--out", out]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("NEGATIVE_DEFINITE"));
    let doc = json(&dir.path().join("spectrum.json"));
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["entries"][0]["verdict"], "NEGATIVE_DEFINITE");
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn spectrum_d4_saddle_and_excluded_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ql(&["spectrum", "--phi-w", "0.785", "--T", "0.785", "--out", out]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("SADDLE"));
    let o = ql(&["spectrum", "--phi-w", "pi/4", "--T", "pi/4", "--out", out]);
    assert!(o.status.success());
    assert_eq!(json(&dir.path().join("spectrum.json"))["entries"][0]["verdict"], "NOT_APPLICABLE");
}

#[test]
fn landscape_writes_full_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ql(&["landscape", "--phi-w", "2.985", "--T", "0.157", "--nu", "50", "--step", "1", "--out", out]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("landscape_2.9850_0.1570.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("a1,a2,J"));
    assert_eq!(lines.count(), 101 * 101);
}

#[test]
fn mintime_reports_pi_minus_phi() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ql(&["mintime", "--phi-w", "3pi/4", "--methods", "grape", "--runs", "1", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc = json(&dir.path().join("mintime.json"));
    let t_min = doc["record"]["T_min"].as_f64().unwrap();
    assert!((t_min - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    assert!((doc["record"]["achieved_J"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert_eq!(doc["within_one_step"], true);
}

#[test]
fn gradcheck_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(ql(&["gradcheck", "--samples", "100", "--seed", "3", "--out", out]).status.code(), Some(0));
    let o = ql(&["gradcheck", "--samples", "10", "--seed", "3", "--grad-tol", "1e-14", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL gradient vs central differences"));
}

#[test]
fn invalid_input_is_rejected() {
    assert_eq!(ql(&["sweep", "--bogus"]).status.code(), Some(2));
    assert_eq!(ql(&["spectrum", "--phi-w", "3pi5", "--T", "0.1"]).status.code(), Some(2));
    assert_eq!(ql(&["spectrum", "--phi-w", "4", "--T", "0.1"]).status.code(), Some(2));
    assert_eq!(ql(&["sweep", "--methods", "cmaes"]).status.code(), Some(2));
    assert_eq!(ql(&["sweep", "--only-domain", "D4"]).status.code(), Some(2));
    assert_eq!(ql(&["landscape", "--phi-w", "2", "--T", "0.1", "--step", "0.3"]).status.code(), Some(2));
}

#[test]
fn domain_filtered_sweep_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = |dir: &str| -> Vec<String> {
        ["sweep", "--only-domain", "D1", "--methods", "grape", "--runs", "1", "--seed", "7", "--out", dir]
            .iter()
            .map(|s| s.to_string())
            .collect()
    };
    let run = |dir: &Path, workers: &str| {
        let mut v = args(dir.to_str().unwrap());
        v.extend(["--workers".to_string(), workers.to_string()]);
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        assert!(ql(&refs).status.success());
    };
    run(a.path(), "1");
    run(b.path(), "2");
    let doc = json(&a.path().join("sweep.json"));
    assert_eq!(doc["records"].as_array().unwrap().len(), 45);
    assert!(!a.path().join("table1.csv").exists());
    for f in ["sweep.json", "stats.json"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn flags_override_config_and_env_sets_default_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ql.toml");
    std::fs::write(&cfg, "seed = 3\nmethods = [\"grape\"]\nruns = 1\nonly_domain = \"D2\"\n").unwrap();
    let env_out = dir.path().join("from_env");
    let o = Command::new(env!("CARGO_BIN_EXE_ql"))
        .args(["--config", cfg.to_str().unwrap(), "sweep", "--seed", "5"])
        .env("QL_OUT_DIR", &env_out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc = json(&env_out.join("sweep.json"));
    assert_eq!(doc["config"]["base_seed"], 5);
    assert_eq!(doc["config"]["methods"], serde_json::json!(["GRAPE"]));
    assert_eq!(doc["records"].as_array().unwrap().len(), 10);
}

#[test]
fn help_describes_every_flag() {
    for cmd in ["sweep", "spectrum", "landscape", "mintime", "gradcheck"] {
        let o = ql(&[cmd, "--help"]);
        assert!(o.status.success());
        let text = stdout(&o);
        let flags: Vec<&str> = text.lines().map(str::trim).filter(|l| l.starts_with("--") || l.starts_with("-h")).collect();
        assert!(flags.len() >= 3, "{cmd}: {text}");
        for line in flags {
            let described = line.split_once("  ").is_some_and(|(_, d)| !d.trim().is_empty());
            assert!(described, "{cmd}: undocumented flag line '{line}'");
        }
    }
}
