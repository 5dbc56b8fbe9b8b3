use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_antisparse")).args(args).output().expect("spawn");
    assert!(
        out.status.success(),
        "{args:?} failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn prox_prints_the_clipped_vector() {
    let o = run(&["prox", "--weight", "2", "--values", "3,-2,1"]);
    assert_eq!(stdout(&o).trim(), "1.5,-1.5,1.0");
}

#[test]
fn prox_rejects_bad_weight() {
    let out = Command::new(env!("CARGO_BIN_EXE_antisparse"))
        .args(["prox", "--weight", "-1", "--values", "1"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn sample_then_acf() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["exact", "gibbs", "pmala"] {
        let f = dir.path().join(format!("{kind}.csv"));
        let fs = f.to_str().unwrap();
        run(&["sample", "--kind", kind, "--n", "4", "--lambda", "2", "--iters", "500", "--burn-in", "100", "--seed", "3", "--out", fs]);
        let text = std::fs::read_to_string(&f).unwrap();
        let mut lines = text.lines();
        let header: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
        assert_eq!(header["meta"]["generator"], kind);
        assert_eq!(lines.next().unwrap(), "iter,x0,x1,x2,x3");
        assert_eq!(lines.count(), 500);

        let acf = stdout(&run(&["acf", "--input", fs, "--max-lag", "5"]));
        let rows: Vec<&str> = acf.lines().collect();
        assert_eq!(rows[0], "lag,acf");
        assert_eq!(rows.len(), 7);
        for r in &rows[2..] {
            let v: f64 = r.split(',').nth(1).unwrap().parse().unwrap();
            assert!(v.abs() <= 1.0);
        }
    }
}

#[test]
fn sample_replays_under_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        run(&["sample", "--kind", "pmala", "--n", "3", "--lambda", "1", "--iters", "200", "--seed", "9", "--out", p.to_str().unwrap()]);
    }
    let body = |p: &Path| std::fs::read_to_string(p).unwrap().lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&a), body(&b));
}

#[test]
fn code_on_a_generated_problem_and_on_its_file() {
    let dir = tempfile::tempdir().unwrap();
    let d1 = dir.path().join("gen");
    run(&["code", "--m", "8", "--n", "10", "--signal", "toy", "--kind", "gibbs", "--iters", "200", "--burn-in", "100", "--seed", "1", "--out-dir", d1.to_str().unwrap()]);
    let est = json(&d1.join("estimates.json"));
    assert_eq!(est["n"], 10);
    assert!(est["estimates"]["MMSE"]["metrics"]["papr"].as_f64().unwrap() >= 1.0);
    assert!(est["estimates"]["mMAP"]["score"].is_number());
    assert!(d1.join("chain.csv").exists());

    let d2 = dir.path().join("file");
    let problem = d1.join("problem.csv");
    run(&["code", "--problem", problem.to_str().unwrap(), "--kind", "pmala", "--iters", "100", "--burn-in", "50", "--mh-moves", "3", "--out-dir", d2.to_str().unwrap()]);
    let est = json(&d2.join("estimates.json"));
    let rate = est["acceptance_rate"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&rate));
    // the toy problem carries its true signal, so SNR_x is reported
    assert!(est["estimates"]["MMSE"]["metrics"]["snr_x"].is_number());
}

#[test]
fn geweke_writes_report_and_qq() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("g");
    let o = run(&["geweke", "--kind", "gibbs", "--iters", "2000", "--seed", "4", "--qq-points", "9", "--out-dir", d.to_str().unwrap()]);
    assert!(stdout(&o).contains("KS p ="));
    let r = json(&d.join("geweke.json"));
    assert!(r["ks_p_value"].as_f64().unwrap() >= 0.0);
    assert_eq!(r["cone_counts"].as_array().unwrap().len(), 3);
    let qq = std::fs::read_to_string(d.join("qq.csv")).unwrap();
    assert_eq!(qq.lines().count(), 10);
}

#[test]
fn scenario_from_preset_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("s");
    run(&["scenario", "--preset", "toy", "--trials", "2", "--iters", "60", "--burn-in", "30", "--out-dir", d.to_str().unwrap()]);
    let r = json(&d.join("report.json"));
    assert_eq!(r["trials"].as_array().unwrap().len(), 2);
    assert_eq!(r["config"]["trials"], 2);
    let plot = std::fs::read_to_string(d.join("plot.csv")).unwrap();
    assert!(plot.lines().next().unwrap().starts_with("trial,"));
    assert_eq!(plot.lines().count(), 3);

    // the echoed config reruns the same experiment
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, serde_json::to_string(&r["config"]).unwrap()).unwrap();
    let d2 = dir.path().join("s2");
    run(&["scenario", "--config", cfg.to_str().unwrap(), "--out-dir", d2.to_str().unwrap()]);
    assert_eq!(json(&d2.join("report.json"))["config_hash"], r["config_hash"]);
}

#[test]
fn unknown_preset_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_antisparse"))
        .args(["scenario", "--preset", "nope", "--out-dir", dir.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!out.status.success());
}
