use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbm-svd")).args(args).output().expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn generate_then_cluster_recovers_truth() {
    let dir = tempfile::tempdir().unwrap();
    let (graph, truth, found) = (dir.path().join("g.txt"), dir.path().join("t.json"), dir.path().join("f.json"));
    let gen = run(&[
        "generate", "--n", "200", "--k", "2", "--p", "0.8", "--q", "0.1", "--seed", "5",
        "--graph", p(&graph), "--partition", p(&truth),
    ]);
    assert!(gen.status.success(), "{}", String::from_utf8_lossy(&gen.stderr));
    for extra in [&["--k", "auto"][..], &["--k", "2", "--variant", "threshold"][..]] {
        let mut args = vec!["cluster", "--graph", p(&graph), "--out", p(&found), "--truth", p(&truth)];
        args.extend_from_slice(extra);
        let out = run(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout_json(&out)["exact"], true, "{extra:?}");
        let part: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&found).unwrap()).unwrap();
        assert_eq!(part["assignment"].as_array().unwrap().len(), 200);
    }
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for i in 0..2 {
        let (g, t) = (dir.path().join(format!("g{i}")), dir.path().join(format!("t{i}")));
        let out = run(&["generate", "--n", "50", "--k", "3", "--p", "0.5", "--q", "0.2", "--seed", "9",
            "--graph", p(&g), "--partition", p(&t)]);
        assert!(out.status.success());
        texts.push((std::fs::read(&g).unwrap(), std::fs::read(&t).unwrap()));
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn verify_reports_margins() {
    let out = run(&["verify", "--check", "eig,decomp", "--n", "100", "--k", "2", "--p", "0.7", "--q", "0.1", "--trials", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["trials"], 2);
    assert!(v.get("delta_min").is_some());
}

#[test]
fn sweep_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let (config, csv, svg) = (dir.path().join("c.json"), dir.path().join("s.csv"), dir.path().join("s.svg"));
    std::fs::write(&config, r#"{"n":[60],"k":[2],"p":[0.6,0.8],"q":[0.1,0.2],"trials":2,"base_seed":1}"#).unwrap();
    let out = run(&["sweep", "--config", p(&config), "--out", p(&csv)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("n,k,p,q,trial,seed,exact,agreement,k_hat,separation_ratio,eps_max,runtime_ms"));
    assert_eq!(text.lines().count(), 1 + 4 * 3);
    let out = run(&["plot", "--csv", p(&csv), "--x", "p", "--y", "q", "--out", p(&svg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let image = std::fs::read_to_string(&svg).unwrap();
    assert!(image.starts_with("<svg") || image.starts_with("<?xml"));
    assert_eq!(image.matches("class=\"cell\"").count(), 4);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--check", "bogus", "--n", "10", "--k", "2", "--p", "0.5", "--q", "0.1"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--n", "10", "--k", "20", "--p", "0.5", "--q", "0.1"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.txt");
    let out = run(&["cluster", "--graph", p(&missing), "--out", p(&dir.path().join("o.json"))]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}
