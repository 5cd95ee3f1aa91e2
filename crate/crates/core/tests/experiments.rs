use sbm_svd::experiments::*;
use sbm_svd::graph_model::SsbmParams;

fn small_config() -> SweepConfig {
    SweepConfig::from_json(
        r#"{"n":[60,90],"k":[2],"p":[0.8,0.6],"q":[0.1],"trials":3,"base_seed":11,
            "checks":["eig","decomp","norm"]}"#,
    )
    .unwrap()
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn sweep_output_independent_of_thread_count() {
    let config = small_config();
    let one = in_pool(1, || sweep_csv(&config).unwrap());
    let four = in_pool(4, || sweep_csv(&config).unwrap());
    assert_eq!(one, four);
    assert_eq!(one, sweep_csv(&config).unwrap());
    let rows = read_rows(one.as_bytes()).unwrap();
    assert_eq!(rows.len(), 4 * (3 + 1));
    assert_eq!(rows.iter().filter(|r| r.is_summary()).count(), 4);
}

#[test]
fn trials_record_requested_margins() {
    let config = small_config();
    let out = run_sweep(&config).unwrap();
    for t in &out.trials {
        assert!(t.error.is_none(), "{:?}", t.error);
        for name in ["delta_min", "triangle", "chain"] {
            assert!(t.margins.contains_key(name), "{name} missing");
        }
    }
}

#[test]
fn config_rejects_bad_grids() {
    for bad in [
        r#"{"n":[],"k":[2],"p":[0.5],"q":[0.1],"trials":1,"base_seed":0}"#,
        r#"{"n":[10],"k":[2],"p":[0.5],"q":[0.1],"trials":0,"base_seed":0}"#,
        r#"{"n":[10],"k":[20],"p":[0.5],"q":[0.1],"trials":1,"base_seed":0}"#,
        r#"{"n":[10],"k":[2],"p":[0.1],"q":[0.5],"trials":1,"base_seed":0,"variant":"threshold"}"#,
        r#"{"n":[10],"k":[2],"p":[0.5],"q":[0.1],"trials":1,"base_seed":0,"k_mode":{"auto":{"k_max":10}}}"#,
    ] {
        assert!(SweepConfig::from_json(bad).is_err(), "{bad}");
    }
}

#[test]
fn cell_seeds_depend_on_every_parameter() {
    let base = SsbmParams { n: 100, k: 2, p: 0.5, q: 0.1, seed: 0 };
    let variants = [
        SsbmParams { n: 101, ..base },
        SsbmParams { k: 3, ..base },
        SsbmParams { p: 0.51, ..base },
        SsbmParams { q: 0.11, ..base },
    ];
    for v in variants {
        assert_ne!(cell_seed(7, &base), cell_seed(7, &v));
    }
    assert_ne!(trial_seed(7, &base, 0), trial_seed(7, &base, 1));
}

fn synthetic_csv() -> String {
    let mut rows = Vec::new();
    for (i, &n) in [100usize, 200, 300, 400, 500].iter().enumerate() {
        for (j, &p) in [0.2, 0.4, 0.6, 0.8, 1.0].iter().enumerate() {
            rows.push(ResultRow {
                n,
                k: 2,
                p,
                q: 0.1,
                trial: -1,
                seed: 0,
                exact: (i + j) as f64 / 8.0,
                agreement: 1.0,
                k_hat: 2.0,
                separation_ratio: 1.0,
                eps_max: 0.0,
                runtime_ms: 0.0,
            });
        }
    }
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows).unwrap();
    String::from_utf8(buf).unwrap()
}

fn attr<'a>(tag: &'a str, name: &str) -> &'a str {
    let start = tag.find(&format!("{name}=\"")).unwrap() + name.len() + 2;
    &tag[start..start + tag[start..].find('"').unwrap()]
}

#[test]
fn phase_diagram_colors_follow_metric() {
    let svg = phase_diagram(&synthetic_csv(), "n", "p", "recovery_rate").unwrap();
    let cells: Vec<&str> = svg.split('<').filter(|t| t.starts_with("rect class=\"cell\"")).collect();
    assert_eq!(cells.len(), 25);
    let rank = |c: &str| RAMP.iter().position(|r| *r == attr(c, "fill")).unwrap();
    let mut by_value: Vec<(f64, usize)> = cells
        .iter()
        .map(|c| (attr(c, "data-value").parse::<f64>().unwrap(), rank(c)))
        .collect();
    by_value.sort_by(|a, b| a.0.total_cmp(&b.0));
    assert!(by_value.windows(2).all(|w| w[0].1 <= w[1].1));
    assert_eq!(by_value[0].1, 0);
    assert_eq!(by_value[24].1, RAMP.len() - 1);
    assert_eq!(svg.matches("class=\"legend\"").count(), RAMP.len());
    assert!(phase_diagram(&synthetic_csv(), "n", "nope", "exact").is_err());
}
