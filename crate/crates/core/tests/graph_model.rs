use proptest::prelude::*;
use sbm_svd::graph_model::io::{read_graph, read_partition, write_graph, write_partition};
use sbm_svd::graph_model::*;

fn params(n: usize, k: usize, p: f64, q: f64, seed: u64) -> SsbmParams {
    SsbmParams::new(n, k, p, q, seed).unwrap()
}

#[test]
fn derived_quantities() {
    let s = params(1000, 4, 0.5, 0.1, 0);
    assert!((s.sigma_squared() - 0.25).abs() < 1e-15);
    assert!((s.mu() - 100.0).abs() < 1e-12);
    assert!((s.delta() - 0.32 * 250f64.sqrt()).abs() < 1e-12);
    assert!((s.delta() - 5.0596).abs() < 1e-4);
    let t = params(100, 2, 0.05, 0.02, 0);
    assert!((t.sigma_squared() - 0.05 * 0.95).abs() < 1e-15);
}

#[test]
fn invalid_parameters_rejected() {
    assert!(SsbmParams::new(0, 1, 0.5, 0.1, 0).is_err());
    assert!(SsbmParams::new(5, 6, 0.5, 0.1, 0).is_err());
    assert!(SsbmParams::new(5, 2, 1.1, 0.1, 0).is_err());
    assert!(SsbmParams::new(5, 2, 0.5, -0.1, 0).is_err());
    assert!(params(5, 2, 0.1, 0.5, 0).require_separated().is_err());
}

#[test]
fn edge_frequencies_match_probabilities() {
    let s = params(400, 2, 0.6, 0.15, 21);
    let inst = SsbmInstance::sample(&s, AdjacencyOptions::default()).unwrap();
    let (mut intra, mut intra_n, mut inter, mut inter_n) = (0.0, 0.0, 0.0, 0.0);
    for u in 0..400 {
        for v in u + 1..400 {
            if inst.partition.same_cluster(u, v) {
                intra += inst.adjacency.get(u, v);
                intra_n += 1.0;
            } else {
                inter += inst.adjacency.get(u, v);
                inter_n += 1.0;
            }
        }
    }
    let (pi, qi) = (intra / intra_n, inter / inter_n);
    assert!((pi - 0.6).abs() < 5.0 * (0.24f64 / intra_n).sqrt(), "{pi}");
    assert!((qi - 0.15).abs() < 5.0 * (0.1275f64 / inter_n).sqrt(), "{qi}");
}

#[test]
fn zero_diagonal_keeps_off_diagonal_edges() {
    let s = params(50, 3, 0.7, 0.2, 8);
    let part = sample_partition(&s).unwrap();
    let with = sample_adjacency(&part, 0.7, 0.2, 8);
    let without =
        sample_adjacency_with(&part, 0.7, 0.2, 8, AdjacencyOptions { zero_diagonal: true });
    for u in 0..50 {
        assert_eq!(without.get(u, u), 0.0);
        for v in 0..50 {
            if u != v {
                assert_eq!(with.get(u, v), without.get(u, v));
            }
        }
    }
}

#[test]
fn large_partitions_are_balanced() {
    // The balance window shrinks like 1/ln n against sqrt(n) fluctuations.
    let s = params(10_000_000, 4, 0.5, 0.1, 3);
    let part = sample_partition(&s).unwrap();
    assert!(is_balanced(&part), "{:?}", part.sizes());
    assert!(!is_balanced(&Partition::from_sizes(&[10, 990])));
}

#[test]
fn equal_sizes_split() {
    let p = Partition::equal_sizes(250, 4).unwrap();
    let mut sizes = p.sizes().to_vec();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![62, 62, 63, 63]);
}

#[test]
fn graph_file_round_trip() {
    let s = params(40, 2, 0.5, 0.2, 4);
    let inst = SsbmInstance::sample(&s, AdjacencyOptions::default()).unwrap();
    let mut buf = Vec::new();
    write_graph(&mut buf, &s, &inst.adjacency).unwrap();
    let (back_params, back) = read_graph(&buf[..]).unwrap();
    assert_eq!(back_params, s);
    assert_eq!(back, inst.adjacency);

    let mut pbuf = Vec::new();
    write_partition(&mut pbuf, &inst.partition).unwrap();
    assert_eq!(read_partition(&pbuf[..]).unwrap(), inst.partition);
}

#[test]
fn malformed_files_rejected() {
    for bad in ["", "ssbm 3 1 0.5\n", "ssbm 3 1 0.5 0.2 1\n0 5\n", "nope 3 1 0.5 0.2 1\n", "ssbm 3 1 0.5 0.2 1\nx y\n"] {
        assert!(read_graph(bad.as_bytes()).is_err(), "{bad:?}");
    }
    assert!(read_partition(r#"{"n":2,"k":1,"assignment":[1,2]}"#.as_bytes()).is_err());
    assert!(read_partition(r#"{"n":3,"k":1,"assignment":[1,1]}"#.as_bytes()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn adjacency_is_symmetric_binary_and_decomposes(
        n in 2usize..40, k in 1usize..5, p in 0.0f64..=1.0, q in 0.0f64..=1.0, seed in any::<u64>()
    ) {
        let k = k.min(n);
        let s = params(n, k, p, q, seed);
        let inst = SsbmInstance::sample(&s, AdjacencyOptions::default()).unwrap();
        let e = inst.noise();
        for u in 0..n {
            for v in 0..n {
                let a = inst.adjacency.get(u, v);
                prop_assert!(a == 0.0 || a == 1.0);
                prop_assert_eq!(a, inst.adjacency.get(v, u));
                prop_assert_eq!(inst.mean.get(u, v) + e.get(u, v), a);
                let expect = if inst.partition.same_cluster(u, v) { p } else { q };
                prop_assert_eq!(inst.mean.get(u, v), expect);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic(n in 2usize..30, seed in any::<u64>()) {
        let s = params(n, 2.min(n), 0.5, 0.3, seed);
        let a = SsbmInstance::sample(&s, AdjacencyOptions::default()).unwrap();
        let b = SsbmInstance::sample(&s, AdjacencyOptions::default()).unwrap();
        prop_assert_eq!(a.partition, b.partition);
        prop_assert_eq!(a.adjacency, b.adjacency);
    }

    #[test]
    fn sampled_partitions_use_every_label(n in 1usize..60, k in 1usize..6, seed in any::<u64>()) {
        let k = k.min(n);
        let part = sample_partition(&params(n, k, 0.5, 0.1, seed)).unwrap();
        prop_assert_eq!(part.k(), k);
        prop_assert!(part.sizes().iter().all(|&s| s > 0));
        prop_assert_eq!(part.sizes().iter().sum::<usize>(), n);
    }
}
