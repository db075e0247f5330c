use gcn_mwis::graph::{
    gen_ba, gen_er, laplacian_apply, load_graph, round_attachment, save_graph, GeneratorSpec, Graph, GraphError,
    GraphModel,
};
use gcn_mwis::NodeUtilities;
use nalgebra::DMatrix;
use ndarray::Array2;
use proptest::prelude::*;

fn dense_laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.num_nodes();
    let mut m = DMatrix::identity(n, n);
    for (i, j) in g.edges() {
        let c = -1.0 / ((g.degree(i) * g.degree(j)) as f64).sqrt();
        m[(i, j)] = c;
        m[(j, i)] = c;
    }
    m
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0..=1.0f64, any::<u64>()).prop_map(|(n, p, s)| gen_er(n, p, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn generated_graphs_satisfy_invariants(
        n in 1usize..80,
        p in 0.0..=1.0f64,
        frac in 0.0..1.0f64,
        seed in any::<u64>(),
    ) {
        let er = gen_er(n, p, seed).unwrap();
        prop_assert!(er.check_invariants().is_ok());
        if n >= 2 {
            let m = 1 + ((n - 1) as f64 * frac) as usize;
            let m = m.min(n - 1);
            let ba = gen_ba(n, m, seed).unwrap();
            prop_assert!(ba.check_invariants().is_ok());
            prop_assert_eq!(ba.num_edges(), m * (n - m));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn laplacian_matches_dense_oracle(g in arb_graph(50), cols in 1usize..4, seed in any::<u64>()) {
        let n = g.num_nodes();
        let mut rng = gcn_mwis::rng::rng_from_seed(seed);
        let x = Array2::from_shape_fn((n, cols), |_| rand::Rng::random_range(&mut rng, -2.0..2.0));
        let fast = laplacian_apply(&g, x.view()).unwrap();
        let dense = dense_laplacian(&g) * DMatrix::from_fn(n, cols, |i, j| x[(i, j)]);
        for i in 0..n {
            for j in 0..cols {
                let (a, b) = (fast[(i, j)], dense[(i, j)]);
                prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn laplacian_spectrum_in_unit_band(g in arb_graph(30)) {
        let eig = dense_laplacian(&g).symmetric_eigen();
        for &l in eig.eigenvalues.iter() {
            prop_assert!((-1e-9..=2.0 + 1e-9).contains(&l), "eigenvalue {l}");
        }
    }

    #[test]
    fn constant_vector_vanishes_on_regular_graphs(n in 3usize..40, c in -5.0..5.0f64) {
        let cycle: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let g = Graph::from_edges(n, &cycle).unwrap();
        let out = laplacian_apply(&g, Array2::from_elem((n, 1), c).view()).unwrap();
        prop_assert!(out.iter().all(|v| v.abs() < 1e-12));
    }
}

#[test]
fn path_example_against_dense_oracle() {
    let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let x = Array2::from_elem((3, 1), 1.0);
    let fast = laplacian_apply(&g, x.view()).unwrap();
    let dense = dense_laplacian(&g) * DMatrix::from_element(3, 1, 1.0);
    for i in 0..3 {
        assert!((fast[(i, 0)] - dense[(i, 0)]).abs() < 1e-15);
    }
    assert!((fast[(1, 0)] + 0.4142).abs() < 1e-4);
}

#[test]
fn laplacian_rejects_wrong_shape() {
    let g = Graph::empty(3);
    let x = Array2::zeros((2, 1));
    assert!(matches!(laplacian_apply(&g, x.view()), Err(GraphError::Dimension { .. })));
}

#[test]
fn er_edge_count_inside_binomial_band() {
    let (n, p, runs) = (1000usize, 0.01, 200);
    let pairs = (n * (n - 1) / 2) as f64;
    let mean = pairs * p;
    let sd_of_mean = (pairs * p * (1.0 - p) / runs as f64).sqrt();
    let total: usize = (0..runs as u64).map(|s| gen_er(n, p, s).unwrap().num_edges()).sum();
    let observed = total as f64 / runs as f64;
    assert!((observed - mean).abs() < 4.0 * sd_of_mean, "mean edges {observed}, expected {mean} ± {}", 4.0 * sd_of_mean);
}

#[test]
fn ba_small_cases() {
    for m in 1..6 {
        let g = gen_ba(m + 1, m, 9).unwrap();
        assert_eq!(g.num_edges(), m);
        assert_eq!(g.degree(m), m);
    }
    assert_eq!(gen_ba(100, 2, 1).unwrap().num_edges(), 196);
    assert!(gen_ba(5, 5, 1).is_err());
    assert!(gen_ba(5, 0, 1).is_err());
}

#[test]
fn ba_degree_distribution_is_heavy_tailed() {
    let seeds = 50;
    let heavy = (0..seeds)
        .filter(|&s| {
            let g = gen_ba(10_000, 3, s).unwrap();
            let mut d: Vec<usize> = (0..g.num_nodes()).map(|v| g.degree(v)).collect();
            d.sort_unstable();
            let median = d[d.len() / 2];
            *d.last().unwrap() > 10 * median
        })
        .count();
    assert!(heavy * 100 >= 95 * seeds as usize, "{heavy}/{seeds}");
}

#[test]
fn generation_is_reproducible() {
    for seed in [0, 1, u64::MAX] {
        assert_eq!(gen_er(200, 0.05, seed).unwrap(), gen_er(200, 0.05, seed).unwrap());
        assert_eq!(gen_ba(200, 3, seed).unwrap(), gen_ba(200, 3, seed).unwrap());
    }
    assert_ne!(gen_er(200, 0.05, 1).unwrap(), gen_er(200, 0.05, 2).unwrap());
}

/// Snapshot of the seeded streams; a change here breaks reproducibility of
/// every stored dataset.
#[test]
fn seeded_output_is_pinned() {
    let er = gen_er(300, 0.03, 42).unwrap();
    assert_eq!(er.num_edges(), 1295);
    assert_eq!(er.edges().take(4).collect::<Vec<_>>(), [(0, 61), (0, 86), (0, 101), (0, 162)]);
    let ba = gen_ba(300, 3, 42).unwrap();
    assert_eq!(ba.edges().skip(100).take(3).collect::<Vec<_>>(), [(5, 22), (5, 30), (5, 36)]);
}

#[test]
fn attachment_rounding() {
    assert_eq!(round_attachment(100, 2.5), 3);
    assert_eq!(round_attachment(100, 2.4), 2);
    assert_eq!(round_attachment(100, 0.2), 1);
    assert_eq!(round_attachment(5, 12.5), 4);
}

#[test]
fn generator_spec_strings() {
    let spec: GeneratorSpec = "er:n=100,p=0.05,seed=7".parse().unwrap();
    assert_eq!(spec.seed, 7);
    assert!(matches!(spec.model, GraphModel::Er { n: 100, .. }));
    assert_eq!(spec.generate().unwrap(), gen_er(100, 0.05, 7).unwrap());
    let back: GeneratorSpec = spec.to_string().parse().unwrap();
    assert_eq!(back, spec);
    let ba: GeneratorSpec = "ba:n=50,m=3,seed=2".parse().unwrap();
    assert_eq!(ba.generate().unwrap().num_edges(), 3 * 47);
    assert!("er:n=10,p=1.5,seed=1".parse::<GeneratorSpec>().and_then(|s| s.validate()).is_err());
    assert!("xx:n=10".parse::<GeneratorSpec>().is_err());
}

#[test]
fn large_er_graph_round_trips() {
    let g = gen_er(500, 0.02, 11).unwrap();
    let mut buf = Vec::new();
    save_graph(&g, None, &mut buf).unwrap();
    let (back, w) = load_graph(buf.as_slice()).unwrap();
    assert!(w.is_none());
    assert_eq!(back.adjacency(), g.adjacency());
}

#[test]
fn weighted_round_trip_through_file() {
    let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let w = NodeUtilities::new(vec![0.1, 0.2, 0.3]).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k3.graph");
    gcn_mwis::graph::write_graph_file(&path, &g, Some(&w)).unwrap();
    let (back, bw) = gcn_mwis::graph::read_graph_file(&path).unwrap();
    assert_eq!(back, g);
    let bw = bw.unwrap();
    for (a, b) in bw.as_slice().iter().zip(w.as_slice()) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn malformed_file_reports_line() {
    let text = "n 3\ne 0 1\ne 1 x\n";
    match load_graph(text.as_bytes()) {
        Err(GraphError::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("unexpected {other:?}"),
    }
}
