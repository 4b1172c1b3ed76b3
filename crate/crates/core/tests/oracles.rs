//! Cross-checks against brute-force or textbook reference computations
//! that share no code with the library paths they verify.

#![allow(clippy::needless_range_loop)]

use cdp::baselines::{covariance, pca_fit};
use cdp::cdp::{
    admissible_set, convexity_ratios, nonconvexity_index, project, projected_graph,
    projection_matrix, spectrum, standardize, structure_matrix, AdmissibleSet, PairRecord,
    ProjectionMatrix, StructureMatrix,
};
use cdp::certificates::{certify, path_capture, phi_graph};
use cdp::datasets::{generate, DatasetKind, DatasetSpec, PointCloud};
use cdp::graph::{giant_component, mutual_knn, Edge, WeightedGraph};
use cdp::linalg::symmetric_eigen;
use cdp::metrics::{direct_capture, markov_bound, markov_empirical, spectral_capture};
use cdp::pipeline::{run_cdp, CdpConfig, CdpState, Method};
use cdp::shortest_paths::{apsp, recover_path, sssp};
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cloud(n: usize, d: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PointCloud::new(Array2::from_shape_fn((n, d), |_| rng.random_range(-1.0..1.0))).unwrap()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn rows(cloud: &PointCloud) -> Vec<Vec<f64>> {
    (0..cloud.len()).map(|i| cloud.point(i).to_vec()).collect()
}

/// Random connected graph: a random spanning tree plus extra edges.
fn random_connected_graph(n: usize, extra: usize, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<Edge> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        seen.insert((u, v));
        edges.push(Edge { u, v, w: rng.random_range(0.1..5.0) });
    }
    while edges.len() < n - 1 + extra {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        let (u, v) = (a.min(b), a.max(b));
        if u != v && seen.insert((u, v)) {
            edges.push(Edge { u, v, w: rng.random_range(0.1..5.0) });
        }
    }
    WeightedGraph::from_edges(n, edges).unwrap()
}

fn brute_mutual_knn(pts: &[Vec<f64>], k: usize) -> Vec<(usize, usize)> {
    let n = pts.len();
    let knn: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut cand: Vec<(f64, usize)> =
                (0..n).filter(|&j| j != i).map(|j| (dist(&pts[i], &pts[j]), j)).collect();
            cand.sort_by(|a, b| a.partial_cmp(b).unwrap());
            cand.into_iter().take(k).map(|(_, j)| j).collect()
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if knn[i].contains(&j) && knn[j].contains(&i) {
                out.push((i, j));
            }
        }
    }
    out
}

#[test]
fn mutual_knn_matches_brute_force() {
    for seed in 0..5 {
        let cloud = random_cloud(50, 3, seed);
        let g = mutual_knn(&cloud, 4).unwrap();
        let got: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(got, brute_mutual_knn(&rows(&cloud), 4), "seed {seed}");
        for e in g.edges() {
            assert!((e.w - dist(&rows(&cloud)[e.u], &rows(&cloud)[e.v])).abs() <= 1e-12);
        }
        for u in 0..g.n_vertices() {
            assert!(g.degree(u) <= 4);
        }
    }
}

#[test]
fn giant_component_matches_union_find() {
    let cloud = random_cloud(100, 3, 11);
    let g = mutual_knn(&cloud, 2).unwrap();
    let (_, map) = giant_component(&g);

    let mut parent: Vec<usize> = (0..100).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for e in g.edges() {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        parent[a.max(b)] = a.min(b);
    }
    let roots: Vec<usize> = (0..100).map(|v| find(&mut parent, v)).collect();
    let mut best: Vec<usize> = Vec::new();
    for r in 0..100 {
        let members: Vec<usize> = (0..100).filter(|&v| roots[v] == r).collect();
        if members.len() > best.len() {
            best = members;
        }
    }
    assert!(best.len() < 100, "fixture should be disconnected");
    assert_eq!(map.kept(), &best[..]);
}

#[test]
fn sssp_matches_bellman_ford() {
    let g = random_connected_graph(30, 40, 3);
    let n = 30;
    for source in [0, 7, 29] {
        let mut d = vec![f64::INFINITY; n];
        d[source] = 0.0;
        for _ in 0..n {
            for e in g.edges() {
                if d[e.u] + e.w < d[e.v] {
                    d[e.v] = d[e.u] + e.w;
                }
                if d[e.v] + e.w < d[e.u] {
                    d[e.u] = d[e.v] + e.w;
                }
            }
        }
        let res = sssp(&g, source);
        for v in 0..n {
            assert!((res.dist[v] - d[v]).abs() <= 1e-9 * d[v].max(1.0));
        }
    }
}

#[test]
fn apsp_matches_floyd_warshall() {
    let g = random_connected_graph(40, 60, 5);
    let n = 40;
    let mut fw = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in fw.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in g.edges() {
        fw[e.u][e.v] = e.w;
        fw[e.v][e.u] = e.w;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if fw[i][k] + fw[k][j] < fw[i][j] {
                    fw[i][j] = fw[i][k] + fw[k][j];
                }
            }
        }
    }
    let dm = apsp(&g).unwrap();
    for i in 0..n {
        for j in 0..n {
            assert!((dm.get(i, j) - fw[i][j]).abs() <= 1e-9);
            // symmetry and triangle inequality
            assert!((dm.get(i, j) - dm.get(j, i)).abs() <= 1e-9 * dm.get(i, j).max(1.0));
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                assert!(dm.get(i, k) <= (dm.get(i, j) + dm.get(j, k)) * (1.0 + 1e-9));
            }
        }
    }
}

#[test]
fn recovered_paths_resum_to_distances() {
    let g = random_connected_graph(40, 50, 9);
    let res = sssp(&g, 0);
    for target in 0..40 {
        let path = recover_path(&res, target).unwrap();
        assert_eq!(path[0], 0);
        assert_eq!(*path.last().unwrap(), target);
        let total: f64 = path.windows(2).map(|e| g.weight(e[0], e[1]).unwrap()).sum();
        assert!((total - res.dist[target]).abs() <= 1e-9 * res.dist[target].max(1.0));
        // parent consistency
        if let Some(p) = res.parent[target] {
            let w = g.weight(p, target).unwrap();
            assert!((res.dist[p] + w - res.dist[target]).abs() <= 1e-9 * res.dist[target]);
        }
    }
}

#[test]
fn eigen_residual_and_nalgebra_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let n = 5;
        let mut m = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            for j in i..n {
                let x = rng.random_range(-1.0..1.0);
                m[[i, j]] = x;
                m[[j, i]] = x;
            }
        }
        let e = symmetric_eigen(&m).unwrap();
        let z = &e.vectors;
        let lambda = Array2::from_diag(&Array1::from(e.values.clone()));
        let residual = m.dot(z) - z.dot(&lambda);
        let fro = |a: &Array2<f64>| a.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(fro(&residual) <= 1e-9 * fro(&m));
        let ortho = z.t().dot(z) - Array2::<f64>::eye(n);
        assert!(fro(&ortho) <= 1e-10);

        let nm = nalgebra::DMatrix::from_fn(n, n, |i, j| m[[i, j]]);
        let mut reference: Vec<f64> = nalgebra::SymmetricEigen::new(nm).eigenvalues.iter().copied().collect();
        reference.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in e.values.iter().zip(&reference) {
            assert!((a - b).abs() <= 1e-10);
        }
    }
}

#[test]
fn identity_spectrum_reconstructs() {
    let s = StructureMatrix::from_matrix(Array2::eye(4)).unwrap();
    let sp = spectrum(&s).unwrap();
    assert!(sp.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 1e-15));
    let lambda = Array2::from_diag(&Array1::from(sp.eigenvalues.clone()));
    let rebuilt = sp.eigenvectors.dot(&lambda).dot(&sp.eigenvectors.t());
    for (a, b) in rebuilt.iter().zip(s.matrix().iter()) {
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn pca_variance_matches_reference_covariance() {
    let cloud = random_cloud(100, 4, 2);
    let fit = pca_fit(&cloud, 2).unwrap();

    // independent covariance and eigensolve
    let pts = rows(&cloud);
    let n = pts.len() as f64;
    let mean: Vec<f64> = (0..4).map(|c| pts.iter().map(|p| p[c]).sum::<f64>() / n).collect();
    let cov = nalgebra::DMatrix::from_fn(4, 4, |a, b| {
        pts.iter().map(|p| (p[a] - mean[a]) * (p[b] - mean[b])).sum::<f64>() / (n - 1.0)
    });
    let lib_cov = covariance(&cloud).unwrap();
    for a in 0..4 {
        for b in 0..4 {
            assert!((lib_cov[[a, b]] - cov[(a, b)]).abs() < 1e-12);
        }
    }
    let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(cov).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let reference = (ev[0] + ev[1]) / ev.iter().sum::<f64>();
    assert!((fit.explained_variance_ratio() - reference).abs() <= 1e-9);
}

#[test]
fn standardize_statistics() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cloud = PointCloud::new(Array2::from_shape_fn((100, 3), |(_, c)| {
        rng.random_range(0.0..10.0) * (c as f64 + 1.0) + 5.0
    }))
    .unwrap();
    let s = standardize(&cloud).unwrap();
    for c in 0..3 {
        let col: Vec<f64> = (0..100).map(|i| s.point(i)[c]).collect();
        let mean = col.iter().sum::<f64>() / 100.0;
        let sd = (col.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 100.0).sqrt();
        assert!(mean.abs() <= 1e-12);
        assert!((sd - 1.0).abs() <= 1e-12);
    }
}

fn random_records(count: usize, n_points: usize, seed: u64) -> Vec<PairRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<PairRecord> = Vec::new();
    while out.len() < count {
        let i = rng.random_range(0..n_points);
        let j = rng.random_range(0..n_points);
        if i < j && !out.iter().any(|p| p.i == i && p.j == j) {
            let r = rng.random_range(0.05..0.8);
            out.push(PairRecord { i, j, euclid: r, sp: 1.0, r });
        }
    }
    out
}

#[test]
fn nonconvexity_index_matches_plain_mean() {
    let pairs = random_records(20, 30, 8);
    let ds = AdmissibleSet { tau: 0.8, pairs };
    let mut sorted: Vec<f64> = ds.pairs.iter().map(|p| p.r).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let reference = sorted.iter().sum::<f64>() / 20.0;
    assert!((nonconvexity_index(&ds).unwrap() - reference).abs() < 1e-15);
}

#[test]
fn structure_matrix_matches_naive_sum_and_is_psd() {
    let cloud = random_cloud(30, 4, 6);
    let pairs = random_records(10, 30, 12);
    let ds = AdmissibleSet { tau: 0.8, pairs };
    let s = structure_matrix(&ds, &cloud).unwrap();

    let pts = rows(&cloud);
    let mut naive = vec![vec![0.0; 4]; 4];
    for p in &ds.pairs {
        let len = dist(&pts[p.i], &pts[p.j]);
        let u: Vec<f64> = (0..4).map(|c| (pts[p.j][c] - pts[p.i][c]) / len).collect();
        for a in 0..4 {
            for b in 0..4 {
                naive[a][b] += (1.0 - p.r) * u[a] * u[b] / 10.0;
            }
        }
    }
    for a in 0..4 {
        for b in 0..4 {
            assert!((s.matrix()[[a, b]] - naive[a][b]).abs() < 1e-14);
        }
    }
    let nm = nalgebra::DMatrix::from_fn(4, 4, |a, b| s.matrix()[[a, b]]);
    assert!(nalgebra::SymmetricEigen::new(nm).eigenvalues.iter().all(|&l| l >= -1e-10));
    let trace_expected = ds.pairs.iter().map(|p| 1.0 - p.r).sum::<f64>() / 10.0;
    assert!((s.trace() - trace_expected).abs() < 1e-10);

    // order of accumulation barely matters
    let mut reversed = ds.clone();
    reversed.pairs.reverse();
    let s2 = structure_matrix(&reversed, &cloud).unwrap();
    for (a, b) in s.matrix().iter().zip(s2.matrix().iter()) {
        assert!((a - b).abs() <= 1e-10);
    }
}

fn swiss_state(n: usize) -> CdpState {
    let cloud = generate(&DatasetSpec::new(DatasetKind::SwissRoll, n, 7)).unwrap();
    CdpState::prepare(&cloud, &CdpConfig::default()).unwrap()
}

#[test]
fn projection_is_non_expansive() {
    let state = swiss_state(300);
    let v = state.cdp_projection().unwrap();
    let projected = project(&state.cloud, &v).unwrap();
    for i in 0..state.cloud.len() {
        let before = state.cloud.point(i).iter().map(|x| x * x).sum::<f64>().sqrt();
        let after = projected.point(i).iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(after <= before * (1.0 + 1e-12));
    }
    let pg = projected_graph(&state.graph, &state.cloud, &v).unwrap();
    for (p, e) in pg.edges().iter().zip(state.graph.edges()) {
        assert!(p.w <= e.w * (1.0 + 1e-12));
    }
    let pdm = apsp(&pg).unwrap();
    for i in 0..state.cloud.len() {
        for j in 0..state.cloud.len() {
            assert!(pdm.get(i, j) <= state.distances.get(i, j) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn swiss_roll_certificates_all_hold() {
    let state = swiss_state(300);
    let v = state.cdp_projection().unwrap();
    let eval = state.evaluate(&v, Method::Cdp).unwrap();
    assert!(!eval.certificates.is_empty());
    assert!(eval.certificates.iter().all(|c| c.holds));

    let (phi_g, _) = phi_graph(&state.graph, &v, &state.cloud).unwrap();
    for c in &eval.certificates {
        assert!(phi_g <= c.phi_star);
        assert!(c.ratio() <= 1.0 / phi_g + 1e-9);
        let path = c.path_in(&eval.projected_distances).unwrap();
        assert_eq!(path_capture(&path, &v, &state.cloud), c.phi_star);
    }
    // nearest-rank quantiles cover at least 90% per side
    assert!(eval.report.coverage.lower >= 0.9);
    assert!(eval.report.coverage.upper >= 0.9);
    assert!(eval.report.coverage.joint >= 0.8);
}

#[test]
fn spectral_capture_matches_weighted_mean_and_markov() {
    let state = swiss_state(300);
    let v = state.cdp_projection().unwrap();
    let mu = spectral_capture(&state.spectrum, 2).unwrap();
    let direct = direct_capture(&state.admissible, &v, &state.cloud).unwrap();
    assert!((mu - direct).abs() <= 1e-9);
    for a in [0.05, 0.1, 0.2, 0.3, 0.5, 0.9] {
        let bound = markov_bound(mu, a).unwrap();
        assert!(markov_empirical(&state.admissible, &v, &state.cloud, a) >= bound - 1e-12);
    }
}

#[test]
fn column_signs_do_not_matter() {
    let state = swiss_state(200);
    let v = state.cdp_projection().unwrap();
    let base = state.evaluate(&v, Method::Cdp).unwrap();
    for col in 0..2 {
        let flipped = state.evaluate(&v.flip_column(col), Method::Cdp).unwrap();
        for (a, b) in base.certificates.iter().zip(&flipped.certificates) {
            assert!((a.psi - b.psi).abs() < 1e-12);
            assert!((a.phi_star - b.phi_star).abs() < 1e-12);
            assert!((a.r_tilde - b.r_tilde).abs() < 1e-12);
        }
        for (a, b) in base.projected_graph.edges().iter().zip(flipped.projected_graph.edges()) {
            assert!((a.w - b.w).abs() < 1e-12);
        }
        let (ra, rb) = (&base.report, &flipped.report);
        assert!((ra.c_sp_prime - rb.c_sp_prime).abs() < 1e-12);
        assert!((ra.q10_psi - rb.q10_psi).abs() < 1e-12);
        assert!((ra.q90_inv_phi_star - rb.q90_inv_phi_star).abs() < 1e-12);
        assert!((ra.phi_g - rb.phi_g).abs() < 1e-12);
        assert_eq!(ra.n_reselected, rb.n_reselected);
    }
}

#[test]
fn full_rank_projection_preserves_ratios() {
    let cloud = generate(&DatasetSpec::new(DatasetKind::Torus, 200, 3)).unwrap();
    let cfg = CdpConfig { k: 3, ..CdpConfig::default() };
    let (state, eval) = run_cdp(&cloud, &cfg).unwrap();
    let by_pair: std::collections::HashMap<(usize, usize), f64> =
        state.pairs.iter().map(|p| ((p.i, p.j), p.r)).collect();
    for p in &eval.post_ratios {
        assert!((p.r_tilde - by_pair[&(p.i, p.j)]).abs() <= 1e-10);
    }
    assert!(eval.report.fixed_error <= 1e-10);
    assert!(eval.report.reselected_error.unwrap() <= 1e-10);
    for c in &eval.certificates {
        assert!((c.psi - 1.0).abs() <= 1e-10 && (c.phi_star - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn pca_full_rank_has_zero_errors() {
    let state = swiss_state(150);
    let cfg = CdpConfig { k: 3, ..state.config.clone() };
    let state = CdpState::prepare(&state.cloud, &CdpConfig { standardize: false, ..cfg }).unwrap();
    let fit = pca_fit(&state.cloud, 3).unwrap();
    let eval = cdp::baselines::evaluate_baseline(&fit, &state).unwrap();
    assert!(eval.report.fixed_error <= 1e-10);
    assert!(eval.report.reselected_error.unwrap() <= 1e-10);
}

#[test]
fn baseline_with_cdp_projection_reproduces_cdp_report() {
    let config = CdpConfig { k_nn: 2, tau: 0.75, k: 2, standardize: false, ..CdpConfig::default() };
    let state = CdpState::prepare(&cdp::datasets::toy5(), &config).unwrap();
    let v = state.cdp_projection().unwrap();
    let cdp_eval = state.evaluate(&v, Method::Cdp).unwrap();
    let as_baseline = cdp::baselines::BaselineResult {
        method: Method::Cdp,
        v: v.clone(),
        projected: project(&state.cloud, &v).unwrap(),
        variances: vec![],
    };
    let base_eval = cdp::baselines::evaluate_baseline(&as_baseline, &state).unwrap();
    assert_eq!(base_eval.report, cdp_eval.report);
    assert_eq!(base_eval.certificates, cdp_eval.certificates);
}

#[test]
fn generic_projection_certificates_hold() {
    // certificate holds for any orthonormal V, not only the fitted one
    let cloud = generate(&DatasetSpec::new(DatasetKind::Helix, 300, 5)).unwrap();
    let state = CdpState::prepare(&cloud, &CdpConfig::default()).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = ProjectionMatrix::new(ndarray::array![[h, 0.0], [h, 0.0], [0.0, 1.0]]).unwrap();
    let pg = projected_graph(&state.graph, &state.cloud, &v).unwrap();
    let pdm = apsp(&pg).unwrap();
    let certs = certify(&state.admissible, &v, &state.cloud, &pdm, usize::MAX).unwrap();
    assert!(certs.iter().all(|c| c.holds));
}

#[test]
fn toy_projection_k_equals_d_is_orthogonal() {
    let cloud = cdp::datasets::toy5();
    let g = mutual_knn(&cloud, 2).unwrap();
    let dm = apsp(&g).unwrap();
    let ds = admissible_set(&convexity_ratios(&cloud, &dm).unwrap(), 0.75).unwrap();
    let sp = spectrum(&structure_matrix(&ds, &cloud).unwrap()).unwrap();
    let v = projection_matrix(&sp, 3).unwrap();
    let gram = v.matrix().t().dot(v.matrix());
    for ((a, b), x) in gram.indexed_iter() {
        assert!((x - if a == b { 1.0 } else { 0.0 }).abs() < 1e-10);
    }
}
