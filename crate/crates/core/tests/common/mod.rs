//! Dense-matrix reference implementations for small graphs.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use msm_core::clustering::{
    average_clustering, empirical_clustering_function, global_clustering, local_clustering, triangle_counts,
    LowDegreeConvention,
};
use msm_core::fractions::empirical_fractions;
use msm_core::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Erdős–Rényi graph on at most 12 nodes with a random density.
pub fn random_small_graph(seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=12usize);
    let p = [0.1, 0.3, 0.5, 0.8, 1.0][rng.random_range(0..5usize)];
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn matrix(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-12
}

/// Compare every clustering estimator with an O(n³) matrix evaluation.
pub fn check_against_brute_force(g: &Graph) -> Result<(), String> {
    let a = matrix(g);
    let n = a.len();
    let deg: Vec<usize> = a.iter().map(|row| row.iter().filter(|&&x| x).count()).collect();
    let mut tri = vec![0u64; n];
    for (v, t) in tri.iter_mut().enumerate() {
        for i in 0..n {
            for j in i + 1..n {
                if a[v][i] && a[v][j] && a[i][j] {
                    *t += 1;
                }
            }
        }
    }
    if triangle_counts(g) != tri {
        return Err(format!("triangle counts differ: {:?} vs {tri:?}", triangle_counts(g)));
    }
    let local: Vec<Option<f64>> = (0..n)
        .map(|v| (deg[v] >= 2).then(|| 2.0 * tri[v] as f64 / (deg[v] * (deg[v] - 1)) as f64))
        .collect();
    for v in 0..n {
        let excl = local_clustering(g, v, LowDegreeConvention::ExcludeLowDegree);
        let incl = local_clustering(g, v, LowDegreeConvention::ZeroLowDegree);
        let ok = match local[v] {
            Some(c) => excl.is_some_and(|x| close(x, c)) && incl.is_some_and(|x| close(x, c)),
            None => excl.is_none() && incl == Some(0.0),
        };
        if !ok {
            return Err(format!("local clustering of node {v}"));
        }
    }

    let defined: Vec<f64> = local.iter().flatten().copied().collect();
    let excl = average_clustering(g, LowDegreeConvention::ExcludeLowDegree).ok();
    let want = (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64);
    if excl.is_some() != want.is_some() || excl.zip(want).is_some_and(|(x, y)| !close(x, y)) {
        return Err(format!("excluding average {excl:?} vs {want:?}"));
    }
    let incl = average_clustering(g, LowDegreeConvention::ZeroLowDegree).unwrap();
    if !close(incl, defined.iter().sum::<f64>() / n as f64) {
        return Err("including average".into());
    }

    let wedges: f64 = deg.iter().map(|&d| (d * d.saturating_sub(1)) as f64 / 2.0).sum();
    let global = global_clustering(g).ok();
    let want = (wedges > 0.0).then(|| tri.iter().sum::<u64>() as f64 / wedges);
    if global.is_some() != want.is_some() || global.zip(want).is_some_and(|(x, y)| !close(x, y)) {
        return Err(format!("global clustering {global:?} vs {want:?}"));
    }

    let mut bins: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for v in 0..n {
        if let Some(c) = local[v] {
            bins.entry(deg[v]).or_default().push(c);
        }
    }
    let profile = empirical_clustering_function(g);
    if profile.per_degree.len() != bins.len() {
        return Err("profile degree set".into());
    }
    for (k, cs) in &bins {
        let bin = profile.per_degree[k];
        if bin.count != cs.len() || !close(bin.mean_c, cs.iter().sum::<f64>() / cs.len() as f64) {
            return Err(format!("profile at degree {k}"));
        }
    }

    let fr = empirical_fractions(g);
    let zeros = deg.iter().filter(|&&d| d == 0).count() as f64 / n as f64;
    let ones = deg.iter().filter(|&&d| d == 1).count() as f64 / n as f64;
    if !close(fr.r0, zeros) || !close(fr.r1, ones) {
        return Err("degree fractions".into());
    }
    Ok(())
}
