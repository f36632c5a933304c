//! The MSM edge sampler and an immutable simple-graph type.

use rand::Rng;
use rayon::prelude::*;

use crate::weights::WeightVector;
use crate::{Error, Result, RngStream};

/// Sparse scaling `δ_n = n^(-1/α)`.
pub fn delta_n(n: usize, alpha: f64) -> f64 {
    (n as f64).powf(-1.0 / alpha)
}

/// `1 - exp(-δ w_i w_j)`, accurate for tiny arguments.
pub fn connection_probability(w_i: f64, w_j: f64, delta: f64) -> f64 {
    -(-delta * w_i * w_j).exp_m1()
}

/// Simple undirected graph stored as sorted neighbour lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    neighbors: Vec<Vec<u32>>,
    edge_count: usize,
}

impl Graph {
    /// Graph on `n` isolated nodes.
    pub fn empty(n: usize) -> Self {
        Self {
            neighbors: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Build from unordered pairs. Duplicate pairs collapse; self-loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::domain("graph too large"));
        }
        let mut neighbors = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::domain(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::domain(format!("self-loop at node {u}")));
            }
            neighbors[u].push(v as u32);
            neighbors[v].push(u as u32);
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        let edge_count = neighbors.iter().map(Vec::len).sum::<usize>() / 2;
        Ok(Self { neighbors, edge_count })
    }

    /// Assemble from per-row upper-triangular neighbour lists: `upper[i]`
    /// holds the sorted `j > i` adjacent to `i`.
    fn from_upper_rows(upper: Vec<Vec<u32>>) -> Self {
        let n = upper.len();
        let mut degree = vec![0usize; n];
        for (i, row) in upper.iter().enumerate() {
            degree[i] += row.len();
            for &j in row {
                degree[j as usize] += 1;
            }
        }
        let mut neighbors: Vec<Vec<u32>> = degree.iter().map(|&d| Vec::with_capacity(d)).collect();
        for (i, row) in upper.iter().enumerate() {
            for &j in row {
                neighbors[j as usize].push(i as u32);
            }
        }
        let mut edge_count = 0;
        for (i, row) in upper.into_iter().enumerate() {
            edge_count += row.len();
            neighbors[i].extend(row);
        }
        Self { neighbors, edge_count }
    }

    pub fn node_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    /// Sorted neighbours of `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors.iter().enumerate().flat_map(|(u, list)| {
            let start = list.partition_point(|&v| (v as usize) <= u);
            list[start..].iter().map(move |&v| (u, v as usize))
        })
    }
}

/// Degree of every node.
pub fn degree_sequence(graph: &Graph) -> Vec<usize> {
    (0..graph.node_count()).map(|v| graph.degree(v)).collect()
}

/// Sample the graph given the weights: each pair `{i, j}` is present
/// independently with probability `1 - exp(-δ_n w_i w_j)`.
///
/// Row `i` draws its uniforms from lane `i` of `stream`, one per `j > i`, so
/// the result does not depend on the thread count.
pub fn sample_graph(weights: &WeightVector, stream: RngStream) -> Graph {
    let w = weights.values();
    let n = w.len();
    let delta = delta_n(n, weights.alpha());
    let upper: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream.lane(i as u64);
            let scaled = delta * w[i];
            let mut row = Vec::new();
            for (j, &wj) in w.iter().enumerate().skip(i + 1) {
                let u: f64 = rng.random();
                if u < -(-scaled * wj).exp_m1() {
                    row.push(j as u32);
                }
            }
            row
        })
        .collect();
    Graph::from_upper_rows(upper)
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::weights::{sample_pareto, WeightSource};

    #[test]
    fn delta_examples() {
        assert!((delta_n(10_000, 0.5) - 1e-8).abs() < 1e-22);
        assert_eq!(delta_n(1, 0.3), 1.0);
        assert!((delta_n(1000, 0.5) - 1e-6).abs() < 1e-20);
    }

    #[test]
    fn probability_small_argument() {
        let p = connection_probability(1e-4, 1e-4, 1.0);
        assert!(((p - 1e-8) / 1e-8).abs() < 1e-6);
        let p = connection_probability(1e-6, 1e-6, 1.0);
        assert!(((p - 1e-12) / 1e-12).abs() < 1e-11);
        let p = connection_probability(1.0, 1.0, 1.0);
        assert!((p - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((p - 0.6321).abs() < 1e-4);
        assert!(connection_probability(1.0, 2.0, 0.1) < connection_probability(1.0, 2.5, 0.1));
    }

    #[test]
    fn degree_sequences() {
        assert_eq!(degree_sequence(&triangle()), vec![2, 2, 2]);
        assert_eq!(degree_sequence(&path(3)), vec![1, 2, 1]);
    }

    #[test]
    fn from_edges_validates() {
        assert!(Graph::from_edges(2, [(0, 0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(1, 2));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn zero_probability_gives_empty_graph() {
        // δ_n w_i w_j underflows to 0 for tiny weights
        let w = WeightVector::new(vec![1e-200; 20], 0.5, WeightSource::Stable).unwrap();
        let g = sample_graph(&w, RngStream::new(3));
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn near_certain_edge() {
        // n = 2, α = 0.5: δ = 1/4, so w = 20 gives δ w² = 100
        let w = WeightVector::new(vec![20.0, 20.0], 0.5, WeightSource::Pareto).unwrap();
        let edges: usize = (0..1000)
            .map(|s| sample_graph(&w, RngStream::new(s)).edge_count())
            .sum();
        assert_eq!(edges, 1000);
    }

    #[test]
    fn sampling_is_deterministic_and_thread_invariant() {
        let w = sample_pareto(0.5, 400, RngStream::new(8)).unwrap();
        let a = sample_graph(&w, RngStream::new(99));
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| sample_graph(&w, RngStream::new(99)));
        assert_eq!(a, b);
        assert_ne!(a, sample_graph(&w, RngStream::new(100)));
    }

    #[test]
    fn edge_frequency_calibration() {
        // n = 50, all w = 2, δ = 0.01 ⇒ p = 1 - e^(-0.04). δ_n = n^(-1/α) = 0.01 needs α = ln 50 / ln 100.
        let n = 50;
        let alpha = (n as f64).ln() / 100f64.ln();
        assert!((delta_n(n, alpha) - 0.01).abs() < 1e-15);
        let w = WeightVector::new(vec![2.0; n], alpha, WeightSource::Pareto).unwrap();
        let reps = 10_000;
        let mut counts = vec![0u32; n * n];
        for s in 0..reps {
            let g = sample_graph(&w, RngStream::new(1_000 + s as u64));
            for (u, v) in g.edges() {
                counts[u * n + v] += 1;
            }
        }
        let p = 1.0 - (-0.04f64).exp();
        let se = (p * (1.0 - p) / reps as f64).sqrt();
        for i in 0..n {
            for j in i + 1..n {
                let f = counts[i * n + j] as f64 / reps as f64;
                assert!((f - p).abs() < 4.0 * se, "pair ({i},{j}): {f} vs {p}");
            }
        }
    }

    mod props {
        use super::super::*;
        use crate::weights::sample_pareto;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn structural_invariants(seed in any::<u64>(), n in 2usize..120, alpha in 0.2f64..0.9) {
                let w = sample_pareto(alpha, n, RngStream::new(seed)).unwrap();
                let g = sample_graph(&w, RngStream::new(seed ^ 1));
                let deg = degree_sequence(&g);
                prop_assert_eq!(deg.iter().sum::<usize>(), 2 * g.edge_count());
                for v in 0..n {
                    prop_assert!(!g.has_edge(v, v));
                    prop_assert!(g.neighbors(v).windows(2).all(|p| p[0] < p[1]));
                    for &u in g.neighbors(v) {
                        prop_assert!(g.has_edge(u as usize, v));
                    }
                }
                prop_assert_eq!(g.edges().count(), g.edge_count());
            }
        }
    }
}
