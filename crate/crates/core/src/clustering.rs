//! Empirical clustering estimators on a realized graph.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::{Error, Result};

/// How nodes of degree 0 or 1 enter node averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowDegreeConvention {
    /// `C_v` undefined for degree < 2; such nodes are left out.
    ExcludeLowDegree,
    /// `C_v = 0` for degree < 2; such nodes count in the denominator.
    ZeroLowDegree,
}

/// Size of the intersection of two ascending slices.
fn merge_count(a: &[u32], b: &[u32], mut on_hit: impl FnMut(u32)) -> u64 {
    let (mut i, mut j, mut hits) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                on_hit(a[i]);
                hits += 1;
                i += 1;
                j += 1;
            }
        }
    }
    hits
}

/// Triangles `Δ_v` through every node, counted in one pass over the edges.
///
/// Each triangle `u < v < w` is found once from edge `(u, v)` by merging the
/// parts of both sorted neighbour lists above `v`, and credited to all three
/// corners.
pub fn triangle_counts(graph: &Graph) -> Vec<u64> {
    let n = graph.node_count();
    let mut counts = vec![0u64; n];
    for u in 0..n {
        let nu = graph.neighbors(u);
        for &v in &nu[nu.partition_point(|&x| (x as usize) <= u)..] {
            let nv = graph.neighbors(v as usize);
            let above_u = &nu[nu.partition_point(|&x| x <= v)..];
            let above_v = &nv[nv.partition_point(|&x| x <= v)..];
            let mut corners = Vec::new();
            let hits = merge_count(above_u, above_v, |w| corners.push(w));
            counts[u] += hits;
            counts[v as usize] += hits;
            for w in corners {
                counts[w as usize] += 1;
            }
        }
    }
    counts
}

/// Number of edges among the neighbours of `v`.
pub fn triangle_count(graph: &Graph, v: usize) -> u64 {
    let nv = graph.neighbors(v);
    nv.iter()
        .enumerate()
        .map(|(idx, &i)| {
            let ni = graph.neighbors(i as usize);
            merge_count(&nv[idx + 1..], &ni[ni.partition_point(|&x| x <= i)..], |_| {})
        })
        .sum()
}

fn pairs(k: usize) -> f64 {
    (k as f64) * (k as f64 - 1.0) / 2.0
}

/// Per-node clustering record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeClustering {
    pub node: usize,
    pub degree: usize,
    pub triangles: u64,
    /// `None` when the degree is below 2.
    pub c: Option<f64>,
}

/// Clustering of every node, sharing one triangle pass.
pub fn node_clustering(graph: &Graph) -> Vec<NodeClustering> {
    triangle_counts(graph)
        .into_iter()
        .enumerate()
        .map(|(node, triangles)| {
            let degree = graph.degree(node);
            let c = (degree >= 2).then(|| triangles as f64 / pairs(degree));
            NodeClustering {
                node,
                degree,
                triangles,
                c,
            }
        })
        .collect()
}

/// `Δ_v / C(D_v, 2)`; for degree < 2 this is `None` or `Some(0.0)`
/// depending on the convention.
pub fn local_clustering(graph: &Graph, v: usize, convention: LowDegreeConvention) -> Option<f64> {
    let d = graph.degree(v);
    if d < 2 {
        return match convention {
            LowDegreeConvention::ExcludeLowDegree => None,
            LowDegreeConvention::ZeroLowDegree => Some(0.0),
        };
    }
    Some(triangle_count(graph, v) as f64 / pairs(d))
}

/// Node count and mean local clustering at one degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeBin {
    pub count: usize,
    pub mean_c: f64,
}

/// Empirical clustering function `C(k)` for every realized degree `k >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringProfile {
    pub n: usize,
    pub per_degree: BTreeMap<usize, DegreeBin>,
}

impl ClusteringProfile {
    /// True when the graph had no node of degree >= 2.
    pub fn is_empty(&self) -> bool {
        self.per_degree.is_empty()
    }

    /// Rows `(k, a = k/√n, N_k, C(k))` in increasing `k`.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64, usize, f64)> + '_ {
        self.per_degree
            .iter()
            .map(|(&k, bin)| (k, reduced_degree(k, self.n), bin.count, bin.mean_c))
    }
}

pub fn empirical_clustering_function(graph: &Graph) -> ClusteringProfile {
    profile_from_nodes(graph.node_count(), &node_clustering(graph))
}

pub fn profile_from_nodes(n: usize, nodes: &[NodeClustering]) -> ClusteringProfile {
    let mut sums: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
    for node in nodes {
        if let Some(c) = node.c {
            let entry = sums.entry(node.degree).or_insert((0, 0.0));
            entry.0 += 1;
            entry.1 += c;
        }
    }
    let per_degree = sums
        .into_iter()
        .map(|(k, (count, total))| {
            (
                k,
                DegreeBin {
                    count,
                    mean_c: (total / count as f64).min(1.0),
                },
            )
        })
        .collect();
    ClusteringProfile { n, per_degree }
}

/// Node-averaged local clustering.
pub fn average_clustering(graph: &Graph, convention: LowDegreeConvention) -> Result<f64> {
    average_from_nodes(&node_clustering(graph), convention)
}

pub fn average_from_nodes(nodes: &[NodeClustering], convention: LowDegreeConvention) -> Result<f64> {
    let (sum, included) = nodes
        .iter()
        .filter_map(|n| n.c)
        .fold((0.0, 0usize), |(s, k), c| (s + c, k + 1));
    let denom = match convention {
        LowDegreeConvention::ExcludeLowDegree => included,
        LowDegreeConvention::ZeroLowDegree => nodes.len(),
    };
    if denom == 0 {
        return Err(Error::Undefined("average clustering over an empty node set".into()));
    }
    Ok(sum / denom as f64)
}

/// Transitivity: 3 × triangles / wedges.
pub fn global_clustering(graph: &Graph) -> Result<f64> {
    let triangles: u64 = triangle_counts(graph).iter().sum::<u64>() / 3;
    let wedges: f64 = (0..graph.node_count()).map(|v| pairs(graph.degree(v))).sum();
    if wedges == 0.0 {
        return Err(Error::Undefined("global clustering of a graph without wedges".into()));
    }
    Ok(3.0 * triangles as f64 / wedges)
}

/// Reduced degree `k / √n`.
pub fn reduced_degree(k: usize, n: usize) -> f64 {
    k as f64 / (n as f64).sqrt()
}
