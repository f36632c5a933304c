//! CSV and JSON emitters for weights, graphs, profiles, curves and
//! per-realization records.
//!
//! Reals are written with Rust's shortest round-trip formatting, so every
//! value parses back to the identical `f64`. Missing values are empty fields.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::clustering::ClusteringProfile;
use crate::graph::Graph;
use crate::theory::AnnealedCurve;
use crate::weights::{WeightSource, WeightVector};
use crate::{Error, Result};

/// Version tag stamped into sidecars.
pub fn version_string() -> &'static str {
    match option_env!("MSM_GIT_DESCRIBE") {
        Some(v) => v,
        None => concat!("v", env!("CARGO_PKG_VERSION")),
    }
}

pub(crate) fn real(x: f64) -> String {
    format!("{x}")
}

pub(crate) fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

/// A CSV writer over a freshly created file.
pub(crate) fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(create(path)?))
}

pub(crate) fn finish(mut w: csv::Writer<BufWriter<File>>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

/// One-column CSV with header `w`.
pub fn write_weights_csv(path: &Path, weights: &WeightVector) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["w"])?;
    for &x in weights.values() {
        w.write_record([real(x)])?;
    }
    finish(w, path)
}

/// Read back a weight CSV written by [`write_weights_csv`].
pub fn read_weights_csv(path: &Path, alpha: f64, source: WeightSource) -> Result<WeightVector> {
    let mut r = csv::Reader::from_path(path)?;
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = rec.get(0).unwrap_or_default();
        values.push(
            field
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("{}: bad weight {field:?}: {e}", path.display())))?,
        );
    }
    WeightVector::new(values, alpha, source)
}

/// Metadata stored next to an edge list.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct GraphSidecar {
    pub n: usize,
    pub alpha: f64,
    pub seed: u64,
    pub source: WeightSource,
    pub s_n: f64,
}

/// Edge list `u,v` with `u < v`.
pub fn write_edge_list(path: &Path, graph: &Graph) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["u", "v"])?;
    for (u, v) in graph.edges() {
        w.write_record([u.to_string(), v.to_string()])?;
    }
    finish(w, path)
}

pub fn read_edge_list(path: &Path, n: usize) -> Result<Graph> {
    let mut r = csv::Reader::from_path(path)?;
    let mut edges = Vec::new();
    for rec in r.deserialize() {
        let (u, v): (usize, usize) = rec?;
        edges.push((u, v));
    }
    Graph::from_edges(n, edges)
}

/// Columns `k, a, N_k, C_k`.
pub fn write_profile_csv(path: &Path, profile: &ClusteringProfile) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["k", "a", "N_k", "C_k"])?;
    for (k, a, count, c) in profile.rows() {
        w.write_record([k.to_string(), real(a), count.to_string(), real(c)])?;
    }
    finish(w, path)
}

/// Columns `a, c_bar, c_hub, quad_error, alpha`; `c_hub` empty for `a <= 1`.
pub fn write_curve_csv(path: &Path, curve: &AnnealedCurve) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["a", "c_bar", "c_hub", "quad_error", "alpha"])?;
    for p in &curve.points {
        w.write_record([
            real(p.a),
            real(p.c_bar),
            opt_real(p.c_hub),
            real(p.quad_error),
            real(curve.alpha),
        ])?;
    }
    finish(w, path)
}
