//! Reproducible experiment runners.
//!
//! Every run is described by an [`ExperimentManifest`] and writes into one
//! output directory: CSV tables, a `<file>.meta.json` sidecar per CSV and a
//! final `manifest.json` listing every output. All randomness derives from
//! the manifest seed through named sub-streams:
//!
//! - weights of realization `r` at size `n`: `weights/n={n}`, index `r`
//!   (index 0 for every realization under [`SamplingMode::FixedWeights`]);
//! - edges of realization `r` at size `n`: `edges/n={n}`, index `r`.
//!
//! Realizations run in parallel, but rows are always emitted sorted by
//! `(n, realization)`, so outputs are byte-identical for a given manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{
    average_from_nodes, global_clustering, node_clustering, profile_from_nodes, reduced_degree, ClusteringProfile,
    LowDegreeConvention,
};
use crate::fractions::{approx_fractions, empirical_fractions, exact_conditional_fractions, DegreeFractions};
use crate::graph::{sample_graph, Graph};
use crate::io::{self, opt_real, real, GraphSidecar};
use crate::stats::{ccdf_sorted, summarize, Summary};
use crate::theory::{annealed_curve, annealed_value, reduced_degree_grid, AnnealedCurve};
use crate::weights::{rescaled_quantities, sample_weights, WeightSource, WeightVector};
use crate::{Error, Result, RngStream};

/// Reduced-degree points per annealed curve.
pub const CURVE_POINTS: usize = 60;
/// Minimum sample size for the tail comparison.
pub const MIN_TAIL_SAMPLES: usize = 100_000;
/// Tail indices of the default preset.
pub const PRESET_ALPHAS: [f64; 3] = [0.3, 0.5, 0.7];
/// Network sizes of the default preset.
pub const PRESET_SIZES: [usize; 3] = [100, 1_000, 10_000];
pub const PRESET_REALIZATIONS: usize = 10;
pub const PRESET_TAIL_SAMPLES: usize = 1_000_000;
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    ClusteringFunction,
    AverageClusteringSweep,
    DegreeFractionsSweep,
    TailComparison,
    AnnealedCurveOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SamplingMode {
    /// Fresh weights for every realization.
    #[serde(rename = "redraw")]
    RedrawWeights,
    /// One weight draw per `n`, shared by all realizations.
    #[serde(rename = "fixed")]
    FixedWeights,
}

impl std::fmt::Display for SamplingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SamplingMode::RedrawWeights => "redraw",
            SamplingMode::FixedWeights => "fixed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    /// Path relative to the run directory.
    pub path: String,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub experiment: Experiment,
    pub alpha: f64,
    pub n_values: Vec<usize>,
    pub realizations: usize,
    pub mode: SamplingMode,
    pub source: WeightSource,
    pub seed: u64,
    pub tol: f64,
    #[serde(default)]
    pub write_graphs: bool,
    #[serde(default)]
    pub outputs: Vec<OutputRecord>,
}

impl ExperimentManifest {
    pub fn new(experiment: Experiment, alpha: f64, n_values: Vec<usize>, realizations: usize, seed: u64) -> Self {
        Self {
            experiment,
            alpha,
            n_values,
            realizations,
            mode: SamplingMode::RedrawWeights,
            source: WeightSource::Pareto,
            seed,
            tol: DEFAULT_TOL,
            write_graphs: false,
            outputs: Vec::new(),
        }
    }

    pub fn with_mode(mut self, mode: SamplingMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_source(mut self, source: WeightSource) -> Self {
        self.source = source;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Check the manifest before anything is written.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.realizations < 1 {
            return bad("realizations must be >= 1".into());
        }
        if self.n_values.is_empty() {
            return bad("at least one n is required".into());
        }
        if let Some(n) = self.n_values.iter().find(|&&n| n < 2) {
            return bad(format!("every n must be >= 2, got {n}"));
        }
        if !(1e-10..=1e-3).contains(&self.tol) {
            return bad(format!("tol must lie in [1e-10, 1e-3], got {}", self.tol));
        }
        match self.experiment {
            Experiment::ClusteringFunction if self.n_values.len() != 1 => {
                bad("clustering-function takes exactly one n per run".into())
            }
            Experiment::AverageClusteringSweep | Experiment::DegreeFractionsSweep
                if self.n_values.windows(2).any(|w| w[0] >= w[1]) =>
            {
                bad("n values of a sweep must be strictly ascending".into())
            }
            Experiment::TailComparison if self.n_values[0] < MIN_TAIL_SAMPLES => bad(format!(
                "tail comparison needs at least {MIN_TAIL_SAMPLES} samples, got {}",
                self.n_values[0]
            )),
            _ => Ok(()),
        }
    }

    /// Directory name distinguishing this run within a preset.
    pub fn label(&self) -> String {
        let sizes: Vec<String> = self.n_values.iter().map(|n| n.to_string()).collect();
        format!("alpha{}_n{}_{}_{}", self.alpha, sizes.join("-"), self.source, self.mode)
    }
}

/// The default grid of runs for one experiment.
pub fn paper_preset(
    experiment: Experiment,
    seed: u64,
    source: WeightSource,
    mode: SamplingMode,
) -> Vec<ExperimentManifest> {
    let base = |alpha: f64, n_values: Vec<usize>| {
        ExperimentManifest::new(experiment, alpha, n_values, PRESET_REALIZATIONS, seed)
            .with_source(source)
            .with_mode(mode)
    };
    match experiment {
        Experiment::ClusteringFunction => PRESET_ALPHAS
            .iter()
            .flat_map(|&a| PRESET_SIZES.iter().map(move |&n| (a, n)))
            .map(|(a, n)| base(a, vec![n]))
            .collect(),
        Experiment::TailComparison => vec![base(0.5, vec![PRESET_TAIL_SAMPLES])],
        _ => PRESET_ALPHAS.iter().map(|&a| base(a, PRESET_SIZES.to_vec())).collect(),
    }
}

/// Weight and edge streams of one realization.
pub fn realization_streams(root: RngStream, n: usize, index: usize, mode: SamplingMode) -> (RngStream, RngStream) {
    let weight_index = match mode {
        SamplingMode::RedrawWeights => index as u64,
        SamplingMode::FixedWeights => 0,
    };
    (
        root.substream(&format!("weights/n={n}"), weight_index),
        root.substream(&format!("edges/n={n}"), index as u64),
    )
}

/// Weights and graph of one realization.
#[derive(Debug, Clone)]
pub struct Realization {
    pub n: usize,
    pub index: usize,
    pub weights: WeightVector,
    pub graph: Graph,
}

pub fn realize(
    alpha: f64,
    n: usize,
    source: WeightSource,
    mode: SamplingMode,
    root: RngStream,
    index: usize,
) -> Result<Realization> {
    let (ws, es) = realization_streams(root, n, index, mode);
    let weights = sample_weights(source, alpha, n, ws)?;
    let graph = sample_graph(&weights, es);
    Ok(Realization {
        n,
        index,
        weights,
        graph,
    })
}

/// Observables of one realization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealizationRecord {
    pub n: usize,
    pub index: usize,
    pub s_n: f64,
    pub empirical: DegreeFractions,
    pub exact: DegreeFractions,
    pub approx: DegreeFractions,
    /// Undefined when no node has degree >= 2.
    pub c_excl: Option<f64>,
    pub c_incl: f64,
    /// Undefined when the graph has no wedge.
    pub global: Option<f64>,
    pub mean_degree: f64,
}

pub fn measure(real: &Realization) -> Result<RealizationRecord> {
    let nodes = node_clustering(&real.graph);
    let rescaled = rescaled_quantities(&real.weights);
    let alpha = real.weights.alpha();
    Ok(RealizationRecord {
        n: real.n,
        index: real.index,
        s_n: rescaled.s_n,
        empirical: empirical_fractions(&real.graph),
        exact: exact_conditional_fractions(&real.weights)?,
        approx: approx_fractions(&rescaled, alpha)?,
        c_excl: average_from_nodes(&nodes, LowDegreeConvention::ExcludeLowDegree).ok(),
        c_incl: average_from_nodes(&nodes, LowDegreeConvention::ZeroLowDegree)?,
        global: global_clustering(&real.graph).ok(),
        mean_degree: 2.0 * real.graph.edge_count() as f64 / real.n as f64,
    })
}

/// Mean |C(k) - C̄(k/√n)| over degrees with `N_k >= min_count` and
/// `k <= k_max`, using precomputed annealed values per degree.
pub fn profile_deviation(
    profile: &ClusteringProfile,
    annealed: &BTreeMap<usize, f64>,
    min_count: usize,
    k_max: f64,
) -> Option<f64> {
    let diffs: Vec<f64> = profile
        .per_degree
        .iter()
        .filter(|(&k, bin)| bin.count >= min_count && k as f64 <= k_max)
        .filter_map(|(k, bin)| annealed.get(k).map(|c| (bin.mean_c - c).abs()))
        .collect();
    (!diffs.is_empty()).then(|| diffs.iter().sum::<f64>() / diffs.len() as f64)
}

/// C̄(k/√n) for every listed degree, evaluated in parallel.
pub fn annealed_by_degree(degrees: &[usize], n: usize, alpha: f64, tol: f64) -> Result<BTreeMap<usize, f64>> {
    degrees
        .par_iter()
        .map(|&k| Ok((k, annealed_value(reduced_degree(k, n), alpha, tol)?.value)))
        .collect()
}

/// Output bookkeeping for one run directory.
struct RunDir<'a> {
    dir: &'a Path,
    manifest: &'a mut ExperimentManifest,
    started: Instant,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    file: &'a str,
    manifest: &'a str,
    experiment: Experiment,
    seed: u64,
    version: &'a str,
    runtime_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<GraphSidecar>,
}

#[derive(Serialize)]
struct ManifestFile<'a> {
    #[serde(flatten)]
    manifest: &'a ExperimentManifest,
    version: &'a str,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

impl RunDir<'_> {
    /// Record `name` in the manifest and return its full path.
    fn register(&mut self, name: String, kind: &str) -> PathBuf {
        let path = self.dir.join(&name);
        self.manifest.outputs.push(OutputRecord {
            path: name,
            kind: kind.to_string(),
        });
        path
    }

    fn sidecar(&mut self, name: &str, graph: Option<GraphSidecar>) -> Result<()> {
        let meta = format!("{name}.meta.json");
        let path = self.register(meta, "sidecar");
        io::write_json(
            &path,
            &Sidecar {
                file: name,
                manifest: MANIFEST_FILE,
                experiment: self.manifest.experiment,
                seed: self.manifest.seed,
                version: io::version_string(),
                runtime_seconds: self.started.elapsed().as_secs_f64(),
                graph,
            },
        )
    }

    /// Register, write and document one CSV.
    fn csv<F: FnOnce(&Path) -> Result<()>>(&mut self, name: String, kind: &str, write: F) -> Result<()> {
        let path = self.register(name.clone(), kind);
        write(&path)?;
        self.sidecar(&name, None)
    }
}

fn write_manifest(dir: &Path, manifest: &ExperimentManifest, error: Option<&Error>) -> Result<()> {
    io::write_json(
        &dir.join(MANIFEST_FILE),
        &ManifestFile {
            manifest,
            version: io::version_string(),
            status: if error.is_some() { "failed" } else { "complete" },
            error: error.map(|e| e.to_string()),
        },
    )
}

/// In-memory results of a run, alongside the files it wrote.
#[derive(Debug, Clone)]
pub enum RunOutcome {
    ClusteringFunction(ClusteringRun),
    Sweep(SweepRun),
    Tail(TailRun),
    Curves(Vec<AnnealedCurve>),
}

#[derive(Debug, Clone)]
pub struct ClusteringRun {
    pub n: usize,
    pub alpha: f64,
    pub profiles: Vec<ClusteringProfile>,
    pub curve: AnnealedCurve,
    /// Per realization: mean |C(k) - C̄(k/√n)| over k <= √n with N_k >= 5.
    pub deviations: Vec<Option<f64>>,
}

#[derive(Debug, Clone)]
pub struct SweepRun {
    pub records: Vec<RealizationRecord>,
    pub summaries: Vec<SweepSummary>,
}

#[derive(Debug, Clone)]
pub struct TailRun {
    pub rows: Vec<TailSummary>,
}

/// Run a validated manifest, writing into `out_dir` (created if missing).
/// On failure a manifest with `"status": "failed"` lists what was written.
pub fn run_experiment(mut manifest: ExperimentManifest, out_dir: &Path) -> Result<(ExperimentManifest, RunOutcome)> {
    manifest.validate()?;
    manifest.outputs.clear();
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let started = Instant::now();
    let mut run = RunDir {
        dir: out_dir,
        manifest: &mut manifest,
        started,
    };
    let result = match run.manifest.experiment {
        Experiment::ClusteringFunction => run_clustering_function(&mut run).map(RunOutcome::ClusteringFunction),
        Experiment::AverageClusteringSweep => run_average_clustering_sweep(&mut run).map(RunOutcome::Sweep),
        Experiment::DegreeFractionsSweep => run_degree_fractions_sweep(&mut run).map(RunOutcome::Sweep),
        Experiment::TailComparison => run_tail_comparison(&mut run).map(RunOutcome::Tail),
        Experiment::AnnealedCurveOnly => run_annealed_curves(&mut run).map(RunOutcome::Curves),
    };
    write_manifest(out_dir, &manifest, result.as_ref().err())?;
    result.map(|outcome| (manifest, outcome))
}

fn run_clustering_function(run: &mut RunDir<'_>) -> Result<ClusteringRun> {
    let m = run.manifest.clone();
    let n = m.n_values[0];
    let root = RngStream::new(m.seed);
    let reals: Vec<Realization> = (0..m.realizations)
        .into_par_iter()
        .map(|r| realize(m.alpha, n, m.source, m.mode, root, r))
        .collect::<Result<_>>()?;
    let profiles: Vec<ClusteringProfile> = reals
        .par_iter()
        .map(|real| profile_from_nodes(n, &node_clustering(&real.graph)))
        .collect();

    for (r, profile) in profiles.iter().enumerate() {
        let name = format!("profile_n{n}_alpha{}_{}_r{r:02}.csv", m.alpha, m.source);
        run.csv(name, "clustering-profile", |p| io::write_profile_csv(p, profile))?;
    }

    let k_min = profiles
        .iter()
        .filter_map(|p| p.per_degree.keys().next().copied())
        .min()
        .unwrap_or(2);
    let observed_max = profiles
        .iter()
        .filter_map(|p| p.per_degree.keys().next_back().copied())
        .max()
        .map(|k| reduced_degree(k, n))
        .unwrap_or(0.0);
    let a_min = reduced_degree(k_min.max(2), n);
    let a_max = if observed_max > a_min {
        observed_max
    } else {
        reduced_degree(n - 1, n).max(2.0 * a_min)
    };
    let grid = reduced_degree_grid(n, k_min, a_max, CURVE_POINTS)?;
    let curve = annealed_curve(m.alpha, &grid, m.tol)?;
    let name = format!("curve_n{n}_alpha{}.csv", m.alpha);
    run.csv(name, "annealed-curve", |p| io::write_curve_csv(p, &curve))?;

    let k_cap = (n as f64).sqrt();
    let mut needed: Vec<usize> = profiles
        .iter()
        .flat_map(|p| p.per_degree.keys().copied())
        .filter(|&k| k as f64 <= k_cap)
        .collect();
    needed.sort_unstable();
    needed.dedup();
    let annealed = annealed_by_degree(&needed, n, m.alpha, m.tol)?;
    let deviations = profiles
        .iter()
        .map(|p| profile_deviation(p, &annealed, 5, k_cap))
        .collect();

    Ok(ClusteringRun {
        n,
        alpha: m.alpha,
        profiles,
        curve,
        deviations,
    })
}

/// Columns of the per-realization table.
pub const REALIZATION_COLUMNS: [&str; 12] = [
    "n",
    "alpha",
    "seed",
    "mode",
    "r0_emp",
    "r1_emp",
    "r0_exact",
    "r1_exact",
    "r0_approx",
    "r1_approx",
    "c_excl",
    "c_incl",
];

fn write_realizations(path: &Path, m: &ExperimentManifest, records: &[RealizationRecord]) -> Result<()> {
    let mut w = io::csv_writer(path)?;
    w.write_record(REALIZATION_COLUMNS)?;
    for rec in records {
        w.write_record([
            rec.n.to_string(),
            real(m.alpha),
            m.seed.to_string(),
            m.mode.to_string(),
            real(rec.empirical.r0),
            real(rec.empirical.r1),
            real(rec.exact.r0),
            real(rec.exact.r1),
            real(rec.approx.r0),
            real(rec.approx.r1),
            opt_real(rec.c_excl),
            real(rec.c_incl),
        ])?;
    }
    io::finish(w, path)
}

/// Sample and measure every `(n, realization)` of a sweep, writing weight
/// files (and optionally edge lists) as it goes.
fn sweep_records(run: &mut RunDir<'_>) -> Result<Vec<RealizationRecord>> {
    let m = run.manifest.clone();
    let root = RngStream::new(m.seed);
    let mut records = Vec::new();
    for &n in &m.n_values {
        let reals: Vec<(Realization, RealizationRecord)> = (0..m.realizations)
            .into_par_iter()
            .map(|r| {
                let real = realize(m.alpha, n, m.source, m.mode, root, r)?;
                let rec = measure(&real)?;
                Ok((real, rec))
            })
            .collect::<Result<_>>()?;
        for (real, rec) in reals {
            let r = real.index;
            let name = format!("weights_n{n}_{}_r{r:02}.csv", m.source);
            run.csv(name, "weights", |p| io::write_weights_csv(p, &real.weights))?;
            if m.write_graphs {
                let name = format!("graph_n{n}_{}_r{r:02}.csv", m.source);
                let path = run.register(name.clone(), "edge-list");
                io::write_edge_list(&path, &real.graph)?;
                let meta = GraphSidecar {
                    n,
                    alpha: m.alpha,
                    seed: m.seed,
                    source: m.source,
                    s_n: rec.s_n,
                };
                run.sidecar(&name, Some(meta))?;
            }
            records.push(rec);
        }
    }
    Ok(records)
}

/// Mean and spread of every sweep metric at one `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub n: usize,
    pub mode: SamplingMode,
    pub reps: usize,
    pub metrics: Vec<(&'static str, Option<Summary>)>,
}

impl SweepSummary {
    pub fn metric(&self, name: &str) -> Option<Summary> {
        self.metrics.iter().find(|(k, _)| *k == name).and_then(|(_, s)| *s)
    }
}

type Extractor = fn(&RealizationRecord) -> Option<f64>;

/// Metric groups of the sweep summary, in column order.
pub const SWEEP_METRICS: [(&str, Extractor); 14] = [
    ("c_excl", |r| r.c_excl),
    ("c_incl", |r| Some(r.c_incl)),
    ("one_minus_r01_emp", |r| Some(1.0 - r.empirical.r01)),
    ("one_minus_r01_exact", |r| Some(1.0 - r.exact.r01)),
    ("one_minus_r01_approx", |r| Some(1.0 - r.approx.r01)),
    ("gap_incl", |r| Some(1.0 - r.empirical.r01 - r.c_incl)),
    ("r0_emp", |r| Some(r.empirical.r0)),
    ("r0_exact", |r| Some(r.exact.r0)),
    ("r0_approx", |r| Some(r.approx.r0)),
    ("r1_emp", |r| Some(r.empirical.r1)),
    ("r1_exact", |r| Some(r.exact.r1)),
    ("r1_approx", |r| Some(r.approx.r1)),
    ("global", |r| r.global),
    ("mean_degree", |r| Some(r.mean_degree)),
];

pub fn summarize_sweep(mode: SamplingMode, records: &[RealizationRecord]) -> Vec<SweepSummary> {
    let mut by_n: BTreeMap<usize, Vec<&RealizationRecord>> = BTreeMap::new();
    for rec in records {
        by_n.entry(rec.n).or_default().push(rec);
    }
    by_n.into_iter()
        .map(|(n, recs)| {
            let metrics = SWEEP_METRICS
                .iter()
                .map(|(name, get)| {
                    let values: Vec<f64> = recs.iter().filter_map(|r| get(r)).collect();
                    let summary = match values.len() {
                        0 => None,
                        1 => Some(Summary {
                            mean: values[0],
                            std: f64::NAN,
                            count: 1,
                        }),
                        _ => summarize(&values).ok(),
                    };
                    (*name, summary)
                })
                .collect();
            SweepSummary {
                n,
                mode,
                reps: recs.len(),
                metrics,
            }
        })
        .collect()
}

fn write_sweep_summary(path: &Path, rows: &[SweepSummary]) -> Result<()> {
    let mut w = io::csv_writer(path)?;
    let mut header = vec!["n".to_string(), "mode".to_string(), "reps".to_string()];
    for (name, _) in SWEEP_METRICS {
        header.push(format!("{name}_mean"));
        header.push(format!("{name}_std"));
    }
    w.write_record(&header)?;
    for row in rows {
        let mut fields = vec![row.n.to_string(), row.mode.to_string(), row.reps.to_string()];
        for (_, s) in &row.metrics {
            fields.push(opt_real(s.map(|s| s.mean)));
            fields.push(opt_real(s.map(|s| s.std).filter(|v| v.is_finite())));
        }
        w.write_record(&fields)?;
    }
    io::finish(w, path)
}

fn run_average_clustering_sweep(run: &mut RunDir<'_>) -> Result<SweepRun> {
    let records = sweep_records(run)?;
    let m = run.manifest.clone();
    let summaries = summarize_sweep(m.mode, &records);
    let name = format!("realizations_alpha{}_{}_{}.csv", m.alpha, m.source, m.mode);
    run.csv(name, "realizations", |p| write_realizations(p, &m, &records))?;
    let name = format!("avg_clustering_alpha{}_{}_{}.csv", m.alpha, m.source, m.mode);
    run.csv(name, "sweep-summary", |p| write_sweep_summary(p, &summaries))?;
    Ok(SweepRun { records, summaries })
}

fn run_degree_fractions_sweep(run: &mut RunDir<'_>) -> Result<SweepRun> {
    let records = sweep_records(run)?;
    let m = run.manifest.clone();
    let summaries = summarize_sweep(m.mode, &records);
    let name = format!("degree_fractions_alpha{}_{}_{}.csv", m.alpha, m.source, m.mode);
    run.csv(name, "realizations", |p| write_realizations(p, &m, &records))?;
    Ok(SweepRun { records, summaries })
}

/// Stable-versus-Pareto tail agreement at the 99th Pareto percentile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailSummary {
    pub alpha: f64,
    pub w99: f64,
    pub ccdf_pareto: f64,
    pub ccdf_stable: f64,
    pub ratio: f64,
}

/// Empirical CCDFs of both samplers on a shared log grid.
pub struct TailTable {
    pub grid: Vec<f64>,
    pub pareto: Vec<f64>,
    pub stable: Vec<f64>,
    pub summary: TailSummary,
}

/// Sample both sources and tabulate their CCDFs on `points` log-spaced
/// abscissae spanning both samples.
pub fn tail_table(alpha: f64, samples: usize, root: RngStream, points: usize) -> Result<TailTable> {
    let label = format!("tail/alpha={alpha}");
    let mut pareto = sample_weights(WeightSource::Pareto, alpha, samples, root.substream(&label, 0))?
        .values()
        .to_vec();
    let mut stable = sample_weights(WeightSource::Stable, alpha, samples, root.substream(&label, 1))?
        .values()
        .to_vec();
    pareto.sort_by(f64::total_cmp);
    stable.sort_by(f64::total_cmp);
    let lo = stable[0].min(0.5);
    let hi = pareto[samples - 1].max(stable[samples - 1]);
    let (l0, l1) = (lo.ln(), hi.ln());
    let grid: Vec<f64> = (0..points)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (points - 1) as f64).exp())
        .collect();
    let w99 = 0.01f64.powf(-1.0 / alpha);
    let (cp, cs) = (ccdf_sorted(&pareto, w99), ccdf_sorted(&stable, w99));
    Ok(TailTable {
        pareto: grid.iter().map(|&x| ccdf_sorted(&pareto, x)).collect(),
        stable: grid.iter().map(|&x| ccdf_sorted(&stable, x)).collect(),
        grid,
        summary: TailSummary {
            alpha,
            w99,
            ccdf_pareto: cp,
            ccdf_stable: cs,
            ratio: cs / cp,
        },
    })
}

fn run_tail_comparison(run: &mut RunDir<'_>) -> Result<TailRun> {
    let m = run.manifest.clone();
    let samples = m.n_values[0];
    let root = RngStream::new(m.seed);
    let tables: Vec<TailTable> = PRESET_ALPHAS
        .par_iter()
        .map(|&a| tail_table(a, samples, root, 200))
        .collect::<Result<_>>()?;
    for t in &tables {
        let name = format!("tail_alpha{}.csv", t.summary.alpha);
        run.csv(name, "tail-ccdf", |path| {
            let mut w = io::csv_writer(path)?;
            w.write_record(["w", "ccdf_pareto", "ccdf_stable", "alpha"])?;
            for i in 0..t.grid.len() {
                w.write_record([
                    real(t.grid[i]),
                    real(t.pareto[i]),
                    real(t.stable[i]),
                    real(t.summary.alpha),
                ])?;
            }
            io::finish(w, path)
        })?;
    }
    let rows: Vec<TailSummary> = tables.iter().map(|t| t.summary).collect();
    run.csv("tail_summary.csv".into(), "tail-summary", |path| {
        let mut w = io::csv_writer(path)?;
        w.write_record(["alpha", "w99", "ccdf_pareto", "ccdf_stable", "ratio"])?;
        for r in &rows {
            w.write_record([
                real(r.alpha),
                real(r.w99),
                real(r.ccdf_pareto),
                real(r.ccdf_stable),
                real(r.ratio),
            ])?;
        }
        io::finish(w, path)
    })?;
    Ok(TailRun { rows })
}

fn run_annealed_curves(run: &mut RunDir<'_>) -> Result<Vec<AnnealedCurve>> {
    let m = run.manifest.clone();
    let mut curves = Vec::new();
    for &n in &m.n_values {
        let grid = reduced_degree_grid(n, 2, reduced_degree(n - 1, n), CURVE_POINTS)?;
        let curve = annealed_curve(m.alpha, &grid, m.tol)?;
        let name = format!("curve_n{n}_alpha{}.csv", m.alpha);
        run.csv(name, "annealed-curve", |p| io::write_curve_csv(p, &curve))?;
        curves.push(curve);
    }
    Ok(curves)
}
