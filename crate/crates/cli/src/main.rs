//! `msm`: run multi-scale model experiments and write CSV/JSON outputs.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use msm_core::experiments::{
    paper_preset, run_experiment, Experiment, ExperimentManifest, RunOutcome, SamplingMode, DEFAULT_TOL,
    PRESET_TAIL_SAMPLES,
};
use msm_core::weights::WeightSource;
use msm_core::Error;

#[derive(Parser)]
#[command(name = "msm", version, about = "Multi-scale model simulator and theory evaluator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Empirical C(k) per realization against the annealed curve (one n per run).
    ClusteringFunction(Common),
    /// Node-averaged clustering and 1 - r01 over a sweep of n.
    AvgClustering(Common),
    /// Per-realization r0/r1: empirical, exact conditional and approximate.
    DegreeFractions(Common),
    /// Stable versus Pareto tail CCDFs (--n is the sample size).
    TailCompare(Common),
    /// Annealed clustering curve on the reduced-degree range of each n.
    AnnealedCurve(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Redraw,
    Fixed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Pareto,
    Stable,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Paper,
}

#[derive(Args)]
struct Common {
    /// Tail index in (0, 1).
    #[arg(long)]
    alpha: Option<f64>,
    /// Comma-separated network sizes.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Realizations per n.
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "redraw")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "pareto")]
    source: Source,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Absolute tolerance of the annealed quadrature.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Start from the default grid of alpha, n and reps; --alpha and --n then select a subset.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Also write edge lists for sweep realizations.
    #[arg(long)]
    write_graphs: bool,
}

impl Command {
    fn split(&self) -> (Experiment, &Common) {
        match self {
            Command::ClusteringFunction(c) => (Experiment::ClusteringFunction, c),
            Command::AvgClustering(c) => (Experiment::AverageClusteringSweep, c),
            Command::DegreeFractions(c) => (Experiment::DegreeFractionsSweep, c),
            Command::TailCompare(c) => (Experiment::TailComparison, c),
            Command::AnnealedCurve(c) => (Experiment::AnnealedCurveOnly, c),
        }
    }
}

fn manifests(experiment: Experiment, c: &Common) -> Result<Vec<ExperimentManifest>, Error> {
    let mode = match c.mode {
        Mode::Redraw => SamplingMode::RedrawWeights,
        Mode::Fixed => SamplingMode::FixedWeights,
    };
    let source = match c.source {
        Source::Pareto => WeightSource::Pareto,
        Source::Stable => WeightSource::Stable,
    };
    let mut list = match c.preset {
        Some(Preset::Paper) => {
            let mut list = paper_preset(experiment, c.seed, source, mode);
            if let Some(alpha) = c.alpha {
                list.retain(|m| m.alpha == alpha);
            }
            if !c.n.is_empty() {
                match experiment {
                    Experiment::ClusteringFunction => list.retain(|m| c.n.contains(&m.n_values[0])),
                    _ => list.iter_mut().for_each(|m| m.n_values = c.n.clone()),
                }
            }
            if list.is_empty() {
                return Err(Error::Config("no preset run matches --alpha/--n".into()));
            }
            list
        }
        None => {
            let alpha = c
                .alpha
                .ok_or_else(|| Error::Config("--alpha is required without --preset".into()))?;
            let n_values = match (experiment, c.n.is_empty()) {
                (Experiment::TailComparison, true) => vec![PRESET_TAIL_SAMPLES],
                (_, true) => return Err(Error::Config("--n is required without --preset".into())),
                (_, false) => c.n.clone(),
            };
            let m = ExperimentManifest::new(experiment, alpha, n_values, 1, c.seed)
                .with_mode(mode)
                .with_source(source);
            vec![m]
        }
    };
    for m in &mut list {
        if let Some(reps) = c.reps {
            m.realizations = reps;
        } else if c.preset.is_none() {
            m.realizations = 10;
        }
        m.tol = c.tol;
        m.write_graphs = c.write_graphs;
    }
    for m in &list {
        m.validate()?;
    }
    Ok(list)
}

fn report(dir: &Path, outcome: &RunOutcome) {
    match outcome {
        RunOutcome::ClusteringFunction(run) => {
            let devs: Vec<f64> = run.deviations.iter().flatten().copied().collect();
            let mean = devs.iter().sum::<f64>() / devs.len().max(1) as f64;
            println!(
                "{}: n={} alpha={} realizations={} mean|C(k)-Cbar|={mean:.4}",
                dir.display(),
                run.n,
                run.alpha,
                run.profiles.len()
            );
        }
        RunOutcome::Sweep(run) => {
            for s in &run.summaries {
                let show = |name: &str| {
                    s.metric(name)
                        .map(|m| format!("{:.4}±{:.4}", m.mean, m.std))
                        .unwrap_or_else(|| "-".into())
                };
                println!(
                    "{}: n={} c_excl={} c_incl={} 1-r01={}",
                    dir.display(),
                    s.n,
                    show("c_excl"),
                    show("c_incl"),
                    show("one_minus_r01_emp")
                );
            }
        }
        RunOutcome::Tail(run) => {
            for r in &run.rows {
                println!("{}: alpha={} ratio@w99={:.4}", dir.display(), r.alpha, r.ratio);
            }
        }
        RunOutcome::Curves(curves) => {
            for c in curves {
                println!("{}: alpha={} points={}", dir.display(), c.alpha, c.points.len());
            }
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Domain(_) => 2,
        Error::Quadrature { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, common) = cli.command.split();
    let result = manifests(experiment, common).and_then(|list| {
        let single = list.len() == 1;
        for m in list {
            let dir = if single {
                common.out.clone()
            } else {
                common.out.join(m.label())
            };
            let (_, outcome) = run_experiment(m, &dir)?;
            report(&dir, &outcome);
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
