use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use msm_core::experiments::{
    paper_preset, run_experiment, Experiment, ExperimentManifest, RunOutcome, SamplingMode, MANIFEST_FILE,
    REALIZATION_COLUMNS,
};
use msm_core::weights::WeightSource;

fn listing(dir: &Path) -> BTreeSet<String> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect()
}

fn data_files(dir: &Path) -> BTreeSet<String> {
    listing(dir)
        .into_iter()
        .filter(|f| !f.ends_with(".meta.json"))
        .collect()
}

fn manifest_json(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST_FILE)).unwrap()).unwrap()
}

#[test]
fn clustering_function_file_contract() {
    let dir = tempfile::tempdir().unwrap();
    let m = paper_preset(
        Experiment::ClusteringFunction,
        9,
        WeightSource::Pareto,
        SamplingMode::RedrawWeights,
    )
    .into_iter()
    .find(|m| m.alpha == 0.3 && m.n_values == [100])
    .unwrap();
    let m = ExperimentManifest { realizations: 1, ..m };
    run_experiment(m, dir.path()).unwrap();
    let files = data_files(dir.path());
    assert_eq!(files.len(), 3, "{files:?}");
    assert!(files.contains("profile_n100_alpha0.3_pareto_r00.csv"));
    assert!(files.contains("curve_n100_alpha0.3.csv"));
    assert!(files.contains(MANIFEST_FILE));

    let json = manifest_json(dir.path());
    assert_eq!(json["status"], "complete");
    let recorded: BTreeSet<String> = json["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["path"].as_str().unwrap().to_string())
        .collect();
    let mut on_disk = listing(dir.path());
    on_disk.remove(MANIFEST_FILE);
    assert_eq!(recorded, on_disk);

    for csv in files.iter().filter(|f| f.ends_with(".csv")) {
        let meta: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(format!("{csv}.meta.json"))).unwrap()).unwrap();
        assert_eq!(meta["manifest"], MANIFEST_FILE);
        assert_eq!(meta["seed"], 9);
        assert!(meta["version"].as_str().unwrap().starts_with('v'));
        assert!(meta["runtime_seconds"].as_f64().unwrap() >= 0.0);
    }

    let curve = fs::read_to_string(dir.path().join("curve_n100_alpha0.3.csv")).unwrap();
    assert!(curve.starts_with("a,c_bar,c_hub,quad_error,alpha\n"));
    for line in curve.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let a: f64 = f[0].parse().unwrap();
        assert_eq!(f[2].is_empty(), a <= 1.0, "{line}");
    }
}

#[test]
fn same_seed_gives_identical_csvs() {
    let run = |seed| {
        let dir = tempfile::tempdir().unwrap();
        let m = ExperimentManifest::new(Experiment::AverageClusteringSweep, 0.5, vec![50, 200], 3, seed);
        run_experiment(m, dir.path()).unwrap();
        let mut texts = Vec::new();
        for f in data_files(dir.path()).into_iter().filter(|f| f.ends_with(".csv")) {
            texts.push((f.clone(), fs::read(dir.path().join(&f)).unwrap()));
        }
        let manifest = fs::read(dir.path().join(MANIFEST_FILE)).unwrap();
        (texts, manifest)
    };
    let (a, ma) = run(4);
    let (b, mb) = run(4);
    assert_eq!(a, b);
    assert_eq!(ma, mb);
    let (c, _) = run(5);
    assert_ne!(a, c);
}

#[test]
fn clustering_function_is_deterministic() {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let m = ExperimentManifest::new(Experiment::ClusteringFunction, 0.7, vec![300], 2, 8);
        run_experiment(m, dir.path()).unwrap();
        data_files(dir.path())
            .into_iter()
            .map(|f| fs::read(dir.path().join(f)).unwrap())
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

fn weight_files(dir: &Path, n: usize) -> Vec<Vec<u8>> {
    data_files(dir)
        .into_iter()
        .filter(|f| f.starts_with(&format!("weights_n{n}_")))
        .map(|f| fs::read(dir.join(f)).unwrap())
        .collect()
}

#[test]
fn sampling_modes_separate_weight_draws() {
    for mode in [SamplingMode::FixedWeights, SamplingMode::RedrawWeights] {
        let dir = tempfile::tempdir().unwrap();
        let m = ExperimentManifest::new(Experiment::DegreeFractionsSweep, 0.5, vec![100, 400], 4, 3).with_mode(mode);
        run_experiment(m, dir.path()).unwrap();
        for n in [100, 400] {
            let files = weight_files(dir.path(), n);
            assert_eq!(files.len(), 4);
            let distinct: BTreeSet<&Vec<u8>> = files.iter().collect();
            match mode {
                SamplingMode::FixedWeights => assert_eq!(distinct.len(), 1),
                SamplingMode::RedrawWeights => assert_eq!(distinct.len(), 4),
            }
        }
    }
}

#[test]
fn degree_fractions_columns_and_order() {
    let dir = tempfile::tempdir().unwrap();
    let m = ExperimentManifest::new(Experiment::DegreeFractionsSweep, 0.3, vec![60, 120], 3, 2)
        .with_source(WeightSource::Stable)
        .with_mode(SamplingMode::FixedWeights);
    let (_, outcome) = run_experiment(m, dir.path()).unwrap();
    let RunOutcome::Sweep(run) = outcome else { panic!() };
    assert_eq!(run.records.len(), 6);
    let path = dir.path().join("degree_fractions_alpha0.3_stable_fixed.csv");
    let mut reader = csv::Reader::from_path(path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, REALIZATION_COLUMNS);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let ns: Vec<&str> = rows.iter().map(|r| &r[0]).collect();
    assert_eq!(ns, ["60", "60", "60", "120", "120", "120"]);
    for row in &rows {
        assert_eq!(&row[1], "0.3");
        assert_eq!(&row[2], "2");
        assert_eq!(&row[3], "fixed");
        for i in 4..10 {
            let x: f64 = row[i].parse().unwrap();
            assert!((0.0..=1.0).contains(&x));
        }
    }
}

#[test]
fn average_sweep_summary_has_one_row_per_n() {
    let dir = tempfile::tempdir().unwrap();
    let m = ExperimentManifest::new(Experiment::AverageClusteringSweep, 0.5, vec![100, 200, 400], 3, 6);
    let (_, outcome) = run_experiment(m, dir.path()).unwrap();
    let RunOutcome::Sweep(run) = outcome else { panic!() };
    assert_eq!(run.summaries.len(), 3);
    let text = fs::read_to_string(dir.path().join("avg_clustering_alpha0.5_pareto_redraw.csv")).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    for col in [
        "c_excl_mean",
        "c_excl_std",
        "c_incl_mean",
        "one_minus_r01_emp_mean",
        "one_minus_r01_exact_std",
    ] {
        assert!(header.split(',').any(|h| h == col), "{col}");
    }
    assert_eq!(lines.count(), 3);
}

#[test]
fn tail_comparison_ccdfs() {
    let dir = tempfile::tempdir().unwrap();
    let m = ExperimentManifest::new(Experiment::TailComparison, 0.5, vec![100_000], 1, 1);
    let (_, outcome) = run_experiment(m, dir.path()).unwrap();
    let RunOutcome::Tail(run) = outcome else { panic!() };
    assert_eq!(run.rows.len(), 3);
    for alpha in ["0.3", "0.5", "0.7"] {
        let mut reader = csv::Reader::from_path(dir.path().join(format!("tail_alpha{alpha}.csv"))).unwrap();
        let rows: Vec<(f64, f64, f64)> = reader
            .records()
            .map(|r| {
                let r = r.unwrap();
                (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap())
            })
            .collect();
        assert!(rows
            .windows(2)
            .all(|w| w[0].0 < w[1].0 && w[1].1 <= w[0].1 && w[1].2 <= w[0].2));
        let below_one = rows.iter().rfind(|r| r.0 < 1.0).unwrap();
        assert_eq!(below_one.1, 1.0);
    }
}

#[test]
fn invalid_manifest_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let m = ExperimentManifest::new(Experiment::AverageClusteringSweep, 0.5, vec![1000, 100], 2, 1);
    assert!(matches!(run_experiment(m, &out), Err(msm_core::Error::Config(_))));
    assert!(!out.exists());
}

#[test]
fn io_failure_leaves_partial_manifest() {
    let dir = tempfile::tempdir().unwrap();
    // A directory squatting on the first output's name makes its creation fail.
    fs::create_dir(dir.path().join("weights_n50_pareto_r00.csv")).unwrap();
    let m = ExperimentManifest::new(Experiment::DegreeFractionsSweep, 0.5, vec![50], 2, 1);
    assert!(matches!(run_experiment(m, dir.path()), Err(msm_core::Error::Io { .. })));
    let json = manifest_json(dir.path());
    assert_eq!(json["status"], "failed");
    assert!(json["error"].as_str().is_some());
    assert_eq!(json["outputs"][0]["path"], "weights_n50_pareto_r00.csv");
}

#[test]
fn annealed_curves_per_n() {
    let dir = tempfile::tempdir().unwrap();
    let m = ExperimentManifest::new(Experiment::AnnealedCurveOnly, 0.7, vec![100, 10_000], 1, 1);
    let (_, outcome) = run_experiment(m, dir.path()).unwrap();
    let RunOutcome::Curves(curves) = outcome else { panic!() };
    assert_eq!(curves.len(), 2);
    for c in &curves {
        assert!(c.points.iter().all(|p| p.c_bar <= 1.0 + p.quad_error && p.c_bar >= 0.0));
    }
    assert!(dir.path().join("curve_n10000_alpha0.7.csv").exists());
}
