mod common;

use std::fs;
use std::path::Path;

use acsfa_core::bench::{
    export, load_config, run_experiment, summary_csv, summary_from_runs_csv, Algorithm,
    ExperimentConfig,
};
use acsfa_core::stats::ResponseMatrix;
use common::data_path;

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    fs::copy(data_path("ulysses16.tsp"), dir.join("ulysses16.tsp")).unwrap();
    fs::copy(data_path("eil51.tsp"), dir.join("eil51.tsp")).unwrap();
    let p = dir.join("experiment.cfg");
    fs::write(&p, body).unwrap();
    p
}

const SMALL: &str = "# two instances, both algorithms
instances = ulysses16.tsp, eil51.tsp
algorithms = acs, acsfa
repetitions = 3
base_seed = 100
iterations = 30
ants = 5
output_dir = out
";

fn drop_time_column(csv: &str) -> String {
    csv.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn empty_config_gets_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = load_config(&write_config(dir.path(), "instance = eil51.tsp\n")).unwrap();
    assert_eq!(cfg.instances, vec![dir.path().join("eil51.tsp")]);
    assert_eq!(cfg.algorithms, vec![Algorithm::Acs, Algorithm::Acsfa]);
    let d = ExperimentConfig::default();
    assert_eq!((cfg.repetitions, cfg.iterations, cfg.ants), (10, 1000, 10));
    assert_eq!(cfg.bounds, d.bounds);
    assert_eq!((cfg.alpha, cfg.acs_beta, cfg.acs_rho), (0.1, 2.0, 0.1));
}

#[test]
fn experiment_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = load_config(&write_config(dir.path(), SMALL)).unwrap();
    assert_eq!(cfg.seeds, vec![100, 101, 102]);
    let exp = run_experiment(&cfg).unwrap();
    assert_eq!(exp.runs.len(), 2 * 2 * 3);
    assert_eq!(exp.summary.rows.len(), 4);
    for r in &exp.summary.rows {
        assert!(r.best as f64 <= r.average && r.average <= r.worst as f64);
        assert!(r.t_avg_s > 0.0);
    }
    let files = export(&exp, &cfg, &cfg.output_dir).unwrap();
    assert_eq!(files.traces.len(), 2 * 3);

    let summary = fs::read_to_string(&files.summary).unwrap();
    assert!(summary.starts_with("algorithm,instance,best,average,worst,t_avg_s\n"));

    let runs = fs::read_to_string(&files.runs).unwrap();
    let rebuilt = summary_from_runs_csv(&runs).unwrap();
    assert_eq!(rebuilt.len(), exp.summary.rows.len());
    for (a, b) in rebuilt.iter().zip(&exp.summary.rows) {
        assert_eq!(
            (a.algorithm, &a.instance, a.best, a.worst),
            (b.algorithm, &b.instance, b.best, b.worst)
        );
        assert_eq!(a.average, b.average);
        assert!((a.t_avg_s - b.t_avg_s).abs() < 1e-5);
    }

    for t in &files.traces {
        let text = fs::read_to_string(t).unwrap();
        let mut lines = text.lines();
        assert!(lines
            .next()
            .unwrap()
            .starts_with("iteration,beta,rho,q0,ff_gamma,ff_delta,min_beta"));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 30);
        for row in rows {
            let v: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
            for d in 0..5 {
                assert!(cfg.bounds.low(d) <= v[1 + d] && v[1 + d] <= cfg.bounds.high(d));
            }
        }
    }

    let m = ResponseMatrix::from_csv(&fs::read_to_string(&files.best_lengths).unwrap()).unwrap();
    assert_eq!(m.treatments(), ["ACS", "ACSFA"]);
    assert_eq!(m.blocks(), ["ulysses16", "eil51"]);
}

#[test]
fn runs_are_replayable_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = load_config(&write_config(dir.path(), SMALL)).unwrap();
    let first = run_experiment(&cfg).unwrap();
    let second = run_experiment(&cfg).unwrap();
    assert_eq!(
        drop_time_column(&summary_csv(&first.summary)),
        drop_time_column(&summary_csv(&second.summary))
    );
    let a = export(&first, &cfg, &dir.path().join("a")).unwrap();
    let b = export(&second, &cfg, &dir.path().join("b")).unwrap();
    assert_eq!(
        fs::read(&a.best_lengths).unwrap(),
        fs::read(&b.best_lengths).unwrap()
    );
    for (x, y) in a.traces.iter().zip(&b.traces) {
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap());
    }

    let run = &first.runs[4];
    let inst = common::load(&format!("{}.tsp", run.instance));
    let (again, _) = acsfa_core::bench::solve(run.algorithm, &inst, &cfg, run.seed).unwrap();
    assert_eq!(again.best, run.record.best);
}

#[test]
fn single_repetition_collapses() {
    let dir = tempfile::tempdir().unwrap();
    let body = "instance = ulysses16.tsp\nalgorithms = acsfa\nrepetitions = 1\nseeds = 7\niterations = 20\n";
    let cfg = load_config(&write_config(dir.path(), body)).unwrap();
    let exp = run_experiment(&cfg).unwrap();
    let r = &exp.summary.rows[0];
    assert_eq!((r.best as f64, r.worst as f64), (r.average, r.average));
}

#[test]
fn broken_instance_fails_alone() {
    let dir = tempfile::tempdir().unwrap();
    let body = "instances = ulysses16.tsp, broken.tsp\nalgorithms = acs\nrepetitions = 2\niterations = 10\n";
    let p = write_config(dir.path(), body);
    fs::write(dir.path().join("broken.tsp"), "NAME: broken\nTYPE: TSP\nDIMENSION: 5\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\nEOF\n").unwrap();
    let cfg = load_config(&p).unwrap();
    let exp = run_experiment(&cfg).unwrap();
    assert_eq!(exp.summary.rows.len(), 1);
    assert_eq!(exp.summary.failures.len(), 1);
    assert_eq!(exp.summary.failures[0].0, "broken");
    let files = export(&exp, &cfg, &dir.path().join("res")).unwrap();
    assert!(files
        .summary
        .parent()
        .unwrap()
        .join("failures.txt")
        .is_file());
}

#[test]
fn unwritable_output_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let body = "instance = ulysses16.tsp\nalgorithms = acs\nrepetitions = 1\niterations = 1\n";
    let cfg = load_config(&write_config(dir.path(), body)).unwrap();
    let exp = run_experiment(&cfg).unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    assert!(export(&exp, &cfg, &blocker.join("sub")).is_err());
}
