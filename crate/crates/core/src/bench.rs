//! Seeded experiment runner: repeated ACS / hybrid runs over a set of
//! instances, Table-style summaries and plain-text exports.
//!
//! Configuration is a flat `key = value` file; see [`ExperimentConfig::parse`]
//! for the recognised keys. Every run is seeded explicitly, so results do not
//! depend on how the runs are scheduled across worker threads.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::{info, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::acs::{compute_tau0, run_acs, AcsParams, RunRecord};
use crate::acsfa::{run_acsfa, HybridConfig, ParameterTrace};
use crate::error::{Error, Result};
use crate::firefly::{ParamBounds, DIMS, PARAM_NAMES};
use crate::tsplib::{parse_instance, TspInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Acs,
    Acsfa,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Acs => "ACS",
            Algorithm::Acsfa => "ACSFA",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "acs" => Ok(Algorithm::Acs),
            "acsfa" => Ok(Algorithm::Acsfa),
            other => Err(Error::Config(format!(
                "algorithms: unknown algorithm `{other}`"
            ))),
        }
    }
}

/// Everything needed to reproduce an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub instances: Vec<PathBuf>,
    pub algorithms: Vec<Algorithm>,
    pub repetitions: usize,
    pub iterations: usize,
    pub ants: usize,
    /// One seed per repetition; both algorithms share them.
    pub seeds: Vec<u64>,
    /// Global pheromone decay for both algorithms.
    pub alpha: f64,
    pub theta: f64,
    /// Fixed parameters of the ACS baseline.
    pub acs_beta: f64,
    pub acs_rho: f64,
    pub acs_q0: f64,
    pub bounds: ParamBounds<f64>,
    pub ff_alpha0: f64,
    pub ff_beta0: f64,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let base = AcsParams::<f64>::baseline(1.0);
        Self {
            instances: Vec::new(),
            algorithms: vec![Algorithm::Acs, Algorithm::Acsfa],
            repetitions: 10,
            iterations: 1000,
            ants: 10,
            seeds: (0..10).collect(),
            alpha: base.alpha,
            theta: base.theta,
            acs_beta: base.beta,
            acs_rho: base.rho,
            acs_q0: base.q0,
            bounds: ParamBounds::standard(),
            ff_alpha0: 2.3,
            ff_beta0: 1.0,
            output_dir: PathBuf::from("results"),
        }
    }
}

fn field_err(key: &str, msg: impl fmt::Display) -> Error {
    Error::Config(format!("{key}: {msg}"))
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| field_err(key, format!("cannot parse `{}`", v.trim())))
}

fn parse_range(key: &str, v: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = v.split(',').collect();
    if parts.len() != 2 {
        return Err(field_err(key, "expected `low, high`"));
    }
    Ok((parse_num(key, parts[0])?, parse_num(key, parts[1])?))
}

impl ExperimentConfig {
    /// Parses the flat key-value format. Relative instance paths and the
    /// output directory are resolved against `base_dir`.
    ///
    /// Keys: `instance` (repeatable), `instances`, `algorithms`, `repetitions`,
    /// `iterations`, `ants`, `seeds`, `base_seed`, `alpha`, `theta`,
    /// `acs_beta`, `acs_rho`, `acs_q0`, `beta_range`, `rho_range`,
    /// `q0_range`, `ff_gamma_range`, `ff_delta_range`, `ff_alpha0`,
    /// `ff_beta0`, `output_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seeds: Option<Vec<u64>> = None;
        let mut base_seed: Option<u64> = None;
        let mut ranges = *cfg.bounds.ranges();
        let mut output_dir: Option<PathBuf> = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| {
                    Error::Config(format!("line {}: expected `key = value`", lineno + 1))
                })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "instance" => cfg.instances.push(base_dir.join(value)),
                "instances" => cfg.instances.extend(
                    value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| base_dir.join(s)),
                ),
                "algorithms" => {
                    cfg.algorithms = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(Algorithm::from_str)
                        .collect::<Result<_>>()?;
                }
                "repetitions" => cfg.repetitions = parse_num(key, value)?,
                "iterations" => cfg.iterations = parse_num(key, value)?,
                "ants" => cfg.ants = parse_num(key, value)?,
                "seeds" => {
                    seeds = Some(
                        value
                            .split(',')
                            .map(|s| parse_num(key, s))
                            .collect::<Result<_>>()?,
                    )
                }
                "base_seed" => base_seed = Some(parse_num(key, value)?),
                "alpha" => cfg.alpha = parse_num(key, value)?,
                "theta" => cfg.theta = parse_num(key, value)?,
                "acs_beta" => cfg.acs_beta = parse_num(key, value)?,
                "acs_rho" => cfg.acs_rho = parse_num(key, value)?,
                "acs_q0" => cfg.acs_q0 = parse_num(key, value)?,
                "ff_alpha0" => cfg.ff_alpha0 = parse_num(key, value)?,
                "ff_beta0" => cfg.ff_beta0 = parse_num(key, value)?,
                "output_dir" => output_dir = Some(base_dir.join(value)),
                k => {
                    let Some(d) = k
                        .strip_suffix("_range")
                        .and_then(|p| PARAM_NAMES.iter().position(|n| *n == p))
                    else {
                        return Err(Error::Config(format!(
                            "line {}: unknown key `{k}`",
                            lineno + 1
                        )));
                    };
                    ranges[d] = parse_range(key, value)?;
                }
            }
        }

        if seeds.is_some() && base_seed.is_some() {
            return Err(field_err(
                "seeds",
                "give either `seeds` or `base_seed`, not both",
            ));
        }
        cfg.seeds = match (seeds, base_seed) {
            (Some(s), _) => s,
            (None, b) => {
                let b = b.unwrap_or(0);
                (0..cfg.repetitions as u64)
                    .map(|k| b.wrapping_add(k))
                    .collect()
            }
        };
        cfg.output_dir = output_dir.unwrap_or_else(|| base_dir.join("results"));
        cfg.bounds = ParamBounds::new(ranges).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Field-level validation; also checks that every instance file exists.
    pub fn validate(&self) -> Result<()> {
        if self.instances.is_empty() {
            return Err(field_err("instances", "at least one instance is required"));
        }
        for p in &self.instances {
            if !p.is_file() {
                return Err(field_err(
                    "instances",
                    format!("no such file `{}`", p.display()),
                ));
            }
        }
        if self.algorithms.is_empty() {
            return Err(field_err(
                "algorithms",
                "at least one algorithm is required",
            ));
        }
        if self.repetitions == 0 {
            return Err(field_err("repetitions", "must be at least 1"));
        }
        if self.seeds.len() != self.repetitions {
            return Err(field_err(
                "seeds",
                format!(
                    "{} seeds given for {} repetitions",
                    self.seeds.len(),
                    self.repetitions
                ),
            ));
        }
        if self.ants == 0 {
            return Err(field_err("ants", "must be at least 1"));
        }
        self.acs_params(1.0)
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.hybrid_config()
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn acs_params(&self, tau0: f64) -> AcsParams<f64> {
        AcsParams {
            beta: self.acs_beta,
            theta: self.theta,
            rho: self.acs_rho,
            q0: self.acs_q0,
            alpha: self.alpha,
            ants: self.ants,
            tau0,
        }
    }

    pub fn hybrid_config(&self) -> HybridConfig<f64> {
        HybridConfig {
            iterations: self.iterations,
            ants: self.ants,
            alpha: self.alpha,
            theta: self.theta,
            bounds: self.bounds,
            ff_alpha0: self.ff_alpha0,
            ff_beta0: self.ff_beta0,
            time_limit: None,
        }
    }
}

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    ExperimentConfig::parse(&text, base)
}

/// Label used for an instance file in every output.
pub fn instance_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// One seeded run of an algorithm on an instance.
pub fn solve(
    algorithm: Algorithm,
    inst: &TspInstance,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<(RunRecord<f64>, Option<ParameterTrace<f64>>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match algorithm {
        Algorithm::Acs => {
            let params = cfg.acs_params(compute_tau0(inst));
            Ok((run_acs(inst, &params, cfg.iterations, &mut rng)?, None))
        }
        Algorithm::Acsfa => {
            let (rec, trace) = run_acsfa(inst, &cfg.hybrid_config(), &mut rng)?;
            Ok((rec, Some(trace)))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub instance: String,
    pub repetition: usize,
    pub seed: u64,
    pub record: RunRecord<f64>,
    pub trace: Option<ParameterTrace<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: Algorithm,
    pub instance: String,
    pub best: u64,
    pub average: f64,
    pub worst: u64,
    pub t_avg_s: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentSummary {
    pub rows: Vec<SummaryRow>,
    /// Instances that could not be loaded, with the reason.
    pub failures: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub summary: ExperimentSummary,
    pub runs: Vec<RunResult>,
}

/// Min / mean / max per (algorithm, instance), in first-seen order.
pub fn summarize<'a>(
    runs: impl IntoIterator<Item = (Algorithm, &'a str, u64, f64)>,
) -> Vec<SummaryRow> {
    type Group = (Algorithm, String, Vec<(u64, f64)>);
    let mut groups: Vec<Group> = Vec::new();
    for (alg, inst, len, secs) in runs {
        match groups.iter_mut().find(|g| g.0 == alg && g.1 == inst) {
            Some(g) => g.2.push((len, secs)),
            None => groups.push((alg, inst.to_string(), vec![(len, secs)])),
        }
    }
    groups
        .into_iter()
        .map(|(algorithm, instance, v)| {
            let k = v.len() as f64;
            SummaryRow {
                algorithm,
                instance,
                best: v.iter().map(|x| x.0).min().expect("non-empty group"),
                average: v.iter().map(|x| x.0 as f64).sum::<f64>() / k,
                worst: v.iter().map(|x| x.0).max().expect("non-empty group"),
                t_avg_s: v.iter().map(|x| x.1).sum::<f64>() / k,
            }
        })
        .collect()
}

/// Runs every (algorithm, instance, repetition) combination.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Experiment> {
    cfg.validate()?;
    let mut loaded = Vec::new();
    let mut failures = Vec::new();
    for path in &cfg.instances {
        let label = instance_label(path);
        match fs::read_to_string(path)
            .map_err(Error::from)
            .and_then(|t| parse_instance(&t))
        {
            Ok(inst) => loaded.push((label, inst)),
            Err(e) => {
                warn!("skipping {}: {e}", path.display());
                failures.push((label, e.to_string()));
            }
        }
    }

    let mut jobs = Vec::new();
    for &alg in &cfg.algorithms {
        for (k, _) in loaded.iter().enumerate() {
            for (rep, &seed) in cfg.seeds.iter().enumerate() {
                jobs.push((alg, k, rep, seed));
            }
        }
    }
    info!("running {} jobs", jobs.len());
    let runs = jobs
        .par_iter()
        .map(|&(alg, k, rep, seed)| {
            let (label, inst) = &loaded[k];
            let (record, trace) = solve(alg, inst, cfg, seed)?;
            Ok(RunResult {
                algorithm: alg,
                instance: label.clone(),
                repetition: rep,
                seed,
                record,
                trace,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let rows = summarize(runs.iter().map(|r| {
        (
            r.algorithm,
            r.instance.as_str(),
            r.record.best.length(),
            r.record.elapsed.as_secs_f64(),
        )
    }));
    Ok(Experiment {
        summary: ExperimentSummary { rows, failures },
        runs,
    })
}

pub const SUMMARY_HEADER: &str = "algorithm,instance,best,average,worst,t_avg_s";
pub const RUNS_HEADER: &str =
    "algorithm,instance,repetition,seed,iterations,ants,best_length,time_s,tour";

pub fn summary_csv(summary: &ExperimentSummary) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for r in &summary.rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.2},{},{:.2}",
            r.algorithm, r.instance, r.best, r.average, r.worst, r.t_avg_s
        );
    }
    out
}

/// Raw per-run records. Tours use 1-based TSPLIB node ids.
pub fn runs_csv(runs: &[RunResult], cfg: &ExperimentConfig) -> String {
    let mut out = format!("{RUNS_HEADER}\n");
    for r in runs {
        let tour: Vec<String> = r
            .record
            .best
            .order()
            .iter()
            .map(|c| (c + 1).to_string())
            .collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{:.6},{}",
            r.algorithm,
            r.instance,
            r.repetition,
            r.seed,
            cfg.iterations,
            cfg.ants,
            r.record.best.length(),
            r.record.elapsed.as_secs_f64(),
            tour.join(" ")
        );
    }
    out
}

/// Rebuilds summary rows from a `runs.csv` file.
pub fn summary_from_runs_csv(text: &str) -> Result<Vec<SummaryRow>> {
    let mut parsed = Vec::new();
    for (k, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(Error::Config(format!(
                "runs line {}: expected 9 fields",
                k + 1
            )));
        }
        let alg: Algorithm = f[0].parse()?;
        let len: u64 = parse_num("best_length", f[6])?;
        let secs: f64 = parse_num("time_s", f[7])?;
        parsed.push((alg, f[1].to_string(), len, secs));
    }
    Ok(summarize(
        parsed.iter().map(|(a, i, l, s)| (*a, i.as_str(), *l, *s)),
    ))
}

/// Per-iteration parameter statistics; the unprefixed columns are population means.
pub fn trace_csv(trace: &ParameterTrace<f64>) -> String {
    let mut out = String::from("iteration");
    for prefix in ["", "min_", "max_"] {
        for name in PARAM_NAMES {
            let _ = write!(out, ",{prefix}{name}");
        }
    }
    out.push('\n');
    for (t, row) in trace.rows.iter().enumerate() {
        let _ = write!(out, "{}", t + 1);
        for series in [&row.mean, &row.min, &row.max] {
            for v in series.iter().take(DIMS) {
                let _ = write!(out, ",{v:.6}");
            }
        }
        out.push('\n');
    }
    out
}

/// Best lengths as an algorithms × instances matrix, ready for `stats`.
pub fn best_lengths_csv(summary: &ExperimentSummary) -> String {
    let mut algs: Vec<Algorithm> = Vec::new();
    let mut insts: Vec<&str> = Vec::new();
    for r in &summary.rows {
        if !algs.contains(&r.algorithm) {
            algs.push(r.algorithm);
        }
        if !insts.contains(&r.instance.as_str()) {
            insts.push(&r.instance);
        }
    }
    let mut out = String::from("algorithm");
    for i in &insts {
        let _ = write!(out, ",{i}");
    }
    out.push('\n');
    for a in algs {
        let _ = write!(out, "{a}");
        for i in &insts {
            match summary
                .rows
                .iter()
                .find(|r| r.algorithm == a && r.instance == *i)
            {
                Some(r) => {
                    let _ = write!(out, ",{}", r.best);
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

/// Paths written by [`export`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExportedFiles {
    pub summary: PathBuf,
    pub runs: PathBuf,
    pub best_lengths: PathBuf,
    pub traces: Vec<PathBuf>,
}

/// Writes the summary, raw runs, best-length matrix and one trace file per hybrid run.
pub fn export(exp: &Experiment, cfg: &ExperimentConfig, dir: &Path) -> Result<ExportedFiles> {
    let io = |e: std::io::Error, p: &Path| Error::Io(format!("{}: {e}", p.display()));
    fs::create_dir_all(dir).map_err(|e| io(e, dir))?;
    let write = |p: PathBuf, body: String| -> Result<PathBuf> {
        fs::write(&p, body).map_err(|e| io(e, &p))?;
        Ok(p)
    };
    let summary = write(dir.join("summary.csv"), summary_csv(&exp.summary))?;
    let runs = write(dir.join("runs.csv"), runs_csv(&exp.runs, cfg))?;
    let best_lengths = write(dir.join("best_lengths.csv"), best_lengths_csv(&exp.summary))?;
    if !exp.summary.failures.is_empty() {
        let body: String = exp
            .summary
            .failures
            .iter()
            .map(|(i, e)| format!("{i}: {e}\n"))
            .collect();
        write(dir.join("failures.txt"), body)?;
    }
    let mut traces = Vec::new();
    let trace_dir = dir.join("traces");
    for r in &exp.runs {
        if let Some(t) = &r.trace {
            fs::create_dir_all(&trace_dir).map_err(|e| io(e, &trace_dir))?;
            let name = format!(
                "{}_{}_rep{}_seed{}.csv",
                r.algorithm, r.instance, r.repetition, r.seed
            );
            traces.push(write(trace_dir.join(name), trace_csv(t))?);
        }
    }
    Ok(ExportedFiles {
        summary,
        runs,
        best_lengths,
        traces,
    })
}
