//! Registry of reproducible experiments, each writing `<name>.csv` and
//! `<name>.summary.txt` into an output directory.
//!
//! Every experiment is a pure function of its name, its parameters and the
//! seed. Floats are written with Rust's shortest round-trip formatting, so the
//! CSV parses back to the same bits and reruns are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::abc::{self, AbcConfig, Tolerance};
use crate::classic_mc::{accept_reject, importance_sample, sir_resample};
use crate::diagnostics::{hpd_interval, ks_statistic, DiagnosticsReport, DEFAULT_BURN_IN};
use crate::error::{Error, Result};
use crate::hmc::Hmc;
use crate::mcmc::{run_chain, slice_move, Kernel, MetropolisHastings, Proposal, Trace};
use crate::rng::{RandomSource, SeededStream};
use crate::targets::{self, std_normal_cdf, Law, Target};

pub const DEFAULT_SEED: u64 = 1;
/// Replicate curves in `is_infinite_variance`.
pub const IS_REPLICATES: usize = 100;
/// Upper bound on the rows of the running-mean grid in `is_infinite_variance`.
const IS_MAX_ROWS: usize = 1000;

/// Parameters an experiment may accept as overrides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    N,
    Eps,
    Steps,
    Scale,
    Quantile,
}

impl Param {
    fn flag(self) -> &'static str {
        match self {
            Param::N => "n",
            Param::Eps => "eps",
            Param::Steps => "steps",
            Param::Scale => "scale",
            Param::Quantile => "quantile",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExperimentInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub accepts: &'static [Param],
}

pub const REGISTRY: &[ExperimentInfo] = &[
    ExperimentInfo {
        name: "is_infinite_variance",
        description: "importance sampling of E(1/10) from E(1): 100 running means of h(x)=x targeting 10",
        accepts: &[Param::N],
    },
    ExperimentInfo {
        name: "sir_student",
        description: "SIR of a Student t5 shifted to 3 from N(0,1) draws (fails to reach the right tail)",
        accepts: &[Param::N],
    },
    ExperimentInfo {
        name: "sir_normal",
        description: "SIR of N(2, 1/2) from N(0,1) draws (recovers the target)",
        accepts: &[Param::N],
    },
    ExperimentInfo {
        name: "ar_beta",
        description: "accept-reject Be(3.3,4.4) under a uniform envelope",
        accepts: &[Param::N],
    },
    ExperimentInfo {
        name: "slice_normal",
        description: "slice sampler on N(0,1) with slice heights",
        accepts: &[Param::N],
    },
    ExperimentInfo {
        name: "indep_mh",
        description: "independent Metropolis-Hastings, N(1,1) target with N(0,1) proposal",
        accepts: &[Param::N],
    },
    ExperimentInfo {
        name: "trunc_proposal_mh",
        description: "Metropolis-Hastings with a positive truncated normal proposal on a log-scale bump",
        accepts: &[Param::N, Param::Scale],
    },
    ExperimentInfo {
        name: "rw_truncated_target",
        description: "Gaussian random walk on N(4,1) truncated to (0,1)",
        accepts: &[Param::N, Param::Scale],
    },
    ExperimentInfo {
        name: "hmc_normal",
        description: "HMC on N(0,1) plus a smoke run on the 18-dimensional artificial target",
        accepts: &[Param::N, Param::Eps, Param::Steps],
    },
    ExperimentInfo {
        name: "abc_normal",
        description: "ABC rejection for a normal location with median/MAD summaries",
        accepts: &[Param::N, Param::Quantile],
    },
];

/// One line per registry entry: name, two spaces, description.
pub fn list_experiments() -> String {
    let width = REGISTRY.iter().map(|e| e.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for e in REGISTRY {
        let _ = writeln!(s, "{:width$}  {}", e.name, e.description);
    }
    s
}

pub fn experiment_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|e| e.name).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub seed: u64,
    pub n: Option<usize>,
    pub eps: Option<f64>,
    pub steps: Option<usize>,
    pub scale: Option<f64>,
    pub quantile: Option<f64>,
    /// Restores the larger sample sizes of the original runs where they were reduced.
    pub full: bool,
    pub out_dir: PathBuf,
}

impl ExperimentSpec {
    pub fn new(name: impl Into<String>, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            name: name.into(),
            seed: DEFAULT_SEED,
            n: None,
            eps: None,
            steps: None,
            scale: None,
            quantile: None,
            full: false,
            out_dir: out_dir.into(),
        }
    }

    fn given(&self) -> Vec<Param> {
        let mut v = Vec::new();
        if self.n.is_some() {
            v.push(Param::N);
        }
        if self.eps.is_some() {
            v.push(Param::Eps);
        }
        if self.steps.is_some() {
            v.push(Param::Steps);
        }
        if self.scale.is_some() {
            v.push(Param::Scale);
        }
        if self.quantile.is_some() {
            v.push(Param::Quantile);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
}

/// Parameters after applying defaults.
#[derive(Debug, Clone, Copy)]
struct Resolved {
    seed: u64,
    n: usize,
    eps: f64,
    steps: usize,
    scale: f64,
    quantile: f64,
}

fn lookup(name: &str) -> Result<&'static ExperimentInfo> {
    REGISTRY.iter().find(|e| e.name == name).ok_or_else(|| Error::Lookup {
        name: name.to_string(),
        known: experiment_names().join(", "),
    })
}

fn default_n(name: &str, full: bool) -> usize {
    match name {
        "is_infinite_variance" => 10_000,
        "sir_student" | "sir_normal" => {
            if full {
                10_000_000
            } else {
                100_000
            }
        }
        // proposals; about 9.8k acceptances expected
        "ar_beta" => 21_320,
        "rw_truncated_target" => 100_000,
        "abc_normal" => {
            if full {
                1_000_000
            } else {
                100_000
            }
        }
        _ => 10_000,
    }
}

fn resolve(spec: &ExperimentSpec, info: &ExperimentInfo) -> Result<Resolved> {
    for p in spec.given() {
        if !info.accepts.contains(&p) {
            return Err(Error::Parameter(format!(
                "experiment {} does not take --{}",
                info.name,
                p.flag()
            )));
        }
    }
    let r = Resolved {
        seed: spec.seed,
        n: spec.n.unwrap_or_else(|| default_n(info.name, spec.full)),
        eps: spec.eps.unwrap_or(0.1),
        steps: spec.steps.unwrap_or(10),
        scale: spec.scale.unwrap_or(0.1),
        quantile: spec.quantile.unwrap_or(0.01),
    };
    if r.n == 0 {
        return Err(Error::Parameter("--n must be >= 1".into()));
    }
    if !(r.eps > 0.0) || !r.eps.is_finite() {
        return Err(Error::Parameter(format!("--eps must be > 0, got {}", r.eps)));
    }
    if r.steps == 0 {
        return Err(Error::Parameter("--steps must be >= 1".into()));
    }
    if !(r.scale > 0.0) || !r.scale.is_finite() {
        return Err(Error::Parameter(format!("--scale must be > 0, got {}", r.scale)));
    }
    if !(r.quantile > 0.0 && r.quantile <= 1.0) {
        return Err(Error::Parameter(format!("--quantile must lie in (0,1], got {}", r.quantile)));
    }
    Ok(r)
}

/// Ordered `key=value` pairs.
#[derive(Debug, Default)]
struct Summary(Vec<(String, String)>);

impl Summary {
    fn put(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_string(), value.to_string()));
    }

    fn append_block(&mut self, block: &str) {
        for line in block.lines() {
            if let Some((k, v)) = line.split_once('=') {
                self.put(k, v);
            }
        }
    }

    fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.0 {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }
}

/// Runs the named experiment and writes its two output files.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let info = lookup(&spec.name)?;
    let p = resolve(spec, info)?;
    let mut summary = Summary::default();
    summary.put("experiment", info.name);
    summary.put("seed", p.seed);
    summary.put("full", spec.full);
    for param in info.accepts {
        match param {
            Param::N => summary.put("n", p.n),
            Param::Eps => summary.put("eps", p.eps),
            Param::Steps => summary.put("steps", p.steps),
            Param::Scale => summary.put("scale", p.scale),
            Param::Quantile => summary.put("quantile", p.quantile),
        }
    }
    let csv = match info.name {
        "is_infinite_variance" => is_infinite_variance(&p, &mut summary)?,
        "sir_student" => sir(targets::student_t(5.0, 3.0)?, &p, &mut summary, None)?,
        "sir_normal" => {
            let sd = std::f64::consts::FRAC_1_SQRT_2;
            let cdf = move |x: f64| std_normal_cdf((x - 2.0) / sd);
            sir(targets::normal(2.0, sd)?, &p, &mut summary, Some(&cdf))?
        }
        "ar_beta" => ar_beta(&p, &mut summary)?,
        "slice_normal" => slice_normal(&p, &mut summary)?,
        "indep_mh" => {
            let kernel = MetropolisHastings {
                target: targets::normal(1.0, 1.0)?,
                proposal: Proposal::Independent(Law::normal(0.0, 1.0)?),
            };
            chain_experiment(&kernel, vec![0.0], &p, &mut summary, None)?
        }
        "trunc_proposal_mh" => {
            let kernel = MetropolisHastings {
                target: targets::log_bump(),
                proposal: Proposal::TruncatedNormalPositive { sigma: p.scale },
            };
            chain_experiment(&kernel, vec![2f64.exp()], &p, &mut summary, None)?
        }
        "rw_truncated_target" => {
            let kernel = MetropolisHastings {
                target: targets::trunc_normal_target(),
                proposal: Proposal::random_walk(p.scale),
            };
            chain_experiment(&kernel, vec![0.5], &p, &mut summary, Some(&trunc_normal_cdf))?
        }
        "hmc_normal" => hmc_normal(&p, &mut summary)?,
        "abc_normal" => abc_normal(&p, &mut summary)?,
        other => unreachable!("registry entry {other} has no runner"),
    };
    fs::create_dir_all(&spec.out_dir)?;
    let csv_path = spec.out_dir.join(format!("{}.csv", info.name));
    let summary_path = spec.out_dir.join(format!("{}.summary.txt", info.name));
    fs::write(&csv_path, csv)?;
    fs::write(&summary_path, summary.render())?;
    Ok(ExperimentOutput {
        csv_path,
        summary_path,
    })
}

/// CDF of N(4,1) truncated to (0,1).
pub fn trunc_normal_cdf(x: f64) -> f64 {
    let lo = std_normal_cdf(-4.0);
    let mass = std_normal_cdf(-3.0) - lo;
    ((std_normal_cdf(x.clamp(0.0, 1.0) - 4.0) - lo) / mass).clamp(0.0, 1.0)
}

fn write_rows(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn single_column(name: &str, values: &[f64]) -> Result<Vec<u8>> {
    write_rows(&[name.to_string()], values.iter().map(|v| vec![v.to_string()]))
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (m, xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n)
}

/// Running means of `h(x) w(x)` for `h(x) = x` under exact weights.
fn running_is_means(proposal: &Law, target: &Target, n: usize, rng: &mut dyn RandomSource) -> Result<Vec<f64>> {
    let ws = importance_sample(proposal, target, n, rng)?;
    let mut acc = 0.0;
    Ok(ws
        .points
        .iter()
        .zip(&ws.log_weights)
        .enumerate()
        .map(|(i, (x, lw))| {
            acc += x[0] * lw.exp();
            acc / (i + 1) as f64
        })
        .collect())
}

fn final_estimates(proposal: &Law, target: &Target, p: &Resolved, stream_base: u64) -> Result<Vec<Vec<f64>>> {
    (0..IS_REPLICATES)
        .into_par_iter()
        .map(|r| {
            let mut rng = SeededStream::new(p.seed, stream_base + r as u64);
            running_is_means(proposal, target, p.n, &mut rng)
        })
        .collect()
}

fn is_infinite_variance(p: &Resolved, summary: &mut Summary) -> Result<Vec<u8>> {
    const TRUTH: f64 = 10.0;
    const REVERSED_TRUTH: f64 = 1.0;
    let heavy = final_estimates(&Law::exponential(1.0)?, &Law::exponential(0.1)?.as_target(), p, 1)?;
    let light = final_estimates(&Law::exponential(0.1)?, &Law::exponential(1.0)?.as_target(), p, 10_001)?;

    let last = |curves: &[Vec<f64>]| curves.iter().map(|c| c[c.len() - 1]).collect::<Vec<_>>();
    let (heavy_mean, heavy_var) = mean_var(&last(&heavy));
    let (light_mean, light_var) = mean_var(&last(&light));
    let heavy_spread = heavy_var.sqrt() / TRUTH;
    let light_spread = light_var.sqrt() / REVERSED_TRUTH;
    summary.put("truth", TRUTH);
    summary.put("replicates", IS_REPLICATES);
    summary.put("final_mean", heavy_mean);
    summary.put("final_relative_sd", heavy_spread);
    summary.put("reversed_truth", REVERSED_TRUTH);
    summary.put("reversed_final_mean", light_mean);
    summary.put("reversed_final_relative_sd", light_spread);
    summary.put("spread_ratio", heavy_spread / light_spread);
    summary.put(
        "note",
        "curves are random paths; only the qualitative spread of the original figure is reproducible",
    );

    let stride = p.n.div_ceil(IS_MAX_ROWS).max(1);
    let steps: Vec<usize> = (1..=p.n).filter(|s| s % stride == 0 || *s == p.n).collect();
    let mut header = vec!["step".to_string()];
    header.extend((1..=IS_REPLICATES).map(|r| format!("rep{r}")));
    write_rows(
        &header,
        steps.into_iter().map(|s| {
            let mut row = vec![s.to_string()];
            row.extend(heavy.iter().map(|c| c[s - 1].to_string()));
            row
        }),
    )
}

fn sir(target: Target, p: &Resolved, summary: &mut Summary, cdf: Option<&dyn Fn(f64) -> f64>) -> Result<Vec<u8>> {
    let mut rng = SeededStream::new(p.seed, 0);
    let proposal = Law::normal(0.0, 1.0)?;
    let ws = importance_sample(&proposal, &target, p.n, &mut rng)?;
    let resampled: Vec<f64> = sir_resample(&ws, p.n, &mut rng)?.into_iter().map(|x| x[0]).collect();
    let (m, v) = mean_var(&resampled);
    summary.put("target", target.label());
    summary.put("weight_ess", ws.ess()?);
    summary.put("resampled_mean", m);
    summary.put("resampled_variance", v);
    if let Some(f) = cdf {
        summary.put("ks_statistic", ks_statistic(&resampled, f));
    }
    single_column("x", &resampled)
}

fn ar_beta(p: &Resolved, summary: &mut Summary) -> Result<Vec<u8>> {
    // exponents 2.3 and 3.4 give the Be(3.3, 4.4) law
    let (a, b) = (2.3, 3.4);
    let target = targets::beta_unnorm(a, b)?;
    let mode = a / (a + b);
    let m = target.log_unnorm(&[mode])?.exp();
    let mut rng = SeededStream::new(p.seed, 0);
    let rep = accept_reject(&target, &Law::uniform(0.0, 1.0)?, m, p.n, &mut rng)?;
    let xs: Vec<f64> = rep.accepted.iter().map(|x| x[0]).collect();
    let log_beta = libm::lgamma(a + 1.0) + libm::lgamma(b + 1.0) - libm::lgamma(a + b + 2.0);
    summary.put("envelope_m", m);
    summary.put("accepted", xs.len());
    summary.put("acceptance_rate", rep.acceptance_rate);
    summary.put("expected_acceptance_rate", log_beta.exp() / m);
    if !xs.is_empty() {
        summary.put("mean", mean_var(&xs).0);
    }
    single_column("x", &xs)
}

fn slice_normal(p: &Resolved, summary: &mut Summary) -> Result<Vec<u8>> {
    let target = targets::std_normal();
    let mut rng = SeededStream::new(p.seed, 0);
    let mut x = 0.0;
    let mut states = vec![vec![x]];
    let mut levels = vec![f64::NAN];
    for _ in 0..p.n {
        let mv = slice_move(x, &target, &mut rng)?;
        x = mv.x;
        states.push(vec![x]);
        levels.push(mv.log_level);
    }
    let trace = Trace {
        accepted: vec![true; states.len()],
        states,
        divergent: None,
        provenance: rng.provenance(),
        kernel_label: "slice".into(),
    };
    report_chain(&trace, summary, Some(&std_normal_cdf))?;
    write_rows(
        &["step", "x1", "log_level"].map(String::from),
        trace
            .states
            .iter()
            .zip(&levels)
            .enumerate()
            .map(|(t, (s, l))| vec![t.to_string(), s[0].to_string(), l.to_string()]),
    )
}

fn report_chain(trace: &Trace, summary: &mut Summary, cdf: Option<&dyn Fn(f64) -> f64>) -> Result<()> {
    summary.put("kernel", &trace.kernel_label);
    summary.put("burn_in_fraction", DEFAULT_BURN_IN);
    let report = DiagnosticsReport::from_trace(trace, DEFAULT_BURN_IN)?;
    summary.append_block(&report.to_key_value());
    if let Some(f) = cdf {
        let start = (trace.len() as f64 * DEFAULT_BURN_IN).floor() as usize;
        let kept: Vec<f64> = trace.states[start..].iter().map(|s| s[0]).collect();
        summary.put("ks_statistic", ks_statistic(&kept, f));
    }
    Ok(())
}

fn trace_csv(trace: &Trace) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    trace.write_csv(&mut buf)?;
    Ok(buf)
}

fn chain_experiment(
    kernel: &dyn Kernel,
    x0: Vec<f64>,
    p: &Resolved,
    summary: &mut Summary,
    cdf: Option<&dyn Fn(f64) -> f64>,
) -> Result<Vec<u8>> {
    let mut rng = SeededStream::new(p.seed, 0);
    let trace = run_chain(kernel, x0, p.n, &mut rng)?;
    report_chain(&trace, summary, cdf)?;
    trace_csv(&trace)
}

fn hmc_normal(p: &Resolved, summary: &mut Summary) -> Result<Vec<u8>> {
    let kernel = Hmc::new(targets::std_normal(), p.eps, p.steps);
    let mut rng = SeededStream::new(p.seed, 0);
    let trace = run_chain(&kernel, vec![0.0], p.n, &mut rng)?;
    report_chain(&trace, summary, Some(&std_normal_cdf))?;
    summary.put("divergences", trace.divergence_count());

    let art = Hmc::new(targets::builtin("artificial18", &[])?, 0.01, 20);
    let mut art_rng = SeededStream::new(p.seed, 1);
    let art_trace = run_chain(&art, vec![0.0; targets::ARTIFICIAL_DIM], 1000, &mut art_rng)?;
    summary.put("artificial18_eps", art.eps);
    summary.put("artificial18_steps", art.steps);
    summary.put("artificial18_iterations", 1000);
    summary.put("artificial18_acceptance_rate", art_trace.acceptance_rate());
    summary.put("artificial18_divergences", art_trace.divergence_count());
    trace_csv(&trace)
}

fn abc_normal(p: &Resolved, summary: &mut Summary) -> Result<Vec<u8>> {
    const N_OBS: usize = 50;
    const THETA_TRUE: f64 = 1.0;
    let model = abc::normal_location(N_OBS, 5.0)?;
    let x_obs = model.simulate(&[THETA_TRUE], &mut SeededStream::new(p.seed, 1))?;
    let (med, mad) = abc::median_mad(&x_obs)?;
    let cfg = AbcConfig::new(abc::median_mad_summary, Tolerance::Quantile(p.quantile))?;
    let res = abc::abc_reject(&model, &x_obs, &cfg, p.n, &mut SeededStream::new(p.seed, 0))?;
    let theta = res.coordinate(0);
    let (m, v) = mean_var(&theta);
    summary.put("theta_true", THETA_TRUE);
    summary.put("observations", N_OBS);
    summary.put("observed_median", med);
    summary.put("observed_mad", mad);
    summary.put("summary_scales", res.scales.iter().map(f64::to_string).collect::<Vec<_>>().join(";"));
    summary.put("epsilon_used", res.epsilon_used);
    summary.put("accepted", res.len());
    summary.put("acceptance_rate", res.acceptance_rate());
    summary.put("n_simulated", res.n_simulated);
    summary.put("posterior_mean", m);
    summary.put("posterior_sd", v.sqrt());
    if theta.len() >= 2 {
        let (lo, hi) = hpd_interval(&theta, 0.95)?;
        summary.put("hpd95_lo", lo);
        summary.put("hpd95_hi", hi);
    }
    let mut buf = Vec::new();
    res.write_csv(&mut buf)?;
    Ok(buf)
}

/// A parsed numeric CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Reads a CSV produced by this crate; every field must parse as `f64`.
pub fn read_csv(path: &Path) -> Result<CsvTable> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::Parameter(format!("non-numeric CSV field `{f}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(CsvTable { header, rows })
}

/// Reads a `key=value` summary file in order.
pub fn read_summary(path: &Path) -> Result<Vec<(String, String)>> {
    Ok(fs::read_to_string(path)?
        .lines()
        .filter_map(|l| l.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_listing() {
        let s = list_experiments();
        assert!(s.contains("ar_beta"));
        assert_eq!(s.lines().count(), 10);
        assert_eq!(s, list_experiments());
        assert_eq!(experiment_names()[0], "is_infinite_variance");
        assert_eq!(experiment_names()[9], "abc_normal");
    }

    #[test]
    fn unknown_name_and_bad_overrides() {
        let dir = tempfile::tempdir().unwrap();
        let err = run_experiment(&ExperimentSpec::new("nope", dir.path())).unwrap_err();
        match err {
            Error::Lookup { known, .. } => assert!(known.contains("hmc_normal")),
            e => panic!("{e}"),
        }
        let mut spec = ExperimentSpec::new("ar_beta", dir.path());
        spec.eps = Some(0.2);
        assert!(matches!(run_experiment(&spec), Err(Error::Parameter(_))));
        let mut spec = ExperimentSpec::new("hmc_normal", dir.path());
        spec.eps = Some(-1.0);
        assert!(matches!(run_experiment(&spec), Err(Error::Parameter(_))));
        let mut spec = ExperimentSpec::new("abc_normal", dir.path());
        spec.quantile = Some(1.5);
        assert!(matches!(run_experiment(&spec), Err(Error::Parameter(_))));
    }

    #[test]
    fn small_chain_roundtrips() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = ExperimentSpec::new("indep_mh", dir.path());
        spec.n = Some(50);
        let out = run_experiment(&spec).unwrap();
        let t = read_csv(&out.csv_path).unwrap();
        assert_eq!(t.header, ["step", "accepted", "x1"]);
        assert_eq!(t.rows.len(), 51);
        let kv = read_summary(&out.summary_path).unwrap();
        assert_eq!(kv[0], ("experiment".into(), "indep_mh".into()));
        assert!(kv.iter().any(|(k, v)| k == "diag_ess" && v == "NaN"));
    }

    #[test]
    fn trunc_cdf_endpoints() {
        assert_eq!(trunc_normal_cdf(0.0), 0.0);
        assert!((trunc_normal_cdf(1.0) - 1.0).abs() < 1e-12);
        assert!(trunc_normal_cdf(0.5) < 0.5);
    }
}
