//! Approximate Bayesian computation: rejection, likelihood-free MCMC, tolerance
//! selection and model choice.
//!
//! Distances live in summary space. The default metric is Euclidean after
//! dividing each summary component by its prior-predictive MAD (components with
//! zero MAD keep scale 1). Quantile tolerances use the lower empirical
//! quantile: the sorted distance at index `floor(q (n - 1))`.

use std::io::Write;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mcmc::{Proposal, Trace};
use crate::rng::RandomSource;
use crate::targets::{LogDensityFn, SamplerFn};

pub type SimulatorFn = Arc<dyn Fn(&[f64], &mut dyn RandomSource) -> Vec<f64> + Send + Sync>;
pub type SummaryFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Simulation budget for fixed-tolerance rejection.
pub const DEFAULT_BUDGET: usize = 10_000_000;
/// Prior-predictive draws used to fit MAD scales in fixed-tolerance mode.
pub const DEFAULT_PILOT: usize = 1000;

/// A prior sampler and forward simulator; no likelihood is ever evaluated.
#[derive(Clone)]
pub struct GenerativeModel {
    label: String,
    theta_dim: usize,
    data_len: usize,
    prior_sampler: SamplerFn,
    simulator: SimulatorFn,
    prior_log_density: Option<LogDensityFn>,
}

impl std::fmt::Debug for GenerativeModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GenerativeModel")
            .field("label", &self.label)
            .field("theta_dim", &self.theta_dim)
            .field("data_len", &self.data_len)
            .field("prior_log_density", &self.prior_log_density.is_some())
            .finish()
    }
}

impl GenerativeModel {
    pub fn new(
        label: impl Into<String>,
        theta_dim: usize,
        data_len: usize,
        prior_sampler: impl Fn(&mut dyn RandomSource) -> Vec<f64> + Send + Sync + 'static,
        simulator: impl Fn(&[f64], &mut dyn RandomSource) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            theta_dim,
            data_len,
            prior_sampler: Arc::new(prior_sampler),
            simulator: Arc::new(simulator),
            prior_log_density: None,
        }
    }

    pub fn with_prior_log_density(
        mut self,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.prior_log_density = Some(Arc::new(f));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn theta_dim(&self) -> usize {
        self.theta_dim
    }

    pub fn data_len(&self) -> usize {
        self.data_len
    }

    pub fn sample_prior(&self, rng: &mut dyn RandomSource) -> Result<Vec<f64>> {
        let theta = (self.prior_sampler)(rng);
        check_len(self.theta_dim, theta.len())?;
        Ok(theta)
    }

    pub fn simulate(&self, theta: &[f64], rng: &mut dyn RandomSource) -> Result<Vec<f64>> {
        check_len(self.theta_dim, theta.len())?;
        let z = (self.simulator)(theta, rng);
        check_len(self.data_len, z.len())?;
        Ok(z)
    }

    pub fn prior_log_density(&self, theta: &[f64]) -> Result<f64> {
        let f = self
            .prior_log_density
            .as_ref()
            .ok_or(Error::Capability("model has no prior log-density"))?;
        check_len(self.theta_dim, theta.len())?;
        let v = f(theta);
        Ok(if v.is_nan() { f64::NEG_INFINITY } else { v })
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Shape { expected, got })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Distance {
    Euclidean,
    /// Euclidean after dividing component `i` by `scales[i]`.
    Scaled(Vec<f64>),
    /// Scales fitted as prior-predictive MADs of each summary component.
    MadScaled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    /// Accept when the distance is at most `eps`; `f64::INFINITY` accepts everything.
    Fixed(f64),
    /// Keep the fraction `q` of simulations with the smallest distances.
    Quantile(f64),
}

#[derive(Clone)]
pub struct AbcConfig {
    pub summary: SummaryFn,
    pub distance: Distance,
    pub tolerance: Tolerance,
    /// Maximum simulations in fixed-tolerance mode.
    pub budget: usize,
    /// Prior-predictive draws used for [`Distance::MadScaled`] in fixed-tolerance mode.
    pub pilot: usize,
}

impl AbcConfig {
    pub fn new(
        summary: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        tolerance: Tolerance,
    ) -> Result<Self> {
        let cfg = Self {
            summary: Arc::new(summary),
            distance: Distance::MadScaled,
            tolerance,
            budget: DEFAULT_BUDGET,
            pilot: DEFAULT_PILOT,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The raw dataset itself as the summary.
    pub fn identity(tolerance: Tolerance) -> Result<Self> {
        Self::new(|z| z.to_vec(), tolerance)
    }

    pub fn with_distance(mut self, distance: Distance) -> Self {
        self.distance = distance;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    fn validate(&self) -> Result<()> {
        match self.tolerance {
            Tolerance::Fixed(eps) if !(eps >= 0.0) => {
                Err(Error::Parameter(format!("tolerance must be >= 0, got {eps}")))
            }
            Tolerance::Quantile(q) if !(q > 0.0 && q <= 1.0) => {
                Err(Error::Parameter(format!("tolerance quantile must lie in (0,1], got {q}")))
            }
            _ => Ok(()),
        }?;
        if let Distance::Scaled(s) = &self.distance {
            if s.iter().any(|v| !(*v > 0.0)) {
                return Err(Error::Parameter(format!("distance scales must be > 0: {s:?}")));
            }
        }
        Ok(())
    }

    fn summarize(&self, z: &[f64]) -> Vec<f64> {
        (self.summary)(z)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbcResult {
    pub accepted_thetas: Vec<Vec<f64>>,
    pub distances: Vec<f64>,
    pub epsilon_used: f64,
    pub n_simulated: usize,
    /// Per-component summary scales used by the distance.
    pub scales: Vec<f64>,
}

impl AbcResult {
    pub fn len(&self) -> usize {
        self.accepted_thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accepted_thetas.is_empty()
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.n_simulated == 0 {
            0.0
        } else {
            self.len() as f64 / self.n_simulated as f64
        }
    }

    /// Values of parameter coordinate `i` across acceptances.
    pub fn coordinate(&self, i: usize) -> Vec<f64> {
        self.accepted_thetas.iter().map(|t| t[i]).collect()
    }

    /// `theta1..thetak,distance`, one row per acceptance.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let k = self.accepted_thetas.first().map_or(0, Vec::len);
        let mut header: Vec<String> = (1..=k).map(|i| format!("theta{i}")).collect();
        header.push("distance".into());
        w.write_record(&header)?;
        for (theta, d) in self.accepted_thetas.iter().zip(&self.distances) {
            let mut row: Vec<String> = theta.iter().map(f64::to_string).collect();
            row.push(d.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary_line(&self) -> String {
        format!(
            "epsilon_used={} acceptance_rate={} n_simulated={}",
            self.epsilon_used,
            self.acceptance_rate(),
            self.n_simulated
        )
    }
}

/// Sample median and unscaled median absolute deviation.
pub fn median_mad(data: &[f64]) -> Result<(f64, f64)> {
    if data.is_empty() {
        return Err(Error::Shape { expected: 1, got: 0 });
    }
    let mut v = data.to_vec();
    let med = median_in_place(&mut v);
    for x in v.iter_mut() {
        *x = (*x - med).abs();
    }
    let mad = median_in_place(&mut v);
    Ok((med, mad))
}

fn median_in_place(v: &mut [f64]) -> f64 {
    v.sort_unstable_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Lower empirical `q`-quantile of `distances`.
pub fn select_tolerance(distances: &[f64], q: f64) -> Result<f64> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::Parameter(format!("tolerance quantile must lie in (0,1], got {q}")));
    }
    if distances.is_empty() {
        return Err(Error::Parameter("no distances to take a quantile of".into()));
    }
    let mut d = distances.to_vec();
    let idx = (q * (d.len() - 1) as f64).floor() as usize;
    let (_, kth, _) = d.select_nth_unstable_by(idx, f64::total_cmp);
    Ok(*kth)
}

/// Component-wise MAD of a set of summary vectors, with zero replaced by 1.
pub fn mad_scales(summaries: &[Vec<f64>]) -> Result<Vec<f64>> {
    let k = summaries.first().map_or(0, Vec::len);
    (0..k)
        .map(|i| {
            let col: Vec<f64> = summaries.iter().map(|s| s[i]).collect();
            let (_, mad) = median_mad(&col)?;
            Ok(if mad > 0.0 && mad.is_finite() { mad } else { 1.0 })
        })
        .collect()
}

fn scaled_distance(a: &[f64], b: &[f64], scales: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| {
            let s = scales.get(i).copied().unwrap_or(1.0);
            let d = (x - y) / s;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn fixed_scales(cfg: &AbcConfig, k: usize) -> Result<Option<Vec<f64>>> {
    match &cfg.distance {
        Distance::Euclidean => Ok(Some(vec![1.0; k])),
        Distance::Scaled(s) => {
            check_len(k, s.len())?;
            Ok(Some(s.clone()))
        }
        Distance::MadScaled => Ok(None),
    }
}

/// Prior-predictive pilot run drawing model indices from `models` by weight.
fn pilot_scales(
    models: &[(&GenerativeModel, f64)],
    cfg: &AbcConfig,
    rng: &mut dyn RandomSource,
) -> Result<Vec<f64>> {
    let mut sums = Vec::with_capacity(cfg.pilot.max(1));
    for _ in 0..cfg.pilot.max(1) {
        let m = pick_model(models, rng);
        let theta = m.sample_prior(rng)?;
        let z = m.simulate(&theta, rng)?;
        sums.push(cfg.summarize(&z));
    }
    mad_scales(&sums)
}

fn pick_model<'a>(models: &[(&'a GenerativeModel, f64)], rng: &mut dyn RandomSource) -> &'a GenerativeModel {
    if models.len() == 1 {
        return models[0].0;
    }
    let u = rng.uniform01();
    let mut acc = 0.0;
    for (m, p) in models {
        acc += p;
        if u < acc {
            return m;
        }
    }
    models[models.len() - 1].0
}

/// Scales for fixed-tolerance runs: given directly, or fitted on a pilot run.
fn resolve_fixed_scales(
    models: &[(&GenerativeModel, f64)],
    cfg: &AbcConfig,
    k: usize,
    rng: &mut dyn RandomSource,
) -> Result<Vec<f64>> {
    match fixed_scales(cfg, k)? {
        Some(s) => Ok(s),
        None => {
            let s = pilot_scales(models, cfg, rng)?;
            check_len(k, s.len())?;
            Ok(s)
        }
    }
}

/// ABC rejection.
///
/// With [`Tolerance::Fixed`], simulates `(theta, z)` from prior and model until
/// `n` acceptances, failing once `cfg.budget` simulations are spent. With
/// [`Tolerance::Quantile`], simulates exactly `n` pairs and keeps every one whose
/// distance is at most the selected quantile, in simulation order.
pub fn abc_reject(
    model: &GenerativeModel,
    x_obs: &[f64],
    cfg: &AbcConfig,
    n: usize,
    rng: &mut dyn RandomSource,
) -> Result<AbcResult> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::Parameter("ABC needs N >= 1".into()));
    }
    check_len(model.data_len, x_obs.len())?;
    let s_obs = cfg.summarize(x_obs);
    let k = s_obs.len();
    match cfg.tolerance {
        Tolerance::Fixed(eps) => {
            let scales = resolve_fixed_scales(&[(model, 1.0)], cfg, k, rng)?;
            let mut accepted_thetas = Vec::with_capacity(n);
            let mut distances = Vec::with_capacity(n);
            let mut simulated = 0;
            while accepted_thetas.len() < n {
                if simulated == cfg.budget {
                    return Err(Error::BudgetExhausted {
                        simulated,
                        accepted: accepted_thetas.len(),
                    });
                }
                let theta = model.sample_prior(rng)?;
                let z = model.simulate(&theta, rng)?;
                simulated += 1;
                let d = scaled_distance(&cfg.summarize(&z), &s_obs, &scales);
                if d <= eps {
                    accepted_thetas.push(theta);
                    distances.push(d);
                }
            }
            Ok(AbcResult {
                accepted_thetas,
                distances,
                epsilon_used: eps,
                n_simulated: simulated,
                scales,
            })
        }
        Tolerance::Quantile(q) => {
            let mut thetas = Vec::with_capacity(n);
            let mut sums = Vec::with_capacity(n);
            for _ in 0..n {
                let theta = model.sample_prior(rng)?;
                let z = model.simulate(&theta, rng)?;
                thetas.push(theta);
                sums.push(cfg.summarize(&z));
            }
            let scales = match fixed_scales(cfg, k)? {
                Some(s) => s,
                None => mad_scales(&sums)?,
            };
            let all: Vec<f64> = sums.iter().map(|s| scaled_distance(s, &s_obs, &scales)).collect();
            let eps = select_tolerance(&all, q)?;
            let (accepted_thetas, distances) = thetas
                .into_iter()
                .zip(all)
                .filter(|(_, d)| *d <= eps)
                .unzip();
            Ok(AbcResult {
                accepted_thetas,
                distances,
                epsilon_used: eps,
                n_simulated: n,
                scales,
            })
        }
    }
}

/// Likelihood-free MCMC with a fixed tolerance.
///
/// The chain starts from one fixed-tolerance rejection acceptance. Each step
/// draws `theta' ~ K(.|theta)`, then `z'` from the model, then `u`, and moves iff
/// `u <= pi(theta') K(theta|theta') / (pi(theta) K(theta'|theta))` and the
/// distance of `z'` is at most `eps`. Proposals outside the prior support are
/// rejected before simulating. On rejection `(theta, z)` is kept unchanged.
pub fn abc_mcmc(
    model: &GenerativeModel,
    x_obs: &[f64],
    cfg: &AbcConfig,
    proposal: &Proposal,
    n: usize,
    rng: &mut dyn RandomSource,
) -> Result<Trace> {
    if model.prior_log_density.is_none() {
        return Err(Error::Capability("ABC-MCMC needs the prior log-density"));
    }
    let eps = match cfg.tolerance {
        Tolerance::Fixed(eps) => eps,
        Tolerance::Quantile(_) => {
            return Err(Error::Parameter("ABC-MCMC needs a fixed tolerance".into()))
        }
    };
    let init = abc_reject(model, x_obs, cfg, 1, rng)?;
    let s_obs = cfg.summarize(x_obs);
    let scales = init.scales;
    let mut theta = init.accepted_thetas.into_iter().next().expect("one acceptance");
    let mut log_prior = model.prior_log_density(&theta)?;

    let mut states = Vec::with_capacity(n + 1);
    let mut accepted = Vec::with_capacity(n + 1);
    states.push(theta.clone());
    accepted.push(true);
    for _ in 0..n {
        let (cand, log_q_ratio) = proposal.propose(&theta, rng)?;
        let cand_prior = model.prior_log_density(&cand)?;
        let mut moved = false;
        if cand_prior > f64::NEG_INFINITY {
            let z = model.simulate(&cand, rng)?;
            let u = rng.uniform01();
            let log_ratio = cand_prior - log_prior + log_q_ratio;
            if u <= log_ratio.exp() && scaled_distance(&cfg.summarize(&z), &s_obs, &scales) <= eps {
                theta = cand;
                log_prior = cand_prior;
                moved = true;
            }
        }
        states.push(theta.clone());
        accepted.push(moved);
    }
    Ok(Trace {
        states,
        accepted,
        divergent: None,
        provenance: rng.provenance(),
        kernel_label: format!("abc_mcmc({})", model.label),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BayesFactorEstimate {
    /// `(acc_1 / sim_1) / (acc_2 / sim_2)`.
    pub bayes_factor: f64,
    pub simulated: [usize; 2],
    pub accepted: [usize; 2],
    pub epsilon_used: f64,
}

/// ABC model choice between `m1` and `m2`.
///
/// Each of the `n_total` simulations first picks model 1 with probability
/// `prior_prob1`. Acceptance frequencies are divided by the realized
/// simulation frequencies, which removes the prior weights, so the ratio
/// estimates the Bayes factor `B_12` whatever frequencies are used.
pub fn abc_bayes_factor(
    m1: &GenerativeModel,
    m2: &GenerativeModel,
    prior_prob1: f64,
    x_obs: &[f64],
    cfg: &AbcConfig,
    n_total: usize,
    rng: &mut dyn RandomSource,
) -> Result<BayesFactorEstimate> {
    cfg.validate()?;
    if !(prior_prob1 > 0.0 && prior_prob1 < 1.0) {
        return Err(Error::Parameter(format!("prior probability must lie in (0,1), got {prior_prob1}")));
    }
    if n_total == 0 {
        return Err(Error::Parameter("model choice needs at least one simulation".into()));
    }
    check_len(m1.data_len, x_obs.len())?;
    check_len(m2.data_len, x_obs.len())?;
    let models = [(m1, prior_prob1), (m2, 1.0 - prior_prob1)];
    let s_obs = cfg.summarize(x_obs);
    let k = s_obs.len();
    let pilot_scales = match cfg.tolerance {
        Tolerance::Fixed(_) => Some(resolve_fixed_scales(&models, cfg, k, rng)?),
        Tolerance::Quantile(_) => fixed_scales(cfg, k)?,
    };

    let mut index = Vec::with_capacity(n_total);
    let mut sums = Vec::with_capacity(n_total);
    for _ in 0..n_total {
        let which = usize::from(rng.uniform01() >= prior_prob1);
        let m = models[which].0;
        let theta = m.sample_prior(rng)?;
        let z = m.simulate(&theta, rng)?;
        index.push(which);
        sums.push(cfg.summarize(&z));
    }
    let scales = match pilot_scales {
        Some(s) => s,
        None => mad_scales(&sums)?,
    };
    let dist: Vec<f64> = sums.iter().map(|s| scaled_distance(s, &s_obs, &scales)).collect();
    let eps = match cfg.tolerance {
        Tolerance::Fixed(eps) => eps,
        Tolerance::Quantile(q) => select_tolerance(&dist, q)?,
    };
    let mut simulated = [0usize; 2];
    let mut accepted = [0usize; 2];
    for (which, d) in index.iter().zip(&dist) {
        simulated[*which] += 1;
        if *d <= eps {
            accepted[*which] += 1;
        }
    }
    if accepted.contains(&0) {
        return Err(Error::UndefinedEstimate(format!(
            "no acceptances for one model (accepted {accepted:?} of {simulated:?})"
        )));
    }
    let rate = |i: usize| accepted[i] as f64 / simulated[i] as f64;
    Ok(BayesFactorEstimate {
        bayes_factor: rate(0) / rate(1),
        simulated,
        accepted,
        epsilon_used: eps,
    })
}

/// Poisson variate by multiplication of uniforms, split into chunks of mean
/// below 30 for larger rates.
pub fn poisson(lambda: f64, rng: &mut dyn RandomSource) -> f64 {
    const CHUNK: f64 = 30.0;
    let mut remaining = lambda.max(0.0);
    let mut total = 0.0;
    while remaining > 0.0 {
        let mu = remaining.min(CHUNK);
        remaining -= mu;
        let limit = (-mu).exp();
        let mut prod = rng.uniform01();
        while prod >= limit {
            total += 1.0;
            prod *= rng.uniform01();
        }
    }
    total
}

fn unit_interval_log_density(theta: &[f64]) -> f64 {
    if (0.0..=1.0).contains(&theta[0]) {
        0.0
    } else {
        f64::NEG_INFINITY
    }
}

/// `theta ~ U(0,1)`, `n` i.i.d. Bernoulli(theta) outcomes coded 0/1.
pub fn bernoulli_toy(n: usize) -> GenerativeModel {
    GenerativeModel::new(
        "bernoulli_toy",
        1,
        n,
        |rng| vec![rng.uniform01()],
        move |theta, rng| {
            (0..n)
                .map(|_| if rng.uniform01() < theta[0] { 1.0 } else { 0.0 })
                .collect()
        },
    )
    .with_prior_log_density(unit_interval_log_density)
}

/// `theta ~ N(0, prior_sd^2)`, `n` i.i.d. N(theta, 1) observations.
pub fn normal_location(n: usize, prior_sd: f64) -> Result<GenerativeModel> {
    if !(prior_sd > 0.0) || !prior_sd.is_finite() {
        return Err(Error::Parameter(format!("prior sd must be > 0, got {prior_sd}")));
    }
    let log_norm = -prior_sd.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln();
    Ok(GenerativeModel::new(
        "normal_location",
        1,
        n,
        move |rng| vec![prior_sd * rng.standard_normal()],
        move |theta, rng| (0..n).map(|_| theta[0] + rng.standard_normal()).collect(),
    )
    .with_prior_log_density(move |t| {
        let z = t[0] / prior_sd;
        log_norm - 0.5 * z * z
    }))
}

/// `(median, mad)` of a dataset; constant-zero for an empty one.
pub fn median_mad_summary(z: &[f64]) -> Vec<f64> {
    let (m, d) = median_mad(z).unwrap_or((0.0, 0.0));
    vec![m, d]
}

/// Sum of the observations.
pub fn sum_summary(z: &[f64]) -> Vec<f64> {
    vec![z.iter().sum()]
}

/// `lambda ~ Gamma(1, 1)`, `n` i.i.d. Poisson(lambda) counts.
pub fn poisson_gamma(n: usize) -> GenerativeModel {
    GenerativeModel::new(
        "poisson_gamma",
        1,
        n,
        |rng| vec![rng.exponential(1.0).expect("unit rate")],
        move |theta, rng| (0..n).map(|_| poisson(theta[0], rng)).collect(),
    )
    .with_prior_log_density(|t| if t[0] >= 0.0 { -t[0] } else { f64::NEG_INFINITY })
}

/// `p ~ U(0,1)`, `n` i.i.d. Geometric(p) counts of failures before the first success.
pub fn geometric_beta(n: usize) -> GenerativeModel {
    GenerativeModel::new(
        "geometric_beta",
        1,
        n,
        |rng| vec![rng.uniform01()],
        move |theta, rng| {
            let log_fail = (-theta[0]).ln_1p();
            (0..n)
                .map(|_| {
                    if theta[0] >= 1.0 {
                        0.0
                    } else {
                        ((-rng.uniform01()).ln_1p() / log_fail).floor()
                    }
                })
                .collect()
        },
    )
    .with_prior_log_density(unit_interval_log_density)
}

/// Parameter values of [`discrete_toy`].
pub const DISCRETE_TOY_THETAS: [f64; 2] = [0.3, 0.6];
/// Prior probabilities of [`DISCRETE_TOY_THETAS`].
pub const DISCRETE_TOY_PRIOR: [f64; 2] = [0.4, 0.6];
/// Trials behind the single Binomial observation of [`discrete_toy`]; outcomes are `0..=5`.
pub const DISCRETE_TOY_TRIALS: usize = 5;

/// Two parameter values and one Binomial(5, theta) observation with six outcomes.
pub fn discrete_toy() -> GenerativeModel {
    GenerativeModel::new(
        "discrete_toy",
        1,
        1,
        |rng| {
            let i = usize::from(rng.uniform01() >= DISCRETE_TOY_PRIOR[0]);
            vec![DISCRETE_TOY_THETAS[i]]
        },
        |theta, rng| {
            let k = (0..DISCRETE_TOY_TRIALS)
                .filter(|_| rng.uniform01() < theta[0])
                .count();
            vec![k as f64]
        },
    )
    .with_prior_log_density(|t| {
        DISCRETE_TOY_THETAS
            .iter()
            .position(|v| *v == t[0])
            .map_or(f64::NEG_INFINITY, |i| DISCRETE_TOY_PRIOR[i].ln())
    })
}
