//! Independent-sample Monte Carlo: accept–reject, importance sampling and
//! sampling–importance–resampling (SIR).
//!
//! Importance weights live in log space throughout and are only exponentiated
//! after subtracting their maximum, so heavy-tailed ratios such as Student-t
//! over Normal do not overflow.

use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::targets::{Law, Target};

/// Slack allowed when policing `p(y) <= M g(y)` in log space, so that an
/// envelope equal to the target up to rounding is not reported as violated.
const ENVELOPE_LOG_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct AcceptRejectReport {
    pub accepted: Vec<Vec<f64>>,
    pub proposals_used: usize,
    pub acceptance_rate: f64,
}

/// Draw `n_proposals` candidates `y ~ g` and keep those with
/// `u < p(y) / (M g(y))`.
///
/// The bound `p <= M g` is checked at every proposal; a violation aborts with
/// [`Error::EnvelopeViolation`] naming the offending point.
pub fn accept_reject(
    target: &Target,
    envelope: &Law,
    m: f64,
    n_proposals: usize,
    rng: &mut dyn RandomSource,
) -> Result<AcceptRejectReport> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::Parameter(format!("envelope constant M must be > 0, got {m}")));
    }
    if envelope.dim() != target.dim() {
        return Err(Error::Shape {
            expected: target.dim(),
            got: envelope.dim(),
        });
    }
    let log_m = m.ln();
    let mut accepted = Vec::new();
    for _ in 0..n_proposals {
        let y = envelope.sample(rng);
        let u = rng.uniform01();
        let log_ratio = target.eval(&y) - log_m - envelope.log_density(&y);
        if log_ratio > ENVELOPE_LOG_SLACK {
            return Err(Error::EnvelopeViolation { point: y });
        }
        if u < log_ratio.exp() {
            accepted.push(y);
        }
    }
    let acceptance_rate = if n_proposals == 0 {
        0.0
    } else {
        accepted.len() as f64 / n_proposals as f64
    };
    Ok(AcceptRejectReport {
        accepted,
        proposals_used: n_proposals,
        acceptance_rate,
    })
}

/// Draws with their log importance weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSample {
    pub points: Vec<Vec<f64>>,
    pub log_weights: Vec<f64>,
}

impl WeightedSample {
    pub fn new(points: Vec<Vec<f64>>, log_weights: Vec<f64>) -> Result<Self> {
        if points.len() != log_weights.len() {
            return Err(Error::Shape {
                expected: points.len(),
                got: log_weights.len(),
            });
        }
        if log_weights.iter().any(|w| w.is_nan() || *w == f64::INFINITY) {
            return Err(Error::Parameter("log-weights must be finite or -inf".into()));
        }
        Ok(Self {
            points,
            log_weights,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn max_log_weight(&self) -> Result<f64> {
        let max = self
            .log_weights
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Err(Error::DegenerateSample);
        }
        Ok(max)
    }

    /// Weights scaled so the largest equals one, plus the log of that scale.
    pub fn shifted_weights(&self) -> Result<(Vec<f64>, f64)> {
        let max = self.max_log_weight()?;
        let w = self.log_weights.iter().map(|lw| (lw - max).exp()).collect();
        Ok((w, max))
    }

    /// Weights normalized to sum to one.
    pub fn normalized_weights(&self) -> Result<Vec<f64>> {
        let (mut w, _) = self.shifted_weights()?;
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= total);
        Ok(w)
    }

    /// `(sum w)^2 / sum w^2`.
    pub fn ess(&self) -> Result<f64> {
        let (w, _) = self.shifted_weights()?;
        let (s, s2) = w.iter().fold((0.0, 0.0), |(s, s2), v| (s + v, s2 + v * v));
        Ok(s * s / s2)
    }
}

/// Whether the target's log-density includes its normalizing constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Exact,
    UpToConstant,
}

#[derive(Debug, Clone)]
pub struct ImportanceEstimate {
    /// `(1/N) sum h(x_i) w(x_i)`, only meaningful for a normalized target.
    pub raw_estimate: Option<f64>,
    /// `sum h w / sum w`.
    pub self_normalized: f64,
    pub ess: f64,
    pub weighted: WeightedSample,
}

/// Estimate `E_f[h(X)]` from `n` draws of the proposal `q`.
pub fn importance_estimate(
    h: impl Fn(&[f64]) -> f64,
    proposal: &Law,
    target: &Target,
    normalization: Normalization,
    n: usize,
    rng: &mut dyn RandomSource,
) -> Result<ImportanceEstimate> {
    if n == 0 {
        return Err(Error::Parameter("importance sample size must be >= 1".into()));
    }
    let weighted = importance_sample(proposal, target, n, rng)?;
    let (w, log_scale) = weighted.shifted_weights()?;
    let mut sum_w = 0.0;
    let mut sum_hw = 0.0;
    let mut sum_w2 = 0.0;
    for (x, wi) in weighted.points.iter().zip(&w) {
        if *wi == 0.0 {
            continue;
        }
        sum_w += wi;
        sum_w2 += wi * wi;
        sum_hw += h(x) * wi;
    }
    let raw_estimate = match normalization {
        Normalization::Exact => Some(sum_hw / n as f64 * log_scale.exp()),
        Normalization::UpToConstant => None,
    };
    Ok(ImportanceEstimate {
        raw_estimate,
        self_normalized: sum_hw / sum_w,
        ess: sum_w * sum_w / sum_w2,
        weighted,
    })
}

/// `n` proposal draws weighted by `log f(x) - log q(x)`.
pub fn importance_sample(
    proposal: &Law,
    target: &Target,
    n: usize,
    rng: &mut dyn RandomSource,
) -> Result<WeightedSample> {
    if proposal.dim() != target.dim() {
        return Err(Error::Shape {
            expected: target.dim(),
            got: proposal.dim(),
        });
    }
    let mut points = Vec::with_capacity(n);
    let mut log_weights = Vec::with_capacity(n);
    for _ in 0..n {
        let x = proposal.sample(rng);
        let lf = target.eval(&x);
        let lw = if lf == f64::NEG_INFINITY {
            lf
        } else {
            lf - proposal.log_density(&x)
        };
        points.push(x);
        log_weights.push(if lw.is_nan() { f64::NEG_INFINITY } else { lw });
    }
    WeightedSample::new(points, log_weights)
}

/// Multinomial resampling of `m` points with probabilities `w_i / sum w`.
///
/// The output is only approximately distributed from the target: dividing by
/// the random weight sum changes the marginal law of each resampled point.
pub fn sir_resample(
    sample: &WeightedSample,
    m: usize,
    rng: &mut dyn RandomSource,
) -> Result<Vec<Vec<f64>>> {
    let (w, _) = sample.shifted_weights()?;
    let cumulative: Vec<f64> = w
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect();
    let total = *cumulative.last().ok_or(Error::DegenerateSample)?;
    let last = cumulative.len() - 1;
    Ok((0..m)
        .map(|_| {
            let t = rng.uniform01() * total;
            let idx = cumulative.partition_point(|c| *c <= t).min(last);
            sample.points[idx].clone()
        })
        .collect())
}
