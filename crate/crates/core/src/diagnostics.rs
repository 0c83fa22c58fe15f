//! Chain and sample diagnostics.
//!
//! The asymptotic variance `var(X) + 2 sum_t cov(X_0, X_t)` is estimated with
//! the initial positive sequence rule: autocovariances are summed in
//! consecutive-lag pairs `gamma(2k) + gamma(2k+1)` until the first pair that is
//! not positive. The series functions operate on exactly the values given;
//! burn-in removal happens in [`DiagnosticsReport::from_trace`].

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mcmc::Trace;

/// Fraction of a chain discarded before computing report moments.
pub const DEFAULT_BURN_IN: f64 = 0.1;
/// Shortest series accepted by [`asymptotic_variance`] and [`ess_chain`].
pub const MIN_SERIES_LEN: usize = 100;

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn autocov_centered(centered: &[f64], lag: usize) -> f64 {
    let n = centered.len();
    centered[..n - lag]
        .iter()
        .zip(&centered[lag..])
        .map(|(a, b)| a * b)
        .sum::<f64>()
        / n as f64
}

/// Biased (1/N-normalized) sample autocovariance at `lag`.
pub fn autocovariance(series: &[f64], lag: usize) -> Result<f64> {
    if lag >= series.len() {
        return Err(Error::Parameter(format!(
            "lag {lag} must be below the series length {}",
            series.len()
        )));
    }
    let m = mean(series);
    let centered: Vec<f64> = series.iter().map(|x| x - m).collect();
    Ok(autocov_centered(&centered, lag))
}

/// Asymptotic variance of the chain average, scaled so that an i.i.d. series
/// returns its variance.
pub fn asymptotic_variance(series: &[f64]) -> Result<f64> {
    if series.len() < MIN_SERIES_LEN {
        return Err(Error::Parameter(format!(
            "series needs at least {MIN_SERIES_LEN} values, got {}",
            series.len()
        )));
    }
    let m = mean(series);
    let centered: Vec<f64> = series.iter().map(|x| x - m).collect();
    let gamma0 = autocov_centered(&centered, 0);
    if !(gamma0 > 0.0) {
        return Err(Error::DegenerateSeries("zero variance"));
    }
    let n = centered.len();
    let mut pair_sum = 0.0;
    let mut lag = 0;
    while lag + 1 < n {
        let pair = autocov_centered(&centered, lag) + autocov_centered(&centered, lag + 1);
        if pair <= 0.0 {
            break;
        }
        pair_sum += pair;
        lag += 2;
    }
    let sigma2 = -gamma0 + 2.0 * pair_sum;
    if !(sigma2 > 0.0) {
        return Err(Error::DegenerateSeries("non-positive asymptotic variance estimate"));
    }
    Ok(sigma2)
}

/// `N * variance / asymptotic_variance`.
pub fn ess_chain(series: &[f64]) -> Result<f64> {
    let sigma2 = asymptotic_variance(series)?;
    let gamma0 = autocovariance(series, 0)?;
    Ok(series.len() as f64 * gamma0 / sigma2)
}

/// Kolmogorov–Smirnov distance between the sample's empirical CDF and `cdf`.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    if sample.is_empty() {
        return 0.0;
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x).clamp(0.0, 1.0);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

fn ks_coefficient(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

/// Critical value of the one-sample KS statistic at level `alpha` for an
/// (effective) sample size `n`, using Stephens' small-sample correction.
pub fn ks_critical(n: f64, alpha: f64) -> f64 {
    let rn = n.sqrt();
    ks_coefficient(alpha) / (rn + 0.12 + 0.11 / rn)
}

/// Asymptotic critical value of the two-sample KS statistic.
pub fn ks_two_sample_critical(n: f64, m: f64, alpha: f64) -> f64 {
    ks_coefficient(alpha) * ((n + m) / (n * m)).sqrt()
}

/// Shortest window of the sorted sample holding `ceil(level * n)` points.
pub fn hpd_interval(sample: &[f64], level: f64) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Parameter(format!("HPD level must lie in (0,1), got {level}")));
    }
    if sample.is_empty() {
        return Err(Error::Parameter("HPD interval of an empty sample".into()));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let k = ((level * n as f64 - 1e-9).ceil() as usize).clamp(1, n);
    let (mut best, mut lo) = (f64::INFINITY, 0);
    for i in 0..=n - k {
        let w = sorted[i + k - 1] - sorted[i];
        if w < best {
            best = w;
            lo = i;
        }
    }
    Ok((sorted[lo], sorted[lo + k - 1]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    pub acceptance_rate: f64,
    /// Effective sample size of the first coordinate.
    pub ess: f64,
    /// Asymptotic variance of the first coordinate.
    pub asymptotic_variance: f64,
    pub kept: usize,
}

impl DiagnosticsReport {
    /// Moments after discarding the first `burn_in` fraction of the trace.
    /// Degenerate first coordinates (e.g. a frozen chain) report zero ESS and
    /// an infinite asymptotic variance; fewer than [`MIN_SERIES_LEN`] kept
    /// states report NaN for both.
    pub fn from_trace(trace: &Trace, burn_in: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&burn_in) {
            return Err(Error::Parameter(format!("burn-in fraction must lie in [0,1), got {burn_in}")));
        }
        let start = (trace.len() as f64 * burn_in).floor() as usize;
        let kept = &trace.states[start..];
        if kept.is_empty() {
            return Err(Error::Parameter("no states left after burn-in".into()));
        }
        let dim = trace.dim();
        let n = kept.len() as f64;
        let mean: Vec<f64> = (0..dim)
            .map(|i| kept.iter().map(|s| s[i]).sum::<f64>() / n)
            .collect();
        let variance: Vec<f64> = (0..dim)
            .map(|i| kept.iter().map(|s| (s[i] - mean[i]).powi(2)).sum::<f64>() / n)
            .collect();
        let first: Vec<f64> = kept.iter().map(|s| s[0]).collect();
        let (ess, asymptotic_variance) = if first.len() < MIN_SERIES_LEN {
            (f64::NAN, f64::NAN)
        } else {
            match asymptotic_variance(&first) {
                Ok(a) => (n * variance[0] / a, a),
                Err(Error::DegenerateSeries(_)) => (0.0, f64::INFINITY),
                Err(e) => return Err(e),
            }
        };
        Ok(Self {
            mean,
            variance,
            acceptance_rate: trace.acceptance_rate(),
            ess,
            asymptotic_variance,
            kept: kept.len(),
        })
    }

    /// Flat `key=value` lines.
    pub fn to_key_value(&self) -> String {
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(";");
        let mut s = String::new();
        let _ = writeln!(s, "diag_kept={}", self.kept);
        let _ = writeln!(s, "diag_mean={}", join(&self.mean));
        let _ = writeln!(s, "diag_variance={}", join(&self.variance));
        let _ = writeln!(s, "diag_acceptance_rate={}", self.acceptance_rate);
        let _ = writeln!(s, "diag_ess={}", self.ess);
        let _ = writeln!(s, "diag_asymptotic_variance={}", self.asymptotic_variance);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RandomSource, SeededStream};

    fn iid(n: usize, seed: u64) -> Vec<f64> {
        let mut r = SeededStream::new(seed, 0);
        (0..n).map(|_| r.standard_normal()).collect()
    }

    fn ar1(n: usize, rho: f64, seed: u64) -> Vec<f64> {
        let mut r = SeededStream::new(seed, 0);
        let innov_sd = (1.0 - rho * rho).sqrt();
        let mut x = r.standard_normal();
        (0..n)
            .map(|_| {
                let out = x;
                x = rho * x + innov_sd * r.standard_normal();
                out
            })
            .collect()
    }

    #[test]
    fn lag_zero_is_biased_variance() {
        let xs = [1.0, 2.0, 4.0, 7.0];
        let m = 3.5;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / 4.0;
        assert_eq!(autocovariance(&xs, 0).unwrap(), v);
        assert!(matches!(autocovariance(&xs, 4), Err(Error::Parameter(_))));
    }

    #[test]
    fn iid_lag_one_near_zero() {
        let xs = iid(100_000, 1);
        let g1 = autocovariance(&xs, 1).unwrap();
        // sd of the lag-1 autocovariance of unit-variance white noise is 1/sqrt(n)
        assert!(g1.abs() < 3.0 / (100_000f64).sqrt(), "{g1}");
    }

    #[test]
    fn ar1_autocovariances() {
        let rho: f64 = 0.8;
        let xs = ar1(100_000, rho, 2);
        for k in [1usize, 2, 5] {
            let g = autocovariance(&xs, k).unwrap();
            // var of the estimate for AR(1): ~ (1/n) sum_j (rho^{|j|}... ) bounded by
            // (1 + rho^2)/(1 - rho^2)/n for the leading term
            let sd = ((1.0 + rho * rho) / (1.0 - rho * rho) / 100_000.0).sqrt() * 2.0;
            assert!((g - rho.powi(k as i32)).abs() < 3.0 * sd, "lag {k}: {g}");
        }
    }

    #[test]
    fn iid_asymptotic_variance_close_to_variance() {
        for (n, band) in [(10_000usize, 0.2), (100_000, 0.1)] {
            let xs = iid(n, 3);
            let ratio = asymptotic_variance(&xs).unwrap() / autocovariance(&xs, 0).unwrap();
            assert!((ratio - 1.0).abs() < band, "n={n} ratio={ratio}");
            let ess = ess_chain(&xs).unwrap();
            assert!((ess / n as f64 - 1.0).abs() < 0.2);
            assert!(ess <= 1.5 * n as f64);
        }
    }

    #[test]
    fn antithetic_series_below_variance() {
        let xs = ar1(100_000, -0.5, 4);
        let a = asymptotic_variance(&xs).unwrap();
        let v = autocovariance(&xs, 0).unwrap();
        assert!(a < v);
        assert!(ess_chain(&xs).unwrap() > xs.len() as f64);
    }

    #[test]
    fn degenerate_and_short_series() {
        assert!(matches!(asymptotic_variance(&[2.0; 500]), Err(Error::DegenerateSeries(_))));
        assert!(matches!(ess_chain(&[2.0; 500]), Err(Error::DegenerateSeries(_))));
        assert!(matches!(asymptotic_variance(&[1.0; 10]), Err(Error::Parameter(_))));
    }

    #[test]
    fn ks_on_exact_quantiles() {
        let n = 200;
        // quantiles of U(0,1) at (i-0.5)/n
        let q: Vec<f64> = (1..=n).map(|i| (i as f64 - 0.5) / n as f64).collect();
        let d = ks_statistic(&q, |x| x.clamp(0.0, 1.0));
        assert!(d <= 0.5 / n as f64 + 1e-15);
    }

    #[test]
    fn two_sample_ks_basic() {
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
        assert!((ks_two_sample(&[1.0, 2.0, 3.0, 4.0], &[2.5]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hpd_examples() {
        let xs: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert_eq!(hpd_interval(&xs, 0.999).unwrap(), (0.0, 99.0));
        assert!(hpd_interval(&xs, 1.0).is_err());
        assert!(hpd_interval(&xs, 0.0).is_err());
        let mut r = SeededStream::new(6, 0);
        let ex: Vec<f64> = (0..10_000).map(|_| r.exponential(1.0).unwrap()).collect();
        let (lo, hi) = hpd_interval(&ex, 0.9).unwrap();
        assert!(lo < 0.01, "{lo}");
        assert!((hi - 10f64.ln()).abs() < 0.1, "{hi}");
    }

    #[test]
    fn report_from_trace() {
        let xs = ar1(2000, 0.5, 9);
        let trace = Trace {
            states: xs.iter().map(|x| vec![*x, 2.0 * x]).collect(),
            accepted: vec![true; 2000],
            divergent: None,
            provenance: None,
            kernel_label: "ar1".into(),
        };
        let rep = DiagnosticsReport::from_trace(&trace, DEFAULT_BURN_IN).unwrap();
        assert_eq!(rep.kept, 1800);
        assert!((rep.mean[1] - 2.0 * rep.mean[0]).abs() < 1e-12);
        assert!(rep.ess > 0.0 && rep.ess < 1800.0);
        assert_eq!(rep.acceptance_rate, 1.0);
        let kv = rep.to_key_value();
        assert!(kv.contains("diag_ess="));
        assert!(kv.lines().all(|l| l.contains('=')));
    }
}
