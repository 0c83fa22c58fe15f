//! Target densities known up to a normalizing constant, the reference laws
//! used as proposals and envelopes, and the catalog of built-in targets.
//!
//! Support is encoded only through the log-density: a point is in the support
//! iff `log_unnorm` is not `-inf`. Samplers rely on this to reject impossible
//! proposals without any geometric knowledge of the support.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;


use crate::error::{Error, Result};
use crate::rng::RandomSource;

pub type LogDensityFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
/// Maps a log-level `l` to the intervals making up `{x : log_unnorm(x) >= l}`.
pub type LevelSetFn = Arc<dyn Fn(f64) -> Vec<(f64, f64)> + Send + Sync>;
pub type SamplerFn = Arc<dyn Fn(&mut dyn RandomSource) -> Vec<f64> + Send + Sync>;

/// Names accepted by [`builtin`], in catalog order.
pub const CATALOG: &[&str] = &[
    "beta_unnorm",
    "std_normal",
    "normal",
    "exponential",
    "student_t",
    "trunc_normal_target",
    "log_bump",
    "artificial18",
];

pub const ARTIFICIAL_DIM: usize = 18;
pub const ARTIFICIAL_DEFAULT_OBS: f64 = 0.5;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

pub fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// An unnormalized log-density with optional gradient and, for scalar
/// targets, an optional closed-form level-set map used by the slice sampler.
#[derive(Clone)]
pub struct Target {
    dim: usize,
    label: String,
    log_unnorm: LogDensityFn,
    gradient: Option<GradientFn>,
    level_set: Option<LevelSetFn>,
}

impl fmt::Debug for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Target")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .field("gradient", &self.gradient.is_some())
            .field("level_set", &self.level_set.is_some())
            .finish()
    }
}

impl Target {
    pub fn new(
        dim: usize,
        label: impl Into<String>,
        log_unnorm: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        assert!(dim > 0, "target dimension must be positive");
        Self {
            dim,
            label: label.into(),
            log_unnorm: Arc::new(log_unnorm),
            gradient: None,
            level_set: None,
        }
    }

    pub fn with_gradient(
        mut self,
        gradient: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    pub fn with_level_set(
        mut self,
        level_set: impl Fn(f64) -> Vec<(f64, f64)> + Send + Sync + 'static,
    ) -> Self {
        assert_eq!(self.dim, 1, "level sets are only defined for scalar targets");
        self.level_set = Some(Arc::new(level_set));
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Descriptive support label, e.g. `"(0,1)"`.
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn has_level_set(&self) -> bool {
        self.level_set.is_some()
    }

    fn check_shape(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Shape {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn log_unnorm(&self, x: &[f64]) -> Result<f64> {
        self.check_shape(x)?;
        Ok(self.eval(x))
    }

    /// Log-density without the shape check; callers guarantee `x.len() == dim`.
    #[inline]
    pub(crate) fn eval(&self, x: &[f64]) -> f64 {
        let v = (self.log_unnorm)(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    }

    pub fn in_support(&self, x: &[f64]) -> bool {
        x.len() == self.dim && self.eval(x) > f64::NEG_INFINITY
    }

    pub fn grad_log_unnorm(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_shape(x)?;
        let gradient = self
            .gradient
            .as_ref()
            .ok_or(Error::Capability("target has no gradient"))?;
        if self.eval(x) == f64::NEG_INFINITY {
            return Err(Error::Domain(format!("{x:?} for target {}", self.label)));
        }
        Ok(gradient(x))
    }

    pub(crate) fn grad_unchecked(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.gradient.as_ref().map(|g| g(x))
    }

    /// Intervals of `{x : log_unnorm(x) >= log_level}` when known in closed form.
    pub fn level_set(&self, log_level: f64) -> Option<Vec<(f64, f64)>> {
        self.level_set.as_ref().map(|ls| ls(log_level))
    }

    /// The same target with `c` added to its log-density.
    pub fn shifted(&self, c: f64) -> Self {
        let inner = self.log_unnorm.clone();
        let level_set = self.level_set.clone().map(|ls| -> LevelSetFn {
            Arc::new(move |l: f64| ls(l - c))
        });
        Self {
            dim: self.dim,
            label: self.label.clone(),
            log_unnorm: Arc::new(move |x: &[f64]| inner(x) + c),
            gradient: self.gradient.clone(),
            level_set,
        }
    }
}

/// A normalized law that can be both sampled and evaluated: proposals,
/// accept–reject envelopes and importance distributions.
#[derive(Clone)]
pub struct Law {
    dim: usize,
    label: String,
    sampler: SamplerFn,
    log_density: LogDensityFn,
}

impl fmt::Debug for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Law")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .finish()
    }
}

impl Law {
    pub fn new(
        dim: usize,
        label: impl Into<String>,
        sampler: impl Fn(&mut dyn RandomSource) -> Vec<f64> + Send + Sync + 'static,
        log_density: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            label: label.into(),
            sampler: Arc::new(sampler),
            log_density: Arc::new(log_density),
        }
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Parameter(format!("uniform needs lo < hi, got ({lo}, {hi})")));
        }
        let width = hi - lo;
        let log_width = width.ln();
        Ok(Self::new(
            1,
            format!("uniform({lo},{hi})"),
            move |r| vec![lo + width * r.uniform01()],
            move |x| {
                if x[0] >= lo && x[0] < hi {
                    -log_width
                } else {
                    f64::NEG_INFINITY
                }
            },
        ))
    }

    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        check_positive("sd", sd)?;
        let log_sd = sd.ln();
        Ok(Self::new(
            1,
            format!("normal({mean},{sd})"),
            move |r| vec![mean + sd * r.standard_normal()],
            move |x| {
                let z = (x[0] - mean) / sd;
                -0.5 * z * z - log_sd - LN_SQRT_2PI
            },
        ))
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        check_positive("rate", rate)?;
        let log_rate = rate.ln();
        Ok(Self::new(
            1,
            format!("exponential({rate})"),
            move |r| vec![-(1.0 - r.uniform01()).ln() / rate],
            move |x| {
                if x[0] >= 0.0 {
                    log_rate - rate * x[0]
                } else {
                    f64::NEG_INFINITY
                }
            },
        ))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn sample(&self, rng: &mut dyn RandomSource) -> Vec<f64> {
        (self.sampler)(rng)
    }

    pub fn log_density(&self, x: &[f64]) -> f64 {
        (self.log_density)(x)
    }

    /// The law's normalized density viewed as a target.
    pub fn as_target(&self) -> Target {
        let f = self.log_density.clone();
        Target::new(self.dim, self.label.clone(), move |x| f(x))
    }
}

/// Prior and likelihood kept separate; the marginal likelihood is never formed.
#[derive(Clone)]
pub struct PosteriorSpec {
    pub dim: usize,
    pub log_prior: LogDensityFn,
    /// `log f(data | theta)`, called as `log_likelihood(theta, data)`.
    pub log_likelihood: Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>,
    pub data: Vec<f64>,
}

impl PosteriorSpec {
    pub fn new(
        dim: usize,
        log_prior: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        log_likelihood: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
        data: Vec<f64>,
    ) -> Self {
        Self {
            dim,
            log_prior: Arc::new(log_prior),
            log_likelihood: Arc::new(log_likelihood),
            data,
        }
    }
}

/// `log_unnorm(theta) = log_prior(theta) + log_likelihood(theta; data)`.
/// The likelihood is not evaluated where the prior vanishes.
pub fn make_posterior(spec: PosteriorSpec) -> Target {
    let PosteriorSpec {
        dim,
        log_prior,
        log_likelihood,
        data,
    } = spec;
    Target::new(dim, "posterior", move |theta| {
        let lp = log_prior(theta);
        if lp == f64::NEG_INFINITY {
            return lp;
        }
        lp + log_likelihood(theta, &data)
    })
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must be positive and finite, got {v}")))
    }
}

fn expect_params(name: &str, params: &[f64], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(Error::Parameter(format!(
            "{name} takes {n} parameter(s), got {}",
            params.len()
        )));
    }
    Ok(())
}

/// Look up a catalog target by name.
pub fn builtin(name: &str, params: &[f64]) -> Result<Target> {
    match name {
        "beta_unnorm" => {
            expect_params(name, params, 2)?;
            beta_unnorm(params[0], params[1])
        }
        "std_normal" => {
            expect_params(name, params, 0)?;
            Ok(std_normal())
        }
        "normal" => {
            expect_params(name, params, 2)?;
            normal(params[0], params[1])
        }
        "exponential" => {
            expect_params(name, params, 1)?;
            exponential(params[0])
        }
        "student_t" => {
            expect_params(name, params, 2)?;
            student_t(params[0], params[1])
        }
        "trunc_normal_target" => {
            expect_params(name, params, 0)?;
            Ok(trunc_normal_target())
        }
        "log_bump" => {
            expect_params(name, params, 0)?;
            Ok(log_bump())
        }
        "artificial18" => match params.len() {
            0 => artificial(vec![ARTIFICIAL_DEFAULT_OBS; ARTIFICIAL_DIM]),
            1 => artificial(vec![params[0]; ARTIFICIAL_DIM]),
            ARTIFICIAL_DIM => artificial(params.to_vec()),
            n => Err(Error::Parameter(format!(
                "artificial18 takes 0, 1 or {ARTIFICIAL_DIM} parameters, got {n}"
            ))),
        },
        _ => Err(Error::Lookup {
            name: name.to_string(),
            known: CATALOG.join(", "),
        }),
    }
}

/// `x^a (1-x)^b` on `(0,1)`, the unnormalized Beta(a+1, b+1) density.
pub fn beta_unnorm(a: f64, b: f64) -> Result<Target> {
    if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Parameter(format!("beta_unnorm needs a, b >= 0, got ({a}, {b})")));
    }
    let log_p = move |x: f64| {
        if x > 0.0 && x < 1.0 {
            a * x.ln() + b * (-x).ln_1p()
        } else {
            f64::NEG_INFINITY
        }
    };
    Ok(Target::new(1, "(0,1)", move |x| log_p(x[0]))
        .with_gradient(move |x| vec![a / x[0] - b / (1.0 - x[0])])
        .with_level_set(move |l| beta_level_set(a, b, l, log_p)))
}

fn beta_level_set(a: f64, b: f64, l: f64, log_p: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    if a == 0.0 && b == 0.0 {
        return if l <= 0.0 { vec![(0.0, 1.0)] } else { vec![] };
    }
    if b == 0.0 {
        return if l <= 0.0 { vec![((l / a).exp(), 1.0)] } else { vec![] };
    }
    if a == 0.0 {
        return if l <= 0.0 { vec![(0.0, -(l / b).exp_m1())] } else { vec![] };
    }
    // Unimodal with mode a/(a+b): invert each monotone piece by bisection.
    let mode = a / (a + b);
    if log_p(mode) < l {
        return vec![];
    }
    let lo = bisect(0.0, mode, |x| log_p(x) >= l);
    let hi = bisect(1.0, mode, |x| log_p(x) >= l);
    vec![(lo, hi)]
}

/// Boundary between `outside` (where `inside` fails) and `inner` (where it holds).
fn bisect(mut outside: f64, mut inner: f64, inside: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (outside + inner);
        if mid == outside || mid == inner {
            break;
        }
        if inside(mid) {
            inner = mid;
        } else {
            outside = mid;
        }
    }
    inner
}

pub fn std_normal() -> Target {
    normal(0.0, 1.0).expect("unit sd is valid")
}

/// Unnormalized `exp(-(x-mean)^2 / (2 sd^2))`.
pub fn normal(mean: f64, sd: f64) -> Result<Target> {
    check_positive("sd", sd)?;
    let prec = 1.0 / (sd * sd);
    Ok(Target::new(1, "R", move |x| {
        let d = x[0] - mean;
        -0.5 * d * d * prec
    })
    .with_gradient(move |x| vec![-(x[0] - mean) * prec])
    .with_level_set(move |l| {
        if l > 0.0 {
            return vec![];
        }
        let half = sd * (-2.0 * l).sqrt();
        vec![(mean - half, mean + half)]
    }))
}

/// Unnormalized `exp(-rate x)` on `[0, inf)`.
pub fn exponential(rate: f64) -> Result<Target> {
    check_positive("rate", rate)?;
    Ok(Target::new(1, "[0,inf)", move |x| {
        if x[0] >= 0.0 {
            -rate * x[0]
        } else {
            f64::NEG_INFINITY
        }
    })
    .with_gradient(move |_| vec![-rate])
    .with_level_set(move |l| if l > 0.0 { vec![] } else { vec![(0.0, -l / rate)] }))
}

/// Student's t with `nu` degrees of freedom centred at `shift`, unnormalized.
pub fn student_t(nu: f64, shift: f64) -> Result<Target> {
    check_positive("nu", nu)?;
    let power = -(nu + 1.0) / 2.0;
    Ok(Target::new(1, "R", move |x| {
        let d = x[0] - shift;
        power * (d * d / nu).ln_1p()
    })
    .with_gradient(move |x| {
        let d = x[0] - shift;
        vec![2.0 * power * d / (nu + d * d)]
    })
    .with_level_set(move |l| {
        if l > 0.0 {
            return vec![];
        }
        let half = (nu * (l / power).exp_m1()).sqrt();
        vec![(shift - half, shift + half)]
    }))
}

/// `1(0 < x < 1) * exp(-(x-4)^2 / 2)`: a normal N(4,1) truncated to the unit interval.
pub fn trunc_normal_target() -> Target {
    Target::new(1, "(0,1)", |x| {
        let x = x[0];
        if x > 0.0 && x < 1.0 {
            -0.5 * (x - 4.0) * (x - 4.0)
        } else {
            f64::NEG_INFINITY
        }
    })
    .with_gradient(|x| vec![4.0 - x[0]])
    .with_level_set(|l| {
        if l > 0.0 {
            return vec![];
        }
        let half = (-2.0 * l).sqrt();
        let (lo, hi) = ((4.0 - half).max(0.0), (4.0 + half).min(1.0));
        if lo < hi {
            vec![(lo, hi)]
        } else {
            vec![]
        }
    })
}

/// `exp{-(ln m - 1)^2} exp{-(ln m - 3)^4 / 4}` on `m > 0`.
pub fn log_bump() -> Target {
    Target::new(1, "(0,inf)", |x| {
        let m = x[0];
        if m > 0.0 {
            let l = m.ln();
            -(l - 1.0).powi(2) - (l - 3.0).powi(4) / 4.0
        } else {
            f64::NEG_INFINITY
        }
    })
    .with_gradient(|x| {
        let l = x[0].ln();
        vec![(-2.0 * (l - 1.0) - (l - 3.0).powi(3)) / x[0]]
    })
}

/// `exp{-|t-x|^2 - |t+x|^4 - |t-2x|^6}` for parameter `t` and observation `x`.
pub fn artificial(obs: Vec<f64>) -> Result<Target> {
    if obs.is_empty() || obs.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("observation vector must be finite and non-empty".into()));
    }
    let dim = obs.len();
    let obs = Arc::new(obs);
    let obs_g = obs.clone();
    let sq = |t: &[f64], x: &[f64], c: f64| -> f64 {
        t.iter().zip(x).map(|(ti, xi)| (ti - c * xi).powi(2)).sum()
    };
    Ok(Target::new(dim, format!("R^{dim}"), move |t| {
        let a = sq(t, &obs, 1.0);
        let b = sq(t, &obs, -1.0);
        let c = sq(t, &obs, 2.0);
        -a - b * b - c * c * c
    })
    .with_gradient(move |t| {
        let b = sq(t, &obs_g, -1.0);
        let c = sq(t, &obs_g, 2.0);
        t.iter()
            .zip(obs_g.iter())
            .map(|(ti, xi)| {
                -2.0 * (ti - xi) - 4.0 * b * (ti + xi) - 6.0 * c * c * (ti - 2.0 * xi)
            })
            .collect()
    }))
}
