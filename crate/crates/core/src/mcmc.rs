//! Metropolis–Hastings kernels, the scalar slice sampler, Metropolis-within-Gibbs
//! sweeps and the chain runner.
//!
//! All kernels accept with the strict comparison `u < alpha`. A rejected step
//! returns a clone of the incoming state, so a trace repeats the previous
//! position bit for bit. Each state caches its log-density and a step evaluates
//! the target only at the proposed point.

use std::io::Write;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::targets::{std_normal_cdf, Law, Target};

/// Stepping-out width for slice sampling when no closed-form level set exists.
pub const SLICE_STEP_WIDTH: f64 = 1.0;
/// Expansions allowed on each side before bracketing is declared failed.
pub const SLICE_MAX_EXPANSIONS: usize = 64;
const SLICE_MAX_SHRINKS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    pub position: Vec<f64>,
    pub log_density: f64,
}

impl ChainState {
    /// Evaluates the target at `position`; fails outside the support.
    pub fn new(target: &Target, position: Vec<f64>) -> Result<Self> {
        let log_density = target.log_unnorm(&position)?;
        if log_density == f64::NEG_INFINITY {
            return Err(Error::Initialization(position));
        }
        Ok(Self {
            position,
            log_density,
        })
    }
}

#[derive(Debug, Clone)]
pub enum Proposal {
    /// Gaussian random walk; one scale per coordinate, or a single shared one.
    RandomWalk { scales: Vec<f64> },
    /// Draws from a fixed law regardless of the current state.
    Independent(Law),
    /// `N+(current, sigma^2)`: a normal centred at the current value truncated to `(0, inf)`.
    TruncatedNormalPositive { sigma: f64 },
}

impl Proposal {
    pub fn random_walk(scale: f64) -> Self {
        Proposal::RandomWalk {
            scales: vec![scale],
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        match self {
            Proposal::RandomWalk { scales } => {
                if scales.len() != 1 && scales.len() != dim {
                    return Err(Error::Shape {
                        expected: dim,
                        got: scales.len(),
                    });
                }
                if scales.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
                    return Err(Error::Parameter(format!("random-walk scales must be > 0: {scales:?}")));
                }
            }
            Proposal::Independent(law) => {
                if law.dim() != dim {
                    return Err(Error::Shape {
                        expected: dim,
                        got: law.dim(),
                    });
                }
            }
            Proposal::TruncatedNormalPositive { sigma } => {
                if !(*sigma > 0.0) || !sigma.is_finite() {
                    return Err(Error::Parameter(format!("truncated-normal sigma must be > 0, got {sigma}")));
                }
            }
        }
        Ok(())
    }

    /// Draws `x'` given `x` and returns it with `log q(x|x') - log q(x'|x)`.
    pub fn propose(&self, x: &[f64], rng: &mut dyn RandomSource) -> Result<(Vec<f64>, f64)> {
        self.validate(x.len())?;
        match self {
            Proposal::RandomWalk { scales } => {
                let y = x
                    .iter()
                    .enumerate()
                    .map(|(i, xi)| xi + scales[i.min(scales.len() - 1)] * rng.standard_normal())
                    .collect();
                Ok((y, 0.0))
            }
            Proposal::Independent(law) => {
                let y = law.sample(rng);
                let correction = law.log_density(x) - law.log_density(&y);
                Ok((y, correction))
            }
            Proposal::TruncatedNormalPositive { sigma } => {
                let mut y = Vec::with_capacity(x.len());
                let mut correction = 0.0;
                for &xi in x {
                    if !(xi > 0.0) {
                        return Err(Error::Domain(format!(
                            "truncated-normal proposal needs a positive current value, got {xi}"
                        )));
                    }
                    let yi = loop {
                        let v = xi + sigma * rng.standard_normal();
                        if v > 0.0 {
                            break v;
                        }
                    };
                    correction += trunc_normal_log_density(xi, yi, *sigma)
                        - trunc_normal_log_density(yi, xi, *sigma);
                    y.push(yi);
                }
                Ok((y, correction))
            }
        }
    }
}

/// `log q(to | from)` for `q = N+(from, sigma^2)`.
fn trunc_normal_log_density(to: f64, from: f64, sigma: f64) -> f64 {
    let z = (to - from) / sigma;
    -0.5 * z * z - sigma.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln() - std_normal_cdf(from / sigma).ln()
}

#[inline]
fn accept(u: f64, log_alpha: f64) -> bool {
    u < log_alpha.exp()
}

/// One Metropolis–Hastings transition.
pub fn mh_step(
    state: &ChainState,
    target: &Target,
    proposal: &Proposal,
    rng: &mut dyn RandomSource,
) -> Result<(ChainState, bool)> {
    let (y, correction) = proposal.propose(&state.position, rng)?;
    let u = rng.uniform01();
    let ly = target.log_unnorm(&y)?;
    if ly > f64::NEG_INFINITY && accept(u, ly - state.log_density + correction) {
        Ok((
            ChainState {
                position: y,
                log_density: ly,
            },
            true,
        ))
    } else {
        Ok((state.clone(), false))
    }
}

/// Independent Metropolis–Hastings acceptance probability
/// `min(1, [f_Y(x')/f_V(x')] [f_V(x)/f_Y(x)])` for target `f_Y` and proposal `f_V`.
pub fn indep_mh_alpha(
    x_curr: f64,
    x_prop: f64,
    target_log: impl Fn(f64) -> f64,
    proposal_log: impl Fn(f64) -> f64,
) -> f64 {
    indep_mh_ratio(x_curr, x_prop, target_log, proposal_log).min(1.0)
}

/// The uncapped ratio behind [`indep_mh_alpha`].
pub fn indep_mh_ratio(
    x_curr: f64,
    x_prop: f64,
    target_log: impl Fn(f64) -> f64,
    proposal_log: impl Fn(f64) -> f64,
) -> f64 {
    let w_prop = (target_log(x_prop) - proposal_log(x_prop)).exp();
    let w_curr = (target_log(x_curr) - proposal_log(x_curr)).exp();
    w_prop / w_curr
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedAlpha {
    /// Target ratio times the normal-density ratio times the truncation ratio.
    pub alpha_full: f64,
    /// Target ratio times the truncation ratio only.
    pub alpha_simplified: f64,
}

/// Acceptance probability for a move `mu_prev -> mu_prop` proposed from
/// `N+(mu_prev, sigma^2)`, computed with and without the symmetric density factor.
pub fn truncnorm_mh_alpha(
    mu_prev: f64,
    mu_prop: f64,
    sigma: f64,
    target: &Target,
) -> Result<TruncatedAlpha> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Parameter(format!("sigma must be > 0, got {sigma}")));
    }
    if !(mu_prop > 0.0) || !(mu_prev > 0.0) {
        return Err(Error::Domain(format!(
            "truncated-normal moves need positive values, got {mu_prev} -> {mu_prop}"
        )));
    }
    // log space: the normal densities underflow long before their ratio does
    let log_target = target.log_unnorm(&[mu_prop])? - target.log_unnorm(&[mu_prev])?;
    let log_phi = |z: f64| -0.5 * z * z;
    let log_density = log_phi((mu_prev - mu_prop) / sigma) - log_phi((mu_prop - mu_prev) / sigma);
    let log_truncation = std_normal_cdf(mu_prev / sigma).ln() - std_normal_cdf(mu_prop / sigma).ln();
    Ok(TruncatedAlpha {
        alpha_full: (log_target + log_density + log_truncation).exp().min(1.0),
        alpha_simplified: (log_target + log_truncation).exp().min(1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceMove {
    pub x: f64,
    /// `ln(eps1) + log_unnorm(x_prev)`: the log height of the horizontal slice.
    pub log_level: f64,
}

/// One slice-sampler step on a scalar target.
pub fn slice_step(x_prev: f64, target: &Target, rng: &mut dyn RandomSource) -> Result<f64> {
    slice_move(x_prev, target, rng).map(|m| m.x)
}

/// Draws `eps1 ~ U(0,1)` and then `x` uniformly on `{x : p(x) >= eps1 p(x_prev)}`.
///
/// Targets with a closed-form level set are sampled exactly; otherwise the
/// slice is bracketed by stepping out (width [`SLICE_STEP_WIDTH`], at most
/// [`SLICE_MAX_EXPANSIONS`] per side) and sampled by shrinkage.
pub fn slice_move(x_prev: f64, target: &Target, rng: &mut dyn RandomSource) -> Result<SliceMove> {
    let lp_prev = target.log_unnorm(&[x_prev])?;
    if lp_prev == f64::NEG_INFINITY {
        return Err(Error::Domain(format!("slice step from {x_prev} outside the support")));
    }
    let eps1 = loop {
        let u = rng.uniform01();
        if u > 0.0 {
            break u;
        }
    };
    let log_level = lp_prev + eps1.ln();
    let x = match target.level_set(log_level) {
        Some(intervals) => uniform_on_intervals(&intervals, rng)?,
        None => step_out_and_shrink(x_prev, log_level, target, rng)?,
    };
    Ok(SliceMove { x, log_level })
}

fn uniform_on_intervals(intervals: &[(f64, f64)], rng: &mut dyn RandomSource) -> Result<f64> {
    let total: f64 = intervals.iter().map(|(a, b)| b - a).sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::Numeric(format!("degenerate level set {intervals:?}")));
    }
    let mut t = rng.uniform01() * total;
    for &(a, b) in intervals {
        let len = b - a;
        if t < len {
            return Ok(a + t);
        }
        t -= len;
    }
    let (a, b) = intervals[intervals.len() - 1];
    Ok(a + (b - a) * 0.5)
}

fn step_out_and_shrink(
    x0: f64,
    log_level: f64,
    target: &Target,
    rng: &mut dyn RandomSource,
) -> Result<f64> {
    let inside = |x: f64| target.eval(&[x]) >= log_level;
    let mut left = x0 - SLICE_STEP_WIDTH * rng.uniform01();
    let mut right = left + SLICE_STEP_WIDTH;
    let mut expansions = 0;
    while inside(left) {
        if expansions == SLICE_MAX_EXPANSIONS {
            return Err(Error::Numeric(format!("slice bracketing failed left of {x0}")));
        }
        left -= SLICE_STEP_WIDTH;
        expansions += 1;
    }
    expansions = 0;
    while inside(right) {
        if expansions == SLICE_MAX_EXPANSIONS {
            return Err(Error::Numeric(format!("slice bracketing failed right of {x0}")));
        }
        right += SLICE_STEP_WIDTH;
        expansions += 1;
    }
    for _ in 0..SLICE_MAX_SHRINKS {
        let x = left + (right - left) * rng.uniform01();
        if inside(x) {
            return Ok(x);
        }
        if x < x0 {
            left = x;
        } else {
            right = x;
        }
    }
    Err(Error::Numeric(format!("slice shrinkage did not terminate around {x0}")))
}

pub type ConditionalSamplerFn =
    Arc<dyn Fn(&[f64], usize, &mut dyn RandomSource) -> f64 + Send + Sync>;
pub type ConditionalDensityFn = Arc<dyn Fn(&[f64], usize, f64) -> f64 + Send + Sync>;

/// How a Metropolis-within-Gibbs sweep updates one coordinate.
#[derive(Clone)]
pub enum CoordinateUpdate {
    /// A one-dimensional proposal applied to that coordinate alone.
    Metropolis(Proposal),
    /// A proposal from the coordinate's full conditional. `sampler(x, i, rng)`
    /// draws a new `x[i]`; `log_density(x, i, v)` evaluates it at `v`. Both may
    /// only read the other coordinates of `x`.
    FullConditional {
        sampler: ConditionalSamplerFn,
        log_density: ConditionalDensityFn,
    },
}

impl std::fmt::Debug for CoordinateUpdate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoordinateUpdate::Metropolis(p) => f.debug_tuple("Metropolis").field(p).finish(),
            CoordinateUpdate::FullConditional { .. } => f.write_str("FullConditional"),
        }
    }
}

impl From<Proposal> for CoordinateUpdate {
    fn from(p: Proposal) -> Self {
        CoordinateUpdate::Metropolis(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub state: ChainState,
    /// One flag per coordinate, in update order.
    pub accepted: Vec<bool>,
}

/// One fixed-scan sweep updating coordinates `0..dim` in order, each by a
/// Metropolis–Hastings step against the joint target.
pub fn mwg_sweep(
    state: &ChainState,
    target: &Target,
    per_coord: &[CoordinateUpdate],
    rng: &mut dyn RandomSource,
) -> Result<SweepOutcome> {
    let dim = target.dim();
    if per_coord.len() != dim || state.position.len() != dim {
        return Err(Error::Shape {
            expected: dim,
            got: per_coord.len(),
        });
    }
    let mut current = state.clone();
    let mut accepted = Vec::with_capacity(dim);
    for (i, update) in per_coord.iter().enumerate() {
        let xi = current.position[i];
        let (yi, correction) = match update {
            CoordinateUpdate::Metropolis(p) => {
                let (y, c) = p.propose(&[xi], rng)?;
                (y[0], c)
            }
            CoordinateUpdate::FullConditional {
                sampler,
                log_density,
            } => {
                let yi = sampler(&current.position, i, rng);
                let c = log_density(&current.position, i, xi)
                    - log_density(&current.position, i, yi);
                (yi, c)
            }
        };
        let u = rng.uniform01();
        let mut candidate = current.position.clone();
        candidate[i] = yi;
        let ly = target.eval(&candidate);
        if ly > f64::NEG_INFINITY && accept(u, ly - current.log_density + correction) {
            current = ChainState {
                position: candidate,
                log_density: ly,
            };
            accepted.push(true);
        } else {
            accepted.push(false);
        }
    }
    Ok(SweepOutcome {
        state: current,
        accepted,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub state: ChainState,
    pub accepted: bool,
    pub divergent: bool,
}

/// A Markov transition on the target's space.
pub trait Kernel {
    fn label(&self) -> String;
    fn target(&self) -> &Target;
    fn step(&self, state: &ChainState, rng: &mut dyn RandomSource) -> Result<Transition>;

    /// Whether transitions may be flagged divergent (adds a trace column).
    fn tracks_divergence(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone)]
pub struct MetropolisHastings {
    pub target: Target,
    pub proposal: Proposal,
}

impl Kernel for MetropolisHastings {
    fn label(&self) -> String {
        match &self.proposal {
            Proposal::RandomWalk { scales } => format!("random_walk_mh(scales={scales:?})"),
            Proposal::Independent(law) => format!("independent_mh({})", law.label()),
            Proposal::TruncatedNormalPositive { sigma } => {
                format!("truncated_normal_mh(sigma={sigma})")
            }
        }
    }

    fn target(&self) -> &Target {
        &self.target
    }

    fn step(&self, state: &ChainState, rng: &mut dyn RandomSource) -> Result<Transition> {
        let (state, accepted) = mh_step(state, &self.target, &self.proposal, rng)?;
        Ok(Transition {
            state,
            accepted,
            divergent: false,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SliceSampler {
    pub target: Target,
}

impl Kernel for SliceSampler {
    fn label(&self) -> String {
        "slice".into()
    }

    fn target(&self) -> &Target {
        &self.target
    }

    fn step(&self, state: &ChainState, rng: &mut dyn RandomSource) -> Result<Transition> {
        let x = slice_step(state.position[0], &self.target, rng)?;
        let position = vec![x];
        let log_density = self.target.eval(&position);
        Ok(Transition {
            state: ChainState {
                position,
                log_density,
            },
            accepted: true,
            divergent: false,
        })
    }
}

/// A full Metropolis-within-Gibbs sweep as one transition. A sweep counts as
/// accepted when any coordinate moved.
#[derive(Debug, Clone)]
pub struct MetropolisWithinGibbs {
    pub target: Target,
    pub updates: Vec<CoordinateUpdate>,
}

impl Kernel for MetropolisWithinGibbs {
    fn label(&self) -> String {
        format!("metropolis_within_gibbs(dim={})", self.target.dim())
    }

    fn target(&self) -> &Target {
        &self.target
    }

    fn step(&self, state: &ChainState, rng: &mut dyn RandomSource) -> Result<Transition> {
        let out = mwg_sweep(state, &self.target, &self.updates, rng)?;
        Ok(Transition {
            accepted: out.accepted.iter().any(|a| *a),
            state: out.state,
            divergent: false,
        })
    }
}

/// An ordered chain `x_0, ..., x_N` with per-step flags. Index 0 is the
/// starting value, recorded as accepted.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub states: Vec<Vec<f64>>,
    pub accepted: Vec<bool>,
    pub divergent: Option<Vec<bool>>,
    pub provenance: Option<(u64, u64)>,
    pub kernel_label: String,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    /// Values of coordinate `i` along the chain.
    pub fn coordinate(&self, i: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[i]).collect()
    }

    /// Fraction of accepted transitions, excluding the starting value.
    pub fn acceptance_rate(&self) -> f64 {
        let n = self.accepted.len().saturating_sub(1);
        if n == 0 {
            return 0.0;
        }
        self.accepted[1..].iter().filter(|a| **a).count() as f64 / n as f64
    }

    pub fn divergence_count(&self) -> usize {
        self.divergent
            .as_ref()
            .map_or(0, |d| d.iter().filter(|x| **x).count())
    }

    /// `step,accepted,x1..xd` (plus `divergent` when tracked), one row per state.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let dim = self.dim();
        let mut header = vec!["step".to_string(), "accepted".to_string()];
        header.extend((1..=dim).map(|i| format!("x{i}")));
        if self.divergent.is_some() {
            header.push("divergent".into());
        }
        w.write_record(&header)?;
        for (t, s) in self.states.iter().enumerate() {
            let mut row = vec![t.to_string(), u8::from(self.accepted[t]).to_string()];
            row.extend(s.iter().map(|v| v.to_string()));
            if let Some(d) = &self.divergent {
                row.push(u8::from(d[t]).to_string());
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs `n` transitions of `kernel` from `x0`.
pub fn run_chain(
    kernel: &dyn Kernel,
    x0: Vec<f64>,
    n: usize,
    rng: &mut dyn RandomSource,
) -> Result<Trace> {
    let mut state = ChainState::new(kernel.target(), x0)?;
    let tracks = kernel.tracks_divergence();
    let mut states = Vec::with_capacity(n + 1);
    let mut accepted = Vec::with_capacity(n + 1);
    let mut divergent = Vec::with_capacity(if tracks { n + 1 } else { 0 });
    states.push(state.position.clone());
    accepted.push(true);
    if tracks {
        divergent.push(false);
    }
    for _ in 0..n {
        let tr = kernel.step(&state, rng)?;
        states.push(tr.state.position.clone());
        accepted.push(tr.accepted);
        if tracks {
            divergent.push(tr.divergent);
        }
        state = tr.state;
    }
    Ok(Trace {
        states,
        accepted,
        divergent: tracks.then_some(divergent),
        provenance: rng.provenance(),
        kernel_label: kernel.label(),
    })
}
