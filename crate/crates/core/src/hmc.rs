//! Hamiltonian Monte Carlo with a diagonal mass matrix.
//!
//! The integrator is the symmetric leapfrog: a half momentum step, a full
//! position step and a second half momentum step, which makes it time
//! reversible and volume preserving.

use crate::error::{Error, Result};
use crate::mcmc::{ChainState, Kernel, Transition};
use crate::rng::RandomSource;
use crate::targets::Target;

/// Energy error beyond which a trajectory is flagged divergent and rejected.
pub const DIVERGENCE_THRESHOLD: f64 = 1000.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub position: Vec<f64>,
    pub momentum: Vec<f64>,
}

impl PhaseState {
    pub fn new(position: Vec<f64>, momentum: Vec<f64>) -> Result<Self> {
        if position.len() != momentum.len() {
            return Err(Error::Shape {
                expected: position.len(),
                got: momentum.len(),
            });
        }
        Ok(Self { position, momentum })
    }

    /// Same position, momentum negated.
    pub fn flipped(&self) -> Self {
        Self {
            position: self.position.clone(),
            momentum: self.momentum.iter().map(|v| -v).collect(),
        }
    }
}

/// Diagonal of the mass matrix `M`; kinetic energy is `v' M^-1 v / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MassSpec {
    diag: Vec<f64>,
}

impl MassSpec {
    pub fn identity(dim: usize) -> Self {
        Self {
            diag: vec![1.0; dim],
        }
    }

    pub fn diagonal(diag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || diag.iter().any(|m| !(*m > 0.0) || !m.is_finite()) {
            return Err(Error::Parameter(format!("mass entries must be > 0: {diag:?}")));
        }
        Ok(Self { diag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.diag
    }

    pub fn kinetic(&self, v: &[f64]) -> f64 {
        0.5 * v.iter().zip(&self.diag).map(|(v, m)| v * v / m).sum::<f64>()
    }

    fn check(&self, dim: usize) -> Result<()> {
        if self.diag.len() != dim {
            return Err(Error::Shape {
                expected: dim,
                got: self.diag.len(),
            });
        }
        Ok(())
    }
}

/// `H(x, v) = -log_unnorm(x) + v' M^-1 v / 2`.
pub fn hamiltonian(state: &PhaseState, target: &Target, mass: &MassSpec) -> Result<f64> {
    mass.check(target.dim())?;
    if state.momentum.len() != target.dim() {
        return Err(Error::Shape {
            expected: target.dim(),
            got: state.momentum.len(),
        });
    }
    let lp = target.log_unnorm(&state.position)?;
    if lp == f64::NEG_INFINITY {
        return Err(Error::Domain(format!("{:?}", state.position)));
    }
    Ok(-lp + mass.kinetic(&state.momentum))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeapfrogOutput {
    pub state: PhaseState,
    /// The trajectory left the support or produced non-finite values; `state`
    /// is the last point reached.
    pub divergent: bool,
}

/// `steps` leapfrog steps of size `eps`.
pub fn leapfrog(
    start: &PhaseState,
    eps: f64,
    steps: usize,
    target: &Target,
    mass: &MassSpec,
) -> Result<LeapfrogOutput> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Parameter(format!("step size must be > 0, got {eps}")));
    }
    if steps == 0 {
        return Err(Error::Parameter("leapfrog needs at least one step".into()));
    }
    if !target.has_gradient() {
        return Err(Error::Capability("leapfrog requires a gradient"));
    }
    mass.check(target.dim())?;
    if start.position.len() != target.dim() || start.momentum.len() != target.dim() {
        return Err(Error::Shape {
            expected: target.dim(),
            got: start.position.len(),
        });
    }

    let half = 0.5 * eps;
    let inv_mass: Vec<f64> = mass.diag.iter().map(|m| 1.0 / m).collect();
    let mut x = start.position.clone();
    let mut v = start.momentum.clone();
    let mut grad = target.grad_unchecked(&x).expect("gradient checked above");
    for _ in 0..steps {
        for (vi, gi) in v.iter_mut().zip(&grad) {
            *vi += half * gi;
        }
        for ((xi, vi), w) in x.iter_mut().zip(&v).zip(&inv_mass) {
            *xi += eps * w * vi;
        }
        if !target.in_support(&x) || x.iter().any(|xi| !xi.is_finite()) {
            return Ok(LeapfrogOutput {
                state: PhaseState {
                    position: x,
                    momentum: v,
                },
                divergent: true,
            });
        }
        grad = target.grad_unchecked(&x).expect("gradient checked above");
        for (vi, gi) in v.iter_mut().zip(&grad) {
            *vi += half * gi;
        }
    }
    let divergent = v.iter().any(|vi| !vi.is_finite());
    Ok(LeapfrogOutput {
        state: PhaseState {
            position: x,
            momentum: v,
        },
        divergent,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HmcOutcome {
    pub position: Vec<f64>,
    pub accepted: bool,
    pub divergent: bool,
    /// `H(end) - H(start)`; infinite for trajectories that left the support.
    pub delta_h: f64,
}

/// One HMC transition: refresh `v ~ N(0, M)`, integrate, then accept with
/// probability `min{1, exp(H(x, v) - H(x*, -v*))}`.
pub fn hmc_step(
    x: &[f64],
    eps: f64,
    steps: usize,
    target: &Target,
    mass: &MassSpec,
    rng: &mut dyn RandomSource,
) -> Result<HmcOutcome> {
    let state = ChainState::new(target, x.to_vec()).map_err(|e| match e {
        Error::Initialization(p) => Error::Domain(format!("{p:?}")),
        other => other,
    })?;
    hmc_transition(&state, eps, steps, target, mass, rng).map(|(s, out)| HmcOutcome {
        position: s.position,
        ..out
    })
}

fn hmc_transition(
    state: &ChainState,
    eps: f64,
    steps: usize,
    target: &Target,
    mass: &MassSpec,
    rng: &mut dyn RandomSource,
) -> Result<(ChainState, HmcOutcome)> {
    mass.check(target.dim())?;
    let momentum: Vec<f64> = mass
        .diag
        .iter()
        .map(|m| m.sqrt() * rng.standard_normal())
        .collect();
    let h0 = -state.log_density + mass.kinetic(&momentum);
    let start = PhaseState {
        position: state.position.clone(),
        momentum,
    };
    let traj = leapfrog(&start, eps, steps, target, mass)?;
    let u = rng.uniform01();

    let reject = |divergent: bool, delta_h: f64| {
        (
            state.clone(),
            HmcOutcome {
                position: Vec::new(),
                accepted: false,
                divergent,
                delta_h,
            },
        )
    };
    if traj.divergent {
        return Ok(reject(true, f64::INFINITY));
    }
    let end = traj.state.flipped();
    let lp_end = target.eval(&end.position);
    let h1 = -lp_end + mass.kinetic(&end.momentum);
    let delta_h = h1 - h0;
    if !delta_h.is_finite() || delta_h.abs() > DIVERGENCE_THRESHOLD {
        return Ok(reject(true, delta_h));
    }
    if u < (-delta_h).exp() {
        Ok((
            ChainState {
                position: end.position,
                log_density: lp_end,
            },
            HmcOutcome {
                position: Vec::new(),
                accepted: true,
                divergent: false,
                delta_h,
            },
        ))
    } else {
        Ok(reject(false, delta_h))
    }
}

#[derive(Debug, Clone)]
pub struct Hmc {
    pub target: Target,
    pub eps: f64,
    pub steps: usize,
    pub mass: MassSpec,
}

impl Hmc {
    pub fn new(target: Target, eps: f64, steps: usize) -> Self {
        let mass = MassSpec::identity(target.dim());
        Self {
            target,
            eps,
            steps,
            mass,
        }
    }
}

impl Kernel for Hmc {
    fn label(&self) -> String {
        format!("hmc(eps={},L={})", self.eps, self.steps)
    }

    fn target(&self) -> &Target {
        &self.target
    }

    fn step(&self, state: &ChainState, rng: &mut dyn RandomSource) -> Result<Transition> {
        let (state, out) = hmc_transition(state, self.eps, self.steps, &self.target, &self.mass, rng)?;
        Ok(Transition {
            state,
            accepted: out.accepted,
            divergent: out.divergent,
        })
    }

    fn tracks_divergence(&self) -> bool {
        true
    }
}
