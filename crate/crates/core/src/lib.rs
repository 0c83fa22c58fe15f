//! Bayesian computation toolkit: exact and importance-based Monte Carlo,
//! Metropolis–Hastings kernels, slice sampling, Hamiltonian Monte Carlo,
//! likelihood-free (ABC) inference and chain diagnostics.
//!
//! Every sampler draws its randomness from a [`rng::RandomSource`], normally a
//! [`rng::SeededStream`] keyed by `(seed, stream_id)`, so any run is
//! reproducible bit for bit.

pub mod abc;
pub mod classic_mc;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod hmc;
pub mod mcmc;
pub mod rng;
pub mod targets;

pub use error::{Error, Result};
pub use rng::{RandomSource, SeededStream};
pub use targets::{Law, Target};
