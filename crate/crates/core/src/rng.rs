//! Deterministic, splittable random streams.
//!
//! A [`SeededStream`] wraps a ChaCha8 block generator. ChaCha is counter-based
//! and natively supports 2^64 independent streams per key, so the pair
//! `(seed, stream_id)` maps directly onto `(key, stream)` with no shared state
//! between streams. Replicate `i` of an experiment simply uses stream `i`.
//!
//! Variate generation is fixed and part of the reproducibility contract:
//!
//! * uniforms take the top 53 bits of a 64-bit word, so they lie in `[0, 1)`;
//! * normals use the Box–Muller pair transform, returning the cosine branch
//!   first and caching the sine branch for the next call;
//! * exponentials use inversion, `-ln(1 - u) / rate`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

/// Source of uniform and normal variates consumed by every sampler.
///
/// Besides [`SeededStream`], tests implement this trait with scripted values to
/// replay hand-worked examples draw by draw.
pub trait RandomSource {
    /// A uniform variate in `[0, 1)`.
    fn uniform01(&mut self) -> f64;

    /// A standard normal variate.
    fn standard_normal(&mut self) -> f64;

    fn normal(&mut self, mean: f64, sd: f64) -> Result<f64> {
        if !(sd > 0.0) || !sd.is_finite() {
            return Err(Error::Parameter(format!("normal sd must be > 0, got {sd}")));
        }
        Ok(mean + sd * self.standard_normal())
    }

    /// Exponential variate with density `rate * exp(-rate * x)`.
    fn exponential(&mut self, rate: f64) -> Result<f64> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::Parameter(format!("exponential rate must be > 0, got {rate}")));
        }
        Ok(-(1.0 - self.uniform01()).ln() / rate)
    }

    /// `(seed, stream_id)` when the source is a seeded stream.
    fn provenance(&self) -> Option<(u64, u64)> {
        None
    }
}

/// Laws that [`SeededStream::draw`] can sample directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec {
    Uniform01,
    Normal { mean: f64, sd: f64 },
    Exponential { rate: f64 },
}

#[derive(Debug, Clone)]
pub struct SeededStream {
    seed: u64,
    stream_id: u64,
    core: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl SeededStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut core = ChaCha8Rng::seed_from_u64(seed);
        core.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            core,
            spare_normal: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// A fresh stream under the same seed.
    pub fn sibling(&self, stream_id: u64) -> Self {
        Self::new(self.seed, stream_id)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.core.next_u64()
    }

    pub fn draw(&mut self, dist: DistributionSpec) -> Result<f64> {
        match dist {
            DistributionSpec::Uniform01 => Ok(self.uniform01()),
            DistributionSpec::Normal { mean, sd } => self.normal(mean, sd),
            DistributionSpec::Exponential { rate } => self.exponential(rate),
        }
    }
}

impl RandomSource for SeededStream {
    fn uniform01(&mut self) -> f64 {
        (self.core.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }

    fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        // 1 - u lies in (0, 1], keeping the logarithm finite.
        let u1 = 1.0 - self.uniform01();
        let u2 = self.uniform01();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare_normal = Some(radius * angle.sin());
        radius * angle.cos()
    }

    fn provenance(&self) -> Option<(u64, u64)> {
        Some((self.seed, self.stream_id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_key_same_sequence() {
        let mut a = SeededStream::new(42, 0);
        let mut b = SeededStream::new(42, 0);
        let xs: Vec<f64> = (0..100).map(|_| a.uniform01()).collect();
        let ys: Vec<f64> = (0..100).map(|_| b.uniform01()).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn distinct_streams_differ() {
        let mut a = SeededStream::new(42, 0);
        let mut b = SeededStream::new(42, 1);
        let xs: Vec<u64> = (0..100).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..100).map(|_| b.next_u64()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn first_uniform_in_range() {
        let u = SeededStream::new(7, 3).uniform01();
        assert!((0.0..1.0).contains(&u));
    }

    #[test]
    fn uniform_never_reaches_one() {
        assert!((u64::MAX >> 11) as f64 * TWO_POW_NEG_53 < 1.0);
        let mut s = SeededStream::new(1, 1);
        assert!((0..100_000).all(|_| {
            let u = s.uniform01();
            (0.0..1.0).contains(&u)
        }));
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut s = SeededStream::new(0, 0);
        assert!(matches!(
            s.draw(DistributionSpec::Normal { mean: 0.0, sd: 0.0 }),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            s.draw(DistributionSpec::Exponential { rate: -1.0 }),
            Err(Error::Parameter(_))
        ));
        assert!(s.normal(0.0, f64::NAN).is_err());
    }

    #[test]
    fn sibling_matches_fresh_stream() {
        let parent = SeededStream::new(9, 0);
        let mut a = parent.sibling(5);
        let mut b = SeededStream::new(9, 5);
        assert_eq!(a.next_u64(), b.next_u64());
        assert_eq!(a.stream_id(), 5);
        assert_eq!(a.seed(), 9);
    }
}
