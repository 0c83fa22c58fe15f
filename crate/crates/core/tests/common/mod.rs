//! Oracles shared by the integration tests. They rely on statrs and plain
//! quadrature rather than on anything inside the crate.

#![allow(dead_code)]

use mcforge::RandomSource;
use statrs::distribution::{Beta, ContinuousCDF, Normal, StudentsT};

pub fn normal_cdf(mean: f64, sd: f64) -> impl Fn(f64) -> f64 {
    let d = Normal::new(mean, sd).unwrap();
    move |x| d.cdf(x)
}

pub fn beta_cdf(a: f64, b: f64) -> impl Fn(f64) -> f64 {
    let d = Beta::new(a, b).unwrap();
    move |x| d.cdf(x.clamp(0.0, 1.0))
}

pub fn student_cdf(nu: f64, loc: f64) -> impl Fn(f64) -> f64 {
    let d = StudentsT::new(loc, 1.0, nu).unwrap();
    move |x| d.cdf(x)
}

/// CDF of N(mu, 1) restricted to (lo, hi).
pub fn truncated_normal_cdf(mu: f64, lo: f64, hi: f64) -> impl Fn(f64) -> f64 {
    let d = Normal::new(mu, 1.0).unwrap();
    let (a, b) = (d.cdf(lo), d.cdf(hi));
    move |x| ((d.cdf(x.clamp(lo, hi)) - a) / (b - a)).clamp(0.0, 1.0)
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Normalized CDF of an unnormalized density on `(a, b)`, tabulated by Simpson.
pub fn quadrature_cdf(density: impl Fn(f64) -> f64, a: f64, b: f64, grid: usize) -> impl Fn(f64) -> f64 {
    let h = (b - a) / grid as f64;
    let mut cum = vec![0.0; grid + 1];
    for i in 0..grid {
        let lo = a + i as f64 * h;
        cum[i + 1] = cum[i] + simpson(&density, lo, lo + h, 8);
    }
    let total = cum[grid];
    move |x| {
        if x <= a {
            return 0.0;
        }
        if x >= b {
            return 1.0;
        }
        let t = (x - a) / h;
        let i = (t.floor() as usize).min(grid - 1);
        let frac = t - i as f64;
        (cum[i] + frac * (cum[i + 1] - cum[i])) / total
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

/// Replays fixed normals and uniforms; panics when a list runs out.
pub struct Scripted {
    pub normals: Vec<f64>,
    pub uniforms: Vec<f64>,
}

impl Scripted {
    pub fn new(normals: &[f64], uniforms: &[f64]) -> Self {
        Self {
            normals: normals.iter().rev().copied().collect(),
            uniforms: uniforms.iter().rev().copied().collect(),
        }
    }
}

impl RandomSource for Scripted {
    fn uniform01(&mut self) -> f64 {
        self.uniforms.pop().expect("scripted uniforms exhausted")
    }

    fn standard_normal(&mut self) -> f64 {
        self.normals.pop().expect("scripted normals exhausted")
    }
}

/// Stationary AR(1) with unit marginal variance.
pub fn ar1(n: usize, rho: f64, rng: &mut dyn RandomSource) -> Vec<f64> {
    let sd = (1.0 - rho * rho).sqrt();
    let mut x = rng.standard_normal();
    (0..n)
        .map(|_| {
            let out = x;
            x = rho * x + sd * rng.standard_normal();
            out
        })
        .collect()
}
