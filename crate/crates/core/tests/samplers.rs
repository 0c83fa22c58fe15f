mod common;

use mcforge::classic_mc::{accept_reject, importance_estimate, sir_resample, importance_sample, Normalization};
use mcforge::diagnostics::{asymptotic_variance, ess_chain, hpd_interval, ks_critical, ks_statistic};
use mcforge::hmc::{hamiltonian, hmc_step, Hmc, MassSpec, PhaseState};
use mcforge::mcmc::{run_chain, Kernel, MetropolisHastings, MetropolisWithinGibbs, Proposal, SliceSampler};
use mcforge::targets::{self, Law};
use mcforge::{RandomSource, SeededStream};

use common::*;

const ALPHA: f64 = 0.01;

fn chain_ks(xs: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    let n_eff = ess_chain(xs).unwrap().min(xs.len() as f64);
    (ks_statistic(xs, cdf), ks_critical(n_eff, ALPHA))
}

#[test]
fn slice_sampler_fits_normal_and_beta() {
    let mut rng = SeededStream::new(21, 0);
    let k = SliceSampler { target: targets::std_normal() };
    let xs = run_chain(&k, vec![0.0], 10_000, &mut rng).unwrap().coordinate(0);
    let (ks, crit) = chain_ks(&xs, normal_cdf(0.0, 1.0));
    assert!(ks < crit, "{ks} {crit}");

    let k = SliceSampler { target: targets::beta_unnorm(3.3, 4.4).unwrap() };
    let xs = run_chain(&k, vec![0.4], 10_000, &mut rng).unwrap().coordinate(0);
    let (ks, crit) = chain_ks(&xs, beta_cdf(4.3, 5.4));
    assert!(ks < crit, "{ks} {crit}");
}

#[test]
fn stationarity_from_exact_draws() {
    // start each kernel at an exact draw and check the marginal after 1e4 steps
    let mut rng = SeededStream::new(23, 0);
    let x0 = rng.standard_normal();
    let kernels: Vec<Box<dyn Kernel>> = vec![
        Box::new(MetropolisHastings { target: targets::std_normal(), proposal: Proposal::random_walk(2.0) }),
        Box::new(MetropolisHastings {
            target: targets::std_normal(),
            proposal: Proposal::Independent(Law::normal(0.5, 1.5).unwrap()),
        }),
        Box::new(SliceSampler { target: targets::std_normal() }),
        Box::new(Hmc::new(targets::std_normal(), 0.2, 8)),
    ];
    for k in &kernels {
        let xs = run_chain(k.as_ref(), vec![x0], 10_000, &mut rng).unwrap().coordinate(0);
        let (ks, crit) = chain_ks(&xs, normal_cdf(0.0, 1.0));
        assert!(ks < crit, "{}: {ks} {crit}", k.label());
    }

    let envelope = Law::uniform(0.0, 1.0).unwrap();
    let beta = targets::beta_unnorm(3.3, 4.4).unwrap();
    let start = accept_reject(&beta, &envelope, 1.0, 1000, &mut rng).unwrap().accepted[0].clone();
    let k = MetropolisHastings { target: beta, proposal: Proposal::random_walk(0.2) };
    let xs = run_chain(&k, start, 10_000, &mut rng).unwrap().coordinate(0);
    let (ks, crit) = chain_ks(&xs, beta_cdf(4.3, 5.4));
    assert!(ks < crit, "{ks} {crit}");
}

#[test]
fn truncated_proposal_chain_fits_log_bump() {
    let t = targets::log_bump();
    let k = MetropolisHastings { target: t.clone(), proposal: Proposal::TruncatedNormalPositive { sigma: 2.0 } };
    let xs = run_chain(&k, vec![7.0], 50_000, &mut SeededStream::new(24, 0)).unwrap().coordinate(0);
    let density = |m: f64| if m > 0.0 { t.log_unnorm(&[m]).unwrap().exp() } else { 0.0 };
    let cdf = quadrature_cdf(density, 1e-9, 2000.0, 200_000);
    let (ks, crit) = chain_ks(&xs[5000..], cdf);
    assert!(ks < crit, "{ks} {crit}");
}

#[test]
fn gibbs_with_metropolis_coordinates_fits_bivariate_normal() {
    let rho: f64 = 0.5;
    let det = 1.0 - rho * rho;
    let t = mcforge::Target::new(2, "R^2", move |x| {
        -(x[0] * x[0] - 2.0 * rho * x[0] * x[1] + x[1] * x[1]) / (2.0 * det)
    });
    let k = MetropolisWithinGibbs {
        target: t,
        updates: vec![Proposal::random_walk(1.5).into(), Proposal::random_walk(1.5).into()],
    };
    let tr = run_chain(&k, vec![0.0, 0.0], 20_000, &mut SeededStream::new(25, 0)).unwrap();
    for i in 0..2 {
        let (ks, crit) = chain_ks(&tr.coordinate(i), normal_cdf(0.0, 1.0));
        assert!(ks < crit, "coordinate {i}: {ks} {crit}");
    }
}

#[test]
fn hmc_normal_moments_within_three_mc_sigma() {
    let k = Hmc::new(targets::std_normal(), 0.1, 10);
    let xs = run_chain(&k, vec![0.0], 10_000, &mut SeededStream::new(26, 0)).unwrap().coordinate(0);
    let n = xs.len() as f64;
    let m = mean(&xs);
    let sd_mean = (asymptotic_variance(&xs).unwrap() / n).sqrt();
    assert!(m.abs() < 3.0 * sd_mean, "{m} {sd_mean}");
    let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let sd_var = (asymptotic_variance(&sq).unwrap() / n).sqrt();
    assert!((mean(&sq) - 1.0).abs() < 3.0 * sd_var, "{} {sd_var}", mean(&sq));
}

#[test]
fn hmc_artificial18_smoke() {
    let k = Hmc::new(targets::builtin("artificial18", &[]).unwrap(), 0.01, 20);
    let tr = run_chain(&k, vec![0.0; 18], 1000, &mut SeededStream::new(1, 1)).unwrap();
    assert_eq!(tr.divergence_count(), 0);
    let rate = tr.acceptance_rate();
    assert!(rate > 0.2 && rate < 1.0, "{rate}");
}

#[test]
fn hmc_small_step_preserves_energy() {
    let t = targets::std_normal();
    let mass = MassSpec::identity(1);
    let mut rng = SeededStream::new(27, 0);
    let mut accepted = 0;
    for _ in 0..1000 {
        let out = hmc_step(&[0.7], 1e-3, 1, &t, &mass, &mut rng).unwrap();
        assert!(out.delta_h.abs() < 1e-5);
        accepted += usize::from(out.accepted);
    }
    assert!(accepted >= 995);
    let s = PhaseState::new(vec![0.3], vec![1.7]).unwrap();
    assert_eq!(
        hamiltonian(&s, &t, &mass).unwrap(),
        hamiltonian(&s.flipped(), &t, &mass).unwrap()
    );
}

#[test]
fn sir_student_fails_to_reach_the_tail() {
    // the resampled law misses the right tail of t5 shifted to 3
    let t = targets::student_t(5.0, 3.0).unwrap();
    let q = Law::normal(0.0, 1.0).unwrap();
    let mut rng = SeededStream::new(28, 0);
    let ws = importance_sample(&q, &t, 100_000, &mut rng).unwrap();
    let xs: Vec<f64> = sir_resample(&ws, 100_000, &mut rng).unwrap().into_iter().map(|x| x[0]).collect();
    let q99 = {
        let mut s = xs.clone();
        s.sort_by(f64::total_cmp);
        s[(0.99 * s.len() as f64) as usize]
    };
    // the t5 99% quantile is 3 + 3.365
    assert!(q99 < 6.0, "{q99}");
    // resampled points are N(0,1) draws, so nothing lands beyond 5.5 where the
    // target still puts a few percent of its mass
    let max = xs.iter().copied().fold(f64::MIN, f64::max);
    assert!(max < 5.5, "{max}");
    assert!(1.0 - student_cdf(5.0, 3.0)(5.5) > 0.025);
}

#[test]
fn importance_raw_and_self_normalized_agree_for_light_tails() {
    let target = Law::exponential(1.0).unwrap().as_target();
    let q = Law::exponential(0.5).unwrap();
    let est = importance_estimate(|x| x[0], &q, &target, Normalization::Exact, 100_000, &mut SeededStream::new(29, 0))
        .unwrap();
    let raw = est.raw_estimate.unwrap();
    assert!((raw - 1.0).abs() < 0.02, "{raw}");
    assert!((est.self_normalized - 1.0).abs() < 0.02);
}

#[test]
fn accept_reject_beta_fit_and_rate() {
    let beta = targets::beta_unnorm(2.3, 3.4).unwrap();
    let env = Law::uniform(0.0, 1.0).unwrap();
    let rep = accept_reject(&beta, &env, 1.0, 1_000_000, &mut SeededStream::new(30, 0)).unwrap();
    let xs: Vec<f64> = rep.accepted.iter().map(|x| x[0]).collect();
    let ks = ks_statistic(&xs, beta_cdf(3.3, 4.4));
    assert!(ks < ks_critical(xs.len() as f64, ALPHA));
    // acceptance rate with M = 1 is B(3.3, 4.4)
    let b = simpson(|x: f64| x.powf(2.3) * (1.0 - x).powf(3.4), 0.0, 1.0, 20_000);
    let sd = (b * (1.0 - b) / 1e6).sqrt();
    assert!((rep.acceptance_rate - b).abs() < 4.0 * sd);
}

#[test]
fn hpd_of_normal_sample() {
    let mut rng = SeededStream::new(31, 0);
    let xs: Vec<f64> = (0..1_000_000).map(|_| rng.standard_normal()).collect();
    let (lo, hi) = hpd_interval(&xs, 0.95).unwrap();
    assert!((lo + 1.959964).abs() < 0.03, "{lo}");
    assert!((hi - 1.959964).abs() < 0.03, "{hi}");
}

#[test]
fn autocovariance_scaling_of_ar1_chain() {
    let xs = ar1(100_000, 0.5, &mut SeededStream::new(32, 0));
    let asv = asymptotic_variance(&xs).unwrap();
    assert!((asv / 3.0 - 1.0).abs() < 0.1, "{asv}");
}
