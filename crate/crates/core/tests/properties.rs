mod common;

use mcforge::abc::{self, median_mad, select_tolerance, AbcConfig, Tolerance};
use mcforge::classic_mc::{importance_estimate, Normalization};
use mcforge::diagnostics::hpd_interval;
use mcforge::hmc::{hamiltonian, leapfrog, MassSpec, PhaseState};
use mcforge::mcmc::{mh_step, run_chain, ChainState, MetropolisHastings, Proposal};
use mcforge::targets::{self, Law};
use mcforge::SeededStream;
use proptest::prelude::*;

use common::Scripted;

fn finite(range: f64) -> impl Strategy<Value = f64> {
    -range..range
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rejected_move_repeats_previous_state_bitwise(x in finite(5.0), z in finite(3.0)) {
        let t = targets::std_normal();
        let state = ChainState::new(&t, vec![x]).unwrap();
        // u just below one rejects every move that lowers the density
        let mut rng = Scripted::new(&[z], &[1.0 - 1e-16]);
        let (next, accepted) = mh_step(&state, &t, &Proposal::random_walk(1.0), &mut rng).unwrap();
        let y = x + z;
        if !accepted {
            prop_assert_eq!(next.position[0].to_bits(), x.to_bits());
            prop_assert_eq!(next.log_density.to_bits(), state.log_density.to_bits());
        } else {
            prop_assert!(y.abs() <= x.abs() + 1e-12);
        }
    }

    #[test]
    fn hamiltonian_is_even_in_momentum(x in finite(4.0), y in finite(4.0), v0 in finite(4.0), v1 in finite(4.0)) {
        let t = targets::builtin("artificial18", &[]).unwrap();
        let mut pos = vec![0.1; 18];
        pos[0] = x;
        pos[5] = y;
        let mut mom = vec![0.3; 18];
        mom[0] = v0;
        mom[17] = v1;
        let s = PhaseState::new(pos, mom).unwrap();
        let mass = MassSpec::identity(18);
        prop_assert_eq!(hamiltonian(&s, &t, &mass).unwrap(), hamiltonian(&s.flipped(), &t, &mass).unwrap());
    }

    #[test]
    fn leapfrog_is_reversible(x in finite(3.0), v in finite(3.0), eps in 0.01f64..0.5, steps in 1usize..40) {
        let t = targets::std_normal();
        let mass = MassSpec::identity(1);
        let s = PhaseState::new(vec![x], vec![v]).unwrap();
        let fwd = leapfrog(&s, eps, steps, &t, &mass).unwrap();
        let back = leapfrog(&fwd.state.flipped(), eps, steps, &t, &mass).unwrap().state.flipped();
        prop_assert!((back.position[0] - x).abs() < 1e-10);
        prop_assert!((back.momentum[0] - v).abs() < 1e-10);
    }

    #[test]
    fn tolerance_is_monotone_and_nests_acceptances(
        ds in prop::collection::vec(0.0f64..100.0, 1..300),
        q1 in 0.0f64..1.0,
        q2 in 0.0f64..1.0,
    ) {
        let (lo, hi) = if q1 <= q2 { (q1, q2) } else { (q2, q1) };
        let e1 = select_tolerance(&ds, lo).unwrap();
        let e2 = select_tolerance(&ds, hi).unwrap();
        prop_assert!(e1 <= e2);
        for d in &ds {
            if *d <= e1 {
                prop_assert!(*d <= e2);
            }
        }
        prop_assert!(ds.iter().filter(|d| **d <= e1).count() >= 1);
    }

    #[test]
    fn hpd_window_is_minimal(xs in prop::collection::vec(finite(50.0), 1..200), level in 0.05f64..0.99) {
        let (lo, hi) = hpd_interval(&xs, level).unwrap();
        let mut s = xs.clone();
        s.sort_by(f64::total_cmp);
        let n = s.len();
        let k = ((level * n as f64 - 1e-9).ceil() as usize).clamp(1, n);
        let covered = s.iter().filter(|x| **x >= lo && **x <= hi).count();
        prop_assert!(covered >= k);
        let best = (0..=n - k).map(|i| s[i + k - 1] - s[i]).fold(f64::INFINITY, f64::min);
        prop_assert_eq!(hi - lo, best);
    }

    #[test]
    fn self_normalized_estimate_ignores_target_constant(c in -500.0f64..500.0, seed in 0u64..1000) {
        let t = targets::student_t(5.0, 1.0).unwrap();
        let q = Law::normal(0.0, 2.0).unwrap();
        let h = |x: &[f64]| x[0];
        let a = importance_estimate(h, &q, &t, Normalization::UpToConstant, 500, &mut SeededStream::new(seed, 0)).unwrap();
        let b = importance_estimate(h, &q, &t.shifted(c), Normalization::UpToConstant, 500, &mut SeededStream::new(seed, 0))
            .unwrap();
        let scale = a.self_normalized.abs().max(1.0);
        prop_assert!((a.self_normalized - b.self_normalized).abs() <= 1e-12 * scale);
        prop_assert!((a.ess - b.ess).abs() <= 1e-9 * a.ess);
    }

    #[test]
    fn median_shifts_and_mad_stays(xs in prop::collection::vec(finite(100.0), 1..100), c in finite(100.0)) {
        let (m, mad) = median_mad(&xs).unwrap();
        let shifted: Vec<f64> = xs.iter().map(|x| x + c).collect();
        let (m2, mad2) = median_mad(&shifted).unwrap();
        prop_assert!((m2 - m - c).abs() < 1e-9);
        prop_assert!((mad2 - mad).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn same_seed_same_chain(seed in any::<u64>(), stream in 0u64..1000) {
        let k = MetropolisHastings { target: targets::std_normal(), proposal: Proposal::random_walk(1.0) };
        let a = run_chain(&k, vec![0.0], 200, &mut SeededStream::new(seed, stream)).unwrap();
        let b = run_chain(&k, vec![0.0], 200, &mut SeededStream::new(seed, stream)).unwrap();
        prop_assert_eq!(a.states, b.states);
    }

    #[test]
    fn same_seed_same_abc_result(seed in any::<u64>()) {
        let model = abc::bernoulli_toy(5);
        let cfg = AbcConfig::new(abc::sum_summary, Tolerance::Quantile(0.1)).unwrap();
        let x_obs = [1.0, 0.0, 0.0, 1.0, 1.0];
        let a = abc::abc_reject(&model, &x_obs, &cfg, 500, &mut SeededStream::new(seed, 0)).unwrap();
        let b = abc::abc_reject(&model, &x_obs, &cfg, 500, &mut SeededStream::new(seed, 0)).unwrap();
        prop_assert_eq!(a.accepted_thetas, b.accepted_thetas);
        prop_assert_eq!(a.distances, b.distances);
    }
}
