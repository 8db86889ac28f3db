use kicked_fhn::analysis::regime::rate_non_increasing;
use kicked_fhn::analysis::{classify_regime, filtering_report};
use kicked_fhn::singular::{fixed_point, FixedPointOptions};
use kicked_fhn::{simulate_from_rest, ModelParams, SimOptions};
use proptest::prelude::*;

#[test]
fn wave_delays_settle_to_a_node_independent_constant() {
    let p = ModelParams::with_alpha(50.0).n_cells(20).t_end(600.0);
    let out = simulate_from_rest(&p, &SimOptions::quiet()).unwrap();
    let times: Vec<Vec<f64>> = (0..20).map(|j| out.kicks.times(j)).collect();
    let pulses = times.iter().map(Vec::len).min().unwrap();
    assert!(pulses >= 10);
    let reference = times[1][pulses - 1] - times[0][pulses - 1];
    for n in 1..pulses {
        for j in 0..19 {
            let delay = times[j + 1][n] - times[j][n];
            assert!(
                (delay - reference).abs() < 1e-2,
                "pulse {n} node {j}: {delay} vs {reference}"
            );
            // every node is kicked once per forcing period
            assert!((times[j][n] - times[j][n - 1] - 50.0).abs() < 1e-2);
        }
    }
}

#[test]
fn depolarization_rate_does_not_grow_down_the_chain() {
    for (alpha, t_end) in [(8.41, 1000.0), (4.2, 600.0), (1.1, 400.0)] {
        let p = ModelParams::with_alpha(alpha).n_cells(4).t_end(t_end);
        let out = simulate_from_rest(&p, &SimOptions::quiet()).unwrap();
        let reports = filtering_report(&out, &p);
        assert!(rate_non_increasing(&reports), "alpha {alpha}: {reports:#?}");
    }
}

#[test]
fn raw_large_counts_are_not_monotone_at_alpha_4_2() {
    // Node 1 fires once per two kicks; node 2 fires three times per its
    // own four-kick period. Counting per period hides the rate drop.
    let p = ModelParams::with_alpha(4.2).n_cells(2).t_end(600.0);
    let out = simulate_from_rest(&p, &SimOptions::quiet()).unwrap();
    let r = filtering_report(&out, &p);
    assert_eq!((r[0].n_large(), r[1].n_large()), (Some(1), Some(3)));
}

#[test]
fn verdicts_survive_a_doubled_horizon() {
    for alpha in [7.0, 8.0, 8.3, 8.41, 9.0, 20.0] {
        let p = ModelParams::with_alpha(alpha).t_end(800.0);
        let a = classify_regime(&p).unwrap();
        let b = classify_regime(&p.clone().t_end(1600.0)).unwrap();
        assert_eq!(a.label, b.label, "alpha {alpha}");
        assert_eq!(a.signature, b.signature, "alpha {alpha}");
        let period = a.steady_period.unwrap();
        let k = period / alpha;
        assert!(
            (k - k.round()).abs() < 1e-9,
            "period {period} is not a multiple of alpha {alpha}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn kick_level_approaches_singular_fixed_point(alpha in 10u32..=20) {
        let alpha = alpha as f64;
        let v_star = fixed_point(&ModelParams::with_alpha(alpha), &FixedPointOptions::default()).unwrap().v_star;
        let errors: Vec<f64> = [0.1, 0.05, 0.01]
            .iter()
            .map(|&eps| {
                let p = ModelParams::with_alpha(alpha).epsilon(eps);
                let out = simulate_from_rest(&p, &SimOptions::quiet()).unwrap();
                (out.kicks.events(0).last().unwrap().pre.v - v_star).abs()
            })
            .collect();
        prop_assert!(errors[1] < errors[0] && errors[2] < errors[1], "{errors:?}");
    }

    #[test]
    fn downstream_kicks_follow_upstream(alpha_ms in 3000u32..12000, n in 2usize..5) {
        let p = ModelParams::with_alpha(alpha_ms as f64 / 1000.0).n_cells(n).t_end(150.0).t_transient(0.0);
        let out = simulate_from_rest(&p, &SimOptions::quiet()).unwrap();
        for j in 0..n - 1 {
            let (up, down) = (out.kicks.times(j), out.kicks.times(j + 1));
            prop_assert!(down.len() <= up.len());
            if let (Some(d), Some(u)) = (down.first(), up.first()) {
                prop_assert!(d > u);
            }
        }
    }
}
