use num_complex::Complex64;
use proptest::prelude::*;

use v2vlab::analytics::baseline::baseline_distribution;
use v2vlab::analytics::{
    analytic_delay, component_pmf_oracle, expected_component_size, expected_hops_over_road, expected_retransmitters,
    m1_closed, m1_series, pmf_from_transform, q_transform, ConnectivityParams, HopKernel,
};
use v2vlab::routing::DelayModel;
use v2vlab::Error;

const R: f64 = 200.0;

fn at(lp: f64) -> ConnectivityParams {
    ConnectivityParams::from_lambda_prime(lp, R).unwrap()
}

/// Direct O(k n^2) midpoint iteration of the hop-length chain in units of R.
fn reference_pmf(k_max: usize, lp: f64, n: usize) -> Vec<f64> {
    let h = 1.0 / n as f64;
    let u: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
    let entry = |v: f64| lp * (-lp * (1.0 - v)).exp();
    let mut pmf = vec![(-lp).exp()];
    // density of the first hop (nothing known ahead of the first vehicle)
    let mut f: Vec<f64> = u.iter().map(|&v| entry(v)).collect();
    while pmf.len() < k_max {
        pmf.push(f.iter().zip(&u).map(|(fx, &x)| fx * (-lp * x).exp() * h).sum());
        // the cutoff 1 - v_j falls on midpoint n-1-j, which gets half weight
        f = (0..n)
            .map(|j| {
                let cut = n - 1 - j;
                let reach: f64 = f[cut + 1..].iter().sum::<f64>() + 0.5 * f[cut];
                entry(u[j]) * reach * h
            })
            .collect();
    }
    pmf
}

#[test]
fn oracle_agrees_with_direct_quadrature() {
    for lp in [0.8, 2.0, 3.0, 4.0] {
        let lib = component_pmf_oracle(6, &at(lp), 2000).unwrap();
        let reference = reference_pmf(6, lp, 2000);
        for (k, (a, b)) in lib.pmf.iter().zip(&reference).enumerate() {
            assert!((a - b).abs() < 1e-5, "lambda'={lp} k={}: {a} vs {b}", k + 1);
        }
    }
}

#[test]
fn oracle_matches_transform_for_small_k() {
    for lp in [1.5, 2.0, 3.0, 4.0] {
        let o = component_pmf_oracle(6, &at(lp), 2000).unwrap();
        let t = pmf_from_transform(6, &at(lp)).unwrap();
        for (a, b) in o.pmf.iter().zip(&t.pmf) {
            assert!((a - b).abs() <= 1e-4, "lambda'={lp}: {a} vs {b}");
        }
    }
}

#[test]
fn oracle_is_stable_under_grid_refinement() {
    for lp in [1.0, 2.0, 4.0] {
        let a = component_pmf_oracle(3, &at(lp), 2000).unwrap();
        let b = component_pmf_oracle(3, &at(lp), 4000).unwrap();
        for (x, y) in a.pmf.iter().zip(&b.pmf) {
            assert!((x - y).abs() < 1e-6);
        }
    }
}

#[test]
fn m1_at_one_equals_its_series() {
    for lp in [2.0, 3.0] {
        let p = at(lp);
        let series: f64 = m1_series(600, &p, 2000).unwrap().iter().sum();
        let closed = m1_closed(Complex64::new(1.0, 0.0), &p).unwrap();
        // m1_series includes the constant term 1
        assert!(
            (closed.re + 1.0 - series).abs() < 1e-5,
            "lambda'={lp}: {} vs {series}",
            closed.re + 1.0
        );
    }
}

#[test]
fn baseline_agrees_only_at_one() {
    for lp in [2.0, 3.0] {
        let p = at(lp);
        let base = baseline_distribution(5, &p);
        let markov = component_pmf_oracle(5, &p, 2000).unwrap();
        assert_eq!(base.pmf[0], markov.pmf[0]);
        let gaps: Vec<String> = (1..5)
            .map(|k| format!("k={}: {:+.4}", k + 1, markov.pmf[k] - base.pmf[k]))
            .collect();
        println!(
            "lambda'={lp} Markov minus independent-gap baseline: {}",
            gaps.join(", ")
        );
        assert!((markov.pmf[1] - base.pmf[1]).abs() > 1e-3);
    }
}

#[test]
fn closed_forms_reject_sparse_traffic() {
    let p = at(1.2);
    assert!(matches!(expected_retransmitters(&p), Err(Error::Validity { .. })));
    assert!(matches!(
        analytic_delay(&p, 1e4, &DelayModel::default()),
        Err(Error::Validity { .. })
    ));
    assert!(component_pmf_oracle(10, &p, 2000).is_ok());
    assert!(expected_component_size(&p).is_ok());
}

fn dense() -> impl Strategy<Value = f64> {
    (4f64.ln() + 0.06)..6.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernel_cdf_is_a_defective_distribution(lp in 0.1..8.0f64, a in 0.0..1.0f64, b in 0.0..1.0f64, xp in 0.0..1.0f64) {
        let k = HopKernel::new(at(lp));
        let (x1, x2) = if a <= b { (a * R, b * R) } else { (b * R, a * R) };
        let xp = xp * R;
        let (c1, c2) = (k.cdf(x1, xp).unwrap(), k.cdf(x2, xp).unwrap());
        prop_assert!((0.0..=1.0).contains(&c1) && c1 <= c2);
        let total = k.cdf(R, xp).unwrap() + k.termination(xp).unwrap();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert_eq!(k.cdf((R - xp) * (1.0 - 1e-9) - 1e-9, xp).unwrap(), 0.0);
    }

    #[test]
    fn oracle_is_a_distribution(lp in 0.2..5.0f64) {
        let d = component_pmf_oracle(32, &at(lp), 2000).unwrap();
        prop_assert!(d.pmf.iter().all(|p| (0.0..=1.0).contains(p)));
        prop_assert!((d.pmf.iter().sum::<f64>() + d.tail_mass - 1.0).abs() < 1e-9);
        prop_assert!(d.tail_mass >= -1e-9);
    }

    #[test]
    fn transform_is_real_on_the_real_axis(lp in dense(), x in 0.05..1.0f64) {
        let p = at(lp);
        let q = q_transform(Complex64::new(x, 0.0), &p).unwrap();
        prop_assert!(q.im.abs() < 1e-12);
        prop_assert!((q_transform(Complex64::new(1.0, 0.0), &p).unwrap() - 1.0).norm() < 1e-6);
    }

    #[test]
    fn components_hold_at_least_one_retransmitter(lp in dense()) {
        prop_assert!(expected_retransmitters(&at(lp)).unwrap().value >= 1.0);
    }

    #[test]
    fn hops_are_linear_in_road_length(lp in dense(), l in 100.0..50_000.0f64, k in 0.1..10.0f64) {
        let p = at(lp);
        let a = expected_hops_over_road(&p, l).unwrap();
        let b = expected_hops_over_road(&p, k * l).unwrap();
        prop_assert!((b / (k * a) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delay_increases_with_density(lp in dense(), step in 0.05..1.0f64) {
        let d = DelayModel::default();
        let lo = analytic_delay(&at(lp), 10_000.0, &d).unwrap();
        let hi = analytic_delay(&at(lp + step), 10_000.0, &d).unwrap();
        prop_assert!(hi > lo, "{lo} then {hi}");
    }

    #[test]
    fn closed_forms_fail_below_threshold(lp in 0.05..(4f64.ln() + 0.049)) {
        let p = at(lp);
        prop_assert!(
            matches!(q_transform(Complex64::new(0.5, 0.0), &p), Err(Error::Validity { .. })),
            "expected a validity error"
        );
        prop_assert!(
            matches!(expected_hops_over_road(&p, 1e4), Err(Error::Validity { .. })),
            "expected a validity error"
        );
    }
}
