use plrg_core::dist::{classify_regime, critical_scale, sample_iid, Regime, ScaleKind, ScalingSequence};
use plrg_core::stats::binomial_clique_probabilities;
use plrg_core::TailModel;

/// Largest gap between the empirical cdf of `x` and `cdf`.
fn ks_statistic(mut x: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = cdf(v);
            f64::max(f - i as f64 / n, (i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[test]
fn inverse_transform_passes_kolmogorov_smirnov() {
    let n = 100_000;
    let bound = 1.63 / (n as f64).sqrt();
    for alpha in [0.5, 1.5, 2.0, 4.0] {
        let m = TailModel::pareto(alpha).unwrap();
        let s = sample_iid(&m, n, 11).unwrap();
        let d = ks_statistic(s.values().to_vec(), |x| 1.0 - x.powf(-alpha));
        assert!(d < bound, "alpha {alpha}: D = {d}");
    }
    let g = TailModel::generic(1.5, |x: f64| (1.0 + x).ln() / (2.0f64).ln()).unwrap();
    let s = sample_iid(&g, n, 12).unwrap();
    let d = ks_statistic(s.values().to_vec(), |x| g.cdf(x));
    assert!(d < bound, "generic: D = {d}");
}

#[test]
fn critical_scale_solves_its_equation() {
    for alpha in [1.0, 2.0, 3.0] {
        let m = TailModel::pareto(alpha).unwrap();
        for n in [100u64, 10_000, 1_000_000] {
            let a = critical_scale(&m, n, ScaleKind::Single).unwrap();
            assert!((n as f64 * m.tail(a.sqrt()) - 1.0).abs() < 1e-8);
        }
    }
}

#[test]
fn log_factor_decides_the_boundary_case() {
    let m = TailModel::pareto(2.0).unwrap();
    let with_log = classify_regime(&m, &ScalingSequence::log_power(2.0, 2.0)).unwrap();
    let without = classify_regime(&m, &ScalingSequence::critical(2.0)).unwrap();
    assert_eq!(with_log, Regime::SuperCritical);
    assert_eq!(without, Regime::Critical);
}

#[test]
fn binomial_clique_probabilities_are_exact() {
    for (n, p) in [(10u64, 0.1f64), (10_000, 1e-6), (3, 0.5)] {
        let (any, one) = binomial_clique_probabilities(n, p);
        let want_one = n as f64 * p * (1.0 - p).powi(n as i32 - 1);
        let want_any = 1.0 - (1.0 - p).powi(n as i32);
        assert!((one - want_one).abs() <= 1e-12 * want_one);
        assert!((any - want_any).abs() <= 1e-9 * want_any);
    }
}
