use msm_core::stats::{ks_two_sample, ks_two_sample_p_value};
use msm_core::weights::{rescaled_quantities, sample_pareto, sample_weights, WeightSource};
use msm_core::RngStream;

#[test]
fn stable_sum_is_self_similar() {
    let n = 100_000;
    let root = RngStream::new(11);
    for (i, alpha) in [0.3, 0.5, 0.7].into_iter().enumerate() {
        let draw = |j: u64| {
            sample_weights(
                WeightSource::Stable,
                alpha,
                n,
                root.substream("stable", 3 * i as u64 + j),
            )
            .unwrap()
            .values()
            .to_vec()
        };
        let (x1, x2, x) = (draw(0), draw(1), draw(2));
        let scale = 2f64.powf(1.0 / alpha);
        let sum: Vec<f64> = x1.iter().zip(&x2).map(|(a, b)| (a + b) / scale).collect();
        let d = ks_two_sample(&sum, &x);
        let p = ks_two_sample_p_value(d, n, n);
        assert!(p > 0.01, "alpha {alpha}: D = {d}, p = {p}");
    }
}

#[test]
fn rescaled_total_weight_is_distributionally_stable() {
    let root = RngStream::new(12);
    let s_n = |n: usize| -> Vec<f64> {
        (0..200u64)
            .map(|r| {
                let w = sample_pareto(0.5, n, root.substream(&format!("s/n={n}"), r)).unwrap();
                rescaled_quantities(&w).s_n
            })
            .collect()
    };
    let (small, large) = (s_n(100), s_n(10_000));
    let d = ks_two_sample(&small, &large);
    let p = ks_two_sample_p_value(d, 200, 200);
    assert!(p > 0.01, "D = {d}, p = {p}");
}
