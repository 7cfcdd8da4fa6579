use fracdiff::sampling::{sample_symmetric_stable, RngStream};
use fracdiff::stats::{
    empirical_cf, empirical_laplace, empirical_variance, histogram_density, ks_distance, variance_doubling_test, Moments,
};
use proptest::prelude::*;
use rayon::prelude::*;

#[test]
fn gaussian_stable_variance_within_error_bars() {
    let mut rng = RngStream::new(1, 0);
    let xs: Vec<f64> = (0..100_000).map(|_| sample_symmetric_stable(2.0, &mut rng)).collect();
    let r = empirical_variance(&xs).unwrap();
    assert!((r.variance - 2.0).abs() < 3.0 * r.std_error_of_variance, "{r:?}");
}

#[test]
fn ks_of_own_cdf_and_uniform_histogram() {
    let mut rng = RngStream::new(2, 0);
    let us: Vec<f64> = (0..1_000_000).map(|_| rng.uniform_open()).collect();
    let ks = ks_distance(&us[..10_000], |u| u.clamp(0.0, 1.0));
    assert!(ks < 1.63 / 100.0, "{ks}");
    let d = histogram_density(&us, 0.0, 1.0, 10).unwrap();
    assert!(d.iter().all(|v| (v - 1.0).abs() < 0.02), "{d:?}");
}

#[test]
fn transform_estimators_are_bounded() {
    let mut rng = RngStream::new(3, 0);
    let xs: Vec<f64> = (0..50_000).map(|_| sample_symmetric_stable(1.2, &mut rng)).collect();
    for &k in &[0.1, 1.0, 10.0] {
        let c = empirical_cf(&xs, k);
        assert!(c.norm() <= 1.0 + 1e-12);
        assert!(c.im.abs() < 3.0 / (xs.len() as f64).sqrt());
    }
    let pos: Vec<f64> = xs.iter().map(|x| x.abs()).collect();
    assert!(empirical_laplace(&pos, 1e6) < 1e-3);
}

#[test]
fn doubling_test_separates_finite_and_infinite_variance() {
    let mut rng = RngStream::new(4, 0);
    let gauss: Vec<f64> = (0..40_000).map(|_| sample_symmetric_stable(2.0, &mut rng)).collect();
    let r = variance_doubling_test(&gauss, &[10_000, 20_000, 40_000]).unwrap();
    assert!(!r.nonconvergent, "{r:?}");
    let mut rng = RngStream::new(4, 1);
    let cauchy: Vec<f64> = (0..40_000).map(|_| sample_symmetric_stable(1.0, &mut rng)).collect();
    let r = variance_doubling_test(&cauchy, &[10_000, 20_000, 40_000]).unwrap();
    assert!(r.nonconvergent, "{r:?}");
}

#[test]
fn parallel_merge_equals_single_pass() {
    let mut rng = RngStream::new(5, 0);
    let xs: Vec<f64> = (0..200_000).map(|_| 1e3 + sample_symmetric_stable(1.9, &mut rng)).collect();
    let serial = Moments::from_slice(&xs);
    let parallel = xs
        .par_chunks(1777)
        .map(Moments::from_slice)
        .reduce(Moments::new, |a, b| a.merge(&b));
    assert_eq!(serial.count(), parallel.count());
    assert!((serial.mean() - parallel.mean()).abs() < 1e-10);
    assert!((serial.variance() / parallel.variance() - 1.0).abs() < 1e-10);
    assert!((serial.excess_kurtosis() - parallel.excess_kurtosis()).abs() < 1e-8);
}

proptest! {
    #[test]
    fn estimators_are_permutation_invariant(mut xs in prop::collection::vec(-1e3f64..1e3, 2..200), seed in any::<u64>()) {
        let before = (empirical_variance(&xs).unwrap(), empirical_cf(&xs, 0.7), ks_distance(&xs, |x| 0.5 + x.atan() / std::f64::consts::PI));
        let mut rng = RngStream::new(seed, 0);
        for i in (1..xs.len()).rev() {
            let j = (rng.uniform_open() * (i + 1) as f64) as usize;
            xs.swap(i, j.min(i));
        }
        let after = (empirical_variance(&xs).unwrap(), empirical_cf(&xs, 0.7), ks_distance(&xs, |x| 0.5 + x.atan() / std::f64::consts::PI));
        prop_assert!((before.0.variance - after.0.variance).abs() <= 1e-9 * before.0.variance.max(1.0));
        prop_assert!((before.1 - after.1).norm() <= 1e-12);
        prop_assert_eq!(before.2, after.2);
    }
}
