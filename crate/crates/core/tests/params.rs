use fracdiff::params::{fl_green_function, fourier_green_time, riesz_feller_symbol, theoretical_variance};
use fracdiff::{validate_params, Error, Variance};
use proptest::prelude::*;

#[test]
fn documented_examples() {
    assert!(validate_params(2.0, 0.0, 1.0).is_ok());
    assert!(matches!(validate_params(1.5, 0.6, 0.9), Err(Error::Range { param: "theta", .. })));
    assert!(validate_params(0.5, 0.5, 0.5).is_ok());

    let p = validate_params(1.5, 0.5, 0.9).unwrap();
    let psi = riesz_feller_symbol(&p, 1.0);
    assert!((psi.re - 0.5f64.sqrt()).abs() < 1e-15 && (psi.im - 0.5f64.sqrt()).abs() < 1e-15);

    let q = validate_params(1.0, 0.0, 0.5).unwrap();
    assert!((fl_green_function(&q, 2.0, 1.0).re - 1.0 / 3.0).abs() < 1e-15);

    let g = validate_params(2.0, 0.0, 0.5).unwrap();
    let v = theoretical_variance(&g, 1.0).unwrap().finite().unwrap();
    assert!((v - 4.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
    assert_eq!(
        theoretical_variance(&validate_params(1.5, 0.0, 0.9).unwrap(), 5.0).unwrap(),
        Variance::Infinite
    );
    assert!((fourier_green_time(&g, 1.0, 1.0).unwrap() - 0.427_583_576_155_807).abs() < 1e-12);
}

proptest! {
    #[test]
    fn feller_region_symbols(alpha in 0.01f64..=2.0, frac in -1.0f64..=1.0, beta in 0.01f64..=1.0, kappa in -50.0f64..50.0) {
        let theta = frac * alpha.min(2.0 - alpha);
        let p = validate_params(alpha, theta, beta).unwrap();
        let a = riesz_feller_symbol(&p, kappa);
        let b = riesz_feller_symbol(&p, -kappa);
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1.0));
        prop_assert!(a.re >= -1e-12 * a.norm());
    }

    #[test]
    fn green_function_conserves_mass(alpha in 0.01f64..=2.0, beta in 0.01f64..=1.0, s in 1e-6f64..1e6) {
        let p = validate_params(alpha, 0.0, beta).unwrap();
        prop_assert_eq!(fl_green_function(&p, 0.0, s).re, 1.0 / s);
    }
}
