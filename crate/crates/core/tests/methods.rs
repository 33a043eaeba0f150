//! Cross-checks between the independent reflection routes through the public API.

use fracrefl_core::closedform::{reflection_airy, reflection_asymptotic, reflection_fresnel};
use fracrefl_core::propagate::{extract_r, integrate_cauchy, outgoing_initial_data, reflection_shooting, reflection_volterra};
use fracrefl_core::volterra::{admissible_x0, solve_series};
use fracrefl_core::{Complex64, Error, FractionalProfile, Method, SolveConfig};
use proptest::prelude::*;

fn profile(alpha: f64, theta: f64) -> FractionalProfile {
    FractionalProfile::new(alpha, theta).unwrap()
}

#[test]
fn volterra_and_shooting_agree_across_regimes() {
    let cfg = SolveConfig::default();
    for &(a, t) in &[(0.3, 0.02), (0.75, 0.4), (1.3, 0.15), (2.5, 0.05), (3.5, 0.3), (6.0, 0.1)] {
        let p = profile(a, t);
        let v = reflection_volterra(&p, &cfg).unwrap();
        let s = reflection_shooting(&p, &cfg).unwrap();
        assert_eq!(v.method, Method::Volterra);
        assert_eq!(s.method, Method::Shooting);
        let d = (v.r - s.r).norm();
        assert!(d < 1e-7 * v.r.norm().max(1e-6), "alpha={a} theta={t}: {d:e}");
        assert!(v.diagnostics.iterations.is_some());
        assert!(s.diagnostics.est_error.unwrap() < 1e-6);
    }
}

#[test]
fn airy_limit_from_both_routes() {
    let cfg = SolveConfig::default();
    for &t in &[0.7, 0.05, 0.002] {
        let exact = reflection_airy(t).unwrap();
        let p = profile(1.0, t);
        assert!((reflection_volterra(&p, &cfg).unwrap().r - exact).norm() < 1e-7 * exact.norm());
        assert!((reflection_shooting(&p, &cfg).unwrap().r - exact).norm() < 1e-7 * exact.norm());
    }
}

#[test]
fn leading_term_is_approached_for_small_theta() {
    // R / theta -> Gamma(alpha+1) / (2i)^{alpha+2}
    let cfg = SolveConfig::default();
    for &a in &[0.5, 1.0, 2.0] {
        let lead = reflection_asymptotic(a, 1.0).unwrap();
        let e1 = (reflection_volterra(&profile(a, 1e-2), &cfg).unwrap().r / 1e-2 - lead).norm();
        let e2 = (reflection_volterra(&profile(a, 1e-4), &cfg).unwrap().r / 1e-4 - lead).norm();
        assert!(e2 < 0.05 * e1 && e2 < 1e-3 * lead.norm(), "alpha={a}: {e1:e} {e2:e}");
    }
}

#[test]
fn manual_transfer_matches_the_solver() {
    let cfg = SolveConfig::default();
    let p = profile(1.7, 0.08);
    let sol = solve_series(&p, &cfg).unwrap();
    let start = outgoing_initial_data(&p, sol.x0, sol.r_x0).unwrap();
    let at_zero = integrate_cauchy(&p, start, 0.0, &cfg.ode).unwrap();
    let r = extract_r(&at_zero).unwrap();
    let v = reflection_volterra(&p, &cfg).unwrap().r;
    assert!((r - v).norm() < 1e-12, "{r} {v}");
    let s = reflection_shooting(&p, &cfg).unwrap().r;
    assert!((r - s).norm() < 1e-8 * s.norm(), "{r} {s}");
}

#[test]
fn sharp_interface_is_the_contrast_limit() {
    assert_eq!(reflection_fresnel(1.0, 0.3).unwrap(), Complex64::new(0.0, 0.0));
    let r = reflection_fresnel(1.5, 0.0).unwrap();
    assert!((r - 0.2).norm() < 1e-15);
}

#[test]
fn contraction_is_reported_when_no_split_point_works() {
    let cfg = SolveConfig { x0: 1e-3, x0_limit: 1e-3, ..SolveConfig::default() };
    let p = profile(0.5, 1e4);
    assert!(matches!(admissible_x0(&p, &cfg), Err(Error::ContractionViolated { .. })));
    assert!(matches!(solve_series(&p, &cfg), Err(Error::ContractionViolated { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn routes_agree_and_conserve_energy(a in 0.3f64..4.0, t in 1e-3f64..0.5) {
        let cfg = SolveConfig::default();
        let p = profile(a, t);
        let v = reflection_volterra(&p, &cfg).unwrap().r;
        let s = reflection_shooting(&p, &cfg).unwrap().r;
        prop_assert!(v.norm() <= 1.0 + 1e-9);
        prop_assert!((v - s).norm() <= 1e-6 * v.norm().max(1e-6));
    }

    #[test]
    fn split_point_does_not_matter(a in 0.3f64..3.0, t in 1e-3f64..0.3, x0 in 0.3f64..3.0) {
        let p = profile(a, t);
        let base = reflection_volterra(&p, &SolveConfig::default()).unwrap().r;
        let moved = reflection_volterra(&p, &SolveConfig { x0, ..SolveConfig::default() }).unwrap().r;
        prop_assert!((base - moved).norm() < 1e-8);
    }
}
