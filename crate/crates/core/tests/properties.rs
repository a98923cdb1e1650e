//! Randomised invariants of the kernels.

use casimir_core::asymptotics::{stray_field_factor, stray_field_projection};
use casimir_core::modes::{self, Geometry};
use casimir_core::riccati::riccati_table;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn wronskian_holds(l in 0usize..=500, lx in -2.0f64..4.0) {
        let x = 10f64.powf(lx);
        let t = riccati_table(x, l.max(1)).unwrap();
        let en = t.get(l);
        prop_assert!((en.wronskian() + 1.0).abs() < 1e-12, "l={} x={} w={}", l, x, en.wronskian());
        prop_assert!(en.s > 0.0 && en.ds > 0.0 && en.e > 0.0 && en.de < 0.0);
    }

    #[test]
    fn reflection_products_in_unit_interval(l in 1usize..=80, rho in 0.05f64..0.99, ly in -2.0f64..1.7) {
        let y = 10f64.powf(ly);
        let m = modes::mode_term(l, rho * y, y).unwrap();
        // A_F ~ x^(2l+1) underflows at small x and large l; signs are strict otherwise.
        prop_assert!(m.a_f >= 0.0 && m.a_g <= 0.0);
        if m.a_f > f64::MIN_POSITIVE {
            prop_assert!(m.a_g < 0.0);
        }
        prop_assert!(m.lambda <= 0.0);
        prop_assert!(m.dlambda_dy >= 0.0);
    }

    #[test]
    fn decomposition_identity(l in 1usize..=100, rho in 0.05f64..0.99, ly in -2.0f64..1.7) {
        let y = 10f64.powf(ly);
        let g = Geometry::from_ratio(rho).unwrap();
        let p = modes::force_density_decomposition(l, &g, y).unwrap();
        prop_assert!((p.total - p.self_part - p.mutual_part).abs() <= 1e-10 * p.total.abs());
    }

    #[test]
    fn integrands_depend_only_on_ratio(l in 1usize..=40, rho in 0.05f64..0.95, y in 0.01f64..30.0, lambda in 0.01f64..100.0) {
        let g = Geometry::from_ratio(rho).unwrap();
        let h = g.scaled(lambda).unwrap();
        prop_assert!(rel(modes::er2_integrand(l, &h, y).unwrap(), modes::er2_integrand(l, &g, y).unwrap()) < 1e-12);
        prop_assert!(rel(modes::hperp_integrand(l, &h, y).unwrap(), modes::hperp_integrand(l, &g, y).unwrap()) < 1e-12);
    }

    #[test]
    fn stray_integral_matches_closed_form(delta in 0.0f64..1.5) {
        prop_assert!((stray_field_projection(delta).unwrap() - stray_field_factor(delta).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn static_branch_is_small_frequency_limit() {
    for &l in &[1usize, 2, 5, 20] {
        for &rho in &[0.3, 0.5, 0.9] {
            let y = 1e-3;
            let lam = modes::lambda_term(l, rho * y, y).unwrap();
            let stat = modes::lambda_static(l, rho).unwrap();
            assert!(rel(lam, stat) < 1e-4, "l={l} rho={rho}: {lam} vs {stat}");
        }
    }
    assert!((modes::lambda_static(1, 0.5).unwrap() - 2.0 * 0.875f64.ln()).abs() < 1e-15);
}

#[test]
fn derivative_matches_spec_finite_difference() {
    let h = 1e-5;
    let fd = (modes::lambda_term(1, 0.5, 1.0 + h).unwrap()
        - modes::lambda_term(1, 0.5, 1.0 - h).unwrap())
        / (2.0 * h);
    let exact = modes::dlambda_dy(1, 0.5, 1.0).unwrap();
    assert!(exact > 0.0);
    assert!(rel(fd, exact) < 1e-6);
}

#[test]
fn decoupled_shell_has_no_mutual_part() {
    let g = Geometry::from_ratio(1e-3).unwrap();
    let p = modes::force_density_decomposition(2, &g, 1.5).unwrap();
    assert!(p.mutual_part.abs() < 1e-12 * p.total.abs());
    let g = Geometry::from_ratio(0.9).unwrap();
    assert!(
        modes::force_density_decomposition(1, &g, 0.3)
            .unwrap()
            .mutual_part
            > 0.0
    );
}
