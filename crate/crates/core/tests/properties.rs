//! Property tests for the stencil algebra and the contraction-factor
//! identities, with the un-simplified product forms kept as oracles for the
//! simplified expressions the library actually evaluates.

use num_complex::Complex64;
use proptest::prelude::*;
use swr_core::{
    characteristic_roots, contraction_factor, optimized_rho, root_condition_holds,
    stencil_coefficients, AdrParameters, LaplacePoint, StencilCoefficients, TransmissionKind,
    TransmissionSpec,
};

fn triple() -> impl Strategy<Value = (f64, f64, f64)> {
    // (mu, theta, gamma) with positive advection, as in the experiment cases.
    (0.05..3.0f64, 0.02..1.0f64, 0.0..3.0f64)
}

fn laplace_point() -> impl Strategy<Value = (f64, f64)> {
    (0.0..10.0f64, -60.0..60.0f64)
}

fn coefficients(mu: f64, theta: f64, gamma: f64, dx: f64) -> StencilCoefficients {
    let params = AdrParameters::linear(mu, theta, gamma).unwrap();
    stencil_coefficients(&params, dx).unwrap()
}

/// Pre-simplification Dirichlet product,
/// `a2 c1 / ((c2 r- + b2 - s)(a1/r+ + b1 - s))`.
fn dirichlet_unsimplified(
    left: &StencilCoefficients,
    right: &StencilCoefficients,
    s: Complex64,
    r_minus: Complex64,
    r_plus: Complex64,
) -> Complex64 {
    right.a * left.c
        / ((right.c * r_minus + right.b - s) * (left.a / r_plus + left.b - s))
}

/// Pre-simplification 2-node Robin product; identically 1.
fn robin2_unsimplified(
    left: &StencilCoefficients,
    right: &StencilCoefficients,
    s: Complex64,
    r_minus: Complex64,
    r_plus: Complex64,
) -> Complex64 {
    let first = (right.a - right.c * r_minus)
        / (left.a / (r_plus * r_plus) + (left.b - s) / r_plus + left.a / r_plus);
    let second = (left.c - left.a / r_plus)
        / (right.c * r_minus + (right.b - s) * r_minus + right.c * r_minus * r_minus);
    first * second
}

/// Pre-simplification optimized product.
fn optimized_unsimplified(
    left: &StencilCoefficients,
    right: &StencilCoefficients,
    s: Complex64,
    r_minus: Complex64,
    r_plus: Complex64,
    alpha: f64,
    beta: f64,
) -> Complex64 {
    let q = 1.0 + alpha;
    let p = 1.0 - beta;
    let first = (left.c / r_minus - q * left.c)
        / (left.c + q * (left.a / r_plus + left.b - s));
    let second =
        (right.a * r_plus - p * right.a) / (right.a + p * (right.c * r_minus + right.b - s));
    first * second
}

proptest! {
    #[test]
    fn row_sum_is_minus_gamma((mu, theta, gamma) in triple(), dx in 0.02..0.15f64) {
        let c = coefficients(mu, theta, gamma, dx);
        let scale = c.a.abs() + c.b.abs() + c.c.abs();
        prop_assert!((c.a + c.b + c.c + gamma).abs() <= 1e-12 * scale);
    }

    #[test]
    fn roots_satisfy_the_characteristic_equation(
        (mu, theta, gamma) in triple(),
        dx in 0.02..0.15f64,
        (sigma, omega) in laplace_point(),
    ) {
        let c = coefficients(mu, theta, gamma, dx);
        let s = LaplacePoint::new(sigma, omega).unwrap();
        let roots = characteristic_roots(&c, s).unwrap();
        let scale = c.a.abs().max((Complex64::new(c.b, 0.0) - s.as_complex()).norm()).max(c.c.abs());
        for r in [roots.r_minus, roots.r_plus] {
            let residual = (c.c * r * r + (c.b - s.as_complex()) * r + c.a).norm();
            prop_assert!(residual < 1e-10 * scale, "residual {residual}");
        }
        // Vieta product.
        let product = roots.r_minus * roots.r_plus;
        let expected = c.a / c.c;
        prop_assert!((product - expected).norm() <= 1e-12 * expected.abs().max(1.0));
        // The labels order the moduli.
        prop_assert!(roots.r_plus.norm() > 1.0);
        if root_condition_holds(&c, omega) {
            prop_assert!(roots.r_minus.norm() < 1.0);
        }
    }

    #[test]
    fn work1_collapses_the_denominators(
        (mu, theta, gamma) in triple(),
        dx in 0.02..0.15f64,
        (sigma, omega) in laplace_point(),
    ) {
        let c = coefficients(mu, theta, gamma, dx);
        let s = LaplacePoint::new(sigma, omega).unwrap();
        let roots = characteristic_roots(&c, s).unwrap();
        let lhs = c.a / roots.r_plus + c.b - s.as_complex();
        let scale = lhs.norm().max(c.a.abs());
        prop_assert!((lhs + c.c * roots.r_plus).norm() <= 1e-10 * scale);
        prop_assert!((lhs + c.a / roots.r_minus).norm() <= 1e-10 * scale);
    }

    #[test]
    fn simplified_factors_match_their_product_forms(
        (mu1, theta1, gamma1) in triple(),
        (mu2, theta2, gamma2) in triple(),
        (sigma, omega) in laplace_point(),
        alpha in 0.05..8.0f64,
        beta in -8.0..-0.05f64,
    ) {
        let dx = 0.05;
        let left = coefficients(mu1, theta1, gamma1, dx);
        let right = coefficients(mu2, theta2, gamma2, dx);
        let s = LaplacePoint::new(sigma, omega).unwrap();
        let sc = s.as_complex();
        let r_plus = characteristic_roots(&left, s).unwrap().r_plus;
        let r_minus = characteristic_roots(&right, s).unwrap().r_minus;

        let dirichlet = contraction_factor(
            &left, &right, s, &TransmissionSpec::plain(TransmissionKind::Dirichlet).unwrap(),
        ).unwrap();
        prop_assert!((dirichlet - r_minus / r_plus).norm() <= 1e-14 * dirichlet.norm().max(1.0));
        let unsimplified = dirichlet_unsimplified(&left, &right, sc, r_minus, r_plus);
        prop_assert!((dirichlet - unsimplified).norm() <= 1e-10 * dirichlet.norm().max(1.0));

        let robin = robin2_unsimplified(&left, &right, sc, r_minus, r_plus);
        prop_assert!((robin - Complex64::new(1.0, 0.0)).norm() <= 1e-12);

        // The 3-node Robin closure shares the Dirichlet code path bitwise and
        // matches its own product form: the 2-node product times r-/r+.
        let robin3 = contraction_factor(
            &left, &right, s, &TransmissionSpec::plain(TransmissionKind::Robin3).unwrap(),
        ).unwrap();
        prop_assert_eq!(robin3, dirichlet);
        let product = robin * (r_minus / r_plus);
        prop_assert!((robin3 - product).norm() <= 1e-10 * robin3.norm().max(1.0));

        // Combined closure vs the product of its per-sweep factors,
        // r- * (c1 - a1/r+) / (c2 r- - a2).
        let combined2 = contraction_factor(
            &left, &right, s, &TransmissionSpec::plain(TransmissionKind::Combined2).unwrap(),
        ).unwrap();
        let product =
            r_minus * (left.c - left.a / r_plus) / (right.c * r_minus - right.a);
        prop_assert!((combined2 - product).norm() <= 1e-10 * combined2.norm().max(1.0));

        let optimized = optimized_rho(
            r_minus, r_plus, Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0),
        );
        let via_spec = contraction_factor(
            &left, &right, s,
            &TransmissionSpec::optimized(TransmissionKind::OptimizedDirichlet, alpha, beta)
                .unwrap(),
        ).unwrap();
        prop_assert_eq!(optimized, via_spec);
        let unsimplified =
            optimized_unsimplified(&left, &right, sc, r_minus, r_plus, alpha, beta);
        prop_assert!((optimized - unsimplified).norm() <= 1e-10 * optimized.norm().max(1.0));
    }

    #[test]
    fn dirichlet_contracts_under_the_root_condition(
        (mu1, theta1, gamma1) in triple(),
        (mu2, theta2, gamma2) in triple(),
        (sigma, omega) in laplace_point(),
    ) {
        let dx = 0.05;
        let left = coefficients(mu1, theta1, gamma1, dx);
        let right = coefficients(mu2, theta2, gamma2, dx);
        if root_condition_holds(&right, omega) {
            let s = LaplacePoint::new(sigma, omega).unwrap();
            let rho = contraction_factor(
                &left, &right, s, &TransmissionSpec::plain(TransmissionKind::Dirichlet).unwrap(),
            ).unwrap();
            prop_assert!(rho.norm() < 1.0);
        }
    }
}
