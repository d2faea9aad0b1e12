//! Search for the optimized transmission parameter `alpha*`.
//!
//! The practical one-parameter reduction sets `beta = -alpha` and picks
//! `alpha*` so that `|rho|` is equal at the two ends of the resolvable
//! frequency band, `omega_min = pi/T` and `omega_max = pi/dt`
//! (equioscillation). The difference
//! `h(alpha) = |rho(i omega_min)| - |rho(i omega_max)|` is scanned on a
//! uniform grid and every sign change is refined by bisection; several
//! roots can coexist and all are returned.

use crate::error::{Error, Result};
use crate::stencil::StencilCoefficients;
use crate::symbol::{characteristic_roots, optimized_rho, LaplacePoint};
use alloc::vec::Vec;
use num_complex::Complex64;

/// Frequency band and search controls for [`optimize_alpha`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationSetup {
    /// Lowest resolvable frequency, `pi / T`.
    pub omega_min: f64,
    /// Highest resolvable frequency, `pi / dt`.
    pub omega_max: f64,
    /// Scan interval for `alpha`, positive endpoints.
    pub alpha_interval: (f64, f64),
    /// Uniform scan resolution across the interval.
    pub scan_points: usize,
    /// Bracket width at which bisection stops.
    pub bisection_tolerance: f64,
}

impl OptimizationSetup {
    /// Defaults for a problem with horizon `T` and time step `dt`.
    pub fn for_horizon(horizon: f64, dt: f64) -> Self {
        Self {
            omega_min: core::f64::consts::PI / horizon,
            omega_max: core::f64::consts::PI / dt,
            alpha_interval: (1e-4, 64.0),
            scan_points: 4096,
            bisection_tolerance: 1e-8,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0 < self.omega_min && self.omega_min < self.omega_max) {
            return Err(Error::InvalidParameter("need 0 < omega_min < omega_max"));
        }
        if !(self.alpha_interval.0 > 0.0 && self.alpha_interval.0 < self.alpha_interval.1) {
            return Err(Error::InvalidParameter("alpha interval must be positive and increasing"));
        }
        if self.scan_points < 2 {
            return Err(Error::InvalidParameter("scan needs at least 2 points"));
        }
        if !(self.bisection_tolerance > 0.0) {
            return Err(Error::InvalidParameter("bisection tolerance must be positive"));
        }
        Ok(())
    }
}

/// One equioscillation root with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaRoot {
    pub alpha: f64,
    /// `|rho(i omega_min)|` at the root (equals `|rho(i omega_max)|` up to
    /// the bisection tolerance).
    pub objective_at_root: f64,
    /// `|h(alpha)|` re-evaluated at the returned root.
    pub h_residual: f64,
    /// Maximum of `|rho|` over the sampled band `[omega_min, omega_max]`.
    pub band_max_abs_rho: f64,
}

/// All equioscillation roots found on the scan interval, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaStarResult {
    pub roots: Vec<AlphaRoot>,
}

/// Band sampling resolution behind `band_max_abs_rho`.
const BAND_SAMPLES: usize = 2001;

/// Find every `alpha* > 0` with
/// `|rho(alpha*, -alpha*, i omega_min)| = |rho(alpha*, -alpha*, i omega_max)|`.
pub fn optimize_alpha(
    left: &StencilCoefficients,
    right: &StencilCoefficients,
    setup: &OptimizationSetup,
) -> Result<AlphaStarResult> {
    setup.validate()?;
    // The roots at the two band endpoints do not depend on alpha.
    let endpoint = |omega: f64| -> Result<(Complex64, Complex64)> {
        let s = LaplacePoint::imaginary(omega);
        Ok((
            characteristic_roots(right, s)?.r_minus,
            characteristic_roots(left, s)?.r_plus,
        ))
    };
    let (rm_lo, rp_lo) = endpoint(setup.omega_min)?;
    let (rm_hi, rp_hi) = endpoint(setup.omega_max)?;
    let h = |alpha: f64| -> f64 {
        let a = Complex64::new(alpha, 0.0);
        let b = Complex64::new(-alpha, 0.0);
        optimized_rho(rm_lo, rp_lo, a, b).norm() - optimized_rho(rm_hi, rp_hi, a, b).norm()
    };

    let (lo, hi) = setup.alpha_interval;
    let step = (hi - lo) / (setup.scan_points - 1) as f64;
    let grid = |i: usize| lo + step * i as f64;
    let mut alphas = Vec::new();
    let mut previous = h(lo);
    if previous == 0.0 {
        alphas.push(lo);
    }
    for i in 1..setup.scan_points {
        let x = grid(i);
        let value = h(x);
        if value == 0.0 {
            alphas.push(x);
        } else if previous != 0.0 && previous.signum() != value.signum() {
            alphas.push(bisect(&h, grid(i - 1), x, previous, setup.bisection_tolerance));
        }
        previous = value;
    }
    if alphas.is_empty() {
        return Err(Error::NoRoot { lo, hi });
    }

    let roots = alphas
        .into_iter()
        .map(|alpha| {
            let a = Complex64::new(alpha, 0.0);
            let b = Complex64::new(-alpha, 0.0);
            let objective = optimized_rho(rm_lo, rp_lo, a, b).norm();
            let mut band_max = 0.0f64;
            for k in 0..BAND_SAMPLES {
                let omega = setup.omega_min
                    + (setup.omega_max - setup.omega_min) * k as f64
                        / (BAND_SAMPLES - 1) as f64;
                let (rm, rp) = endpoint(omega)?;
                band_max = band_max.max(optimized_rho(rm, rp, a, b).norm());
            }
            Ok(AlphaRoot {
                alpha,
                objective_at_root: objective,
                h_residual: h(alpha).abs(),
                band_max_abs_rho: band_max,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AlphaStarResult { roots })
}

fn bisect(h: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut h_lo: f64, tolerance: f64) -> f64 {
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        let h_mid = h(mid);
        if h_mid == 0.0 {
            return mid;
        }
        if h_lo.signum() != h_mid.signum() {
            hi = mid;
        } else {
            lo = mid;
            h_lo = h_mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::case;

    fn setup_for(id: u32) -> (StencilCoefficients, StencilCoefficients, OptimizationSetup) {
        let p = case(id).unwrap();
        let (left, right) = p.interface_coefficients().unwrap();
        (left, right, OptimizationSetup::for_horizon(p.horizon, p.dt))
    }

    #[test]
    fn case1_single_root_near_reference_value() {
        let (left, right, setup) = setup_for(1);
        let result = optimize_alpha(&left, &right, &setup).unwrap();
        assert_eq!(result.roots.len(), 1);
        assert!((result.roots[0].alpha - 1.76848).abs() < 1e-3);
        assert!(result.roots[0].h_residual < 1e-7);
    }

    #[test]
    fn case2_single_root_near_reference_value() {
        let (left, right, setup) = setup_for(2);
        let result = optimize_alpha(&left, &right, &setup).unwrap();
        assert_eq!(result.roots.len(), 1);
        assert!((result.roots[0].alpha - 0.40361).abs() < 1e-3);
    }

    #[test]
    fn case7_frozen_coefficients_give_three_roots() {
        let (left, right, setup) = setup_for(7);
        let result = optimize_alpha(&left, &right, &setup).unwrap();
        assert_eq!(result.roots.len(), 3);
        let alphas: Vec<f64> = result.roots.iter().map(|r| r.alpha).collect();
        assert!(alphas.windows(2).all(|w| w[0] < w[1]), "roots must ascend");
        assert!((alphas[0] - 0.14600).abs() < 1e-2);
        assert!((alphas[1] - 2.05260).abs() < 1e-2);
        assert!((alphas[2] - 4.30670).abs() < 1e-2);
    }

    #[test]
    fn roots_satisfy_the_equioscillation_residual() {
        for id in [1, 2, 3, 7] {
            let (left, right, setup) = setup_for(id);
            let result = optimize_alpha(&left, &right, &setup).unwrap();
            for root in &result.roots {
                assert!(
                    root.h_residual < 10.0 * setup.bisection_tolerance,
                    "case {id}: residual {} at alpha {}",
                    root.h_residual,
                    root.alpha
                );
            }
        }
    }

    #[test]
    fn repeated_runs_are_bitwise_identical() {
        let (left, right, setup) = setup_for(2);
        let first = optimize_alpha(&left, &right, &setup).unwrap();
        let second = optimize_alpha(&left, &right, &setup).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn sign_change_free_interval_reports_no_root() {
        let (left, right, mut setup) = setup_for(1);
        setup.alpha_interval = (8.0, 64.0);
        match optimize_alpha(&left, &right, &setup) {
            Err(Error::NoRoot { .. }) => {}
            other => panic!("expected no-root, got {other:?}"),
        }
    }

    #[test]
    fn optimized_band_beats_dirichlet_band_for_identical_subdomains() {
        use crate::symbol::{contraction_factor, TransmissionKind, TransmissionSpec};
        let p = case(1).unwrap();
        let (left, _) = p.interface_coefficients().unwrap();
        let setup = OptimizationSetup::for_horizon(p.horizon, p.dt);
        let result = optimize_alpha(&left, &left, &setup).unwrap();

        let dirichlet = TransmissionSpec::plain(TransmissionKind::Dirichlet).unwrap();
        let mut dirichlet_max = 0.0f64;
        for k in 0..2001 {
            let omega =
                setup.omega_min + (setup.omega_max - setup.omega_min) * k as f64 / 2000.0;
            let rho =
                contraction_factor(&left, &left, LaplacePoint::imaginary(omega), &dirichlet)
                    .unwrap();
            dirichlet_max = dirichlet_max.max(rho.norm());
        }
        assert!(result.roots[0].band_max_abs_rho < dirichlet_max);
    }
}
