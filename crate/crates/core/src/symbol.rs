//! Laplace-domain analysis: characteristic roots of the stencil symbol,
//! contraction factors of the Schwarz iteration for each transmission
//! condition, convergence-region checks, and `|rho|` surface sampling.
//!
//! Replacing time differentiation by `s = sigma + i omega` turns the
//! semi-discrete system into the recurrence
//! `a u_{i-1} + (b - s) u_i + c u_{i+1} = 0`, whose solutions are powered
//! by the roots of `c r^2 + (b - s) r + a = 0`. Interface data transmitted
//! between subdomains contracts per double iteration by a factor `rho(s)`
//! that depends only on those roots and the interface closure.

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::stencil::{Side, StencilCoefficients};
use alloc::vec::Vec;
use num_complex::Complex64;

/// A point `s = sigma + i omega` in the closed right half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplacePoint {
    sigma: f64,
    omega: f64,
}

impl LaplacePoint {
    /// Fails when `sigma < 0`; the analysis lives on `Re s >= 0`.
    pub fn new(sigma: f64, omega: f64) -> Result<Self> {
        if !(sigma >= 0.0) {
            return Err(Error::InvalidParameter("sigma must be nonnegative"));
        }
        Ok(Self { sigma, omega })
    }

    /// Purely imaginary point `s = i omega`.
    pub fn imaginary(omega: f64) -> Self {
        Self { sigma: 0.0, omega }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.sigma, self.omega)
    }
}

/// The two characteristic roots at one Laplace point.
///
/// `r_plus` powers the decay into the left subdomain (`|r_plus| > 1`),
/// `r_minus` the decay into the right one (`|r_minus| < 1` under the root
/// condition).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootPair {
    pub r_minus: Complex64,
    pub r_plus: Complex64,
}

fn degeneracy_threshold(coeffs: &StencilCoefficients) -> f64 {
    crate::stencil::DEGENERACY_RELATIVE_THRESHOLD * coeffs.a.abs().max(coeffs.b.abs())
}

/// Square root of `(s - b)^2 - 4ac` on the branch with nonnegative real
/// part. The principal root is negated if its real part is negative, so the
/// branch is independent of library cut conventions.
fn discriminant_sqrt(coeffs: &StencilCoefficients, s: Complex64) -> Result<Complex64> {
    let sb = s - coeffs.b;
    let disc = sb * sb - 4.0 * coeffs.a * coeffs.c;
    let mut root = disc.sqrt();
    if root.re < 0.0 {
        root = -root;
    }
    // A vanishing discriminant collapses the two roots; under 4ac < b^2 and
    // sigma >= 0 this cannot happen.
    if root.re == 0.0 && root.im == 0.0 {
        return Err(Error::BranchFailure);
    }
    Ok(root)
}

/// Roots `r_pm = (s - b pm sqrt((s-b)^2 - 4ac)) / (2c)` of the
/// characteristic equation `c r^2 + (b - s) r + a = 0`.
pub fn characteristic_roots(coeffs: &StencilCoefficients, s: LaplacePoint) -> Result<RootPair> {
    let threshold = degeneracy_threshold(coeffs);
    if coeffs.c.abs() <= threshold {
        return Err(Error::DegenerateStencil { c: coeffs.c, threshold });
    }
    let sc = s.as_complex();
    let root = discriminant_sqrt(coeffs, sc)?;
    let sum = sc - coeffs.b + root;
    if sum.norm() == 0.0 {
        return Err(Error::BranchFailure);
    }
    Ok(RootPair {
        // (s - b - root)/(2c) rationalized through the root product, which
        // avoids the cancellation when |r_minus| is small.
        r_minus: 2.0 * coeffs.a / sum,
        r_plus: sum / (2.0 * coeffs.c),
    })
}

/// Sufficient condition for `|r_minus| < 1` on the boundary `sigma = 0`:
/// `|i omega - b + sqrt((i omega - b)^2 - 4ac)| > 2a`.
pub fn root_condition_holds(coeffs: &StencilCoefficients, omega: f64) -> bool {
    let s = Complex64::new(0.0, omega);
    match discriminant_sqrt(coeffs, s) {
        Ok(root) => (s - coeffs.b + root).norm() > 2.0 * coeffs.a,
        Err(_) => false,
    }
}

/// Interface closure selecting the transmission rule of the Schwarz
/// iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransmissionKind {
    /// Value continuity at both interfaces, 2-node overlap.
    Dirichlet,
    /// Flux continuity at both interfaces, 2-node overlap. The iteration
    /// carries `|rho| = 1` and does not converge.
    Robin2,
    /// Flux continuity with a 3-node overlap; contracts like Dirichlet.
    Robin3,
    /// Value continuity at one interface, flux at the other, 2-node overlap.
    Combined2,
    /// Combined condition with a 3-node overlap.
    Combined3,
    /// Dirichlet closure with relaxation parameters `(alpha, beta)`.
    OptimizedDirichlet,
    /// Flux closure with relaxation parameters; same contraction factor as
    /// `OptimizedDirichlet`, needs the 3-node overlap.
    OptimizedRobin,
}

impl TransmissionKind {
    /// Number of shared grid nodes the closure's update equations address.
    pub fn required_overlap(&self) -> usize {
        match self {
            TransmissionKind::Dirichlet
            | TransmissionKind::Robin2
            | TransmissionKind::Combined2
            | TransmissionKind::OptimizedDirichlet => 2,
            TransmissionKind::Robin3
            | TransmissionKind::Combined3
            | TransmissionKind::OptimizedRobin => 3,
        }
    }

    pub fn is_optimized(&self) -> bool {
        matches!(
            self,
            TransmissionKind::OptimizedDirichlet | TransmissionKind::OptimizedRobin
        )
    }
}

/// A transmission kind together with its relaxation parameters.
///
/// Plain kinds ignore `alpha`/`beta`. Optimized kinds require `alpha > 0`,
/// `beta < 0` (which keeps `rho` analytic) and the recovery condition
/// `(alpha + 1)(beta - 1) + 1 != 0` (which makes the converged iterates
/// satisfy the underlying plain condition).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionSpec {
    pub kind: TransmissionKind,
    pub alpha: f64,
    pub beta: f64,
}

impl TransmissionSpec {
    /// A non-optimized kind.
    pub fn plain(kind: TransmissionKind) -> Result<Self> {
        if kind.is_optimized() {
            return Err(Error::InvalidParameter(
                "optimized kinds need alpha and beta; use TransmissionSpec::optimized",
            ));
        }
        Ok(Self { kind, alpha: 0.0, beta: 0.0 })
    }

    /// An optimized kind with validated parameters.
    pub fn optimized(kind: TransmissionKind, alpha: f64, beta: f64) -> Result<Self> {
        if !kind.is_optimized() {
            return Err(Error::InvalidParameter(
                "plain kinds take no parameters; use TransmissionSpec::plain",
            ));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter("optimized alpha must be positive"));
        }
        if !(beta < 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter("optimized beta must be negative"));
        }
        if (alpha + 1.0) * (beta - 1.0) + 1.0 == 0.0 {
            return Err(Error::InvalidParameter(
                "(alpha + 1)(beta - 1) + 1 = 0 would not recover continuity at convergence",
            ));
        }
        Ok(Self { kind, alpha, beta })
    }
}

/// The optimized contraction factor
/// `rho = (1 + alpha - 1/r_minus)/(1 + alpha - 1/r_plus)
///        * (1 - beta - r_plus)/(1 - beta - r_minus) * r_minus/r_plus`.
///
/// Exposed with complex parameters: the exact optimum
/// `alpha = -1 + 1/r_minus`, `beta = 1 - r_plus` annihilates `rho` but is
/// complex-valued and frequency-dependent, hence unusable in the time
/// domain yet useful as an algebraic check.
pub fn optimized_rho(
    r_minus: Complex64,
    r_plus: Complex64,
    alpha: Complex64,
    beta: Complex64,
) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    ((one + alpha - 1.0 / r_minus) / (one + alpha - 1.0 / r_plus))
        * ((one - beta - r_plus) / (one - beta - r_minus))
        * (r_minus / r_plus)
}

/// Contraction factor `rho(s)` of the double Schwarz iteration.
///
/// `r_plus` is evaluated from the left subdomain's coefficients and
/// `r_minus` from the right subdomain's, matching how the transmitted data
/// propagates across the overlap.
pub fn contraction_factor(
    left: &StencilCoefficients,
    right: &StencilCoefficients,
    s: LaplacePoint,
    spec: &TransmissionSpec,
) -> Result<Complex64> {
    if spec.kind == TransmissionKind::Robin2 {
        // The exchanged fluxes cancel exactly; returning the constant avoids
        // spurious rounding in the cancelling product.
        return Ok(Complex64::new(1.0, 0.0));
    }
    let r_plus = characteristic_roots(left, s)?.r_plus;
    let r_minus = characteristic_roots(right, s)?.r_minus;
    let ratio = r_minus / r_plus;
    match spec.kind {
        TransmissionKind::Dirichlet | TransmissionKind::Robin3 => Ok(ratio),
        TransmissionKind::Combined2 | TransmissionKind::Combined3 => {
            let denominator = right.c - right.a / r_minus;
            if denominator.norm() == 0.0 {
                return Err(Error::Pole);
            }
            let combined = (left.c - left.a / r_plus) / denominator;
            if spec.kind == TransmissionKind::Combined2 {
                Ok(combined)
            } else {
                Ok(combined * ratio)
            }
        }
        TransmissionKind::OptimizedDirichlet | TransmissionKind::OptimizedRobin => {
            let alpha = Complex64::new(spec.alpha, 0.0);
            let beta = Complex64::new(spec.beta, 0.0);
            let one = Complex64::new(1.0, 0.0);
            if (one + alpha - 1.0 / r_plus).norm() == 0.0
                || (one - beta - r_minus).norm() == 0.0
            {
                return Err(Error::Pole);
            }
            Ok(optimized_rho(r_minus, r_plus, alpha, beta))
        }
        TransmissionKind::Robin2 => unreachable!(),
    }
}

/// Convergence condition of the combined closure:
/// `|(a1 - c1 r_plus)/(a2 - c2 r_minus)| < |r_plus / r_minus|^(overlap - 1)`.
pub fn combined_convergence_check(
    left: &StencilCoefficients,
    right: &StencilCoefficients,
    s: LaplacePoint,
    overlap: usize,
) -> Result<bool> {
    if overlap != 2 && overlap != 3 {
        return Err(Error::InvalidParameter("combined overlap must be 2 or 3"));
    }
    let r_plus = characteristic_roots(left, s)?.r_plus;
    let r_minus = characteristic_roots(right, s)?.r_minus;
    let lhs = ((left.a - left.c * r_plus) / (right.a - right.c * r_minus)).norm();
    let ratio = (r_plus / r_minus).norm();
    let bound = if overlap == 2 { ratio } else { ratio * ratio };
    Ok(lhs < bound)
}

/// `|rho|` sampled on a uniform `sigma x omega` grid.
///
/// Rows are indexed by `sigma` (row 0 is the boundary `sigma = 0`), columns
/// by `omega`; `values` is row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub omegas: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub values: Vec<f64>,
}

impl Surface {
    pub fn value(&self, sigma_index: usize, omega_index: usize) -> f64 {
        self.values[sigma_index * self.omegas.len() + omega_index]
    }

    pub fn row(&self, sigma_index: usize) -> &[f64] {
        let n = self.omegas.len();
        &self.values[sigma_index * n..(sigma_index + 1) * n]
    }

    /// Largest sampled value with its `(sigma, omega)` indices.
    pub fn max_entry(&self) -> (usize, usize, f64) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for i in 0..self.sigmas.len() {
            for j in 0..self.omegas.len() {
                let v = self.value(i, j);
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        best
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

/// Sample `|rho|` over `omega in [omega_range.0, omega_range.1]`,
/// `sigma in [0, sigma_max]`.
pub fn sample_surface(
    left: &StencilCoefficients,
    right: &StencilCoefficients,
    spec: &TransmissionSpec,
    omega_range: (f64, f64),
    sigma_max: f64,
    n_omega: usize,
    n_sigma: usize,
) -> Result<Surface> {
    if n_omega < 2 || n_sigma < 2 {
        return Err(Error::InvalidParameter("surface grids need at least 2 points per axis"));
    }
    if !(omega_range.0 < omega_range.1) || !omega_range.0.is_finite() || !omega_range.1.is_finite()
    {
        return Err(Error::InvalidParameter("omega range must be finite and increasing"));
    }
    if !(sigma_max > 0.0) || !sigma_max.is_finite() {
        return Err(Error::InvalidParameter("sigma_max must be positive and finite"));
    }
    let omegas = linspace(omega_range.0, omega_range.1, n_omega);
    let sigmas = linspace(0.0, sigma_max, n_sigma);
    let mut values = Vec::with_capacity(n_omega * n_sigma);
    for &sigma in &sigmas {
        for &omega in &omegas {
            let s = LaplacePoint::new(sigma, omega)?;
            values.push(contraction_factor(left, right, s, spec)?.norm());
        }
    }
    Ok(Surface { omegas, sigmas, values })
}

/// Direct solve of the truncated one-sided Laplace-domain system with a unit
/// interface datum.
///
/// For `Side::Left` the returned values are ordered from the far (truncated,
/// zero) end to the interface, so the datum `1` is last; for `Side::Right`
/// the datum is first. Away from the interface the magnitudes decay like
/// `|r_plus|^-distance` resp. `|r_minus|^distance` until they reach
/// round-off.
pub fn interface_mode_profile(
    coeffs: &StencilCoefficients,
    s: LaplacePoint,
    n_nodes: usize,
    side: Side,
) -> Result<Vec<Complex64>> {
    if n_nodes < 3 {
        return Err(Error::InvalidParameter("mode profile needs at least 3 nodes"));
    }
    let threshold = degeneracy_threshold(coeffs);
    if coeffs.c.abs() <= threshold {
        return Err(Error::DegenerateStencil { c: coeffs.c, threshold });
    }
    let n = n_nodes - 2; // unknowns strictly between the datum and the zero end
    let mut matrix = BandedMatrix::<Complex64>::new(n, 1, 1);
    let mut rhs = alloc::vec![Complex64::new(0.0, 0.0); n];
    let diag = Complex64::new(coeffs.b, 0.0) - s.as_complex();
    // Rows are the interior recurrence a u_{i-1} + (b - s) u_i + c u_{i+1} = 0;
    // the datum-side neighbor moves to the right-hand side.
    let (toward_far, toward_interface) = match side {
        Side::Left => (coeffs.a, coeffs.c),
        Side::Right => (coeffs.c, coeffs.a),
    };
    for i in 0..n {
        matrix.set(i, i, diag);
        if i > 0 {
            matrix.set(i, i - 1, Complex64::new(toward_interface, 0.0));
        } else {
            rhs[0] = Complex64::new(-toward_interface, 0.0);
        }
        if i + 1 < n {
            matrix.set(i, i + 1, Complex64::new(toward_far, 0.0));
        }
    }
    let interior = matrix.solve(rhs)?;
    let mut profile = Vec::with_capacity(n_nodes);
    match side {
        Side::Left => {
            profile.push(Complex64::new(0.0, 0.0));
            profile.extend(interior.into_iter().rev());
            profile.push(Complex64::new(1.0, 0.0));
        }
        Side::Right => {
            profile.push(Complex64::new(1.0, 0.0));
            profile.extend(interior);
            profile.push(Complex64::new(0.0, 0.0));
        }
    }
    Ok(profile)
}
