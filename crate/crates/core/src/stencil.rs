//! Problem definition: physical parameters, subdomain grids, and the
//! three-point stencil coefficients of the central-difference
//! semi-discretization.
//!
//! The advection-diffusion-reaction equation
//!
//! ```text
//! u_t + mu u_x = theta u_xx - gamma u
//! ```
//!
//! discretized by central differences on a uniform grid turns into
//! `u_t|_i = a u_{i-1} + b u_i + c u_{i+1}` with the coefficient triple
//! computed by [`stencil_coefficients`]. Everything downstream (root
//! analysis, contraction factors, the waveform-relaxation engine) is
//! phrased in terms of that triple.

use crate::error::{Error, Result};
use alloc::vec::Vec;
// Provides sin/round for f64 in no_std builds; shadowed by the inherent
// methods when std is linked for tests.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

/// Which subdomain of the coupled problem an operation refers to.
///
/// `Left` owns the grid ending at the interface `x1`; `Right` owns the grid
/// starting at `x2 < x1`. The two grids overlap on 2 or 3 shared nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Advection law `mu(u)`.
///
/// The linear problem uses a nonzero constant; the nonlinear cases use one
/// of the closed set of laws appearing in the experiment registry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AdvectionLaw {
    Constant(f64),
    /// `mu(u) = u` (Burgers-type advection).
    Identity,
    /// `mu(u) = u^2`.
    Square,
    /// `mu(u) = sin(pi u)`.
    SinePi,
}

impl AdvectionLaw {
    /// Evaluate the advection coefficient at solution value `u`.
    pub fn eval(&self, u: f64) -> f64 {
        match *self {
            AdvectionLaw::Constant(mu) => mu,
            AdvectionLaw::Identity => u,
            AdvectionLaw::Square => u * u,
            AdvectionLaw::SinePi => (core::f64::consts::PI * u).sin(),
        }
    }
}

/// Physical coefficients of one subdomain's equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdrParameters {
    pub advection: AdvectionLaw,
    /// Diffusion coefficient, strictly positive.
    pub theta: f64,
    /// Reaction coefficient, nonnegative.
    pub gamma: f64,
    /// Reaction order, 0 or 1: the reaction term reads `gamma * u^kappa * u`.
    pub kappa: u32,
}

impl AdrParameters {
    /// Linear equation with constant advection `mu != 0`.
    pub fn linear(mu: f64, theta: f64, gamma: f64) -> Result<Self> {
        if mu == 0.0 || !mu.is_finite() {
            return Err(Error::InvalidParameter("linear mu must be a nonzero constant"));
        }
        Self::nonlinear(AdvectionLaw::Constant(mu), theta, gamma, 0)
    }

    /// Solution-dependent advection and reaction order.
    pub fn nonlinear(advection: AdvectionLaw, theta: f64, gamma: f64, kappa: u32) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter("theta must be positive"));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter("gamma must be nonnegative"));
        }
        if kappa > 1 {
            return Err(Error::InvalidParameter("kappa must be 0 or 1"));
        }
        Ok(Self { advection, theta, gamma, kappa })
    }

    /// True when the advection law is a constant.
    pub fn is_linear(&self) -> bool {
        matches!(self.advection, AdvectionLaw::Constant(_))
    }
}

/// The `(a, b, c)` weights of the semi-discrete system
/// `u_t|_i = a u_{i-1} + b u_i + c u_{i+1}`.
///
/// For `theta > 0` the triple satisfies `b < 0` and `4ac < b^2`; the
/// constructors in this module keep those invariants, while [`StencilCoefficients::new`]
/// accepts raw triples so the advection-only and diffusion-only special
/// cases stay expressible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl StencilCoefficients {
    /// Wrap a raw coefficient triple without validation.
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }
}

/// Relative threshold below which `|c|` is treated as zero; the analysis
/// divides by `c`, so triples this close to one-sided are rejected.
pub const DEGENERACY_RELATIVE_THRESHOLD: f64 = 1e-12;

/// Stencil coefficients of the linear equation.
///
/// `a = mu/(2 dx) + theta/dx^2`, `b = -2 theta/dx^2 - gamma`,
/// `c = -mu/(2 dx) + theta/dx^2`. Fails when the advection law is not a
/// constant or when `|c| <= 1e-12 * theta/dx^2`.
pub fn stencil_coefficients(params: &AdrParameters, dx: f64) -> Result<StencilCoefficients> {
    let mu = match params.advection {
        AdvectionLaw::Constant(mu) => mu,
        _ => {
            return Err(Error::InvalidParameter(
                "stencil_coefficients needs a constant advection law",
            ))
        }
    };
    if !(dx > 0.0) {
        return Err(Error::InvalidParameter("dx must be positive"));
    }
    let diffusive = params.theta / (dx * dx);
    let advective = mu / (2.0 * dx);
    let coeffs = StencilCoefficients {
        a: advective + diffusive,
        b: -2.0 * diffusive - params.gamma,
        c: -advective + diffusive,
    };
    let threshold = DEGENERACY_RELATIVE_THRESHOLD * diffusive;
    if coeffs.c.abs() <= threshold {
        return Err(Error::DegenerateStencil { c: coeffs.c, threshold });
    }
    Ok(coeffs)
}

/// Stencil coefficients with the advection law и reaction localized at a
/// solution value from the previous Schwarz iterate.
///
/// No degeneracy check here: interior coefficients never enter the root
/// formulas, and the root computation performs its own check on the
/// localized interface triples.
pub fn nonlinear_stencil_coefficients(
    params: &AdrParameters,
    state_value: f64,
    dx: f64,
) -> StencilCoefficients {
    let mu = params.advection.eval(state_value);
    let diffusive = params.theta / (dx * dx);
    let advective = mu / (2.0 * dx);
    // kappa is 0 or 1: u^0 = 1 (linear reaction), u^1 = u.
    let reaction = if params.kappa == 0 { params.gamma } else { params.gamma * state_value };
    StencilCoefficients {
        a: advective + diffusive,
        b: -2.0 * diffusive - reaction,
        c: -advective + diffusive,
    }
}

/// Initial profile `u(x, 0)` shared by both subdomains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialProfile {
    /// `f(x) = -sin(pi x)`, the profile of every registered case.
    NegSinPi,
    Zero,
}

impl InitialProfile {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            InitialProfile::NegSinPi => -(core::f64::consts::PI * x).sin(),
            InitialProfile::Zero => 0.0,
        }
    }
}

/// One subdomain's uniform grid.
///
/// Node positions run left to right. The interface node carries the
/// transmitted value: the last node of the left grid (at `x1`), the first
/// node of the right grid (at `x2`).
#[derive(Debug, Clone, PartialEq)]
pub struct SubdomainGrid {
    dx: f64,
    node_positions: Vec<f64>,
    interface_index: usize,
}

impl SubdomainGrid {
    fn build(start: f64, count: usize, dx: f64, interface_index: usize) -> Self {
        let node_positions = (0..count).map(|i| start + dx * i as f64).collect();
        Self { dx, node_positions, interface_index }
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn node_positions(&self) -> &[f64] {
        &self.node_positions
    }

    pub fn len(&self) -> usize {
        self.node_positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_positions.is_empty()
    }

    pub fn interface_index(&self) -> usize {
        self.interface_index
    }
}

/// Two coupled initial value problems on overlapping grids.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledProblem {
    pub left: AdrParameters,
    pub right: AdrParameters,
    /// Outer physical domain `[x_left, x_right]`.
    pub domain: (f64, f64),
    /// Interface of the left subdomain (its rightmost node).
    pub x1: f64,
    /// Interface of the right subdomain (its leftmost node), `x2 < x1`.
    pub x2: f64,
    /// Shared grid nodes in the overlap region, 2 or 3.
    pub overlap_nodes: usize,
    pub initial: InitialProfile,
    /// Time horizon `T`.
    pub horizon: f64,
    pub dt: f64,
    pub dx: f64,
    /// Dirichlet values at the outer boundaries `(x_left, x_right)`.
    pub boundary: (f64, f64),
}

/// `value / step` must be an integer for interfaces and the horizon to sit
/// on grid points; allow a small relative slack for decimal steps.
fn integer_multiple(value: f64, step: f64) -> Option<usize> {
    let ratio = value / step;
    let rounded = ratio.round();
    if (ratio - rounded).abs() <= 1e-9 * ratio.abs().max(1.0) && rounded >= 0.0 {
        Some(rounded as usize)
    } else {
        None
    }
}

impl CoupledProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        left: AdrParameters,
        right: AdrParameters,
        domain: (f64, f64),
        x1: f64,
        x2: f64,
        initial: InitialProfile,
        horizon: f64,
        dt: f64,
        dx: f64,
        boundary: (f64, f64),
    ) -> Result<Self> {
        if !(dx > 0.0) || !(dt > 0.0) {
            return Err(Error::InvalidParameter("dx and dt must be positive"));
        }
        if !(domain.0 < x2 && x2 < x1 && x1 < domain.1) {
            return Err(Error::InvalidParameter(
                "interfaces must satisfy x_left < x2 < x1 < x_right",
            ));
        }
        let left_nodes = integer_multiple(x1 - domain.0, dx)
            .ok_or(Error::InvalidParameter("x1 must lie on the left grid"))?;
        let right_nodes = integer_multiple(domain.1 - x2, dx)
            .ok_or(Error::InvalidParameter("x2 must lie on the right grid"))?;
        let overlap_gap = integer_multiple(x1 - x2, dx)
            .ok_or(Error::InvalidParameter("interfaces must be whole grid cells apart"))?;
        let overlap_nodes = overlap_gap + 1;
        if overlap_nodes != 2 && overlap_nodes != 3 {
            return Err(Error::InvalidParameter("overlap must span 2 or 3 grid nodes"));
        }
        if integer_multiple(horizon, dt).is_none_or(|n| n == 0) {
            return Err(Error::InvalidParameter("horizon must be a positive multiple of dt"));
        }
        // Each subdomain needs its outer boundary node, the interface node,
        // and enough interior nodes to host the widest interface row.
        if left_nodes + 1 < overlap_nodes + 1 || right_nodes + 1 < overlap_nodes + 1 {
            return Err(Error::InvalidParameter("subdomain grids are too short"));
        }
        Ok(Self {
            left,
            right,
            domain,
            x1,
            x2,
            overlap_nodes,
            initial,
            horizon,
            dt,
            dx,
            boundary,
        })
    }

    /// Grid of the left subdomain `[x_left, x1]`; interface node is last.
    pub fn left_grid(&self) -> SubdomainGrid {
        let count = integer_multiple(self.x1 - self.domain.0, self.dx).unwrap() + 1;
        SubdomainGrid::build(self.domain.0, count, self.dx, count - 1)
    }

    /// Grid of the right subdomain `[x2, x_right]`; interface node is first.
    pub fn right_grid(&self) -> SubdomainGrid {
        let count = integer_multiple(self.domain.1 - self.x2, self.dx).unwrap() + 1;
        SubdomainGrid::build(self.x2, count, self.dx, 0)
    }

    /// Number of time steps `N = T/dt`; fields carry `N + 1` levels.
    pub fn time_steps(&self) -> usize {
        integer_multiple(self.horizon, self.dt).unwrap()
    }

    pub fn params(&self, side: Side) -> &AdrParameters {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Same problem with the overlap widened or narrowed to `overlap_nodes`
    /// shared nodes by moving `x2`, keeping `x1` fixed.
    pub fn with_overlap_nodes(&self, overlap_nodes: usize) -> Result<Self> {
        let x2 = self.x1 - (overlap_nodes as f64 - 1.0) * self.dx;
        Self::new(
            self.left,
            self.right,
            self.domain,
            self.x1,
            x2,
            self.initial,
            self.horizon,
            self.dt,
            self.dx,
            self.boundary,
        )
    }

    pub fn with_horizon(&self, horizon: f64) -> Result<Self> {
        let mut p = self.clone();
        p.horizon = horizon;
        Self::new(p.left, p.right, p.domain, p.x1, p.x2, p.initial, horizon, p.dt, p.dx, p.boundary)
    }

    pub fn with_dt(&self, dt: f64) -> Result<Self> {
        Self::new(
            self.left,
            self.right,
            self.domain,
            self.x1,
            self.x2,
            self.initial,
            self.horizon,
            dt,
            self.dx,
            self.boundary,
        )
    }

    pub fn with_dx(&self, dx: f64) -> Result<Self> {
        Self::new(
            self.left,
            self.right,
            self.domain,
            self.x1,
            self.x2,
            self.initial,
            self.horizon,
            self.dt,
            dx,
            self.boundary,
        )
    }

    /// Coefficient triples for the Laplace-domain analysis of this problem.
    ///
    /// Linear sides use their constant stencil. Solution-dependent sides are
    /// localized at the interface nodes and frozen at the initial profile
    /// there: the left triple at `f(x2)`, the right triple at `f(x1)`,
    /// matching the localization the reference optimal parameters come from.
    pub fn interface_coefficients(&self) -> Result<(StencilCoefficients, StencilCoefficients)> {
        let frozen = |params: &AdrParameters, x: f64| -> Result<StencilCoefficients> {
            if params.is_linear() {
                stencil_coefficients(params, self.dx)
            } else {
                Ok(nonlinear_stencil_coefficients(params, self.initial.eval(x), self.dx))
            }
        };
        Ok((frozen(&self.left, self.x2)?, frozen(&self.right, self.x1)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(x: f64, y: f64, tol: f64) {
        assert!((x - y).abs() <= tol, "{x} vs {y}");
    }

    // Independent arithmetic oracle for the coefficient formulas.
    fn oracle(mu: f64, theta: f64, gamma: f64, dx: f64) -> (f64, f64, f64) {
        (
            mu / (2.0 * dx) + theta / (dx * dx),
            -2.0 * theta / (dx * dx) - gamma,
            -mu / (2.0 * dx) + theta / (dx * dx),
        )
    }

    #[test]
    fn linear_coefficients_match_oracle() {
        let cases = [(1.5, 0.1, 0.0), (0.2, 0.4, 1.0), (0.4, 0.2, 2.0), (-0.7, 0.3, 0.5)];
        for (mu, theta, gamma) in cases {
            let params = AdrParameters::linear(mu, theta, gamma).unwrap();
            let got = stencil_coefficients(&params, 0.05).unwrap();
            let (a, b, c) = oracle(mu, theta, gamma, 0.05);
            assert_close(got.a, a, 1e-12 * a.abs());
            assert_close(got.b, b, 1e-12 * b.abs());
            assert_close(got.c, c, 1e-12 * c.abs().max(1.0));
        }
    }

    #[test]
    fn case1_left_triple_is_55_m80_25() {
        let params = AdrParameters::linear(1.5, 0.1, 0.0).unwrap();
        let c = stencil_coefficients(&params, 0.05).unwrap();
        assert_close(c.a, 55.0, 1e-10);
        assert_close(c.b, -80.0, 1e-10);
        assert_close(c.c, 25.0, 1e-10);
    }

    #[test]
    fn zero_advection_gives_symmetric_triple() {
        // mu = 0 is outside the linear contract, so drive the nonlinear path
        // with a constant law instead.
        let params = AdrParameters::nonlinear(AdvectionLaw::Constant(0.0), 0.4, 0.0, 0).unwrap();
        let c = nonlinear_stencil_coefficients(&params, 3.7, 0.05);
        assert_close(c.a, 160.0, 1e-10);
        assert_close(c.b, -320.0, 1e-10);
        assert_close(c.c, 160.0, 1e-10);
    }

    #[test]
    fn reactive_triple_is_162_m321_158() {
        let params = AdrParameters::linear(0.2, 0.4, 1.0).unwrap();
        let c = stencil_coefficients(&params, 0.05).unwrap();
        assert_close(c.a, 162.0, 1e-10);
        assert_close(c.b, -321.0, 1e-10);
        assert_close(c.c, 158.0, 1e-10);
    }

    #[test]
    fn nonlinear_identity_law_at_unit_state() {
        let params = AdrParameters::nonlinear(AdvectionLaw::Identity, 0.4, 1.0, 0).unwrap();
        let c = nonlinear_stencil_coefficients(&params, 1.0, 0.05);
        assert_close(c.a, 170.0, 1e-10);
        assert_close(c.b, -321.0, 1e-10);
        assert_close(c.c, 150.0, 1e-10);
    }

    #[test]
    fn sine_law_vanishes_at_unit_state() {
        let params = AdrParameters::nonlinear(AdvectionLaw::SinePi, 0.3, 0.0, 0).unwrap();
        let c = nonlinear_stencil_coefficients(&params, 1.0, 0.05);
        let diffusive = 0.3 / 0.0025;
        assert_close(c.a, diffusive, 1e-9);
        assert_close(c.c, diffusive, 1e-9);
    }

    #[test]
    fn second_order_reaction_dies_at_zero_state() {
        let params = AdrParameters::nonlinear(AdvectionLaw::Identity, 0.2, 2.0, 1).unwrap();
        let c = nonlinear_stencil_coefficients(&params, 0.0, 0.05);
        assert_close(c.a, 80.0, 1e-10);
        assert_close(c.b, -160.0, 1e-10);
        assert_close(c.c, 80.0, 1e-10);
    }

    #[test]
    fn row_sum_is_minus_gamma() {
        // a + b + c = -gamma for any parameters, pseudo-random draws.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let mu = 0.05 + 3.0 * next();
            let theta = 0.02 + next();
            let gamma = 3.0 * next();
            let dx = 0.02 + 0.1 * next();
            let params = AdrParameters::linear(mu, theta, gamma).unwrap();
            let c = stencil_coefficients(&params, dx).unwrap();
            assert_close(c.a + c.b + c.c, -gamma, 1e-9 * (c.a.abs() + c.b.abs()));
        }
    }

    #[test]
    fn linear_and_nonlinear_paths_agree_for_constant_law() {
        let params = AdrParameters::linear(0.8, 0.25, 1.5).unwrap();
        let lin = stencil_coefficients(&params, 0.05).unwrap();
        let non = nonlinear_stencil_coefficients(&params, 42.0, 0.05);
        assert_eq!(lin, non);
    }

    #[test]
    fn degenerate_c_is_rejected() {
        // mu = 2 theta / dx makes c vanish exactly.
        let params = AdrParameters::linear(16.0, 0.4, 0.0).unwrap();
        match stencil_coefficients(&params, 0.05) {
            Err(Error::DegenerateStencil { .. }) => {}
            other => panic!("expected degenerate stencil, got {other:?}"),
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(AdrParameters::linear(0.0, 0.1, 0.0).is_err());
        assert!(AdrParameters::linear(1.0, 0.0, 0.0).is_err());
        assert!(AdrParameters::linear(1.0, 0.1, -1.0).is_err());
        assert!(AdrParameters::nonlinear(AdvectionLaw::Identity, 0.1, 0.0, 2).is_err());
    }

    #[test]
    fn grids_share_the_overlap_nodes() {
        let left = AdrParameters::linear(1.5, 0.1, 0.0).unwrap();
        let right = AdrParameters::linear(1.0, 0.1, 0.0).unwrap();
        let p = CoupledProblem::new(
            left,
            right,
            (-1.0, 1.0),
            -0.15,
            -0.2,
            InitialProfile::NegSinPi,
            5.0,
            0.05,
            0.05,
            (0.0, 0.0),
        )
        .unwrap();
        let lg = p.left_grid();
        let rg = p.right_grid();
        assert_eq!(lg.len(), 18);
        assert_eq!(rg.len(), 25);
        assert_eq!(lg.interface_index(), 17);
        assert_eq!(rg.interface_index(), 0);
        // 2-node overlap: v_{-1} with w_0, v_0 with w_1.
        let lp = lg.node_positions();
        let rp = rg.node_positions();
        assert_close(lp[16], rp[0], 1e-12);
        assert_close(lp[17], rp[1], 1e-12);

        let p3 = p.with_overlap_nodes(3).unwrap();
        assert_eq!(p3.overlap_nodes, 3);
        assert_close(p3.x2, -0.25, 1e-12);
        let lp3 = p3.left_grid();
        let rp3 = p3.right_grid();
        assert_close(lp3.node_positions()[lp3.len() - 3], rp3.node_positions()[0], 1e-12);
    }

    #[test]
    fn misaligned_interface_is_rejected() {
        let left = AdrParameters::linear(1.5, 0.1, 0.0).unwrap();
        let right = AdrParameters::linear(1.0, 0.1, 0.0).unwrap();
        let r = CoupledProblem::new(
            left,
            right,
            (-1.0, 1.0),
            -0.13,
            -0.2,
            InitialProfile::NegSinPi,
            5.0,
            0.05,
            0.05,
            (0.0, 0.0),
        );
        assert!(r.is_err());
    }
}
