//! Time-domain Schwarz waveform relaxation.
//!
//! Each iteration sweeps both subdomains over the full horizon with
//! backward Euler, closing the interface row with the other subdomain's
//! previous-iterate history (Jacobi style). Solution-dependent coefficients
//! are lagged at the previous iterate, so every sweep stays linear.

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::stencil::{
    nonlinear_stencil_coefficients, stencil_coefficients, CoupledProblem, Side, StencilCoefficients,
    SubdomainGrid,
};
use crate::symbol::{TransmissionKind, TransmissionSpec};
use alloc::vec;
use alloc::vec::Vec;
// Provides ln/exp for f64 in no_std builds.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

/// One subdomain's solution history: `time level x node`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    grid: SubdomainGrid,
    n_levels: usize,
    values: Vec<f64>,
}

impl SpaceTimeField {
    /// Wrap a row-major `level x node` value buffer.
    pub fn from_values(grid: SubdomainGrid, n_levels: usize, values: Vec<f64>) -> Result<Self> {
        if n_levels == 0 || values.len() != n_levels * grid.len() {
            return Err(Error::InvalidParameter("field buffer does not match grid x levels"));
        }
        Ok(Self { grid, n_levels, values })
    }

    pub fn grid(&self) -> &SubdomainGrid {
        &self.grid
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    pub fn n_nodes(&self) -> usize {
        self.grid.len()
    }

    #[inline]
    pub fn at(&self, level: usize, node: usize) -> f64 {
        self.values[level * self.grid.len() + node]
    }

    pub fn row(&self, level: usize) -> &[f64] {
        let n = self.grid.len();
        &self.values[level * n..(level + 1) * n]
    }

    fn row_mut(&mut self, level: usize) -> &mut [f64] {
        let n = self.grid.len();
        &mut self.values[level * n..(level + 1) * n]
    }

    /// Value at the node carrying the transmitted interface data.
    pub fn interface_value(&self, level: usize) -> f64 {
        self.at(level, self.grid.interface_index())
    }
}

/// The zeroth Schwarz iterate: the initial profile held constant in time,
/// with the interface values zeroed on every level past the initial one and
/// the outer boundary column pinned to its prescribed value.
///
/// Zeroing only the interface nodes matters: a whole-field zero start makes
/// the 2-node Robin exchange freeze at its first sweep instead of
/// exhibiting its non-convergent cycling.
pub fn initial_iterate(problem: &CoupledProblem, side: Side) -> SpaceTimeField {
    let grid = match side {
        Side::Left => problem.left_grid(),
        Side::Right => problem.right_grid(),
    };
    let n = grid.len();
    let n_levels = problem.time_steps() + 1;
    let mut values = Vec::with_capacity(n * n_levels);
    for _ in 0..n_levels {
        values.extend(grid.node_positions().iter().map(|&x| problem.initial.eval(x)));
    }
    let mut field = SpaceTimeField { grid, n_levels, values };
    let (interface, boundary, boundary_value) = match side {
        Side::Left => (n - 1, 0, problem.boundary.0),
        Side::Right => (0, n - 1, problem.boundary.1),
    };
    for level in 1..n_levels {
        let row = field.row_mut(level);
        row[interface] = 0.0;
        row[boundary] = boundary_value;
    }
    field
}

/// Solver controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Residual level at which the main iteration stops.
    pub tolerance: f64,
    /// Residual level of the converged reference used for error curves.
    pub reference_tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { max_iterations: 200, tolerance: 1e-6, reference_tolerance: 1e-12 }
    }
}

/// Residual history of one relaxation run.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    /// Interface-update 1-norm per iteration,
    /// `dt * sum_n (|v0 update| + |w0 update|)`.
    pub residuals: Vec<f64>,
    /// Same norm of the distance to the converged reference, when one exists.
    pub errors_vs_reference: Vec<f64>,
    /// Iterations performed when the residual first reached the tolerance.
    pub iterations_to_tolerance: Option<usize>,
    pub converged_reference: Option<(SpaceTimeField, SpaceTimeField)>,
}

/// A requested intermediate iterate, for solution snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordedIterate {
    pub iteration: usize,
    pub fields: (SpaceTimeField, SpaceTimeField),
}

/// One interface row in stencil form:
/// `sum_k weights[k] * u_{k nodes inward} = rhs`, with index 0 at the
/// interface node itself and `rhs` assembled from the other subdomain's
/// previous-iterate values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceRow {
    pub weights: [f64; 3],
    pub rhs: f64,
}

impl InterfaceRow {
    /// Residual of this row against the subdomain's own values at one level,
    /// `sum_k weights[k] u_k - rhs`; zero at a fixed point of the iteration.
    pub fn residual(&self, own_inward: &[f64; 3]) -> f64 {
        self.weights[0] * own_inward[0] + self.weights[1] * own_inward[1]
            + self.weights[2] * own_inward[2]
            - self.rhs
    }
}

/// Build the interface row of one subdomain at one time level.
///
/// `other_values` holds the other subdomain's previous-iterate values at its
/// overlap nodes, ordered from its interface inward: `[w0, w1, (w2)]` when
/// closing the left subdomain, `[v0, v-1, (v-2)]` when closing the right.
/// The coefficient triples are the constant stencils in the linear case and
/// the interface-localized ones in the nonlinear case.
pub fn interface_row(
    spec: &TransmissionSpec,
    side: Side,
    left: &StencilCoefficients,
    right: &StencilCoefficients,
    other_values: &[f64],
) -> Result<InterfaceRow> {
    let overlap = spec.kind.required_overlap();
    if other_values.len() != overlap {
        return Err(Error::InvalidParameter(
            "other-subdomain overlap values do not match the transmission kind",
        ));
    }
    if spec.kind.is_optimized() {
        if (spec.alpha + 1.0) * (spec.beta - 1.0) + 1.0 == 0.0 {
            return Err(Error::InvalidParameter(
                "(alpha + 1)(beta - 1) + 1 = 0 would not recover continuity at convergence",
            ));
        }
        if spec.alpha + 1.0 == 0.0 || 1.0 - spec.beta == 0.0 {
            return Err(Error::InvalidParameter("optimized weights divide by 1+alpha and 1-beta"));
        }
    }
    let (a1, c1) = (left.a, left.c);
    let (a2, c2) = (right.a, right.c);
    let uses_flux = matches!(
        spec.kind,
        TransmissionKind::Robin2
            | TransmissionKind::Robin3
            | TransmissionKind::Combined2
            | TransmissionKind::Combined3
            | TransmissionKind::OptimizedRobin
    );
    if uses_flux && (c1 == 0.0 || a2 == 0.0) {
        return Err(Error::DegenerateStencil { c: 0.0, threshold: 0.0 });
    }
    let o = other_values;
    let row = match (side, spec.kind) {
        (Side::Left, TransmissionKind::Dirichlet) | (Side::Left, TransmissionKind::Combined2) => {
            InterfaceRow { weights: [1.0, 0.0, 0.0], rhs: o[1] }
        }
        (Side::Left, TransmissionKind::Combined3) => {
            InterfaceRow { weights: [1.0, 0.0, 0.0], rhs: o[2] }
        }
        (Side::Left, TransmissionKind::Robin2) => InterfaceRow {
            weights: [1.0, -a1 / c1, 0.0],
            rhs: -(a2 / c1) * o[0] + (c2 / c1) * o[1],
        },
        (Side::Left, TransmissionKind::Robin3) => InterfaceRow {
            weights: [1.0, -a1 / c1, 0.0],
            rhs: -(a2 / c1) * o[1] + (c2 / c1) * o[2],
        },
        (Side::Left, TransmissionKind::OptimizedDirichlet) => {
            let q = 1.0 + spec.alpha;
            InterfaceRow { weights: [1.0, -1.0 / q, 0.0], rhs: -o[0] / q + o[1] }
        }
        (Side::Left, TransmissionKind::OptimizedRobin) => {
            let q = 1.0 + spec.alpha;
            InterfaceRow {
                weights: [1.0, -(q * a1 + c1) / (q * c1), a1 / (q * c1)],
                rhs: (a2 / (q * c1)) * o[0] - ((q * a2 + c2) / (q * c1)) * o[1]
                    + (c2 / c1) * o[2],
            }
        }
        (Side::Right, TransmissionKind::Dirichlet) => {
            InterfaceRow { weights: [1.0, 0.0, 0.0], rhs: o[1] }
        }
        (Side::Right, TransmissionKind::Robin2) | (Side::Right, TransmissionKind::Combined2) => {
            InterfaceRow {
                weights: [1.0, -c2 / a2, 0.0],
                rhs: (a1 / a2) * o[1] - (c1 / a2) * o[0],
            }
        }
        (Side::Right, TransmissionKind::Robin3) | (Side::Right, TransmissionKind::Combined3) => {
            InterfaceRow {
                weights: [1.0, -c2 / a2, 0.0],
                rhs: -(c1 / a2) * o[1] + (a1 / a2) * o[2],
            }
        }
        (Side::Right, TransmissionKind::OptimizedDirichlet) => {
            let p = 1.0 - spec.beta;
            InterfaceRow { weights: [1.0, -1.0 / p, 0.0], rhs: o[1] - o[0] / p }
        }
        (Side::Right, TransmissionKind::OptimizedRobin) => {
            let p = 1.0 - spec.beta;
            InterfaceRow {
                weights: [1.0, -(a2 + p * c2) / (p * a2), c2 / (p * a2)],
                rhs: (a1 / a2) * o[2] - ((a1 + p * c1) / (p * a2)) * o[1]
                    + (c1 / (p * a2)) * o[0],
            }
        }
    };
    Ok(row)
}

fn coefficients_at(
    problem: &CoupledProblem,
    side: Side,
    state_value: f64,
    constant: Option<&StencilCoefficients>,
) -> StencilCoefficients {
    match constant {
        Some(c) => *c,
        None => nonlinear_stencil_coefficients(problem.params(side), state_value, problem.dx),
    }
}

/// Backward-Euler sweep of one subdomain over the full horizon.
///
/// Every time level solves the banded system `(I/dt - S) u^n = u^{n-1}/dt`
/// with the interface row replaced by the transmission closure evaluated on
/// the other subdomain's previous-iterate history, and the outer boundary
/// row pinned to its prescribed value. Solution-dependent coefficients are
/// taken from `prev_self` at the same level (Picard lagging).
pub fn backward_euler_sweep(
    problem: &CoupledProblem,
    side: Side,
    spec: &TransmissionSpec,
    prev_self: &SpaceTimeField,
    prev_other: &SpaceTimeField,
) -> Result<SpaceTimeField> {
    if problem.overlap_nodes != spec.kind.required_overlap() {
        return Err(Error::InvalidParameter(
            "problem overlap does not match the transmission kind",
        ));
    }
    let grid = match side {
        Side::Left => problem.left_grid(),
        Side::Right => problem.right_grid(),
    };
    let n_levels = problem.time_steps() + 1;
    if prev_self.grid() != &grid || prev_self.n_levels() != n_levels {
        return Err(Error::InvalidParameter("previous iterate does not match the problem grid"));
    }
    let other_grid = match side {
        Side::Left => problem.right_grid(),
        Side::Right => problem.left_grid(),
    };
    if prev_other.grid() != &other_grid || prev_other.n_levels() != n_levels {
        return Err(Error::InvalidParameter("other-subdomain iterate does not match the problem"));
    }

    let n = grid.len();
    let dt = problem.dt;
    let params = problem.params(side);
    // Linear coefficients are constant across nodes and levels.
    let self_constant = if params.is_linear() {
        Some(stencil_coefficients(params, problem.dx)?)
    } else {
        None
    };
    let left_constant = if problem.left.is_linear() {
        Some(stencil_coefficients(&problem.left, problem.dx)?)
    } else {
        None
    };
    let right_constant = if problem.right.is_linear() {
        Some(stencil_coefficients(&problem.right, problem.dx)?)
    } else {
        None
    };

    let (boundary_index, boundary_value, interface_index) = match side {
        Side::Left => (0, problem.boundary.0, n - 1),
        Side::Right => (n - 1, problem.boundary.1, 0),
    };
    let overlap = spec.kind.required_overlap();

    let mut values = Vec::with_capacity(n * n_levels);
    values.extend(grid.node_positions().iter().map(|&x| problem.initial.eval(x)));

    let mut other_overlap = [0.0f64; 3];
    for level in 1..n_levels {
        let mut matrix = BandedMatrix::<f64>::new(n, 2, 2);
        let mut rhs = vec![0.0f64; n];
        matrix.set(boundary_index, boundary_index, 1.0);
        rhs[boundary_index] = boundary_value;
        for j in 1..=n - 2 {
            let coeffs =
                coefficients_at(problem, side, prev_self.at(level, j), self_constant.as_ref());
            matrix.set(j, j - 1, -coeffs.a);
            matrix.set(j, j, 1.0 / dt - coeffs.b);
            matrix.set(j, j + 1, -coeffs.c);
            rhs[j] = values[(level - 1) * n + j] / dt;
        }

        // Interface closure, localized at the interface nodes' previous
        // iterate in the nonlinear case.
        let v0_prev = match side {
            Side::Left => prev_self.at(level, n - 1),
            Side::Right => prev_other.at(level, prev_other.n_nodes() - 1),
        };
        let w0_prev = match side {
            Side::Left => prev_other.at(level, 0),
            Side::Right => prev_self.at(level, 0),
        };
        let left_coeffs = coefficients_at(problem, Side::Left, v0_prev, left_constant.as_ref());
        let right_coeffs = coefficients_at(problem, Side::Right, w0_prev, right_constant.as_ref());
        for (k, slot) in other_overlap[..overlap].iter_mut().enumerate() {
            *slot = match side {
                Side::Left => prev_other.at(level, k),
                Side::Right => prev_other.at(level, prev_other.n_nodes() - 1 - k),
            };
        }
        let row = interface_row(spec, side, &left_coeffs, &right_coeffs, &other_overlap[..overlap])?;
        for (offset, &weight) in row.weights.iter().enumerate() {
            let column = match side {
                Side::Left => interface_index - offset,
                Side::Right => interface_index + offset,
            };
            matrix.set(interface_index, column, weight);
        }
        rhs[interface_index] = row.rhs;

        let solution = matrix.solve(rhs)?;
        values.extend_from_slice(&solution);
    }
    Ok(SpaceTimeField { grid, n_levels, values })
}

fn interface_update_norm(
    dt: f64,
    v_new: &SpaceTimeField,
    v_old: &SpaceTimeField,
    w_new: &SpaceTimeField,
    w_old: &SpaceTimeField,
) -> f64 {
    let mut sum = 0.0;
    for level in 1..v_new.n_levels() {
        sum += (v_new.interface_value(level) - v_old.interface_value(level)).abs();
        sum += (w_new.interface_value(level) - w_old.interface_value(level)).abs();
    }
    dt * sum
}

struct RunOutput {
    fields: (SpaceTimeField, SpaceTimeField),
    residuals: Vec<f64>,
    errors: Vec<f64>,
    converged_at: Option<usize>,
    recorded: Vec<RecordedIterate>,
}

/// The Dirichlet closure's first interface update is identically zero under
/// the zeroed interface start, so the tolerance stop is armed from the
/// second iteration on.
const MIN_ITERATIONS_BEFORE_STOP: usize = 2;

/// Cap on the reference computation.
const REFERENCE_MAX_ITERATIONS: usize = 1000;

fn run_iteration(
    problem: &CoupledProblem,
    spec: &TransmissionSpec,
    max_iterations: usize,
    tolerance: f64,
    reference: Option<&(SpaceTimeField, SpaceTimeField)>,
    record_iterations: &[usize],
) -> Result<RunOutput> {
    let mut v = initial_iterate(problem, Side::Left);
    let mut w = initial_iterate(problem, Side::Right);
    let mut residuals = Vec::new();
    let mut errors = Vec::new();
    let mut recorded = Vec::new();
    let mut converged_at = None;
    for iteration in 1..=max_iterations {
        let v_next = backward_euler_sweep(problem, Side::Left, spec, &v, &w)?;
        let w_next = backward_euler_sweep(problem, Side::Right, spec, &w, &v)?;
        let residual = interface_update_norm(problem.dt, &v_next, &v, &w_next, &w);
        residuals.push(residual);
        if let Some((v_ref, w_ref)) = reference {
            errors.push(interface_update_norm(problem.dt, &v_next, v_ref, &w_next, w_ref));
        }
        v = v_next;
        w = w_next;
        if record_iterations.contains(&iteration) {
            recorded.push(RecordedIterate { iteration, fields: (v.clone(), w.clone()) });
        }
        if iteration >= MIN_ITERATIONS_BEFORE_STOP && residual <= tolerance {
            converged_at = Some(iteration);
            break;
        }
    }
    Ok(RunOutput { fields: (v, w), residuals, errors, converged_at, recorded })
}

fn compute_reference(
    problem: &CoupledProblem,
    spec: &TransmissionSpec,
    config: &SolverConfig,
) -> Result<Option<(SpaceTimeField, SpaceTimeField)>> {
    let dirichlet = TransmissionSpec::plain(TransmissionKind::Dirichlet)?;
    // The 2-node Robin exchange stagnates; its error curves are
    // measured against the Dirichlet fixed point instead.
    let own = if spec.kind == TransmissionKind::Robin2 { &dirichlet } else { spec };
    let run = run_iteration(
        problem,
        own,
        REFERENCE_MAX_ITERATIONS,
        config.reference_tolerance,
        None,
        &[],
    )?;
    if run.converged_at.is_some() {
        return Ok(Some(run.fields));
    }
    if own.kind != TransmissionKind::Dirichlet && problem.overlap_nodes == 2 {
        let fallback = run_iteration(
            problem,
            &dirichlet,
            REFERENCE_MAX_ITERATIONS,
            config.reference_tolerance,
            None,
            &[],
        )?;
        if fallback.converged_at.is_some() {
            return Ok(Some(fallback.fields));
        }
    }
    Ok(None)
}

/// Run the Schwarz waveform relaxation for one problem and closure.
///
/// Returns the final iterate pair and the trace. Non-convergence within
/// `max_iterations` is reported in the trace, not as an error: the 2-node
/// Robin closure legitimately stagnates.
pub fn swr_solve(
    problem: &CoupledProblem,
    spec: &TransmissionSpec,
    config: &SolverConfig,
) -> Result<((SpaceTimeField, SpaceTimeField), IterationTrace)> {
    let (fields, trace, _) = swr_solve_recording(problem, spec, config, &[])?;
    Ok((fields, trace))
}

/// [`swr_solve`] that additionally clones the iterate pair at the requested
/// iteration numbers (1-based), for solution snapshots.
pub fn swr_solve_recording(
    problem: &CoupledProblem,
    spec: &TransmissionSpec,
    config: &SolverConfig,
    record_iterations: &[usize],
) -> Result<((SpaceTimeField, SpaceTimeField), IterationTrace, Vec<RecordedIterate>)> {
    if config.max_iterations < 1 {
        return Err(Error::InvalidParameter("max_iterations must be at least 1"));
    }
    if !(config.tolerance > 0.0) || !(config.reference_tolerance > 0.0) {
        return Err(Error::InvalidParameter("tolerances must be positive"));
    }
    if problem.overlap_nodes != spec.kind.required_overlap() {
        return Err(Error::InvalidParameter(
            "problem overlap does not match the transmission kind",
        ));
    }
    let reference = compute_reference(problem, spec, config)?;
    let out = run_iteration(
        problem,
        spec,
        config.max_iterations,
        config.tolerance,
        reference.as_ref(),
        record_iterations,
    )?;
    let trace = IterationTrace {
        residuals: out.residuals,
        errors_vs_reference: out.errors,
        iterations_to_tolerance: out.converged_at,
        converged_reference: reference,
    };
    Ok((out.fields, trace, out.recorded))
}

/// Empirical per-iteration contraction: the geometric mean of consecutive
/// residual ratios over the last half of the trace.
///
/// The symbol `rho` contracts interface data once per two sweeps, so the
/// matching empirical two-sweep factor is the square of this rate.
pub fn observed_rate(trace: &IterationTrace) -> Result<f64> {
    let residuals = &trace.residuals;
    if residuals.len() < 4 {
        return Err(Error::InsufficientData);
    }
    let tail = &residuals[residuals.len() / 2..];
    if tail.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::InsufficientData);
    }
    let log_sum: f64 = tail.windows(2).map(|pair| (pair[1] / pair[0]).ln()).sum();
    Ok((log_sum / (tail.len() - 1) as f64).exp())
}
