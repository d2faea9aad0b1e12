//! Schwarz waveform relaxation for coupled 1-D advection-diffusion-reaction
//! equations.
//!
//! The crate has two halves that check each other:
//!
//! * Laplace-domain analysis ([`symbol`], [`optimize`]): characteristic
//!   roots of the discretization stencil, contraction factors for the
//!   Dirichlet, Robin, combined, and optimized transmission conditions, and
//!   the equioscillation search for the optimized parameter `alpha*`.
//! * A time-domain solver ([`solve`]): backward-Euler waveform relaxation
//!   exchanging whole time histories across a 2- or 3-node overlap, with
//!   Picard-lagged coefficients for the nonlinear (Burgers-type) cases.
//!
//! [`cases`] registers the seven experiment configurations the two halves
//! are exercised on; [`stencil`] holds the shared problem definitions.
//!
//! The crate is `no_std` (with `alloc`); file formats and the command-line
//! front end live in the companion `swr-cli` crate.

#![cfg_attr(not(test), no_std)]
// Validation sites use `!(x > 0.0)` so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod banded;
mod error;

pub mod cases;
pub mod optimize;
pub mod solve;
pub mod stencil;
pub mod symbol;

pub use error::{Error, Result};

pub use cases::case;
pub use optimize::{optimize_alpha, AlphaRoot, AlphaStarResult, OptimizationSetup};
pub use solve::{
    backward_euler_sweep, initial_iterate, interface_row, observed_rate, swr_solve,
    swr_solve_recording, InterfaceRow, IterationTrace, RecordedIterate, SolverConfig,
    SpaceTimeField,
};
pub use stencil::{
    nonlinear_stencil_coefficients, stencil_coefficients, AdrParameters, AdvectionLaw,
    CoupledProblem, InitialProfile, Side, StencilCoefficients, SubdomainGrid,
};
pub use symbol::{
    characteristic_roots, combined_convergence_check, contraction_factor, interface_mode_profile,
    optimized_rho, root_condition_holds, sample_surface, LaplacePoint, RootPair, Surface,
    TransmissionKind, TransmissionSpec,
};
