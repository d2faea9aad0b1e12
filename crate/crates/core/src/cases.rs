//! Registry of the seven experiment cases.
//!
//! Cases 1-2 couple linear equations on `[-1, 1]` over `t in [0, 5]` with
//! interfaces at `x1 = -0.15`, `x2 = -0.2`. Cases 3-7 couple nonlinear
//! equations over `t in [0, 1]` with interfaces at `x1 = -0.45`,
//! `x2 = -0.5`. All cases share `dx = dt = 0.05`, the initial profile
//! `-sin(pi x)`, and homogeneous outer boundary values.

use crate::error::{Error, Result};
use crate::stencil::{AdrParameters, AdvectionLaw, CoupledProblem, InitialProfile};

/// Ids accepted by [`case`].
pub const CASE_IDS: core::ops::RangeInclusive<u32> = 1..=7;

/// Build the fully-populated coupled problem for one registered case.
pub fn case(id: u32) -> Result<CoupledProblem> {
    let (left, right, horizon, x1, x2) = match id {
        1 => (
            AdrParameters::linear(1.5, 0.1, 0.0)?,
            AdrParameters::linear(1.0, 0.1, 0.0)?,
            5.0,
            -0.15,
            -0.2,
        ),
        2 => (
            AdrParameters::linear(0.2, 0.4, 1.0)?,
            AdrParameters::linear(0.4, 0.2, 2.0)?,
            5.0,
            -0.15,
            -0.2,
        ),
        3 => (
            AdrParameters::nonlinear(AdvectionLaw::Identity, 0.4, 1.0, 0)?,
            AdrParameters::nonlinear(AdvectionLaw::Identity, 0.2, 2.0, 0)?,
            1.0,
            -0.45,
            -0.5,
        ),
        4 => (
            AdrParameters::nonlinear(AdvectionLaw::Square, 0.4, 1.0, 0)?,
            AdrParameters::nonlinear(AdvectionLaw::Square, 0.2, 2.0, 0)?,
            1.0,
            -0.45,
            -0.5,
        ),
        5 => (
            AdrParameters::nonlinear(AdvectionLaw::SinePi, 0.4, 1.0, 0)?,
            AdrParameters::nonlinear(AdvectionLaw::SinePi, 0.2, 2.0, 0)?,
            1.0,
            -0.45,
            -0.5,
        ),
        6 => (
            AdrParameters::nonlinear(AdvectionLaw::Identity, 0.4, 1.0, 1)?,
            AdrParameters::nonlinear(AdvectionLaw::Identity, 0.2, 2.0, 1)?,
            1.0,
            -0.45,
            -0.5,
        ),
        7 => (
            AdrParameters::nonlinear(AdvectionLaw::Identity, 0.04, 0.0, 0)?,
            AdrParameters::nonlinear(AdvectionLaw::Identity, 0.02, 0.0, 0)?,
            1.0,
            -0.45,
            -0.5,
        ),
        other => return Err(Error::UnknownCase(other)),
    };
    CoupledProblem::new(
        left,
        right,
        (-1.0, 1.0),
        x1,
        x2,
        InitialProfile::NegSinPi,
        horizon,
        0.05,
        0.05,
        (0.0, 0.0),
    )
}
