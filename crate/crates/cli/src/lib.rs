//! Support library for the `swr` binary: the JSON case registry and the
//! CSV/JSON emitters.

pub mod emit;
pub mod registry;
