//! Biased medians, local sharp maximal functions, dyadic cube decompositions,
//! and median-oscillation moduli for functions sampled on cubes.
//!
//! The crate works with functions given by one value per cell of a uniform
//! grid over an axis-parallel cube. Treating the function as constant on each
//! cell makes every counting identity exact, so the inequalities relating
//! medians, rearrangements, oscillations, and decompositions can be tested as
//! exact properties rather than approximations.
//!
//! Module map:
//!
//! * [`grid`]: sampled functions, cube regions, dyadic subdivision, cube
//!   family enumeration;
//! * [`median`]: maximal medians with a bias parameter, rearrangements, and
//!   the best-constant oscillation window rule;
//! * [`sharp`]: the per-cell local sharp maximal field over a cube family;
//! * [`decompose`]: the recursive cube decomposition driven by medians and
//!   the sharp field, its two-threshold refinement, and the generational
//!   tail cascade;
//! * [`oscillation`]: two-cube oscillation functionals and the continuity
//!   profile they induce;
//! * [`bmo`]: oscillation moduli, norms against a growth modulus, the
//!   integral transform shaping exponential tail bounds, and tail
//!   measurement with curve fitting;
//! * [`io`]: the field file format and a CSV alternative for 1D data;
//! * [`corpus`]: deterministic test-field generators;
//! * [`props`]: seeded randomized property suites, runnable from the CLI.

pub mod bmo;
pub mod corpus;
pub mod decompose;
pub mod error;
pub mod grid;
pub mod io;
pub mod median;
pub mod oscillation;
pub mod props;
pub mod sharp;

pub use error::{Error, Result};
pub use grid::{
    count_cubes, enumerate_cubes, CubeFamily, CubeRegion, DyadicCube, SampledFunction,
};
pub use median::{
    best_constant_oscillation, maximal_median, median_convergence_profile,
    median_rearrangement_identity, oscillation_about_median, rearrangement_value,
    OscillationValue, WeightedSamples,
};
