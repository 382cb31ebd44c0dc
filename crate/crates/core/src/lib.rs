//! Invariant idempotent (max-plus) measures of iterated function systems.
//!
//! Densities of idempotent measures and normal fuzzy sets are two readings of
//! the same object under a scale function `θ`. This crate iterates the
//! idempotent Markov operator of a max-plus normalized IFS or GIFS, measures
//! convergence with the Hausdorff-based metric `d_θ`, and renders the result.
//!
//! Module map:
//! - [`maxplus`]: densities, evaluation, pushforward, Markov step
//! - [`fuzzy`]: fuzzy sets, scale functions, Zadeh extension, Hutchinson step
//! - [`metric`]: Hausdorff distance, `d_f` and `d_θ`
//! - [`ifs`]: affine maps, systems, grids and discretized maps
//! - [`engine`]: deterministic, discrete and GIFS drivers
//! - [`io`]: config files, CSV, PGM and trace output

pub mod engine;
pub mod error;
pub mod fuzzy;
pub mod ifs;
pub mod io;
pub mod maxplus;
pub mod metric;
pub mod point;

pub use engine::{
    center_seed, deterministic_step, discrete_step, fixed_point_check, fixed_point_check_with, plan_iterations,
    run_deterministic, run_discrete, run_gifs, CombineRule, GridChoice, IterationTrace, RunKind,
    RunOptions, RunPlan,
};
pub use error::{Error, Result};
pub use fuzzy::{
    alpha_cut, hutchinson_step, hutchinson_step_tuples, theta_backward, theta_forward,
    zadeh_extension, FuzzyMap, GreyLevelMap, ScaleFunction, TNorm,
};
pub use ifs::{
    discretize_map, grey_maps, lipschitz_constant, AffineMap, DiscretizedMap, Grid,
    MaxPlusSystem, PointMap, QuantizedMap, TupleMap,
};
pub use maxplus::{eval_measure, markov_step, pushforward, support, AffineFunctional, DensityMap};
pub use metric::{dtheta_distance, dtheta_distance_by_levels, fuzzy_distance, hausdorff, PointSet};
pub use point::{Metric, Point};
