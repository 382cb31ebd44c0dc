//! Runs a validated config through the matching engine driver.

use crate::engine::{fixed_point_check_with, run_deterministic, run_discrete, run_gifs, IterationTrace};
use crate::error::Result;
use crate::ifs::{Grid, MaxPlusSystem};
use crate::io::config::{Algorithm, RunConfig};

#[derive(Debug)]
pub struct RunOutcome {
    pub system: MaxPlusSystem,
    pub grid: Option<Grid>,
    pub iterations: usize,
    pub trace: IterationTrace,
    /// `d_θ(final, M(final))`, when requested. The extra step obeys the
    /// run's caps; hitting one leaves the error here instead of failing
    /// the run.
    pub residual: Option<Result<f64>>,
}

impl RunOutcome {
    pub fn epsilon(&self) -> f64 {
        self.grid.as_ref().map(Grid::epsilon).unwrap_or(0.0)
    }
}

/// Runs `cfg`; the fixed-point residual costs one more step and is only
/// computed when `with_residual` is set.
pub fn execute(cfg: &RunConfig, with_residual: bool) -> Result<RunOutcome> {
    cfg.validate()?;
    let system = cfg.system()?;
    let grid = cfg.grid()?;
    let seed = cfg.seed_density()?;
    let iterations = cfg.iterations()?;
    let opts = cfg.options();
    let trace = match (cfg.run.algorithm, &grid) {
        (Algorithm::Determin, _) => run_deterministic(&system, &seed, iterations, &opts)?,
        (Algorithm::Discrete, Some(g)) => run_discrete(&system, g, &seed, iterations, &opts)?,
        (Algorithm::Gifs, Some(g)) => run_gifs(&system, g, &seed, iterations, cfg.combine(), &opts)?,
        (_, None) => unreachable!("validated grid runs always have a grid"),
    };
    let residual = if with_residual {
        Some(fixed_point_check_with(&trace, &system, grid.as_ref(), &opts))
    } else {
        None
    };
    Ok(RunOutcome {
        system,
        grid,
        iterations,
        trace,
        residual,
    })
}
