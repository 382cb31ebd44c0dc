//! Iteration of the idempotent Markov operator.
//!
//! Three drivers share one sweep shape: every support point (or every
//! `m`-tuple of support points for a GIFS) is pushed through every map and the
//! candidate densities `q_j + ν(x)` are merged by `max` at the image. Because
//! `max` is associative, commutative and idempotent the merge order, and so
//! the thread count, never changes the result.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::ifs::{discretize_map, DiscretizedMap, Grid, MaxPlusSystem, PointMap, QuantizedMap};
use crate::maxplus::{merge_max, merge_tables, DensityMap, PointTable};
use crate::metric::dtheta_distance;
use crate::point::{Metric, Point};

/// How a GIFS turns the densities of a tuple into one density.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CombineRule {
    /// `min_i ν(x_i)`; the min t-norm under any scale function.
    #[default]
    Min,
    /// `Σ_i ν(x_i)`; the product t-norm under an exponential scale.
    Sum,
}

impl CombineRule {
    pub fn combine(self, values: impl Iterator<Item = f64>) -> f64 {
        match self {
            CombineRule::Min => values.fold(0.0, f64::min),
            CombineRule::Sum => values.sum(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CombineRule::Min => "min",
            CombineRule::Sum => "sum",
        }
    }
}

impl std::str::FromStr for CombineRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(CombineRule::Min),
            "sum" => Ok(CombineRule::Sum),
            other => Err(Error::Parse(format!("unknown combine rule `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    /// Decimal digits kept by the deterministic driver for point identity.
    pub digits: u32,
    /// Largest support the deterministic driver may produce.
    pub support_cap: usize,
    /// Largest total number of tuple-map evaluations in one GIFS run.
    pub tuple_cap: u64,
    /// Record `d_θ` between successive iterates.
    pub track_residuals: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            digits: 12,
            support_cap: 1 << 24,
            tuple_cap: 1 << 32,
            track_residuals: false,
        }
    }
}

/// Which kind of grid, if any, the plan should use.
#[derive(Clone, Debug, PartialEq)]
pub enum GridChoice {
    /// Maps applied exactly (`ε = 0`).
    Exact,
    /// A grid fixed by the caller.
    Fixed(Grid),
    /// Let the planner pick the coarsest uniform grid on this box.
    Free { lower: Vec<f64>, upper: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunPlan {
    pub delta: f64,
    pub grid: Option<Grid>,
    pub iterations: usize,
    pub alpha: f64,
    pub diameter: f64,
    pub rule: CombineRule,
}

impl RunPlan {
    pub fn epsilon(&self) -> f64 {
        self.grid.as_ref().map(Grid::epsilon).unwrap_or(0.0)
    }

    /// `ε/(1-α) + α^N·D`, the guaranteed resolution of the plan.
    pub fn error_bound(&self) -> f64 {
        error_bound(self.epsilon(), self.alpha, self.iterations, self.diameter)
    }
}

pub fn error_bound(epsilon: f64, alpha: f64, n: usize, diameter: f64) -> f64 {
    epsilon / (1.0 - alpha) + alpha.powi(n as i32) * diameter
}

const MAX_PLANNED_ITERATIONS: usize = 1_000_000;

fn smallest_n(alpha: f64, diameter: f64, budget: f64) -> Result<usize> {
    (1..=MAX_PLANNED_ITERATIONS)
        .find(|&n| alpha.powi(n as i32) * diameter < budget)
        .ok_or_else(|| Error::Infeasible(format!("no N up to {MAX_PLANNED_ITERATIONS} fits")))
}

/// Chooses `N` (and a grid, when free) so that `ε/(1-α) + α^N·D < δ`.
pub fn plan_iterations(delta: f64, alpha: f64, diameter: f64, grid: GridChoice) -> Result<RunPlan> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("contraction factor {alpha} outside (0, 1)")));
    }
    if !(delta > 0.0 && delta.is_finite()) || !(diameter >= 0.0 && diameter.is_finite()) {
        return Err(Error::Domain("delta must be > 0 and D >= 0".into()));
    }
    let free = matches!(grid, GridChoice::Free { .. });
    let grid = match grid {
        GridChoice::Exact => None,
        GridChoice::Fixed(g) => Some(g),
        GridChoice::Free { lower, upper } => {
            let diag = lower
                .iter()
                .zip(&upper)
                .map(|(l, u)| (u - l).powi(2))
                .sum::<f64>()
                .sqrt();
            // ε = diag / (2n) <= (δ/2)(1-α)
            let cells = (diag / (delta * (1.0 - alpha))).ceil().max(2.0);
            if cells > u32::MAX as f64 {
                return Err(Error::Infeasible(format!("grid with {cells} cells per axis")));
            }
            Some(Grid::uniform(&lower, &upper, cells as usize)?)
        }
    };
    let eps = grid.as_ref().map(Grid::epsilon).unwrap_or(0.0);
    let floor = eps / (1.0 - alpha);
    if floor >= delta {
        return Err(Error::Infeasible(format!(
            "grid term ε/(1-α) = {floor} is not below δ = {delta}"
        )));
    }
    // a free grid spends half the budget on ε, the other half on α^N·D
    let budget = if free { delta / 2.0 } else { delta - floor };
    let iterations = smallest_n(alpha, diameter, budget)?;
    Ok(RunPlan {
        delta,
        grid,
        iterations,
        alpha,
        diameter,
        rule: CombineRule::Min,
    })
}

/// What produced a trace; enough to repeat one more step of the same kind.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RunKind {
    Deterministic { digits: u32 },
    Discrete,
    Gifs { rule: CombineRule },
}

#[derive(Clone, Debug)]
pub struct IterationTrace {
    pub kind: RunKind,
    /// Support size after each iteration.
    pub cardinalities: Vec<usize>,
    /// `d_θ(previous, current)` per iteration, when tracked.
    pub residuals: Vec<Option<f64>>,
    /// Map evaluations whose image had to be clamped into the box.
    pub clamped: Vec<usize>,
    pub final_density: DensityMap,
}

impl IterationTrace {
    fn start(kind: RunKind, seed: &DensityMap) -> Self {
        IterationTrace {
            kind,
            cardinalities: Vec::new(),
            residuals: Vec::new(),
            clamped: Vec::new(),
            final_density: seed.clone(),
        }
    }

    pub fn iterations(&self) -> usize {
        self.cardinalities.len()
    }

    pub fn total_clamped(&self) -> usize {
        self.clamped.iter().sum()
    }

    fn record(&mut self, next: DensityMap, clamped: usize, track: bool) -> Result<()> {
        let residual = if track {
            Some(dtheta_distance(&self.final_density, &next, Metric::Euclidean)?)
        } else {
            None
        };
        self.cardinalities.push(next.len());
        self.residuals.push(residual);
        self.clamped.push(clamped);
        self.final_density = next;
        Ok(())
    }
}

fn check_dims(sys: &MaxPlusSystem, seed: &DensityMap) -> Result<()> {
    if seed.dim() != sys.dim() {
        return Err(Error::Dimension {
            expected: sys.dim(),
            found: seed.dim(),
        });
    }
    Ok(())
}

/// One step with exact maps, images rounded to `digits` decimals.
pub fn deterministic_step(
    mu: &DensityMap,
    sys: &MaxPlusSystem,
    digits: u32,
    support_cap: usize,
) -> Result<DensityMap> {
    if sys.arity() != 1 {
        return Err(Error::InvalidSystem("deterministic driver needs arity 1".into()));
    }
    check_dims(sys, mu)?;
    let maps: Vec<QuantizedMap> = sys
        .maps()
        .iter()
        .map(|m| QuantizedMap {
            map: m.clone(),
            digits,
        })
        .collect();
    let entries: Vec<(Point, f64)> = mu.iter().map(|(p, v)| (*p, v)).collect();
    let over_cap = || Error::Resource(format!("support exceeds the cap of {support_cap} points"));
    let table = entries
        .par_iter()
        .try_fold(PointTable::default, |mut acc, (p, v)| {
            for (map, q) in maps.iter().zip(sys.weights()) {
                merge_max(&mut acc, map.apply(p), q + v);
            }
            if acc.len() > support_cap {
                return Err(over_cap());
            }
            Ok(acc)
        })
        .try_reduce(PointTable::default, |a, b| {
            let merged = merge_tables(a, b);
            if merged.len() > support_cap {
                return Err(over_cap());
            }
            Ok(merged)
        })?;
    DensityMap::from_table(sys.dim(), table)
}

/// Deterministic algorithm: `n` Markov steps with exact maps. Points are
/// identified after rounding to `opts.digits` decimals.
pub fn run_deterministic(
    sys: &MaxPlusSystem,
    seed: &DensityMap,
    n: usize,
    opts: &RunOptions,
) -> Result<IterationTrace> {
    check_dims(sys, seed)?;
    let mut trace = IterationTrace::start(RunKind::Deterministic { digits: opts.digits }, seed);
    for _ in 0..n {
        let next = deterministic_step(&trace.final_density, sys, opts.digits, opts.support_cap)?;
        trace.record(next, 0, opts.track_residuals)?;
    }
    Ok(trace)
}

type NodeTable = FxHashMap<usize, f64>;

fn node_support(mu: &DensityMap, grid: &Grid) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::with_capacity(mu.len());
    for (p, v) in mu.iter() {
        let i = grid
            .node_index(p)
            .ok_or_else(|| Error::Domain(format!("seed point {p:?} is not a grid node")))?;
        out.push((i, v));
    }
    out.sort_unstable_by_key(|e| e.0);
    Ok(out)
}

fn to_density(grid: &Grid, table: NodeTable) -> Result<DensityMap> {
    let entries: PointTable = table.into_iter().map(|(i, v)| (grid.node(i), v)).collect();
    DensityMap::from_table(grid.dim(), entries)
}

/// One sweep over all `m`-tuples of support nodes. Returns the next density
/// on node indices and the number of clamped images.
fn tuple_sweep(
    support: &[(usize, f64)],
    maps: &[DiscretizedMap],
    weights: &[f64],
    arity: usize,
    rule: CombineRule,
) -> (NodeTable, usize) {
    let n = support.len();
    let total = n.pow(arity as u32);
    let grid = maps[0].grid();
    let points: Vec<Point> = support.iter().map(|&(i, _)| grid.node(i)).collect();
    let merge = |mut a: (NodeTable, usize), b: (NodeTable, usize)| {
        let (mut big, small) = if a.0.len() >= b.0.len() {
            (std::mem::take(&mut a.0), b.0)
        } else {
            (b.0, std::mem::take(&mut a.0))
        };
        for (k, v) in small {
            merge_node(&mut big, k, v);
        }
        (big, a.1 + b.1)
    };
    (0..total)
        .into_par_iter()
        .fold(
            || (NodeTable::default(), 0usize),
            |(mut acc, mut clamped), t| {
                let mut rest = t;
                let mut pts = [points[0]; MAX_ARITY];
                let mut dens = [0f64; MAX_ARITY];
                for k in 0..arity {
                    let i = rest % n;
                    rest /= n;
                    pts[k] = points[i];
                    dens[k] = support[i].1;
                }
                let nu = rule.combine(dens[..arity].iter().copied());
                for (map, q) in maps.iter().zip(weights) {
                    let (y, c) = map.apply_points(&pts[..arity]);
                    clamped += c as usize;
                    merge_node(&mut acc, y, q + nu);
                }
                (acc, clamped)
            },
        )
        .reduce(|| (NodeTable::default(), 0), merge)
}

fn merge_node(table: &mut NodeTable, k: usize, v: f64) {
    table
        .entry(k)
        .and_modify(|cur| {
            if v > *cur {
                *cur = v;
            }
        })
        .or_insert(v);
}

const MAX_ARITY: usize = 8;

fn discretized(sys: &MaxPlusSystem, grid: &Grid) -> Result<Vec<DiscretizedMap>> {
    if sys.arity() > MAX_ARITY {
        return Err(Error::InvalidSystem(format!("arity above {MAX_ARITY}")));
    }
    sys.maps().iter().map(|m| discretize_map(m, grid)).collect()
}

/// One discretized Markov step on grid nodes (`rule` only matters for GIFS).
pub fn discrete_step(
    mu: &DensityMap,
    sys: &MaxPlusSystem,
    grid: &Grid,
    rule: CombineRule,
) -> Result<DensityMap> {
    check_dims(sys, mu)?;
    let maps = discretized(sys, grid)?;
    let support = node_support(mu, grid)?;
    let (table, _) = tuple_sweep(&support, &maps, sys.weights(), sys.arity(), rule);
    to_density(grid, table)
}

/// The node nearest the box center, as a Dirac density.
pub fn center_seed(grid: &Grid) -> DensityMap {
    let center: Vec<f64> = (0..grid.dim())
        .map(|a| 0.5 * (grid.lower(a) + grid.upper(a)))
        .collect();
    DensityMap::dirac(grid.project(&Point::new(&center)))
}

fn run_on_grid(
    sys: &MaxPlusSystem,
    grid: &Grid,
    seed: &DensityMap,
    n: usize,
    rule: CombineRule,
    kind: RunKind,
    opts: &RunOptions,
) -> Result<IterationTrace> {
    check_dims(sys, seed)?;
    let maps = discretized(sys, grid)?;
    let mut support = node_support(seed, grid)?;
    let mut trace = IterationTrace::start(kind, seed);
    let mut evaluations: u64 = 0;
    for _ in 0..n {
        if sys.arity() > 1 {
            let tuples = (support.len() as u64)
                .checked_pow(sys.arity() as u32)
                .and_then(|t| t.checked_mul(sys.len() as u64))
                .unwrap_or(u64::MAX);
            evaluations = evaluations.saturating_add(tuples);
            if evaluations > opts.tuple_cap {
                return Err(Error::Resource(format!(
                    "GIFS run needs more than {} tuple-map evaluations",
                    opts.tuple_cap
                )));
            }
        }
        let (table, clamped) = tuple_sweep(&support, &maps, sys.weights(), sys.arity(), rule);
        support = table.iter().map(|(&i, &v)| (i, v)).collect();
        support.sort_unstable_by_key(|e| e.0);
        trace.record(to_density(grid, table)?, clamped, opts.track_residuals)?;
    }
    Ok(trace)
}

/// Discrete algorithm: `n` Markov steps with the grid-discretized maps.
pub fn run_discrete(
    sys: &MaxPlusSystem,
    grid: &Grid,
    seed: &DensityMap,
    n: usize,
    opts: &RunOptions,
) -> Result<IterationTrace> {
    if sys.arity() != 1 {
        return Err(Error::InvalidSystem("discrete driver needs arity 1".into()));
    }
    run_on_grid(sys, grid, seed, n, CombineRule::Min, RunKind::Discrete, opts)
}

/// Discrete GIFS algorithm: each sweep visits every `m`-tuple of support
/// nodes and contributes `q_j + combine(ν(x_1), ..., ν(x_m))` at
/// `φ̂_j(x_1, ..., x_m)`.
pub fn run_gifs(
    sys: &MaxPlusSystem,
    grid: &Grid,
    seed: &DensityMap,
    n: usize,
    rule: CombineRule,
    opts: &RunOptions,
) -> Result<IterationTrace> {
    if sys.arity() < 2 {
        return Err(Error::InvalidSystem("GIFS driver needs arity >= 2".into()));
    }
    run_on_grid(sys, grid, seed, n, rule, RunKind::Gifs { rule }, opts)
}

/// `d_θ(final, M(final))` with the same kind of step that produced the trace.
pub fn fixed_point_check(trace: &IterationTrace, sys: &MaxPlusSystem, grid: Option<&Grid>) -> Result<f64> {
    fixed_point_check_with(trace, sys, grid, &RunOptions::default())
}

/// [`fixed_point_check`] under the support and tuple caps of `opts`.
pub fn fixed_point_check_with(
    trace: &IterationTrace,
    sys: &MaxPlusSystem,
    grid: Option<&Grid>,
    opts: &RunOptions,
) -> Result<f64> {
    let last = &trace.final_density;
    let next = match (trace.kind, grid) {
        (RunKind::Deterministic { digits }, _) => deterministic_step(last, sys, digits, opts.support_cap)?,
        (RunKind::Discrete, Some(g)) => discrete_step(last, sys, g, CombineRule::Min)?,
        (RunKind::Gifs { rule }, Some(g)) => {
            let tuples = (last.len() as u64)
                .checked_pow(sys.arity() as u32)
                .and_then(|t| t.checked_mul(sys.len() as u64))
                .unwrap_or(u64::MAX);
            if tuples > opts.tuple_cap {
                return Err(Error::Resource(format!(
                    "residual step needs {tuples} tuple-map evaluations, cap is {}",
                    opts.tuple_cap
                )));
            }
            discrete_step(last, sys, g, rule)?
        }
        (_, None) => return Err(Error::Domain("a grid run needs its grid for the residual".into())),
    };
    dtheta_distance(last, &next, Metric::Euclidean)
}
