//! Finite-support idempotent (Maslov) measures.
//!
//! A measure is stored through its density `λ: X -> [-inf, 0]`; only points of
//! finite density are kept, so a missing key means `-inf`. The measure acts on
//! a test function by `μ(φ) = max_x λ(x) + φ(x)`.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::ifs::PointMap;
use crate::point::{Metric, Point};

pub(crate) type PointTable = FxHashMap<Point, f64>;

/// Density of a normalized idempotent measure with finite support.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMap {
    dim: usize,
    entries: PointTable,
}

impl DensityMap {
    /// Builds a density from `(point, λ)` pairs.
    ///
    /// `-inf` values are dropped, repeated points are merged by `max`. The
    /// result must have a nonempty support and maximum exactly `0`.
    pub fn new(dim: usize, entries: impl IntoIterator<Item = (Point, f64)>) -> Result<Self> {
        let mut table = PointTable::default();
        for (p, v) in entries {
            if p.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if v.is_nan() || v == f64::INFINITY {
                return Err(Error::InvalidMeasure(format!("density {v} at {p:?}")));
            }
            if v > 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "density {v} at {p:?} is above 0"
                )));
            }
            if v == f64::NEG_INFINITY {
                continue;
            }
            merge_max(&mut table, p, v + 0.0);
        }
        Self::from_table(dim, table)
    }

    pub fn dirac(p: Point) -> Self {
        let mut table = PointTable::default();
        table.insert(p, 0.0);
        DensityMap {
            dim: p.dim(),
            entries: table,
        }
    }

    pub(crate) fn from_table(dim: usize, entries: PointTable) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidMeasure("empty support".into()));
        }
        let max = entries.values().copied().fold(f64::NEG_INFINITY, f64::max);
        if max != 0.0 {
            return Err(Error::InvalidMeasure(format!(
                "maximum density is {max}, expected 0"
            )));
        }
        Ok(DensityMap { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `λ(p)`, or `-inf` off the support.
    pub fn get(&self, p: &Point) -> f64 {
        self.entries.get(p).copied().unwrap_or(f64::NEG_INFINITY)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.entries.contains_key(p)
    }

    /// Unordered iteration over `(point, λ)`.
    pub fn iter(&self) -> impl Iterator<Item = (&Point, f64)> + '_ {
        self.entries.iter().map(|(p, v)| (p, *v))
    }

    /// Entries in lexicographic point order.
    pub fn sorted_entries(&self) -> Vec<(Point, f64)> {
        let mut out: Vec<_> = self.entries.iter().map(|(p, v)| (*p, *v)).collect();
        out.sort_unstable_by_key(|e| e.0);
        out
    }

    /// Smallest finite density on the support.
    pub fn min_density(&self) -> f64 {
        self.entries.values().copied().fold(0.0, f64::min)
    }

    /// Distinct density values, in decreasing order (first is always 0).
    pub fn levels(&self) -> Vec<f64> {
        sorted_levels(self.entries.values().copied())
    }

    /// `{x : λ(x) >= beta}`.
    pub fn super_level_set(&self, beta: f64) -> Vec<Point> {
        self.entries
            .iter()
            .filter(|(_, v)| **v >= beta)
            .map(|(p, _)| *p)
            .collect()
    }

    pub(crate) fn table(&self) -> &PointTable {
        &self.entries
    }
}

pub(crate) fn merge_max(table: &mut PointTable, p: Point, v: f64) {
    table
        .entry(p)
        .and_modify(|cur| {
            if v > *cur {
                *cur = v;
            }
        })
        .or_insert(v);
}

pub(crate) fn merge_tables(mut a: PointTable, b: PointTable) -> PointTable {
    let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, std::mem::take(&mut a)) };
    for (p, v) in small {
        merge_max(&mut big, p, v);
    }
    big
}

pub(crate) fn sorted_levels(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut levels: Vec<f64> = values.collect();
    levels.sort_unstable_by(|a, b| b.total_cmp(a));
    levels.dedup();
    levels
}

/// Affine test function `φ(x) = c·x + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFunctional {
    pub coeffs: Vec<f64>,
    pub offset: f64,
}

impl AffineFunctional {
    pub fn new(coeffs: Vec<f64>, offset: f64) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().chain([&offset]).any(|c| !c.is_finite()) {
            return Err(Error::Domain(
                "functional needs at least one finite coefficient".into(),
            ));
        }
        Ok(AffineFunctional { coeffs, offset })
    }

    pub fn eval(&self, p: &Point) -> f64 {
        self.coeffs
            .iter()
            .zip(p.coords())
            .map(|(c, x)| c * x)
            .sum::<f64>()
            + self.offset
    }

    /// Lipschitz constant with respect to `metric` (the dual norm of `c`).
    pub fn lipschitz(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Euclidean => self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt(),
            Metric::Chebyshev => self.coeffs.iter().map(|c| c.abs()).sum(),
        }
    }
}

/// `μ(φ) = max_x λ(x) + φ(x)`.
pub fn eval_measure(mu: &DensityMap, phi: &AffineFunctional) -> Result<f64> {
    if mu.is_empty() {
        return Err(Error::InvalidMeasure("empty support".into()));
    }
    if phi.coeffs.len() != mu.dim() {
        return Err(Error::Dimension {
            expected: mu.dim(),
            found: phi.coeffs.len(),
        });
    }
    Ok(mu
        .iter()
        .map(|(p, v)| v + phi.eval(p))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Image measure `I(φ)(μ)`: `λ_φ(y) = max{λ(x) : φ(x) = y}`.
pub fn pushforward<M: PointMap + ?Sized>(mu: &DensityMap, phi: &M) -> DensityMap {
    let mut table = PointTable::default();
    table.reserve(mu.len());
    for (p, v) in mu.iter() {
        merge_max(&mut table, phi.apply(p), v);
    }
    let dim = table.keys().next().map(Point::dim).unwrap_or(mu.dim());
    DensityMap {
        dim,
        entries: table,
    }
}

/// Checks `q_j <= 0` with `max_j q_j = 0`.
pub fn validate_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidSystem("no weights".into()));
    }
    if let Some(q) = weights.iter().find(|q| !q.is_finite() || **q > 0.0) {
        return Err(Error::InvalidSystem(format!(
            "weight {q} is not a finite value <= 0"
        )));
    }
    let max = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max != 0.0 {
        return Err(Error::InvalidSystem(format!(
            "weights are not normalized: max q_j = {max}, expected 0"
        )));
    }
    Ok(())
}

/// One step of the idempotent Markov operator,
/// `λ'(y) = max{q_j + λ(x) : φ_j(x) = y}`.
pub fn markov_step<M: PointMap + Sync>(
    mu: &DensityMap,
    weights: &[f64],
    maps: &[M],
) -> Result<DensityMap> {
    validate_weights(weights)?;
    if weights.len() != maps.len() {
        return Err(Error::InvalidSystem(format!(
            "{} weights for {} maps",
            weights.len(),
            maps.len()
        )));
    }
    let entries: Vec<(Point, f64)> = mu.iter().map(|(p, v)| (*p, v)).collect();
    let table = entries
        .par_iter()
        .fold(PointTable::default, |mut acc, (p, v)| {
            for (map, q) in maps.iter().zip(weights) {
                merge_max(&mut acc, map.apply(p), q + v);
            }
            acc
        })
        .reduce(PointTable::default, merge_tables);
    let dim = table.keys().next().map(Point::dim).unwrap_or(mu.dim());
    DensityMap::from_table(dim, table)
}

/// The support, in lexicographic order.
pub fn support(mu: &DensityMap) -> Vec<Point> {
    let mut pts: Vec<Point> = mu.table().keys().copied().collect();
    pts.sort_unstable();
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::AffineMap;

    fn p(x: f64) -> Point {
        Point::new(&[x])
    }

    fn dm(entries: &[(f64, f64)]) -> DensityMap {
        DensityMap::new(1, entries.iter().map(|&(x, v)| (p(x), v))).unwrap()
    }

    fn x_fn() -> AffineFunctional {
        AffineFunctional::new(vec![1.0], 0.0).unwrap()
    }

    #[test]
    fn dirac_evaluates_at_its_point() {
        let phi = AffineFunctional::new(vec![3.0], -2.0).unwrap();
        assert_eq!(eval_measure(&DensityMap::dirac(p(0.5)), &phi).unwrap(), -0.5);
    }

    #[test]
    fn eval_enumerates_support() {
        assert_eq!(eval_measure(&dm(&[(0.0, 0.0), (0.5, -1.0)]), &x_fn()).unwrap(), 0.0);
    }

    #[test]
    fn eval_shifts_with_constant() {
        let mu = dm(&[(0.0, 0.0), (0.5, -0.25), (1.0, -3.0)]);
        let base = eval_measure(&mu, &x_fn()).unwrap();
        let shifted = AffineFunctional::new(vec![1.0], 2.5).unwrap();
        assert_eq!(eval_measure(&mu, &shifted).unwrap(), base + 2.5);
    }

    #[test]
    fn rejects_unnormalized_and_empty() {
        assert!(DensityMap::new(1, [(p(0.0), -1.0)]).is_err());
        assert!(DensityMap::new(1, [(p(0.0), 0.5)]).is_err());
        assert!(DensityMap::new(1, std::iter::empty()).is_err());
        assert!(DensityMap::new(1, [(p(0.0), 0.0), (p(1.0), f64::NAN)]).is_err());
    }

    #[test]
    fn neg_infinity_entries_are_dropped() {
        let mu = DensityMap::new(1, [(p(0.0), 0.0), (p(1.0), f64::NEG_INFINITY)]).unwrap();
        assert_eq!(mu.len(), 1);
        assert_eq!(mu.get(&p(1.0)), f64::NEG_INFINITY);
    }

    #[test]
    fn pushforward_identity_and_constant() {
        let mu = dm(&[(0.0, 0.0), (1.0, -2.0)]);
        let id = |x: &Point| *x;
        assert_eq!(pushforward(&mu, &id), mu);
        let to_zero = |_: &Point| p(0.0);
        assert_eq!(pushforward(&mu, &to_zero), dm(&[(0.0, 0.0)]));
    }

    #[test]
    fn cantor_markov_step_from_dirac() {
        let maps = [
            AffineMap::new(1, 1, vec![1.0 / 3.0], vec![0.0]).unwrap(),
            AffineMap::new(1, 1, vec![1.0 / 3.0], vec![2.0 / 3.0]).unwrap(),
        ];
        let out = markov_step(&DensityMap::dirac(p(0.5)), &[0.0, -1.0], &maps).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out.get(&p(0.5 / 3.0)), 0.0);
        assert_eq!(out.get(&p(0.5 / 3.0 + 2.0 / 3.0)), -1.0);
    }

    #[test]
    fn markov_single_map_is_pushforward() {
        let mu = dm(&[(0.0, 0.0), (0.3, -1.5), (0.9, -0.5)]);
        let maps = [AffineMap::new(1, 1, vec![0.5], vec![0.1]).unwrap()];
        assert_eq!(markov_step(&mu, &[0.0], &maps).unwrap(), pushforward(&mu, &maps[0]));
    }

    #[test]
    fn markov_rejects_bad_weights() {
        let mu = dm(&[(0.0, 0.0)]);
        let maps = [AffineMap::identity(1), AffineMap::identity(1)];
        assert!(matches!(
            markov_step(&mu, &[-0.5, -1.0], &maps),
            Err(Error::InvalidSystem(_))
        ));
        assert!(markov_step(&mu, &[0.0, 0.5], &maps).is_err());
    }

    #[test]
    fn support_is_key_set() {
        assert_eq!(support(&dm(&[(1.0, -3.0), (0.0, 0.0)])), vec![p(0.0), p(1.0)]);
    }
}
