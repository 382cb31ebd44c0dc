//! Finite-support fuzzy sets and the scale-function bijection with densities.
//!
//! A scale function `θ: [-inf, 0] -> [0, 1]` turns a density `λ` into the
//! membership function `θ∘λ`. Support, normality and the max-based operators
//! all survive the change of scale, so the idempotent Markov operator of a
//! max-plus system is the fuzzy Hutchinson operator of its grey-level system
//! read through `θ`.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::ifs::{PointMap, TupleMap};
use crate::maxplus::{sorted_levels, DensityMap, PointTable};
use crate::point::Point;

/// Membership function of a normal fuzzy set with finite support.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyMap {
    dim: usize,
    entries: FxHashMap<Point, f64>,
}

impl FuzzyMap {
    /// Zero memberships are dropped, repeated points merged by `max`. The
    /// result must be nonempty with some membership exactly `1`.
    pub fn new(dim: usize, entries: impl IntoIterator<Item = (Point, f64)>) -> Result<Self> {
        let mut table = FxHashMap::default();
        for (p, u) in entries {
            if p.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if !(0.0..=1.0).contains(&u) {
                return Err(Error::InvalidFuzzySet(format!(
                    "membership {u} at {p:?} outside [0, 1]"
                )));
            }
            if u == 0.0 {
                continue;
            }
            merge(&mut table, p, u);
        }
        Self::from_table(dim, table)
    }

    fn from_table(dim: usize, entries: FxHashMap<Point, f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidFuzzySet("empty support".into()));
        }
        if !entries.values().any(|&u| u == 1.0) {
            return Err(Error::InvalidFuzzySet("not normal: no membership equals 1".into()));
        }
        Ok(FuzzyMap { dim, entries })
    }

    pub fn crisp(p: Point) -> Self {
        let mut entries = FxHashMap::default();
        entries.insert(p, 1.0);
        FuzzyMap { dim: p.dim(), entries }
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

    /// `u(p)`, `0` off the support.
    pub fn get(&self, p: &Point) -> f64 {
        self.entries.get(p).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, f64)> + '_ {
        self.entries.iter().map(|(p, u)| (p, *u))
    }

    pub fn sorted_entries(&self) -> Vec<(Point, f64)> {
        let mut out: Vec<_> = self.entries.iter().map(|(p, u)| (*p, *u)).collect();
        out.sort_unstable_by_key(|e| e.0);
        out
    }

    /// Distinct membership values, decreasing (first is always 1).
    pub fn levels(&self) -> Vec<f64> {
        sorted_levels(self.entries.values().copied())
    }
}

fn merge(table: &mut FxHashMap<Point, f64>, p: Point, u: f64) {
    table
        .entry(p)
        .and_modify(|cur| {
            if u > *cur {
                *cur = u;
            }
        })
        .or_insert(u);
}

/// Exponential scale function `θ(t) = a^t` with `θ(-inf) = 0`.
///
/// Other increasing homeomorphisms `[-inf, 0] -> [0, 1]` would work just as
/// well; the exponential family is the only one built in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaleFunction {
    base: f64,
    ln_base: f64,
}

impl Default for ScaleFunction {
    fn default() -> Self {
        ScaleFunction::exponential(1.1).expect("1.1 > 1")
    }
}

impl ScaleFunction {
    pub fn exponential(base: f64) -> Result<Self> {
        if !(base.is_finite() && base > 1.0) {
            return Err(Error::Domain(format!("scale base {base} must be > 1")));
        }
        Ok(ScaleFunction {
            base,
            ln_base: base.ln(),
        })
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t == f64::NEG_INFINITY {
            0.0
        } else {
            self.base.powf(t)
        }
    }

    pub fn inverse(&self, s: f64) -> f64 {
        if s == 0.0 {
            f64::NEG_INFINITY
        } else if s == 1.0 {
            0.0
        } else {
            s.ln() / self.ln_base
        }
    }
}

/// Grey-level map `d(t) = θ(q + θ⁻¹(t))` for a weight `q <= 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreyLevelMap {
    weight: f64,
    theta: ScaleFunction,
}

impl GreyLevelMap {
    pub fn new(weight: f64, theta: ScaleFunction) -> Result<Self> {
        if !(weight.is_finite() && weight <= 0.0) {
            return Err(Error::InvalidSystem(format!(
                "grey-level weight {weight} must be finite and <= 0"
            )));
        }
        Ok(GreyLevelMap {
            weight: weight + 0.0,
            theta,
        })
    }

    pub fn identity(theta: ScaleFunction) -> Self {
        GreyLevelMap { weight: 0.0, theta }
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn eval(&self, t: f64) -> f64 {
        if self.weight == 0.0 {
            return t;
        }
        self.theta.eval(self.weight + self.theta.inverse(t))
    }
}

/// Admissibility of a grey-level system: every `d_j` nondecreasing with
/// `d_j(0) = 0`, and `d_j(1) = 1` for some `j`.
///
/// Monotonicity and right continuity hold by construction; they are
/// re-checked on a sample of levels.
pub fn is_admissible(greys: &[GreyLevelMap]) -> bool {
    let samples: Vec<f64> = (0..=64).map(|k| k as f64 / 64.0).collect();
    let monotone = greys
        .iter()
        .all(|d| samples.windows(2).all(|w| d.eval(w[0]) <= d.eval(w[1])));
    let zero = greys.iter().all(|d| d.eval(0.0) == 0.0);
    let one = greys.iter().any(|d| d.eval(1.0) == 1.0);
    !greys.is_empty() && monotone && zero && one
}

/// `Θ(μ) = θ∘λ_μ`.
pub fn theta_forward(mu: &DensityMap, theta: ScaleFunction) -> FuzzyMap {
    let entries = mu.iter().map(|(p, v)| (*p, theta.eval(v))).collect();
    FuzzyMap {
        dim: mu.dim(),
        entries,
    }
}

/// `Θ⁻¹(u) = θ⁻¹∘u`.
pub fn theta_backward(u: &FuzzyMap, theta: ScaleFunction) -> DensityMap {
    let entries: PointTable = u.iter().map(|(p, s)| (*p, theta.inverse(s))).collect();
    DensityMap::from_table(u.dim(), entries).expect("normal fuzzy set maps to a normalized density")
}

/// `[u]^α = {x : u(x) >= α}`, in lexicographic order.
pub fn alpha_cut(u: &FuzzyMap, alpha: f64) -> Result<Vec<Point>> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0, 1]")));
    }
    let mut pts: Vec<Point> = u
        .iter()
        .filter(|(_, s)| *s >= alpha)
        .map(|(p, _)| *p)
        .collect();
    pts.sort_unstable();
    Ok(pts)
}

/// Zadeh extension `φ(u)(y) = max{u(x) : φ(x) = y}`.
pub fn zadeh_extension<M: PointMap + ?Sized>(u: &FuzzyMap, phi: &M) -> FuzzyMap {
    let mut table = FxHashMap::default();
    for (p, s) in u.iter() {
        merge(&mut table, phi.apply(p), s);
    }
    let dim = table.keys().next().map(Point::dim).unwrap_or(u.dim());
    FuzzyMap { dim, entries: table }
}

fn check_greys<T>(maps: &[T], greys: &[GreyLevelMap]) -> Result<()> {
    if maps.len() != greys.len() {
        return Err(Error::InvalidSystem(format!(
            "{} maps but {} grey-level maps",
            maps.len(),
            greys.len()
        )));
    }
    if !is_admissible(greys) {
        return Err(Error::InvalidSystem("grey-level system is not admissible".into()));
    }
    Ok(())
}

/// Fuzzy Hutchinson operator `Z(u) = max_j d_j(φ_j(u))`.
pub fn hutchinson_step<M: PointMap + Sync>(
    u: &FuzzyMap,
    maps: &[M],
    greys: &[GreyLevelMap],
) -> Result<FuzzyMap> {
    check_greys(maps, greys)?;
    let mut table = FxHashMap::default();
    for (map, d) in maps.iter().zip(greys) {
        for (y, s) in zadeh_extension(u, map).entries {
            let v = d.eval(s);
            if v > 0.0 {
                merge(&mut table, y, v);
            }
        }
    }
    let dim = table.keys().next().map(Point::dim).unwrap_or(u.dim());
    FuzzyMap::from_table(dim, table)
}

/// How a fuzzy GIFS combines the memberships of a tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TNorm {
    Minimum,
    Product,
}

impl TNorm {
    pub fn apply(self, values: impl Iterator<Item = f64>) -> f64 {
        match self {
            TNorm::Minimum => values.fold(1.0, f64::min),
            TNorm::Product => values.product(),
        }
    }
}

/// Fuzzy Hutchinson operator of a GIFS: every `m`-tuple of support points
/// contributes `d_j(T(u(x_1), ..., u(x_m)))` at `φ_j(x_1, ..., x_m)`.
pub fn hutchinson_step_tuples<M: TupleMap + Sync>(
    u: &FuzzyMap,
    maps: &[M],
    greys: &[GreyLevelMap],
    tnorm: TNorm,
) -> Result<FuzzyMap> {
    check_greys(maps, greys)?;
    let arity = maps.first().map(TupleMap::arity).unwrap_or(1);
    let support = u.sorted_entries();
    let n = support.len();
    let total = n.pow(arity as u32);
    let table = (0..total)
        .into_par_iter()
        .fold(FxHashMap::default, |mut acc, t| {
            let mut rest = t;
            let mut pts = Vec::with_capacity(arity);
            let mut vals = Vec::with_capacity(arity);
            for _ in 0..arity {
                let (p, s) = support[rest % n];
                rest /= n;
                pts.push(p);
                vals.push(s);
            }
            let s = tnorm.apply(vals.into_iter());
            for (map, d) in maps.iter().zip(greys) {
                let v = d.eval(s);
                if v > 0.0 {
                    merge(&mut acc, map.apply_tuple(&pts), v);
                }
            }
            acc
        })
        .reduce(FxHashMap::default, |mut a, b| {
            for (p, v) in b {
                merge(&mut a, p, v);
            }
            a
        });
    let dim = table.keys().next().map(Point::dim).unwrap_or(u.dim());
    FuzzyMap::from_table(dim, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::AffineMap;

    fn p(x: f64) -> Point {
        Point::new(&[x])
    }

    fn a11() -> ScaleFunction {
        ScaleFunction::exponential(1.1).unwrap()
    }

    #[test]
    fn scale_function_endpoints() {
        let th = a11();
        assert_eq!(th.eval(0.0), 1.0);
        assert_eq!(th.eval(f64::NEG_INFINITY), 0.0);
        assert_eq!(th.inverse(1.0), 0.0);
        assert_eq!(th.inverse(0.0), f64::NEG_INFINITY);
        assert!(ScaleFunction::exponential(1.0).is_err());
    }

    #[test]
    fn scale_round_trip_and_monotone() {
        for base in [1.1, 2.0, std::f64::consts::E] {
            let th = ScaleFunction::exponential(base).unwrap();
            let mut prev = 0.0;
            for k in 0..=10_000 {
                let t = -100.0 + k as f64 * 0.01;
                let s = th.eval(t);
                assert!(s > prev || k == 0);
                prev = s;
                assert!((th.inverse(s) - t).abs() <= 1e-12, "base {base}, t {t}");
            }
        }
    }

    #[test]
    fn theta_forward_examples() {
        let th = a11();
        let mu = DensityMap::new(1, [(p(0.0), 0.0), (p(1.0), -1.0)]).unwrap();
        let u = theta_forward(&mu, th);
        assert_eq!(u.get(&p(0.0)), 1.0);
        assert!((u.get(&p(1.0)) - 1.0 / 1.1).abs() < 1e-15);
        let back = theta_backward(&FuzzyMap::new(1, [(p(0.0), 1.0), (p(1.0), 1.1f64.powi(-2))]).unwrap(), th);
        assert_eq!(back.get(&p(0.0)), 0.0);
        assert!((back.get(&p(1.0)) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn fuzzy_map_validation() {
        assert!(FuzzyMap::new(1, [(p(0.0), 0.5)]).is_err());
        assert!(FuzzyMap::new(1, [(p(0.0), 1.5)]).is_err());
        let u = FuzzyMap::new(1, [(p(0.0), 1.0), (p(1.0), 0.0)]).unwrap();
        assert_eq!(u.len(), 1);
    }

    #[test]
    fn alpha_cut_boundaries() {
        let u = FuzzyMap::new(1, [(p(0.0), 1.0), (p(1.0), 0.5)]).unwrap();
        assert_eq!(alpha_cut(&u, 1.0).unwrap(), vec![p(0.0)]);
        assert_eq!(alpha_cut(&u, 0.5).unwrap(), vec![p(0.0), p(1.0)]);
        assert!(alpha_cut(&u, 0.0).is_err());
        assert!(alpha_cut(&u, 1.01).is_err());
    }

    #[test]
    fn alpha_sweep_reconstructs_membership() {
        let u = FuzzyMap::new(
            1,
            [(p(0.0), 1.0), (p(0.2), 0.3), (p(0.4), 0.7), (p(0.6), 0.3), (p(0.8), 0.05)],
        )
        .unwrap();
        for (x, s) in u.iter() {
            let rebuilt = u
                .levels()
                .into_iter()
                .filter(|&a| alpha_cut(&u, a).unwrap().contains(x))
                .fold(0.0, f64::max);
            assert_eq!(rebuilt, s);
        }
    }

    #[test]
    fn zadeh_identity_and_constant() {
        let u = FuzzyMap::new(1, [(p(0.0), 1.0), (p(0.5), 0.2)]).unwrap();
        assert_eq!(zadeh_extension(&u, &|x: &Point| *x), u);
        assert_eq!(zadeh_extension(&u, &|_: &Point| p(0.7)), FuzzyMap::crisp(p(0.7)));
    }

    #[test]
    fn cantor_grey_maps() {
        let th = a11();
        let d1 = GreyLevelMap::new(0.0, th).unwrap();
        let d2 = GreyLevelMap::new(-1.0, th).unwrap();
        for k in 1..=100 {
            let t = k as f64 / 100.0;
            assert_eq!(d1.eval(t), t);
            assert!((d2.eval(t) - t / 1.1).abs() < 1e-15);
        }
        assert!(is_admissible(&[d1, d2]));
        assert!(!is_admissible(&[d2]));
    }

    #[test]
    fn cantor_hutchinson_from_crisp_point() {
        let th = a11();
        let maps = [
            AffineMap::new(1, 1, vec![1.0 / 3.0], vec![0.0]).unwrap(),
            AffineMap::new(1, 1, vec![1.0 / 3.0], vec![2.0 / 3.0]).unwrap(),
        ];
        let greys = [GreyLevelMap::new(0.0, th).unwrap(), GreyLevelMap::new(-1.0, th).unwrap()];
        let out = hutchinson_step(&FuzzyMap::crisp(p(0.5)), &maps, &greys).unwrap();
        assert_eq!(out.get(&p(0.5 / 3.0)), 1.0);
        assert!((out.get(&p(0.5 / 3.0 + 2.0 / 3.0)) - 1.0 / 1.1).abs() < 1e-15);
        assert!(hutchinson_step(&FuzzyMap::crisp(p(0.5)), &maps, &greys[1..]).is_err());
    }

    #[test]
    fn single_identity_grey_is_zadeh() {
        let u = FuzzyMap::new(1, [(p(0.0), 1.0), (p(0.9), 0.4)]).unwrap();
        let map = [AffineMap::new(1, 1, vec![0.5], vec![0.25]).unwrap()];
        let greys = [GreyLevelMap::identity(a11())];
        assert_eq!(hutchinson_step(&u, &map, &greys).unwrap(), zadeh_extension(&u, &map[0]));
    }
}
