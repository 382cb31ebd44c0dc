//! Hausdorff distance on finite point sets and the induced distances on fuzzy
//! sets (`d_f`) and idempotent measures (`d_θ`).
//!
//! On finite supports both suprema are maxima over finitely many levels: the
//! cut `{x : u(x) >= α}` only changes when `α` crosses a membership value that
//! one of the two arguments attains, so for `α` between two consecutive
//! attained values the pair of cuts equals the pair at the upper one. The same
//! argument applies to density super-level sets, which is also why `d_θ` does
//! not depend on the scale function.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fuzzy::FuzzyMap;
use crate::maxplus::{sorted_levels, DensityMap};
use crate::point::{Metric, Point, MAX_DIM};

/// Above this many target points nearest-neighbour queries go through a
/// kd-tree instead of a linear scan.
pub const INDEX_THRESHOLD: usize = 64;

/// Nonempty finite set of points of one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(mut points: Vec<Point>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::Domain("point set is empty".into()))?;
        let dim = first.dim();
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::Dimension {
                expected: dim,
                found: bad.dim(),
            });
        }
        points.sort_unstable();
        points.dedup();
        Ok(PointSet { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn hausdorff(&self, other: &PointSet, metric: Metric) -> f64 {
        hausdorff_unchecked(&self.points, &other.points, metric)
    }
}

/// Hausdorff distance `max(sup_a inf_b d(a, b), sup_b inf_a d(a, b))`.
pub fn hausdorff(a: &[Point], b: &[Point], metric: Metric) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("Hausdorff distance of an empty set".into()));
    }
    let dim = a[0].dim();
    if let Some(bad) = a.iter().chain(b).find(|p| p.dim() != dim) {
        return Err(Error::Dimension {
            expected: dim,
            found: bad.dim(),
        });
    }
    Ok(hausdorff_unchecked(a, b, metric))
}

fn hausdorff_unchecked(a: &[Point], b: &[Point], metric: Metric) -> f64 {
    directed(a, b, metric).max(directed(b, a, metric))
}

/// `sup_{x in from} inf_{y in to} d(x, y)`.
fn directed(from: &[Point], to: &[Point], metric: Metric) -> f64 {
    if to.len() > INDEX_THRESHOLD {
        let index = KdTree::build(to);
        from.par_iter()
            .map(|p| index.nearest(p, to.len(), metric))
            .reduce(|| 0.0, f64::max)
    } else {
        scan(from, to, metric)
    }
}

fn scan(from: &[Point], to: &[Point], metric: Metric) -> f64 {
    from.par_iter()
        .map(|p| {
            to.iter()
                .map(|q| p.distance(q, metric))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max)
}

const LEAF_SIZE: usize = 16;

struct KdNode {
    lo: [f64; MAX_DIM],
    hi: [f64; MAX_DIM],
    start: usize,
    end: usize,
    /// Smallest point index in the subtree.
    min_index: usize,
    /// Child node indices; `0` marks a leaf (the root is never a child).
    left: usize,
    right: usize,
}

/// Median-split kd-tree whose nodes carry bounding boxes and the smallest
/// point index below them, so a query can be limited to a prefix of the
/// points. Splitting by position keeps it balanced however many points share
/// a coordinate.
struct KdTree<'a> {
    points: &'a [Point],
    order: Vec<usize>,
    nodes: Vec<KdNode>,
}

impl<'a> KdTree<'a> {
    fn build(points: &'a [Point]) -> Self {
        let mut tree = KdTree {
            points,
            order: (0..points.len()).collect(),
            nodes: Vec::with_capacity(2 * points.len() / LEAF_SIZE + 1),
        };
        tree.build_node(0, points.len());
        tree
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let dim = self.points[0].dim();
        let mut lo = [f64::INFINITY; MAX_DIM];
        let mut hi = [f64::NEG_INFINITY; MAX_DIM];
        let mut min_index = usize::MAX;
        for &i in &self.order[start..end] {
            min_index = min_index.min(i);
            for (a, &x) in self.points[i].coords().iter().enumerate() {
                lo[a] = lo[a].min(x);
                hi[a] = hi[a].max(x);
            }
        }
        let id = self.nodes.len();
        self.nodes.push(KdNode {
            lo,
            hi,
            start,
            end,
            min_index,
            left: 0,
            right: 0,
        });
        if end - start > LEAF_SIZE {
            let axis = (0..dim)
                .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
                .unwrap_or(0);
            let mid = (start + end) / 2;
            let points = self.points;
            self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
                points[a].get(axis).total_cmp(&points[b].get(axis))
            });
            let left = self.build_node(start, mid);
            let right = self.build_node(mid, end);
            self.nodes[id].left = left;
            self.nodes[id].right = right;
        }
        id
    }

    /// Lower bound on the distance from `p` to anything in the node's box.
    fn box_distance(&self, node: &KdNode, p: &Point, metric: Metric) -> f64 {
        let mut c = [0.0; MAX_DIM];
        for (a, slot) in c.iter_mut().enumerate().take(p.dim()) {
            *slot = p.get(a).clamp(node.lo[a], node.hi[a]);
        }
        metric.distance(p.coords(), &c[..p.dim()])
    }

    /// Exact distance from `p` to the nearest of the first `limit` points.
    fn nearest(&self, p: &Point, limit: usize, metric: Metric) -> f64 {
        let mut best = f64::INFINITY;
        self.search(0, p, limit, metric, &mut best);
        best
    }

    fn search(&self, id: usize, p: &Point, limit: usize, metric: Metric, best: &mut f64) {
        let node = &self.nodes[id];
        if node.min_index >= limit {
            return;
        }
        if node.left == 0 {
            for &i in &self.order[node.start..node.end] {
                if i < limit {
                    *best = best.min(p.distance(&self.points[i], metric));
                }
            }
            return;
        }
        let dl = self.box_distance(&self.nodes[node.left], p, metric);
        let dr = self.box_distance(&self.nodes[node.right], p, metric);
        let (near, d_near, far, d_far) = if dl <= dr {
            (node.left, dl, node.right, dr)
        } else {
            (node.right, dr, node.left, dl)
        };
        if d_near < *best {
            self.search(near, p, limit, metric, best);
        }
        if d_far < *best {
            self.search(far, p, limit, metric, best);
        }
    }
}

/// Kd-trees over halving prefixes of `targets`, built on first use.
/// A query against the first `k` targets goes to an index with fewer than
/// `2k` points, so at least half of the points it holds are eligible.
struct PrefixIndex<'a> {
    targets: &'a [Point],
    tiers: Vec<Option<KdTree<'a>>>,
}

impl<'a> PrefixIndex<'a> {
    fn new(targets: &'a [Point]) -> Self {
        let mut tiers = 0;
        while targets.len() >> tiers > INDEX_THRESHOLD {
            tiers += 1;
        }
        PrefixIndex {
            targets,
            tiers: (0..tiers).map(|_| None).collect(),
        }
    }

    fn directed(&mut self, from: &[Point], k: usize, metric: Metric) -> f64 {
        if k <= INDEX_THRESHOLD {
            return scan(from, &self.targets[..k], metric);
        }
        let n = self.targets.len();
        // the smallest tier n >> t that still holds k points
        let t = (0..self.tiers.len()).rev().find(|&t| n >> t >= k).unwrap_or(0);
        let targets = self.targets;
        let index = self.tiers[t].get_or_insert_with(|| KdTree::build(&targets[..n >> t]));
        let index = &*index;
        from.par_iter()
            .map(|p| index.nearest(p, k, metric))
            .reduce(|| 0.0, f64::max)
    }
}

/// `sup_β` of the directed distance from `{from >= β}` to `{to >= β}`.
///
/// A point at level `v` lies in every cut with `β <= v`, and lowering `β`
/// only enlarges the target cut, so its worst case is `β = v`. One query per
/// point against a density-sorted prefix of `to` therefore suffices.
fn directed_levels(from: &[(Point, f64)], to: &[(Point, f64)], metric: Metric) -> f64 {
    let mut to: Vec<(Point, f64)> = to.to_vec();
    to.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let targets: Vec<Point> = to.iter().map(|e| e.0).collect();
    let mut index = PrefixIndex::new(&targets);
    let mut from: Vec<(Point, f64)> = from.to_vec();
    from.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut worst: f64 = 0.0;
    let mut i = 0;
    while i < from.len() {
        let level = from[i].1;
        let j = i + from[i..].iter().take_while(|e| e.1 == level).count();
        let prefix = to.partition_point(|e| e.1 >= level);
        let queries: Vec<Point> = from[i..j].iter().map(|e| e.0).collect();
        worst = worst.max(index.directed(&queries, prefix, metric));
        i = j;
    }
    worst
}

fn level_distance(a: &[(Point, f64)], b: &[(Point, f64)], metric: Metric) -> f64 {
    directed_levels(a, b, metric).max(directed_levels(b, a, metric))
}

/// `d_f(u, v) = sup_{α in (0,1]} h([u]^α, [v]^α)`.
pub fn fuzzy_distance(u: &FuzzyMap, v: &FuzzyMap, metric: Metric) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::Dimension {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(level_distance(&u.sorted_entries(), &v.sorted_entries(), metric))
}

/// `d_θ(μ, ν) = sup_{β <= 0} h({λ >= β}, {η >= β})`.
pub fn dtheta_distance(mu: &DensityMap, nu: &DensityMap, metric: Metric) -> Result<f64> {
    if mu.dim() != nu.dim() {
        return Err(Error::Dimension {
            expected: mu.dim(),
            found: nu.dim(),
        });
    }
    Ok(level_distance(&mu.sorted_entries(), &nu.sorted_entries(), metric))
}

/// `d_θ` by the definition: a Hausdorff distance per attained level.
/// Quadratic in the number of levels; kept as a cross-check.
pub fn dtheta_distance_by_levels(mu: &DensityMap, nu: &DensityMap, metric: Metric) -> Result<f64> {
    if mu.dim() != nu.dim() {
        return Err(Error::Dimension {
            expected: mu.dim(),
            found: nu.dim(),
        });
    }
    let levels = sorted_levels(mu.levels().into_iter().chain(nu.levels()));
    Ok(levels
        .into_iter()
        .map(|beta| hausdorff_unchecked(&mu.super_level_set(beta), &nu.super_level_set(beta), metric))
        .fold(0.0, f64::max))
}
