//! Affine maps, max-plus normalized systems, grids and discretized maps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fuzzy::{GreyLevelMap, ScaleFunction};
use crate::maxplus::validate_weights;
use crate::point::{Metric, Point, MAX_DIM};

/// Anything that sends a point to a point.
pub trait PointMap {
    fn apply(&self, x: &Point) -> Point;
}

impl<F: Fn(&Point) -> Point> PointMap for F {
    fn apply(&self, x: &Point) -> Point {
        self(x)
    }
}

/// A map `X^m -> X` taking a tuple of points.
pub trait TupleMap {
    fn arity(&self) -> usize;
    fn apply_tuple(&self, xs: &[Point]) -> Point;
}

/// `x ↦ A·x + b` where `x` is the concatenation of `arity` points of
/// dimension `dim`. `matrix` is row-major with `dim` rows and `arity * dim`
/// columns.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    dim: usize,
    arity: usize,
    matrix: Vec<f64>,
    offset: Vec<f64>,
}

impl AffineMap {
    pub fn new(dim: usize, arity: usize, matrix: Vec<f64>, offset: Vec<f64>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Domain(format!("dimension {dim} outside 1..={MAX_DIM}")));
        }
        if arity == 0 {
            return Err(Error::Domain("arity must be at least 1".into()));
        }
        if matrix.len() != dim * dim * arity {
            return Err(Error::Dimension {
                expected: dim * dim * arity,
                found: matrix.len(),
            });
        }
        if offset.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: offset.len(),
            });
        }
        if matrix.iter().chain(&offset).any(|v| !v.is_finite()) {
            return Err(Error::Domain("affine map entries must be finite".into()));
        }
        Ok(AffineMap {
            dim,
            arity,
            matrix,
            offset,
        })
    }

    /// Builds a map from its matrix rows.
    pub fn from_rows(rows: &[Vec<f64>], offset: Vec<f64>) -> Result<Self> {
        let dim = offset.len();
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.len() != dim || dim == 0 || !cols.is_multiple_of(dim) || rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Domain(format!(
                "matrix must have {dim} rows of equal length divisible by {dim}"
            )));
        }
        Self::new(dim, cols / dim, rows.concat(), offset)
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = vec![0.0; dim * dim];
        for i in 0..dim {
            m[i * dim + i] = 1.0;
        }
        AffineMap::new(dim, 1, m, vec![0.0; dim]).expect("identity is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn cols(&self) -> usize {
        self.dim * self.arity
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix.chunks(self.cols()).map(<[f64]>::to_vec).collect()
    }

    /// The `dim × dim` block acting on tuple slot `slot`.
    pub fn block(&self, slot: usize) -> Vec<f64> {
        let cols = self.cols();
        (0..self.dim)
            .flat_map(|r| {
                let start = r * cols + slot * self.dim;
                self.matrix[start..start + self.dim].iter().copied()
            })
            .collect()
    }

    /// Checked evaluation on a tuple.
    pub fn try_apply(&self, xs: &[Point]) -> Result<Point> {
        if xs.len() != self.arity {
            return Err(Error::Dimension {
                expected: self.arity,
                found: xs.len(),
            });
        }
        if let Some(bad) = xs.iter().find(|x| x.dim() != self.dim) {
            return Err(Error::Dimension {
                expected: self.dim,
                found: bad.dim(),
            });
        }
        Ok(self.eval(xs))
    }

    fn eval(&self, xs: &[Point]) -> Point {
        let cols = self.cols();
        let mut out = [0.0; MAX_DIM];
        for (r, o) in out.iter_mut().enumerate().take(self.dim) {
            let row = &self.matrix[r * cols..(r + 1) * cols];
            let mut acc = self.offset[r];
            for (k, x) in xs.iter().enumerate() {
                for (c, xc) in x.coords().iter().enumerate() {
                    acc += row[k * self.dim + c] * xc;
                }
            }
            *o = acc;
        }
        Point::new(&out[..self.dim])
    }
}

impl PointMap for AffineMap {
    fn apply(&self, x: &Point) -> Point {
        debug_assert_eq!(self.arity, 1);
        self.eval(std::slice::from_ref(x))
    }
}

impl TupleMap for AffineMap {
    fn arity(&self) -> usize {
        self.arity
    }

    fn apply_tuple(&self, xs: &[Point]) -> Point {
        self.eval(xs)
    }
}

/// Largest singular value of a row-major `rows × cols` matrix.
///
/// Power iteration on `AᵀA` with a Rayleigh-quotient estimate, stopped when
/// the eigen-residual drops below `1e-10` relative to the estimate. A few
/// start vectors are tried so that a start orthogonal to the top singular
/// vector cannot hide it.
pub fn spectral_norm(rows: usize, cols: usize, a: &[f64]) -> f64 {
    assert_eq!(a.len(), rows * cols);
    let mut ata = vec![0.0; cols * cols];
    for i in 0..cols {
        for j in 0..cols {
            ata[i * cols + j] = (0..rows).map(|r| a[r * cols + i] * a[r * cols + j]).sum();
        }
    }
    let mut starts: Vec<Vec<f64>> = vec![(0..cols).map(|i| 1.0 + 0.618_034 * i as f64).collect()];
    starts.extend((0..cols).map(|k| (0..cols).map(|i| if i == k { 1.0 } else { 0.0 }).collect()));

    starts
        .into_iter()
        .map(|v| power_iteration(cols, &ata, v))
        .fold(0.0, f64::max)
        .max(0.0)
        .sqrt()
}

fn power_iteration(n: usize, m: &[f64], mut v: Vec<f64>) -> f64 {
    const TOL: f64 = 1e-10;
    const MAX_ITERS: usize = 100_000;

    let mul = |v: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum())
            .collect()
    };
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut lambda = 0.0;
    for _ in 0..MAX_ITERS {
        let nv = norm(&v);
        if nv == 0.0 {
            return 0.0;
        }
        v.iter_mut().for_each(|x| *x /= nv);
        let w = mul(&v);
        lambda = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
        let residual = norm(
            &w.iter()
                .zip(&v)
                .map(|(wi, vi)| wi - lambda * vi)
                .collect::<Vec<_>>(),
        );
        if residual <= TOL * lambda.abs() || lambda == 0.0 {
            return lambda;
        }
        v = w;
    }
    lambda
}

/// Lipschitz constant of an affine map: the spectral norm of its linear part.
///
/// For arity above one this is taken with respect to the Euclidean norm on
/// the concatenated tuple.
pub fn lipschitz_constant(m: &AffineMap) -> f64 {
    spectral_norm(m.dim(), m.cols(), m.matrix())
}

/// Max-plus normalized IFS (arity 1) or GIFS (arity >= 2).
#[derive(Clone, Debug, PartialEq)]
pub struct MaxPlusSystem {
    maps: Vec<AffineMap>,
    weights: Vec<f64>,
    alpha: f64,
}

impl MaxPlusSystem {
    /// `declared_alpha` is mandatory for GIFS. For IFS the contraction
    /// factor is computed; a declared value may only be larger.
    pub fn new(maps: Vec<AffineMap>, weights: Vec<f64>, declared_alpha: Option<f64>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidSystem("system has no maps".into()));
        }
        if maps.len() != weights.len() {
            return Err(Error::InvalidSystem(format!(
                "{} maps but {} weights",
                maps.len(),
                weights.len()
            )));
        }
        validate_weights(&weights)?;
        let (dim, arity) = (maps[0].dim(), maps[0].arity());
        if maps.iter().any(|m| m.dim() != dim || m.arity() != arity) {
            return Err(Error::InvalidSystem(
                "all maps must share dimension and arity".into(),
            ));
        }
        if let Some(a) = declared_alpha {
            if !(a.is_finite() && a >= 0.0) {
                return Err(Error::InvalidSystem(format!("contraction factor {a} is invalid")));
            }
        }
        let alpha = if arity == 1 {
            let computed = maps.iter().map(lipschitz_constant).fold(0.0, f64::max);
            match declared_alpha {
                Some(a) if a + 1e-9 < computed => {
                    return Err(Error::InvalidSystem(format!(
                        "declared contraction factor {a} is below the computed {computed}"
                    )))
                }
                Some(a) => a,
                None => computed,
            }
        } else {
            declared_alpha.ok_or_else(|| {
                Error::InvalidSystem(format!(
                    "arity-{arity} system needs a declared contraction factor"
                ))
            })?
        };
        let weights = weights.into_iter().map(|q| q + 0.0).collect();
        Ok(MaxPlusSystem {
            maps,
            weights,
            alpha,
        })
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.maps[0].dim()
    }

    pub fn arity(&self) -> usize {
        self.maps[0].arity()
    }

    /// Contraction factor α_S.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_contractive(&self) -> bool {
        self.alpha < 1.0
    }

    /// Sampled Edelstein check on `grid`'s box: returns how many random tuple
    /// pairs violate `d(φ(x), φ(y)) < max_i d(x_i, y_i)` for some map.
    pub fn edelstein_violations(&self, grid: &Grid, samples: usize, seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = self.arity();
        let draw = |rng: &mut ChaCha8Rng| -> Point {
            let c: Vec<f64> = (0..grid.dim())
                .map(|a| rng.gen_range(grid.lower(a)..=grid.upper(a)))
                .collect();
            Point::new(&c)
        };
        let mut violations = 0;
        for _ in 0..samples {
            let xs: Vec<Point> = (0..m).map(|_| draw(&mut rng)).collect();
            let ys: Vec<Point> = (0..m).map(|_| draw(&mut rng)).collect();
            let input = xs
                .iter()
                .zip(&ys)
                .map(|(x, y)| x.distance(y, Metric::Euclidean))
                .fold(0.0, f64::max);
            if self.maps.iter().any(|f| {
                f.apply_tuple(&xs).distance(&f.apply_tuple(&ys), Metric::Euclidean) >= input
            }) {
                violations += 1;
            }
        }
        violations
    }
}

/// Grey-level maps `d_j(t) = θ(q_j + θ⁻¹(t))` of the corresponding fuzzy system.
pub fn grey_maps(sys: &MaxPlusSystem, theta: ScaleFunction) -> Vec<GreyLevelMap> {
    sys.weights()
        .iter()
        .map(|&q| GreyLevelMap::new(q, theta).expect("normalized weights are <= 0"))
        .collect()
}

/// Uniform grid on a box: `cells[i]` cells per axis, `cells[i] + 1` nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    dim: usize,
    lower: [f64; MAX_DIM],
    upper: [f64; MAX_DIM],
    cells: [usize; MAX_DIM],
    strides: [usize; MAX_DIM],
}

impl Grid {
    pub fn new(lower: &[f64], upper: &[f64], cells: &[usize]) -> Result<Self> {
        let dim = lower.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Domain(format!("grid dimension {dim} outside 1..={MAX_DIM}")));
        }
        if upper.len() != dim || cells.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: if upper.len() != dim { upper.len() } else { cells.len() },
            });
        }
        let mut g = Grid {
            dim,
            lower: [0.0; MAX_DIM],
            upper: [0.0; MAX_DIM],
            cells: [0; MAX_DIM],
            strides: [0; MAX_DIM],
        };
        for a in 0..dim {
            if !(lower[a].is_finite() && upper[a].is_finite() && lower[a] < upper[a]) {
                return Err(Error::Domain(format!(
                    "axis {a}: need finite lower < upper, got {} and {}",
                    lower[a], upper[a]
                )));
            }
            if cells[a] < 2 {
                return Err(Error::Domain(format!("axis {a}: need at least 2 cells")));
            }
            g.lower[a] = lower[a] + 0.0;
            g.upper[a] = upper[a] + 0.0;
            g.cells[a] = cells[a];
        }
        let mut stride = 1usize;
        for a in (0..dim).rev() {
            g.strides[a] = stride;
            stride = stride
                .checked_mul(cells[a] + 1)
                .ok_or_else(|| Error::Resource("grid node count overflows".into()))?;
        }
        Ok(g)
    }

    /// The same box and cell count on every axis.
    pub fn uniform(lower: &[f64], upper: &[f64], cells: usize) -> Result<Self> {
        Self::new(lower, upper, &vec![cells; lower.len()])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lower(&self, axis: usize) -> f64 {
        self.lower[axis]
    }

    pub fn upper(&self, axis: usize) -> f64 {
        self.upper[axis]
    }

    pub fn lower_corner(&self) -> &[f64] {
        &self.lower[..self.dim]
    }

    pub fn upper_corner(&self) -> &[f64] {
        &self.upper[..self.dim]
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells[..self.dim]
    }

    pub fn cell_size(&self, axis: usize) -> f64 {
        (self.upper[axis] - self.lower[axis]) / self.cells[axis] as f64
    }

    pub fn node_count(&self) -> usize {
        (0..self.dim).map(|a| self.cells[a] + 1).product()
    }

    /// Mesh ε: half the cell diagonal, so every point of the box is within ε
    /// of a node.
    pub fn epsilon(&self) -> f64 {
        0.5 * (0..self.dim)
            .map(|a| self.cell_size(a).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Euclidean diameter of the box.
    pub fn diameter(&self) -> f64 {
        (0..self.dim)
            .map(|a| (self.upper[a] - self.lower[a]).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim
            && p.coords()
                .iter()
                .enumerate()
                .all(|(a, &x)| self.lower[a] <= x && x <= self.upper[a])
    }

    fn axis_coord(&self, axis: usize, i: usize) -> f64 {
        let n = self.cells[axis];
        if i == n {
            return self.upper[axis];
        }
        self.lower[axis] + (self.upper[axis] - self.lower[axis]) * i as f64 / n as f64
    }

    /// Nearest node index along one axis; ties go to the lower index.
    fn axis_nearest(&self, axis: usize, x: f64) -> usize {
        let n = self.cells[axis];
        let t = (x - self.lower[axis]) / (self.upper[axis] - self.lower[axis]) * n as f64;
        let lo = (t.floor().max(0.0) as usize).min(n);
        // the float estimate can be off by one near cell edges; settle by distance
        let mut best = lo.saturating_sub(1);
        let mut best_d = (x - self.axis_coord(axis, best)).abs();
        for i in best + 1..=(lo + 1).min(n) {
            let d = (x - self.axis_coord(axis, i)).abs();
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }

    pub fn node(&self, index: usize) -> Point {
        let mut c = [0.0; MAX_DIM];
        let mut rest = index;
        for (a, ca) in c.iter_mut().enumerate().take(self.dim) {
            let i = rest / self.strides[a];
            rest %= self.strides[a];
            *ca = self.axis_coord(a, i);
        }
        Point::new(&c[..self.dim])
    }

    /// Index of `p` if it is exactly (bit for bit) a node.
    pub fn node_index(&self, p: &Point) -> Option<usize> {
        if p.dim() != self.dim {
            return None;
        }
        let mut index = 0;
        for (a, &x) in p.coords().iter().enumerate() {
            if !(self.lower[a] <= x && x <= self.upper[a]) {
                return None;
            }
            let i = self.axis_nearest(a, x);
            if self.axis_coord(a, i).to_bits() != x.to_bits() {
                return None;
            }
            index += i * self.strides[a];
        }
        Some(index)
    }

    /// Node index of the ε-projection of `p`, clamping to the box first.
    /// The flag reports whether clamping happened.
    pub fn project_index(&self, p: &Point) -> (usize, bool) {
        let mut index = 0;
        let mut clamped = false;
        for (a, &x) in p.coords().iter().enumerate().take(self.dim) {
            let xc = x.clamp(self.lower[a], self.upper[a]);
            clamped |= xc != x;
            index += self.axis_nearest(a, xc) * self.strides[a];
        }
        (index, clamped)
    }

    /// ε-projection `r`: nearest node, ties toward the lower index per axis.
    pub fn project(&self, p: &Point) -> Point {
        self.node(self.project_index(p).0)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.node_count()).map(|i| self.node(i))
    }
}

/// `φ̂ = (r∘φ)|_X̂`: an affine map followed by grid projection.
#[derive(Clone, Debug)]
pub struct DiscretizedMap {
    map: AffineMap,
    grid: Grid,
}

impl DiscretizedMap {
    pub fn map(&self) -> &AffineMap {
        &self.map
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Image node index of a tuple of nodes, and whether the image left the box.
    pub fn apply_indices(&self, nodes: &[usize]) -> (usize, bool) {
        let pts: Vec<Point> = nodes.iter().map(|&i| self.grid.node(i)).collect();
        self.apply_points(&pts)
    }

    /// As [`DiscretizedMap::apply_indices`] for nodes already decoded.
    pub fn apply_points(&self, nodes: &[Point]) -> (usize, bool) {
        self.grid.project_index(&self.map.apply_tuple(nodes))
    }
}

pub fn discretize_map(m: &AffineMap, g: &Grid) -> Result<DiscretizedMap> {
    if m.dim() != g.dim() {
        return Err(Error::Dimension {
            expected: g.dim(),
            found: m.dim(),
        });
    }
    Ok(DiscretizedMap {
        map: m.clone(),
        grid: g.clone(),
    })
}

impl PointMap for DiscretizedMap {
    fn apply(&self, x: &Point) -> Point {
        self.grid.project(&self.map.apply(x))
    }
}

impl TupleMap for DiscretizedMap {
    fn arity(&self) -> usize {
        self.map.arity()
    }

    fn apply_tuple(&self, xs: &[Point]) -> Point {
        self.grid.project(&self.map.apply_tuple(xs))
    }
}

/// An affine map whose images are rounded to a fixed number of decimal digits.
#[derive(Clone, Debug)]
pub struct QuantizedMap {
    pub map: AffineMap,
    pub digits: u32,
}

impl PointMap for QuantizedMap {
    fn apply(&self, x: &Point) -> Point {
        self.map.apply(x).quantized(self.digits)
    }
}

impl TupleMap for QuantizedMap {
    fn arity(&self) -> usize {
        self.map.arity()
    }

    fn apply_tuple(&self, xs: &[Point]) -> Point {
        self.map.apply_tuple(xs).quantized(self.digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cantor() -> Vec<AffineMap> {
        vec![
            AffineMap::new(1, 1, vec![1.0 / 3.0], vec![0.0]).unwrap(),
            AffineMap::new(1, 1, vec![1.0 / 3.0], vec![2.0 / 3.0]).unwrap(),
        ]
    }

    #[test]
    fn apply_examples() {
        let x = Point::new(&[0.3, -0.7]);
        assert_eq!(AffineMap::identity(2).apply(&x), x);
        assert!((cantor()[0].apply(&Point::new(&[0.5])).get(0) - 1.0 / 6.0).abs() < 1e-15);
        let fern4 = AffineMap::from_rows(&[vec![0.0, 0.0], vec![0.031, 0.216]], vec![0.486, 0.05])
            .unwrap();
        assert_eq!(fern4.apply(&Point::new(&[0.0, 0.0])), Point::new(&[0.486, 0.05]));
    }

    #[test]
    fn apply_checks_arity() {
        let m = AffineMap::identity(1);
        let x = Point::new(&[0.1]);
        assert!(m.try_apply(&[x, x]).is_err());
        assert!(m.try_apply(&[Point::new(&[0.1, 0.2])]).is_err());
    }

    #[test]
    fn lipschitz_examples() {
        let m = AffineMap::new(2, 1, vec![0.8, 0.0, 0.0, 0.8], vec![0.0, 0.0]).unwrap();
        assert!((lipschitz_constant(&m) - 0.8).abs() < 1e-12);
        for f in cantor() {
            assert!((lipschitz_constant(&f) - 1.0 / 3.0).abs() < 1e-12);
        }
        let rot = AffineMap::new(2, 1, vec![0.355, -0.355, 0.355, 0.355], vec![0.0, 0.0]).unwrap();
        assert!((lipschitz_constant(&rot) - 0.355 * 2f64.sqrt()).abs() < 1e-12);
        let zero = AffineMap::new(2, 1, vec![0.0; 4], vec![0.0, 0.0]).unwrap();
        assert_eq!(lipschitz_constant(&zero), 0.0);
    }

    #[test]
    fn system_weight_normalization() {
        assert!(MaxPlusSystem::new(cantor(), vec![0.0, -1.0], None).is_ok());
        assert!(MaxPlusSystem::new(cantor(), vec![-0.5, -1.0], None).is_err());
        assert!(MaxPlusSystem::new(cantor(), vec![0.0, 1.0], None).is_err());
        assert!(MaxPlusSystem::new(cantor(), vec![0.0], None).is_err());
        let sys = MaxPlusSystem::new(cantor(), vec![0.0, -1.0], None).unwrap();
        assert!((sys.alpha() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gifs_needs_declared_alpha() {
        let m = AffineMap::new(1, 2, vec![0.3, 0.3], vec![0.0]).unwrap();
        assert!(MaxPlusSystem::new(vec![m.clone()], vec![0.0], None).is_err());
        let sys = MaxPlusSystem::new(vec![m], vec![0.0], Some(0.6)).unwrap();
        assert_eq!(sys.alpha(), 0.6);
    }

    #[test]
    fn projection_examples() {
        let g = Grid::new(&[0.0], &[1.0], &[2]).unwrap();
        assert_eq!(g.project(&Point::new(&[0.5])), Point::new(&[0.5]));
        assert_eq!(g.project(&Point::new(&[0.25])), Point::new(&[0.0]));
        assert_eq!(g.project(&Point::new(&[0.3])), Point::new(&[0.5]));
        assert_eq!(g.project_index(&Point::new(&[1.7])), (2, true));
        assert_eq!(g.project_index(&Point::new(&[-0.2])), (0, true));
    }

    #[test]
    fn node_indexing() {
        let g = Grid::new(&[0.0, -1.0], &[1.0, 1.0], &[4, 3]).unwrap();
        assert_eq!(g.node_count(), 20);
        for i in 0..g.node_count() {
            assert_eq!(g.node_index(&g.node(i)), Some(i));
        }
        assert_eq!(g.node_index(&Point::new(&[0.1, 0.0])), None);
        assert!((g.epsilon() - 0.5 * (0.25f64.powi(2) + (2.0f64 / 3.0).powi(2)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cantor_discretized_endpoint() {
        let g = Grid::new(&[0.0], &[1.0], &[3]).unwrap();
        let f2 = discretize_map(&cantor()[1], &g).unwrap();
        assert_eq!(f2.apply(&Point::new(&[1.0])), Point::new(&[1.0]));
    }

    #[test]
    fn grid_rejects_degenerate() {
        assert!(Grid::new(&[0.0], &[0.0], &[4]).is_err());
        assert!(Grid::new(&[0.0], &[1.0], &[1]).is_err());
        assert!(Grid::new(&[0.0, 0.0], &[1.0], &[4]).is_err());
    }

    #[test]
    fn edelstein_sampling() {
        let g = Grid::uniform(&[0.0, 0.0], &[1.0, 1.0], 8).unwrap();
        let shrink = AffineMap::new(2, 2, vec![0.3, 0.0, 0.2, 0.0, 0.0, 0.3, 0.0, 0.2], vec![0.0; 2])
            .unwrap();
        let sys = MaxPlusSystem::new(vec![shrink], vec![0.0], Some(0.6)).unwrap();
        assert_eq!(sys.edelstein_violations(&g, 500, 7), 0);
        let grow = AffineMap::new(2, 2, vec![1.5, 0.0, 0.0, 0.0, 0.0, 1.5, 0.0, 0.0], vec![0.0; 2])
            .unwrap();
        let bad = MaxPlusSystem::new(vec![grow], vec![0.0], Some(0.9)).unwrap();
        assert!(bad.edelstein_violations(&g, 500, 7) > 0);
    }
}
