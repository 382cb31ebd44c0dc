//! Python bindings: densities, fuzzy sets, systems, grids, the three run
//! drivers, distances, config runs and PGM rendering.

use pyo3::create_exception;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use idempo::io::{self as iio, RenderSpec, RunConfig};
use idempo::{
    engine, fuzzy, grey_maps, AffineFunctional, AffineMap, CombineRule, DensityMap, Error,
    FuzzyMap, Grid, GridChoice, IterationTrace, MaxPlusSystem, Metric, Point, RunOptions,
    ScaleFunction,
};

create_exception!(idempo_py, ResourceError, PyRuntimeError, "A support or tuple cap was hit.");

fn err(e: Error) -> PyErr {
    match e {
        Error::Resource(_) => ResourceError::new_err(e.to_string()),
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn point(coords: &[f64]) -> PyResult<Point> {
    Point::try_new(coords).map_err(err)
}

fn metric(name: &str) -> PyResult<Metric> {
    match name {
        "euclidean" => Ok(Metric::Euclidean),
        "chebyshev" => Ok(Metric::Chebyshev),
        _ => Err(PyValueError::new_err(format!("unknown metric `{name}`"))),
    }
}

fn rows_of(entries: Vec<(Point, f64)>) -> Vec<(Vec<f64>, f64)> {
    entries.into_iter().map(|(p, v)| (p.coords().to_vec(), v)).collect()
}

#[pyclass(name = "DensityMap", frozen, skip_from_py_object, module = "idempo_py")]
#[derive(Clone)]
struct PyDensity {
    inner: DensityMap,
}

#[pymethods]
impl PyDensity {
    /// `entries` is a list of `(point, density)` pairs with max density 0.
    #[new]
    fn new(dim: usize, entries: Vec<(Vec<f64>, f64)>) -> PyResult<Self> {
        let pts = entries
            .into_iter()
            .map(|(c, v)| Ok((point(&c)?, v)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyDensity {
            inner: DensityMap::new(dim, pts).map_err(err)?,
        })
    }

    #[staticmethod]
    fn dirac(coords: Vec<f64>) -> PyResult<Self> {
        Ok(PyDensity {
            inner: DensityMap::dirac(point(&coords)?),
        })
    }

    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        Ok(PyDensity {
            inner: iio::read_density_csv(text.as_bytes()).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("DensityMap(dim={}, support={})", self.inner.dim(), self.inner.len())
    }

    /// Density at a point; `-inf` off the support.
    fn get(&self, coords: Vec<f64>) -> PyResult<f64> {
        Ok(self.inner.get(&point(&coords)?))
    }

    /// `(point, density)` pairs in lexicographic point order.
    fn entries(&self) -> Vec<(Vec<f64>, f64)> {
        rows_of(self.inner.sorted_entries())
    }

    fn support(&self) -> Vec<Vec<f64>> {
        idempo::support(&self.inner)
            .into_iter()
            .map(|p| p.coords().to_vec())
            .collect()
    }

    fn min_density(&self) -> f64 {
        self.inner.min_density()
    }

    fn levels(&self) -> Vec<f64> {
        self.inner.levels()
    }

    /// `μ(φ)` for `φ(x) = coeffs·x + offset`.
    fn eval(&self, coeffs: Vec<f64>, offset: f64) -> PyResult<f64> {
        let phi = AffineFunctional::new(coeffs, offset).map_err(err)?;
        idempo::eval_measure(&self.inner, &phi).map_err(err)
    }

    fn to_csv(&self) -> String {
        iio::density_to_csv(&self.inner)
    }
}

#[pyclass(name = "FuzzySet", frozen, skip_from_py_object, module = "idempo_py")]
#[derive(Clone)]
struct PyFuzzy {
    inner: FuzzyMap,
}

#[pymethods]
impl PyFuzzy {
    /// `entries` is a list of `(point, membership)` pairs with max membership 1.
    #[new]
    fn new(dim: usize, entries: Vec<(Vec<f64>, f64)>) -> PyResult<Self> {
        let pts = entries
            .into_iter()
            .map(|(c, v)| Ok((point(&c)?, v)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyFuzzy {
            inner: FuzzyMap::new(dim, pts).map_err(err)?,
        })
    }

    #[staticmethod]
    fn crisp(coords: Vec<f64>) -> PyResult<Self> {
        Ok(PyFuzzy {
            inner: FuzzyMap::crisp(point(&coords)?),
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("FuzzySet(dim={}, support={})", self.inner.dim(), self.inner.len())
    }

    fn get(&self, coords: Vec<f64>) -> PyResult<f64> {
        Ok(self.inner.get(&point(&coords)?))
    }

    fn entries(&self) -> Vec<(Vec<f64>, f64)> {
        rows_of(self.inner.sorted_entries())
    }

    fn levels(&self) -> Vec<f64> {
        self.inner.levels()
    }

    fn alpha_cut(&self, alpha: f64) -> PyResult<Vec<Vec<f64>>> {
        Ok(idempo::alpha_cut(&self.inner, alpha)
            .map_err(err)?
            .into_iter()
            .map(|p| p.coords().to_vec())
            .collect())
    }

    fn to_csv(&self) -> String {
        iio::fuzzy_to_csv(&self.inner)
    }
}

#[pyclass(name = "ScaleFunction", frozen, skip_from_py_object, module = "idempo_py")]
#[derive(Clone)]
struct PyScale {
    inner: ScaleFunction,
}

#[pymethods]
impl PyScale {
    /// `θ(t) = base^t`.
    #[new]
    #[pyo3(signature = (base = 1.1))]
    fn new(base: f64) -> PyResult<Self> {
        Ok(PyScale {
            inner: ScaleFunction::exponential(base).map_err(err)?,
        })
    }

    #[getter]
    fn base(&self) -> f64 {
        self.inner.base()
    }

    fn __call__(&self, t: f64) -> f64 {
        self.inner.eval(t)
    }

    fn inverse(&self, s: f64) -> f64 {
        self.inner.inverse(s)
    }

    fn forward(&self, mu: &PyDensity) -> PyFuzzy {
        PyFuzzy {
            inner: idempo::theta_forward(&mu.inner, self.inner),
        }
    }

    fn backward(&self, u: &PyFuzzy) -> PyDensity {
        PyDensity {
            inner: idempo::theta_backward(&u.inner, self.inner),
        }
    }
}

#[pyclass(name = "AffineMap", frozen, skip_from_py_object, module = "idempo_py")]
#[derive(Clone)]
struct PyAffine {
    inner: AffineMap,
}

#[pymethods]
impl PyAffine {
    /// `rows` has `dim` rows of `arity * dim` entries.
    #[new]
    fn new(rows: Vec<Vec<f64>>, offset: Vec<f64>) -> PyResult<Self> {
        Ok(PyAffine {
            inner: AffineMap::from_rows(&rows, offset).map_err(err)?,
        })
    }

    #[staticmethod]
    fn identity(dim: usize) -> Self {
        PyAffine {
            inner: AffineMap::identity(dim),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.inner.rows()
    }

    fn offset(&self) -> Vec<f64> {
        self.inner.offset().to_vec()
    }

    /// Spectral norm of the linear part.
    fn lipschitz(&self) -> f64 {
        idempo::lipschitz_constant(&self.inner)
    }

    /// Image of one point per argument slot.
    #[pyo3(signature = (*points))]
    fn __call__(&self, points: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
        let pts = points.iter().map(|c| point(c)).collect::<PyResult<Vec<_>>>()?;
        Ok(self.inner.try_apply(&pts).map_err(err)?.coords().to_vec())
    }
}

#[pyclass(name = "System", frozen, skip_from_py_object, module = "idempo_py")]
#[derive(Clone)]
struct PySystem {
    inner: MaxPlusSystem,
}

#[pymethods]
impl PySystem {
    /// Max-plus normalized IFS (arity 1) or GIFS. `alpha` is required for
    /// GIFS and may only raise the computed factor of an IFS.
    #[new]
    #[pyo3(signature = (maps, weights, alpha = None))]
    fn new(maps: Vec<PyRef<'_, PyAffine>>, weights: Vec<f64>, alpha: Option<f64>) -> PyResult<Self> {
        let maps = maps.iter().map(|m| m.inner.clone()).collect();
        Ok(PySystem {
            inner: MaxPlusSystem::new(maps, weights, alpha).map_err(err)?,
        })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn is_contractive(&self) -> bool {
        self.inner.is_contractive()
    }

    /// Grey-level weights `d_j(s)` of the corresponding fuzzy system at `s`.
    #[pyo3(signature = (s, theta = None))]
    fn grey_levels(&self, s: f64, theta: Option<PyRef<'_, PyScale>>) -> Vec<f64> {
        let theta = theta.map(|t| t.inner).unwrap_or_default();
        grey_maps(&self.inner, theta).iter().map(|d| d.eval(s)).collect()
    }
}

#[pyclass(name = "Grid", frozen, skip_from_py_object, module = "idempo_py")]
#[derive(Clone)]
struct PyGrid {
    inner: Grid,
}

#[pymethods]
impl PyGrid {
    /// `cells` per axis; a single count applies to every axis.
    #[new]
    fn new(lower: Vec<f64>, upper: Vec<f64>, cells: Vec<usize>) -> PyResult<Self> {
        let cells = if cells.len() == 1 {
            vec![cells[0]; lower.len()]
        } else {
            cells
        };
        Ok(PyGrid {
            inner: Grid::new(&lower, &upper, &cells).map_err(err)?,
        })
    }

    #[getter]
    fn epsilon(&self) -> f64 {
        self.inner.epsilon()
    }

    #[getter]
    fn diameter(&self) -> f64 {
        self.inner.diameter()
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn cells(&self) -> Vec<usize> {
        self.inner.cells().to_vec()
    }

    fn project(&self, coords: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(self.inner.project(&point(&coords)?).coords().to_vec())
    }

    /// Dirac at the node nearest the box center.
    fn center_seed(&self) -> PyDensity {
        PyDensity {
            inner: engine::center_seed(&self.inner),
        }
    }

    fn __repr__(&self) -> String {
        format!("Grid(cells={:?}, epsilon={})", self.inner.cells(), self.inner.epsilon())
    }
}

#[pyclass(name = "RunPlan", frozen, module = "idempo_py")]
struct PyPlan {
    inner: idempo::RunPlan,
}

#[pymethods]
impl PyPlan {
    #[getter]
    fn iterations(&self) -> usize {
        self.inner.iterations
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn epsilon(&self) -> f64 {
        self.inner.epsilon()
    }

    #[getter]
    fn grid(&self) -> Option<PyGrid> {
        self.inner.grid.clone().map(|inner| PyGrid { inner })
    }

    fn error_bound(&self) -> f64 {
        self.inner.error_bound()
    }
}

#[pyclass(name = "Trace", frozen, module = "idempo_py")]
struct PyTrace {
    inner: IterationTrace,
}

#[pymethods]
impl PyTrace {
    #[getter]
    fn cardinalities(&self) -> Vec<usize> {
        self.inner.cardinalities.clone()
    }

    #[getter]
    fn residuals(&self) -> Vec<Option<f64>> {
        self.inner.residuals.clone()
    }

    #[getter]
    fn clamped(&self) -> usize {
        self.inner.total_clamped()
    }

    #[getter]
    fn density(&self) -> PyDensity {
        PyDensity {
            inner: self.inner.final_density.clone(),
        }
    }

    /// `d_θ(final, M(final))`.
    #[pyo3(signature = (system, grid = None))]
    fn residual(&self, py: Python<'_>, system: &PySystem, grid: Option<&PyGrid>) -> PyResult<f64> {
        let grid = grid.map(|g| &g.inner);
        py.detach(|| engine::fixed_point_check(&self.inner, &system.inner, grid))
            .map_err(err)
    }

    fn trace_jsonl(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        iio::write_trace(&self.inner, &mut buf).map_err(err)?;
        Ok(String::from_utf8(buf).expect("json is utf-8"))
    }
}

fn options(support_cap: Option<usize>, tuple_cap: Option<u64>, digits: Option<u32>, track: bool) -> RunOptions {
    let d = RunOptions::default();
    RunOptions {
        digits: digits.unwrap_or(d.digits),
        support_cap: support_cap.unwrap_or(d.support_cap),
        tuple_cap: tuple_cap.unwrap_or(d.tuple_cap),
        track_residuals: track,
    }
}

#[pyfunction]
fn markov_step(py: Python<'_>, mu: &PyDensity, system: &PySystem) -> PyResult<PyDensity> {
    let inner = py
        .detach(|| idempo::markov_step(&mu.inner, system.inner.weights(), system.inner.maps()))
        .map_err(err)?;
    Ok(PyDensity { inner })
}

#[pyfunction]
#[pyo3(signature = (u, system, theta = None))]
fn hutchinson_step(
    py: Python<'_>,
    u: &PyFuzzy,
    system: &PySystem,
    theta: Option<PyRef<'_, PyScale>>,
) -> PyResult<PyFuzzy> {
    let theta = theta.map(|t| t.inner).unwrap_or_default();
    let greys = grey_maps(&system.inner, theta);
    let inner = py
        .detach(|| fuzzy::hutchinson_step(&u.inner, system.inner.maps(), &greys))
        .map_err(err)?;
    Ok(PyFuzzy { inner })
}

#[pyfunction]
#[pyo3(signature = (a, b, metric = "euclidean"))]
fn hausdorff(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>, metric: &str) -> PyResult<f64> {
    let a = a.iter().map(|c| point(c)).collect::<PyResult<Vec<_>>>()?;
    let b = b.iter().map(|c| point(c)).collect::<PyResult<Vec<_>>>()?;
    idempo::hausdorff(&a, &b, self::metric(metric)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (u, v, metric = "euclidean"))]
fn fuzzy_distance(u: &PyFuzzy, v: &PyFuzzy, metric: &str) -> PyResult<f64> {
    idempo::fuzzy_distance(&u.inner, &v.inner, self::metric(metric)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (mu, nu, metric = "euclidean"))]
fn dtheta_distance(py: Python<'_>, mu: &PyDensity, nu: &PyDensity, metric: &str) -> PyResult<f64> {
    let m = self::metric(metric)?;
    py.detach(|| idempo::dtheta_distance(&mu.inner, &nu.inner, m))
        .map_err(err)
}

/// Smallest `N` (and a grid, when `box` is given instead of `grid`) with
/// `ε/(1-α) + α^N·D < δ`.
#[pyfunction]
#[pyo3(signature = (delta, alpha, diameter, grid = None, r#box = None))]
fn plan_iterations(
    delta: f64,
    alpha: f64,
    diameter: f64,
    grid: Option<&PyGrid>,
    r#box: Option<(Vec<f64>, Vec<f64>)>,
) -> PyResult<PyPlan> {
    let choice = match (grid, r#box) {
        (Some(g), None) => GridChoice::Fixed(g.inner.clone()),
        (None, Some((lower, upper))) => GridChoice::Free { lower, upper },
        (None, None) => GridChoice::Exact,
        (Some(_), Some(_)) => return Err(PyValueError::new_err("give grid or box, not both")),
    };
    Ok(PyPlan {
        inner: engine::plan_iterations(delta, alpha, diameter, choice).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (system, seed, n, digits = None, support_cap = None, track_residuals = false))]
fn run_deterministic(
    py: Python<'_>,
    system: &PySystem,
    seed: &PyDensity,
    n: usize,
    digits: Option<u32>,
    support_cap: Option<usize>,
    track_residuals: bool,
) -> PyResult<PyTrace> {
    let opts = options(support_cap, None, digits, track_residuals);
    let inner = py
        .detach(|| engine::run_deterministic(&system.inner, &seed.inner, n, &opts))
        .map_err(err)?;
    Ok(PyTrace { inner })
}

#[pyfunction]
#[pyo3(signature = (system, grid, seed, n, track_residuals = false))]
fn run_discrete(
    py: Python<'_>,
    system: &PySystem,
    grid: &PyGrid,
    seed: &PyDensity,
    n: usize,
    track_residuals: bool,
) -> PyResult<PyTrace> {
    let opts = options(None, None, None, track_residuals);
    let inner = py
        .detach(|| engine::run_discrete(&system.inner, &grid.inner, &seed.inner, n, &opts))
        .map_err(err)?;
    Ok(PyTrace { inner })
}

#[pyfunction]
#[pyo3(signature = (system, grid, seed, n, rule = "min", tuple_cap = None, track_residuals = false))]
#[allow(clippy::too_many_arguments)]
fn run_gifs(
    py: Python<'_>,
    system: &PySystem,
    grid: &PyGrid,
    seed: &PyDensity,
    n: usize,
    rule: &str,
    tuple_cap: Option<u64>,
    track_residuals: bool,
) -> PyResult<PyTrace> {
    let rule: CombineRule = rule.parse().map_err(err)?;
    let opts = options(None, tuple_cap, None, track_residuals);
    let inner = py
        .detach(|| engine::run_gifs(&system.inner, &grid.inner, &seed.inner, n, rule, &opts))
        .map_err(err)?;
    Ok(PyTrace { inner })
}

/// Parses, validates and runs a config text; returns the trace.
#[pyfunction]
fn run_config(py: Python<'_>, text: &str) -> PyResult<PyTrace> {
    let cfg = RunConfig::parse_unchecked(text).map_err(err)?;
    let out = py.detach(|| iio::execute(&cfg, false)).map_err(err)?;
    Ok(PyTrace { inner: out.trace })
}

/// Canonical text of a config after parsing and validation.
#[pyfunction]
fn normalize_config(text: &str) -> PyResult<String> {
    Ok(iio::parse_config(text).map_err(err)?.emit())
}

#[pyfunction]
fn render_pgm<'py>(
    py: Python<'py>,
    mu: &PyDensity,
    width: usize,
    height: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
) -> PyResult<Bound<'py, PyBytes>> {
    let spec = RenderSpec::new(width, height, &lower, &upper).map_err(err)?;
    let bytes = iio::render_pgm(&mu.inner, &spec).map_err(err)?;
    Ok(PyBytes::new(py, &bytes))
}

#[pymodule]
fn idempo_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ResourceError", m.py().get_type::<ResourceError>())?;
    m.add_class::<PyDensity>()?;
    m.add_class::<PyFuzzy>()?;
    m.add_class::<PyScale>()?;
    m.add_class::<PyAffine>()?;
    m.add_class::<PySystem>()?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyPlan>()?;
    m.add_class::<PyTrace>()?;
    m.add_function(wrap_pyfunction!(markov_step, m)?)?;
    m.add_function(wrap_pyfunction!(hutchinson_step, m)?)?;
    m.add_function(wrap_pyfunction!(hausdorff, m)?)?;
    m.add_function(wrap_pyfunction!(fuzzy_distance, m)?)?;
    m.add_function(wrap_pyfunction!(dtheta_distance, m)?)?;
    m.add_function(wrap_pyfunction!(plan_iterations, m)?)?;
    m.add_function(wrap_pyfunction!(run_deterministic, m)?)?;
    m.add_function(wrap_pyfunction!(run_discrete, m)?)?;
    m.add_function(wrap_pyfunction!(run_gifs, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_config, m)?)?;
    m.add_function(wrap_pyfunction!(render_pgm, m)?)?;
    Ok(())
}
