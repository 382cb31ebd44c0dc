//! Line-oriented run configuration.
//!
//! ```text
//! # comment
//! [space]
//! dim = 2
//! lower = 0, 0
//! upper = 1, 1
//!
//! [map]            # repeated, one per map
//! row = 0.5, 0     # repeated, `dim` rows of `arity * dim` entries
//! row = 0, 0.5
//! offset = 0, 0
//! weight = 0
//!
//! [run]
//! algorithm = discrete
//! cells = 512
//! iterations = 11
//!
//! [output]
//! pgm = out.pgm
//! ```
//!
//! The full key list is in `docs/config-format.md`. Parsing is two-stage:
//! [`RunConfig::parse_unchecked`] only checks syntax and key names, and
//! [`RunConfig::validate`] enforces the system and grid invariants, so the
//! command line can override fields in between.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::engine::{plan_iterations, CombineRule, GridChoice, RunOptions, RunPlan};
use crate::error::{Error, Result};
use crate::fuzzy::ScaleFunction;
use crate::ifs::{AffineMap, Grid, MaxPlusSystem};
use crate::io::pgm::RenderSpec;
use crate::maxplus::{validate_weights, DensityMap};
use crate::point::{Point, MAX_DIM};

/// Random tuple pairs drawn by the Edelstein check of a GIFS.
const EDELSTEIN_SAMPLES: usize = 2000;
const EDELSTEIN_SEED: u64 = 0x1d3e;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Determin,
    Discrete,
    Gifs,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Determin => "determin",
            Algorithm::Discrete => "discrete",
            Algorithm::Gifs => "gifs",
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "determin" => Ok(Algorithm::Determin),
            "discrete" => Ok(Algorithm::Discrete),
            "gifs" => Ok(Algorithm::Gifs),
            _ => Err(format!("unknown algorithm `{s}` (determin, discrete, gifs)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpaceSection {
    pub dim: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapConfig {
    /// `None` means arity 1.
    pub arity: Option<usize>,
    pub rows: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
    pub weight: f64,
}

impl MapConfig {
    pub fn arity(&self) -> usize {
        self.arity.unwrap_or(1)
    }
}

/// Unset keys keep their defaults and are not emitted.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSection {
    pub algorithm: Algorithm,
    pub cells: Option<Vec<usize>>,
    pub iterations: Option<usize>,
    pub delta: Option<f64>,
    pub theta_base: Option<f64>,
    pub combine: Option<CombineRule>,
    pub seed: Option<Vec<f64>>,
    pub alpha: Option<f64>,
    pub diameter: Option<f64>,
    pub digits: Option<u32>,
    pub support_cap: Option<usize>,
    pub tuple_cap: Option<u64>,
    pub allow_noncontractive: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct OutputSection {
    pub pgm: Option<String>,
    pub csv: Option<String>,
    pub trace: Option<String>,
    pub width: Option<usize>,
    pub height: Option<usize>,
    pub residuals: Option<bool>,
}

/// Where each key came from, for diagnostics. Ignored by `==`.
#[derive(Clone, Debug, Default)]
struct Origins(Vec<(String, String, usize)>);

impl PartialEq for Origins {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Origins {
    fn line(&self, section: &str, key: &str) -> usize {
        self.0
            .iter()
            .find(|(s, k, _)| s == section && k == key)
            .map(|e| e.2)
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub space: SpaceSection,
    pub maps: Vec<MapConfig>,
    pub run: RunSection,
    pub output: OutputSection,
    origins: Origins,
}

fn config_error(line: usize, section: &str, key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        section: section.to_string(),
        key: key.to_string(),
        message: message.into(),
    }
}

fn parse_list<T: FromStr>(value: &str) -> std::result::Result<Vec<T>, String> {
    value
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<T>().map_err(|_| format!("cannot parse `{s}`"))
        })
        .collect()
}

fn parse_one<T: FromStr>(value: &str) -> std::result::Result<T, String> {
    value.parse::<T>().map_err(|_| format!("cannot parse `{value}`"))
}

fn parse_float(value: &str) -> std::result::Result<f64, String> {
    let v: f64 = parse_one(value)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{value}` is not a finite number"))
    }
}

fn parse_floats(value: &str) -> std::result::Result<Vec<f64>, String> {
    let v: Vec<f64> = parse_list(value)?;
    if v.iter().all(|x| x.is_finite()) {
        Ok(v)
    } else {
        Err(format!("`{value}` has a non-finite entry"))
    }
}

fn parse_bool(value: &str) -> std::result::Result<bool, String> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected true or false, got `{value}`")),
    }
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

#[derive(Default)]
struct MapDraft {
    arity: Option<usize>,
    rows: Vec<Vec<f64>>,
    offset: Option<Vec<f64>>,
    weight: Option<f64>,
    header: usize,
}

impl RunConfig {
    /// Syntax and key names only; see [`RunConfig::validate`].
    pub fn parse_unchecked(text: &str) -> Result<Self> {
        let mut origins = Origins::default();
        let mut section = String::new();
        let mut map_count = 0usize;
        let mut seen: Vec<(String, String)> = Vec::new();

        let mut dim: Option<usize> = None;
        let mut lower: Option<Vec<f64>> = None;
        let mut upper: Option<Vec<f64>> = None;
        let mut maps: Vec<MapDraft> = Vec::new();
        let mut algorithm: Option<Algorithm> = None;
        let mut run_seen = false;
        let mut output = OutputSection::default();
        let mut output_seen = false;
        let mut space_seen = false;

        let mut run = RunSection {
            algorithm: Algorithm::Discrete,
            cells: None,
            iterations: None,
            delta: None,
            theta_base: None,
            combine: None,
            seed: None,
            alpha: None,
            diameter: None,
            digits: None,
            support_cap: None,
            tuple_cap: None,
            allow_noncontractive: None,
        };

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = match raw.find('#') {
                Some(k) => &raw[..k],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim();
                match name {
                    "space" | "run" | "output" => {
                        let flag = match name {
                            "space" => &mut space_seen,
                            "run" => &mut run_seen,
                            _ => &mut output_seen,
                        };
                        if *flag {
                            return Err(config_error(line_no, name, "-", "section appears twice"));
                        }
                        *flag = true;
                        section = name.to_string();
                    }
                    "map" => {
                        map_count += 1;
                        section = format!("map {map_count}");
                        maps.push(MapDraft {
                            header: line_no,
                            ..MapDraft::default()
                        });
                    }
                    other => {
                        return Err(config_error(line_no, other, "-", "unknown section"));
                    }
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| config_error(line_no, &section, line, "expected `key = value`"))?;
            if section.is_empty() {
                return Err(config_error(line_no, "-", key, "key outside any section"));
            }
            if value.is_empty() {
                return Err(config_error(line_no, &section, key, "empty value"));
            }
            let repeatable = section.starts_with("map") && key == "row";
            if !repeatable {
                if seen.iter().any(|(s, k)| *s == section && k == key) {
                    return Err(config_error(line_no, &section, key, "duplicate key"));
                }
                seen.push((section.clone(), key.to_string()));
            }
            origins.0.push((section.clone(), key.to_string(), line_no));
            let err = |m: String| config_error(line_no, &section, key, m);

            if section == "space" {
                match key {
                    "dim" => dim = Some(parse_one(value).map_err(err)?),
                    "lower" => lower = Some(parse_floats(value).map_err(err)?),
                    "upper" => upper = Some(parse_floats(value).map_err(err)?),
                    _ => return Err(err("unknown key".into())),
                }
            } else if section.starts_with("map") {
                let m = maps.last_mut().expect("inside a map section");
                match key {
                    "arity" => m.arity = Some(parse_one(value).map_err(err)?),
                    "row" => m.rows.push(parse_floats(value).map_err(err)?),
                    "offset" => m.offset = Some(parse_floats(value).map_err(err)?),
                    "weight" => m.weight = Some(parse_float(value).map_err(err)?),
                    _ => return Err(err("unknown key".into())),
                }
            } else if section == "run" {
                let r = &mut run;
                match key {
                    "algorithm" => algorithm = Some(value.parse().map_err(err)?),
                    "cells" => r.cells = Some(parse_list(value).map_err(err)?),
                    "iterations" => r.iterations = Some(parse_one(value).map_err(err)?),
                    "delta" => r.delta = Some(parse_float(value).map_err(err)?),
                    "theta_base" => r.theta_base = Some(parse_float(value).map_err(err)?),
                    "combine" => {
                        r.combine = Some(value.parse().map_err(|e: Error| err(e.to_string()))?)
                    }
                    "seed" => r.seed = Some(parse_floats(value).map_err(err)?),
                    "alpha" => r.alpha = Some(parse_float(value).map_err(err)?),
                    "diameter" => r.diameter = Some(parse_float(value).map_err(err)?),
                    "digits" => r.digits = Some(parse_one(value).map_err(err)?),
                    "support_cap" => r.support_cap = Some(parse_one(value).map_err(err)?),
                    "tuple_cap" => r.tuple_cap = Some(parse_one(value).map_err(err)?),
                    "allow_noncontractive" => {
                        r.allow_noncontractive = Some(parse_bool(value).map_err(err)?)
                    }
                    _ => return Err(err("unknown key".into())),
                }
            } else {
                let o = &mut output;
                match key {
                    "pgm" => o.pgm = Some(value.to_string()),
                    "csv" => o.csv = Some(value.to_string()),
                    "trace" => o.trace = Some(value.to_string()),
                    "width" => o.width = Some(parse_one(value).map_err(err)?),
                    "height" => o.height = Some(parse_one(value).map_err(err)?),
                    "residuals" => o.residuals = Some(parse_bool(value).map_err(err)?),
                    _ => return Err(err("unknown key".into())),
                }
            }
        }

        let missing = |s: &str| config_error(0, s, "-", "missing section");
        if !space_seen {
            return Err(missing("space"));
        }
        if maps.is_empty() {
            return Err(missing("map"));
        }
        if !run_seen {
            return Err(missing("run"));
        }
        let need = |s: &str, k: &str| config_error(0, s, k, "missing key");
        let space = SpaceSection {
            dim: dim.ok_or_else(|| need("space", "dim"))?,
            lower: lower.ok_or_else(|| need("space", "lower"))?,
            upper: upper.ok_or_else(|| need("space", "upper"))?,
        };
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                let s = format!("map {}", i + 1);
                let missing = |k: &str| config_error(m.header, &s, k, "missing key");
                if m.rows.is_empty() {
                    return Err(missing("row"));
                }
                Ok(MapConfig {
                    arity: m.arity,
                    offset: m.offset.clone().ok_or_else(|| missing("offset"))?,
                    weight: m.weight.ok_or_else(|| missing("weight"))?,
                    rows: m.rows,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        run.algorithm = algorithm.ok_or_else(|| need("run", "algorithm"))?;

        Ok(RunConfig {
            space,
            maps,
            run,
            output,
            origins,
        })
    }

    fn fail(&self, section: &str, key: &str, message: impl Into<String>) -> Error {
        config_error(self.origins.line(section, key), section, key, message)
    }

    /// Enforces the invariants of the space, the system and the grid.
    pub fn validate(&self) -> Result<()> {
        let s = &self.space;
        if s.dim == 0 || s.dim > MAX_DIM {
            return Err(self.fail("space", "dim", format!("must be 1..={MAX_DIM}")));
        }
        for (key, v) in [("lower", &s.lower), ("upper", &s.upper)] {
            if v.len() != s.dim {
                return Err(self.fail("space", key, format!("needs {} entries", s.dim)));
            }
        }
        if s.lower.iter().zip(&s.upper).any(|(l, u)| l >= u) {
            return Err(self.fail("space", "upper", "every upper bound must exceed its lower bound"));
        }

        let arity = self.maps[0].arity();
        for (i, m) in self.maps.iter().enumerate() {
            let sec = format!("map {}", i + 1);
            if m.arity() == 0 {
                return Err(self.fail(&sec, "arity", "must be at least 1"));
            }
            if m.arity() != arity {
                return Err(self.fail(&sec, "arity", "all maps must share one arity"));
            }
            if m.rows.len() != s.dim {
                return Err(self.fail(&sec, "row", format!("needs {} rows", s.dim)));
            }
            if let Some(r) = m.rows.iter().find(|r| r.len() != arity * s.dim) {
                return Err(self.fail(
                    &sec,
                    "row",
                    format!("row has {} entries, expected {}", r.len(), arity * s.dim),
                ));
            }
            if m.offset.len() != s.dim {
                return Err(self.fail(&sec, "offset", format!("needs {} entries", s.dim)));
            }
        }
        let weights: Vec<f64> = self.maps.iter().map(|m| m.weight).collect();
        if let Err(e) = validate_weights(&weights) {
            let worst = weights
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i + 1)
                .unwrap_or(1);
            return Err(self.fail(&format!("map {worst}"), "weight", e.to_string()));
        }

        let r = &self.run;
        match (r.algorithm, arity) {
            (Algorithm::Gifs, 1) => {
                return Err(self.fail("run", "algorithm", "gifs needs maps of arity >= 2"))
            }
            (Algorithm::Determin | Algorithm::Discrete, a) if a > 1 => {
                return Err(self.fail(
                    "run",
                    "algorithm",
                    format!("{} needs maps of arity 1, found {a}", r.algorithm.name()),
                ))
            }
            _ => {}
        }
        if r.algorithm == Algorithm::Gifs && r.alpha.is_none() {
            return Err(self.fail("run", "alpha", "gifs runs need a declared contraction factor"));
        }
        if r.algorithm == Algorithm::Determin && r.cells.is_some() {
            return Err(self.fail("run", "cells", "determin runs use exact maps, not a grid"));
        }
        if let Some(cells) = &r.cells {
            if cells.len() != 1 && cells.len() != s.dim {
                return Err(self.fail("run", "cells", format!("give 1 or {} counts", s.dim)));
            }
            if cells.iter().any(|&c| c < 2) {
                return Err(self.fail("run", "cells", "need at least 2 cells per axis"));
            }
        }
        if r.algorithm != Algorithm::Determin && r.cells.is_none() && r.delta.is_none() {
            return Err(self.fail("run", "cells", "grid runs need cells or delta"));
        }
        if r.iterations.is_none() && r.delta.is_none() {
            return Err(self.fail("run", "iterations", "give iterations or delta"));
        }
        if let Some(d) = r.delta {
            if d <= 0.0 {
                return Err(self.fail("run", "delta", "must be positive"));
            }
        }
        if let Some(b) = r.theta_base {
            if b <= 1.0 {
                return Err(self.fail("run", "theta_base", "base must exceed 1"));
            }
        }
        if let Some(d) = r.diameter {
            if d < 0.0 {
                return Err(self.fail("run", "diameter", "must be >= 0"));
            }
        }
        if let Some(seed) = &r.seed {
            if seed.len() != s.dim {
                return Err(self.fail("run", "seed", format!("needs {} coordinates", s.dim)));
            }
            let inside = (0..s.dim).all(|a| s.lower[a] <= seed[a] && seed[a] <= s.upper[a]);
            if !inside {
                return Err(self.fail("run", "seed", "seed lies outside the box"));
            }
        }
        if r.digits.is_some_and(|d| d > 15) {
            return Err(self.fail("run", "digits", "at most 15 decimals"));
        }
        if self.output.width == Some(0) || self.output.height == Some(0) {
            return Err(self.fail("output", "width", "image size must be at least 1"));
        }

        let sys = self
            .system()
            .map_err(|e| self.fail("map 1", "row", e.to_string()))?;
        let allow = r.allow_noncontractive.unwrap_or(false);
        if !sys.is_contractive() && !allow {
            let key = if arity == 1 { "allow_noncontractive" } else { "alpha" };
            return Err(self.fail(
                "run",
                key,
                format!(
                    "contraction factor {} is not below 1; set allow_noncontractive = true to run anyway",
                    sys.alpha()
                ),
            ));
        }
        if !sys.is_contractive() && r.iterations.is_none() {
            return Err(self.fail("run", "iterations", "a non-contractive system needs explicit iterations"));
        }
        if arity > 1 && !allow {
            let box_grid = Grid::uniform(&s.lower, &s.upper, 2)?;
            let bad = sys.edelstein_violations(&box_grid, EDELSTEIN_SAMPLES, EDELSTEIN_SEED);
            if bad > 0 {
                return Err(self.fail(
                    "run",
                    "alpha",
                    format!("{bad} of {EDELSTEIN_SAMPLES} sampled tuple pairs are not contracted"),
                ));
            }
        }
        self.grid()
            .map_err(|e| self.fail("run", "cells", e.to_string()))?;
        if r.delta.is_some() && sys.is_contractive() {
            self.plan()
                .map_err(|e| self.fail("run", "delta", e.to_string()))?;
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.maps[0].arity()
    }

    pub fn system(&self) -> Result<MaxPlusSystem> {
        let maps = self
            .maps
            .iter()
            .map(|m| AffineMap::from_rows(&m.rows, m.offset.clone()))
            .collect::<Result<Vec<_>>>()?;
        let weights = self.maps.iter().map(|m| m.weight).collect();
        MaxPlusSystem::new(maps, weights, self.run.alpha)
    }

    fn box_choice(&self) -> Result<GridChoice> {
        Ok(match (&self.run.cells, self.run.algorithm) {
            (_, Algorithm::Determin) => GridChoice::Exact,
            (Some(cells), _) => {
                let cells = if cells.len() == 1 {
                    vec![cells[0]; self.space.dim]
                } else {
                    cells.clone()
                };
                GridChoice::Fixed(Grid::new(&self.space.lower, &self.space.upper, &cells)?)
            }
            (None, _) => GridChoice::Free {
                lower: self.space.lower.clone(),
                upper: self.space.upper.clone(),
            },
        })
    }

    /// The grid of a discrete or GIFS run (`None` for determin).
    pub fn grid(&self) -> Result<Option<Grid>> {
        match self.box_choice()? {
            GridChoice::Exact => Ok(None),
            GridChoice::Fixed(g) => Ok(Some(g)),
            GridChoice::Free { .. } => Ok(self.plan()?.grid),
        }
    }

    /// Diameter bound `D` used by the planner; defaults to the box diagonal.
    pub fn diameter(&self) -> f64 {
        self.run.diameter.unwrap_or_else(|| {
            self.space
                .lower
                .iter()
                .zip(&self.space.upper)
                .map(|(l, u)| (u - l).powi(2))
                .sum::<f64>()
                .sqrt()
        })
    }

    /// Planner output for `delta`; errors when no delta is configured.
    pub fn plan(&self) -> Result<RunPlan> {
        let delta = self
            .run
            .delta
            .ok_or_else(|| self.fail("run", "delta", "no target resolution configured"))?;
        let sys = self.system()?;
        let mut plan = plan_iterations(delta, sys.alpha(), self.diameter(), self.box_choice()?)?;
        plan.rule = self.combine();
        Ok(plan)
    }

    /// Explicit iterations win over the planner.
    pub fn iterations(&self) -> Result<usize> {
        match self.run.iterations {
            Some(n) => Ok(n),
            None => Ok(self.plan()?.iterations),
        }
    }

    pub fn combine(&self) -> CombineRule {
        self.run.combine.unwrap_or_default()
    }

    pub fn theta(&self) -> Result<ScaleFunction> {
        match self.run.theta_base {
            Some(b) => ScaleFunction::exponential(b),
            None => Ok(ScaleFunction::default()),
        }
    }

    pub fn options(&self) -> RunOptions {
        let d = RunOptions::default();
        RunOptions {
            digits: self.run.digits.unwrap_or(d.digits),
            support_cap: self.run.support_cap.unwrap_or(d.support_cap),
            tuple_cap: self.run.tuple_cap.unwrap_or(d.tuple_cap),
            track_residuals: self.output.residuals.unwrap_or(false),
        }
    }

    /// Dirac at the configured seed (box center by default), moved to the
    /// nearest node for grid runs.
    pub fn seed_density(&self) -> Result<DensityMap> {
        let center: Vec<f64> = self
            .space
            .lower
            .iter()
            .zip(&self.space.upper)
            .map(|(l, u)| 0.5 * (l + u))
            .collect();
        let p = Point::try_new(self.run.seed.as_deref().unwrap_or(&center))?;
        Ok(match self.grid()? {
            Some(g) => DensityMap::dirac(g.project(&p)),
            None => DensityMap::dirac(p),
        })
    }

    /// Image size defaults to 512 pixels per side, 64 rows tall in 1-D.
    pub fn render_spec(&self) -> Result<RenderSpec> {
        let width = self.output.width.unwrap_or(512);
        let height = self
            .output
            .height
            .unwrap_or(if self.space.dim == 1 { 64 } else { 512 });
        RenderSpec::new(width, height, &self.space.lower, &self.space.upper)
    }

    /// Output path resolved against `base` (usually the config's directory).
    pub fn output_path(&self, base: &Path, which: &str) -> Option<PathBuf> {
        let rel = match which {
            "pgm" => self.output.pgm.as_ref(),
            "csv" => self.output.csv.as_ref(),
            "trace" => self.output.trace.as_ref(),
            _ => None,
        }?;
        Some(base.join(rel))
    }

    /// Canonical text; `parse_unchecked(emit(c))` equals `c`.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let s = &self.space;
        let _ = writeln!(out, "[space]");
        let _ = writeln!(out, "dim = {}", s.dim);
        let _ = writeln!(out, "lower = {}", join(&s.lower));
        let _ = writeln!(out, "upper = {}", join(&s.upper));
        for m in &self.maps {
            let _ = writeln!(out, "\n[map]");
            if let Some(a) = m.arity {
                let _ = writeln!(out, "arity = {a}");
            }
            for row in &m.rows {
                let _ = writeln!(out, "row = {}", join(row));
            }
            let _ = writeln!(out, "offset = {}", join(&m.offset));
            let _ = writeln!(out, "weight = {}", m.weight);
        }
        let r = &self.run;
        let _ = writeln!(out, "\n[run]");
        let _ = writeln!(out, "algorithm = {}", r.algorithm.name());
        macro_rules! opt {
            ($key:literal, $v:expr) => {
                if let Some(v) = &$v {
                    let _ = writeln!(out, concat!($key, " = {}"), v);
                }
            };
        }
        if let Some(c) = &r.cells {
            let _ = writeln!(out, "cells = {}", join(c));
        }
        opt!("iterations", r.iterations);
        opt!("delta", r.delta);
        opt!("theta_base", r.theta_base);
        if let Some(c) = r.combine {
            let _ = writeln!(out, "combine = {}", c.name());
        }
        if let Some(seed) = &r.seed {
            let _ = writeln!(out, "seed = {}", join(seed));
        }
        opt!("alpha", r.alpha);
        opt!("diameter", r.diameter);
        opt!("digits", r.digits);
        opt!("support_cap", r.support_cap);
        opt!("tuple_cap", r.tuple_cap);
        opt!("allow_noncontractive", r.allow_noncontractive);
        let o = &self.output;
        if *o != OutputSection::default() {
            let _ = writeln!(out, "\n[output]");
            opt!("pgm", o.pgm);
            opt!("csv", o.csv);
            opt!("trace", o.trace);
            opt!("width", o.width);
            opt!("height", o.height);
            opt!("residuals", o.residuals);
        }
        out
    }
}

/// Parses and validates a config.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg = RunConfig::parse_unchecked(text)?;
    cfg.validate()?;
    Ok(cfg)
}
