//! Points of a box in R^d, d <= 3.
//!
//! Points compare and hash by the bit pattern of their coordinates, so two
//! points are the same support element exactly when every coordinate has the
//! same `f64` representation. Engines make sure equal points really are
//! bit-equal (grid projection or decimal quantization) before they are used
//! as keys.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 3;

#[derive(Clone, Copy)]
pub struct Point {
    coords: [f64; MAX_DIM],
    dim: u8,
}

impl Point {
    /// Panics if `coords` is empty or longer than [`MAX_DIM`].
    pub fn new(coords: &[f64]) -> Self {
        Self::try_new(coords).expect("point dimension must be 1..=3")
    }

    pub fn try_new(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(Error::Domain(format!(
                "point dimension {} outside 1..={MAX_DIM}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("point coordinates must be finite".into()));
        }
        let mut c = [0.0; MAX_DIM];
        for (dst, src) in c.iter_mut().zip(coords) {
            // -0.0 + 0.0 == +0.0: one bit pattern for zero
            *dst = *src + 0.0;
        }
        Ok(Point {
            coords: c,
            dim: coords.len() as u8,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim()]
    }

    pub fn get(&self, axis: usize) -> f64 {
        self.coords()[axis]
    }

    /// Rounds every coordinate to `digits` decimal digits.
    pub fn quantized(&self, digits: u32) -> Point {
        let scale = 10f64.powi(digits as i32);
        let mut c = [0.0; MAX_DIM];
        for (dst, src) in c.iter_mut().zip(self.coords()) {
            *dst = (src * scale).round() / scale + 0.0;
        }
        Point {
            coords: c,
            dim: self.dim,
        }
    }

    pub fn distance(&self, other: &Point, metric: Metric) -> f64 {
        metric.distance(self.coords(), other.coords())
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self
                .coords()
                .iter()
                .zip(other.coords())
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        for c in self.coords() {
            c.to_bits().hash(state);
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on coordinates; used to give serialized outputs a stable order.
impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim.cmp(&other.dim).then_with(|| {
            self.coords()
                .iter()
                .zip(other.coords())
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords())
    }
}

/// Distance on points of the box.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Metric {
    #[default]
    Euclidean,
    /// Max-coordinate distance, handy for grid diagnostics.
    Chebyshev,
}

impl Metric {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Metric::Chebyshev => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_zero_is_zero() {
        assert_eq!(Point::new(&[-0.0, 1.0]), Point::new(&[0.0, 1.0]));
    }

    #[test]
    fn quantization_merges_drift() {
        let a = Point::new(&[0.1 + 0.2]);
        let b = Point::new(&[0.3]);
        assert_ne!(a, b);
        assert_eq!(a.quantized(12), b.quantized(12));
    }

    #[test]
    fn rejects_bad_dimension() {
        assert!(Point::try_new(&[]).is_err());
        assert!(Point::try_new(&[0.0; 4]).is_err());
        assert!(Point::try_new(&[f64::NAN]).is_err());
    }

    #[test]
    fn metrics() {
        let a = Point::new(&[0.0, 0.0]);
        let b = Point::new(&[3.0, 4.0]);
        assert_eq!(a.distance(&b, Metric::Euclidean), 5.0);
        assert_eq!(a.distance(&b, Metric::Chebyshev), 4.0);
    }
}
