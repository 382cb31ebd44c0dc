//! Binary greyscale rendering of a density.
//!
//! Space has x to the right and y up; image row 0 is the top of the box.
//! Points on a pixel boundary go to the lower row/column index. A pixel with
//! no support point is white (255); a pixel holding density `λ` gets
//! `round(230·λ/λ_min)`, with `λ_min` the smallest finite density of the
//! measure, so the densest points are black and the support never fades into
//! the background. Several points in one pixel: the largest density wins.

use crate::error::{Error, Result};
use crate::maxplus::DensityMap;

/// Grey level of the least dense support pixels.
pub const SUPPORT_GREY_CAP: f64 = 230.0;

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub width: usize,
    pub height: usize,
    /// Box corners on the first two axes (the second is ignored in 1-D).
    pub lower: [f64; 2],
    pub upper: [f64; 2],
}

impl RenderSpec {
    pub fn new(width: usize, height: usize, lower: &[f64], upper: &[f64]) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Domain("image must be at least 1x1".into()));
        }
        let mut lo = [0.0, 0.0];
        let mut hi = [1.0, 1.0];
        let n = lower.len().min(upper.len()).min(2);
        lo[..n].copy_from_slice(&lower[..n]);
        hi[..n].copy_from_slice(&upper[..n]);
        if !(lo[0] < hi[0] && lo[1] < hi[1]) || lo.iter().chain(&hi).any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("degenerate render box {lo:?}..{hi:?}")));
        }
        Ok(RenderSpec {
            width,
            height,
            lower: lo,
            upper: hi,
        })
    }

    /// Pixel index along an axis of `n` pixels, boundaries to the lower index.
    fn bin(t: f64, n: usize) -> usize {
        let k = (t * n as f64).ceil() - 1.0;
        k.clamp(0.0, (n - 1) as f64) as usize
    }

    pub fn column(&self, x: f64) -> usize {
        Self::bin((x - self.lower[0]) / (self.upper[0] - self.lower[0]), self.width)
    }

    pub fn row(&self, y: f64) -> usize {
        Self::bin((self.upper[1] - y) / (self.upper[1] - self.lower[1]), self.height)
    }
}

pub fn render_pgm(mu: &DensityMap, spec: &RenderSpec) -> Result<Vec<u8>> {
    let (w, h) = (spec.width, spec.height);
    let mut cells = vec![f64::NEG_INFINITY; w * h];
    for (p, v) in mu.iter() {
        let col = spec.column(p.get(0));
        let rows = if p.dim() >= 2 {
            let r = spec.row(p.get(1));
            r..r + 1
        } else {
            0..h
        };
        for r in rows {
            let cell = &mut cells[r * w + col];
            *cell = cell.max(v);
        }
    }
    let lambda_min = mu.min_density();
    let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
    out.extend(cells.iter().map(|&v| {
        if v == f64::NEG_INFINITY {
            255u8
        } else if lambda_min == 0.0 {
            0
        } else {
            (SUPPORT_GREY_CAP * v / lambda_min).round() as u8
        }
    }));
    Ok(out)
}
