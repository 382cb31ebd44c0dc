//! Shared systems, generators and oracles for the integration suites.
#![allow(dead_code)]

use std::path::PathBuf;

use idempo::io::{parse_config, RunConfig};
use idempo::{AffineMap, DensityMap, MaxPlusSystem, Point};
use proptest::prelude::*;

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

pub fn load_config(name: &str) -> RunConfig {
    let text = std::fs::read_to_string(config_path(name)).unwrap();
    parse_config(&text).unwrap()
}

pub fn cantor() -> MaxPlusSystem {
    MaxPlusSystem::new(
        vec![
            AffineMap::new(1, 1, vec![1.0 / 3.0], vec![0.0]).unwrap(),
            AffineMap::new(1, 1, vec![1.0 / 3.0], vec![2.0 / 3.0]).unwrap(),
        ],
        vec![0.0, -1.0],
        None,
    )
    .unwrap()
}

pub fn density(dim: usize, entries: &[(Vec<f64>, f64)]) -> DensityMap {
    DensityMap::new(dim, entries.iter().map(|(c, v)| (Point::new(c), *v))).unwrap()
}

pub fn unit_point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, dim)
}

/// A normalized density with up to `max_len` points in the unit cube.
pub fn density_in(dim: usize, max_len: usize) -> impl Strategy<Value = DensityMap> {
    prop::collection::vec((unit_point(dim), -4.0..0.0f64), 1..=max_len).prop_map(move |mut e| {
        e[0].1 = 0.0;
        density(dim, &e)
    })
}

/// Two normalized densities of the same dimension.
pub fn density_pair(max_len: usize) -> impl Strategy<Value = (DensityMap, DensityMap)> {
    (1usize..=2).prop_flat_map(move |d| (density_in(d, max_len), density_in(d, max_len)))
}

fn affine(dim: usize, arity: usize, bound: f64) -> impl Strategy<Value = AffineMap> {
    (
        prop::collection::vec(-bound..bound, dim * dim * arity),
        unit_point(dim),
    )
        .prop_map(move |(m, b)| AffineMap::new(dim, arity, m, b).unwrap())
}

fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-4.0..0.0f64, n).prop_map(|mut w| {
        w[0] = 0.0;
        w
    })
}

/// A contractive IFS on `R^dim`: every entry is below `0.45` in absolute
/// value, so each matrix has Frobenius norm at most `0.9`.
pub fn contractive_system(dim: usize) -> impl Strategy<Value = MaxPlusSystem> {
    (1usize..=3).prop_flat_map(move |n| {
        (prop::collection::vec(affine(dim, 1, 0.45), n), weights(n))
            .prop_map(|(maps, w)| MaxPlusSystem::new(maps, w, None).unwrap())
    })
}

/// A system together with a density of matching dimension.
pub fn system_and_density(max_len: usize) -> impl Strategy<Value = (MaxPlusSystem, DensityMap)> {
    (1usize..=2).prop_flat_map(move |d| (contractive_system(d), density_in(d, max_len)))
}

pub fn system_and_pair(
    max_len: usize,
) -> impl Strategy<Value = (MaxPlusSystem, DensityMap, DensityMap)> {
    (1usize..=2).prop_flat_map(move |d| {
        (contractive_system(d), density_in(d, max_len), density_in(d, max_len))
    })
}

/// Pointwise comparison treating absent keys as `-inf`.
pub fn max_entry_gap(a: &DensityMap, b: &DensityMap) -> f64 {
    let mut gap: f64 = 0.0;
    for (p, v) in a.iter() {
        let w = b.get(p);
        if w == f64::NEG_INFINITY {
            return f64::INFINITY;
        }
        gap = gap.max((v - w).abs());
    }
    for (p, _) in b.iter() {
        if !a.contains(p) {
            return f64::INFINITY;
        }
    }
    gap
}
