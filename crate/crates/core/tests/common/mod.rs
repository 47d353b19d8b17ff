//! Strategies and brute-force oracles shared by the property tests. The
//! oracles work on raw integer coordinates and bitmask subsets so they share
//! no code with the library.

#![allow(dead_code)]

use dhl_core::{AxisBox, Point, PointSet};
use proptest::prelude::*;

pub type IntBox = Vec<(i64, i64)>;
pub type IntPoint = Vec<i64>;

pub fn int_box(dim: usize, range: i64) -> impl Strategy<Value = IntBox> {
    prop::collection::vec((0..=range, 0..=range).prop_map(|(a, b)| (a.min(b), a.max(b))), dim)
}

pub fn int_point(dim: usize, range: i64) -> impl Strategy<Value = IntPoint> {
    prop::collection::vec(0..=range, dim)
}

/// Dimension, boxes and points with sizes in the given ranges.
pub fn family(
    dims: std::ops::RangeInclusive<usize>,
    boxes: std::ops::RangeInclusive<usize>,
    points: std::ops::RangeInclusive<usize>,
    range: i64,
) -> impl Strategy<Value = (usize, Vec<IntBox>, Vec<IntPoint>)> {
    dims.prop_flat_map(move |d| {
        (
            Just(d),
            prop::collection::vec(int_box(d, range), boxes.clone()),
            prop::collection::vec(int_point(d, range), points.clone()),
        )
    })
}

pub fn to_boxes(raw: &[IntBox]) -> Vec<AxisBox> {
    raw.iter().map(|b| AxisBox::from_ints(b)).collect()
}

pub fn to_points(dim: usize, raw: &[IntPoint]) -> PointSet {
    PointSet::new(dim, raw.iter().map(|p| Point::from_ints(p))).unwrap()
}

pub fn inside(b: &IntBox, p: &IntPoint) -> bool {
    b.iter().zip(p).all(|(&(lo, hi), &x)| lo <= x && x <= hi)
}

pub fn distinct(raw: &[IntPoint]) -> Vec<IntPoint> {
    let mut v = raw.to_vec();
    v.sort();
    v.dedup();
    v
}

/// Distinct points lying in every box selected by `mask`.
pub fn captured(boxes: &[IntBox], mask: u32, points: &[IntPoint]) -> Vec<IntPoint> {
    distinct(points)
        .into_iter()
        .filter(|p| (0..boxes.len()).filter(|&i| mask >> i & 1 == 1).all(|i| inside(&boxes[i], p)))
        .collect()
}

pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u32> {
    (0u32..1 << n).filter(move |m| m.count_ones() as usize == k)
}

/// Whether every `k` boxes (or all, when fewer) share `count` points.
pub fn every_k_capture(boxes: &[IntBox], points: &[IntPoint], k: usize, count: usize) -> bool {
    subsets_of_size(boxes.len(), k.min(boxes.len())).all(|m| captured(boxes, m, points).len() >= count)
}

pub fn to_int_point(p: &Point) -> IntPoint {
    p.coords()
        .iter()
        .map(|c| {
            assert!(c.is_integer());
            i64::try_from(c.to_integer()).unwrap()
        })
        .collect()
}
