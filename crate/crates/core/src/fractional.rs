//! Fractional and (p,q) measurements, box intermixing, piercing sets and the
//! few-colors search.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bits::{intersect_all, BitSet};
use crate::combinatorics::{binomial, ensure_within, Combinations};
use crate::error::{check_dim, Error, Result};
use crate::geometry::{bbox, box_intersection, box_masks, AxisBox, Point, PointSet};
use crate::helly::{check_colorful_hypothesis, Certificate, ColoredInstance, Target};
use crate::rational::{int, Rational};

/// Exact α/β measurements for one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionReport {
    pub dim: usize,
    pub tuple_size: usize,
    /// Fraction of `tuple_size`-subfamilies whose intersection meets `S`.
    pub alpha: Rational,
    /// Largest fraction of boxes sharing one point of `S`.
    pub beta: Rational,
    /// The first point of `S` attaining `beta`.
    pub point: Option<Point>,
    /// `(1−β)^{2d−1} ≤ 1−α`; only evaluated when `tuple_size = 2d`.
    pub bound_pass: Option<bool>,
    /// `(1−β)^{2d} ≤ 1−α`; only evaluated when `tuple_size = 2d`.
    pub relaxed_bound_pass: Option<bool>,
}

/// Fraction of `k`-subsets of `boxes` whose intersection contains a point of
/// `points`.
pub fn tuple_hit_fraction(boxes: &[AxisBox], points: &PointSet, k: usize, guard: u64) -> Result<Rational> {
    let n = boxes.len();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("tuple size {k} outside 1..={n}")));
    }
    let total = binomial(n, k);
    ensure_within(total, guard)?;
    let masks = box_masks(boxes, points)?;
    let len = points.distinct_len();
    let hits = Combinations::new(n, k)
        .filter(|c| !intersect_all(len, c.iter().map(|&i| &masks[i])).is_clear())
        .count();
    Ok(Rational::new(BigInt::from(hits), BigInt::from(total)))
}

/// A point of `S` together with the boxes containing it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommonSubfamily {
    pub point: Option<Point>,
    pub members: Vec<usize>,
}

/// The first point of `S` (lexicographically) lying in the most boxes. No
/// point is reported when no box meets `S`.
pub fn max_common_subfamily(boxes: &[AxisBox], points: &PointSet) -> Result<CommonSubfamily> {
    let masks = box_masks(boxes, points)?;
    let mut best = CommonSubfamily::default();
    for (si, s) in points.iter().enumerate() {
        let members: Vec<usize> = (0..boxes.len()).filter(|&b| masks[b].contains(si)).collect();
        if members.len() > best.members.len() {
            best = CommonSubfamily { point: Some(s.clone()), members };
        }
    }
    Ok(best)
}

fn power(base: &Rational, exp: usize) -> Rational {
    (0..exp).fold(Rational::one(), |acc, _| acc * base)
}

/// α over `k`-tuples and β. When `k = 2d` the bound `(1−β)^{2d−1} ≤ 1−α` is
/// checked in exact arithmetic, with its exponent-`2d` relaxation alongside.
pub fn fraction_report(boxes: &[AxisBox], points: &PointSet, k: usize, guard: u64) -> Result<FractionReport> {
    if boxes.is_empty() {
        return Err(Error::EmptyFamily("fraction of an empty family"));
    }
    let d = points.dim();
    let alpha = tuple_hit_fraction(boxes, points, k, guard)?;
    let common = max_common_subfamily(boxes, points)?;
    let beta = Rational::new(BigInt::from(common.members.len()), BigInt::from(boxes.len()));
    let (bound_pass, relaxed_bound_pass) = if k == 2 * d {
        let slack = Rational::one() - &alpha;
        let miss = Rational::one() - &beta;
        (Some(power(&miss, 2 * d - 1) <= slack), Some(power(&miss, 2 * d) <= slack))
    } else {
        (None, None)
    };
    Ok(FractionReport { dim: d, tuple_size: k, alpha, beta, point: common.point, bound_pass, relaxed_bound_pass })
}

/// [`fraction_report`] over `2d`-tuples.
pub fn verify_fractional_strong(boxes: &[AxisBox], points: &PointSet, guard: u64) -> Result<FractionReport> {
    fraction_report(boxes, points, 2 * points.dim(), guard)
}

/// α over `(d+1)`-tuples (capped at the family size) and β; no bound is
/// claimed.
pub fn measure_fractional_small(boxes: &[AxisBox], points: &PointSet, guard: u64) -> Result<FractionReport> {
    fraction_report(boxes, points, (points.dim() + 1).min(boxes.len()), guard)
}

/// `m` slabs `{x_i = t/(m+1)} × [0,1]^{d−1}` per axis (axis-major order) and
/// the `m^d` points where one slab from each axis cross.
pub fn slab_instance(dim: usize, m: usize) -> Result<(Vec<AxisBox>, PointSet)> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { min: 2, found: dim });
    }
    if m == 0 {
        return Err(Error::InvalidArgument("at least one slab per axis is required".into()));
    }
    let level = |t: usize| Rational::new(BigInt::from(t), BigInt::from(m + 1));
    let mut boxes = Vec::with_capacity(dim * m);
    for axis in 0..dim {
        for t in 1..=m {
            let mut lo = vec![int(0); dim];
            let mut hi = vec![int(1); dim];
            lo[axis] = level(t);
            hi[axis] = level(t);
            boxes.push(AxisBox::new(lo, hi)?);
        }
    }
    let count = m.checked_pow(dim as u32).ok_or_else(|| Error::InvalidArgument("too many crossing points".into()))?;
    let points = (0..count).map(|mut code| {
        let coords = (0..dim)
            .map(|_| {
                let t = code % m + 1;
                code /= m;
                level(t)
            })
            .collect();
        Point::new(coords)
    });
    Ok((boxes, PointSet::new(dim, points.collect::<Result<Vec<_>>>()?)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `x_axis ≤ threshold`
    AtMost,
    /// `x_axis ≥ threshold`
    AtLeast,
}

/// A closed halfspace orthogonal to a coordinate axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub axis: usize,
    pub side: Side,
    pub threshold: Rational,
}

impl Halfspace {
    pub fn contains(&self, p: &Point) -> bool {
        match self.side {
            Side::AtMost => p.coord(self.axis) <= &self.threshold,
            Side::AtLeast => p.coord(self.axis) >= &self.threshold,
        }
    }
}

/// A halfspace holding at least an `ε`-fraction of the union but no point of
/// part `missed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntermixViolation {
    pub halfspace: Halfspace,
    pub missed: usize,
}

/// Searches the axis-orthogonal closed halfspaces with thresholds at data
/// coordinates (axes ascending, `≤` before `≥`, thresholds ascending) for one
/// that holds at least `ε|Z|` points of the multiset union `Z` and misses a
/// part. `None` means the parts are `ε`-box-intermixed.
pub fn is_box_intermixed(parts: &[PointSet], eps: &Rational) -> Result<Option<IntermixViolation>> {
    let Some(first) = parts.first() else {
        return Err(Error::InvalidArgument("at least one part is required".into()));
    };
    if !(eps > &Rational::zero() && eps < &Rational::one()) {
        return Err(Error::InvalidArgument("ε must lie strictly between 0 and 1".into()));
    }
    let dim = first.dim();
    for part in parts {
        check_dim(dim, part.dim())?;
    }
    let total: usize = parts.iter().map(PointSet::len).sum();
    let needed = eps * int(total as i64);
    for axis in 0..dim {
        let mut thresholds: Vec<&Rational> = parts.iter().flat_map(|p| p.iter().map(move |x| x.coord(axis))).collect();
        thresholds.sort();
        thresholds.dedup();
        for side in [Side::AtMost, Side::AtLeast] {
            for t in &thresholds {
                let halfspace = Halfspace { axis, side, threshold: (*t).clone() };
                let inside: usize = parts
                    .iter()
                    .flat_map(|p| p.iter_counted())
                    .filter(|(x, _)| halfspace.contains(x))
                    .map(|(_, c)| c)
                    .sum();
                if int(inside as i64) < needed {
                    continue;
                }
                if let Some(missed) = parts.iter().position(|p| !p.iter().any(|x| halfspace.contains(x))) {
                    return Ok(Some(IntermixViolation { halfspace, missed }));
                }
            }
        }
    }
    Ok(None)
}

fn inverse_double_dim(dim: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2 * dim))
}

/// The lexicographically smallest point of the union of `parts` lying in
/// every part's bounding box. The parts must be `1/2d`-box-intermixed.
pub fn intermix_witness(parts: &[PointSet]) -> Result<Point> {
    let Some(first) = parts.first() else {
        return Err(Error::InvalidArgument("at least one part is required".into()));
    };
    let dim = first.dim();
    if is_box_intermixed(parts, &inverse_double_dim(dim))?.is_some() {
        return Err(Error::InvalidArgument("parts are not 1/2d-box-intermixed".into()));
    }
    let hulls = parts
        .iter()
        .map(|p| if p.is_empty() { Err(Error::EmptyPointSet("bounding box of an empty part")) } else { bbox(p.iter()) })
        .collect::<Result<Vec<_>>>()?;
    let union = PointSet::new(dim, parts.iter().flat_map(|p| p.iter().cloned()))?;
    let found = union.iter().find(|x| hulls.iter().all(|h| h.covers(x))).cloned();
    found.ok_or_else(|| Error::TheoremViolated("intermixed parts have no common point in their bounding boxes".into()))
}

/// Parts of equal size whose `i`-th entries share the index `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedParts {
    dim: usize,
    parts: Vec<Vec<Point>>,
}

impl IndexedParts {
    pub fn new(dim: usize, parts: Vec<Vec<Point>>) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::InvalidArgument("at least one part is required".into()));
        };
        if first.is_empty() {
            return Err(Error::EmptyPointSet("indexed parts need at least one index"));
        }
        if parts.iter().any(|p| p.len() != first.len()) {
            return Err(Error::InvalidArgument("parts must have equal sizes".into()));
        }
        for p in parts.iter().flatten() {
            check_dim(dim, p.dim())?;
        }
        Ok(Self { dim, parts })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parts(&self) -> &[Vec<Point>] {
        &self.parts
    }

    pub fn index_count(&self) -> usize {
        self.parts[0].len()
    }

    fn multisets(&self) -> Result<Vec<PointSet>> {
        self.parts.iter().map(|p| PointSet::multiset(self.dim, p.iter().cloned())).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dichotomy {
    /// A point of the union in every part's bounding box.
    Case1 { point: Point },
    /// `halfspace` misses part `missed` and holds the entries of part `dense`
    /// at `indices`; restricted to `indices`, the two parts have disjoint
    /// bounding boxes.
    Case2 { halfspace: Halfspace, missed: usize, dense: usize, indices: Vec<usize> },
}

/// Either a common point of the parts' bounding boxes, or an index subset of
/// size at least `⌈|I|/2d⌉` on which two parts separate.
pub fn intermix_dichotomy(ip: &IndexedParts) -> Result<Dichotomy> {
    let sets = ip.multisets()?;
    let Some(violation) = is_box_intermixed(&sets, &inverse_double_dim(ip.dim))? else {
        return Ok(Dichotomy::Case1 { point: intermix_witness(&sets)? });
    };
    let IntermixViolation { halfspace, missed } = violation;
    let inside = |part: &[Point]| -> Vec<usize> { (0..part.len()).filter(|&i| halfspace.contains(&part[i])).collect() };
    let mut dense = 0;
    let mut indices = inside(&ip.parts[0]);
    for (j, part) in ip.parts.iter().enumerate().skip(1) {
        let here = inside(part);
        if here.len() > indices.len() {
            dense = j;
            indices = here;
        }
    }
    if indices.len() * 2 * ip.dim < ip.index_count() {
        return Err(Error::TheoremViolated(format!(
            "densest part holds {} of {} indices in the separating halfspace",
            indices.len(),
            ip.index_count()
        )));
    }
    let restricted = |j: usize| bbox(indices.iter().map(|&i| &ip.parts[j][i]));
    if !box_intersection(&[restricted(missed)?, restricted(dense)?])?.is_empty() {
        return Err(Error::TheoremViolated("restricted bounding boxes intersect".into()));
    }
    Ok(Dichotomy::Case2 { halfspace, missed, dense, indices })
}

/// Largest `|S|` for which the piercing search is exhaustive.
pub const EXACT_PIERCING_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piercing {
    pub points: Vec<Point>,
    /// Whether `points` is a minimum piercing set (otherwise greedy).
    pub exact: bool,
}

/// A smallest subset of `S` meeting every box: exhaustive search by size
/// with lexicographic subsets when `|S| ≤ 24`, otherwise greedy.
pub fn piercing_set(boxes: &[AxisBox], points: &PointSet) -> Result<Piercing> {
    let masks = box_masks(boxes, points)?;
    if let Some(b) = masks.iter().position(BitSet::is_clear) {
        return Err(Error::Unpierceable(b));
    }
    let n = points.distinct_len();
    let covers: Vec<BitSet> = (0..n)
        .map(|s| {
            let mut set = BitSet::empty(boxes.len());
            for (b, mask) in masks.iter().enumerate() {
                if mask.contains(s) {
                    set.insert(b);
                }
            }
            set
        })
        .collect();
    let all = BitSet::full(boxes.len());
    let pick = |chosen: &[usize]| chosen.iter().map(|&s| points.get(s).clone()).collect();
    if n <= EXACT_PIERCING_LIMIT {
        for size in 0..=n {
            for chosen in Combinations::new(n, size) {
                let mut hit = BitSet::empty(boxes.len());
                for &s in &chosen {
                    hit.union_with(&covers[s]);
                }
                if hit == all {
                    return Ok(Piercing { points: pick(&chosen), exact: true });
                }
            }
        }
        unreachable!("every box contains a point, so S pierces the family");
    }
    let mut hit = BitSet::empty(boxes.len());
    let mut chosen = Vec::new();
    while hit != all {
        let gain = |s: usize| {
            let mut next = covers[s].clone();
            next.union_with(&hit);
            next.count()
        };
        let best = (0..n).fold(0, |b, s| if gain(s) > gain(b) { s } else { b });
        hit.union_with(&covers[best]);
        chosen.push(best);
    }
    chosen.sort_unstable();
    Ok(Piercing { points: pick(&chosen), exact: false })
}

/// Checks that every `p` boxes contain `q` whose intersection meets `S`;
/// returns the first failing `p`-subset. Families with fewer than `p` boxes
/// are rejected, since the condition would hold vacuously.
pub fn check_pq_condition(
    boxes: &[AxisBox],
    points: &PointSet,
    p: usize,
    q: usize,
    guard: u64,
) -> Result<Option<Vec<usize>>> {
    let d = points.dim();
    if q < d + 1 || p < q {
        return Err(Error::InvalidArgument(format!("need p ≥ q ≥ {}, got p = {p}, q = {q}", d + 1)));
    }
    let n = boxes.len();
    if p > n {
        return Err(Error::InvalidArgument(format!("the condition needs at least p = {p} boxes, got {n}")));
    }
    ensure_within(binomial(n, p).saturating_mul(binomial(p, q)), guard)?;
    let masks = box_masks(boxes, points)?;
    let len = points.distinct_len();
    for subset in Combinations::new(n, p) {
        let good = Combinations::new(p, q)
            .any(|pick| !intersect_all(len, pick.iter().map(|&i| &masks[subset[i]])).is_clear());
        if !good {
            return Ok(Some(subset));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FewColorsOutcome {
    /// `members` of class `class` all contain `point`.
    Found { class: usize, members: Vec<usize>, point: Point },
    /// A colorful `(d+1)`-tuple whose intersection misses `S`.
    Counterexample(Certificate),
    /// No class has `r` boxes with a common point of `S`; the classes may be
    /// too small for the conclusion to apply.
    Inconclusive,
}

/// With `d+1` classes of equal size whose colorful `(d+1)`-tuples all meet
/// `S`, looks for `r` boxes of one class with a common point of `S`.
pub fn few_colors_check(classes: &[Vec<AxisBox>], points: &PointSet, r: usize, guard: u64) -> Result<FewColorsOutcome> {
    let d = points.dim();
    if classes.len() != d + 1 {
        return Err(Error::InvalidArgument(format!("expected {} classes, got {}", d + 1, classes.len())));
    }
    let t = classes[0].len();
    if classes.iter().any(|c| c.len() != t) {
        return Err(Error::InvalidArgument("classes must have equal sizes".into()));
    }
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let inst = ColoredInstance::new(d, classes.to_vec(), vec![Target::new(points.clone(), 1)?])?;
    if let Some(cert) = check_colorful_hypothesis(&inst, d + 1, guard)? {
        return Ok(FewColorsOutcome::Counterexample(cert));
    }
    if r > t {
        return Ok(FewColorsOutcome::Inconclusive);
    }
    ensure_within(binomial(t, r).saturating_mul(classes.len() as u128), guard)?;
    let len = points.distinct_len();
    for (class, boxes) in classes.iter().enumerate() {
        let masks = box_masks(boxes, points)?;
        for members in Combinations::new(t, r) {
            let common = intersect_all(len, members.iter().map(|&i| &masks[i]));
            let first = common.ones().next();
            if let Some(s) = first {
                return Ok(FewColorsOutcome::Found { class, members, point: points.get(s).clone() });
            }
        }
    }
    Ok(FewColorsOutcome::Inconclusive)
}
