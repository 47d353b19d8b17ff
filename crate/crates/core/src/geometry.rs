//! Exact points, closed axis-parallel boxes, box hulls and achiever extraction.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::bits::BitSet;
use crate::error::{check_dim, Error, Result};
use crate::rational::{format_rational, Rational};

/// A point with exact rational coordinates.
///
/// The derived `Ord` is the lexicographic order, which is the only order used
/// anywhere in this crate. Comparing points of different dimension through
/// `Ord` is allowed but meaningless; use [`lex_compare`] for a checked version.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        Ok(Self(coords))
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| crate::rational::int(c)).collect())
            .expect("non-empty coordinate list")
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn coord(&self, axis: usize) -> &Rational {
        &self.0[axis]
    }

    /// The standard basis vector `sign · e_axis`.
    pub fn unit(dim: usize, axis: usize, sign: i64) -> Self {
        let mut coords = vec![crate::rational::int(0); dim];
        coords[axis] = crate::rational::int(sign);
        Self(coords)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_rational(c))?;
        }
        f.write_str(")")
    }
}

/// Lexicographic comparison: the first differing coordinate decides.
pub fn lex_compare(p: &Point, q: &Point) -> Result<Ordering> {
    check_dim(p.dim(), q.dim())?;
    Ok(p.cmp(q))
}

/// A closed axis-parallel box, possibly degenerate, or the canonical empty box.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum AxisBox {
    Empty { dim: usize },
    Closed { lo: Vec<Rational>, hi: Vec<Rational> },
}

impl AxisBox {
    /// Builds `[lo_1, hi_1] × … × [lo_d, hi_d]`; any inverted axis yields `Empty`.
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Result<Self> {
        if lo.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        check_dim(lo.len(), hi.len())?;
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Ok(AxisBox::Empty { dim: lo.len() });
        }
        Ok(AxisBox::Closed { lo, hi })
    }

    pub fn from_ints(bounds: &[(i64, i64)]) -> Self {
        let lo = bounds.iter().map(|b| crate::rational::int(b.0)).collect();
        let hi = bounds.iter().map(|b| crate::rational::int(b.1)).collect();
        Self::new(lo, hi).expect("non-empty bound list")
    }

    pub fn empty(dim: usize) -> Self {
        AxisBox::Empty { dim }
    }

    pub fn dim(&self) -> usize {
        match self {
            AxisBox::Empty { dim } => *dim,
            AxisBox::Closed { lo, .. } => lo.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, AxisBox::Empty { .. })
    }

    pub fn lo(&self) -> Option<&[Rational]> {
        match self {
            AxisBox::Empty { .. } => None,
            AxisBox::Closed { lo, .. } => Some(lo),
        }
    }

    pub fn hi(&self) -> Option<&[Rational]> {
        match self {
            AxisBox::Empty { .. } => None,
            AxisBox::Closed { hi, .. } => Some(hi),
        }
    }

    /// Closed membership.
    pub fn contains(&self, p: &Point) -> Result<bool> {
        check_dim(self.dim(), p.dim())?;
        Ok(self.covers(p))
    }

    /// Membership without the dimension check.
    pub(crate) fn covers(&self, p: &Point) -> bool {
        match self {
            AxisBox::Empty { .. } => false,
            AxisBox::Closed { lo, hi } => {
                p.0.iter().zip(lo.iter().zip(hi)).all(|(x, (l, h))| l <= x && x <= h)
            }
        }
    }

    /// Which points of `points` (indexed in iteration order) this box contains.
    pub fn mask(&self, points: &PointSet) -> BitSet {
        let mut mask = BitSet::empty(points.distinct_len());
        for (i, p) in points.iter().enumerate() {
            if self.covers(p) {
                mask.insert(i);
            }
        }
        mask
    }
}

impl fmt::Debug for AxisBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisBox::Empty { dim } => write!(f, "Empty(d={dim})"),
            AxisBox::Closed { lo, hi } => {
                for (i, (l, h)) in lo.iter().zip(hi).enumerate() {
                    if i > 0 {
                        f.write_str("×")?;
                    }
                    write!(f, "[{},{}]", format_rational(l), format_rational(h))?;
                }
                Ok(())
            }
        }
    }
}

/// Per-axis `[max lo, min hi]` of a nonempty family.
pub fn box_intersection(boxes: &[AxisBox]) -> Result<AxisBox> {
    let first = boxes.first().ok_or(Error::EmptyFamily("box intersection needs at least one box"))?;
    let dim = first.dim();
    for b in boxes {
        check_dim(dim, b.dim())?;
    }
    let mut lo: Option<Vec<Rational>> = None;
    let mut hi: Option<Vec<Rational>> = None;
    for b in boxes {
        let AxisBox::Closed { lo: blo, hi: bhi } = b else {
            return Ok(AxisBox::empty(dim));
        };
        match (&mut lo, &mut hi) {
            (Some(lo), Some(hi)) => {
                for i in 0..dim {
                    if blo[i] > lo[i] {
                        lo[i] = blo[i].clone();
                    }
                    if bhi[i] < hi[i] {
                        hi[i] = bhi[i].clone();
                    }
                }
            }
            _ => {
                lo = Some(blo.clone());
                hi = Some(bhi.clone());
            }
        }
    }
    AxisBox::new(lo.expect("nonempty"), hi.expect("nonempty"))
}

/// The smallest closed box containing every point of `points`.
pub fn bbox<'a>(points: impl IntoIterator<Item = &'a Point>) -> Result<AxisBox> {
    let mut iter = points.into_iter();
    let first = iter.next().ok_or(Error::EmptyPointSet("bbox of an empty set"))?;
    let mut lo = first.0.clone();
    let mut hi = first.0.clone();
    for p in iter {
        check_dim(lo.len(), p.dim())?;
        for (i, x) in p.0.iter().enumerate() {
            if *x < lo[i] {
                lo[i] = x.clone();
            }
            if *x > hi[i] {
                hi[i] = x.clone();
            }
        }
    }
    AxisBox::new(lo, hi)
}

/// Indices of a subfamily of at most `2d` boxes whose intersection equals the
/// intersection of the whole family.
///
/// For each axis in order, the lowest-index box attaining the largest lower
/// endpoint and then the lowest-index box attaining the smallest upper
/// endpoint; duplicates keep their first position. If the family contains an
/// empty box, the first such box alone is returned.
pub fn achiever_subfamily(boxes: &[AxisBox]) -> Result<Vec<usize>> {
    let first = boxes.first().ok_or(Error::EmptyFamily("achiever extraction needs at least one box"))?;
    let dim = first.dim();
    for b in boxes {
        check_dim(dim, b.dim())?;
    }
    if let Some(i) = boxes.iter().position(AxisBox::is_empty) {
        return Ok(vec![i]);
    }
    let mut out: Vec<usize> = Vec::with_capacity(2 * dim);
    let mut push = |i: usize| {
        if !out.contains(&i) {
            out.push(i);
        }
    };
    for axis in 0..dim {
        let left = argbest(boxes, |b| &b.lo().expect("closed")[axis], Ordering::Greater);
        let right = argbest(boxes, |b| &b.hi().expect("closed")[axis], Ordering::Less);
        push(left);
        push(right);
    }
    Ok(out)
}

fn argbest<'a>(boxes: &'a [AxisBox], key: impl Fn(&'a AxisBox) -> &'a Rational, better: Ordering) -> usize {
    let mut best = 0;
    for (i, b) in boxes.iter().enumerate().skip(1) {
        if key(b).cmp(key(&boxes[best])) == better {
            best = i;
        }
    }
    best
}

/// A finite set or multiset of points of a common dimension, iterated in
/// lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    dim: usize,
    multiset: bool,
    entries: Vec<(Point, usize)>,
}

impl PointSet {
    /// Set mode: duplicates collapse.
    pub fn new(dim: usize, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        Self::build(dim, points, false)
    }

    /// Multiset mode: duplicates are counted.
    pub fn multiset(dim: usize, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        Self::build(dim, points, true)
    }

    fn build(dim: usize, points: impl IntoIterator<Item = Point>, multiset: bool) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        let mut counts: BTreeMap<Point, usize> = BTreeMap::new();
        for p in points {
            check_dim(dim, p.dim())?;
            let c = counts.entry(p).or_insert(0);
            if multiset || *c == 0 {
                *c += 1;
            }
        }
        Ok(Self { dim, multiset, entries: counts.into_iter().collect() })
    }

    pub fn from_ints(dim: usize, points: &[&[i64]]) -> Self {
        Self::new(dim, points.iter().map(|p| Point::from_ints(p))).expect("consistent dimensions")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_multiset(&self) -> bool {
        self.multiset
    }

    /// Number of points counted with multiplicity.
    pub fn len(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn distinct_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct points, lexicographically ascending.
    pub fn iter(&self) -> impl Iterator<Item = &Point> + '_ {
        self.entries.iter().map(|e| &e.0)
    }

    pub fn iter_counted(&self) -> impl Iterator<Item = (&Point, usize)> + '_ {
        self.entries.iter().map(|e| (&e.0, e.1))
    }

    pub fn get(&self, i: usize) -> &Point {
        &self.entries[i].0
    }

    pub fn position(&self, p: &Point) -> Option<usize> {
        self.entries.binary_search_by(|e| e.0.cmp(p)).ok()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.position(p).is_some()
    }

    pub fn multiplicity(&self, p: &Point) -> usize {
        self.position(p).map_or(0, |i| self.entries[i].1)
    }

    /// The same points without `p` (all copies).
    pub fn without(&self, p: &Point) -> PointSet {
        let entries = self.entries.iter().filter(|e| &e.0 != p).cloned().collect();
        PointSet { dim: self.dim, multiset: self.multiset, entries }
    }

    pub fn points(&self) -> Vec<Point> {
        self.iter().cloned().collect()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Masks of every box against `points`.
pub(crate) fn box_masks(boxes: &[AxisBox], points: &PointSet) -> Result<Vec<BitSet>> {
    boxes
        .iter()
        .map(|b| {
            check_dim(points.dim(), b.dim())?;
            Ok(b.mask(points))
        })
        .collect()
}
