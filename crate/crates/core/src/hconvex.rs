//! H-convex sets: intersections of halfspaces `⟨x, h⟩ ≤ c` whose normals come
//! from a fixed positively spanning direction set.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::bits::{intersect_all, BitSet};
use crate::combinatorics::{binomial, ensure_within, Combinations};
use crate::error::{check_dim, Error, Result};
use crate::geometry::{AxisBox, Point, PointSet};
use crate::helly::{colorful_outcome, Certificate, HellyOutcome, MaskFamily, Member, Target};
use crate::rational::{int, Rational};

/// Nonzero, pairwise non-positively-parallel directions in a common
/// dimension. Directions are not normalized.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectionSet {
    dim: usize,
    directions: Vec<Vec<Rational>>,
}

impl DirectionSet {
    /// Checks the shape of `directions` but not that they span positively;
    /// see [`validate_direction_set`].
    pub fn new(dim: usize, directions: Vec<Vec<Rational>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        for (i, h) in directions.iter().enumerate() {
            check_dim(dim, h.len())?;
            if h.iter().all(Zero::is_zero) {
                return Err(Error::InvalidArgument(format!("direction {i} is zero")));
            }
            if let Some(j) = directions[..i].iter().position(|g| positively_parallel(g, h)) {
                return Err(Error::InvalidArgument(format!("directions {j} and {i} are positively parallel")));
            }
        }
        Ok(Self { dim, directions })
    }

    /// A direction set that positively spans; otherwise the error carries a
    /// nonzero `y` with `⟨h, y⟩ ≤ 0` for every direction.
    pub fn validated(dim: usize, directions: Vec<Vec<Rational>>) -> Result<Arc<Self>> {
        let set = Self::new(dim, directions)?;
        match validate_direction_set(&set) {
            None => Ok(Arc::new(set)),
            Some(y) => Err(Error::InvalidArgument(format!(
                "directions lie in a closed half-space: every direction h has <h, y> <= 0 for y = {:?}",
                Point::new(y).expect("nonempty")
            ))),
        }
    }

    pub fn from_ints(dim: usize, directions: &[&[i64]]) -> Result<Arc<Self>> {
        Self::validated(dim, directions.iter().map(|h| h.iter().map(|&v| int(v)).collect()).collect())
    }

    /// `e_1, −e_1, e_2, −e_2, …`
    pub fn box_directions(dim: usize) -> Result<Arc<Self>> {
        let dirs = (0..dim)
            .flat_map(|axis| [1, -1].map(|sign| Point::unit(dim, axis, sign).coords().to_vec()))
            .collect();
        Self::validated(dim, dirs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Vec<Rational>] {
        &self.directions
    }

    /// Index of the direction positively parallel to `h`, if any.
    pub fn position(&self, h: &[Rational]) -> Option<usize> {
        self.directions.iter().position(|g| positively_parallel(g, h))
    }
}

fn positively_parallel(a: &[Rational], b: &[Rational]) -> bool {
    let Some(i) = a.iter().position(|v| !v.is_zero()) else {
        return false;
    };
    if b[i].is_zero() || a[i].is_positive() != b[i].is_positive() {
        return false;
    }
    let scale = &b[i] / &a[i];
    a.iter().zip(b).all(|(x, y)| x * &scale == *y)
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A nonzero `y` with `⟨h, y⟩ ≤ 0` for every direction `h`, or `None` when
/// the directions positively span the whole space. Exact Fourier–Motzkin
/// elimination on `Hy ≤ 0, ±y_i ≥ 1` for each coordinate and sign.
pub fn validate_direction_set(set: &DirectionSet) -> Option<Vec<Rational>> {
    let d = set.dim;
    for axis in 0..d {
        for sign in [1, -1] {
            let mut rows: Vec<Row> = set.directions.iter().map(|h| Row { coef: h.clone(), rhs: Rational::zero() }).collect();
            let mut pin = vec![Rational::zero(); d];
            pin[axis] = int(-sign);
            rows.push(Row { coef: pin, rhs: int(-1) });
            if let Some(y) = solve(rows, d) {
                debug_assert!(set.directions.iter().all(|h| dot(h, &y) <= Rational::zero()));
                return Some(y);
            }
        }
    }
    None
}

/// `coef · y ≤ rhs`
#[derive(Debug, Clone, PartialEq, Eq)]
struct Row {
    coef: Vec<Rational>,
    rhs: Rational,
}

/// A solution of the system, by eliminating the last variable first and
/// substituting back; each variable takes the value in its interval closest
/// to zero.
fn solve(rows: Vec<Row>, vars: usize) -> Option<Vec<Rational>> {
    let mut levels = vec![rows];
    for v in (0..vars).rev() {
        let current = levels.last().expect("at least one level");
        let (mut next, mut upper, mut lower) = (Vec::new(), Vec::new(), Vec::new());
        for row in current {
            if row.coef[v].is_positive() {
                upper.push(row);
            } else if row.coef[v].is_negative() {
                lower.push(row);
            } else {
                next.push(row.clone());
            }
        }
        for u in &upper {
            for l in &lower {
                // u/u_v − l/l_v eliminates v (l_v < 0)
                let a = Rational::one() / &u.coef[v];
                let b = -Rational::one() / &l.coef[v];
                let coef = u.coef.iter().zip(&l.coef).map(|(x, y)| x * &a + y * &b).collect();
                next.push(Row { coef, rhs: &u.rhs * &a + &l.rhs * &b });
            }
        }
        next.sort_by(|x, y| x.coef.cmp(&y.coef).then(x.rhs.cmp(&y.rhs)));
        next.dedup();
        levels.push(next);
    }
    if levels.last().expect("final level").iter().any(|r| r.rhs.is_negative()) {
        return None;
    }
    let mut y = vec![Rational::zero(); vars];
    for v in 0..vars {
        let system = &levels[vars - v - 1];
        let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
        for row in system {
            let c = &row.coef[v];
            if c.is_zero() {
                continue;
            }
            let rest: Rational = (0..v).map(|i| &row.coef[i] * &y[i]).sum();
            let bound = (&row.rhs - rest) / c;
            if c.is_positive() {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            } else {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            }
        }
        let mut value = Rational::zero();
        if let Some(l) = lo.filter(|l| l > &value) {
            value = l;
        }
        if let Some(h) = hi.filter(|h| h < &value) {
            value = h;
        }
        y[v] = value;
    }
    Some(y)
}

/// `{x : ⟨x, h_i⟩ ≤ c_i}` with `c_i = None` meaning no constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HConvexSet {
    directions: Arc<DirectionSet>,
    bounds: Vec<Option<Rational>>,
}

impl HConvexSet {
    /// At least one bound must be finite.
    pub fn new(directions: Arc<DirectionSet>, bounds: Vec<Option<Rational>>) -> Result<Self> {
        check_dim(directions.len(), bounds.len())?;
        if bounds.iter().all(Option::is_none) {
            return Err(Error::InvalidArgument("an H-convex set needs at least one finite bound".into()));
        }
        Ok(Self { directions, bounds })
    }

    pub fn from_ints(directions: &Arc<DirectionSet>, bounds: &[i64]) -> Result<Self> {
        Self::new(directions.clone(), bounds.iter().map(|&c| Some(int(c))).collect())
    }

    /// The box as an H-convex set over `e_1, −e_1, …`; an empty box gets
    /// contradictory bounds on the first axis.
    pub fn from_box(b: &AxisBox) -> Result<Self> {
        let directions = DirectionSet::box_directions(b.dim())?;
        let bounds = match (b.lo(), b.hi()) {
            (Some(lo), Some(hi)) => lo.iter().zip(hi).flat_map(|(l, h)| [Some(h.clone()), Some(-l)]).collect(),
            _ => {
                let mut bounds = vec![Some(int(0)); 2 * b.dim()];
                bounds[0] = Some(int(-1));
                bounds
            }
        };
        Self::new(directions, bounds)
    }

    pub fn directions(&self) -> &Arc<DirectionSet> {
        &self.directions
    }

    pub fn bounds(&self) -> &[Option<Rational>] {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.directions.dim
    }
}

/// The smallest H-convex set containing `points`.
pub fn hconvex_hull(points: &PointSet, directions: &Arc<DirectionSet>) -> Result<HConvexSet> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet("H-convex hull of an empty set"));
    }
    check_dim(directions.dim, points.dim())?;
    let bounds = directions
        .directions
        .iter()
        .map(|h| points.iter().map(|p| dot(h, p.coords())).max())
        .collect();
    HConvexSet::new(directions.clone(), bounds)
}

/// Componentwise minimum of the bounds. Geometric emptiness is not decided.
pub fn hconvex_intersection(sets: &[HConvexSet]) -> Result<HConvexSet> {
    let Some(first) = sets.first() else {
        return Err(Error::EmptyFamily("intersection of no H-convex sets"));
    };
    let mut bounds = first.bounds.clone();
    for set in &sets[1..] {
        if set.directions != first.directions {
            return Err(Error::InvalidArgument("H-convex sets use different direction sets".into()));
        }
        for (acc, c) in bounds.iter_mut().zip(&set.bounds) {
            *acc = match (acc.take(), c) {
                (Some(a), Some(c)) => Some(a.min(c.clone())),
                (a, None) => a,
                (None, c) => c.clone(),
            };
        }
    }
    Ok(HConvexSet { directions: first.directions.clone(), bounds })
}

pub fn hconvex_contains(set: &HConvexSet, p: &Point) -> Result<bool> {
    check_dim(set.dim(), p.dim())?;
    Ok(covers(set, p))
}

fn covers(set: &HConvexSet, p: &Point) -> bool {
    set.directions
        .directions
        .iter()
        .zip(&set.bounds)
        .all(|(h, c)| c.as_ref().is_none_or(|c| dot(h, p.coords()) <= *c))
}

fn masks(sets: &[HConvexSet], points: &PointSet) -> Result<Vec<BitSet>> {
    sets.iter()
        .map(|set| {
            check_dim(points.dim(), set.dim())?;
            let mut mask = BitSet::empty(points.distinct_len());
            for (i, p) in points.iter().enumerate() {
                if covers(set, p) {
                    mask.insert(i);
                }
            }
            Ok(mask)
        })
        .collect()
}

fn common_directions(sets: &[HConvexSet]) -> Result<Arc<DirectionSet>> {
    let Some(first) = sets.first() else {
        return Err(Error::EmptyFamily("no H-convex sets"));
    };
    if sets.iter().any(|s| s.directions != first.directions) {
        return Err(Error::InvalidArgument("H-convex sets use different direction sets".into()));
    }
    Ok(first.directions.clone())
}

/// For each direction with a finite minimum, the lowest-index set attaining
/// it (duplicates removed, direction order). Their intersection equals the
/// family's.
pub fn hconvex_achievers(sets: &[HConvexSet]) -> Result<Vec<usize>> {
    let whole = hconvex_intersection(sets)?;
    let mut out: Vec<usize> = Vec::new();
    for (i, bound) in whole.bounds.iter().enumerate() {
        if let Some(c) = bound {
            let idx = sets.iter().position(|s| s.bounds[i].as_ref() == Some(c)).expect("minimum is attained");
            if !out.contains(&idx) {
                out.push(idx);
            }
        }
    }
    Ok(out)
}

/// Monochromatic quantitative Helly for H-convex sets: the `count`
/// lexicographically smallest points of `S` in the intersection, or an
/// achiever subfamily of at most `|H|` sets with the same intersection.
pub fn hconvex_halman(sets: &[HConvexSet], points: &PointSet, count: usize) -> Result<HellyOutcome> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let whole = hconvex_intersection(sets)?;
    check_dim(whole.dim(), points.dim())?;
    let captured: Vec<Point> = points.iter().filter(|p| covers(&whole, p)).take(count).cloned().collect();
    if captured.len() == count {
        return Ok(HellyOutcome::Witness { class: 0, points: vec![captured] });
    }
    let members = hconvex_achievers(sets)?.into_iter().map(|index| Member { class: 0, index }).collect();
    Ok(HellyOutcome::Violation(Certificate { members, target: 0 }))
}

/// Checks that every `min(|H|, |F|)` sets capture at least `count` points of
/// `S`; returns the first failing subfamily.
pub fn check_hconvex_hypothesis(
    sets: &[HConvexSet],
    points: &PointSet,
    count: usize,
    guard: u64,
) -> Result<Option<Certificate>> {
    if sets.is_empty() {
        return Ok(None);
    }
    let k = common_directions(sets)?.len().min(sets.len());
    ensure_within(binomial(sets.len(), k), guard)?;
    let masks = masks(sets, points)?;
    let len = points.distinct_len();
    for subset in Combinations::new(sets.len(), k) {
        if intersect_all(len, subset.iter().map(|&i| &masks[i])).count() < count {
            let members = subset.into_iter().map(|index| Member { class: 0, index }).collect();
            return Ok(Some(Certificate { members, target: 0 }));
        }
    }
    Ok(None)
}

/// The `(k−1)`-tuple scan: among all `(k−1)`-subfamilies take the first one
/// whose lexicographically largest captured point `s0` is smallest, then
/// check `s0` lies in every set. Needs a direction positively parallel to
/// `−e_1`.
pub fn hconvex_halman_lex_scan(sets: &[HConvexSet], points: &PointSet, guard: u64) -> Result<HellyOutcome> {
    let directions = common_directions(sets)?;
    check_dim(directions.dim, points.dim())?;
    if directions.position(Point::unit(directions.dim, 0, -1).coords()).is_none() {
        return Err(Error::InvalidArgument("the lexicographic scan needs the direction -e_1".into()));
    }
    let k = directions.len();
    if sets.len() < k {
        return hconvex_halman(sets, points, 1);
    }
    ensure_within(binomial(sets.len(), k - 1).saturating_add(binomial(sets.len(), k)), guard)?;
    let masks = masks(sets, points)?;
    let len = points.distinct_len();
    let mut best: Option<usize> = None;
    for tuple in Combinations::new(sets.len(), k - 1) {
        let inter = intersect_all(len, tuple.iter().map(|&i| &masks[i]));
        let Some(top) = inter.ones().last() else {
            let members = tuple.into_iter().map(|index| Member { class: 0, index }).collect();
            return Ok(HellyOutcome::Violation(Certificate { members, target: 0 }));
        };
        if best.is_none_or(|b| top < b) {
            best = Some(top);
        }
    }
    let s0 = best.expect("at least one tuple");
    if masks.iter().all(|m| m.contains(s0)) {
        return Ok(HellyOutcome::Witness { class: 0, points: vec![vec![points.get(s0).clone()]] });
    }
    match check_hconvex_hypothesis(sets, points, 1, guard)? {
        Some(cert) => Ok(HellyOutcome::Violation(cert)),
        None => Err(Error::TheoremViolated("minimal tuple maximum is missed by some set".into())),
    }
}

/// Colorful quantitative Helly for H-convex sets with exactly `|H|` nonempty
/// classes, by rank-sum maximization over colorful `(|H|−1)`-tuples.
pub fn hconvex_colorful(classes: &[Vec<HConvexSet>], targets: &[Target], guard: u64) -> Result<HellyOutcome> {
    let all: Vec<HConvexSet> = classes.iter().flatten().cloned().collect();
    let directions = common_directions(&all)?;
    if classes.len() != directions.len() {
        return Err(Error::InvalidArgument(format!(
            "colorful mode needs exactly {} classes, got {}",
            directions.len(),
            classes.len()
        )));
    }
    if classes.iter().any(Vec::is_empty) {
        return Err(Error::EmptyFamily("every color class must be nonempty"));
    }
    if targets.is_empty() {
        return Err(Error::InvalidArgument("at least one target is required".into()));
    }
    let per_class = classes
        .iter()
        .map(|class| {
            let per_target: Vec<Vec<BitSet>> = targets.iter().map(|t| masks(class, &t.points)).collect::<Result<_>>()?;
            Ok((0..class.len()).map(|i| per_target.iter().map(|m| m[i].clone()).collect()).collect())
        })
        .collect::<Result<_>>()?;
    colorful_outcome(&MaskFamily::new(per_class, targets), targets, guard)
}
