//! Witnesses and violation certificates for Halman's discrete Helly theorem
//! for boxes and its colorful, quantitative and very colorful forms.
//!
//! Every set family is reduced to bit masks over the (lexicographically
//! sorted) target point sets, so "the k-th smallest point of S_j in the
//! intersection of a tuple" is the k-th set bit of an AND of masks. The
//! H-convex module reuses the same engine.

use serde::{Deserialize, Serialize};

use crate::bits::{intersect_all, BitSet};
use crate::combinatorics::{binomial, ensure_within, Combinations, Product};
use crate::error::{check_dim, Error, Result};
use crate::geometry::{achiever_subfamily, bbox, box_intersection, box_masks, AxisBox, Point, PointSet};

/// A finite point set together with the number of its points that must be
/// captured.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Target {
    pub points: PointSet,
    pub count: usize,
}

impl Target {
    pub fn new(points: PointSet, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument("target count must be at least 1".into()));
        }
        Ok(Self { points, count })
    }
}

/// Boxes split into color classes, plus the targets they are tested against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredInstance {
    dim: usize,
    classes: Vec<Vec<AxisBox>>,
    targets: Vec<Target>,
}

impl ColoredInstance {
    pub fn new(dim: usize, classes: Vec<Vec<AxisBox>>, targets: Vec<Target>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        for b in classes.iter().flatten() {
            check_dim(dim, b.dim())?;
        }
        for t in &targets {
            check_dim(dim, t.points.dim())?;
        }
        if targets.is_empty() {
            return Err(Error::InvalidArgument("at least one target is required".into()));
        }
        Ok(Self { dim, classes, targets })
    }

    /// The monochromatic instance: a single class.
    pub fn monochromatic(dim: usize, boxes: Vec<AxisBox>, points: PointSet, count: usize) -> Result<Self> {
        Self::new(dim, vec![boxes], vec![Target::new(points, count)?])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn classes(&self) -> &[Vec<AxisBox>] {
        &self.classes
    }

    pub fn targets(&self) -> &[Target] {
        &self.targets
    }

    pub fn member(&self, m: Member) -> &AxisBox {
        &self.classes[m.class][m.index]
    }

    fn masks(&self) -> Result<MaskFamily> {
        let classes = self
            .classes
            .iter()
            .map(|class| {
                let per_target: Vec<Vec<BitSet>> =
                    self.targets.iter().map(|t| box_masks(class, &t.points)).collect::<Result<_>>()?;
                // transpose to member -> target
                Ok((0..class.len()).map(|i| per_target.iter().map(|m| m[i].clone()).collect()).collect())
            })
            .collect::<Result<_>>()?;
        Ok(MaskFamily::new(classes, &self.targets))
    }
}

/// A set in a colored family: class index and position within the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Member {
    pub class: usize,
    pub index: usize,
}

/// A subfamily whose intersection holds fewer than the required number of
/// points of target `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub members: Vec<Member>,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HellyOutcome {
    /// Every set of class `class` contains `points[j]`, which are `count_j`
    /// distinct points of target `j`.
    Witness { class: usize, points: Vec<Vec<Point>> },
    Violation(Certificate),
}

impl HellyOutcome {
    pub fn is_witness(&self) -> bool {
        matches!(self, HellyOutcome::Witness { .. })
    }
}

/// Masks indexed as `classes[class][member][target]`.
#[derive(Debug, Clone)]
pub(crate) struct MaskFamily {
    classes: Vec<Vec<Vec<BitSet>>>,
    lens: Vec<usize>,
    counts: Vec<usize>,
}

pub(crate) enum EngineOutcome {
    Short(Certificate),
    Maximizer { omitted: usize, points: Vec<Vec<usize>> },
}

impl MaskFamily {
    pub(crate) fn new(classes: Vec<Vec<Vec<BitSet>>>, targets: &[Target]) -> Self {
        Self {
            classes,
            lens: targets.iter().map(|t| t.points.distinct_len()).collect(),
            counts: targets.iter().map(|t| t.count).collect(),
        }
    }

    fn intersection(&self, members: &[Member], target: usize) -> BitSet {
        intersect_all(self.lens[target], members.iter().map(|m| &self.classes[m.class][m.index][target]))
    }

    /// First target whose required count the intersection of `members` misses.
    fn short_target(&self, members: &[Member]) -> Option<usize> {
        (0..self.counts.len()).find(|&j| self.intersection(members, j).count() < self.counts[j])
    }

    /// Enumerates colorful tuples of `size` classes: class subsets in
    /// lexicographic order, then members by odometer.
    fn colorful_tuples(&self, size: usize) -> impl Iterator<Item = Vec<Member>> + '_ {
        Combinations::new(self.classes.len(), size).flat_map(move |cls| {
            let sizes = cls.iter().map(|&c| self.classes[c].len()).collect();
            Product::new(sizes).map(move |choice| {
                cls.iter().zip(choice).map(|(&class, index)| Member { class, index }).collect()
            })
        })
    }

    pub(crate) fn tuple_count(&self, size: usize) -> u128 {
        Combinations::new(self.classes.len(), size)
            .map(|cls| cls.iter().map(|&c| self.classes[c].len() as u128).product::<u128>())
            .sum()
    }

    pub(crate) fn first_short_tuple(&self, size: usize) -> Option<Certificate> {
        self.colorful_tuples(size)
            .find_map(|members| self.short_target(&members).map(|target| Certificate { members, target }))
    }

    /// Scans every colorful tuple that omits exactly one class and maximizes
    /// the sum over targets of the rank of the `count_j`-th smallest captured
    /// point. Ties keep the first tuple in enumeration order (omitted class
    /// ascending, then members by odometer). A tuple that captures too few
    /// points ends the scan.
    pub(crate) fn rank_maximizer(&self) -> EngineOutcome {
        let r = self.classes.len();
        let mut best: Option<(usize, usize, Vec<Member>, Vec<BitSet>)> = None;
        for omitted in 0..r {
            let others: Vec<usize> = (0..r).filter(|&c| c != omitted).collect();
            let sizes = others.iter().map(|&c| self.classes[c].len()).collect();
            for choice in Product::new(sizes) {
                let tuple: Vec<Member> =
                    others.iter().zip(choice).map(|(&class, index)| Member { class, index }).collect();
                let mut score = 0usize;
                let mut inters = Vec::with_capacity(self.counts.len());
                for (j, &need) in self.counts.iter().enumerate() {
                    let inter = self.intersection(&tuple, j);
                    match inter.nth_one(need) {
                        Some(pos) => score += pos + 1,
                        None => return EngineOutcome::Short(Certificate { members: tuple, target: j }),
                    }
                    inters.push(inter);
                }
                if best.as_ref().is_none_or(|b| score > b.0) {
                    best = Some((score, omitted, tuple, inters));
                }
            }
        }
        let (_, omitted, _, inters) = best.expect("at least two nonempty classes");
        let points = inters
            .iter()
            .zip(&self.counts)
            .map(|(inter, &need)| inter.ones().take(need).collect())
            .collect();
        EngineOutcome::Maximizer { omitted, points }
    }

    /// Whether every member of `class` contains all the given points.
    pub(crate) fn class_contains(&self, class: usize, points: &[Vec<usize>]) -> bool {
        self.classes[class]
            .iter()
            .all(|masks| points.iter().enumerate().all(|(j, ps)| ps.iter().all(|&p| masks[j].contains(p))))
    }

    pub(crate) fn class_len(&self, class: usize) -> usize {
        self.classes[class].len()
    }
}

/// Runs the rank-sum maximization on a colored family with `helly` classes and
/// turns the result into an outcome.
///
/// A maximizing tuple whose omitted class fails direct verification is only
/// possible when the full colorful hypothesis fails; that failing tuple is
/// then returned. If the hypothesis holds the failure is reported as
/// [`Error::TheoremViolated`].
pub(crate) fn colorful_outcome(
    family: &MaskFamily,
    targets: &[Target],
    guard: u64,
) -> Result<HellyOutcome> {
    let classes = family.classes.len();
    ensure_within(family.tuple_count(classes - 1), guard)?;
    match family.rank_maximizer() {
        EngineOutcome::Short(cert) => Ok(HellyOutcome::Violation(cert)),
        EngineOutcome::Maximizer { omitted, points } => {
            if family.class_contains(omitted, &points) {
                let points = points
                    .iter()
                    .zip(targets)
                    .map(|(ps, t)| ps.iter().map(|&i| t.points.get(i).clone()).collect())
                    .collect();
                return Ok(HellyOutcome::Witness { class: omitted, points });
            }
            ensure_within(family.tuple_count(classes), guard)?;
            match family.first_short_tuple(classes) {
                Some(cert) => Ok(HellyOutcome::Violation(cert)),
                None => Err(Error::TheoremViolated(format!(
                    "colorful hypothesis holds but class {omitted} of the rank maximizer misses its points"
                ))),
            }
        }
    }
}

/// Monochromatic quantitative Halman: the `count` lexicographically smallest
/// points of `points` in the intersection, or an achiever certificate of at
/// most `2d` boxes whose intersection equals the family's.
pub fn halman_witness(boxes: &[AxisBox], points: &PointSet, count: usize) -> Result<HellyOutcome> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let inter = box_intersection(boxes)?;
    check_dim(inter.dim(), points.dim())?;
    let captured: Vec<Point> = points.iter().filter(|p| inter.covers(p)).take(count).cloned().collect();
    if captured.len() == count {
        return Ok(HellyOutcome::Witness { class: 0, points: vec![captured] });
    }
    let members = achiever_subfamily(boxes)?.into_iter().map(|index| Member { class: 0, index }).collect();
    Ok(HellyOutcome::Violation(Certificate { members, target: 0 }))
}

/// Checks that every subfamily of `min(2d, |boxes|)` boxes captures at least
/// `count` points; smaller subfamilies then do as well. Returns the first
/// failing subfamily in lexicographic order.
pub fn check_halman_hypothesis(
    boxes: &[AxisBox],
    points: &PointSet,
    count: usize,
    guard: u64,
) -> Result<Option<Certificate>> {
    let Some(first) = boxes.first() else {
        return Ok(None);
    };
    let size = (2 * first.dim()).min(boxes.len());
    ensure_within(binomial(boxes.len(), size), guard)?;
    let masks = box_masks(boxes, points)?;
    let n = points.distinct_len();
    for subset in Combinations::new(boxes.len(), size) {
        if intersect_all(n, subset.iter().map(|&i| &masks[i])).count() < count {
            let members = subset.into_iter().map(|index| Member { class: 0, index }).collect();
            return Ok(Some(Certificate { members, target: 0 }));
        }
    }
    Ok(None)
}

/// Colorful (very colorful, quantitative) Halman on exactly `2d` nonempty
/// classes, by rank-sum maximization over colorful `(2d−1)`-tuples.
pub fn colorful_halman(inst: &ColoredInstance, guard: u64) -> Result<HellyOutcome> {
    let helly = 2 * inst.dim;
    if inst.classes.len() != helly {
        return Err(Error::InvalidArgument(format!(
            "colorful Halman needs exactly {helly} classes, got {}",
            inst.classes.len()
        )));
    }
    if inst.classes.iter().any(Vec::is_empty) {
        return Err(Error::EmptyFamily("every color class must be nonempty"));
    }
    colorful_outcome(&inst.masks()?, &inst.targets, guard)
}

/// Finds the first colorful tuple of `tuple_size` classes that captures too
/// few points of some target.
pub fn check_colorful_hypothesis(
    inst: &ColoredInstance,
    tuple_size: usize,
    guard: u64,
) -> Result<Option<Certificate>> {
    if tuple_size > inst.classes.len() {
        return Err(Error::InvalidArgument(format!(
            "tuple size {tuple_size} exceeds class count {}",
            inst.classes.len()
        )));
    }
    let family = inst.masks()?;
    ensure_within(family.tuple_count(tuple_size), guard)?;
    Ok(family.first_short_tuple(tuple_size))
}

/// Classes whose whole intersection captures every target's count, found by
/// direct testing.
pub fn valid_classes(inst: &ColoredInstance) -> Result<Vec<usize>> {
    let family = inst.masks()?;
    Ok((0..inst.classes.len())
        .filter(|&c| {
            let members: Vec<Member> = (0..family.class_len(c)).map(|index| Member { class: c, index }).collect();
            family.short_target(&members).is_none()
        })
        .collect())
}

/// Whether the certificate's subfamily really captures fewer points than
/// required.
pub fn certificate_holds(inst: &ColoredInstance, cert: &Certificate) -> Result<bool> {
    let family = inst.masks()?;
    let target = cert.target;
    if target >= inst.targets.len() {
        return Err(Error::InvalidArgument(format!("target {target} out of range")));
    }
    Ok(family.intersection(&cert.members, target).count() < inst.targets[target].count)
}

/// A point `x` of `points` with `x ∈ bbox(points \ {x})`.
///
/// With at least `2d+1` points the per-axis minimum and maximum achievers
/// (lowest lexicographic position on ties) cover at most `2d` points, and the
/// smallest point outside them works. Smaller sets are searched exhaustively.
pub fn radon_box_point(points: &PointSet) -> Result<Option<Point>> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet("radon box point of an empty set"));
    }
    let d = points.dim();
    let pts = points.points();
    if pts.len() > 2 * d {
        let mut achievers = vec![false; pts.len()];
        for axis in 0..d {
            let mut lo = 0;
            let mut hi = 0;
            for (i, p) in pts.iter().enumerate() {
                if p.coord(axis) < pts[lo].coord(axis) {
                    lo = i;
                }
                if p.coord(axis) > pts[hi].coord(axis) {
                    hi = i;
                }
            }
            achievers[lo] = true;
            achievers[hi] = true;
        }
        let x = achievers.iter().position(|a| !a).expect("more points than achievers");
        debug_assert!(in_hull_of_rest(&pts, x));
        return Ok(Some(pts[x].clone()));
    }
    Ok((0..pts.len()).find(|&x| in_hull_of_rest(&pts, x)).map(|x| pts[x].clone()))
}

fn in_hull_of_rest(pts: &[Point], x: usize) -> bool {
    let rest = pts.iter().enumerate().filter(|(i, _)| *i != x).map(|(_, p)| p);
    match bbox(rest) {
        Ok(b) => b.covers(&pts[x]),
        Err(_) => false,
    }
}

/// The vertices `±e_1, …, ±e_d` of the cross-polytope.
pub fn cross_polytope(dim: usize) -> Result<PointSet> {
    if dim == 0 {
        return Err(Error::DimensionTooSmall { min: 1, found: 0 });
    }
    PointSet::new(dim, cross_vertices(dim))
}

fn cross_vertices(dim: usize) -> Vec<Point> {
    (0..dim).flat_map(|axis| [Point::unit(dim, axis, 1), Point::unit(dim, axis, -1)]).collect()
}

/// The boxes `bbox(X \ {x})` for `X = {e_1, −e_1, …, e_d, −e_d}` (in that
/// order), with `S = X`. Every `2d−1` of them capture a point of `X`; all
/// `2d` together only meet at the origin.
pub fn halman_sharp(dim: usize) -> Result<(Vec<AxisBox>, PointSet)> {
    let xs = cross_vertices(dim);
    let set = cross_polytope(dim)?;
    let boxes = (0..xs.len())
        .map(|i| bbox(xs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p)))
        .collect::<Result<Vec<_>>>()?;
    Ok((boxes, set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::DEFAULT_GUARD;

    fn iv(a: i64, b: i64) -> AxisBox {
        AxisBox::from_ints(&[(a, b)])
    }

    fn set1(xs: &[i64]) -> PointSet {
        PointSet::new(1, xs.iter().map(|&x| Point::from_ints(&[x]))).unwrap()
    }

    #[test]
    fn halman_interval_witness() {
        let out = halman_witness(&[iv(0, 2), iv(1, 3)], &set1(&[1, 2]), 1).unwrap();
        assert_eq!(out, HellyOutcome::Witness { class: 0, points: vec![vec![Point::from_ints(&[1])]] });
    }

    #[test]
    fn halman_sharp_instance_violates() {
        let (boxes, s) = halman_sharp(2).unwrap();
        let HellyOutcome::Violation(cert) = halman_witness(&boxes, &s, 1).unwrap() else {
            panic!("expected violation");
        };
        let mut idx: Vec<_> = cert.members.iter().map(|m| m.index).collect();
        idx.sort();
        assert_eq!(idx, vec![0, 1, 2, 3]);
    }

    #[test]
    fn halman_single_box_captures_all() {
        let s = set1(&[0, 3, 5]);
        let out = halman_witness(&[iv(0, 5)], &s, 3).unwrap();
        assert_eq!(out, HellyOutcome::Witness { class: 0, points: vec![s.points()] });
    }

    #[test]
    fn halman_rejects_bad_input() {
        assert!(halman_witness(&[], &set1(&[1]), 1).is_err());
        assert!(halman_witness(&[iv(0, 1)], &set1(&[1]), 0).is_err());
        let empty = PointSet::new(1, []).unwrap();
        assert!(matches!(halman_witness(&[iv(0, 1)], &empty, 1).unwrap(), HellyOutcome::Violation(_)));
    }

    #[test]
    fn colorful_two_classes() {
        let inst = ColoredInstance::new(
            1,
            vec![vec![iv(0, 10)], vec![iv(1, 2), iv(3, 4)]],
            vec![Target::new(set1(&[1, 3]), 1).unwrap()],
        )
        .unwrap();
        let out = colorful_halman(&inst, DEFAULT_GUARD).unwrap();
        assert_eq!(out, HellyOutcome::Witness { class: 0, points: vec![vec![Point::from_ints(&[3])]] });
        assert_eq!(check_colorful_hypothesis(&inst, 2, DEFAULT_GUARD).unwrap(), None);
    }

    #[test]
    fn colorful_identical_classes() {
        let b = AxisBox::from_ints(&[(0, 4), (0, 4)]);
        let s = PointSet::from_ints(2, &[&[1, 1], &[2, 0], &[0, 3]]);
        let inst = ColoredInstance::new(2, vec![vec![b]; 4], vec![Target::new(s, 1).unwrap()]).unwrap();
        let HellyOutcome::Witness { points, .. } = colorful_halman(&inst, DEFAULT_GUARD).unwrap() else {
            panic!()
        };
        assert_eq!(points, vec![vec![Point::from_ints(&[0, 3])]]);
    }

    #[test]
    fn very_colorful_two_targets() {
        let inst = ColoredInstance::new(
            1,
            vec![vec![iv(0, 4)], vec![iv(1, 3)]],
            vec![Target::new(set1(&[1, 2]), 2).unwrap(), Target::new(set1(&[3]), 1).unwrap()],
        )
        .unwrap();
        // Both omitted classes score 2 + 1; the first one wins.
        let HellyOutcome::Witness { class, points } = colorful_halman(&inst, DEFAULT_GUARD).unwrap() else {
            panic!()
        };
        assert_eq!(class, 0);
        assert_eq!(points[0], set1(&[1, 2]).points());
        assert_eq!(points[1], set1(&[3]).points());
        assert_eq!(valid_classes(&inst).unwrap(), vec![0, 1]);
    }

    #[test]
    fn colorful_hypothesis_counterexample() {
        let inst = ColoredInstance::new(
            1,
            vec![vec![iv(0, 1)], vec![iv(2, 3)]],
            vec![Target::new(set1(&[0]), 1).unwrap()],
        )
        .unwrap();
        let cert = check_colorful_hypothesis(&inst, 2, DEFAULT_GUARD).unwrap().unwrap();
        assert_eq!(cert.members, vec![Member { class: 0, index: 0 }, Member { class: 1, index: 0 }]);
        assert!(certificate_holds(&inst, &cert).unwrap());
        // the rank scan itself is satisfied on 1-tuples that contain 0, fails on [2,3]
        assert!(!colorful_halman(&inst, DEFAULT_GUARD).unwrap().is_witness());
    }

    #[test]
    fn colorful_hypothesis_single_class() {
        let inst = ColoredInstance::monochromatic(1, vec![iv(0, 1), iv(1, 2)], set1(&[1]), 1).unwrap();
        assert_eq!(check_colorful_hypothesis(&inst, 1, DEFAULT_GUARD).unwrap(), None);
        assert!(check_colorful_hypothesis(&inst, 2, DEFAULT_GUARD).is_err());
    }

    #[test]
    fn colorful_wrong_class_count() {
        let inst = ColoredInstance::monochromatic(1, vec![iv(0, 1)], set1(&[1]), 1).unwrap();
        assert!(matches!(colorful_halman(&inst, DEFAULT_GUARD), Err(Error::InvalidArgument(_))));
        let inst = ColoredInstance::new(1, vec![vec![iv(0, 1)], vec![]], vec![Target::new(set1(&[1]), 1).unwrap()])
            .unwrap();
        assert!(matches!(colorful_halman(&inst, DEFAULT_GUARD), Err(Error::EmptyFamily(_))));
    }

    #[test]
    fn radon_examples() {
        let mut pts: Vec<Point> = cross_polytope(2).unwrap().points();
        pts.push(Point::from_ints(&[0, 0]));
        let x = PointSet::new(2, pts).unwrap();
        assert_eq!(radon_box_point(&x).unwrap(), Some(Point::from_ints(&[0, 0])));
        assert_eq!(radon_box_point(&cross_polytope(2).unwrap()).unwrap(), None);
        assert_eq!(radon_box_point(&set1(&[0, 5, 9])).unwrap(), Some(Point::from_ints(&[5])));
        assert_eq!(radon_box_point(&set1(&[4])).unwrap(), None);
        assert!(radon_box_point(&PointSet::new(1, []).unwrap()).is_err());
    }

    #[test]
    fn extremal_instances() {
        assert_eq!(cross_polytope(2).unwrap(), PointSet::from_ints(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]));
        let (boxes, s) = halman_sharp(1).unwrap();
        assert_eq!(boxes, vec![iv(-1, -1), iv(1, 1)]);
        assert_eq!(s, set1(&[-1, 1]));
        let (boxes, _) = halman_sharp(2).unwrap();
        assert_eq!(
            boxes,
            vec![
                AxisBox::from_ints(&[(-1, 0), (-1, 1)]),
                AxisBox::from_ints(&[(0, 1), (-1, 1)]),
                AxisBox::from_ints(&[(-1, 1), (-1, 0)]),
                AxisBox::from_ints(&[(-1, 1), (0, 1)]),
            ]
        );
    }
}
