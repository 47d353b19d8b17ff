//! Constructive `(2d−1)`-collapse sequences for `K(B, S)` and an independent
//! replay verifier.
//!
//! The constructor follows the induction on `|S|`: points that are never the
//! unique point of `S` in an intersection are dropped without touching the
//! complex; otherwise the lexicographically largest point `s0` is processed by
//! collapsing away every face whose intersection meets `S` only in `s0`. The
//! first collapse uses the achiever face of `∩T_{s0}` (left endpoints on every
//! axis, right endpoints on axes 2..d). Further collapses, when needed, come
//! from a depth-first search over faces of `T_{s0}` with at most `2d−1`
//! vertices.

use serde::{Deserialize, Serialize};

use super::SimplicialComplex;
use crate::combinatorics::{binomial, Combinations, DEFAULT_GUARD};
use crate::error::{check_dim, Error, Result};
use crate::geometry::{AxisBox, Point, PointSet};

/// One `m`-collapse: remove `sigma` and all its cofaces, where `eta` is the
/// unique maximal face containing `sigma`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseStep {
    pub sigma: Vec<usize>,
    pub eta: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CollapseCheck {
    Valid,
    /// Step `step` is invalid; `step == steps.len()` means the replay ended on a
    /// nonempty complex.
    Invalid { step: usize, reason: String },
}

impl CollapseCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, CollapseCheck::Valid)
    }
}

/// Replays `steps` on `complex` and checks each is an `m`-collapse.
pub fn verify_collapse_sequence(complex: &SimplicialComplex, steps: &[CollapseStep], m: usize) -> CollapseCheck {
    let mut current = complex.clone();
    for (i, step) in steps.iter().enumerate() {
        let invalid = |reason: String| CollapseCheck::Invalid { step: i, reason };
        let mut sigma = step.sigma.clone();
        sigma.sort_unstable();
        sigma.dedup();
        let mut eta = step.eta.clone();
        eta.sort_unstable();
        eta.dedup();
        if sigma.is_empty() {
            return invalid("empty face".into());
        }
        if sigma.len() > m {
            return invalid(format!("face of dimension {} exceeds {}", sigma.len() - 1, m.saturating_sub(1)));
        }
        if !current.contains_face(&sigma) {
            return invalid("face not present".into());
        }
        let cofaces = current.facets_containing(&sigma);
        if cofaces.len() != 1 {
            return invalid(format!("face lies in {} maximal faces", cofaces.len()));
        }
        if cofaces[0] != eta.as_slice() {
            return invalid(format!("maximal coface is {:?}, not {:?}", cofaces[0], eta));
        }
        current = current.remove_star(&sigma);
    }
    if current.is_empty() {
        CollapseCheck::Valid
    } else {
        CollapseCheck::Invalid { step: steps.len(), reason: format!("{} maximal faces remain", current.facets().len()) }
    }
}

type Mask = u128;

fn mask_to_vec(mask: Mask) -> Vec<usize> {
    (0..128).filter(|i| mask >> i & 1 == 1).collect()
}

fn maximal(masks: impl IntoIterator<Item = Mask>) -> Vec<Mask> {
    let mut all: Vec<Mask> = masks.into_iter().filter(|&m| m != 0).collect();
    all.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
    all.dedup();
    let mut kept: Vec<Mask> = Vec::new();
    for m in all {
        if !kept.iter().any(|&k| m & !k == 0) {
            kept.push(m);
        }
    }
    kept.sort_unstable();
    kept
}

fn remove_star(facets: &[Mask], sigma: Mask) -> Vec<Mask> {
    let mut out = Vec::with_capacity(facets.len() + 4);
    for &f in facets {
        if sigma & !f == 0 {
            let mut bits = sigma;
            while bits != 0 {
                let v = bits & bits.wrapping_neg();
                out.push(f & !v);
                bits &= bits - 1;
            }
        } else {
            out.push(f);
        }
    }
    maximal(out)
}

/// Processing state for one point `s0`.
struct Stage<'a> {
    eta: Mask,
    /// `T_s` for the other surviving points; a face survives into the next
    /// complex iff it is inside one of them.
    others: &'a [Mask],
    m: usize,
    budget: u64,
}

impl Stage<'_> {
    /// Faces whose intersection meets the surviving points only in `s0`.
    fn doomed(&self, face: Mask) -> bool {
        face != 0 && face & !self.eta == 0 && !self.others.iter().any(|&t| face & !t == 0)
    }

    fn finished(&self, facets: &[Mask]) -> bool {
        !facets.iter().any(|&f| self.doomed(f & self.eta))
    }

    fn collapsible(&self, facets: &[Mask], sigma: Mask) -> Option<Mask> {
        let mut cofaces = facets.iter().filter(|&&f| sigma & !f == 0);
        let first = *cofaces.next()?;
        cofaces.next().is_none().then_some(first)
    }

    /// Candidate faces in order of size, then lexicographically.
    fn candidates(&self, facets: &[Mask]) -> Vec<(Mask, Mask)> {
        let verts = mask_to_vec(self.eta);
        let mut out = Vec::new();
        for size in 1..=self.m.min(verts.len()) {
            for combo in Combinations::new(verts.len(), size) {
                let sigma = combo.iter().fold(0, |acc, &i| acc | 1 << verts[i]);
                if !self.doomed(sigma) {
                    continue;
                }
                if let Some(eta) = self.collapsible(facets, sigma) {
                    out.push((sigma, eta));
                }
            }
        }
        out
    }

    fn search(&mut self, facets: Vec<Mask>, steps: &mut Vec<(Mask, Mask)>) -> Option<Vec<Mask>> {
        if self.finished(&facets) {
            return Some(facets);
        }
        for (sigma, eta) in self.candidates(&facets) {
            if self.budget == 0 {
                return None;
            }
            self.budget -= 1;
            steps.push((sigma, eta));
            if let Some(done) = self.search(remove_star(&facets, sigma), steps) {
                return Some(done);
            }
            steps.pop();
        }
        None
    }
}

/// The collapses made while removing one point of `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseStage {
    pub point: Point,
    pub steps: Vec<CollapseStep>,
    /// Points still present afterwards; the residual complex is their nerve.
    pub survivors: Vec<Point>,
}

/// A `(2d−1)`-collapse sequence taking `K(boxes, points)` to the empty complex.
pub fn collapse_sequence(boxes: &[AxisBox], points: &PointSet) -> Result<Vec<CollapseStep>> {
    Ok(collapse_stages(boxes, points)?.into_iter().flat_map(|stage| stage.steps).collect())
}

/// [`collapse_sequence`] split by removed point, last point first. Points
/// whose boxes all contain another surviving point are dropped without
/// collapses.
///
/// After each stage the residual complex is checked against the nerve of the
/// survivors; a mismatch, or a point whose faces cannot be collapsed, is
/// reported as [`Error::TheoremViolated`].
pub fn collapse_stages(boxes: &[AxisBox], points: &PointSet) -> Result<Vec<CollapseStage>> {
    if boxes.len() > 128 {
        return Err(Error::InvalidArgument(format!("collapse supports at most 128 boxes, got {}", boxes.len())));
    }
    for b in boxes {
        check_dim(points.dim(), b.dim())?;
    }
    let dim = points.dim();
    let m = 2 * dim - 1;
    let pts = points.points();
    let covers: Vec<Mask> = pts
        .iter()
        .map(|s| boxes.iter().enumerate().filter(|(_, b)| b.covers(s)).fold(0, |acc, (i, _)| acc | 1 << i))
        .collect();
    let mut alive: Vec<usize> = (0..pts.len()).collect();
    let mut facets = maximal(covers.iter().copied());
    let mut stages = Vec::new();
    let survivors = |alive: &[usize]| alive.iter().map(|&s| pts[s].clone()).collect::<Vec<_>>();

    while let Some(&s0) = alive.last() {
        // A point whose boxes also all contain another surviving point never
        // determines a face of its own.
        let redundant = alive.iter().position(|&s| {
            covers[s] == 0 || alive.iter().any(|&t| t != s && covers[s] & !covers[t] == 0)
        });
        if let Some(pos) = redundant {
            let point = pts[alive.remove(pos)].clone();
            stages.push(CollapseStage { point, steps: Vec::new(), survivors: survivors(&alive) });
            let expected = maximal(alive.iter().map(|&s| covers[s]));
            if expected != facets {
                return Err(Error::TheoremViolated("dropping a redundant point changed the complex".into()));
            }
            continue;
        }

        let eta = covers[s0];
        let others: Vec<Mask> = alive[..alive.len() - 1].iter().map(|&s| covers[s]).collect();
        let mut stage = Stage { eta, others: &others, m, budget: DEFAULT_GUARD };
        let members: Vec<AxisBox> = mask_to_vec(eta).iter().map(|&i| boxes[i].clone()).collect();
        let first = achiever_face(&members, &mask_to_vec(eta));
        let mut stage_steps = Vec::new();
        let mut current = facets.clone();
        if stage.doomed(first) {
            if let Some(e) = stage.collapsible(&current, first) {
                stage_steps.push((first, e));
                current = remove_star(&current, first);
            }
        }
        let verts = eta.count_ones() as usize;
        let per_node = (1..=m).map(|k| binomial(verts, k)).sum::<u128>();
        if per_node > DEFAULT_GUARD as u128 {
            return Err(Error::GuardExceeded { needed: per_node, limit: DEFAULT_GUARD });
        }
        let residual = stage.search(current, &mut stage_steps).ok_or_else(|| {
            Error::TheoremViolated(format!("no sequence of {m}-collapses removes the faces of point {:?}", pts[s0]))
        })?;
        alive.pop();
        let expected = maximal(alive.iter().map(|&s| covers[s]));
        if residual != expected {
            return Err(Error::TheoremViolated("residual complex differs from the nerve of the remaining points".into()));
        }
        facets = residual;
        stages.push(CollapseStage {
            point: pts[s0].clone(),
            steps: stage_steps.into_iter().map(|(s, e)| CollapseStep { sigma: mask_to_vec(s), eta: mask_to_vec(e) }).collect(),
            survivors: survivors(&alive),
        });
    }
    if !facets.is_empty() {
        return Err(Error::TheoremViolated("complex not empty after all points".into()));
    }
    Ok(stages)
}

/// Boxes attaining the lower endpoint of `∩members` on every axis and the
/// upper endpoint on axes after the first; lowest index on ties.
fn achiever_face(members: &[AxisBox], labels: &[usize]) -> Mask {
    let dim = members[0].dim();
    let mut face: Mask = 0;
    for axis in 0..dim {
        let lo = (0..members.len())
            .reduce(|best, i| if members[i].lo().unwrap()[axis] > members[best].lo().unwrap()[axis] { i } else { best })
            .unwrap();
        face |= 1 << labels[lo];
        if axis > 0 {
            let hi = (0..members.len())
                .reduce(|best, i| if members[i].hi().unwrap()[axis] < members[best].hi().unwrap()[axis] { i } else { best })
                .unwrap();
            face |= 1 << labels[hi];
        }
    }
    face
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::helly::halman_sharp;
    use crate::nerve::discrete_nerve;

    #[test]
    fn nested_intervals_need_two_collapses() {
        let boxes = vec![AxisBox::from_ints(&[(0, 2)]), AxisBox::from_ints(&[(1, 3)])];
        let s = PointSet::new(1, [Point::from_ints(&[1])]).unwrap();
        let steps = collapse_sequence(&boxes, &s).unwrap();
        assert_eq!(
            steps,
            vec![
                CollapseStep { sigma: vec![1], eta: vec![0, 1] },
                CollapseStep { sigma: vec![0], eta: vec![0] },
            ]
        );
        let k = discrete_nerve(&boxes, &s).unwrap();
        assert!(verify_collapse_sequence(&k, &steps, 1).is_valid());
    }

    #[test]
    fn empty_point_set() {
        let boxes = vec![AxisBox::from_ints(&[(0, 2)])];
        assert!(collapse_sequence(&boxes, &PointSet::new(1, []).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn sharp_instance_collapses() {
        let (boxes, s) = halman_sharp(2).unwrap();
        let steps = collapse_sequence(&boxes, &s).unwrap();
        assert!(steps.iter().all(|st| st.sigma.len() <= 3));
        let k = discrete_nerve(&boxes, &s).unwrap();
        assert_eq!(verify_collapse_sequence(&k, &steps, 3), CollapseCheck::Valid);
    }

    #[test]
    fn verifier_rejects_oversized_face() {
        let k = SimplicialComplex::from_faces(vec![vec![0, 1]]);
        let steps = vec![CollapseStep { sigma: vec![0, 1], eta: vec![0, 1] }];
        assert!(matches!(verify_collapse_sequence(&k, &steps, 1), CollapseCheck::Invalid { step: 0, .. }));
        assert!(matches!(verify_collapse_sequence(&k, &steps, 2), CollapseCheck::Invalid { step: 1, .. }));
        let full = vec![
            CollapseStep { sigma: vec![0, 1], eta: vec![0, 1] },
            CollapseStep { sigma: vec![0], eta: vec![0] },
            CollapseStep { sigma: vec![1], eta: vec![1] },
        ];
        assert!(verify_collapse_sequence(&k, &full, 2).is_valid());
    }

    #[test]
    fn verifier_rejects_truncated_sequence() {
        let boxes = vec![AxisBox::from_ints(&[(0, 2)]), AxisBox::from_ints(&[(1, 3)])];
        let s = PointSet::new(1, [Point::from_ints(&[1])]).unwrap();
        let mut steps = collapse_sequence(&boxes, &s).unwrap();
        steps.pop();
        let k = discrete_nerve(&boxes, &s).unwrap();
        assert_eq!(verify_collapse_sequence(&k, &steps, 1), CollapseCheck::Invalid {
            step: 1,
            reason: "1 maximal faces remain".into()
        });
    }

    #[test]
    fn verifier_rejects_shared_face() {
        let k = SimplicialComplex::from_faces(vec![vec![0, 1], vec![1, 2]]);
        let steps = vec![CollapseStep { sigma: vec![1], eta: vec![0, 1] }];
        assert!(matches!(verify_collapse_sequence(&k, &steps, 1), CollapseCheck::Invalid { step: 0, .. }));
    }
}
