//! Matroid rank oracles and the matroid colorful Halman check.

use crate::bits::intersect_all;
use crate::combinatorics::Combinations;
use crate::error::{check_dim, Error, Result};
use crate::geometry::{box_masks, AxisBox, Point, PointSet};

/// Largest ground set for which independent sets are enumerated.
pub const MATROID_GROUND_GUARD: usize = 20;

/// A matroid given by its rank function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatroidOracle {
    /// Every set of at most `rank` elements is independent.
    Uniform { size: usize, rank: usize },
    /// Element `e` belongs to part `part_of[e]`; a set is independent when it
    /// takes at most `capacities[p]` elements from each part `p`.
    Partition { part_of: Vec<usize>, capacities: Vec<usize> },
    /// Independent sets listed explicitly (closed downward, exchange axiom).
    ExplicitIndependentSets { size: usize, independent: Vec<Vec<usize>> },
}

impl MatroidOracle {
    pub fn uniform(size: usize, rank: usize) -> Result<Self> {
        if rank > size {
            return Err(Error::InvalidArgument(format!("uniform rank {rank} exceeds ground size {size}")));
        }
        Ok(Self::Uniform { size, rank })
    }

    /// Partition matroid from the parts themselves; every element of
    /// `0..size` must lie in exactly one part.
    pub fn partition(size: usize, parts: &[Vec<usize>], capacities: Vec<usize>) -> Result<Self> {
        if parts.len() != capacities.len() {
            return Err(Error::InvalidArgument("one capacity per part is required".into()));
        }
        let mut part_of = vec![usize::MAX; size];
        for (p, part) in parts.iter().enumerate() {
            for &e in part {
                if e >= size {
                    return Err(Error::InvalidArgument(format!("element {e} outside ground set of size {size}")));
                }
                if part_of[e] != usize::MAX {
                    return Err(Error::InvalidArgument(format!("element {e} lies in two parts")));
                }
                part_of[e] = p;
            }
        }
        if let Some(e) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidArgument(format!("element {e} lies in no part")));
        }
        Ok(Self::Partition { part_of, capacities })
    }

    /// Explicit independent sets; the empty set is implied. Rejects families
    /// that are not closed downward or violate the exchange axiom.
    pub fn explicit(size: usize, independent: Vec<Vec<usize>>) -> Result<Self> {
        if size > MATROID_GROUND_GUARD {
            return Err(Error::GuardExceeded { needed: size as u128, limit: MATROID_GROUND_GUARD as u64 });
        }
        let mut masks: Vec<u32> = vec![0];
        for set in &independent {
            let mut mask = 0u32;
            for &e in set {
                if e >= size {
                    return Err(Error::InvalidArgument(format!("element {e} outside ground set of size {size}")));
                }
                mask |= 1 << e;
            }
            masks.push(mask);
        }
        masks.sort_unstable();
        masks.dedup();
        let has = |m: u32| masks.binary_search(&m).is_ok();
        for &m in &masks {
            let mut bits = m;
            while bits != 0 {
                let low = bits & bits.wrapping_neg();
                if !has(m & !low) {
                    return Err(Error::InvalidArgument(format!("independent sets not closed downward at {m:#b}")));
                }
                bits &= bits - 1;
            }
        }
        for &a in &masks {
            for &b in &masks {
                if a.count_ones() < b.count_ones() {
                    let spare = b & !a;
                    if !(0..size).any(|e| spare >> e & 1 == 1 && has(a | 1 << e)) {
                        return Err(Error::InvalidArgument("exchange axiom fails".into()));
                    }
                }
            }
        }
        let independent = masks.iter().skip(1).map(|&m| (0..size).filter(|e| m >> e & 1 == 1).collect()).collect();
        Ok(Self::ExplicitIndependentSets { size, independent })
    }

    pub fn ground_size(&self) -> usize {
        match self {
            Self::Uniform { size, .. } | Self::ExplicitIndependentSets { size, .. } => *size,
            Self::Partition { part_of, .. } => part_of.len(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Uniform { .. } => "uniform",
            Self::Partition { .. } => "partition",
            Self::ExplicitIndependentSets { .. } => "explicit-independent-sets",
        }
    }

    /// Rank of a subset of the ground set (duplicates ignored).
    pub fn rank(&self, subset: &[usize]) -> usize {
        let mut members = subset.to_vec();
        members.sort_unstable();
        members.dedup();
        match self {
            Self::Uniform { rank, .. } => members.len().min(*rank),
            Self::Partition { part_of, capacities } => {
                let mut used = vec![0usize; capacities.len()];
                for e in members {
                    used[part_of[e]] += 1;
                }
                used.iter().zip(capacities).map(|(u, c)| u.min(c)).sum()
            }
            Self::ExplicitIndependentSets { independent, .. } => independent
                .iter()
                .filter(|set| set.iter().all(|e| members.binary_search(e).is_ok()))
                .map(Vec::len)
                .max()
                .unwrap_or(0),
        }
    }

    pub fn is_independent(&self, subset: &[usize]) -> bool {
        self.rank(subset) == subset.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatroidOutcome {
    /// `cover` is `T_s`, the elements whose boxes contain `point`, and the
    /// complement of `cover` has rank `complement_rank ≤ 2d−1`.
    Found { cover: Vec<usize>, point: Point, complement_rank: usize },
    /// An independent set whose boxes have no common point of `S`.
    Counterexample { independent: Vec<usize> },
}

/// Matroid colorful Halman: checks that every independent set of boxes has a
/// common point of `S`, then returns the first `T_s` (in lexicographic order
/// of `s`) whose complement has rank at most `2d−1`. Any valid `T` lies inside
/// some `T_s` and rank is monotone, so this search is complete.
pub fn matroid_halman_check(
    oracle: &MatroidOracle,
    boxes: &[AxisBox],
    points: &PointSet,
) -> Result<MatroidOutcome> {
    let n = oracle.ground_size();
    if boxes.len() != n {
        return Err(Error::InvalidArgument(format!("{} boxes for a ground set of size {n}", boxes.len())));
    }
    if n > MATROID_GROUND_GUARD {
        return Err(Error::GuardExceeded { needed: n as u128, limit: MATROID_GROUND_GUARD as u64 });
    }
    for b in boxes {
        check_dim(points.dim(), b.dim())?;
    }
    let masks = box_masks(boxes, points)?;
    let len = points.distinct_len();
    let full_rank = oracle.rank(&(0..n).collect::<Vec<_>>());
    for size in 0..=full_rank {
        for subset in Combinations::new(n, size) {
            if oracle.is_independent(&subset) && intersect_all(len, subset.iter().map(|&i| &masks[i])).is_clear() {
                return Ok(MatroidOutcome::Counterexample { independent: subset });
            }
        }
    }
    let limit = 2 * points.dim() - 1;
    for (si, s) in points.iter().enumerate() {
        let cover: Vec<usize> = (0..n).filter(|&v| masks[v].contains(si)).collect();
        let rest: Vec<usize> = (0..n).filter(|&v| !masks[v].contains(si)).collect();
        let complement_rank = oracle.rank(&rest);
        if complement_rank <= limit {
            return Ok(MatroidOutcome::Found { cover, point: s.clone(), complement_rank });
        }
    }
    Err(Error::TheoremViolated(format!(
        "every independent set meets S but no T_s has complement rank at most {limit}"
    )))
}
