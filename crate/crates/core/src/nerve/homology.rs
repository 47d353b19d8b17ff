//! Reduced Betti numbers over the rationals and the Leray property.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::SimplicialComplex;
use crate::error::{Error, Result};

/// Maximum number of faces a homology computation may enumerate.
pub const FACE_GUARD: u128 = 1 << 20;

/// Maximum vertex count for exhaustive induced-subcomplex checks.
pub const LERAY_VERTEX_GUARD: usize = 12;

type Mask = u128;

/// Reduced rational Betti numbers `β̃_0, …, β̃_dim`. The empty complex has
/// no entries.
pub fn homology_ranks(complex: &SimplicialComplex) -> Result<Vec<usize>> {
    let Some(top) = complex.dimension() else {
        return Ok(Vec::new());
    };
    let betti = betti_from(&local_facets(complex)?, 0)?;
    debug_assert_eq!(betti.len(), top + 1);
    Ok(betti)
}

/// Whether every induced subcomplex has vanishing `β̃_i` for all `i ≥ m`.
pub fn is_m_leray(complex: &SimplicialComplex, m: usize) -> Result<bool> {
    let verts = complex.vertices();
    if verts.len() > LERAY_VERTEX_GUARD {
        return Err(Error::GuardExceeded { needed: verts.len() as u128, limit: LERAY_VERTEX_GUARD as u64 });
    }
    let facets = local_facets(complex)?;
    for subset in 1u128..(1 << verts.len()) {
        let induced = maximal(facets.iter().map(|f| f & subset));
        if induced.iter().all(|f| (f.count_ones() as usize) <= m) {
            // no face of dimension ≥ m
            continue;
        }
        let common = induced.iter().fold(Mask::MAX, |acc, f| acc & f);
        if common != 0 {
            continue;
        }
        if betti_from(&induced, m)?.iter().any(|&b| b != 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn local_facets(complex: &SimplicialComplex) -> Result<Vec<Mask>> {
    let verts = complex.vertices();
    if verts.len() > 128 {
        return Err(Error::GuardExceeded { needed: verts.len() as u128, limit: 128 });
    }
    let pos: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    Ok(complex.facets().iter().map(|f| f.iter().fold(0, |acc, v| acc | 1 << pos[v])).collect())
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
    kept
}

/// `β̃_i` for `i = from ..= top`, where `top` is the complex dimension.
/// Only faces of dimension `≥ from − 1` are enumerated.
fn betti_from(facets: &[Mask], from: usize) -> Result<Vec<usize>> {
    let top = match facets.iter().map(|f| f.count_ones() as usize).max() {
        Some(size) => size - 1,
        None => return Ok(Vec::new()),
    };
    if from > top {
        return Ok(Vec::new());
    }
    let budget = facets.iter().fold(0u128, |acc, f| acc.saturating_add(1 << f.count_ones().min(127)));
    if budget > 4 * FACE_GUARD {
        return Err(Error::GuardExceeded { needed: budget, limit: FACE_GUARD as u64 });
    }
    // faces[k] holds the faces with k vertices, k = from ..= top + 1
    let min_size = from.max(1);
    let mut by_size: Vec<HashMap<Mask, usize>> = vec![HashMap::new(); top + 2];
    let mut lists: Vec<Vec<Mask>> = vec![Vec::new(); top + 2];
    for &f in facets {
        for sub in subsets_at_least(f, min_size) {
            let size = sub.count_ones() as usize;
            let map = &mut by_size[size];
            if !map.contains_key(&sub) {
                map.insert(sub, lists[size].len());
                lists[size].push(sub);
            }
        }
    }
    let total: usize = lists.iter().map(Vec::len).sum();
    if total as u128 > FACE_GUARD {
        return Err(Error::GuardExceeded { needed: total as u128, limit: FACE_GUARD as u64 });
    }
    // rank of ∂ from faces of size k to faces of size k-1; size 1 maps onto the
    // empty face (augmentation), whose rank is 1 for a nonempty complex.
    let rank_of = |k: usize| -> usize {
        if k == 1 {
            usize::from(!lists[1].is_empty())
        } else if k > top + 1 {
            0
        } else {
            boundary_rank(&lists[k], &by_size[k - 1])
        }
    };
    let mut ranks = HashMap::new();
    let mut out = Vec::with_capacity(top + 1 - from);
    for dim in from..=top {
        let size = dim + 1;
        let r_here = *ranks.entry(size).or_insert_with(|| rank_of(size));
        let r_next = *ranks.entry(size + 1).or_insert_with(|| rank_of(size + 1));
        out.push(lists[size].len() - r_here - r_next);
    }
    Ok(out)
}

/// Nonempty subsets of `f` with at least `min` elements.
fn subsets_at_least(f: Mask, min: usize) -> impl Iterator<Item = Mask> {
    let bits: Vec<Mask> = (0..128).filter(|i| f >> i & 1 == 1).map(|i| 1 << i).collect();
    let n = bits.len();
    (1u64..(1u64 << n)).filter(move |s| s.count_ones() as usize >= min).map(move |s| {
        (0..n).filter(|i| s >> i & 1 == 1).fold(0, |acc, i| acc | bits[i])
    })
}

/// Rank over ℚ of the boundary map on `faces`, by fraction-free column
/// reduction on integer columns (content removed after every step).
fn boundary_rank(faces: &[Mask], rows: &HashMap<Mask, usize>) -> usize {
    let mut pivots: HashMap<usize, Vec<(usize, BigInt)>> = HashMap::new();
    let mut rank = 0;
    for &face in faces {
        let mut col: Vec<(usize, BigInt)> = Vec::new();
        let mut sign = 1i64;
        let mut bits = face;
        while bits != 0 {
            let v = bits & bits.wrapping_neg();
            col.push((rows[&(face & !v)], BigInt::from(sign)));
            sign = -sign;
            bits &= bits - 1;
        }
        col.sort_by_key(|e| e.0);
        while let Some((low, _)) = col.last() {
            let Some(piv) = pivots.get(low) else {
                pivots.insert(*low, col);
                rank += 1;
                break;
            };
            let a = piv.last().expect("nonempty pivot").1.clone();
            let b = col.last().expect("nonempty column").1.clone();
            col = combine(&col, &a, piv, &b);
        }
    }
    rank
}

/// `a·x − b·y`, normalized by content; entries are kept sorted by row.
fn combine(x: &[(usize, BigInt)], a: &BigInt, y: &[(usize, BigInt)], b: &BigInt) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (row, v) = if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            i += 1;
            (x[i - 1].0, a * &x[i - 1].1)
        } else if i == x.len() || y[j].0 < x[i].0 {
            j += 1;
            (y[j - 1].0, -(b * &y[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (x[i - 1].0, a * &x[i - 1].1 - b * &y[j - 1].1)
        };
        if !v.is_zero() {
            out.push((row, v));
        }
    }
    let g = out.iter().fold(BigInt::zero(), |g, e| g.gcd(&e.1));
    if !g.is_zero() && !g.abs().is_one() {
        for e in &mut out {
            e.1 /= &g;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(faces: &[&[usize]]) -> SimplicialComplex {
        SimplicialComplex::from_faces(faces.iter().map(|f| f.to_vec()))
    }

    #[test]
    fn betti_examples() {
        assert_eq!(homology_ranks(&complex(&[&[0, 1], &[1, 2], &[0, 2]])).unwrap(), vec![0, 1]);
        assert_eq!(homology_ranks(&complex(&[&[0, 1, 2, 3]])).unwrap(), vec![0, 0, 0, 0]);
        assert_eq!(homology_ranks(&complex(&[&[0], &[1]])).unwrap(), vec![1]);
        assert!(homology_ranks(&SimplicialComplex::empty()).unwrap().is_empty());
    }

    #[test]
    fn sphere_and_torus_like() {
        // boundary of the tetrahedron: a 2-sphere
        let sphere = complex(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        assert_eq!(homology_ranks(&sphere).unwrap(), vec![0, 0, 1]);
        // two disjoint hollow triangles
        let two = complex(&[&[0, 1], &[1, 2], &[0, 2], &[3, 4], &[4, 5], &[3, 5]]);
        assert_eq!(homology_ranks(&two).unwrap(), vec![1, 2]);
        // minimal 7-vertex torus
        let torus: Vec<Vec<usize>> = (0..7)
            .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
            .collect();
        let torus = SimplicialComplex::from_faces(torus);
        assert_eq!(homology_ranks(&torus).unwrap(), vec![0, 2, 1]);
    }

    #[test]
    fn real_projective_plane_has_no_rational_homology() {
        // 6-vertex RP^2: H_1 = Z/2 vanishes over the rationals
        let rp2 = complex(&[
            &[0, 1, 2],
            &[0, 2, 3],
            &[0, 3, 4],
            &[0, 4, 5],
            &[0, 5, 1],
            &[1, 2, 4],
            &[2, 3, 5],
            &[3, 4, 1],
            &[4, 5, 2],
            &[5, 1, 3],
        ]);
        assert_eq!(homology_ranks(&rp2).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn leray_examples() {
        let triangle = complex(&[&[0, 1], &[1, 2], &[0, 2]]);
        assert!(!is_m_leray(&triangle, 1).unwrap());
        assert!(is_m_leray(&triangle, 2).unwrap());
        assert!(is_m_leray(&SimplicialComplex::empty(), 0).unwrap());
        assert!(is_m_leray(&SimplicialComplex::empty(), 3).unwrap());
        // two isolated points are disconnected
        assert!(!is_m_leray(&complex(&[&[0], &[1]]), 0).unwrap());
        assert!(is_m_leray(&complex(&[&[0], &[1]]), 1).unwrap());
    }

    #[test]
    fn leray_guard() {
        let big = complex(&[&(0..13).collect::<Vec<_>>()]);
        assert!(matches!(is_m_leray(&big, 1), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn cone_is_acyclic() {
        let cone = complex(&[&[9, 0, 1], &[9, 1, 2], &[9, 0, 2], &[9, 3]]);
        assert!(homology_ranks(&cone).unwrap().iter().all(|&b| b == 0));
    }
}
