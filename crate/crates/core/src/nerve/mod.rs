//! Discrete nerve complexes `K(B, S)`, their collapses, rational homology and
//! the matroid form of Halman's theorem.
//!
//! Complexes are stored by their inclusion-maximal faces. A face is any
//! nonempty subset of some maximal face.

mod collapse;
mod homology;
mod matroid;

pub use collapse::{
    collapse_sequence, collapse_stages, verify_collapse_sequence, CollapseCheck, CollapseStage, CollapseStep,
};
pub use homology::{homology_ranks, is_m_leray, FACE_GUARD, LERAY_VERTEX_GUARD};
pub use matroid::{matroid_halman_check, MatroidOracle, MatroidOutcome, MATROID_GROUND_GUARD};

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Result};
use crate::geometry::{AxisBox, PointSet};

/// A finite simplicial complex over `usize` vertex labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SimplicialComplex {
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// The complex generated by `faces`: each face is sorted and deduplicated,
    /// empty faces are dropped and only inclusion-maximal ones are kept.
    pub fn from_faces(faces: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut faces: Vec<Vec<usize>> = faces
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .filter(|f| !f.is_empty())
            .collect();
        // larger faces first so that a face only needs checking against kept ones
        faces.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        faces.dedup();
        let mut kept: Vec<Vec<usize>> = Vec::new();
        for f in faces {
            if !kept.iter().any(|k| is_subset(&f, k)) {
                kept.push(f);
            }
        }
        kept.sort();
        Self { facets: kept }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Inclusion-maximal faces, each sorted, in lexicographic order.
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.facets.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Dimension of the largest face; `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len() - 1).max()
    }

    pub fn contains_face(&self, face: &[usize]) -> bool {
        let face = sorted(face);
        !face.is_empty() && self.facets.iter().any(|f| is_subset(&face, f))
    }

    /// Maximal faces that contain `face`.
    pub fn facets_containing(&self, face: &[usize]) -> Vec<&[usize]> {
        let face = sorted(face);
        self.facets.iter().filter(|f| is_subset(&face, f)).map(Vec::as_slice).collect()
    }

    /// Removes `face` and every face containing it.
    pub fn remove_star(&self, face: &[usize]) -> Self {
        let face = sorted(face);
        let mut out = Vec::with_capacity(self.facets.len());
        for f in &self.facets {
            if is_subset(&face, f) {
                for v in &face {
                    out.push(f.iter().copied().filter(|x| x != v).collect());
                }
            } else {
                out.push(f.clone());
            }
        }
        Self::from_faces(out)
    }

    /// The subcomplex induced on `vertices`.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        Self::from_faces(self.facets.iter().map(|f| f.iter().copied().filter(|v| vertices.contains(v)).collect()))
    }

    /// A vertex lying in every maximal face, if any.
    pub fn cone_apex(&self) -> Option<usize> {
        let first = self.facets.first()?;
        first.iter().copied().find(|v| self.facets.iter().all(|f| f.binary_search(v).is_ok()))
    }
}

fn sorted(face: &[usize]) -> Vec<usize> {
    let mut f = face.to_vec();
    f.sort_unstable();
    f.dedup();
    f
}

/// Whether sorted `a` is a subset of sorted `b`.
pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// `K(B, S)`: vertex `i` for each box meeting `S`, and a face for each set of
/// boxes whose intersection contains a point of `S`. Built as the maximal
/// elements of `{T_s : s ∈ S}` with `T_s` the boxes containing `s`.
pub fn discrete_nerve(boxes: &[AxisBox], points: &PointSet) -> Result<SimplicialComplex> {
    for b in boxes {
        check_dim(points.dim(), b.dim())?;
    }
    Ok(SimplicialComplex::from_faces(points.iter().map(|s| {
        boxes.iter().enumerate().filter(|(_, b)| b.covers(s)).map(|(i, _)| i).collect()
    })))
}
