use std::fmt;

use serde::{Deserialize, Serialize};

/// Vertex identifiers are positive integers; `0` never names a vertex.
pub type VertexId = u32;

/// An abstract simplex: a strictly increasing list of positive vertex ids.
///
/// The empty list denotes the empty simplex of dimension −1, which is a
/// face of every simplex. Keeping it first-class lets boundary, link and
/// join handle the degenerate cases without special-casing.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex {
    vertices: Vec<VertexId>,
}

impl Simplex {
    /// Builds a simplex from arbitrary vertex ids, sorting and checking them.
    ///
    /// Returns `None` if any id is zero or repeated.
    pub fn new(mut vertices: Vec<VertexId>) -> Option<Self> {
        vertices.sort_unstable();
        if vertices.first() == Some(&0) {
            return None;
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Self { vertices })
    }

    /// The empty simplex of dimension −1.
    pub fn empty() -> Self {
        Self { vertices: Vec::new() }
    }

    /// Single-vertex simplex.
    pub fn vertex(v: VertexId) -> Self {
        debug_assert!(v >= 1);
        Self { vertices: vec![v] }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Dimension: one less than the vertex count (−1 for the empty simplex).
    pub fn dim(&self) -> i32 {
        self.vertices.len() as i32 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// True if `other` is a face of `self` (subset of vertices).
    pub fn contains(&self, other: &Simplex) -> bool {
        other.vertices.iter().all(|v| self.contains_vertex(*v))
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        !self.vertices.iter().any(|v| other.contains_vertex(*v))
    }

    /// Union of vertex sets; the join σ ∪ τ when the operands are disjoint.
    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut vertices: Vec<VertexId> = self
            .vertices
            .iter()
            .chain(other.vertices.iter())
            .copied()
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        Simplex { vertices }
    }

    pub fn intersection(&self, other: &Simplex) -> Simplex {
        let vertices = self
            .vertices
            .iter()
            .filter(|v| other.contains_vertex(**v))
            .copied()
            .collect();
        Simplex { vertices }
    }

    /// The face obtained by deleting each vertex of `other` (set difference).
    pub fn without(&self, other: &Simplex) -> Simplex {
        let vertices = self
            .vertices
            .iter()
            .filter(|v| !other.contains_vertex(**v))
            .copied()
            .collect();
        Simplex { vertices }
    }

    pub fn without_vertex(&self, v: VertexId) -> Simplex {
        let vertices = self
            .vertices
            .iter()
            .filter(|&&u| u != v)
            .copied()
            .collect();
        Simplex { vertices }
    }

    /// The (dim−1)-faces, i.e. the facets of ∂σ. Empty for a vertex this
    /// yields the single empty simplex, matching ∂(point) = {∅}.
    pub fn boundary_facets(&self) -> Vec<Simplex> {
        self.vertices
            .iter()
            .map(|&v| self.without_vertex(v))
            .collect()
    }

    /// All faces of the given dimension `k` (−1 ≤ k ≤ dim).
    pub fn faces_of_dim(&self, k: i32) -> Vec<Simplex> {
        use itertools::Itertools;
        if k < -1 || k > self.dim() {
            return Vec::new();
        }
        if k == -1 {
            return vec![Simplex::empty()];
        }
        self.vertices
            .iter()
            .copied()
            .combinations((k + 1) as usize)
            .map(|vertices| Simplex { vertices })
            .collect()
    }

    /// Every nonempty face, the simplex itself included.
    pub fn all_faces(&self) -> Vec<Simplex> {
        (0..=self.dim()).flat_map(|k| self.faces_of_dim(k)).collect()
    }

    pub fn max_vertex(&self) -> Option<VertexId> {
        self.vertices.last().copied()
    }

    /// Applies a vertex relabeling, re-sorting afterwards. Ids missing from
    /// the map are kept.
    pub fn relabel(&self, map: &std::collections::BTreeMap<VertexId, VertexId>) -> Simplex {
        let mut vertices: Vec<VertexId> = self
            .vertices
            .iter()
            .map(|v| map.get(v).copied().unwrap_or(*v))
            .collect();
        vertices.sort_unstable();
        Simplex { vertices }
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vertices.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (k, v) in self.vertices.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Shorthand used all over the tests: `simplex![1, 2, 3]`.
#[macro_export]
macro_rules! simplex {
    ($($v:expr),* $(,)?) => {
        $crate::simplex::Simplex::new(vec![$($v),*]).expect("valid simplex literal")
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_sorting_and_validation() {
        let s = Simplex::new(vec![3, 1, 2]).unwrap();
        assert_eq!(s.vertices(), &[1, 2, 3]);
        assert_eq!(s.dim(), 2);
        assert!(Simplex::new(vec![0, 1]).is_none());
        assert!(Simplex::new(vec![1, 1]).is_none());
    }

    #[test]
    fn empty_simplex_is_a_face_of_everything() {
        let s = simplex![1, 2];
        assert!(s.contains(&Simplex::empty()));
        assert_eq!(Simplex::empty().dim(), -1);
        assert_eq!(s.union(&Simplex::empty()), s);
    }

    #[test]
    fn boundary_of_vertex_is_empty_simplex() {
        let v = Simplex::vertex(5);
        assert_eq!(v.boundary_facets(), vec![Simplex::empty()]);
    }

    #[test]
    fn faces_by_dimension() {
        let s = simplex![1, 2, 3];
        assert_eq!(s.faces_of_dim(0).len(), 3);
        assert_eq!(s.faces_of_dim(1).len(), 3);
        assert_eq!(s.faces_of_dim(2), vec![s.clone()]);
        assert_eq!(s.all_faces().len(), 7);
    }
}
