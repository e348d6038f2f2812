//! Pure simplicial complexes given by their maximal simplices, with the
//! face/link/star/join/boundary calculus the rest of the crate builds on.
//!
//! Complexes are immutable values: every operation returns a new complex,
//! canonically sorted, so results serialize byte-identically and replay
//! deterministically.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::fvector::FVector;
use crate::simplex::{Simplex, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("facet list is empty")]
    EmptyInput,
    #[error("not pure: facet sizes {0} and {1} both present")]
    NotPure(usize, usize),
    #[error("duplicate facet {0}")]
    DuplicateFacet(Simplex),
    #[error("bad vertex id (ids are integers >= 1)")]
    BadVertexId,
    #[error("{0} is not a face of the complex")]
    NotAFace(Simplex),
    #[error("{0} is not a facet of the complex")]
    NotAFacet(Simplex),
    #[error("vertex {0} appears on both sides of a join")]
    VertexClash(VertexId),
    #[error("not a pseudomanifold: ridge {0} lies in {1} facets")]
    NotPseudomanifold(Simplex, usize),
    #[error("complex is closed")]
    ClosedInput,
    #[error(
        "degenerate double: {0} has all vertices on the boundary but is not a boundary face; \
         refine the interior first (interior 0-moves suffice)"
    )]
    DegenerateDouble(Simplex),
    #[error("disk boundary mismatch: {0}")]
    BoundaryMismatch(String),
}

/// A finite pure simplicial complex, stored as its facet list.
///
/// The empty-complex marker (dimension −1, no facets) stands for the
/// complex `{∅}`; it shows up as the link of a facet and as ∂(vertex),
/// and is the identity for `join`.
#[derive(Clone)]
pub struct FacetComplex {
    dim: i32,
    facets: Vec<Simplex>,
    name: Option<String>,
}

/// Equality is on the mathematical value; names are labels and do not count.
impl PartialEq for FacetComplex {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.facets == other.facets
    }
}

impl Eq for FacetComplex {}

impl Serialize for FacetComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let fields = 1 + usize::from(self.name.is_some());
        let mut state = serializer.serialize_struct("FacetComplex", fields)?;
        if let Some(name) = &self.name {
            state.serialize_field("name", name)?;
        }
        state.serialize_field("facets", &self.facets)?;
        state.end()
    }
}

impl<'de> Deserialize<'de> for FacetComplex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            #[serde(default)]
            name: Option<String>,
            facets: Vec<Vec<VertexId>>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let complex = FacetComplex::build(&repr.facets).map_err(D::Error::custom)?;
        Ok(match repr.name {
            Some(name) => complex.with_name(name),
            None => complex,
        })
    }
}

impl FacetComplex {
    /// Builds and canonicalizes a complex from raw vertex-id lists.
    pub fn build(raw: &[Vec<VertexId>]) -> Result<Self, ComplexError> {
        if raw.is_empty() {
            return Err(ComplexError::EmptyInput);
        }
        let mut facets = Vec::with_capacity(raw.len());
        for f in raw {
            if f.is_empty() {
                return Err(ComplexError::EmptyInput);
            }
            let s = Simplex::new(f.clone()).ok_or(ComplexError::BadVertexId)?;
            if s.vertices().len() != f.len() {
                return Err(ComplexError::BadVertexId);
            }
            facets.push(s);
        }
        Self::from_facets(facets)
    }

    /// Canonicalizes an already-built facet list (sorting, purity, dedup).
    pub fn from_facets(mut facets: Vec<Simplex>) -> Result<Self, ComplexError> {
        if facets.is_empty() {
            return Err(ComplexError::EmptyInput);
        }
        let dim = facets[0].dim();
        for f in &facets {
            if f.dim() != dim {
                return Err(ComplexError::NotPure(
                    (dim + 1) as usize,
                    (f.dim() + 1) as usize,
                ));
            }
        }
        facets.sort();
        for w in facets.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::DuplicateFacet(w[0].clone()));
            }
        }
        Ok(Self { dim, facets, name: None })
    }

    /// The empty-complex marker `{∅}` of dimension −1.
    pub fn empty_marker() -> Self {
        Self { dim: -1, facets: Vec::new(), name: None }
    }

    /// The complex consisting of a single simplex and its faces.
    pub fn from_simplex(s: &Simplex) -> Self {
        if s.is_empty() {
            return Self::empty_marker();
        }
        Self { dim: s.dim(), facets: vec![s.clone()], name: None }
    }

    /// ∂σ as a complex; ∂(vertex) is the empty-complex marker.
    pub fn boundary_of_simplex(s: &Simplex) -> Self {
        if s.dim() <= 0 {
            return Self::empty_marker();
        }
        let mut facets = s.boundary_facets();
        facets.sort();
        Self { dim: s.dim() - 1, facets, name: None }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> i32 {
        self.dim
    }

    pub fn is_marker(&self) -> bool {
        self.dim == -1
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn contains_facet(&self, s: &Simplex) -> bool {
        self.facets.binary_search(s).is_ok()
    }

    /// True if `s` is a face of some facet. The empty simplex is a face of
    /// every complex.
    pub fn is_face(&self, s: &Simplex) -> bool {
        s.is_empty() || self.facets.iter().any(|f| f.contains(s))
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = self
            .facets
            .iter()
            .flat_map(|f| f.vertices().iter().copied())
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn max_vertex_id(&self) -> VertexId {
        self.facets
            .iter()
            .filter_map(|f| f.max_vertex())
            .max()
            .unwrap_or(0)
    }

    /// The first id strictly above every vertex in use.
    pub fn fresh_vertex(&self) -> VertexId {
        self.max_vertex_id() + 1
    }

    /// All distinct k-faces, canonically sorted.
    pub fn faces_of_dim(&self, k: i32) -> Vec<Simplex> {
        if k < 0 || k > self.dim {
            return Vec::new();
        }
        let set: BTreeSet<Simplex> = self
            .facets
            .iter()
            .flat_map(|f| f.faces_of_dim(k))
            .collect();
        set.into_iter().collect()
    }

    /// Every nonempty face of the complex.
    pub fn all_faces(&self) -> BTreeSet<Simplex> {
        self.facets
            .iter()
            .flat_map(|f| f.all_faces())
            .collect()
    }

    /// Face counts (f_0, …, f_n).
    pub fn face_counts(&self) -> Vec<u64> {
        if self.is_marker() {
            return Vec::new();
        }
        let mut counts = vec![0u64; (self.dim + 1) as usize];
        for face in self.all_faces() {
            counts[face.dim() as usize] += 1;
        }
        counts
    }

    /// The f-vector with the χ/2 slot filled in.
    pub fn f_vector(&self) -> FVector {
        FVector::from_u64_counts(&self.face_counts())
    }

    /// Σ (−1)^k f_k.
    pub fn euler_characteristic(&self) -> i64 {
        self.face_counts()
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { *c as i64 } else { -(*c as i64) })
            .sum()
    }

    /// link(C, s) = { F \ s : F facet, s ⊆ F }; the empty-complex marker
    /// when `s` is itself a facet.
    pub fn link(&self, s: &Simplex) -> Result<FacetComplex, ComplexError> {
        if !self.is_face(s) {
            return Err(ComplexError::NotAFace(s.clone()));
        }
        if s.is_empty() {
            return Ok(self.clone());
        }
        let mut facets: Vec<Simplex> = self
            .facets
            .iter()
            .filter(|f| f.contains(s))
            .map(|f| f.without(s))
            .collect();
        if facets.iter().all(|f| f.is_empty()) {
            return Ok(Self::empty_marker());
        }
        facets.sort();
        facets.dedup();
        Ok(Self { dim: self.dim - s.dim() - 1, facets, name: None })
    }

    /// The subcomplex generated by all facets containing `s`.
    pub fn star(&self, s: &Simplex) -> Result<FacetComplex, ComplexError> {
        if !self.is_face(s) {
            return Err(ComplexError::NotAFace(s.clone()));
        }
        let facets: Vec<Simplex> = self
            .facets
            .iter()
            .filter(|f| f.contains(s))
            .cloned()
            .collect();
        Ok(Self { dim: self.dim, facets, name: None })
    }

    /// Join A * B on disjoint vertex sets; the marker is the identity.
    pub fn join(&self, other: &FacetComplex) -> Result<FacetComplex, ComplexError> {
        if self.is_marker() {
            return Ok(other.clone());
        }
        if other.is_marker() {
            return Ok(self.clone());
        }
        for v in self.vertices() {
            if other.vertices().binary_search(&v).is_ok() {
                return Err(ComplexError::VertexClash(v));
            }
        }
        let mut facets = Vec::with_capacity(self.facets.len() * other.facets.len());
        for a in &self.facets {
            for b in &other.facets {
                facets.push(a.union(b));
            }
        }
        facets.sort();
        Ok(Self {
            dim: self.dim + other.dim + 1,
            facets,
            name: None,
        })
    }

    /// Number of facets containing each (dim−1)-face.
    pub fn ridge_degrees(&self) -> BTreeMap<Simplex, usize> {
        let mut degrees: BTreeMap<Simplex, usize> = BTreeMap::new();
        for f in &self.facets {
            for r in f.boundary_facets() {
                *degrees.entry(r).or_insert(0) += 1;
            }
        }
        degrees
    }

    /// The complex generated by all ridges lying in exactly one facet;
    /// the empty-complex marker if the complex is closed.
    ///
    /// Requires every ridge to lie in at most two facets.
    pub fn boundary_complex(&self) -> Result<FacetComplex, ComplexError> {
        let mut boundary = Vec::new();
        for (ridge, degree) in self.ridge_degrees() {
            match degree {
                1 => boundary.push(ridge),
                2 => {}
                d => return Err(ComplexError::NotPseudomanifold(ridge, d)),
            }
        }
        if boundary.is_empty() || boundary.iter().all(|r| r.is_empty()) {
            return Ok(Self::empty_marker());
        }
        boundary.sort();
        Ok(Self { dim: self.dim - 1, facets: boundary, name: None })
    }

    /// Two copies glued along their common boundary; copy-2 interior
    /// vertices are shifted by the maximum vertex id.
    pub fn double(&self) -> Result<FacetComplex, ComplexError> {
        let boundary = self.boundary_complex()?;
        if boundary.is_marker() {
            return Err(ComplexError::ClosedInput);
        }
        let boundary_vertices: BTreeSet<VertexId> = boundary.vertices().into_iter().collect();
        let boundary_faces = boundary.all_faces();
        for face in self.all_faces() {
            let on_boundary = face
                .vertices()
                .iter()
                .all(|v| boundary_vertices.contains(v));
            if on_boundary && !boundary_faces.contains(&face) {
                return Err(ComplexError::DegenerateDouble(face));
            }
        }
        let offset = self.max_vertex_id();
        let mut facets = self.facets.clone();
        for f in &self.facets {
            let mapped: Vec<VertexId> = f
                .vertices()
                .iter()
                .map(|v| {
                    if boundary_vertices.contains(v) {
                        *v
                    } else {
                        *v + offset
                    }
                })
                .collect();
            facets.push(Simplex::new(mapped).expect("shifted ids stay valid"));
        }
        Self::from_facets(facets)
    }

    /// Replaces facet `f` by the disk `disk`, gluing `labels` (the disk's
    /// designated boundary vertices, which must carry ∂Δⁿ) onto the vertices
    /// of `f` in ascending order. Interior disk vertices get fresh ids.
    ///
    /// Returns the new complex together with the full vertex map applied to
    /// the disk, so callers can transport prepared moves into the image.
    pub fn implant(
        &self,
        f: &Simplex,
        disk: &FacetComplex,
        labels: &[VertexId],
    ) -> Result<(FacetComplex, BTreeMap<VertexId, VertexId>), ComplexError> {
        if !self.contains_facet(f) {
            return Err(ComplexError::NotAFacet(f.clone()));
        }
        if disk.dim() != self.dim {
            return Err(ComplexError::BoundaryMismatch(format!(
                "disk dimension {} does not match complex dimension {}",
                disk.dim(),
                self.dim
            )));
        }
        if labels.len() != (self.dim + 1) as usize {
            return Err(ComplexError::BoundaryMismatch(format!(
                "expected {} boundary labels, got {}",
                self.dim + 1,
                labels.len()
            )));
        }
        let label_simplex = Simplex::new(labels.to_vec())
            .filter(|s| s.vertices().len() == labels.len())
            .ok_or_else(|| {
                ComplexError::BoundaryMismatch("boundary labels must be distinct".into())
            })?;
        let disk_boundary = disk.boundary_complex()?;
        let expected = FacetComplex::boundary_of_simplex(&label_simplex);
        if disk_boundary != expected {
            return Err(ComplexError::BoundaryMismatch(format!(
                "disk boundary is not the boundary of the simplex on {label_simplex}"
            )));
        }
        // Boundary labels keep their given order; the k-th label lands on the
        // k-th vertex of `f`.
        let mut map: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        for (label, target) in labels.iter().zip(f.vertices()) {
            map.insert(*label, *target);
        }
        let mut next = self.fresh_vertex();
        for v in disk.vertices() {
            if !map.contains_key(&v) {
                map.insert(v, next);
                next += 1;
            }
        }
        let mut facets: Vec<Simplex> = self
            .facets
            .iter()
            .filter(|g| *g != f)
            .cloned()
            .collect();
        for g in disk.facets() {
            facets.push(g.relabel(&map));
        }
        let complex = Self::from_facets(facets)?;
        Ok((complex, map))
    }
}

impl fmt::Debug for FacetComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FacetComplex(dim {}, {} facets)", self.dim, self.facets.len())
    }
}

impl fmt::Display for FacetComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, facet) in self.facets.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            let ids: Vec<String> = facet.vertices().iter().map(|v| v.to_string()).collect();
            write!(f, "{}", ids.join(" "))?;
        }
        Ok(())
    }
}
