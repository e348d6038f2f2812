//! Legality checking, enumeration and application of bistellar moves,
//! elementary shellings and star subdivisions, plus the replayable move log.
//!
//! Enumeration order is lexicographic on (type, σ, τ) and is part of the
//! public contract: seeded pipelines must be reproducible.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, FacetComplex};
use crate::fvector::d_vector;
use crate::simplex::{Simplex, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("illegal bistellar move (sigma {sigma}, tau {tau}, type {i}): {reason}")]
    IllegalMove {
        sigma: Simplex,
        tau: Simplex,
        i: usize,
        reason: String,
    },
    #[error("illegal shelling (sigma {sigma}, tau {tau}): {reason}")]
    IllegalShelling {
        sigma: Simplex,
        tau: Simplex,
        reason: String,
    },
    #[error("shelling would empty the complex")]
    EmptyResult,
    #[error("complex is closed")]
    ClosedInput,
    #[error("{0} is not a facet of the complex")]
    NotAFacet(Simplex),
    #[error("{0} is not a codimension-1 face of the given facet")]
    NotAFace(Simplex),
    #[error("face {0} lies in more than one facet; star subdivision along it would detach the neighbors")]
    SharedFace(Simplex),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A bistellar i-move: replace σ * ∂τ by ∂σ * τ.
///
/// For i = 0, σ is a facet and τ is a single vertex that must be new to the
/// complex; enumeration reports it with the next free id as a placeholder.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BistellarMove {
    pub sigma: Simplex,
    pub tau: Simplex,
    pub i: usize,
}

impl BistellarMove {
    pub fn new(sigma: Simplex, tau: Simplex, i: usize) -> Self {
        Self { sigma, tau, i }
    }

    /// The reverse move undoing this one.
    pub fn inverse(&self, n: usize) -> Self {
        Self {
            sigma: self.tau.clone(),
            tau: self.sigma.clone(),
            i: n - self.i,
        }
    }
}

impl std::fmt::Display for BistellarMove {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "T^{}({}, {})", self.i, self.sigma, self.tau)
    }
}

/// An elementary shelling: remove the facet σ * τ, where σ * ∂τ lies on the
/// boundary and τ meets the boundary in exactly ∂τ. Its type is dim σ.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ShellingMove {
    pub sigma: Simplex,
    pub tau: Simplex,
}

impl ShellingMove {
    pub fn new(sigma: Simplex, tau: Simplex) -> Self {
        Self { sigma, tau }
    }

    /// dim σ, between 0 and n−1.
    pub fn shelling_type(&self) -> usize {
        self.sigma.dim() as usize
    }

    pub fn removed_facet(&self) -> Simplex {
        self.sigma.union(&self.tau)
    }
}

impl std::fmt::Display for ShellingMove {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "S^{}({}, {})", self.shelling_type(), self.sigma, self.tau)
    }
}

fn illegal(m: &BistellarMove, reason: impl Into<String>) -> MoveError {
    MoveError::IllegalMove {
        sigma: m.sigma.clone(),
        tau: m.tau.clone(),
        i: m.i,
        reason: reason.into(),
    }
}

/// Checks the defining conditions: dim σ = n−i, link(σ) = ∂τ, and τ is not
/// yet a face (for i = 0: the cone vertex is new to the complex).
pub fn check_bistellar(c: &FacetComplex, m: &BistellarMove) -> Result<(), MoveError> {
    let n = c.dim();
    if n < 0 {
        return Err(illegal(m, "complex is the empty marker"));
    }
    let n = n as usize;
    if m.i > n {
        return Err(illegal(m, format!("type {} exceeds dimension {n}", m.i)));
    }
    if m.sigma.dim() != (n - m.i) as i32 {
        return Err(illegal(m, "sigma has the wrong dimension"));
    }
    if m.tau.dim() != m.i as i32 {
        return Err(illegal(m, "tau has the wrong dimension"));
    }
    if !m.sigma.is_disjoint(&m.tau) {
        return Err(illegal(m, "sigma and tau share a vertex"));
    }
    if !c.is_face(&m.sigma) {
        return Err(illegal(m, "sigma is not a face"));
    }
    if m.i == 0 {
        let v = m.tau.vertices()[0];
        if c.vertices().binary_search(&v).is_ok() {
            return Err(illegal(m, format!("cone vertex {v} already in the complex")));
        }
        if !c.contains_facet(&m.sigma) {
            return Err(illegal(m, "sigma is not a facet"));
        }
        return Ok(());
    }
    let link = c.link(&m.sigma).expect("sigma checked as face");
    let expected = FacetComplex::boundary_of_simplex(&m.tau);
    if link != expected {
        return Err(illegal(
            m,
            format!("link of sigma is not the boundary of tau (link: {link:?})"),
        ));
    }
    if c.is_face(&m.tau) {
        return Err(illegal(m, "tau is already a face"));
    }
    Ok(())
}

/// Applies a legal bistellar move; the f-vector changes by exactly
/// d_vector(n, i).
pub fn apply_bistellar(c: &FacetComplex, m: &BistellarMove) -> Result<FacetComplex, MoveError> {
    check_bistellar(c, m)?;
    let removed: Vec<Simplex> = m
        .tau
        .boundary_facets()
        .iter()
        .map(|t| m.sigma.union(t))
        .collect();
    let added: Vec<Simplex> = m
        .sigma
        .boundary_facets()
        .iter()
        .map(|s| s.union(&m.tau))
        .collect();
    let mut facets: Vec<Simplex> = c
        .facets()
        .iter()
        .filter(|f| !removed.contains(f))
        .cloned()
        .collect();
    facets.extend(added);
    Ok(FacetComplex::from_facets(facets)?)
}

/// All legal moves of the given type (or of every type), lexicographically
/// sorted on (type, σ, τ). 0-moves are reported once per facet with the next
/// free vertex id standing in for the fresh cone vertex.
pub fn enumerate_bistellar(c: &FacetComplex, ty: Option<usize>) -> Vec<BistellarMove> {
    let n = c.dim();
    if n < 0 {
        return Vec::new();
    }
    let n = n as usize;
    let types: Vec<usize> = match ty {
        Some(i) if i <= n => vec![i],
        Some(_) => return Vec::new(),
        None => (0..=n).collect(),
    };
    let mut out = Vec::new();
    for i in types {
        if i == 0 {
            let fresh = Simplex::vertex(c.fresh_vertex());
            for f in c.facets() {
                out.push(BistellarMove::new(f.clone(), fresh.clone(), 0));
            }
            continue;
        }
        for sigma in c.faces_of_dim((n - i) as i32) {
            let link = c.link(&sigma).expect("face of the complex");
            if link.dim() != i as i32 - 1 {
                continue;
            }
            let vertices = link.vertices();
            if vertices.len() != i + 1 {
                continue;
            }
            let tau = Simplex::new(vertices).expect("link vertices are valid ids");
            if link != FacetComplex::boundary_of_simplex(&tau) {
                continue;
            }
            if c.is_face(&tau) {
                continue;
            }
            out.push(BistellarMove::new(sigma, tau, i));
        }
    }
    out.sort_by(|a, b| {
        a.i.cmp(&b.i)
            .then_with(|| a.sigma.cmp(&b.sigma))
            .then_with(|| a.tau.cmp(&b.tau))
    });
    out
}

fn illegal_shelling(m: &ShellingMove, reason: impl Into<String>) -> MoveError {
    MoveError::IllegalShelling {
        sigma: m.sigma.clone(),
        tau: m.tau.clone(),
        reason: reason.into(),
    }
}

/// Checks shelling conditions (1) and (2) against the boundary complex.
pub fn check_shelling(c: &FacetComplex, m: &ShellingMove) -> Result<(), MoveError> {
    if m.sigma.is_empty() || m.tau.is_empty() {
        return Err(illegal_shelling(m, "sigma and tau must be nonempty"));
    }
    if !m.sigma.is_disjoint(&m.tau) {
        return Err(illegal_shelling(m, "sigma and tau share a vertex"));
    }
    let facet = m.removed_facet();
    if !c.contains_facet(&facet) {
        return Err(illegal_shelling(m, "sigma * tau is not a facet"));
    }
    let boundary = c.boundary_complex()?;
    if boundary.is_marker() {
        return Err(MoveError::ClosedInput);
    }
    // tau ∩ ∂M = ∂τ
    if boundary.is_face(&m.tau) {
        return Err(illegal_shelling(m, "tau lies on the boundary"));
    }
    for t in m.tau.boundary_facets() {
        if !t.is_empty() && !boundary.is_face(&t) {
            return Err(illegal_shelling(
                m,
                format!("proper face {t} of tau misses the boundary"),
            ));
        }
    }
    // σ * ∂τ ⊆ ∂M
    for t in m.tau.boundary_facets() {
        let face = m.sigma.union(&t);
        if !boundary.contains_facet(&face) {
            return Err(illegal_shelling(
                m,
                format!("{face} of sigma * boundary(tau) is not a boundary facet"),
            ));
        }
    }
    Ok(())
}

/// Removes the facet σ * τ. The result must stay nonempty.
pub fn apply_shelling(c: &FacetComplex, m: &ShellingMove) -> Result<FacetComplex, MoveError> {
    check_shelling(c, m)?;
    if c.facet_count() <= 1 {
        return Err(MoveError::EmptyResult);
    }
    let facet = m.removed_facet();
    let facets: Vec<Simplex> = c
        .facets()
        .iter()
        .filter(|f| **f != facet)
        .cloned()
        .collect();
    Ok(FacetComplex::from_facets(facets)?)
}

/// All legal shellings (with nonempty result), lexicographically sorted on
/// (type, σ, τ).
pub fn enumerate_shellings(c: &FacetComplex) -> Result<Vec<ShellingMove>, MoveError> {
    let boundary = c.boundary_complex()?;
    if boundary.is_marker() {
        return Err(MoveError::ClosedInput);
    }
    let mut out = Vec::new();
    if c.facet_count() >= 2 {
        for facet in c.facets() {
            let vertices = facet.vertices();
            // Every split facet = σ ⊔ τ with both parts nonempty.
            for mask in 1..((1u32 << vertices.len()) - 1) {
                let mut sigma = Vec::new();
                let mut tau = Vec::new();
                for (bit, v) in vertices.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        sigma.push(*v);
                    } else {
                        tau.push(*v);
                    }
                }
                let m = ShellingMove::new(
                    Simplex::new(sigma).expect("subset of a valid simplex"),
                    Simplex::new(tau).expect("subset of a valid simplex"),
                );
                if check_shelling(c, &m).is_ok() {
                    out.push(m);
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.shelling_type()
            .cmp(&b.shelling_type())
            .then_with(|| a.sigma.cmp(&b.sigma))
            .then_with(|| a.tau.cmp(&b.tau))
    });
    Ok(out)
}

/// The (n−1)-dimensional bistellar (n−1−i)-move by which the boundary
/// changes under the shelling, verified by explicitly diffing the two
/// boundary complexes.
pub fn induced_boundary_move(
    c: &FacetComplex,
    m: &ShellingMove,
) -> Result<BistellarMove, MoveError> {
    let n = c.dim() as usize;
    let before = c.boundary_complex()?;
    let after = apply_shelling(c, m)?.boundary_complex()?;
    let induced = BistellarMove::new(
        m.sigma.clone(),
        m.tau.clone(),
        n - 1 - m.shelling_type(),
    );
    let moved = apply_bistellar(&before, &induced)?;
    if moved != after {
        return Err(illegal_shelling(
            m,
            format!(
                "boundary diff does not match the induced move: expected {after:?}, got {moved:?}"
            ),
        ));
    }
    Ok(induced)
}

/// Star subdivision of the facet `f` along its codimension-1 face `g`:
/// a 0-move on `g` within ∂f (new vertex w), then a cone over the result
/// from a fresh apex, replacing `f`. The face `g` must lie in no other
/// facet.
pub fn star_subdivide_along_face(
    c: &FacetComplex,
    f: &Simplex,
    g: &Simplex,
) -> Result<FacetComplex, MoveError> {
    if !c.contains_facet(f) {
        return Err(MoveError::NotAFacet(f.clone()));
    }
    if !f.contains(g) || g.dim() != f.dim() - 1 {
        return Err(MoveError::NotAFace(g.clone()));
    }
    let sharing = c.facets().iter().filter(|h| h.contains(g)).count();
    if sharing != 1 {
        return Err(MoveError::SharedFace(g.clone()));
    }
    let w = c.fresh_vertex();
    let apex = w + 1;
    let w = Simplex::vertex(w);
    let apex = Simplex::vertex(apex);
    // L = (∂f \ {g}) ∪ w * ∂g, then cone from the apex.
    let mut sphere: Vec<Simplex> = f
        .boundary_facets()
        .into_iter()
        .filter(|r| r != g)
        .collect();
    for e in g.boundary_facets() {
        sphere.push(w.union(&e));
    }
    let mut facets: Vec<Simplex> = c
        .facets()
        .iter()
        .filter(|h| *h != f)
        .cloned()
        .collect();
    for l in sphere {
        facets.push(apex.union(&l));
    }
    Ok(FacetComplex::from_facets(facets)?)
}

/// All (facet, boundary ridge) pairs; a facet appears once per ridge it has
/// on the boundary.
pub fn exposed_pairs(c: &FacetComplex) -> Result<Vec<(Simplex, Simplex)>, MoveError> {
    let boundary = c.boundary_complex()?;
    if boundary.is_marker() {
        return Err(MoveError::ClosedInput);
    }
    let mut out = Vec::new();
    for f in c.facets() {
        for r in f.boundary_facets() {
            if boundary.contains_facet(&r) {
                out.push((f.clone(), r));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Facets whose intersection with the boundary is the closure of exactly
/// one (n−1)-face, returned with that face.
pub fn one_face_exposed(c: &FacetComplex) -> Result<Vec<(Simplex, Simplex)>, MoveError> {
    let boundary = c.boundary_complex()?;
    if boundary.is_marker() {
        return Err(MoveError::ClosedInput);
    }
    let boundary_faces = boundary.all_faces();
    let mut out = Vec::new();
    for f in c.facets() {
        let ridges: Vec<Simplex> = f
            .boundary_facets()
            .into_iter()
            .filter(|r| boundary.contains_facet(r))
            .collect();
        if ridges.len() != 1 {
            continue;
        }
        let g = &ridges[0];
        let clean = f
            .all_faces()
            .into_iter()
            .filter(|s| boundary_faces.contains(s))
            .all(|s| g.contains(&s));
        if clean {
            out.push((f.clone(), g.clone()));
        }
    }
    out.sort();
    Ok(out)
}

/// One step of a replayable log. Implants carry the full disk so a log is
/// self-contained; `window_face` marks mold-style implants whose window
/// lands on the boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MoveOp {
    Bistellar {
        sigma: Simplex,
        tau: Simplex,
        i: usize,
    },
    /// A preparation 0-move; replays exactly like a type-0 bistellar move.
    ZeroMove { sigma: Simplex, tau: Simplex },
    Shelling {
        sigma: Simplex,
        tau: Simplex,
        i: usize,
    },
    StarSubdivide {
        facet: Simplex,
        face: Simplex,
    },
    Implant {
        facet: Simplex,
        labels: Vec<VertexId>,
        disk: Vec<Simplex>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        window_face: Option<Simplex>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    #[serde(flatten)]
    pub op: MoveOp,
    pub f_before: Vec<u64>,
    pub f_after: Vec<u64>,
}

impl MoveRecord {
    pub fn new(op: MoveOp, before: &FacetComplex, after: &FacetComplex) -> Self {
        let record = Self {
            op,
            f_before: before.face_counts(),
            f_after: after.face_counts(),
        };
        debug_assert!(record.delta_consistent());
        record
    }

    /// For bistellar-kind records the recorded delta must equal the
    /// d-vector of the move type; other kinds are recounted by nature.
    pub fn delta_consistent(&self) -> bool {
        let (i, n) = match &self.op {
            MoveOp::Bistellar { i, .. } => (*i, self.f_before.len() - 1),
            MoveOp::ZeroMove { .. } => (0, self.f_before.len() - 1),
            _ => return self.f_before.len() == self.f_after.len(),
        };
        let Ok(d) = d_vector(n, i) else {
            return false;
        };
        self.f_before
            .iter()
            .zip(self.f_after.iter())
            .zip(d.entries())
            .all(|((b, a), dk)| {
                num::BigInt::from(*a) - num::BigInt::from(*b) == *dk
            })
    }
}

/// An ordered, replayable audit trail.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveLog {
    pub records: Vec<MoveRecord>,
}

impl MoveLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: MoveRecord) {
        self.records.push(record);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// One JSON record per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("log records serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, serde_json::Error> {
        let mut records = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            records.push(serde_json::from_str(line)?);
        }
        Ok(Self { records })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex;

    fn sphere2() -> FacetComplex {
        FacetComplex::build(&[vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]])
            .unwrap()
    }

    fn bipyramid() -> FacetComplex {
        FacetComplex::build(&[
            vec![1, 2, 4],
            vec![1, 3, 4],
            vec![2, 3, 4],
            vec![1, 2, 5],
            vec![1, 3, 5],
            vec![2, 3, 5],
        ])
        .unwrap()
    }

    #[test]
    fn zero_move_then_inverse_roundtrips() {
        let c = sphere2();
        let m = BistellarMove::new(simplex![1, 2, 3], simplex![5], 0);
        let after = apply_bistellar(&c, &m).unwrap();
        assert_eq!(after.face_counts(), vec![5, 9, 6]);
        let back = apply_bistellar(&after, &m.inverse(2)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn edge_flip_preserves_f_vector() {
        let c = bipyramid();
        let m = BistellarMove::new(simplex![1, 2], simplex![4, 5], 1);
        let after = apply_bistellar(&c, &m).unwrap();
        assert_eq!(after.face_counts(), c.face_counts());
        assert!(after.is_face(&simplex![4, 5]));
        assert!(!after.is_face(&simplex![1, 2]));
    }

    #[test]
    fn illegal_moves_are_rejected_with_reason() {
        let c = sphere2();
        // tau already a face
        let m = BistellarMove::new(simplex![1, 2], simplex![3, 4], 1);
        assert!(matches!(
            apply_bistellar(&c, &m),
            Err(MoveError::IllegalMove { .. })
        ));
        // stale cone vertex
        let m = BistellarMove::new(simplex![1, 2, 3], simplex![4], 0);
        assert!(check_bistellar(&c, &m).is_err());
    }

    #[test]
    fn enumerate_bistellar_on_sphere_and_bipyramid() {
        let sphere = sphere2();
        assert!(enumerate_bistellar(&sphere, Some(1)).is_empty());
        assert_eq!(enumerate_bistellar(&sphere, Some(0)).len(), 4);

        let flips = enumerate_bistellar(&bipyramid(), Some(1));
        assert!(flips.contains(&BistellarMove::new(simplex![1, 2], simplex![4, 5], 1)));
    }

    #[test]
    fn enumeration_matches_brute_force_legality() {
        use itertools::Itertools;
        let c = bipyramid();
        let n = c.dim() as usize;
        let vertices = c.vertices();
        let mut brute = Vec::new();
        for i in 1..=n {
            for sigma in c.faces_of_dim((n - i) as i32) {
                for tau_vs in vertices.iter().copied().combinations(i + 1) {
                    let tau = Simplex::new(tau_vs).unwrap();
                    let m = BistellarMove::new(sigma.clone(), tau, i);
                    if check_bistellar(&c, &m).is_ok() {
                        brute.push(m);
                    }
                }
            }
        }
        brute.sort_by(|a, b| {
            a.i.cmp(&b.i)
                .then_with(|| a.sigma.cmp(&b.sigma))
                .then_with(|| a.tau.cmp(&b.tau))
        });
        let enumerated: Vec<BistellarMove> = enumerate_bistellar(&c, None)
            .into_iter()
            .filter(|m| m.i >= 1)
            .collect();
        assert_eq!(enumerated, brute);
    }

    #[test]
    fn shellings_on_the_two_triangle_disk() {
        let disk = FacetComplex::build(&[vec![1, 2, 3], vec![2, 3, 4]]).unwrap();
        let shellings = enumerate_shellings(&disk).unwrap();
        assert_eq!(
            shellings,
            vec![
                ShellingMove::new(simplex![1], simplex![2, 3]),
                ShellingMove::new(simplex![4], simplex![2, 3]),
            ]
        );
        let after =
            apply_shelling(&disk, &ShellingMove::new(simplex![4], simplex![2, 3])).unwrap();
        assert_eq!(after.facets(), &[simplex![1, 2, 3]]);
        assert_eq!(after.face_counts(), vec![3, 3, 1]);

        // tau on the boundary is rejected
        let bad = ShellingMove::new(simplex![3], simplex![1, 2]);
        assert!(matches!(
            check_shelling(&disk, &bad),
            Err(MoveError::IllegalShelling { .. })
        ));
    }

    #[test]
    fn single_facet_cannot_be_shelled_away() {
        let tri = FacetComplex::build(&[vec![1, 2, 3]]).unwrap();
        assert!(enumerate_shellings(&tri).unwrap().is_empty());
    }

    #[test]
    fn induced_move_on_the_disk() {
        let disk = FacetComplex::build(&[vec![1, 2, 3], vec![2, 3, 4]]).unwrap();
        let m = ShellingMove::new(simplex![4], simplex![2, 3]);
        let induced = induced_boundary_move(&disk, &m).unwrap();
        assert_eq!(induced.i, 1); // n−1−i = 2−1−0
        assert_eq!(induced.sigma, simplex![4]);
        assert_eq!(induced.tau, simplex![2, 3]);
    }

    #[test]
    fn star_subdivision_of_a_triangle() {
        let tri = FacetComplex::build(&[vec![1, 2, 3]]).unwrap();
        let out = star_subdivide_along_face(&tri, &simplex![1, 2, 3], &simplex![1, 2]).unwrap();
        assert_eq!(out.face_counts(), vec![5, 8, 4]);
        let expected = FacetComplex::build(&[
            vec![5, 1, 4],
            vec![5, 4, 2],
            vec![5, 2, 3],
            vec![5, 3, 1],
        ])
        .unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn star_subdivision_rejects_shared_faces() {
        let disk = FacetComplex::build(&[vec![1, 2, 3], vec![2, 3, 4]]).unwrap();
        assert!(matches!(
            star_subdivide_along_face(&disk, &simplex![1, 2, 3], &simplex![2, 3]),
            Err(MoveError::SharedFace(_))
        ));
    }

    #[test]
    fn one_face_exposed_cases() {
        let disk = FacetComplex::build(&[vec![1, 2, 3], vec![2, 3, 4]]).unwrap();
        assert!(one_face_exposed(&disk).unwrap().is_empty());

        let cone = FacetComplex::build(&[vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]]).unwrap();
        let exposed = one_face_exposed(&cone).unwrap();
        assert_eq!(exposed.len(), 3);
        assert_eq!(exposed[0], (simplex![1, 2, 4], simplex![1, 2]));

        assert!(matches!(
            one_face_exposed(&sphere2()),
            Err(MoveError::ClosedInput)
        ));
    }

    #[test]
    fn move_log_roundtrips_as_jsonl() {
        let c = sphere2();
        let m = BistellarMove::new(simplex![1, 2, 3], simplex![5], 0);
        let after = apply_bistellar(&c, &m).unwrap();
        let mut log = MoveLog::new();
        log.push(MoveRecord::new(
            MoveOp::Bistellar {
                sigma: m.sigma.clone(),
                tau: m.tau.clone(),
                i: 0,
            },
            &c,
            &after,
        ));
        let text = log.to_jsonl();
        assert!(text.contains("\"kind\":\"bistellar\""));
        let parsed = MoveLog::from_jsonl(&text).unwrap();
        assert_eq!(parsed, log);
        assert!(parsed.records[0].delta_consistent());
    }
}
