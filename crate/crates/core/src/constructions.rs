//! Builders and verifiable certificates for the auxiliary gadgets: plump
//! n-cells (disks with one boundary-star-preserving interior move of every
//! type), mold n-cells (disks whose boundary window realizes every bistellar
//! move type through prepared shellings), and the standard fixture corpus.
//!
//! Builders work build-then-certify: a cell is whatever passes its verifier.
//! Every plump disk is grown from a single simplex by legal bistellar moves,
//! so it is a PL ball by construction; mold disks are cones over spheres
//! assembled from certified windows, retriangulated by legal interior moves.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, FacetComplex};
use crate::moves::{
    apply_bistellar, apply_shelling, check_bistellar, check_shelling, induced_boundary_move,
    BistellarMove, MoveError, ShellingMove,
};
use crate::simplex::{Simplex, VertexId};
use crate::verify::{verify_manifold, ManifoldStatus};

/// Default move budget for the seeded cell builders.
pub const DEFAULT_BUILD_BUDGET: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("unsupported dimension {0}: mold cells are built for n in {{2, 3}}")]
    UnsupportedDimension(usize),
    #[error("search budget exhausted ({0} moves spent); retry with a different seed")]
    BudgetExhausted(usize),
    #[error("built cell failed its own certificate: {0}")]
    CertificationFailed(String),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// ∂Δ^{n+1} on vertices 1..n+2.
pub fn boundary_of_simplex(n: usize) -> FacetComplex {
    let ids: Vec<VertexId> = (1..=(n as VertexId + 2)).collect();
    let top = Simplex::new(ids).expect("consecutive ids");
    FacetComplex::boundary_of_simplex(&top)
}

struct Fixture {
    facets: &'static [&'static [VertexId]],
    f: &'static [u64],
    chi: i64,
}

fn fixture_table(name: &str) -> Option<Fixture> {
    let fx = match name {
        "sphere2_min" => Fixture {
            facets: &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[2, 3, 4]],
            f: &[4, 6, 4],
            chi: 2,
        },
        "sphere3_min" => Fixture {
            facets: &[
                &[1, 2, 3, 4],
                &[1, 2, 3, 5],
                &[1, 2, 4, 5],
                &[1, 3, 4, 5],
                &[2, 3, 4, 5],
            ],
            f: &[5, 10, 10, 5],
            chi: 0,
        },
        "icosahedron" => Fixture {
            facets: &[
                &[1, 2, 3],
                &[1, 3, 4],
                &[1, 4, 5],
                &[1, 5, 6],
                &[1, 2, 6],
                &[2, 3, 7],
                &[3, 7, 8],
                &[3, 4, 8],
                &[4, 8, 9],
                &[4, 5, 9],
                &[5, 9, 10],
                &[5, 6, 10],
                &[6, 10, 11],
                &[2, 6, 11],
                &[2, 7, 11],
                &[7, 8, 12],
                &[8, 9, 12],
                &[9, 10, 12],
                &[10, 11, 12],
                &[7, 11, 12],
            ],
            f: &[12, 30, 20],
            chi: 2,
        },
        // The 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
        "torus7" => Fixture {
            facets: &[
                &[1, 2, 4],
                &[1, 3, 4],
                &[2, 3, 5],
                &[2, 4, 5],
                &[3, 4, 6],
                &[3, 5, 6],
                &[4, 5, 7],
                &[4, 6, 7],
                &[1, 5, 6],
                &[1, 5, 7],
                &[2, 6, 7],
                &[1, 2, 6],
                &[1, 3, 7],
                &[2, 3, 7],
            ],
            f: &[7, 21, 14],
            chi: 0,
        },
        // The 6-vertex projective plane (antipodal quotient of the icosahedron).
        "rp2_6" => Fixture {
            facets: &[
                &[1, 2, 3],
                &[1, 2, 4],
                &[1, 3, 5],
                &[1, 4, 6],
                &[1, 5, 6],
                &[2, 3, 6],
                &[2, 4, 5],
                &[2, 5, 6],
                &[3, 4, 5],
                &[3, 4, 6],
            ],
            f: &[6, 15, 10],
            chi: 1,
        },
        "disk_tri" => Fixture {
            facets: &[&[1, 2, 3]],
            f: &[3, 3, 1],
            chi: 1,
        },
        "disk_cone" => Fixture {
            facets: &[&[1, 2, 4], &[1, 3, 4], &[2, 3, 4]],
            f: &[4, 6, 3],
            chi: 1,
        },
        "disk_square" => Fixture {
            facets: &[&[1, 2, 5], &[2, 3, 5], &[3, 4, 5], &[1, 4, 5]],
            f: &[5, 8, 4],
            chi: 1,
        },
        "ball3_min" => Fixture {
            facets: &[&[1, 2, 3, 4]],
            f: &[4, 6, 4, 1],
            chi: 1,
        },
        "ball3_cone" => Fixture {
            facets: &[&[1, 2, 3, 5], &[1, 2, 4, 5], &[1, 3, 4, 5], &[2, 3, 4, 5]],
            f: &[5, 10, 10, 4],
            chi: 1,
        },
        _ => return None,
    };
    Some(fx)
}

pub fn fixture_names() -> Vec<&'static str> {
    vec![
        "sphere2_min",
        "sphere3_min",
        "icosahedron",
        "torus7",
        "rp2_6",
        "disk_tri",
        "disk_cone",
        "disk_square",
        "ball3_min",
        "ball3_cone",
    ]
}

/// A named complex from the embedded corpus; its stored f-vector and Euler
/// characteristic are re-verified at load.
pub fn fixture(name: &str) -> Result<FacetComplex, BuildError> {
    let fx = fixture_table(name).ok_or_else(|| BuildError::UnknownFixture(name.into()))?;
    let raw: Vec<Vec<VertexId>> = fx.facets.iter().map(|f| f.to_vec()).collect();
    let complex = FacetComplex::build(&raw)?.with_name(name);
    assert_eq!(
        complex.face_counts(),
        fx.f,
        "fixture {name}: stored f-vector out of date"
    );
    assert_eq!(
        complex.euler_characteristic(),
        fx.chi,
        "fixture {name}: stored Euler characteristic out of date"
    );
    Ok(complex)
}

/// Outcome of a cell verifier: pass/fail plus per-check details.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellCertificate {
    pub passed: bool,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl CellCertificate {
    fn new() -> Self {
        Self { passed: true, failures: Vec::new(), notes: Vec::new() }
    }

    fn fail(&mut self, reason: impl Into<String>) {
        self.passed = false;
        self.failures.push(reason.into());
    }

    fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }
}

impl std::fmt::Display for CellCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.passed {
            write!(f, "PASS")?;
        } else {
            write!(f, "FAIL")?;
            for failure in &self.failures {
                write!(f, "\n  - {failure}")?;
            }
        }
        for note in &self.notes {
            write!(f, "\n  note: {note}")?;
        }
        Ok(())
    }
}

/// A PL n-disk whose boundary is ∂Δⁿ on `boundary_labels` and which carries,
/// for every type 0 ≤ i ≤ n, a prepared interior i-move that leaves the star
/// of every boundary vertex unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlumpCell {
    pub disk: FacetComplex,
    pub boundary_labels: Vec<VertexId>,
    /// One move per type, sorted by type; the type-0 move's τ is the next
    /// free vertex id, resolved again at application time.
    pub prepared_moves: Vec<BistellarMove>,
}

impl PlumpCell {
    pub fn n(&self) -> usize {
        self.disk.dim() as usize
    }

    pub fn move_for_type(&self, i: usize) -> Option<&BistellarMove> {
        self.prepared_moves.iter().find(|m| m.i == i)
    }
}

/// A PL n-disk whose boundary is ∂Δⁿ on `corner_labels` with the facet on
/// the first n corners replaced by a plump (n−1)-cell window, plus one
/// prepared elementary (n−1−i)-shelling per window move type i.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoldCell {
    pub disk: FacetComplex,
    pub corner_labels: Vec<VertexId>,
    pub window: PlumpCell,
    pub prepared_shellings: Vec<ShellingMove>,
}

impl MoldCell {
    pub fn n(&self) -> usize {
        self.disk.dim() as usize
    }

    /// The corner face the window replaces.
    pub fn window_face(&self) -> Simplex {
        Simplex::new(self.corner_labels[..self.corner_labels.len() - 1].to_vec())
            .expect("corner labels are distinct")
    }

    /// The shelling realizing the window's type-i bistellar move.
    pub fn shelling_for_window_move(&self, i: usize) -> Option<&ShellingMove> {
        let n = self.n();
        self.prepared_shellings
            .iter()
            .find(|s| s.shelling_type() == n - 1 - i)
    }
}

fn move_support(m: &BistellarMove) -> BTreeSet<VertexId> {
    m.sigma
        .vertices()
        .iter()
        .chain(m.tau.vertices())
        .copied()
        .collect()
}

struct PlumpBuilder {
    n: usize,
    disk: FacetComplex,
    boundary: BTreeSet<VertexId>,
    reserved_supports: Vec<BTreeSet<VertexId>>,
    critical_faces: Vec<Simplex>,
    prepared: BTreeMap<usize, BistellarMove>,
    zero_facet: Option<Simplex>,
    rng: ChaCha8Rng,
    spent: usize,
    budget: usize,
}

impl PlumpBuilder {
    fn new(n: usize, seed: u64, budget: usize) -> Self {
        let labels: Vec<VertexId> = (1..=(n as VertexId + 1)).collect();
        let top = Simplex::new(labels.clone()).expect("consecutive ids");
        Self {
            n,
            disk: FacetComplex::from_simplex(&top),
            boundary: labels.into_iter().collect(),
            reserved_supports: Vec::new(),
            critical_faces: Vec::new(),
            prepared: BTreeMap::new(),
            zero_facet: None,
            rng: ChaCha8Rng::seed_from_u64(seed),
            spent: 0,
            budget,
        }
    }

    fn spend(&mut self) -> Result<(), BuildError> {
        if self.spent >= self.budget {
            return Err(BuildError::BudgetExhausted(self.spent));
        }
        self.spent += 1;
        Ok(())
    }

    fn apply(&mut self, m: &BistellarMove) -> Result<(), BuildError> {
        self.spend()?;
        self.disk = apply_bistellar(&self.disk, m)?;
        Ok(())
    }

    fn cone(&mut self, facet: &Simplex) -> Result<VertexId, BuildError> {
        let apex = self.disk.fresh_vertex();
        let m = BistellarMove::new(facet.clone(), Simplex::vertex(apex), 0);
        self.apply(&m)?;
        Ok(apex)
    }

    /// A facet is strictly safe when it avoids every reserved support, and
    /// loosely safe when removing it cannot break a reserved gadget.
    fn strictly_safe(&self, f: &Simplex) -> bool {
        self.reserved_supports
            .iter()
            .all(|sup| f.vertices().iter().all(|v| !sup.contains(v)))
    }

    fn loosely_safe(&self, f: &Simplex) -> bool {
        self.critical_faces.iter().all(|c| !f.contains(c))
    }

    /// Cones towards fresh territory until an all-new facet appears, and
    /// returns it. All of its vertices are interior and unreserved.
    fn drill(&mut self) -> Result<Simplex, BuildError> {
        let strict: Vec<Simplex> = self
            .disk
            .facets()
            .iter()
            .filter(|f| self.strictly_safe(f))
            .cloned()
            .collect();
        let pool = if strict.is_empty() {
            self.disk
                .facets()
                .iter()
                .filter(|f| self.loosely_safe(f))
                .cloned()
                .collect()
        } else {
            strict
        };
        let mut current = pool
            .as_slice()
            .choose(&mut self.rng)
            .cloned()
            .ok_or(BuildError::BudgetExhausted(self.spent))?;
        let mut fresh: BTreeSet<VertexId> = BTreeSet::new();
        loop {
            let stale: Vec<VertexId> = current
                .vertices()
                .iter()
                .copied()
                .filter(|v| !fresh.contains(v))
                .collect();
            if stale.is_empty() {
                return Ok(current);
            }
            let apex = self.cone(&current)?;
            fresh.insert(apex);
            current = current
                .without_vertex(stale[0])
                .union(&Simplex::vertex(apex));
        }
    }

    fn reserve(&mut self, i: usize, m: BistellarMove) {
        debug_assert!(check_bistellar(&self.disk, &m).is_ok(), "gadget {m} illegal");
        self.reserved_supports.push(move_support(&m));
        self.critical_faces.push(m.sigma.clone());
        self.prepared.insert(i, m);
    }

    /// Cone twice into fresh territory; the legal 1-move this leaves behind
    /// has σ = {u} ∪ F₀ minus its two largest vertices and τ joining the
    /// dropped vertex to the second apex.
    fn fresh_one_move(&mut self) -> Result<BistellarMove, BuildError> {
        let f0 = self.drill()?;
        let vs = f0.vertices().to_vec();
        let z = vs[vs.len() - 1];
        let y = vs[vs.len() - 2];
        let u = self.cone(&f0)?;
        let f1 = f0.without_vertex(z).union(&Simplex::vertex(u));
        let v = self.cone(&f1)?;
        let sigma = f0
            .without_vertex(y)
            .without_vertex(z)
            .union(&Simplex::vertex(u));
        let tau = Simplex::new(vec![z, v]).expect("distinct fresh ids");
        Ok(BistellarMove::new(sigma, tau, 1))
    }

    fn place_type_1(&mut self) -> Result<(), BuildError> {
        let m = self.fresh_one_move()?;
        self.reserve(1, m);
        Ok(())
    }

    /// Apply a fresh 1-move; its inverse is a ready (n−1)-move.
    fn place_type_n_minus_1(&mut self) -> Result<(), BuildError> {
        let m = self.fresh_one_move()?;
        self.apply(&m)?;
        self.reserve(self.n - 1, m.inverse(self.n));
        Ok(())
    }

    /// Cone a fresh facet; the apex with its removed base is a ready n-move.
    fn place_type_n(&mut self) -> Result<(), BuildError> {
        let f0 = self.drill()?;
        let apex = self.cone(&f0)?;
        self.reserve(self.n, BistellarMove::new(Simplex::vertex(apex), f0, self.n));
        Ok(())
    }

    fn place_type_0(&mut self) -> Result<(), BuildError> {
        let f0 = self.drill()?;
        self.reserved_supports
            .push(f0.vertices().iter().copied().collect());
        self.critical_faces.push(f0.clone());
        self.zero_facet = Some(f0);
        Ok(())
    }

    /// Seeded fallback for middle types 2..=n−2 (dimensions ≥ 4): enrich a
    /// fresh region with random interior moves until a usable i-move shows
    /// up in the enumeration.
    fn place_by_search(&mut self, i: usize) -> Result<(), BuildError> {
        loop {
            self.spend()?;
            let candidate = enumerate_usable(self, i);
            if let Some(m) = candidate {
                self.reserve(i, m);
                return Ok(());
            }
            // Grow: drill and stir the fresh region with a random legal move.
            let f0 = self.drill()?;
            let _ = self.cone(&f0)?;
            let moves: Vec<BistellarMove> = crate::moves::enumerate_bistellar(&self.disk, None)
                .into_iter()
                .filter(|m| m.i >= 1 && self.move_usable_support(m))
                .collect();
            if let Some(m) = moves.as_slice().choose(&mut self.rng).cloned() {
                self.apply(&m)?;
            }
        }
    }

    fn move_usable_support(&self, m: &BistellarMove) -> bool {
        let support = move_support(m);
        support.iter().all(|v| !self.boundary.contains(v))
            && self
                .reserved_supports
                .iter()
                .all(|sup| support.is_disjoint(sup))
    }

    fn finish(mut self) -> Result<PlumpCell, BuildError> {
        let zero_facet = self.zero_facet.take().expect("type 0 placed last");
        let tau = Simplex::vertex(self.disk.fresh_vertex());
        let mut prepared: Vec<BistellarMove> = vec![BistellarMove::new(zero_facet, tau, 0)];
        prepared.extend(self.prepared.into_values());
        prepared.sort_by_key(|m| m.i);
        let labels: Vec<VertexId> = self.boundary.into_iter().collect();
        let cell = PlumpCell {
            disk: self.disk,
            boundary_labels: labels,
            prepared_moves: prepared,
        };
        let certificate = verify_plump(&cell);
        if !certificate.passed {
            return Err(BuildError::CertificationFailed(
                certificate.failures.join("; "),
            ));
        }
        Ok(cell)
    }
}

fn enumerate_usable(builder: &PlumpBuilder, i: usize) -> Option<BistellarMove> {
    crate::moves::enumerate_bistellar(&builder.disk, Some(i))
        .into_iter()
        .find(|m| builder.move_usable_support(m))
}

/// Builds a certified plump n-cell. The same seed always yields the same
/// cell; a fresh seed explores different drill sites.
pub fn build_plump_cell(n: usize, seed: u64) -> Result<PlumpCell, BuildError> {
    build_plump_cell_with_budget(n, seed, DEFAULT_BUILD_BUDGET)
}

pub fn build_plump_cell_with_budget(
    n: usize,
    seed: u64,
    budget: usize,
) -> Result<PlumpCell, BuildError> {
    assert!(n >= 1, "plump cells start at dimension 1");
    let mut builder = PlumpBuilder::new(n, seed, budget);
    builder.place_type_1()?;
    for i in 2..=n.saturating_sub(2) {
        builder.place_by_search(i)?;
    }
    if n >= 3 {
        builder.place_type_n_minus_1()?;
    }
    if n >= 2 {
        builder.place_type_n()?;
    }
    builder.place_type_0()?;
    builder.finish()
}

/// Checks the plump-cell invariants by explicit construction: boundary
/// equals ∂Δⁿ on the labels, one legal prepared move per type, and
/// star-by-star equality at every boundary vertex after each move.
pub fn verify_plump(cell: &PlumpCell) -> CellCertificate {
    let mut cert = CellCertificate::new();
    let n = cell.disk.dim();
    if n < 1 {
        cert.fail(format!("disk dimension {n} is below 1"));
        return cert;
    }
    let n = n as usize;
    if cell.boundary_labels.len() != n + 1 {
        cert.fail(format!(
            "expected {} boundary labels, found {}",
            n + 1,
            cell.boundary_labels.len()
        ));
        return cert;
    }
    let label_simplex = match Simplex::new(cell.boundary_labels.clone()) {
        Some(s) if s.vertices().len() == n + 1 => s,
        _ => {
            cert.fail("boundary labels are not distinct valid ids".to_string());
            return cert;
        }
    };
    match cell.disk.boundary_complex() {
        Ok(boundary) => {
            let expected = FacetComplex::boundary_of_simplex(&label_simplex);
            if boundary != expected {
                cert.fail(format!(
                    "disk boundary is not the boundary of the simplex on {label_simplex}"
                ));
            }
        }
        Err(e) => cert.fail(format!("disk is not a pseudomanifold: {e}")),
    }
    if cell.disk.euler_characteristic() != 1 {
        cert.fail(format!(
            "disk has Euler characteristic {}, a disk needs 1",
            cell.disk.euler_characteristic()
        ));
    }
    let manifold = verify_manifold(&cell.disk);
    match manifold.status {
        ManifoldStatus::VerifiedWithBoundary => {}
        ManifoldStatus::Failed => cert.fail(format!("disk manifold check: {}", manifold.detail)),
        _ => cert.note(format!(
            "manifold check above exact range: {} ({})",
            manifold.status, manifold.detail
        )),
    }
    for i in 0..=n {
        let Some(m) = cell.move_for_type(i) else {
            cert.fail(format!("missing prepared move for type {i}"));
            continue;
        };
        if let Err(e) = check_bistellar(&cell.disk, m) {
            cert.fail(format!("prepared type-{i} move is illegal: {e}"));
            continue;
        }
        let after = match apply_bistellar(&cell.disk, m) {
            Ok(a) => a,
            Err(e) => {
                cert.fail(format!("prepared type-{i} move failed to apply: {e}"));
                continue;
            }
        };
        for v in &cell.boundary_labels {
            let s = Simplex::vertex(*v);
            let before_star = cell.disk.star(&s);
            let after_star = after.star(&s);
            if before_star != after_star {
                cert.fail(format!(
                    "prepared type-{i} move changes the star of boundary vertex {v}"
                ));
                break;
            }
        }
    }
    cert
}

/// Builds a certified mold n-cell for n in {2, 3}: a cone over the sphere
/// obtained by replacing one facet of ∂Δⁿ with a plump (n−1)-cell window,
/// retriangulated by one legal interior move per window gadget so each
/// prepared shelling exists.
pub fn build_mold_cell(n: usize, seed: u64) -> Result<MoldCell, BuildError> {
    build_mold_cell_with_budget(n, seed, DEFAULT_BUILD_BUDGET)
}

pub fn build_mold_cell_with_budget(
    n: usize,
    seed: u64,
    budget: usize,
) -> Result<MoldCell, BuildError> {
    if !(2..=3).contains(&n) {
        return Err(BuildError::UnsupportedDimension(n));
    }
    let window = build_plump_cell_with_budget(n - 1, seed, budget)?;
    let corner = window.disk.max_vertex_id() + 1;
    let apex_id = corner + 1;
    let apex = Simplex::vertex(apex_id);
    // The sphere: window facets plus the unsubdivided ∂Δⁿ faces through the
    // extra corner.
    let mut sphere_facets = window.disk.facets().to_vec();
    for k in &window.boundary_labels {
        let face = Simplex::new(
            window
                .boundary_labels
                .iter()
                .copied()
                .filter(|v| v != k)
                .chain([corner])
                .collect(),
        )
        .expect("distinct corner ids");
        sphere_facets.push(face);
    }
    let sphere = FacetComplex::from_facets(sphere_facets)?;
    let cone_facets: Vec<Simplex> = sphere.facets().iter().map(|f| f.union(&apex)).collect();
    let mut disk = FacetComplex::from_facets(cone_facets)?;
    // Carve one gadget per window move of type ≥ 1: the interior i-move on
    // apex * σ places the tetrahedron σ * τ under the window dome.
    for m in &window.prepared_moves {
        if m.i == 0 {
            continue;
        }
        let carve = BistellarMove::new(m.sigma.union(&apex), m.tau.clone(), m.i);
        disk = apply_bistellar(&disk, &carve)?;
    }
    let mut prepared_shellings = Vec::new();
    for i in 0..n {
        let m = window
            .move_for_type(i)
            .expect("window certified with every type");
        let shelling = if i == 0 {
            ShellingMove::new(m.sigma.clone(), apex.clone())
        } else {
            ShellingMove::new(m.sigma.clone(), m.tau.clone())
        };
        prepared_shellings.push(shelling);
    }
    let corner_labels: Vec<VertexId> = window
        .boundary_labels
        .iter()
        .copied()
        .chain([corner])
        .collect();
    let cell = MoldCell {
        disk,
        corner_labels,
        window,
        prepared_shellings,
    };
    let certificate = verify_mold(&cell);
    if !certificate.passed {
        return Err(BuildError::CertificationFailed(
            certificate.failures.join("; "),
        ));
    }
    Ok(cell)
}

/// Checks the mold-cell invariants: boundary shape, a certified window, and
/// per type a legal prepared shelling whose induced boundary move equals the
/// window's prepared move, changing no stars outside the window interior.
pub fn verify_mold(cell: &MoldCell) -> CellCertificate {
    let mut cert = CellCertificate::new();
    let n = cell.disk.dim();
    if n < 2 {
        cert.fail(format!("disk dimension {n} is below 2"));
        return cert;
    }
    let n = n as usize;
    if cell.corner_labels.len() != n + 1 {
        cert.fail(format!(
            "expected {} corner labels, found {}",
            n + 1,
            cell.corner_labels.len()
        ));
        return cert;
    }
    let window_cert = verify_plump(&cell.window);
    if !window_cert.passed {
        cert.fail(format!(
            "window is not a certified plump cell: {}",
            window_cert.failures.join("; ")
        ));
    }
    if cell.window.boundary_labels != cell.corner_labels[..n] {
        cert.fail("window boundary labels do not match the first n corners".to_string());
    }
    // ∂(disk) must be ∂Δⁿ with exactly the window face subdivided.
    match cell.disk.boundary_complex() {
        Ok(boundary) => {
            let mut expected = cell.window.disk.facets().to_vec();
            let last = cell.corner_labels[n];
            for k in 0..n {
                let face = Simplex::new(
                    cell.corner_labels
                        .iter()
                        .enumerate()
                        .filter(|(idx, _)| *idx != k && *idx != n)
                        .map(|(_, v)| *v)
                        .chain([last])
                        .collect(),
                )
                .expect("distinct corners");
                expected.push(face);
            }
            match FacetComplex::from_facets(expected) {
                Ok(expected) => {
                    if boundary != expected {
                        cert.fail(
                            "disk boundary is not the simplex boundary with one face windowed"
                                .to_string(),
                        );
                    }
                }
                Err(e) => cert.fail(format!("expected boundary malformed: {e}")),
            }
        }
        Err(e) => cert.fail(format!("disk is not a pseudomanifold: {e}")),
    }
    if cell.disk.euler_characteristic() != 1 {
        cert.fail(format!(
            "disk has Euler characteristic {}, a disk needs 1",
            cell.disk.euler_characteristic()
        ));
    }
    let manifold = verify_manifold(&cell.disk);
    match manifold.status {
        ManifoldStatus::VerifiedWithBoundary => {}
        ManifoldStatus::Failed => cert.fail(format!("disk manifold check: {}", manifold.detail)),
        _ => cert.note(format!(
            "manifold check above exact range: {} ({})",
            manifold.status, manifold.detail
        )),
    }
    // Stars may change only at window-interior vertices (and true interior).
    let window_interior: BTreeSet<VertexId> = cell
        .window
        .disk
        .vertices()
        .into_iter()
        .filter(|v| !cell.window.boundary_labels.contains(v))
        .collect();
    let boundary_vertices: Vec<VertexId> = match cell.disk.boundary_complex() {
        Ok(b) if !b.is_marker() => b.vertices(),
        _ => Vec::new(),
    };
    for i in 0..n {
        let Some(shelling) = cell.shelling_for_window_move(i) else {
            cert.fail(format!("missing prepared shelling for window move type {i}"));
            continue;
        };
        if let Err(e) = check_shelling(&cell.disk, shelling) {
            cert.fail(format!("prepared shelling for type {i} is illegal: {e}"));
            continue;
        }
        let induced = match induced_boundary_move(&cell.disk, shelling) {
            Ok(m) => m,
            Err(e) => {
                cert.fail(format!("boundary diff failed for type {i}: {e}"));
                continue;
            }
        };
        let window_move = cell
            .window
            .move_for_type(i)
            .expect("window verified above");
        if induced.i != i || induced.sigma != window_move.sigma {
            cert.fail(format!(
                "induced move {induced} does not match window move {window_move}"
            ));
            continue;
        }
        if i >= 1 && induced.tau != window_move.tau {
            cert.fail(format!(
                "induced move {induced} has tau {} instead of {}",
                induced.tau, window_move.tau
            ));
            continue;
        }
        let after = match apply_shelling(&cell.disk, shelling) {
            Ok(a) => a,
            Err(e) => {
                cert.fail(format!("prepared shelling for type {i} failed: {e}"));
                continue;
            }
        };
        for v in &boundary_vertices {
            if window_interior.contains(v) {
                continue;
            }
            let s = Simplex::vertex(*v);
            if cell.disk.star(&s) != after.star(&s) {
                cert.fail(format!(
                    "shelling for type {i} changes the star of boundary vertex {v}"
                ));
                break;
            }
        }
    }
    cert
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex;

    #[test]
    fn simplex_boundaries_have_binomial_counts() {
        assert_eq!(boundary_of_simplex(2).face_counts(), vec![4, 6, 4]);
        assert_eq!(boundary_of_simplex(3).face_counts(), vec![5, 10, 10, 5]);
        assert_eq!(boundary_of_simplex(0).face_counts(), vec![2]);
    }

    #[test]
    fn fixtures_load_and_verify() {
        for name in fixture_names() {
            let c = fixture(name).unwrap();
            assert_eq!(c.name(), Some(name));
        }
        assert!(matches!(
            fixture("klein_bottle"),
            Err(BuildError::UnknownFixture(_))
        ));
    }

    #[test]
    fn torus_and_rp2_links_are_cycles() {
        for name in ["torus7", "rp2_6", "icosahedron"] {
            let c = fixture(name).unwrap();
            let cert = verify_manifold(&c);
            assert_eq!(cert.status, ManifoldStatus::VerifiedClosed, "{name}");
            assert!(cert.checked_dim_exact);
        }
        assert_eq!(fixture("torus7").unwrap().euler_characteristic(), 0);
        assert_eq!(fixture("rp2_6").unwrap().euler_characteristic(), 1);
    }

    #[test]
    fn plump_cells_certify_in_low_dimensions() {
        for n in 1..=3usize {
            let cell = build_plump_cell(n, 7).unwrap();
            assert_eq!(cell.n(), n);
            assert_eq!(cell.prepared_moves.len(), n + 1);
            let cert = verify_plump(&cell);
            assert!(cert.passed, "n={n}: {:?}", cert.failures);
        }
    }

    #[test]
    fn plump_builder_is_deterministic_per_seed() {
        let a = build_plump_cell(2, 11).unwrap();
        let b = build_plump_cell(2, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bare_simplex_is_not_plump() {
        let disk = FacetComplex::build(&[vec![1, 2, 3]]).unwrap();
        let cell = PlumpCell {
            disk,
            boundary_labels: vec![1, 2, 3],
            prepared_moves: Vec::new(),
        };
        let cert = verify_plump(&cell);
        assert!(!cert.passed);
        assert!(cert
            .failures
            .iter()
            .any(|f| f.contains("missing prepared move")));
    }

    #[test]
    fn tampered_plump_cell_fails_with_witness() {
        let mut cell = build_plump_cell(2, 3).unwrap();
        cell.prepared_moves.retain(|m| m.i != 1);
        let cert = verify_plump(&cell);
        assert!(!cert.passed);
        assert!(cert
            .failures
            .iter()
            .any(|f| f.contains("missing prepared move for type 1")));
    }

    #[test]
    fn mold_cells_certify_for_two_and_three() {
        for n in [2usize, 3] {
            let cell = build_mold_cell(n, 7).unwrap();
            assert_eq!(cell.n(), n);
            let cert = verify_mold(&cell);
            assert!(cert.passed, "n={n}: {:?}", cert.failures);
        }
        assert!(matches!(
            build_mold_cell(5, 7),
            Err(BuildError::UnsupportedDimension(5))
        ));
    }

    #[test]
    fn tampered_mold_cell_fails() {
        let cell = build_mold_cell(2, 5).unwrap();
        // Delete one interior facet (one that contains the cone apex).
        let apex = cell.corner_labels[cell.corner_labels.len() - 1] + 1;
        let facets: Vec<Simplex> = cell
            .disk
            .facets()
            .iter()
            .filter(|f| !f.contains_vertex(apex))
            .cloned()
            .collect();
        let tampered = MoldCell {
            disk: FacetComplex::from_facets(facets).unwrap(),
            ..cell.clone()
        };
        assert!(!verify_mold(&tampered).passed);

        // Swap a shelling's tau so the induced move no longer matches.
        let mut broken = cell.clone();
        broken.prepared_shellings.swap_remove(0);
        assert!(!verify_mold(&broken).passed);
    }

    #[test]
    fn implanted_plump_cell_keeps_moves_legal() {
        let cell = build_plump_cell(2, 9).unwrap();
        let host = boundary_of_simplex(2);
        let (implanted, map) = host
            .implant(
                &simplex![1, 2, 3],
                &cell.disk,
                &cell.boundary_labels,
            )
            .unwrap();
        // Residuals stay zero and chi is unchanged.
        assert_eq!(implanted.euler_characteristic(), 2);
        for m in &cell.prepared_moves {
            let mapped = BistellarMove::new(
                m.sigma.relabel(&map),
                if m.i == 0 {
                    Simplex::vertex(implanted.fresh_vertex())
                } else {
                    m.tau.relabel(&map)
                },
                m.i,
            );
            assert!(
                check_bistellar(&implanted, &mapped).is_ok(),
                "move {mapped} illegal after implant"
            );
        }
    }
}
