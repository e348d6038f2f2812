//! The headline pipelines: retriangulate two manifolds with matching Euler
//! characteristics until their f-vectors (and boundary f-vectors, in the
//! bounded variants) agree, with replayable move logs.
//!
//! Every pipeline is all-or-nothing: any failed internal assertion discards
//! partial results. Every step in a log is a PL-homeomorphism-preserving
//! operation (bistellar move, shelling, star subdivision or certified-cell
//! implant), so the outputs stay PL-homeomorphic to the inputs.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, FacetComplex};
use crate::constructions::{build_plump_cell, build_mold_cell, BuildError, MoldCell, PlumpCell};
use crate::fvector::{
    ds_residual_closed, hat_f, solve_plan_entries, solve_virtual_plan, FvError, VirtualMovePlan,
};
use crate::io;
use crate::moves::{
    apply_bistellar, apply_shelling, exposed_pairs, one_face_exposed,
    star_subdivide_along_face, BistellarMove, MoveError, MoveLog, MoveOp, MoveRecord,
    ShellingMove,
};
use crate::simplex::{Simplex, VertexId};
use crate::verify::{pseudomanifold_report, ManifoldStatus};

/// Fixed default seed for every seeded pipeline; never wall-clock.
pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Error)]
pub enum EqualizeError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(i32, i32),
    #[error("input is not a verified closed pseudomanifold: {0}")]
    NotClosed(String),
    #[error("input is not a verified pseudomanifold with boundary: {0}")]
    NotBounded(String),
    #[error("Euler characteristics differ: {0} vs {1}")]
    ChiMismatch(i64, i64),
    #[error("boundary Euler characteristics differ: {0} vs {1}")]
    ChiBoundaryMismatch(i64, i64),
    #[error("unsupported dimension {0}: mold cells are built for n in {{2, 3}}")]
    UnsupportedDimension(usize),
    #[error("no facet meets the boundary in a codimension-1 face")]
    NoExposedFacet,
    #[error("internal assertion failed: {0}")]
    InternalAssertFailed(String),
    #[error("replay mismatch at record {index}: {reason}")]
    ReplayMismatch { index: usize, reason: String },
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Fv(#[from] FvError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageSnapshot {
    pub label: String,
    pub f1: Vec<u64>,
    pub f2: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub boundary_f1: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub boundary_f2: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanReport {
    pub label: String,
    pub plan: String,
    pub moves: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EqualizeReport {
    pub mode: String,
    pub n: usize,
    pub seed: u64,
    pub plans: Vec<PlanReport>,
    pub stages: Vec<StageSnapshot>,
}

/// Outputs of a successful equalization: the retriangulated complexes, one
/// replayable log per input, the solved plan and per-stage f-vectors.
#[derive(Debug, Clone)]
pub struct EqualizeResult {
    pub c1_star: FacetComplex,
    pub c2_star: FacetComplex,
    pub log1: MoveLog,
    pub log2: MoveLog,
    pub plan: VirtualMovePlan,
    pub report: EqualizeReport,
}

impl EqualizeResult {
    /// Serializes to a directory: two facet-list files, two JSONL logs and
    /// one JSON report.
    pub fn write_to_dir(&self, dir: impl AsRef<std::path::Path>) -> Result<(), EqualizeError> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("c1_star.fl"), io::write_facet_list(&self.c1_star))?;
        std::fs::write(dir.join("c2_star.fl"), io::write_facet_list(&self.c2_star))?;
        std::fs::write(dir.join("log1.jsonl"), self.log1.to_jsonl())?;
        std::fs::write(dir.join("log2.jsonl"), self.log2.to_jsonl())?;
        let mut report =
            serde_json::to_string_pretty(&self.report).expect("report serializes");
        report.push('\n');
        std::fs::write(dir.join("report.json"), report)?;
        Ok(())
    }
}

fn to_usize(b: &BigInt) -> Result<usize, EqualizeError> {
    usize::try_from(b).map_err(|_| {
        EqualizeError::InternalAssertFailed(format!("move count {b} does not fit in usize"))
    })
}

fn count_delta(a: &FacetComplex, b: &FacetComplex) -> Vec<i64> {
    let fa = a.face_counts();
    let fb = b.face_counts();
    fa.iter()
        .zip(fb.iter())
        .map(|(x, y)| *y as i64 - *x as i64)
        .collect()
}

/// A complex together with the log of everything done to it.
struct Tracked {
    complex: FacetComplex,
    log: MoveLog,
}

impl Tracked {
    fn new(complex: FacetComplex) -> Self {
        Self { complex, log: MoveLog::new() }
    }

    fn bistellar(&mut self, m: &BistellarMove, preparation: bool) -> Result<(), EqualizeError> {
        let after = apply_bistellar(&self.complex, m)?;
        let op = if preparation {
            MoveOp::ZeroMove { sigma: m.sigma.clone(), tau: m.tau.clone() }
        } else {
            MoveOp::Bistellar { sigma: m.sigma.clone(), tau: m.tau.clone(), i: m.i }
        };
        self.log.push(MoveRecord::new(op, &self.complex, &after));
        self.complex = after;
        Ok(())
    }

    fn zero_move_on_first_facet(&mut self) -> Result<(), EqualizeError> {
        let facet = self.complex.facets()[0].clone();
        let tau = Simplex::vertex(self.complex.fresh_vertex());
        self.bistellar(&BistellarMove::new(facet, tau, 0), true)
    }

    fn shelling(&mut self, m: &ShellingMove) -> Result<(), EqualizeError> {
        let after = apply_shelling(&self.complex, m)?;
        let op = MoveOp::Shelling {
            sigma: m.sigma.clone(),
            tau: m.tau.clone(),
            i: m.shelling_type(),
        };
        self.log.push(MoveRecord::new(op, &self.complex, &after));
        self.complex = after;
        Ok(())
    }

    fn star_subdivide(&mut self, facet: &Simplex, face: &Simplex) -> Result<(), EqualizeError> {
        let after = star_subdivide_along_face(&self.complex, facet, face)?;
        let op = MoveOp::StarSubdivide { facet: facet.clone(), face: face.clone() };
        self.log.push(MoveRecord::new(op, &self.complex, &after));
        self.complex = after;
        Ok(())
    }

    fn implant_plump(
        &mut self,
        facet: &Simplex,
        cell: &PlumpCell,
    ) -> Result<BTreeMap<VertexId, VertexId>, EqualizeError> {
        let (after, map) =
            self.complex
                .implant(facet, &cell.disk, &cell.boundary_labels)?;
        let op = MoveOp::Implant {
            facet: facet.clone(),
            labels: cell.boundary_labels.clone(),
            disk: cell.disk.facets().to_vec(),
            window_face: None,
        };
        self.log.push(MoveRecord::new(op, &self.complex, &after));
        self.complex = after;
        Ok(map)
    }

    fn implant_mold(
        &mut self,
        facet: &Simplex,
        face: &Simplex,
        cell: &MoldCell,
    ) -> Result<BTreeMap<VertexId, VertexId>, EqualizeError> {
        let (after, map) = implant_mold_disk(
            &self.complex,
            facet,
            face,
            &cell.disk,
            &cell.corner_labels,
        )?;
        let op = MoveOp::Implant {
            facet: facet.clone(),
            labels: cell.corner_labels.clone(),
            disk: cell.disk.facets().to_vec(),
            window_face: Some(face.clone()),
        };
        self.log.push(MoveRecord::new(op, &self.complex, &after));
        self.complex = after;
        Ok(map)
    }
}

/// Replaces the one-face-exposed facet by a mold disk: the window corners
/// land on the boundary face `g` in ascending order, the remaining corner
/// on the facet's opposite vertex, everything else gets fresh ids.
fn implant_mold_disk(
    c: &FacetComplex,
    facet: &Simplex,
    g: &Simplex,
    disk: &FacetComplex,
    corner_labels: &[VertexId],
) -> Result<(FacetComplex, BTreeMap<VertexId, VertexId>), EqualizeError> {
    let n = c.dim();
    if !c.contains_facet(facet) {
        return Err(ComplexError::NotAFacet(facet.clone()).into());
    }
    if !facet.contains(g) || g.dim() != n - 1 {
        return Err(ComplexError::NotAFace(g.clone()).into());
    }
    let degree = c.facets().iter().filter(|h| h.contains(g)).count();
    if degree != 1 {
        return Err(EqualizeError::InternalAssertFailed(format!(
            "window face {g} lies in {degree} facets, needs to be on the boundary"
        )));
    }
    if corner_labels.len() != (n + 1) as usize {
        return Err(EqualizeError::InternalAssertFailed(
            "mold corner label count does not match the dimension".into(),
        ));
    }
    // The unsubdivided corner faces (through the apex corner) must be on the
    // disk's boundary so they glue onto the facet's other ridges.
    let disk_boundary = disk.boundary_complex()?;
    let apex_corner = corner_labels[(n) as usize];
    for k in 0..(n as usize) {
        let face = Simplex::new(
            corner_labels
                .iter()
                .enumerate()
                .filter(|(idx, _)| *idx != k)
                .map(|(_, v)| *v)
                .collect(),
        )
        .expect("distinct corner labels");
        if !disk_boundary.contains_facet(&face) {
            return Err(EqualizeError::InternalAssertFailed(format!(
                "mold disk boundary misses the unsubdivided corner face {face}"
            )));
        }
    }
    for r in disk_boundary.facets() {
        if r.contains_vertex(apex_corner) && !r.vertices().iter().all(|v| corner_labels.contains(v))
        {
            return Err(EqualizeError::InternalAssertFailed(format!(
                "mold disk boundary face {r} subdivides a non-window corner face"
            )));
        }
    }
    let mut map: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for (label, target) in corner_labels.iter().zip(g.vertices()) {
        map.insert(*label, *target);
    }
    let opposite = facet.without(g);
    map.insert(apex_corner, opposite.vertices()[0]);
    let mut next = c.fresh_vertex();
    for v in disk.vertices() {
        if !map.contains_key(&v) {
            map.insert(v, next);
            next += 1;
        }
    }
    let mut facets: Vec<Simplex> = c
        .facets()
        .iter()
        .filter(|h| *h != facet)
        .cloned()
        .collect();
    for h in disk.facets() {
        facets.push(h.relabel(&map));
    }
    Ok((FacetComplex::from_facets(facets)?, map))
}

fn snapshot(label: &str, a: &FacetComplex, b: &FacetComplex, with_boundary: bool) -> StageSnapshot {
    let boundary = |c: &FacetComplex| -> Option<Vec<u64>> {
        if !with_boundary {
            return None;
        }
        match c.boundary_complex() {
            Ok(bd) if !bd.is_marker() => Some(bd.face_counts()),
            _ => Some(Vec::new()),
        }
    };
    StageSnapshot {
        label: label.to_string(),
        f1: a.face_counts(),
        f2: b.face_counts(),
        boundary_f1: boundary(a),
        boundary_f2: boundary(b),
    }
}

fn assert_residuals_zero(c: &FacetComplex, stage: &str) -> Result<(), EqualizeError> {
    let residual = ds_residual_closed(&c.f_vector());
    if residual.iter().any(|r| !num::Zero::is_zero(r)) {
        return Err(EqualizeError::InternalAssertFailed(format!(
            "Dehn-Sommerville residual became nonzero at stage {stage}"
        )));
    }
    Ok(())
}

/// Transports a prepared plump-cell move through an implant's vertex map;
/// type-0 moves get a fresh cone vertex resolved against the host.
fn transport_move(
    m: &BistellarMove,
    map: &BTreeMap<VertexId, VertexId>,
    host: &FacetComplex,
) -> BistellarMove {
    let tau = if m.i == 0 {
        Simplex::vertex(host.fresh_vertex())
    } else {
        m.tau.relabel(map)
    };
    BistellarMove::new(m.sigma.relabel(map), tau, m.i)
}

/// Makes the f-vectors of two closed pseudomanifolds with equal Euler
/// characteristics coincide: solve the virtual plan, prepare both sides
/// symmetrically with interior 0-moves, implant one certified plump cell
/// per planned move into both, then fire the planned moves inside the first
/// complex's cells.
pub fn equalize_closed(
    c1: &FacetComplex,
    c2: &FacetComplex,
    seed: u64,
) -> Result<EqualizeResult, EqualizeError> {
    if c1.dim() != c2.dim() {
        return Err(EqualizeError::DimensionMismatch(c1.dim(), c2.dim()));
    }
    let n = c1.dim().max(1) as usize;
    for c in [c1, c2] {
        let report = pseudomanifold_report(c);
        if report.status != ManifoldStatus::VerifiedClosed {
            return Err(EqualizeError::NotClosed(report.detail));
        }
    }
    if c1.euler_characteristic() != c2.euler_characteristic() {
        return Err(EqualizeError::ChiMismatch(
            c1.euler_characteristic(),
            c2.euler_characteristic(),
        ));
    }
    let plan = solve_virtual_plan(&c1.f_vector(), &c2.f_vector())?;
    let total = to_usize(&plan.total_moves())?;
    let original_delta = count_delta(c1, c2);

    let mut t1 = Tracked::new(c1.clone());
    let mut t2 = Tracked::new(c2.clone());
    let mut stages = vec![snapshot("input", &t1.complex, &t2.complex, false)];

    // (b) the same number of 0-moves on both sides until > N facets each.
    let least = t1.complex.facet_count().min(t2.complex.facet_count());
    let preparation = (total + 1).saturating_sub(least);
    for _ in 0..preparation {
        t1.zero_move_on_first_facet()?;
        t2.zero_move_on_first_facet()?;
    }
    if count_delta(&t1.complex, &t2.complex) != original_delta {
        return Err(EqualizeError::InternalAssertFailed(
            "preparation changed the f-vector difference".into(),
        ));
    }
    stages.push(snapshot("prepared", &t1.complex, &t2.complex, false));

    // (c) implant the same certified cell into the first N facets of both.
    let cell = build_plump_cell(n, seed)?;
    let targets1: Vec<Simplex> = t1.complex.facets()[..total].to_vec();
    let targets2: Vec<Simplex> = t2.complex.facets()[..total].to_vec();
    let mut maps1 = Vec::with_capacity(total);
    for f in &targets1 {
        maps1.push(t1.implant_plump(f, &cell)?);
    }
    for f in &targets2 {
        t2.implant_plump(f, &cell)?;
    }
    if count_delta(&t1.complex, &t2.complex) != original_delta {
        return Err(EqualizeError::InternalAssertFailed(
            "implants changed the f-vector difference".into(),
        ));
    }
    assert_residuals_zero(&t1.complex, "implanted")?;
    stages.push(snapshot("implanted", &t1.complex, &t2.complex, false));

    // (d) fire the j-th planned move inside the j-th cell of the first side.
    let types = plan.realized_types();
    if types.len() != total {
        return Err(EqualizeError::InternalAssertFailed(
            "realized move count disagrees with N".into(),
        ));
    }
    for (j, ty) in types.iter().enumerate() {
        let prepared = cell.move_for_type(*ty).ok_or_else(|| {
            EqualizeError::InternalAssertFailed(format!("cell lacks a type-{ty} move"))
        })?;
        let mapped = transport_move(prepared, &maps1[j], &t1.complex);
        t1.bistellar(&mapped, false)?;
    }
    assert_residuals_zero(&t1.complex, "realized")?;
    stages.push(snapshot("output", &t1.complex, &t2.complex, false));

    // (e) the whole point.
    if t1.complex.face_counts() != t2.complex.face_counts() {
        return Err(EqualizeError::InternalAssertFailed(format!(
            "final f-vectors differ: {:?} vs {:?}",
            t1.complex.face_counts(),
            t2.complex.face_counts()
        )));
    }
    verify_replay(c1, &t1, c2, &t2)?;

    let report = EqualizeReport {
        mode: "closed".into(),
        n,
        seed,
        plans: vec![PlanReport {
            label: "interior".into(),
            plan: plan.to_string(),
            moves: total as u64,
        }],
        stages,
    };
    Ok(EqualizeResult {
        c1_star: t1.complex,
        c2_star: t2.complex,
        log1: t1.log,
        log2: t2.log,
        plan,
        report,
    })
}

fn boundary_or_err(c: &FacetComplex) -> Result<FacetComplex, EqualizeError> {
    let b = c.boundary_complex()?;
    if b.is_marker() {
        return Err(EqualizeError::NotBounded("complex is closed".into()));
    }
    Ok(b)
}

struct BoundaryStage {
    t1: Tracked,
    t2: Tracked,
    plan: VirtualMovePlan,
    total: usize,
    stages: Vec<StageSnapshot>,
}

fn run_boundary_stage(
    c1: &FacetComplex,
    c2: &FacetComplex,
    seed: u64,
) -> Result<BoundaryStage, EqualizeError> {
    if c1.dim() != c2.dim() {
        return Err(EqualizeError::DimensionMismatch(c1.dim(), c2.dim()));
    }
    let n = c1.dim() as usize;
    if !(2..=3).contains(&n) {
        return Err(EqualizeError::UnsupportedDimension(n));
    }
    for c in [c1, c2] {
        let report = pseudomanifold_report(c);
        if report.status != ManifoldStatus::VerifiedWithBoundary {
            return Err(EqualizeError::NotBounded(report.detail));
        }
    }
    let b1 = boundary_or_err(c1)?;
    let b2 = boundary_or_err(c2)?;
    if b1.euler_characteristic() != b2.euler_characteristic() {
        return Err(EqualizeError::ChiBoundaryMismatch(
            b1.euler_characteristic(),
            b2.euler_characteristic(),
        ));
    }
    for c in [c1, c2] {
        if exposed_pairs(c)?.is_empty() {
            return Err(EqualizeError::NoExposedFacet);
        }
    }
    let plan = solve_virtual_plan(&b1.f_vector(), &b2.f_vector())?;
    let total = to_usize(&plan.total_moves())?;
    let original_delta = count_delta(&b1, &b2);

    let mut t1 = Tracked::new(c1.clone());
    let mut t2 = Tracked::new(c2.clone());
    let mut stages = vec![snapshot("input", &t1.complex, &t2.complex, true)];

    // (1) the same number of star subdivisions until both sides have more
    // than N one-face-exposed facets.
    let mut guard = 0usize;
    loop {
        let have1 = one_face_exposed(&t1.complex)?.len();
        let have2 = one_face_exposed(&t2.complex)?.len();
        if have1 > total && have2 > total {
            break;
        }
        guard += 1;
        if guard > 16 * (total + 2) {
            return Err(EqualizeError::InternalAssertFailed(
                "star subdivision loop did not converge".into(),
            ));
        }
        for t in [&mut t1, &mut t2] {
            let (facet, face) = exposed_pairs(&t.complex)?
                .into_iter()
                .next()
                .ok_or(EqualizeError::NoExposedFacet)?;
            t.star_subdivide(&facet, &face)?;
        }
    }
    let now_delta = count_delta(
        &boundary_or_err(&t1.complex)?,
        &boundary_or_err(&t2.complex)?,
    );
    if now_delta != original_delta {
        return Err(EqualizeError::InternalAssertFailed(
            "star subdivisions changed the boundary f-vector difference".into(),
        ));
    }
    stages.push(snapshot("subdivided", &t1.complex, &t2.complex, true));

    // (2) the same mold cell into the first N one-face-exposed facets of both.
    let cell = build_mold_cell(n, seed)?;
    let targets1 = one_face_exposed(&t1.complex)?[..total].to_vec();
    let targets2 = one_face_exposed(&t2.complex)?[..total].to_vec();
    let mut maps1 = Vec::with_capacity(total);
    for (facet, face) in &targets1 {
        maps1.push(t1.implant_mold(facet, face, &cell)?);
    }
    for (facet, face) in &targets2 {
        t2.implant_mold(facet, face, &cell)?;
    }
    let now_delta = count_delta(
        &boundary_or_err(&t1.complex)?,
        &boundary_or_err(&t2.complex)?,
    );
    if now_delta != original_delta {
        return Err(EqualizeError::InternalAssertFailed(
            "mold implants changed the boundary f-vector difference".into(),
        ));
    }
    stages.push(snapshot("molded", &t1.complex, &t2.complex, true));

    // (3) realize each boundary virtual i-move as the prepared elementary
    // (n−1−i)-shelling inside one mold cell of the first side.
    for (j, ty) in plan.realized_types().iter().enumerate() {
        let prepared = cell.shelling_for_window_move(*ty).ok_or_else(|| {
            EqualizeError::InternalAssertFailed(format!("mold lacks a shelling for type {ty}"))
        })?;
        let mapped = ShellingMove::new(
            prepared.sigma.relabel(&maps1[j]),
            prepared.tau.relabel(&maps1[j]),
        );
        t1.shelling(&mapped)?;
    }
    stages.push(snapshot("sheared", &t1.complex, &t2.complex, true));

    let final_b1 = boundary_or_err(&t1.complex)?;
    let final_b2 = boundary_or_err(&t2.complex)?;
    if final_b1.face_counts() != final_b2.face_counts() {
        return Err(EqualizeError::InternalAssertFailed(format!(
            "final boundary f-vectors differ: {:?} vs {:?}",
            final_b1.face_counts(),
            final_b2.face_counts()
        )));
    }
    Ok(BoundaryStage { t1, t2, plan, total, stages })
}

/// Makes the boundary f-vectors of two bounded pseudomanifolds (n in {2,3})
/// with matching boundary Euler characteristics coincide, via mold cells
/// and prepared shellings.
pub fn equalize_boundary(
    c1: &FacetComplex,
    c2: &FacetComplex,
    seed: u64,
) -> Result<EqualizeResult, EqualizeError> {
    let stage = run_boundary_stage(c1, c2, seed)?;
    verify_replay(c1, &stage.t1, c2, &stage.t2)?;
    let report = EqualizeReport {
        mode: "boundary".into(),
        n: c1.dim() as usize,
        seed,
        plans: vec![PlanReport {
            label: "boundary".into(),
            plan: stage.plan.to_string(),
            moves: stage.total as u64,
        }],
        stages: stage.stages,
    };
    Ok(EqualizeResult {
        c1_star: stage.t1.complex,
        c2_star: stage.t2.complex,
        log1: stage.t1.log,
        log2: stage.t2.log,
        plan: stage.plan,
        report,
    })
}

/// Boundary equalization followed by interior equalization on the
/// hat-f-vectors; the second stage never touches the boundary
/// triangulations.
pub fn equalize_full(
    c1: &FacetComplex,
    c2: &FacetComplex,
    seed: u64,
) -> Result<EqualizeResult, EqualizeError> {
    if c1.dim() != c2.dim() {
        return Err(EqualizeError::DimensionMismatch(c1.dim(), c2.dim()));
    }
    if c1.euler_characteristic() != c2.euler_characteristic() {
        return Err(EqualizeError::ChiMismatch(
            c1.euler_characteristic(),
            c2.euler_characteristic(),
        ));
    }
    let n = c1.dim() as usize;
    let mut stage = run_boundary_stage(c1, c2, seed)?;
    let boundary_plan = stage.plan.clone();
    let boundary_total = stage.total;
    let mut stages = stage.stages;

    // Stage 2: the boundaries now agree, so Δf̂ = Δf and the interior plan
    // realizes it without touching the boundary triangulations.
    let before_b1 = boundary_or_err(&stage.t1.complex)?;
    let before_b2 = boundary_or_err(&stage.t2.complex)?;
    let hat1 = hat_f(&stage.t1.complex.f_vector(), &before_b1.f_vector())?;
    let hat2 = hat_f(&stage.t2.complex.f_vector(), &before_b2.f_vector())?;
    let plan2 = solve_plan_entries(n, hat1.entries(), hat2.entries())?;
    let total2 = to_usize(&plan2.total_moves())?;

    let least = stage
        .t1
        .complex
        .facet_count()
        .min(stage.t2.complex.facet_count());
    let preparation = (total2 + 1).saturating_sub(least);
    for _ in 0..preparation {
        stage.t1.zero_move_on_first_facet()?;
        stage.t2.zero_move_on_first_facet()?;
    }
    let cell = build_plump_cell(n, seed)?;
    let targets1: Vec<Simplex> = stage.t1.complex.facets()[..total2].to_vec();
    let targets2: Vec<Simplex> = stage.t2.complex.facets()[..total2].to_vec();
    let mut maps1 = Vec::with_capacity(total2);
    for f in &targets1 {
        maps1.push(stage.t1.implant_plump(f, &cell)?);
    }
    for f in &targets2 {
        stage.t2.implant_plump(f, &cell)?;
    }
    stages.push(snapshot("interior-implanted", &stage.t1.complex, &stage.t2.complex, true));
    for (j, ty) in plan2.realized_types().iter().enumerate() {
        let prepared = cell.move_for_type(*ty).ok_or_else(|| {
            EqualizeError::InternalAssertFailed(format!("cell lacks a type-{ty} move"))
        })?;
        let mapped = transport_move(prepared, &maps1[j], &stage.t1.complex);
        stage.t1.bistellar(&mapped, false)?;
    }
    stages.push(snapshot("output", &stage.t1.complex, &stage.t2.complex, true));

    // The boundary triangulations must be byte-identical to the stage-1
    // outputs, and now both f and ∂f agree.
    let after_b1 = boundary_or_err(&stage.t1.complex)?;
    let after_b2 = boundary_or_err(&stage.t2.complex)?;
    if after_b1 != before_b1 || after_b2 != before_b2 {
        return Err(EqualizeError::InternalAssertFailed(
            "stage 2 modified a boundary triangulation".into(),
        ));
    }
    if stage.t1.complex.face_counts() != stage.t2.complex.face_counts() {
        return Err(EqualizeError::InternalAssertFailed(format!(
            "final f-vectors differ: {:?} vs {:?}",
            stage.t1.complex.face_counts(),
            stage.t2.complex.face_counts()
        )));
    }
    if after_b1.face_counts() != after_b2.face_counts() {
        return Err(EqualizeError::InternalAssertFailed(
            "final boundary f-vectors differ".into(),
        ));
    }
    verify_replay(c1, &stage.t1, c2, &stage.t2)?;

    let report = EqualizeReport {
        mode: "full".into(),
        n,
        seed,
        plans: vec![
            PlanReport {
                label: "boundary".into(),
                plan: boundary_plan.to_string(),
                moves: boundary_total as u64,
            },
            PlanReport {
                label: "interior".into(),
                plan: plan2.to_string(),
                moves: total2 as u64,
            },
        ],
        stages,
    };
    Ok(EqualizeResult {
        c1_star: stage.t1.complex,
        c2_star: stage.t2.complex,
        log1: stage.t1.log,
        log2: stage.t2.log,
        plan: plan2,
        report,
    })
}

fn verify_replay(
    c1: &FacetComplex,
    t1: &Tracked,
    c2: &FacetComplex,
    t2: &Tracked,
) -> Result<(), EqualizeError> {
    let replayed1 = replay(c1, &t1.log)?;
    if replayed1 != t1.complex {
        return Err(EqualizeError::InternalAssertFailed(
            "log 1 does not replay to the output".into(),
        ));
    }
    let replayed2 = replay(c2, &t2.log)?;
    if replayed2 != t2.complex {
        return Err(EqualizeError::InternalAssertFailed(
            "log 2 does not replay to the output".into(),
        ));
    }
    Ok(())
}

/// Re-applies every record with full legality checking; any mismatch aborts
/// with the failing record index.
pub fn replay(c: &FacetComplex, log: &MoveLog) -> Result<FacetComplex, EqualizeError> {
    let mut current = c.clone();
    for (index, record) in log.records.iter().enumerate() {
        let mismatch = |reason: String| EqualizeError::ReplayMismatch { index, reason };
        if current.face_counts() != record.f_before {
            return Err(mismatch(format!(
                "recorded f_before {:?} does not match the complex ({:?})",
                record.f_before,
                current.face_counts()
            )));
        }
        let next = match &record.op {
            MoveOp::Bistellar { sigma, tau, i } => {
                apply_bistellar(&current, &BistellarMove::new(sigma.clone(), tau.clone(), *i))
                    .map_err(|e| mismatch(e.to_string()))?
            }
            MoveOp::ZeroMove { sigma, tau } => {
                apply_bistellar(&current, &BistellarMove::new(sigma.clone(), tau.clone(), 0))
                    .map_err(|e| mismatch(e.to_string()))?
            }
            MoveOp::Shelling { sigma, tau, i } => {
                let m = ShellingMove::new(sigma.clone(), tau.clone());
                if m.shelling_type() != *i {
                    return Err(mismatch("recorded shelling type disagrees".into()));
                }
                apply_shelling(&current, &m).map_err(|e| mismatch(e.to_string()))?
            }
            MoveOp::StarSubdivide { facet, face } => {
                star_subdivide_along_face(&current, facet, face)
                    .map_err(|e| mismatch(e.to_string()))?
            }
            MoveOp::Implant { facet, labels, disk, window_face } => {
                let disk = FacetComplex::from_facets(disk.clone())
                    .map_err(|e| mismatch(e.to_string()))?;
                match window_face {
                    None => {
                        let (next, _) = current
                            .implant(facet, &disk, labels)
                            .map_err(|e| mismatch(e.to_string()))?;
                        next
                    }
                    Some(g) => {
                        let (next, _) =
                            implant_mold_disk(&current, facet, g, &disk, labels)
                                .map_err(|e| mismatch(e.to_string()))?;
                        next
                    }
                }
            }
        };
        if next.face_counts() != record.f_after {
            return Err(mismatch(format!(
                "recorded f_after {:?} does not match the result ({:?})",
                record.f_after,
                next.face_counts()
            )));
        }
        current = next;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::fixture;

    #[test]
    fn closed_equalization_sphere_vs_icosahedron() {
        let sphere = fixture("sphere2_min").unwrap();
        let ico = fixture("icosahedron").unwrap();
        let result = equalize_closed(&sphere, &ico, DEFAULT_SEED).unwrap();
        assert_eq!(
            result.c1_star.face_counts(),
            result.c2_star.face_counts()
        );
        assert_eq!(result.plan.to_string(), "0:+8; N=8");
        assert_eq!(replay(&sphere, &result.log1).unwrap(), result.c1_star);
        assert_eq!(replay(&ico, &result.log2).unwrap(), result.c2_star);
    }

    #[test]
    fn closed_equalization_rejects_chi_mismatch() {
        let sphere = fixture("sphere2_min").unwrap();
        let torus = fixture("torus7").unwrap();
        assert!(matches!(
            equalize_closed(&sphere, &torus, DEFAULT_SEED),
            Err(EqualizeError::ChiMismatch(2, 0))
        ));
    }

    #[test]
    fn boundary_equalization_of_two_disks() {
        let a = fixture("disk_cone").unwrap();
        let b = fixture("disk_square").unwrap();
        let result = equalize_boundary(&a, &b, DEFAULT_SEED).unwrap();
        let b1 = result.c1_star.boundary_complex().unwrap();
        let b2 = result.c2_star.boundary_complex().unwrap();
        assert_eq!(b1.face_counts(), b2.face_counts());
    }

    #[test]
    fn boundary_equalization_identity_plan() {
        let a = fixture("disk_cone").unwrap();
        let result = equalize_boundary(&a, &a, DEFAULT_SEED).unwrap();
        assert_eq!(result.plan.to_string(), "N=0");
        assert_eq!(result.c1_star.face_counts(), result.c2_star.face_counts());
    }

    #[test]
    fn full_equalization_of_two_disks() {
        let a = fixture("disk_cone").unwrap();
        let b = fixture("disk_square").unwrap();
        let result = equalize_full(&a, &b, DEFAULT_SEED).unwrap();
        assert_eq!(result.c1_star.face_counts(), result.c2_star.face_counts());
        let b1 = result.c1_star.boundary_complex().unwrap();
        let b2 = result.c2_star.boundary_complex().unwrap();
        assert_eq!(b1.face_counts(), b2.face_counts());
    }

    #[test]
    fn replay_detects_tampering() {
        let sphere = fixture("sphere2_min").unwrap();
        let ico = fixture("icosahedron").unwrap();
        let result = equalize_closed(&sphere, &ico, DEFAULT_SEED).unwrap();
        let mut log = result.log1.clone();
        if let MoveOp::ZeroMove { tau, .. } = &mut log.records[0].op {
            *tau = Simplex::vertex(2); // stale vertex
        }
        match replay(&sphere, &log) {
            Err(EqualizeError::ReplayMismatch { index: 0, .. }) => {}
            other => panic!("expected mismatch at index 0, got {other:?}"),
        }
        // Empty log replays to the input.
        assert_eq!(replay(&sphere, &MoveLog::new()).unwrap(), sphere);
    }
}
