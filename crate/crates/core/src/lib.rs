//! Exact combinatorial topology on pure simplicial complexes: bistellar
//! (Pachner) moves, elementary shellings, Dehn–Sommerville f-vector algebra,
//! plump/mold cell constructions, and pipelines that retriangulate manifolds
//! with equal Euler characteristics until their f-vectors coincide.
//!
//! All arithmetic is exact; all operations are pure functions on immutable
//! values with canonically sorted output, so identical inputs and seeds
//! produce byte-identical results.

pub mod complex;
pub mod constructions;
pub mod equalizer;
pub mod fvector;
pub mod io;
pub mod moves;
pub mod simplex;
pub mod verify;

pub use complex::{ComplexError, FacetComplex};
pub use constructions::{
    boundary_of_simplex, build_mold_cell, build_plump_cell, fixture, fixture_names,
    verify_mold, verify_plump, BuildError, CellCertificate, MoldCell, PlumpCell,
};
pub use equalizer::{
    equalize_boundary, equalize_closed, equalize_full, replay, EqualizeError, EqualizeReport,
    EqualizeResult, DEFAULT_SEED,
};
pub use fvector::{
    apply_virtual, binomial, complete_f, d_vector, ds_residual_boundary, ds_residual_closed,
    hat_f, q_matrix, solve_virtual_plan, DVector, FVector, FvError, QMatrix, RationalFVector,
    VirtualMovePlan,
};
pub use moves::{
    apply_bistellar, apply_shelling, enumerate_bistellar, enumerate_shellings,
    induced_boundary_move, one_face_exposed, star_subdivide_along_face, BistellarMove,
    MoveError, MoveLog, MoveRecord, ShellingMove,
};
pub use simplex::{Simplex, VertexId};
pub use verify::{pseudomanifold_report, verify_manifold, ManifoldCertificate, ManifoldStatus};
