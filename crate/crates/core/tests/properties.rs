//! Cross-checks against independent brute-force oracles, plus the module
//! invariants that hold on every fixture and on seeded random inputs.

use std::collections::HashSet;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use proptest::prelude::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use pachner_core::constructions::{boundary_of_simplex, fixture, fixture_names};
use pachner_core::fvector::{
    apply_virtual, d_vector, ds_residual_closed, hat_f, residuals_zero, solve_virtual_plan,
    FVector, VirtualMovePlan,
};
use pachner_core::io;
use pachner_core::moves::{
    apply_bistellar, check_bistellar, enumerate_bistellar, BistellarMove,
};
use pachner_core::simplex::Simplex;
use pachner_core::verify::pseudomanifold_report;
use pachner_core::{FacetComplex, ManifoldStatus};

/// Brute-force face counter: every nonempty subset of every facet, deduped.
/// Kept independent of the library's face enumeration on purpose.
fn oracle_face_counts(facets: &[Vec<u32>]) -> Vec<u64> {
    let dim = facets[0].len() - 1;
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for facet in facets {
        let k = facet.len();
        for mask in 1u32..(1 << k) {
            let mut subset: Vec<u32> = (0..k)
                .filter(|bit| mask & (1 << bit) != 0)
                .map(|bit| facet[bit])
                .collect();
            subset.sort_unstable();
            seen.insert(subset);
        }
    }
    let mut counts = vec![0u64; dim + 1];
    for face in &seen {
        counts[face.len() - 1] += 1;
    }
    counts
}

fn oracle_chi(facets: &[Vec<u32>]) -> i64 {
    oracle_face_counts(facets)
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 0 { *c as i64 } else { -(*c as i64) })
        .sum()
}

fn raw_facets(c: &FacetComplex) -> Vec<Vec<u32>> {
    c.facets().iter().map(|f| f.vertices().to_vec()).collect()
}

fn all_fixtures() -> Vec<FacetComplex> {
    fixture_names()
        .into_iter()
        .map(|name| fixture(name).unwrap())
        .collect()
}

fn bounded_fixtures() -> Vec<FacetComplex> {
    all_fixtures()
        .into_iter()
        .filter(|c| !c.boundary_complex().unwrap().is_marker())
        .collect()
}

#[test]
fn f_vectors_match_the_oracle_on_fixtures() {
    for c in all_fixtures() {
        let raw = raw_facets(&c);
        assert_eq!(c.face_counts(), oracle_face_counts(&raw), "{:?}", c.name());
        assert_eq!(c.euler_characteristic(), oracle_chi(&raw), "{:?}", c.name());
    }
}

#[test]
fn f_vectors_match_the_oracle_on_seeded_random_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    for case in 0..100 {
        let dim = rng.random_range(1..=4usize);
        let pool: Vec<u32> = (1..=(dim as u32 + 7)).collect();
        let facet_count = rng.random_range(1..=12usize);
        let mut facets: Vec<Vec<u32>> = Vec::new();
        for _ in 0..facet_count {
            let mut facet: Vec<u32> = pool
                .choose_multiple(&mut rng, dim + 1)
                .copied()
                .collect();
            facet.sort_unstable();
            if !facets.contains(&facet) {
                facets.push(facet);
            }
        }
        let c = FacetComplex::build(&facets).unwrap();
        assert_eq!(
            c.face_counts(),
            oracle_face_counts(&facets),
            "case {case} dim {dim}"
        );
    }
}

#[test]
fn link_and_star_match_their_characterizations() {
    for c in all_fixtures() {
        let faces = c.all_faces();
        for s in &faces {
            let star = c.star(s).unwrap();
            assert!(star.facets().iter().all(|f| f.contains(s)));

            let link = c.link(s).unwrap();
            let link_faces: HashSet<Simplex> = if link.is_marker() {
                HashSet::new()
            } else {
                link.all_faces().into_iter().collect()
            };
            let expected: HashSet<Simplex> = faces
                .iter()
                .filter(|t| t.is_disjoint(s) && faces.contains(&t.union(s)))
                .cloned()
                .collect();
            assert_eq!(link_faces, expected, "link of {s} in {:?}", c.name());
        }
    }
}

#[test]
fn join_f_vector_convolution() {
    // f_k(A*B) = Σ_{p+q=k−1} f_p(A) f_q(B), with f_{-1} := 1 on both sides.
    let cases = [
        (
            FacetComplex::build(&[vec![9]]).unwrap(),
            boundary_of_simplex(1),
        ),
        (
            FacetComplex::build(&[vec![11], vec![12]]).unwrap(),
            FacetComplex::build(&[vec![1], vec![2]]).unwrap(),
        ),
        (
            FacetComplex::build(&[vec![20, 21]]).unwrap(),
            fixture("sphere2_min").unwrap(),
        ),
    ];
    for (a, b) in cases {
        let b = FacetComplex::from_facets(
            b.facets()
                .iter()
                .map(|f| {
                    Simplex::new(f.vertices().iter().map(|v| v + 100).collect()).unwrap()
                })
                .collect(),
        )
        .unwrap();
        let joined = a.join(&b).unwrap();
        let mut fa = vec![1i64];
        fa.extend(a.face_counts().iter().map(|c| *c as i64));
        let mut fb = vec![1i64];
        fb.extend(b.face_counts().iter().map(|c| *c as i64));
        let fj = joined.face_counts();
        for (k, count) in fj.iter().enumerate() {
            let expected: i64 = (0..=(k + 1))
                .map(|p| {
                    let q = k + 1 - p;
                    fa.get(p).copied().unwrap_or(0) * fb.get(q).copied().unwrap_or(0)
                })
                .sum();
            assert_eq!(*count as i64, expected, "k = {k}");
        }
    }
}

#[test]
fn doubling_identity_on_admissible_fixtures() {
    for c in bounded_fixtures() {
        let Ok(doubled) = c.double() else {
            continue; // degenerate inputs are rejected, not doubled
        };
        let fb = c.boundary_complex().unwrap().face_counts();
        let fc = c.face_counts();
        for k in 0..fc.len() {
            let expected = 2 * fc[k] as i64 - fb.get(k).copied().unwrap_or(0) as i64;
            assert_eq!(doubled.face_counts()[k] as i64, expected, "{:?}", c.name());
        }
        assert!(doubled.boundary_complex().unwrap().is_marker());
        // hat-f is half the double's f-vector, entry by entry.
        let hat = hat_f(&c.f_vector(), &c.boundary_complex().unwrap().f_vector()).unwrap();
        let doubled_f = doubled.f_vector();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for i in -1..=(c.dim() as i32) {
            let expected = &half * &doubled_f.to_rationals()[(i + 1) as usize];
            assert_eq!(*hat.at(i), expected, "{:?} index {i}", c.name());
        }
    }
}

#[test]
fn residuals_invariant_under_d_vectors_on_random_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..100 {
        let n = rng.random_range(1..=6usize);
        let base = boundary_of_simplex(n).f_vector();
        let len = (n + 1) / 2;
        let plan = VirtualMovePlan::new(
            n,
            (0..len)
                .map(|_| BigInt::from(rng.random_range(-6i64..=6)))
                .collect(),
        );
        let moved = apply_virtual(&base, &plan).unwrap();
        assert!(residuals_zero(&ds_residual_closed(&moved)));
        for i in 0..=n {
            let d = d_vector(n, i).unwrap();
            let counts = moved
                .counts()
                .iter()
                .zip(d.entries())
                .map(|(c, dk)| c + dk)
                .collect();
            let shifted = FVector::from_counts(counts);
            assert!(residuals_zero(&ds_residual_closed(&shifted)), "n={n} i={i}");
        }
    }
}

#[test]
fn odd_dimensional_consistency_forces_zero_chi() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..50 {
        let n = *[1usize, 3, 5].choose(&mut rng).unwrap();
        let base = boundary_of_simplex(n).f_vector();
        let len = (n + 1) / 2;
        let plan = VirtualMovePlan::new(
            n,
            (0..len)
                .map(|_| BigInt::from(rng.random_range(-4i64..=4)))
                .collect(),
        );
        let moved = apply_virtual(&base, &plan).unwrap();
        if residuals_zero(&ds_residual_closed(&moved)) {
            assert!(moved.chi().is_zero(), "odd n = {n} must have chi = 0");
        }
    }
}

#[test]
fn solve_recovers_applied_plans() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let n = rng.random_range(1..=6usize);
        let src = {
            let base = boundary_of_simplex(n).f_vector();
            let len = (n + 1) / 2;
            let warm = VirtualMovePlan::new(
                n,
                (0..len)
                    .map(|_| BigInt::from(rng.random_range(0i64..=4)))
                    .collect(),
            );
            apply_virtual(&base, &warm).unwrap()
        };
        let len = (n + 1) / 2;
        let plan = VirtualMovePlan::new(
            n,
            (0..len)
                .map(|_| BigInt::from(rng.random_range(-5i64..=5)))
                .collect(),
        );
        let dst = apply_virtual(&src, &plan).unwrap();
        let recovered = solve_virtual_plan(&src, &dst).unwrap();
        assert_eq!(recovered, plan);
        assert_eq!(apply_virtual(&src, &recovered).unwrap(), dst);
    }
}

#[test]
fn moves_agree_with_d_vectors_and_invert() {
    for c in all_fixtures() {
        let n = c.dim() as usize;
        for m in enumerate_bistellar(&c, None) {
            let after = apply_bistellar(&c, &m).unwrap();
            let d = d_vector(n, m.i).unwrap();
            for k in 0..=n {
                let delta =
                    BigInt::from(after.face_counts()[k]) - BigInt::from(c.face_counts()[k]);
                assert_eq!(delta, *d.at(k), "{:?} move {m} k={k}", c.name());
            }
            let back = apply_bistellar(&after, &m.inverse(n)).unwrap();
            assert_eq!(back, c, "{:?} move {m}", c.name());
        }
    }
}

#[test]
fn legality_matches_brute_force_on_fixtures() {
    use itertools::Itertools;
    for c in all_fixtures().into_iter().filter(|c| c.facet_count() <= 12) {
        let n = c.dim() as usize;
        let vertices = c.vertices();
        let enumerated: Vec<BistellarMove> = enumerate_bistellar(&c, None)
            .into_iter()
            .filter(|m| m.i >= 1)
            .collect();
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
        assert_eq!(enumerated, brute, "{:?}", c.name());
    }
}

#[test]
fn legal_moves_preserve_pseudomanifolds() {
    for c in all_fixtures() {
        let before = pseudomanifold_report(&c).status;
        if before == ManifoldStatus::Failed {
            continue;
        }
        for m in enumerate_bistellar(&c, None).into_iter().take(25) {
            let after = apply_bistellar(&c, &m).unwrap();
            assert_eq!(
                pseudomanifold_report(&after).status,
                before,
                "{:?} move {m}",
                c.name()
            );
        }
    }
}

#[test]
fn plan_sign_convention_uses_reverse_moves() {
    // A negative coefficient realizes (n−i)-moves; applying the plan and its
    // negation returns to the start.
    let base = fixture("icosahedron").unwrap().f_vector();
    let plan = VirtualMovePlan::new(2, vec![BigInt::from(-3)]);
    assert_eq!(plan.total_moves(), BigInt::from(3));
    assert_eq!(plan.realized_types(), vec![2, 2, 2]);
    let smaller = apply_virtual(&base, &plan).unwrap();
    assert!(smaller.counts()[0] < base.counts()[0]);
    assert!(smaller
        .counts()
        .iter()
        .all(|c| c.is_positive()));
    let back = apply_virtual(&smaller, &plan.negated()).unwrap();
    assert_eq!(back.counts(), base.counts());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Canonical serialization round-trips byte-exactly in both formats.
    #[test]
    fn serialization_roundtrip(raw in proptest::collection::vec(
        proptest::collection::btree_set(1u32..40, 1..5),
        1..12,
    )) {
        let size = raw[0].len();
        let facets: Vec<Vec<u32>> = raw
            .into_iter()
            .filter(|f| f.len() == size)
            .map(|f| f.into_iter().collect())
            .collect();
        let c = FacetComplex::build(&facets);
        prop_assume!(c.is_ok());
        let c = c.unwrap();

        let text = io::write_facet_list(&c);
        let reparsed = io::parse_facet_list(&text).unwrap();
        prop_assert_eq!(&reparsed, &c);
        prop_assert_eq!(io::write_facet_list(&reparsed), text);

        let json = io::to_json(&c);
        let reparsed = io::from_json(&json).unwrap();
        prop_assert_eq!(&reparsed, &c);
        prop_assert_eq!(io::to_json(&reparsed), json);
    }

    /// Applying a plan then its negation is the identity on f-vectors.
    #[test]
    fn virtual_plans_form_a_group_action(
        n in 1usize..=6,
        raw in proptest::collection::vec(-6i64..=6, 3),
    ) {
        let base = boundary_of_simplex(n).f_vector();
        let len = (n + 1) / 2;
        let plan = VirtualMovePlan::new(
            n,
            raw.into_iter().take(len).chain(std::iter::repeat(0)).take(len)
                .map(BigInt::from)
                .collect(),
        );
        let there = apply_virtual(&base, &plan).unwrap();
        let back = apply_virtual(&there, &plan.negated()).unwrap();
        prop_assert_eq!(back.counts(), base.counts());
    }
}
