//! Cross-module invariants: property tests over random complexes and the
//! randomized checks that the per-module unit tests do not cover.

use hpsig_core::chain::simplicial_chain_complex;
use hpsig_core::coeff::{evaluate_family, CharacterFamily};
use hpsig_core::covers::CoverComplex;
use hpsig_core::fixtures;
use hpsig_core::group::{FiniteGroup, GroupData, Irrep};
use hpsig_core::poincare::{hp_complex, hp_complex_certified, validate_hp};
use hpsig_core::signature::{multisignature, signature_complex};
use hpsig_core::simplicial::OrientedSimplicialComplex;
use hpsig_core::sparse::SparseMat;
use hpsig_core::{Cyclotomic, Rational, ScalarMode, C64};
use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// b b = 0 in integer arithmetic for arbitrary downward closures.
    #[test]
    fn boundary_squares_to_zero(
        facets in prop::collection::vec(
            prop::collection::btree_set(0u32..12, 1..=5),
            1..8,
        )
    ) {
        let maximal: Vec<Vec<u32>> = {
            let mut m: Vec<Vec<u32>> = facets
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect();
            m.sort();
            m.dedup();
            m
        };
        let k = OrientedSimplicialComplex::build(&maximal).unwrap();
        for p in 2..=k.dim() {
            let prod = k
                .boundary_matrix(p - 1)
                .unwrap()
                .matmul_i64(&k.boundary_matrix(p).unwrap())
                .unwrap();
            prop_assert!(prod.is_zero(), "b[{}] b[{}] != 0", p - 1, p);
        }
    }

    /// Euler characteristic from cell counts equals the alternating sum of
    /// homology ranks over the rationals.
    #[test]
    fn euler_characteristic_consistency(
        facets in prop::collection::vec(
            prop::collection::btree_set(0u32..10, 1..=4),
            1..6,
        )
    ) {
        let maximal: Vec<Vec<u32>> = {
            let mut m: Vec<Vec<u32>> = facets
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect();
            m.sort();
            m.dedup();
            m
        };
        let k = OrientedSimplicialComplex::build(&maximal).unwrap();
        let c = simplicial_chain_complex::<Rational>(&k);
        let alt: i64 = c
            .homology_ranks()
            .unwrap()
            .iter()
            .enumerate()
            .map(|(p, &h)| if p % 2 == 0 { h as i64 } else { -(h as i64) })
            .sum();
        prop_assert_eq!(k.euler_characteristic(), alt);
    }

    /// The subdivision chain map commutes with boundaries for arbitrary
    /// complexes, exactly.
    #[test]
    fn subdivision_chain_map_commutes(
        facets in prop::collection::vec(
            prop::collection::btree_set(0u32..8, 1..=4),
            1..4,
        )
    ) {
        let maximal: Vec<Vec<u32>> = {
            let mut m: Vec<Vec<u32>> = facets
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect();
            m.sort();
            m.dedup();
            m
        };
        let k = OrientedSimplicialComplex::build(&maximal).unwrap();
        let (sd, maps) = k.barycentric_subdivision();
        for p in 1..=k.dim() {
            let lhs = sd.boundary_matrix(p).unwrap().matmul_i64(&maps[p]).unwrap();
            let rhs = maps[p - 1]
                .matmul_i64(&k.boundary_matrix(p).unwrap())
                .unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn top_homology_of_closed_orientable_fixtures_is_rank_one() {
    for k in [
        fixtures::boundary_sphere(2),
        fixtures::boundary_sphere(4),
        fixtures::minimal_torus(),
        fixtures::complex_projective_plane(),
    ] {
        let c = simplicial_chain_complex::<Rational>(&k);
        let d = k.dim();
        assert_eq!(c.homology_rank(d).unwrap(), 1);
        // the fundamental cycle is a nonzero cycle, hence spans the rank-1
        // summand
        let cycle = k.certify_manifold().fundamental_cycle.unwrap();
        assert!(k.cycle_closes(&cycle));
        assert!(cycle.coefficients().iter().all(|&c| c != 0));
    }
}

#[test]
fn homology_rank_invariant_under_unitary_change_of_basis() {
    // conjugate each differential by seeded random unitaries and recompute
    // the float-mode ranks; 100 trials at the 1e-8 threshold
    let t = fixtures::minimal_torus();
    let base = simplicial_chain_complex::<C64>(&t);
    let expected = base.homology_ranks().unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xba5e);
    for _ in 0..100 {
        let us: Vec<DMatrix<Complex<f64>>> = (0..=2)
            .map(|p| random_unitary(base.rank(p), &mut rng))
            .collect();
        let mut diffs = vec![SparseMat::zero(0, base.rank(0))];
        for p in 1..=2usize {
            let dense = base.differential(p).to_c64_dense();
            let conj = &us[p - 1] * dense * us[p].adjoint();
            let triplets: Vec<(usize, usize, C64)> = conj
                .row_iter()
                .enumerate()
                .flat_map(|(r, row)| {
                    row.iter()
                        .cloned()
                        .enumerate()
                        .map(|(c, v)| (r, c, v))
                        .collect::<Vec<_>>()
                })
                .filter(|(_, _, v)| v.norm() > 1e-14)
                .collect();
            diffs.push(SparseMat::from_triplets(base.rank(p - 1), base.rank(p), triplets));
        }
        let conjugated = hpsig_core::chain::BasedChainComplex::from_parts_unchecked(
            (0..=2).map(|p| base.rank(p)).collect(),
            diffs,
        );
        assert_eq!(conjugated.homology_ranks().unwrap(), expected);
    }
}

fn random_unitary(n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> DMatrix<Complex<f64>> {
    let m = DMatrix::from_fn(n, n, |_, _| {
        Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let qr = m.qr();
    qr.q()
}

#[test]
fn isotypic_ranks_match_total_space_on_torus_covers() {
    let t = fixtures::minimal_torus();
    for m in [2usize, 3, 4] {
        let group = GroupData::new(FiniteGroup::cyclic(m), Vec::new()).unwrap();
        let edges = fixtures::torus_zm_cocycle_edges(&t, m);
        let cover = CoverComplex::build(t.clone(), group, &edges).unwrap();
        let (total, _) = cover.materialize_total_space().unwrap();
        let total_ranks = simplicial_chain_complex::<Rational>(&total)
            .homology_ranks()
            .unwrap();
        for p in 0..=2 {
            let mut acc = 0usize;
            for irrep in 0..m {
                let c = cover.twisted_complex::<Cyclotomic>(irrep).unwrap();
                acc += cover.group().irreps[irrep].dim() * c.homology_rank(p).unwrap();
            }
            assert_eq!(acc, total_ranks[p], "Z/{m}, degree {p}");
        }
    }
}

#[test]
fn gauge_conjugation_preserves_axiom_report_and_signature() {
    let t = fixtures::minimal_torus();
    let group = GroupData::new(FiniteGroup::cyclic(3), Vec::new()).unwrap();
    let edges = fixtures::torus_zm_cocycle_edges(&t, 3);
    let cover = CoverComplex::build(t.clone(), group, &edges).unwrap();
    let cycle = t.certify_manifold().fundamental_cycle.unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6a06e);
    let h: Vec<usize> = (0..7).map(|_| rng.gen_range(0..3)).collect();
    let gauged = cover.gauge_transform(&h).unwrap();
    for irrep in 0..3 {
        let t1 = hpsig_core::covers::CoverTransport { cover: &cover, irrep };
        let t2 = hpsig_core::covers::CoverTransport { cover: &gauged, irrep };
        let hp1 = hp_complex::<Cyclotomic, _>(&t, &cycle, &t1).unwrap();
        let hp2 = hp_complex::<Cyclotomic, _>(&t, &cycle, &t2).unwrap();
        let r1 = validate_hp(&hp1, true).unwrap();
        let r2 = validate_hp(&hp2, true).unwrap();
        assert_eq!(r1.all_pass(), r2.all_pass());
        assert_eq!(r1.homology_ranks, r2.homology_ranks);
        assert_eq!(r1.symmetry_residual, r2.symmetry_residual);
        assert_eq!(r1.chain_relation_residual, r2.chain_relation_residual);
        let s1 = signature_complex(&hp1).unwrap();
        let s2 = signature_complex(&hp2).unwrap();
        assert_eq!(s1.signature, s2.signature);
    }
}

#[test]
fn multisignature_permutation_equivariance() {
    // feeding the characters in a different order permutes the entries and
    // nothing else
    let t = fixtures::minimal_torus();
    let group = FiniteGroup::cyclic(3);
    let chars = group.abelian_characters().unwrap();
    let irreps: Vec<Irrep> = chars
        .iter()
        .enumerate()
        .map(|(i, (order, exps))| Irrep::Character {
            label: format!("chi{i}"),
            order: *order,
            exps: exps.clone(),
        })
        .collect();
    let edges = fixtures::torus_zm_cocycle_edges(&t, 3);

    let data1 = GroupData::new(group.clone(), irreps.clone()).unwrap();
    let cover1 = CoverComplex::build(t.clone(), data1, &edges).unwrap();
    let ms1 = multisignature(&cover1, ScalarMode::Cyclotomic).unwrap();

    let mut reordered = irreps;
    reordered.rotate_left(1);
    let data2 = GroupData::new(group, reordered).unwrap();
    let cover2 = CoverComplex::build(t.clone(), data2, &edges).unwrap();
    let ms2 = multisignature(&cover2, ScalarMode::Cyclotomic).unwrap();

    let mut sorted1: Vec<(String, i64)> = ms1
        .entries
        .iter()
        .map(|e| (e.label.clone(), e.signature))
        .collect();
    let mut sorted2: Vec<(String, i64)> = ms2
        .entries
        .iter()
        .map(|e| (e.label.clone(), e.signature))
        .collect();
    sorted1.sort();
    sorted2.sort();
    assert_eq!(sorted1, sorted2);
    assert_eq!(ms1.trace_value(), ms2.trace_value());
}

#[test]
fn free_cover_entries_all_vanish() {
    // every shipped cover fixture has sig(base) = 0, so free-cover
    // proportionality asserts that every isotypic entry is zero
    let t = fixtures::minimal_torus();
    for m in [2usize, 3, 4] {
        let group = GroupData::new(FiniteGroup::cyclic(m), Vec::new()).unwrap();
        let edges = fixtures::torus_zm_cocycle_edges(&t, m);
        let cover = CoverComplex::build(t.clone(), group, &edges).unwrap();
        let ms = multisignature(&cover, ScalarMode::Cyclotomic).unwrap();
        for e in &ms.entries {
            assert_eq!(e.signature, 0, "Z/{m} entry {}", e.label);
        }
    }
}

#[test]
fn torus_family_signature_identically_zero() {
    let t = fixtures::minimal_torus();
    let cocycle = fixtures::torus_lattice_cocycle(&t);
    let family = CharacterFamily::uniform(2, 16);
    let samples = evaluate_family(&t, &cocycle, &family).unwrap();
    assert_eq!(samples.len(), 256);
    let mut jump_count = 0;
    for s in &samples {
        assert_eq!(s.signature, 0, "theta {:?}", s.theta);
        if s.homology_ranks[1] != 0 {
            jump_count += 1;
        }
    }
    // off the jump locus the rank function is constantly zero; on this grid
    // only theta = 0 meets the locus
    assert_eq!(jump_count, 1);
}

#[test]
fn subdivision_intertwines_homology_forms() {
    // pull middle cocycles of sd(K) back through the adjoint of the
    // subdivision chain map; the duality pairings agree within 1e-8
    for k in [fixtures::boundary_sphere(2), fixtures::minimal_torus()] {
        let cycle = k.certify_manifold().fundamental_cycle.unwrap();
        let (sd, maps) = k.barycentric_subdivision();
        let sd_cycle = k.subdivide_cycle(&sd, &maps, &cycle).unwrap();
        let hp_k = hpsig_core::poincare::hp_complex_untwisted::<C64>(&k, &cycle).unwrap();
        let hp_sd = hpsig_core::poincare::hp_complex_untwisted::<C64>(&sd, &sd_cycle).unwrap();
        let d = k.dim();
        let l = d / 2;
        let basis = hp_sd.complex.harmonic_basis(l).unwrap();
        if basis.ncols() == 0 {
            continue;
        }
        let f = maps[l].cast::<C64>().to_c64_dense();
        let pulled = f.adjoint() * &basis;
        let q_sd = basis.adjoint() * hp_sd.duality[l].to_c64_dense() * &basis;
        let q_k = pulled.adjoint() * hp_k.duality[l].to_c64_dense() * &pulled;
        let deviation = (q_sd - q_k).norm();
        assert!(
            deviation < 1e-8,
            "forms differ by {deviation} on {:?}",
            k.f_vector()
        );
    }
}

#[test]
fn validate_hp_detects_broken_symmetry() {
    // negative control: scaling one duality matrix breaks axiom (i)
    let t = fixtures::minimal_torus();
    let (mut hp, _) = hp_complex_certified::<Rational>(&t).unwrap();
    hp.duality[0] = hp.duality[0].scale(&<Rational as hpsig_core::scalar::Scalar>::from_i64(2));
    hp.raw_duality = None;
    let report = validate_hp(&hp, false).unwrap();
    assert!(!report.axiom_i);
}
