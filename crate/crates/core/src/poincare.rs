//! Cap-product duality, symmetrization, and validation of the
//! Hilbert-Poincare axioms: (i) symmetry, (ii) the chain-map relation, and
//! (iii) the homology isomorphism.

use crate::chain::{BasedChainComplex, TOL_IDENTITY, TOL_RANK};
use crate::coeff::{transported_complex, Transport, TrivialTransport};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::simplicial::{FundamentalCycle, OrientedSimplicialComplex};
use crate::sparse::SparseMat;
use nalgebra::DMatrix;
use num_complex::Complex;

/// Chain complex with symmetrized duality `Dtilde[p]: E_p -> E_{d-p}`.
#[derive(Clone, Debug)]
pub struct HilbertPoincareComplex<S: Scalar> {
    pub complex: BasedChainComplex<S>,
    pub duality: Vec<SparseMat<S>>,
    /// The raw cap product before symmetrization, kept for the exactness
    /// check of axiom (ii) in its original form.
    pub raw_duality: Option<Vec<SparseMat<S>>>,
}

impl<S: Scalar> HilbertPoincareComplex<S> {
    pub fn dimension(&self) -> usize {
        self.complex.top()
    }
}

/// Cap product with the fundamental cycle, with coefficients transported
/// along anchors: a facet `[v0..vd]` with sign `eps` contributes
/// `eps * xi([v0..vp]) * [vp..vd]` for each degree p.
pub fn cap_duality<S: Scalar, T: Transport<S>>(
    k: &OrientedSimplicialComplex,
    cycle: &FundamentalCycle,
    transport: &T,
) -> Result<Vec<SparseMat<S>>> {
    let d = k.dim();
    if !k.cycle_closes(cycle) {
        return Err(Error::NotClosedOriented(
            "fundamental cycle does not close".into(),
        ));
    }
    let m = transport.dim();
    let mut triplets: Vec<Vec<(usize, usize, S)>> = (0..=d).map(|_| Vec::new()).collect();
    for (fi, facet) in k.facets().iter().enumerate() {
        let eps = cycle.coefficient(fi);
        for p in 0..=d {
            let front = &facet[0..=p];
            let back = &facet[p..=d];
            let col = k.index_of(p, front).expect("closure");
            let row = k.index_of(d - p, back).expect("closure");
            let block = transport.block(facet[p], facet[0])?;
            for (bi, brow) in block.iter().enumerate() {
                for (bj, v) in brow.iter().enumerate() {
                    if !v.is_zero() {
                        triplets[p].push((
                            row * m + bi,
                            col * m + bj,
                            S::from_i64(eps) * v.clone(),
                        ));
                    }
                }
            }
        }
    }
    Ok((0..=d)
        .map(|p| {
            SparseMat::from_triplets(
                k.simplices(d - p).len() * m,
                k.simplices(p).len() * m,
                std::mem::take(&mut triplets[p]),
            )
        })
        .collect())
}

/// `Dtilde[p] = (D[p] + (-1)^{(d-p)p} D[d-p]^*) / 2`, which satisfies
/// axiom (i) by construction.
pub fn symmetrize<S: Scalar>(duality: &[SparseMat<S>]) -> Result<Vec<SparseMat<S>>> {
    let d = duality.len() - 1;
    let half = S::from_ratio(1, 2);
    (0..=d)
        .map(|p| {
            let sign = if ((d - p) * p) % 2 == 0 { 1 } else { -1 };
            let adj = duality[d - p].adjoint().scale(&S::from_i64(sign));
            Ok(duality[p].add(&adj)?.scale(&half))
        })
        .collect()
}

/// Assemble the full Hilbert-Poincare structure of a closed oriented
/// complex over the given coefficient transport.
pub fn hp_complex<S: Scalar, T: Transport<S>>(
    k: &OrientedSimplicialComplex,
    cycle: &FundamentalCycle,
    transport: &T,
) -> Result<HilbertPoincareComplex<S>> {
    let complex = transported_complex(k, transport)?;
    let raw = cap_duality(k, cycle, transport)?;
    let duality = symmetrize(&raw)?;
    Ok(HilbertPoincareComplex {
        complex,
        duality,
        raw_duality: Some(raw),
    })
}

/// Untwisted variant of [`hp_complex`].
pub fn hp_complex_untwisted<S: Scalar>(
    k: &OrientedSimplicialComplex,
    cycle: &FundamentalCycle,
) -> Result<HilbertPoincareComplex<S>> {
    hp_complex(k, cycle, &TrivialTransport)
}

/// Certify and build in one step; rejects non-manifold input.
pub fn hp_complex_certified<S: Scalar>(
    k: &OrientedSimplicialComplex,
) -> Result<(HilbertPoincareComplex<S>, FundamentalCycle)> {
    let cert = k.certify_manifold();
    let cycle = cert.fundamental_cycle.ok_or_else(|| {
        Error::NotClosedOriented(format!(
            "pseudomanifold={}, closed={}, orientable={}",
            cert.is_pseudomanifold, cert.is_closed, cert.is_orientable
        ))
    })?;
    let hp = hp_complex_untwisted(k, &cycle)?;
    Ok((hp, cycle))
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    /// max |Dtilde[d-p]^* - (-1)^{(d-p)p} Dtilde[p]| over p
    pub symmetry_residual: f64,
    /// max |Dtilde b^* + (-1)^p b Dtilde| over p, for the symmetrized duality
    pub chain_relation_residual: f64,
    /// same residual for the raw cap product, when available
    pub raw_chain_relation_residual: Option<f64>,
    /// per-degree homology ranks of the complex
    pub homology_ranks: Vec<usize>,
    /// rank H_p == rank H_{d-p} for all p
    pub rank_symmetry: bool,
    /// smallest singular value ratio of the induced map on harmonic spaces,
    /// when the thorough (dense) check ran
    pub harmonic_min_ratio: Option<f64>,
    pub axiom_i: bool,
    pub axiom_ii: bool,
    pub axiom_iii: bool,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.axiom_i && self.axiom_ii && self.axiom_iii
    }
}

fn chain_relation_residual<S: Scalar>(
    complex: &BasedChainComplex<S>,
    duality: &[SparseMat<S>],
) -> Result<f64> {
    let d = complex.top();
    let mut worst: f64 = 0.0;
    for p in 0..d {
        // D[p+1] b*_{p+1} + (-1)^p b_{d-p} D[p] : E_p -> E_{d-p-1}
        let first = duality[p + 1].matmul(&complex.differential(p + 1).adjoint())?;
        let sign = if p % 2 == 0 { 1 } else { -1 };
        let second = complex.differential(d - p).matmul(&duality[p])?;
        let total = first.add(&second.scale(&S::from_i64(sign)))?;
        worst = worst.max(total.max_abs());
    }
    Ok(worst)
}

/// Validate the three axioms. `thorough` additionally checks invertibility
/// of the induced map on harmonic representatives (dense, fixture scale).
pub fn validate_hp<S: Scalar>(
    hp: &HilbertPoincareComplex<S>,
    thorough: bool,
) -> Result<AxiomReport> {
    let d = hp.dimension();
    let complex = &hp.complex;

    let mut symmetry_residual: f64 = 0.0;
    for p in 0..=d {
        let sign = if ((d - p) * p) % 2 == 0 { 1 } else { -1 };
        let lhs = hp.duality[d - p].adjoint();
        let rhs = hp.duality[p].scale(&S::from_i64(sign));
        symmetry_residual = symmetry_residual.max(lhs.sub(&rhs)?.max_abs());
    }

    let chain_res = chain_relation_residual(complex, &hp.duality)?;
    let raw_res = hp
        .raw_duality
        .as_ref()
        .map(|raw| chain_relation_residual(complex, raw))
        .transpose()?;

    let homology_ranks = complex.homology_ranks()?;
    let rank_symmetry = (0..=d).all(|p| homology_ranks[p] == homology_ranks[d - p]);

    let harmonic_min_ratio = if thorough {
        let mut worst_ratio: f64 = f64::INFINITY;
        for p in 0..=d {
            let target = complex.harmonic_basis(p)?;
            let source = complex.harmonic_basis(d - p)?;
            if target.ncols() != source.ncols() {
                worst_ratio = 0.0;
                continue;
            }
            if source.ncols() == 0 {
                continue;
            }
            let dmat = hp.duality[d - p].to_c64_dense();
            let induced: DMatrix<Complex<f64>> = target.adjoint() * dmat * source;
            let sv = induced.svd(false, false).singular_values;
            let smax = sv.iter().cloned().fold(0.0, f64::max);
            let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
            if smax == 0.0 {
                worst_ratio = 0.0;
            } else {
                worst_ratio = worst_ratio.min(smin / smax);
            }
        }
        Some(if worst_ratio.is_finite() { worst_ratio } else { 1.0 })
    } else {
        None
    };

    let tol = if S::EXACT { 0.0 } else { TOL_IDENTITY };
    let axiom_i = symmetry_residual <= tol;
    let axiom_ii = chain_res <= tol;
    let axiom_iii =
        rank_symmetry && harmonic_min_ratio.map_or(true, |r| r > TOL_RANK);
    Ok(AxiomReport {
        symmetry_residual,
        chain_relation_residual: chain_res,
        raw_chain_relation_residual: raw_res,
        homology_ranks,
        rank_symmetry,
        harmonic_min_ratio,
        axiom_i,
        axiom_ii,
        axiom_iii,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn constant_cochain_caps_to_cycle() {
        let k = fixtures::boundary_sphere(2);
        let cycle = k.certify_manifold().fundamental_cycle.unwrap();
        let raw = cap_duality::<Q, _>(&k, &cycle, &TrivialTransport).unwrap();
        // D(1) where 1 is the constant 0-cochain: sum of all columns of D[0]
        
        let n0 = k.simplices(0).len();
        let ones = SparseMat::from_triplets(
            n0,
            1,
            (0..n0).map(|r| (r, 0usize, <Q as Scalar>::from_i64(1))),
        );
        let image = raw[0].matmul(&ones).unwrap();
        for (j, facet) in k.facets().iter().enumerate() {
            let _ = facet;
            let got = image.get(j, 0);
            assert_eq!(got, <Q as Scalar>::from_i64(cycle.coefficient(j)));
        }
    }

    #[test]
    fn axioms_on_small_spheres_exact() {
        for dim in [1usize, 2, 3, 4] {
            let k = fixtures::boundary_sphere(dim);
            let (hp, _) = hp_complex_certified::<Q>(&k).unwrap();
            let report = validate_hp(&hp, true).unwrap();
            assert_eq!(report.symmetry_residual, 0.0, "axiom (i) at d={dim}");
            assert_eq!(report.chain_relation_residual, 0.0, "axiom (ii) at d={dim}");
            assert_eq!(
                report.raw_chain_relation_residual,
                Some(0.0),
                "raw axiom (ii) at d={dim}"
            );
            assert!(report.axiom_iii, "axiom (iii) at d={dim}");
            assert!(report.all_pass());
        }
    }

    #[test]
    fn axioms_on_torus_exact() {
        let t = fixtures::minimal_torus();
        let (hp, _) = hp_complex_certified::<Q>(&t).unwrap();
        let report = validate_hp(&hp, true).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.homology_ranks, vec![1, 2, 1]);
    }

    #[test]
    fn symmetrize_is_idempotent_on_symmetric_input() {
        let t = fixtures::minimal_torus();
        let (hp, _) = hp_complex_certified::<Q>(&t).unwrap();
        // Dtilde already satisfies (i); symmetrizing again changes nothing
        let again = symmetrize(&hp.duality).unwrap();
        for p in 0..=2 {
            assert_eq!(again[p], hp.duality[p]);
        }
    }

    #[test]
    fn capped_one_equals_cycle_before_and_after_symmetrization() {
        // in top degree there are no boundaries, so [Dtilde(1)] = [C] means
        // exact equality of chains; it holds for the raw cap by definition
        // and survives the averaging.
        for k in [fixtures::boundary_sphere(2), fixtures::minimal_torus()] {
            let (hp, cycle) = hp_complex_certified::<Q>(&k).unwrap();
            let n0 = k.simplices(0).len();
            let nf = k.facets().len();
            let ones = SparseMat::from_triplets(
                n0,
                1,
                (0..n0).map(|r| (r, 0usize, <Q as Scalar>::from_i64(1))),
            );
            let cyc = SparseMat::from_triplets(
                nf,
                1,
                cycle
                    .coefficients()
                    .iter()
                    .enumerate()
                    .map(|(r, c)| (r, 0usize, <Q as Scalar>::from_i64(*c as i64))),
            );
            for duality in [&hp.duality, hp.raw_duality.as_ref().unwrap()] {
                let capped = duality[0].matmul(&ones).unwrap();
                assert_eq!(capped, cyc);
            }
        }
    }

    #[test]
    fn zeroed_duality_fails_axiom_iii() {
        let k = fixtures::boundary_sphere(2);
        let (mut hp, _) = hp_complex_certified::<Q>(&k).unwrap();
        for m in hp.duality.iter_mut() {
            *m = SparseMat::zero(m.nrows(), m.ncols());
        }
        hp.raw_duality = None;
        let report = validate_hp(&hp, true).unwrap();
        assert!(!report.axiom_iii);
        assert!(!report.all_pass());
    }

    #[test]
    fn rp2_rejected_upstream() {
        let k = fixtures::projective_plane();
        let err = hp_complex_certified::<Q>(&k).unwrap_err();
        assert!(matches!(err, Error::NotClosedOriented(_)));
    }
}
