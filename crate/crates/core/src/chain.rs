//! Chain complexes of based free modules with involution: duals, homology
//! ranks, harmonic representatives, chain-map verification.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::{self, SparseMat};
use nalgebra::DMatrix;
use num_complex::Complex;

/// Tolerances used by the float scalar mode, per the project conventions:
/// identities at 1e-12, ranks at 1e-8 (relative), orthonormality at 1e-10.
pub const TOL_IDENTITY: f64 = 1e-12;
pub const TOL_RANK: f64 = 1e-8;
pub const TOL_ORTHO: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct BasedChainComplex<S: Scalar> {
    /// diffs[p]: E_p -> E_{p-1} for p in 1..=top; diffs[0] is a 0 x rank(E_0)
    /// placeholder.
    diffs: Vec<SparseMat<S>>,
    ranks: Vec<usize>,
}

impl<S: Scalar> BasedChainComplex<S> {
    /// Assemble a complex from its differentials, checking shapes and that
    /// consecutive differentials compose to zero.
    pub fn new(ranks: Vec<usize>, diffs: Vec<SparseMat<S>>) -> Result<Self> {
        assert_eq!(ranks.len(), diffs.len());
        for p in 1..ranks.len() {
            if diffs[p].nrows() != ranks[p - 1] || diffs[p].ncols() != ranks[p] {
                return Err(Error::ShapeMismatch(format!(
                    "differential {p} is {}x{}, expected {}x{}",
                    diffs[p].nrows(),
                    diffs[p].ncols(),
                    ranks[p - 1],
                    ranks[p]
                )));
            }
        }
        let complex = BasedChainComplex { diffs, ranks };
        complex.check_composition()?;
        Ok(complex)
    }

    pub fn from_parts_unchecked(ranks: Vec<usize>, diffs: Vec<SparseMat<S>>) -> Self {
        BasedChainComplex { diffs, ranks }
    }

    fn check_composition(&self) -> Result<()> {
        for p in 2..self.ranks.len() {
            let prod = self.diffs[p - 1].matmul(&self.diffs[p])?;
            if !prod.is_zero_tol(TOL_IDENTITY * self.diffs[p - 1].max_abs().max(1.0)) {
                return Err(Error::ShapeMismatch(format!(
                    "b[{}] b[{}] != 0",
                    p - 1,
                    p
                )));
            }
        }
        Ok(())
    }

    pub fn top(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, p: usize) -> usize {
        self.ranks[p]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn differential(&self, p: usize) -> &SparseMat<S> {
        &self.diffs[p]
    }

    /// The dual complex: modules reindexed p -> top - p, differentials the
    /// adjoints of the originals.
    pub fn dual(&self) -> BasedChainComplex<S> {
        let d = self.top();
        let ranks: Vec<usize> = (0..=d).map(|p| self.ranks[d - p]).collect();
        let mut diffs = Vec::with_capacity(d + 1);
        diffs.push(SparseMat::zero(0, ranks[0]));
        for p in 1..=d {
            // dual differential (dual E)_p -> (dual E)_{p-1} is b*_{d-p+1}
            diffs.push(self.diffs[d - p + 1].adjoint());
        }
        BasedChainComplex { diffs, ranks }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(p, &r)| if p % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    fn boundary_rank(&self, p: usize) -> usize {
        if p == 0 || p > self.top() {
            return 0;
        }
        if S::EXACT {
            sparse::rank(&self.diffs[p])
        } else {
            // threshold rank through singular values
            let m = self.diffs[p].to_c64_dense();
            if m.nrows() == 0 || m.ncols() == 0 {
                return 0;
            }
            let sv = m.svd(false, false).singular_values;
            let top = sv.iter().cloned().fold(0.0, f64::max);
            if top == 0.0 {
                return 0;
            }
            sv.iter().filter(|&&s| s > TOL_RANK * top).count()
        }
    }

    pub fn homology_rank(&self, p: usize) -> Result<usize> {
        if p > self.top() {
            return Err(Error::DegreeOutOfRange {
                degree: p,
                top: self.top(),
            });
        }
        let rp = self.boundary_rank(p);
        let rp1 = if p + 1 <= self.top() {
            self.boundary_rank(p + 1)
        } else {
            0
        };
        Ok(self.ranks[p] - rp - rp1)
    }

    pub fn homology_ranks(&self) -> Result<Vec<usize>> {
        (0..=self.top()).map(|p| self.homology_rank(p)).collect()
    }

    /// Orthonormal basis of `ker b_p  intersect  ker b*_{p+1}` via the
    /// degree-p Hodge Laplacian, computed in complex doubles.
    pub fn harmonic_basis(&self, p: usize) -> Result<DMatrix<Complex<f64>>> {
        if p > self.top() {
            return Err(Error::DegreeOutOfRange {
                degree: p,
                top: self.top(),
            });
        }
        let n = self.ranks[p];
        if n == 0 {
            return Ok(DMatrix::zeros(0, 0));
        }
        let mut lap: DMatrix<Complex<f64>> = DMatrix::zeros(n, n);
        if p >= 1 {
            let b = self.diffs[p].to_c64_dense();
            lap += b.adjoint() * &b;
        }
        if p + 1 <= self.top() {
            let b1 = self.diffs[p + 1].to_c64_dense();
            lap += &b1 * b1.adjoint();
        }
        let eig = lap.symmetric_eigen();
        let max_ev = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
        let cutoff = TOL_RANK * max_ev.max(1e-300);
        let mut cols = Vec::new();
        for (i, &ev) in eig.eigenvalues.iter().enumerate() {
            if ev.abs() <= cutoff || max_ev == 0.0 {
                cols.push(eig.eigenvectors.column(i).into_owned());
            }
        }
        let mut out = DMatrix::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            out.set_column(j, c);
        }
        Ok(out)
    }
}

/// Per-degree deviation of `f b - b f` for a would-be chain map `f: E -> F`.
#[derive(Debug, Clone)]
pub struct ChainMapReport {
    pub max_deviation: f64,
    pub per_degree: Vec<f64>,
    pub is_chain_map: bool,
}

pub fn verify_chain_map<S: Scalar>(
    f: &[SparseMat<S>],
    source: &BasedChainComplex<S>,
    target: &BasedChainComplex<S>,
) -> Result<ChainMapReport> {
    let top = source.top();
    if f.len() != top + 1 || target.top() != top {
        return Err(Error::ShapeMismatch(
            "chain map must supply one matrix per degree".into(),
        ));
    }
    for p in 0..=top {
        if f[p].nrows() != target.rank(p) || f[p].ncols() != source.rank(p) {
            return Err(Error::ShapeMismatch(format!(
                "chain map degree {p}: {}x{} vs target {} source {}",
                f[p].nrows(),
                f[p].ncols(),
                target.rank(p),
                source.rank(p)
            )));
        }
    }
    let mut per_degree = Vec::with_capacity(top);
    for p in 1..=top {
        let lhs = f[p - 1].matmul(source.differential(p))?;
        let rhs = target.differential(p).matmul(&f[p])?;
        per_degree.push(lhs.sub(&rhs)?.max_abs());
    }
    let max_deviation = per_degree.iter().cloned().fold(0.0, f64::max);
    let tol = if S::EXACT { 0.0 } else { TOL_IDENTITY };
    Ok(ChainMapReport {
        max_deviation,
        is_chain_map: max_deviation <= tol,
        per_degree,
    })
}

/// Build the simplicial chain complex of a complex over any scalar.
pub fn simplicial_chain_complex<S: Scalar>(
    k: &crate::simplicial::OrientedSimplicialComplex,
) -> BasedChainComplex<S> {
    let d = k.dim();
    let ranks: Vec<usize> = (0..=d).map(|p| k.simplices(p).len()).collect();
    let mut diffs = Vec::with_capacity(d + 1);
    diffs.push(SparseMat::zero(0, ranks[0]));
    for p in 1..=d {
        diffs.push(k.boundary_matrix(p).unwrap().cast::<S>());
    }
    BasedChainComplex { diffs, ranks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn sphere_homology() {
        let k = fixtures::boundary_sphere(2);
        let c = simplicial_chain_complex::<Q>(&k);
        assert_eq!(c.homology_ranks().unwrap(), vec![1, 0, 1]);
        assert!(c.homology_rank(5).is_err());
    }

    #[test]
    fn torus_homology() {
        let t = fixtures::minimal_torus();
        let c = simplicial_chain_complex::<Q>(&t);
        assert_eq!(c.homology_ranks().unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn cp2_homology() {
        let k = fixtures::complex_projective_plane();
        let c = simplicial_chain_complex::<Q>(&k);
        assert_eq!(c.homology_ranks().unwrap(), vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn euler_characteristic_matches_homology() {
        for k in [
            fixtures::boundary_sphere(3),
            fixtures::minimal_torus(),
            fixtures::projective_plane(),
        ] {
            let c = simplicial_chain_complex::<Q>(&k);
            let from_h: i64 = c
                .homology_ranks()
                .unwrap()
                .iter()
                .enumerate()
                .map(|(p, &h)| if p % 2 == 0 { h as i64 } else { -(h as i64) })
                .sum();
            assert_eq!(c.euler_characteristic(), from_h);
        }
    }

    #[test]
    fn dual_is_involutive() {
        let k = fixtures::minimal_torus();
        let c = simplicial_chain_complex::<Q>(&k);
        let dd = c.dual().dual();
        for p in 1..=c.top() {
            assert_eq!(dd.differential(p), c.differential(p));
        }
        // real matrices: dual differentials are plain transposes
        let dual = c.dual();
        assert_eq!(
            dual.differential(1),
            &c.differential(c.top()).transpose()
        );
    }

    #[test]
    fn harmonic_counts_match_homology() {
        let t = fixtures::minimal_torus();
        let c = simplicial_chain_complex::<num_complex::Complex<f64>>(&t);
        for p in 0..=2 {
            let h = c.harmonic_basis(p).unwrap();
            assert_eq!(h.ncols(), c.homology_rank(p).unwrap(), "degree {p}");
            // orthonormal columns
            if h.ncols() > 0 {
                let gram = h.adjoint() * &h;
                let id = DMatrix::<Complex<f64>>::identity(h.ncols(), h.ncols());
                assert!((gram - id).norm() < TOL_ORTHO);
            }
        }
    }

    #[test]
    fn harmonic_basis_empty_for_acyclic() {
        // a solid triangle is contractible: degree-1 harmonic space is empty
        let k = crate::simplicial::OrientedSimplicialComplex::build(&[vec![0, 1, 2]]).unwrap();
        let c = simplicial_chain_complex::<num_complex::Complex<f64>>(&k);
        assert_eq!(c.harmonic_basis(1).unwrap().ncols(), 0);
        assert_eq!(c.harmonic_basis(2).unwrap().ncols(), 0);
    }

    #[test]
    fn chain_map_identity_and_perturbation() {
        let t = fixtures::minimal_torus();
        let c = simplicial_chain_complex::<Q>(&t);
        let id: Vec<SparseMat<Q>> = (0..=2).map(|p| SparseMat::identity(c.rank(p))).collect();
        let rep = verify_chain_map(&id, &c, &c).unwrap();
        assert!(rep.is_chain_map);
        assert_eq!(rep.max_deviation, 0.0);

        // perturb one entry by 1
        let mut bad = id.clone();
        bad[1] = bad[1]
            .add(&SparseMat::from_triplets(
                c.rank(1),
                c.rank(1),
                [(0usize, 1usize, <Q as Scalar>::from_i64(1))],
            ))
            .unwrap();
        let rep = verify_chain_map(&bad, &c, &c).unwrap();
        assert!(!rep.is_chain_map);
        assert!(rep.max_deviation > 0.0);
    }

    #[test]
    fn subdivision_is_chain_map_via_report() {
        let t = fixtures::minimal_torus();
        let (sd, maps) = t.barycentric_subdivision();
        let source = simplicial_chain_complex::<Q>(&t);
        let target = simplicial_chain_complex::<Q>(&sd);
        let f: Vec<SparseMat<Q>> = maps.iter().map(|m| m.cast::<Q>()).collect();
        let rep = verify_chain_map(&f, &source, &target).unwrap();
        assert!(rep.is_chain_map);
    }
}
