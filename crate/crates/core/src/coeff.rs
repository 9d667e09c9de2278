//! Involutive coefficient systems: trivial coefficients, fiber transport
//! for twisted complexes, and character families for Z^n covers evaluated
//! on the unitary torus.

use crate::chain::{BasedChainComplex, TOL_IDENTITY};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::simplicial::{OrientedSimplicialComplex, Vertex};
use crate::sparse::SparseMat;
use num_complex::Complex;
use std::collections::BTreeMap;

/// Small dense block, row-major.
pub type Block<S> = Vec<Vec<S>>;

/// Fiber transport between anchor vertices. Matrices over a coefficient
/// system are assembled from blocks `transport(to, from)`, one per incidence.
pub trait Transport<S: Scalar> {
    fn dim(&self) -> usize;
    /// Transport block from the fiber over `from` to the fiber over `to`.
    fn block(&self, to: Vertex, from: Vertex) -> Result<Block<S>>;
}

/// Rank-one trivial transport: every block is the 1x1 identity.
pub struct TrivialTransport;

impl<S: Scalar> Transport<S> for TrivialTransport {
    fn dim(&self) -> usize {
        1
    }
    fn block(&self, _to: Vertex, _from: Vertex) -> Result<Block<S>> {
        Ok(vec![vec![S::one()]])
    }
}

/// Boundary matrix of the complex with coefficients transported along the
/// anchor (least-vertex) rule.
pub fn transported_boundary<S: Scalar, T: Transport<S>>(
    k: &OrientedSimplicialComplex,
    transport: &T,
    p: usize,
) -> Result<SparseMat<S>> {
    let m = transport.dim();
    let rows = k.simplices(p - 1).len() * m;
    let cols = k.simplices(p).len() * m;
    let mut triplets: Vec<(usize, usize, S)> = Vec::new();
    for (j, s) in k.simplices(p).iter().enumerate() {
        let anchor = s[0];
        let mut face = s.clone();
        for i in 0..s.len() {
            let removed = face.remove(i);
            let r = k.index_of(p - 1, &face).expect("closure");
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let block = transport.block(face[0], anchor)?;
            for (bi, row) in block.iter().enumerate() {
                for (bj, v) in row.iter().enumerate() {
                    if !v.is_zero() {
                        triplets.push((
                            r * m + bi,
                            j * m + bj,
                            S::from_i64(sign) * v.clone(),
                        ));
                    }
                }
            }
            face.insert(i, removed);
        }
    }
    Ok(SparseMat::from_triplets(rows, cols, triplets))
}

/// The full transported chain complex of a simplicial complex.
pub fn transported_complex<S: Scalar, T: Transport<S>>(
    k: &OrientedSimplicialComplex,
    transport: &T,
) -> Result<BasedChainComplex<S>> {
    let d = k.dim();
    let m = transport.dim();
    let ranks: Vec<usize> = (0..=d).map(|p| k.simplices(p).len() * m).collect();
    let mut diffs = Vec::with_capacity(d + 1);
    diffs.push(SparseMat::zero(0, ranks[0]));
    for p in 1..=d {
        diffs.push(transported_boundary(k, transport, p)?);
    }
    BasedChainComplex::new(ranks, diffs)
}

/// Flat Z^n-valued edge cocycle presented on the base complex.
#[derive(Clone, Debug)]
pub struct IntVecCocycle {
    pub rank: usize,
    edges: BTreeMap<(Vertex, Vertex), Vec<i64>>,
}

impl IntVecCocycle {
    /// Validate antisymmetry bookkeeping and additive flatness over every
    /// triangle of the base.
    pub fn build(
        base: &OrientedSimplicialComplex,
        rank: usize,
        entries: &[(Vertex, Vertex, Vec<i64>)],
    ) -> Result<Self> {
        let mut edges: BTreeMap<(Vertex, Vertex), Vec<i64>> = BTreeMap::new();
        for (v, w, m) in entries {
            if m.len() != rank {
                return Err(Error::ShapeMismatch(format!(
                    "cocycle value on ({v},{w}) has rank {} != {rank}",
                    m.len()
                )));
            }
            let (key, val) = if v < w {
                ((*v, *w), m.clone())
            } else {
                ((*w, *v), m.iter().map(|x| -x).collect())
            };
            edges.insert(key, val);
        }
        for e in base.simplices(1) {
            if !edges.contains_key(&(e[0], e[1])) {
                return Err(Error::MissingEdge(e[0], e[1]));
            }
        }
        let cocycle = IntVecCocycle { rank, edges };
        if base.dim() >= 2 {
            for t in base.simplices(2) {
                let sum: Vec<i64> = (0..rank)
                    .map(|i| {
                        cocycle.value(t[0], t[1])[i] + cocycle.value(t[1], t[2])[i]
                            - cocycle.value(t[0], t[2])[i]
                    })
                    .collect();
                if sum.iter().any(|x| *x != 0) {
                    return Err(Error::CocycleNotFlat(t.clone()));
                }
            }
        }
        Ok(cocycle)
    }

    /// Winding vector of the transport from `from` to `to` along an edge.
    pub fn value(&self, to: Vertex, from: Vertex) -> Vec<i64> {
        if to == from {
            return vec![0; self.rank];
        }
        if to < from {
            self.edges[&(to, from)].clone()
        } else {
            self.edges[&(from, to)].iter().map(|x| -x).collect()
        }
    }

    /// Additive holonomy along a vertex path.
    pub fn holonomy(&self, base: &OrientedSimplicialComplex, path: &[Vertex]) -> Result<Vec<i64>> {
        let mut acc = vec![0i64; self.rank];
        for pair in path.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b {
                continue;
            }
            let key = if a < b { [a, b] } else { [b, a] };
            if base.index_of(1, &key).is_none() {
                return Err(Error::NotAPath(a, b));
            }
            let v = self.value(b, a);
            for i in 0..self.rank {
                acc[i] += v[i];
            }
        }
        Ok(acc)
    }
}

/// Transport by the unitary character `m -> exp(i <theta, m>)`.
pub struct CharacterTransport<'a> {
    pub cocycle: &'a IntVecCocycle,
    pub theta: Vec<f64>,
}

impl<'a> Transport<Complex<f64>> for CharacterTransport<'a> {
    fn dim(&self) -> usize {
        1
    }
    fn block(&self, to: Vertex, from: Vertex) -> Result<Block<Complex<f64>>> {
        let m = self.cocycle.value(to, from);
        let phase: f64 = m
            .iter()
            .zip(self.theta.iter())
            .map(|(k, t)| *k as f64 * t)
            .sum();
        Ok(vec![vec![Complex::from_polar(1.0, phase)]])
    }
}

/// Sparse matrix of Laurent polynomials in n commuting unit variables.
#[derive(Clone, Debug, Default)]
pub struct LaurentMatrix {
    pub nrows: usize,
    pub ncols: usize,
    entries: BTreeMap<(usize, usize), BTreeMap<Vec<i64>, Complex<f64>>>,
}

impl LaurentMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        LaurentMatrix {
            nrows,
            ncols,
            entries: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, r: usize, c: usize, exponent: Vec<i64>, coeff: Complex<f64>) {
        let slot = self
            .entries
            .entry((r, c))
            .or_default()
            .entry(exponent)
            .or_insert(Complex::new(0.0, 0.0));
        *slot += coeff;
    }

    /// The Laurent involution: conjugate transpose with `t -> t^{-1}`.
    pub fn involution(&self) -> LaurentMatrix {
        let mut out = LaurentMatrix::zero(self.ncols, self.nrows);
        for ((r, c), poly) in &self.entries {
            for (expo, coeff) in poly {
                out.add_term(*c, *r, expo.iter().map(|e| -e).collect(), coeff.conj());
            }
        }
        out
    }

    pub fn matmul(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        if self.ncols != other.nrows {
            return Err(Error::ShapeMismatch("laurent matmul".into()));
        }
        let mut out = LaurentMatrix::zero(self.nrows, other.ncols);
        // index other by row for the inner loop
        let mut by_row: BTreeMap<usize, Vec<(usize, &BTreeMap<Vec<i64>, Complex<f64>>)>> =
            BTreeMap::new();
        for ((r, c), poly) in &other.entries {
            by_row.entry(*r).or_default().push((*c, poly));
        }
        for ((r, k), poly_a) in &self.entries {
            if let Some(row) = by_row.get(k) {
                for (c, poly_b) in row {
                    for (ea, ca) in poly_a {
                        for (eb, cb) in *poly_b {
                            let expo: Vec<i64> =
                                ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                            out.add_term(*r, *c, expo, ca * cb);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::ShapeMismatch("laurent add".into()));
        }
        let mut out = self.clone();
        for ((r, c), poly) in &other.entries {
            for (expo, coeff) in poly {
                out.add_term(*r, *c, expo.clone(), *coeff);
            }
        }
        Ok(out)
    }

    /// Evaluate at `z_j = exp(i theta_j)`.
    pub fn eval(&self, theta: &[f64]) -> SparseMat<Complex<f64>> {
        let mut triplets = Vec::new();
        for ((r, c), poly) in &self.entries {
            let mut acc = Complex::new(0.0, 0.0);
            for (expo, coeff) in poly {
                let phase: f64 = expo
                    .iter()
                    .zip(theta.iter())
                    .map(|(k, t)| *k as f64 * t)
                    .sum();
                acc += coeff * Complex::from_polar(1.0, phase);
            }
            if acc.norm() > 0.0 {
                triplets.push((*r, *c, acc));
            }
        }
        SparseMat::from_triplets(self.nrows, self.ncols, triplets)
    }
}

/// Laurent-coefficient boundary matrix of a Z^n cover.
pub fn laurent_boundary(
    base: &OrientedSimplicialComplex,
    cocycle: &IntVecCocycle,
    p: usize,
) -> Result<LaurentMatrix> {
    if p == 0 || p > base.dim() {
        return Err(Error::DegreeOutOfRange {
            degree: p,
            top: base.dim(),
        });
    }
    let mut out = LaurentMatrix::zero(base.simplices(p - 1).len(), base.simplices(p).len());
    for (j, s) in base.simplices(p).iter().enumerate() {
        let anchor = s[0];
        let mut face = s.clone();
        for i in 0..s.len() {
            let removed = face.remove(i);
            let r = base.index_of(p - 1, &face).expect("closure");
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            out.add_term(
                r,
                j,
                cocycle.value(face[0], anchor),
                Complex::new(sign, 0.0),
            );
            face.insert(i, removed);
        }
    }
    Ok(out)
}

/// Sample grid on the character torus: `samples` uniform points per circle
/// factor (theta = 0 is always the first sample).
#[derive(Clone, Debug)]
pub struct CharacterFamily {
    pub rank: usize,
    pub samples: Vec<Vec<f64>>,
}

impl CharacterFamily {
    pub fn uniform(rank: usize, samples_per_circle: usize) -> Self {
        let n = samples_per_circle.max(1);
        let mut samples = vec![vec![]];
        for _ in 0..rank {
            let mut next = Vec::new();
            for s in &samples {
                for k in 0..n {
                    let mut t = s.clone();
                    t.push(2.0 * std::f64::consts::PI * k as f64 / n as f64);
                    next.push(t);
                }
            }
            samples = next;
        }
        CharacterFamily { rank, samples }
    }
}

/// One evaluated sample: twisted homology ranks per degree and, when the
/// base is closed oriented and even-dimensional, the middle signature.
#[derive(Clone, Debug)]
pub struct FamilySample {
    pub theta: Vec<f64>,
    pub homology_ranks: Vec<usize>,
    pub signature: i64,
}

/// Evaluate the per-sample twisted boundary matrices over the grid and
/// record ranks and signatures.
pub fn evaluate_family(
    base: &OrientedSimplicialComplex,
    cocycle: &IntVecCocycle,
    family: &CharacterFamily,
) -> Result<Vec<FamilySample>> {
    let d = base.dim();
    let cert = base.certify_manifold();
    let cycle = cert.fundamental_cycle.clone();
    let laurent: Vec<LaurentMatrix> = (1..=d)
        .map(|p| laurent_boundary(base, cocycle, p))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(family.samples.len());
    for theta in &family.samples {
        let ranks: Vec<usize> = (0..=d).map(|p| base.simplices(p).len()).collect();
        let mut diffs = Vec::with_capacity(d + 1);
        diffs.push(SparseMat::zero(0, ranks[0]));
        for p in 1..=d {
            diffs.push(laurent[p - 1].eval(theta));
        }
        let complex = BasedChainComplex::new(ranks, diffs)?;
        let homology_ranks = complex.homology_ranks()?;
        let signature = match (&cycle, d % 2) {
            (Some(c), 0) => {
                let transport = CharacterTransport {
                    cocycle,
                    theta: theta.clone(),
                };
                let hp = crate::poincare::hp_complex(base, c, &transport)?;
                crate::signature::signature_complex(&hp)?.signature
            }
            _ => 0,
        };
        out.push(FamilySample {
            theta: theta.clone(),
            homology_ranks,
            signature,
        });
    }
    Ok(out)
}

/// Check that evaluation is a *-homomorphism at a sample: products, sums,
/// and the Laurent involution are intertwined with matrix operations.
pub fn star_hom_residual(a: &LaurentMatrix, b: &LaurentMatrix, theta: &[f64]) -> Result<f64> {
    let prod = a.matmul(b)?.eval(theta);
    let prod_eval = a.eval(theta).matmul(&b.eval(theta))?;
    let r1 = prod.sub(&prod_eval)?.max_abs();
    let inv = a.involution().eval(theta);
    let adj = a.eval(theta).adjoint();
    let r2 = inv.sub(&adj)?.max_abs();
    let sum = a.add(a)?.eval(theta);
    let sum_eval = a.eval(theta).add(&a.eval(theta))?;
    let r3 = sum.sub(&sum_eval)?.max_abs();
    Ok(r1.max(r2).max(r3))
}

#[allow(unused)]
fn tol() -> f64 {
    TOL_IDENTITY
}
