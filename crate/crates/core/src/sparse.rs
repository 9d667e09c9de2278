//! Sparse matrices over a [`Scalar`], plus the pivoting elimination engine
//! used for exact ranks and for reducing large chain complexes.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

/// Column-major sparse matrix; each column holds `(row, value)` pairs sorted
/// by row, with no explicit zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat<S> {
    nrows: usize,
    ncols: usize,
    cols: Vec<Vec<(usize, S)>>,
}

impl<S> SparseMat<S> {
    pub fn nrows(&self) -> usize {
        self.nrows
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }
    pub fn col(&self, j: usize) -> &[(usize, S)] {
        &self.cols[j]
    }
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(r, v)| (*r, j, v)))
    }
}

impl<S: Clone + Zero> SparseMat<S> {
    pub fn get(&self, r: usize, c: usize) -> S {
        self.cols[c]
            .binary_search_by_key(&r, |e| e.0)
            .map(|i| self.cols[c][i].1.clone())
            .unwrap_or_else(|_| S::zero())
    }
}

impl<S: Scalar> SparseMat<S> {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMat {
            nrows,
            ncols,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for j in 0..n {
            m.cols[j].push((j, S::one()));
        }
        m
    }

    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, S)>,
    {
        let mut acc: Vec<BTreeMap<usize, S>> = vec![BTreeMap::new(); ncols];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet out of bounds");
            let slot = acc[c].entry(r).or_insert_with(S::zero);
            *slot = slot.clone() + v;
        }
        let cols = acc
            .into_iter()
            .map(|col| col.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMat { nrows, ncols, cols }
    }

    pub fn is_zero_tol(&self, tol: f64) -> bool {
        self.cols
            .iter()
            .all(|c| c.iter().all(|(_, v)| v.is_zero_tol(tol)))
    }

    pub fn max_abs(&self) -> f64 {
        self.cols
            .iter()
            .flat_map(|c| c.iter())
            .map(|(_, v)| v.abs_f64())
            .fold(0.0, f64::max)
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<Vec<(usize, S)>> = vec![Vec::new(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                cols[*r].push((j, v.clone()));
            }
        }
        SparseMat {
            nrows: self.ncols,
            ncols: self.nrows,
            cols,
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut t = self.transpose();
        for col in t.cols.iter_mut() {
            for (_, v) in col.iter_mut() {
                *v = v.conj();
            }
        }
        t
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut m = self.clone();
        for col in m.cols.iter_mut() {
            for (_, v) in col.iter_mut() {
                *v = v.clone() * s.clone();
            }
            col.retain(|(_, v)| !v.is_zero());
        }
        m
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SparseMat<T> {
        let cols = self
            .cols
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(r, v)| (*r, f(v)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        SparseMat {
            nrows: self.nrows,
            ncols: self.ncols,
            cols,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::ShapeMismatch(format!(
                "add {}x{} vs {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut cols = Vec::with_capacity(self.ncols);
        for j in 0..self.ncols {
            let mut acc: BTreeMap<usize, S> = self.cols[j].iter().cloned().collect();
            for (r, v) in &other.cols[j] {
                let slot = acc.entry(*r).or_insert_with(S::zero);
                *slot = slot.clone() + v.clone();
            }
            cols.push(
                acc.into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .collect::<Vec<_>>(),
            );
        }
        Ok(SparseMat {
            nrows: self.nrows,
            ncols: self.ncols,
            cols,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&(-S::one())))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::ShapeMismatch(format!(
                "mul {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut cols = Vec::with_capacity(other.ncols);
        for j in 0..other.ncols {
            let mut acc: BTreeMap<usize, S> = BTreeMap::new();
            for (k, w) in &other.cols[j] {
                for (r, v) in &self.cols[*k] {
                    let slot = acc.entry(*r).or_insert_with(S::zero);
                    *slot = slot.clone() + v.clone() * w.clone();
                }
            }
            cols.push(
                acc.into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .collect::<Vec<_>>(),
            );
        }
        Ok(SparseMat {
            nrows: self.nrows,
            ncols: other.ncols,
            cols,
        })
    }

    /// Apply to a sparsely supported vector keyed by row index.
    pub fn apply_map(&self, v: &BTreeMap<usize, S>) -> BTreeMap<usize, S> {
        let mut out: BTreeMap<usize, S> = BTreeMap::new();
        for (j, x) in v {
            for (r, a) in &self.cols[*j] {
                let slot = out.entry(*r).or_insert_with(S::zero);
                *slot = slot.clone() + a.clone() * x.clone();
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn to_c64_dense(&self) -> DMatrix<Complex<f64>> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (j, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                m[(*r, j)] = v.to_c64();
            }
        }
        m
    }
}

impl SparseMat<i64> {
    pub fn cast<S: Scalar>(&self) -> SparseMat<S> {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, S::from_i64(*v))).collect())
            .collect();
        SparseMat {
            nrows: self.nrows,
            ncols: self.ncols,
            cols,
        }
    }

    pub fn from_i64_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let mut acc: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); ncols];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet out of bounds");
            *acc[c].entry(r).or_insert(0) += v;
        }
        let cols = acc
            .into_iter()
            .map(|col| col.into_iter().filter(|(_, v)| *v != 0).collect())
            .collect();
        SparseMat { nrows, ncols, cols }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn matmul_i64(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::ShapeMismatch(format!(
                "mul {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut cols = Vec::with_capacity(other.ncols);
        for j in 0..other.ncols {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (k, w) in &other.cols[j] {
                for (r, v) in &self.cols[*k] {
                    *acc.entry(*r).or_insert(0) += v * w;
                }
            }
            cols.push(
                acc.into_iter()
                    .filter(|(_, v)| *v != 0)
                    .collect::<Vec<_>>(),
            );
        }
        Ok(SparseMat {
            nrows: self.nrows,
            ncols: other.ncols,
            cols,
        })
    }
}

/// One recorded pivot of an elimination run: the consumed row, the inverse of
/// the pivot value, and the rest of the pivot column at elimination time.
pub struct PivotEvent<S> {
    pub row: usize,
    pub inv_u: S,
    pub col_rest: Vec<(usize, S)>,
}

pub struct ElimOutcome<S> {
    pub rank: usize,
    pub alive_rows: Vec<usize>,
    pub alive_cols: Vec<usize>,
    pub events: Vec<PivotEvent<S>>,
}

pub struct ElimOptions {
    pub record: bool,
    /// Entries with |v| below this are dropped after updates (float modes).
    pub drop_tol: f64,
    /// Entries with |v| below this are not eligible pivots (float modes).
    pub pivot_tol: f64,
}

impl Default for ElimOptions {
    fn default() -> Self {
        ElimOptions {
            record: false,
            drop_tol: 0.0,
            pivot_tol: 0.0,
        }
    }
}

/// Full pivoting elimination of a sparse matrix.
///
/// Pivots are chosen Markowitz-style: rows with the fewest entries first,
/// then within the row the column minimizing fill, preferring entries of
/// unit modulus so that exact integer data stays integral. Deterministic:
/// ties break on indices, and all iteration is over ordered containers.
pub fn eliminate<S: Scalar>(
    mat: &SparseMat<S>,
    dead_rows: Option<&[bool]>,
    dead_cols: Option<&[bool]>,
    opts: &ElimOptions,
) -> ElimOutcome<S> {
    let nrows = mat.nrows();
    let ncols = mat.ncols();
    let row_ok = |r: usize| dead_rows.map_or(true, |d| !d[r]);
    let col_ok = |c: usize| dead_cols.map_or(true, |d| !d[c]);

    let mut rows: Vec<BTreeMap<usize, S>> = vec![BTreeMap::new(); nrows];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (r, c, v) in mat.triplets() {
        if row_ok(r) && col_ok(c) && !v.is_zero_tol(opts.drop_tol) {
            rows[r].insert(c, v.clone());
            col_rows[c].insert(r);
        }
    }

    let mut row_alive: Vec<bool> = (0..nrows).map(row_ok).collect();
    let mut col_alive: Vec<bool> = (0..ncols).map(col_ok).collect();

    let mut heap: BinaryHeap<std::cmp::Reverse<(usize, usize)>> = BinaryHeap::new();
    for r in 0..nrows {
        if row_alive[r] && !rows[r].is_empty() {
            heap.push(std::cmp::Reverse((rows[r].len(), r)));
        }
    }

    let mut events: Vec<PivotEvent<S>> = Vec::new();
    let mut rank = 0usize;

    while let Some(std::cmp::Reverse((len, r))) = heap.pop() {
        if !row_alive[r] || rows[r].is_empty() || rows[r].len() != len {
            continue; // stale entry
        }
        // pick the pivot column in this row
        let mut best: Option<(u8, usize, usize)> = None; // (non-unit flag, col fill, col)
        for (&c, v) in rows[r].iter() {
            let a = v.abs_f64();
            if !S::EXACT && a < opts.pivot_tol {
                continue;
            }
            let unit = if (a - 1.0).abs() <= 1e-9 { 0u8 } else { 1u8 };
            let key = (unit, col_rows[c].len(), c);
            if best.map_or(true, |b| key < b) {
                best = Some(key);
            }
        }
        let Some((_, _, pc)) = best else {
            // only sub-threshold entries remain in this row; treat as exhausted
            row_alive[r] = false;
            for (&c, _) in rows[r].iter() {
                col_rows[c].remove(&r);
            }
            rows[r].clear();
            continue;
        };
        let u = rows[r].get(&pc).unwrap().clone();
        let inv_u = u.inv().expect("pivot invertible");

        if opts.record {
            let col_rest: Vec<(usize, S)> = col_rows[pc]
                .iter()
                .filter(|&&r2| r2 != r)
                .map(|&r2| (r2, rows[r2].get(&pc).unwrap().clone()))
                .collect();
            events.push(PivotEvent {
                row: r,
                inv_u: inv_u.clone(),
                col_rest,
            });
        }

        // Schur update of every other row meeting the pivot column
        let pivot_row: Vec<(usize, S)> = rows[r]
            .iter()
            .filter(|(&c, _)| c != pc)
            .map(|(&c, v)| (c, v.clone()))
            .collect();
        let others: Vec<usize> = col_rows[pc].iter().filter(|&&r2| r2 != r).cloned().collect();
        for r2 in others {
            let factor = rows[r2].remove(&pc).unwrap() * inv_u.clone();
            col_rows[pc].remove(&r2);
            for (c, v) in &pivot_row {
                let delta = factor.clone() * v.clone();
                match rows[r2].entry(*c) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let nv = e.get().clone() - delta;
                        if nv.is_zero_tol(opts.drop_tol) {
                            e.remove();
                            col_rows[*c].remove(&r2);
                        } else {
                            *e.get_mut() = nv;
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        let nv = -delta;
                        if !nv.is_zero_tol(opts.drop_tol) {
                            e.insert(nv);
                            col_rows[*c].insert(r2);
                        }
                    }
                }
            }
            if !rows[r2].is_empty() {
                heap.push(std::cmp::Reverse((rows[r2].len(), r2)));
            }
        }

        // retire pivot row and column
        for (c, _) in &pivot_row {
            col_rows[*c].remove(&r);
        }
        col_rows[pc].remove(&r);
        rows[r].clear();
        row_alive[r] = false;
        col_alive[pc] = false;
        rank += 1;
    }

    ElimOutcome {
        rank,
        alive_rows: (0..nrows).filter(|&r| row_alive[r]).collect(),
        alive_cols: (0..ncols).filter(|&c| col_alive[c]).collect(),
        events,
    }
}

/// Exact rank (exact scalars) or threshold rank (float scalars) via sparse
/// elimination.
pub fn rank<S: Scalar>(mat: &SparseMat<S>) -> usize {
    let opts = if S::EXACT {
        ElimOptions::default()
    } else {
        let scale = mat.max_abs().max(1.0);
        ElimOptions {
            record: false,
            drop_tol: 1e-12 * scale,
            pivot_tol: 1e-8 * scale,
        }
    };
    eliminate(mat, None, None, &opts).rank
}

/// Pull a vector on the surviving rows back through recorded pivot events,
/// producing the adjoint image in the original coordinates.
///
/// Events must be replayed in reverse elimination order; each inserts the
/// consumed row coordinate `-conj(inv_u) * <col_rest, w>`.
pub fn pull_back_cocycle<S: Scalar>(
    events: &[PivotEvent<S>],
    w: &BTreeMap<usize, S>,
) -> BTreeMap<usize, S> {
    let mut v = w.clone();
    for ev in events.iter().rev() {
        let mut acc = S::zero();
        for (r, c) in &ev.col_rest {
            if let Some(x) = v.get(r) {
                acc = acc + c.conj() * x.clone();
            }
        }
        let val = -(ev.inv_u.conj()) * acc;
        if !val.is_zero() {
            v.insert(ev.row, val);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rat_mat(nrows: usize, ncols: usize, data: &[i64]) -> SparseMat<BigRational> {
        assert_eq!(data.len(), nrows * ncols);
        SparseMat::from_triplets(
            nrows,
            ncols,
            data.iter().enumerate().filter(|(_, v)| **v != 0).map(|(i, v)| {
                (i / ncols, i % ncols, <BigRational as Scalar>::from_i64(*v))
            }),
        )
    }

    #[test]
    fn rank_small() {
        let m = rat_mat(3, 3, &[1, 2, 3, 2, 4, 6, 1, 0, 1]);
        assert_eq!(rank(&m), 2);
        let id = SparseMat::<BigRational>::identity(5);
        assert_eq!(rank(&id), 5);
        let z = SparseMat::<BigRational>::zero(4, 7);
        assert_eq!(rank(&z), 0);
    }

    #[test]
    fn matmul_and_adjoint() {
        let a = rat_mat(2, 3, &[1, 0, 2, -1, 3, 0]);
        let b = rat_mat(3, 2, &[0, 1, 1, 0, 2, -2]);
        let ab = a.matmul(&b).unwrap();
        assert_eq!(ab.get(0, 0), Scalar::from_i64(4));
        assert_eq!(ab.get(0, 1), Scalar::from_i64(-3));
        assert_eq!(ab.get(1, 0), Scalar::from_i64(3));
        assert_eq!(ab.get(1, 1), Scalar::from_i64(-1));
        let aa = a.adjoint().adjoint();
        assert_eq!(aa, a);
    }

    #[test]
    fn elimination_survivors_give_cokernel_dimension() {
        // rank-1 matrix on 3x3: two surviving rows/cols
        let m = rat_mat(3, 3, &[1, 1, 1, 1, 1, 1, 1, 1, 1]);
        let out = eliminate(&m, None, None, &ElimOptions::default());
        assert_eq!(out.rank, 1);
        assert_eq!(out.alive_rows.len(), 2);
        assert_eq!(out.alive_cols.len(), 2);
    }

    #[test]
    fn pull_back_matches_dense_adjoint() {
        // eliminate a 3x4 rational matrix with recording, then check that the
        // pulled-back survivors are cocycles: rows of the original matrix
        // pair to zero against them (they span ker of the adjoint map).
        let m = rat_mat(3, 4, &[1, 2, 0, 1, 0, 1, 1, 0, 1, 3, 1, 1]);
        let out = eliminate(
            &m,
            None,
            None,
            &ElimOptions {
                record: true,
                ..Default::default()
            },
        );
        assert_eq!(out.rank, 2);
        assert_eq!(out.alive_rows.len(), 1);
        let w: BTreeMap<usize, BigRational> =
            [(out.alive_rows[0], BigRational::from_integer(1.into()))]
                .into_iter()
                .collect();
        let v = pull_back_cocycle(&out.events, &w);
        // v must satisfy A^* ... : v is in the kernel of x -> x applied to
        // column space; concretely conj-pair v against every column of m.
        for j in 0..4 {
            let mut acc = BigRational::from_integer(0.into());
            for (r, val) in m.col(j) {
                if let Some(x) = v.get(r) {
                    acc += val.clone() * x.clone();
                }
            }
            assert!(acc.is_zero(), "column {j} pairs to {acc}");
        }
    }
}
