//! Signature invariants of validated Hilbert-Poincare complexes: the
//! integer signature, the finite-group multi-signature with its trace, the
//! cup-product oracle, and bordism vanishing checks.
//!
//! The signature is computed on a basis of middle cohomology obtained by
//! sparse elimination: survivors of eliminating `b_l` and `b_{l+1}` are
//! pulled back through the recorded pivots to cocycle representatives,
//! which are then paired through the symmetrized duality. On the harmonic
//! subspace this is the quadratic form induced by the duality operator, so
//! the inertia counts below agree with the dense harmonic computation
//! (cross-checked in the tests).

use crate::chain::TOL_RANK;
use crate::covers::{CoverComplex, CoverTransport};
use crate::error::{Error, Result};
use crate::poincare::{hp_complex, hp_complex_untwisted, HilbertPoincareComplex};
use crate::scalar::Scalar;
use crate::simplicial::{
    boundary_with_induced_cycle, FundamentalCycle, OrientedSimplicialComplex,
};
use crate::sparse::{eliminate, pull_back_cocycle, ElimOptions, SparseMat};
use crate::ScalarMode;
use nalgebra::DMatrix;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

type C64 = Complex<f64>;
type Q = BigRational;

#[derive(Clone, Debug)]
pub struct SignatureOutcome {
    pub signature: i64,
    /// Set when the dimension is odd; the value 0 is then a convention, not
    /// a computed middle form.
    pub odd_dimension: bool,
    pub middle_rank: usize,
}

/// Middle cohomology basis and its Gram matrix under the duality operator.
///
/// `b_l` maps E_l -> E_{l-1}, `b_l1` maps E_{l+1} -> E_l, and `dtilde_l`
/// is the symmetrized duality E_l -> E_l.
pub(crate) fn middle_cohomology_form<S: Scalar>(
    b_l: &SparseMat<S>,
    b_l1: &SparseMat<S>,
    dtilde_l: &SparseMat<S>,
) -> Result<(usize, Vec<Vec<S>>)> {
    let n = dtilde_l.ncols();
    if b_l.ncols() != n || b_l1.nrows() != n || dtilde_l.nrows() != n {
        return Err(Error::ShapeMismatch("middle form shapes".into()));
    }
    let scale = b_l.max_abs().max(b_l1.max_abs()).max(1.0);
    let opts = |record: bool| {
        if S::EXACT {
            ElimOptions {
                record,
                drop_tol: 0.0,
                pivot_tol: 0.0,
            }
        } else {
            ElimOptions {
                record,
                drop_tol: 1e-12 * scale,
                pivot_tol: TOL_RANK * scale,
            }
        }
    };
    // consume boundaries: pivots of b_l eat middle cells as columns
    let elim_down = eliminate(b_l, None, None, &opts(false));
    let mut consumed = vec![true; n];
    for &c in &elim_down.alive_cols {
        consumed[c] = false;
    }
    // then cocycle conditions: pivots of b_{l+1} eat middle cells as rows
    let elim_up = eliminate(b_l1, Some(&consumed), None, &opts(true));
    let survivors = &elim_up.alive_rows;
    let h = survivors.len();

    let mut reps: Vec<BTreeMap<usize, S>> = Vec::with_capacity(h);
    for &s in survivors {
        let seed: BTreeMap<usize, S> = [(s, S::one())].into_iter().collect();
        reps.push(pull_back_cocycle(&elim_up.events, &seed));
    }
    let images: Vec<BTreeMap<usize, S>> = reps.iter().map(|x| dtilde_l.apply_map(x)).collect();
    let gram: Vec<Vec<S>> = reps
        .iter()
        .map(|x| images.iter().map(|y| pair(x, y)).collect())
        .collect();
    Ok((h, gram))
}

fn pair<S: Scalar>(x: &BTreeMap<usize, S>, y: &BTreeMap<usize, S>) -> S {
    let mut acc = S::zero();
    let (small, big, conj_small) = if x.len() <= y.len() {
        (x, y, true)
    } else {
        (y, x, false)
    };
    for (i, v) in small {
        if let Some(w) = big.get(i) {
            let term = if conj_small {
                v.conj() * w.clone()
            } else {
                w.conj() * v.clone()
            };
            acc = acc + term;
        }
    }
    acc
}

/// Inertia of a hermitian matrix through its eigenvalues, with the 1e-8
/// relative nondegeneracy threshold.
fn hermitian_inertia_c64(q: &DMatrix<C64>) -> Result<(usize, usize)> {
    let k = q.nrows();
    if k == 0 {
        return Ok((0, 0));
    }
    let herm = (q + q.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let max_abs = eig
        .eigenvalues
        .iter()
        .map(|v| v.abs())
        .fold(0.0f64, f64::max);
    if max_abs == 0.0 {
        return Err(Error::DegenerateForm("zero middle form".into()));
    }
    let cutoff = TOL_RANK * max_abs;
    let mut pos = 0;
    let mut neg = 0;
    for &ev in eig.eigenvalues.iter() {
        if ev.abs() <= cutoff {
            return Err(Error::DegenerateForm(format!(
                "eigenvalue {ev} below threshold {cutoff}"
            )));
        }
        if ev > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    Ok((pos, neg))
}

/// Exact inertia of a symmetric rational matrix by congruence reduction
/// (diagonal pivots, hyperbolic pairs for zero diagonals).
fn rational_symmetric_inertia(mut m: Vec<Vec<Q>>) -> Result<(usize, usize)> {
    let mut pos = 0usize;
    let mut neg = 0usize;
    let mut alive: Vec<usize> = (0..m.len()).collect();
    while !alive.is_empty() {
        if let Some(pi) = alive.iter().position(|&i| !m[i][i].is_zero()) {
            let i = alive[pi];
            let d = m[i][i].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            alive.remove(pi);
            for &r in &alive {
                let f = m[r][i].clone() / d.clone();
                for &c in &alive {
                    let delta = f.clone() * m[i][c].clone();
                    m[r][c] -= delta;
                }
            }
        } else {
            // all diagonals zero: find an off-diagonal entry
            let mut found = None;
            'search: for (pi, &i) in alive.iter().enumerate() {
                for (pj, &j) in alive.iter().enumerate().skip(pi + 1) {
                    if !m[i][j].is_zero() {
                        found = Some((pi, pj, i, j));
                        break 'search;
                    }
                }
            }
            let Some((pi, pj, i, j)) = found else {
                return Err(Error::DegenerateForm(format!(
                    "{} null directions in middle form",
                    alive.len()
                )));
            };
            // hyperbolic pair contributes (+1, -1)
            pos += 1;
            neg += 1;
            let a = m[i][j].clone();
            alive.remove(pj);
            alive.remove(pi);
            for &r in &alive {
                for &c in &alive {
                    let delta = (m[r][i].clone() * m[j][c].clone()
                        + m[r][j].clone() * m[i][c].clone())
                        / a.clone();
                    m[r][c] -= delta;
                }
            }
        }
    }
    Ok((pos, neg))
}

/// Signature of the (skew-)hermitian middle form; `l_odd` selects the iQ
/// convention for dimensions congruent to 2 mod 4.
pub(crate) fn form_signature<S: Scalar>(gram: &[Vec<S>], l_odd: bool) -> Result<i64> {
    let k = gram.len();
    if k == 0 {
        return Ok(0);
    }
    let twisted: Vec<Vec<S>> = if l_odd {
        if S::REAL {
            // real skew form: iQ has symmetric spectrum, signature 0, but
            // nondegeneracy must still hold
            let rat: Option<Vec<Vec<Q>>> = gram
                .iter()
                .map(|row| row.iter().map(|v| v.as_rational()).collect())
                .collect();
            match rat {
                Some(m) => {
                    if dense_rational_rank(m) != k {
                        return Err(Error::DegenerateForm("skew middle form singular".into()));
                    }
                }
                None => {
                    let mut dm = DMatrix::zeros(k, k);
                    for (i, row) in gram.iter().enumerate() {
                        for (j, v) in row.iter().enumerate() {
                            dm[(i, j)] = v.to_c64();
                        }
                    }
                    let sv = dm.svd(false, false).singular_values;
                    let smax = sv.iter().cloned().fold(0.0, f64::max);
                    if smax == 0.0 || sv.iter().any(|&s| s <= TOL_RANK * smax) {
                        return Err(Error::DegenerateForm("skew middle form singular".into()));
                    }
                }
            }
            return Ok(0);
        }
        let iu = S::imaginary_unit().ok_or_else(|| {
            Error::UnsupportedMode("no imaginary unit for the iQ convention".into())
        })?;
        gram.iter()
            .map(|row| row.iter().map(|v| iu.clone() * v.clone()).collect())
            .collect()
    } else {
        gram.to_vec()
    };

    // exact route when every entry is rational (trivial or +-1-twisted
    // coefficients, and purely imaginary cyclotomic skew forms)
    if S::EXACT {
        let rat: Option<Vec<Vec<Q>>> = twisted
            .iter()
            .map(|row| row.iter().map(|v| v.as_rational()).collect())
            .collect();
        if let Some(m) = rat {
            let mt: Vec<Vec<Q>> = (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| (m[i][j].clone() + m[j][i].clone()) / Q::from_integer(2.into()))
                        .collect()
                })
                .collect();
            let (pos, neg) = rational_symmetric_inertia(mt)?;
            if pos + neg != k {
                return Err(Error::DegenerateForm("middle form singular".into()));
            }
            return Ok(pos as i64 - neg as i64);
        }
    }
    let mut dm = DMatrix::zeros(k, k);
    for (i, row) in twisted.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            dm[(i, j)] = v.to_c64();
        }
    }
    let (pos, neg) = hermitian_inertia_c64(&dm)?;
    Ok(pos as i64 - neg as i64)
}

fn dense_rational_rank(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone() / m[row][col].clone();
                for c in col..cols {
                    let delta = f.clone() * m[row][c].clone();
                    m[r][c] -= delta;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Signature of a validated Hilbert-Poincare complex. Odd dimensions return
/// zero with a flag; even dimensions diagonalize the middle form (the iQ
/// convention for odd middle degree).
pub fn signature_complex<S: Scalar>(hp: &HilbertPoincareComplex<S>) -> Result<SignatureOutcome> {
    let d = hp.dimension();
    if d % 2 == 1 {
        return Ok(SignatureOutcome {
            signature: 0,
            odd_dimension: true,
            middle_rank: 0,
        });
    }
    let l = d / 2;
    let holder;
    let b_l1 = if l + 1 <= d {
        hp.complex.differential(l + 1)
    } else {
        holder = SparseMat::zero(hp.complex.rank(l), 0);
        &holder
    };
    let (h, gram) = middle_cohomology_form(hp.complex.differential(l), b_l1, &hp.duality[l])?;
    let signature = form_signature::<S>(&gram, l % 2 == 1)?;
    Ok(SignatureOutcome {
        signature,
        odd_dimension: false,
        middle_rank: h,
    })
}

/// Certify, build the HP structure over exact rationals, and take the
/// signature in one step.
pub fn signature_of_complex(k: &OrientedSimplicialComplex) -> Result<SignatureOutcome> {
    let (hp, _) = crate::poincare::hp_complex_certified::<Q>(k)?;
    signature_complex(&hp)
}

pub fn signature_with_cycle(
    k: &OrientedSimplicialComplex,
    cycle: &FundamentalCycle,
) -> Result<SignatureOutcome> {
    let hp = hp_complex_untwisted::<Q>(k, cycle)?;
    signature_complex(&hp)
}

#[derive(Clone, Debug)]
pub struct MultiSigEntry {
    pub label: String,
    pub dim: usize,
    pub signature: i64,
}

#[derive(Clone, Debug)]
pub struct MultiSignature {
    pub entries: Vec<MultiSigEntry>,
    pub group_order: usize,
}

impl MultiSignature {
    /// (1/|pi|) sum over irreps of dim * signature.
    pub fn trace_value(&self) -> Q {
        let num: i64 = self
            .entries
            .iter()
            .map(|e| e.dim as i64 * e.signature)
            .sum();
        Q::new(num.into(), (self.group_order as i64).into())
    }

    pub fn weighted_sum(&self) -> i64 {
        self.entries
            .iter()
            .map(|e| e.dim as i64 * e.signature)
            .sum()
    }
}

pub fn trace_value(ms: &MultiSignature) -> Q {
    ms.trace_value()
}

fn multisignature_generic<S: Scalar>(cover: &CoverComplex) -> Result<MultiSignature> {
    let base = cover.base();
    let cert = base.certify_manifold();
    let cycle = cert.fundamental_cycle.ok_or_else(|| {
        Error::NotClosedOriented("multisignature requires a closed oriented base".into())
    })?;
    let mut entries = Vec::new();
    for (idx, irrep) in cover.group().irreps.iter().enumerate() {
        let transport = CoverTransport { cover, irrep: idx };
        let hp = hp_complex::<S, _>(base, &cycle, &transport)?;
        let outcome = signature_complex(&hp)?;
        entries.push(MultiSigEntry {
            label: irrep.label().to_string(),
            dim: irrep.dim(),
            signature: outcome.signature,
        });
    }
    Ok(MultiSignature {
        entries,
        group_order: cover.group().group.order(),
    })
}

/// Per-irrep signatures of the twisted middle forms, over the requested
/// scalar mode.
pub fn multisignature(cover: &CoverComplex, mode: ScalarMode) -> Result<MultiSignature> {
    match mode {
        ScalarMode::Exact => multisignature_generic::<Q>(cover),
        ScalarMode::Cyclotomic => multisignature_generic::<crate::Cyclotomic>(cover),
        ScalarMode::Float => multisignature_generic::<C64>(cover),
    }
}

/// Consistency of the isotypic decomposition against the explicitly
/// materialized total space: sum of dim * sig equals the total signature.
pub fn multisignature_consistency(cover: &CoverComplex, ms: &MultiSignature) -> Result<bool> {
    let (total, cycle) = cover.materialize_total_space()?;
    let cycle = cycle.ok_or_else(|| {
        Error::NotClosedOriented("total space inherits no orientation".into())
    })?;
    let total_sig = signature_with_cycle(&total, &cycle)?;
    Ok(total_sig.signature == ms.weighted_sum())
}

/// Signature of the cup-product pairing `(xi, eta) -> (xi cup eta)(C)` on
/// middle cohomology, computed along an independent dense route: cocycle
/// kernels by dense row reduction, representatives chosen modulo
/// coboundaries, and inertia by leading principal minors.
pub fn cup_oracle_signature(
    k: &OrientedSimplicialComplex,
    cycle: &FundamentalCycle,
) -> Result<i64> {
    let d = k.dim();
    if d == 0 || d % 4 != 0 {
        return Err(Error::UnsupportedMode(
            "cup oracle requires positive dimension divisible by 4".into(),
        ));
    }
    if !k.cycle_closes(cycle) {
        return Err(Error::NotClosedOriented("cycle does not close".into()));
    }
    let l = d / 2;
    let nl = k.simplices(l).len();
    // cocycles: kernel of delta_l = transpose of b_{l+1}
    let b_up = k.boundary_matrix(l + 1)?;
    let mut delta: Vec<Vec<Q>> = vec![vec![Q::zero(); nl]; k.simplices(l + 1).len()];
    for (r, c, v) in b_up.triplets() {
        delta[c][r] = Q::from_integer((*v).into());
    }
    let kernel = dense_kernel(delta, nl);
    // coboundaries: rows of b_l
    let b_down = k.boundary_matrix(l)?;
    let nlm1 = k.simplices(l - 1).len();
    let mut image: Vec<Vec<Q>> = vec![vec![Q::zero(); nl]; nlm1];
    for (r, c, v) in b_down.triplets() {
        image[r][c] = Q::from_integer((*v).into());
    }
    // select kernel vectors independent modulo the image
    let mut span = image;
    let mut span_rank = dense_rational_rank(span.clone());
    let mut chosen: Vec<Vec<Q>> = Vec::new();
    for v in kernel {
        let mut trial = span.clone();
        trial.push(v.clone());
        let r = dense_rational_rank(trial.clone());
        if r > span_rank {
            span = trial;
            span_rank = r;
            chosen.push(v);
        }
    }
    // cup pairing against the fundamental cycle
    let m = chosen.len();
    let mut gram = vec![vec![Q::zero(); m]; m];
    for (fi, facet) in k.facets().iter().enumerate() {
        let eps = Q::from_integer(cycle.coefficient(fi).into());
        let front = k.index_of(l, &facet[0..=l]).unwrap();
        let back = k.index_of(l, &facet[l..=d]).unwrap();
        for a in 0..m {
            if chosen[a][front].is_zero() {
                continue;
            }
            for b in 0..m {
                let add = eps.clone() * chosen[a][front].clone() * chosen[b][back].clone();
                gram[a][b] += add;
            }
        }
    }
    // symmetric part represents the same form on cohomology
    let sym: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (gram[i][j].clone() + gram[j][i].clone()) / Q::from_integer(2.into()))
                .collect()
        })
        .collect();
    minor_inertia(&sym)
}

/// Inertia by the Jacobi rule on leading principal minors, falling back to
/// a basis permutation whenever a minor vanishes.
fn minor_inertia(m: &[Vec<Q>]) -> Result<i64> {
    let k = m.len();
    if k == 0 {
        return Ok(0);
    }
    let perms = permutations(k);
    'outer: for perm in &perms {
        let mut prev = Q::one();
        let mut sig = 0i64;
        for t in 1..=k {
            let minor = determinant(
                &(0..t)
                    .map(|i| (0..t).map(|j| m[perm[i]][perm[j]].clone()).collect())
                    .collect::<Vec<Vec<Q>>>(),
            );
            if minor.is_zero() {
                continue 'outer;
            }
            sig += if (minor.clone() / prev).is_positive() {
                1
            } else {
                -1
            };
            prev = minor;
        }
        return Ok(sig);
    }
    Err(Error::DegenerateForm(
        "no principal minor chain; form may be degenerate".into(),
    ))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k > 5 {
        // identity first; larger forms fall back to a rotation family
        let mut out = vec![(0..k).collect::<Vec<_>>()];
        for s in 1..k {
            out.push((0..k).map(|i| (i + s) % k).collect());
        }
        return out;
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // next permutation
        let n = idx.len();
        let mut i = n.saturating_sub(1);
        while i > 0 && idx[i - 1] >= idx[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while idx[j] <= idx[i - 1] {
            j -= 1;
        }
        idx.swap(i - 1, j);
        idx[i..].reverse();
    }
    out
}

fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            a.swap(col, p);
            det = -det;
        }
        det *= a[col][col].clone();
        for r in (col + 1)..n {
            if !a[r][col].is_zero() {
                let f = a[r][col].clone() / a[col][col].clone();
                for c in col..n {
                    let delta = f.clone() * a[col][c].clone();
                    a[r][c] -= delta;
                }
            }
        }
    }
    det
}

fn dense_kernel(m: Vec<Vec<Q>>, ncols: usize) -> Vec<Vec<Q>> {
    let mut a = m;
    let nrows = a.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let piv = a[row][col].clone();
        for c in 0..ncols {
            a[row][c] /= piv.clone();
        }
        for r in 0..nrows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..ncols {
                    let delta = f.clone() * a[row][c].clone();
                    a[r][c] -= delta;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    let pivot_set: std::collections::BTreeSet<usize> = pivot_cols.iter().cloned().collect();
    let mut basis = Vec::new();
    for col in 0..ncols {
        if pivot_set.contains(&col) {
            continue;
        }
        let mut v = vec![Q::zero(); ncols];
        v[col] = Q::one();
        for (i, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -a[i][col].clone();
        }
        basis.push(v);
    }
    basis
}

#[derive(Clone, Debug)]
pub struct BordismReport {
    pub boundary_dim: usize,
    pub odd_dimension: bool,
    pub signature: i64,
    pub is_zero: bool,
    pub boundary_facets: usize,
    pub multisignature: Option<MultiSignature>,
}

/// Signature of the induced boundary of a pseudomanifold-with-boundary;
/// zero by bordism invariance. With a cover, also restricts the cocycle to
/// the boundary and reports the multi-signature.
pub fn bordism_check(
    k: &OrientedSimplicialComplex,
    cover: Option<(&CoverComplex, ScalarMode)>,
) -> Result<BordismReport> {
    let data = boundary_with_induced_cycle(k)?;
    let bd = data.boundary.dim();
    let (signature, odd) = if bd % 2 == 1 {
        (0, true)
    } else {
        let out = signature_with_cycle(&data.boundary, &data.cycle)?;
        (out.signature, false)
    };
    let multisignature = match cover {
        None => None,
        Some((cov, mode)) => {
            let restricted = cov.restrict_to(&data.boundary)?;
            if bd % 2 == 1 {
                None
            } else {
                let mut entries = Vec::new();
                for (idx, irrep) in restricted.group().irreps.iter().enumerate() {
                    let transport = CoverTransport {
                        cover: &restricted,
                        irrep: idx,
                    };
                    let sig = match mode {
                        ScalarMode::Exact => {
                            let hp = hp_complex::<Q, _>(&data.boundary, &data.cycle, &transport)?;
                            signature_complex(&hp)?.signature
                        }
                        ScalarMode::Cyclotomic => {
                            let hp = hp_complex::<crate::Cyclotomic, _>(
                                &data.boundary,
                                &data.cycle,
                                &transport,
                            )?;
                            signature_complex(&hp)?.signature
                        }
                        ScalarMode::Float => {
                            let hp =
                                hp_complex::<C64, _>(&data.boundary, &data.cycle, &transport)?;
                            signature_complex(&hp)?.signature
                        }
                    };
                    entries.push(MultiSigEntry {
                        label: irrep.label().to_string(),
                        dim: irrep.dim(),
                        signature: sig,
                    });
                }
                Some(MultiSignature {
                    entries,
                    group_order: restricted.group().group.order(),
                })
            }
        }
    };
    Ok(BordismReport {
        boundary_dim: bd,
        odd_dimension: odd,
        signature,
        is_zero: signature == 0
            && multisignature
                .as_ref()
                .map_or(true, |ms| ms.entries.iter().all(|e| e.signature == 0)),
        boundary_facets: data.boundary.facets().len(),
        multisignature,
    })
}
