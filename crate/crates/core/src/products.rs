//! Product-formula bookkeeping: the epsilon table, signature verification
//! for products, and a lazy staircase enumeration that computes product
//! signatures near the middle degree without materializing the complex.

use crate::error::{Error, Result};
use crate::poincare::hp_complex_untwisted;
use crate::signature::{form_signature, middle_cohomology_form, signature_of_complex};
use crate::simplicial::{
    binomial, product_fundamental_cycle, FundamentalCycle, OrientedSimplicialComplex,
};
use crate::sparse::SparseMat;
use num_complex::Complex;
use num_rational::BigRational;
use std::collections::BTreeMap;

type C64 = Complex<f64>;

/// 1 exactly when both dimensions are odd.
pub fn product_epsilon(p: usize, q: usize) -> u8 {
    u8::from(p % 2 == 1 && q % 2 == 1)
}

#[derive(Clone, Debug)]
pub struct ProductReport {
    pub dim_left: usize,
    pub dim_right: usize,
    pub sig_left: i64,
    pub sig_right: i64,
    pub epsilon: u8,
    pub product_dim: usize,
    pub product_facets: usize,
    pub sig_product: i64,
    pub product_odd: bool,
    pub expected: i64,
    pub matches: bool,
    pub sparse_path: bool,
}

const MATERIALIZE_FACET_LIMIT: usize = 2_000;

/// Compute the signature of the staircase product and compare it with the
/// product of the factor signatures (times 2^epsilon, which only matters in
/// the odd-odd sector where every term vanishes at this scale).
pub fn verify_product_signature(
    k: &OrientedSimplicialComplex,
    l: &OrientedSimplicialComplex,
) -> Result<ProductReport> {
    let ck = k
        .certify_manifold()
        .fundamental_cycle
        .ok_or_else(|| Error::NotClosedOriented("left factor".into()))?;
    let cl = l
        .certify_manifold()
        .fundamental_cycle
        .ok_or_else(|| Error::NotClosedOriented("right factor".into()))?;
    let sig_left = signature_of_complex(k)?.signature;
    let sig_right = signature_of_complex(l)?.signature;
    let (dk, dl) = (k.dim(), l.dim());
    let epsilon = product_epsilon(dk, dl);
    let product_dim = dk + dl;
    let product_facets = k.facets().len() * l.facets().len() * binomial(product_dim, dk);
    let expected = (1i64 << epsilon) * sig_left * sig_right;

    let (sig_product, product_odd, sparse_path) = if product_dim % 2 == 1 {
        (0, true, false)
    } else if product_facets <= MATERIALIZE_FACET_LIMIT {
        let prod = k.product(l);
        let cycle = product_fundamental_cycle(k, &ck, l, &cl, &prod)?;
        let hp = hp_complex_untwisted::<BigRational>(&prod, &cycle)?;
        (
            crate::signature::signature_complex(&hp)?.signature,
            false,
            false,
        )
    } else {
        (sparse_product_signature(k, &ck, l, &cl)?.1, false, true)
    };

    Ok(ProductReport {
        dim_left: dk,
        dim_right: dl,
        sig_left,
        sig_right,
        epsilon,
        product_dim,
        product_facets,
        sig_product,
        product_odd,
        expected,
        matches: sig_product == expected,
        sparse_path,
    })
}

/// Cells of one degree of the staircase product, as sorted flattened
/// vertex tuples.
struct CellTable {
    stride: usize,
    flat: Vec<u32>,
}

impl CellTable {
    fn len(&self) -> usize {
        if self.stride == 0 {
            0
        } else {
            self.flat.len() / self.stride
        }
    }

    fn get(&self, i: usize) -> &[u32] {
        &self.flat[i * self.stride..(i + 1) * self.stride]
    }

    fn find(&self, t: &[u32]) -> Option<usize> {
        let n = self.len();
        let mut lo = 0usize;
        let mut hi = n;
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(t) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// Enumerate degree-j cells: monotone chains of j+1 grid points through
/// sigma x tau, surjective onto both factors, over all simplex pairs.
fn enumerate_cells(
    k: &OrientedSimplicialComplex,
    l: &OrientedSimplicialComplex,
    vk: &BTreeMap<u32, usize>,
    vl: &BTreeMap<u32, usize>,
    j: usize,
) -> CellTable {
    let nl = l.vertices().len();
    let mut cells: Vec<Vec<u32>> = Vec::new();
    for a in 0..=j.min(k.dim()) {
        for b in 0..=j.min(l.dim()) {
            if a + b < j {
                continue;
            }
            let diag = a + b - j;
            let right = j - b;
            let up = j - a;
            for sigma in k.simplices(a) {
                let sk: Vec<usize> = sigma.iter().map(|v| vk[v]).collect();
                for tau in l.simplices(b) {
                    let tl: Vec<usize> = tau.iter().map(|v| vl[v]).collect();
                    // steps: right (advance sigma), up (advance tau), diag
                    let mut acc = Vec::with_capacity(j + 1);
                    acc.push((sk[0] * nl + tl[0]) as u32);
                    gen_chains(&sk, &tl, nl, right, up, diag, 0, 0, &mut acc, &mut cells);
                }
            }
        }
    }
    let stride = j + 1;
    cells.sort_unstable();
    let mut flat = Vec::with_capacity(cells.len() * stride);
    for c in cells {
        debug_assert_eq!(c.len(), stride);
        flat.extend_from_slice(&c);
    }
    CellTable { stride, flat }
}

#[allow(clippy::too_many_arguments)]
fn gen_chains(
    sk: &[usize],
    tl: &[usize],
    nl: usize,
    right: usize,
    up: usize,
    diag: usize,
    i: usize,
    j: usize,
    acc: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if right == 0 && up == 0 && diag == 0 {
        out.push(acc.clone());
        return;
    }
    if right > 0 {
        acc.push((sk[i + 1] * nl + tl[j]) as u32);
        gen_chains(sk, tl, nl, right - 1, up, diag, i + 1, j, acc, out);
        acc.pop();
    }
    if up > 0 {
        acc.push((sk[i] * nl + tl[j + 1]) as u32);
        gen_chains(sk, tl, nl, right, up - 1, diag, i, j + 1, acc, out);
        acc.pop();
    }
    if diag > 0 {
        acc.push((sk[i + 1] * nl + tl[j + 1]) as u32);
        gen_chains(sk, tl, nl, right, up, diag - 1, i + 1, j + 1, acc, out);
        acc.pop();
    }
}

fn boundary_between(upper: &CellTable, lower: &CellTable) -> SparseMat<C64> {
    let mut triplets: Vec<(usize, usize, C64)> = Vec::with_capacity(upper.len() * upper.stride);
    let mut face: Vec<u32> = Vec::with_capacity(upper.stride - 1);
    for col in 0..upper.len() {
        let cell = upper.get(col);
        for i in 0..cell.len() {
            face.clear();
            face.extend_from_slice(&cell[..i]);
            face.extend_from_slice(&cell[i + 1..]);
            let row = lower.find(&face).expect("face of a product cell");
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            triplets.push((row, col, Complex::new(sign, 0.0)));
        }
    }
    SparseMat::from_triplets(lower.len(), upper.len(), triplets)
}

/// Middle homology rank and signature of the product K x L, enumerating
/// only the three degrees around the middle. Float scalars; the matrices
/// are integer-valued so the elimination is exact until thresholds bind.
pub fn sparse_product_signature(
    k: &OrientedSimplicialComplex,
    ck: &FundamentalCycle,
    l: &OrientedSimplicialComplex,
    cl: &FundamentalCycle,
) -> Result<(usize, i64)> {
    let d = k.dim() + l.dim();
    if d % 2 != 0 {
        return Ok((0, 0));
    }
    let mid = d / 2;
    if mid == 0 {
        return Err(Error::ShapeMismatch("product of points".into()));
    }
    let vk: BTreeMap<u32, usize> = k
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let vl: BTreeMap<u32, usize> = l
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let nl = l.vertices().len();

    let cells_below = enumerate_cells(k, l, &vk, &vl, mid - 1);
    let cells_mid = enumerate_cells(k, l, &vk, &vl, mid);
    let cells_above = enumerate_cells(k, l, &vk, &vl, mid + 1);
    let b_mid = boundary_between(&cells_mid, &cells_below);
    let b_up = boundary_between(&cells_above, &cells_mid);

    // middle duality from the facet staircases
    let p = k.dim();
    let q = l.dim();
    let total = p + q;
    let mut triplets: Vec<(usize, usize, C64)> = Vec::new();
    let mut path: Vec<u32> = Vec::with_capacity(total + 1);
    for (si, sigma) in k.facets().iter().enumerate() {
        let sk: Vec<usize> = sigma.iter().map(|v| vk[v]).collect();
        for (ti, tau) in l.facets().iter().enumerate() {
            let tl: Vec<usize> = tau.iter().map(|v| vl[v]).collect();
            let eps = ck.coefficient(si) * cl.coefficient(ti);
            for mask in 0u64..(1u64 << total) {
                if mask.count_ones() as usize != p {
                    continue;
                }
                path.clear();
                path.push((sk[0] * nl + tl[0]) as u32);
                let (mut i, mut j) = (0usize, 0usize);
                let mut inversions = 0u32;
                let mut ups_seen = 0u32;
                for step in 0..total {
                    if mask & (1 << step) != 0 {
                        i += 1;
                        inversions += ups_seen;
                    } else {
                        j += 1;
                        ups_seen += 1;
                    }
                    path.push((sk[i] * nl + tl[j]) as u32);
                }
                let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
                let front = cells_mid
                    .find(&path[0..=mid])
                    .ok_or_else(|| Error::ShapeMismatch("front face missing".into()))?;
                let back = cells_mid
                    .find(&path[mid..=total])
                    .ok_or_else(|| Error::ShapeMismatch("back face missing".into()))?;
                triplets.push((back, front, Complex::new(eps as f64 * sign, 0.0)));
            }
        }
    }
    let raw_d = SparseMat::from_triplets(cells_mid.len(), cells_mid.len(), triplets);
    let sym_sign = if (mid * mid) % 2 == 0 { 1.0 } else { -1.0 };
    let dtilde = raw_d
        .add(&raw_d.adjoint().scale(&Complex::new(sym_sign, 0.0)))?
        .scale(&Complex::new(0.5, 0.0));

    let (h, gram) = middle_cohomology_form(&b_mid, &b_up, &dtilde)?;
    let sig = form_signature::<C64>(&gram, mid % 2 == 1)?;
    Ok((h, sig))
}
