//! Oriented simplicial complexes and the combinatorial constructions on
//! them: boundary matrices, manifold certification with fundamental cycles,
//! barycentric subdivision, staircase products, and boundary doubling.
//!
//! Orientation is carried by the global vertex order: simplices are stored
//! as strictly increasing vertex tuples, and explicit signs appear only in
//! cycles and matrices.

use crate::error::{Error, Result};
use crate::sparse::SparseMat;
use std::collections::{BTreeMap, BTreeSet};

pub type Vertex = u32;
pub type Simplex = Vec<Vertex>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedSimplicialComplex {
    vertices: Vec<Vertex>,
    /// simplices[p]: lexicographically sorted strictly increasing tuples.
    simplices: Vec<Vec<Simplex>>,
}

/// Top-degree integer cycle with coefficients +-1 on every facet, aligned
/// with the complex's facet ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalCycle {
    coefficients: Vec<i8>,
}

impl FundamentalCycle {
    pub fn coefficients(&self) -> &[i8] {
        &self.coefficients
    }

    pub fn coefficient(&self, facet_index: usize) -> i64 {
        self.coefficients[facet_index] as i64
    }

    /// All coefficients negated; an involution.
    pub fn reversed(&self) -> FundamentalCycle {
        FundamentalCycle {
            coefficients: self.coefficients.iter().map(|c| -c).collect(),
        }
    }
}

pub fn orientation_reverse(cycle: &FundamentalCycle) -> FundamentalCycle {
    cycle.reversed()
}

#[derive(Clone, Debug)]
pub struct ManifoldCertificate {
    pub is_pseudomanifold: bool,
    pub is_closed: bool,
    pub is_orientable: bool,
    pub link_checks_passed: bool,
    pub fundamental_cycle: Option<FundamentalCycle>,
}

impl OrientedSimplicialComplex {
    /// Downward closure of a list of maximal simplices.
    pub fn build(maximal: &[Vec<Vertex>]) -> Result<Self> {
        if maximal.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut seen: BTreeSet<Simplex> = BTreeSet::new();
        let mut sorted_maximal = Vec::with_capacity(maximal.len());
        for m in maximal {
            let mut s = m.clone();
            s.sort_unstable();
            let before = s.len();
            s.dedup();
            if s.len() != before {
                return Err(Error::InvalidSimplex(m.clone()));
            }
            if s.is_empty() {
                return Err(Error::EmptyInput);
            }
            if !seen.insert(s.clone()) {
                return Err(Error::DuplicateMaximalSimplex(m.clone()));
            }
            sorted_maximal.push(s);
        }
        let dim = sorted_maximal.iter().map(|s| s.len() - 1).max().unwrap();
        let mut by_dim: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); dim + 1];
        for s in &sorted_maximal {
            let n = s.len();
            for mask in 1u64..(1u64 << n) {
                let mut face = Vec::with_capacity(mask.count_ones() as usize);
                for (i, v) in s.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        face.push(*v);
                    }
                }
                by_dim[face.len() - 1].insert(face);
            }
        }
        let simplices: Vec<Vec<Simplex>> = by_dim
            .into_iter()
            .map(|set| set.into_iter().collect())
            .collect();
        let vertices: Vec<Vertex> = simplices[0].iter().map(|s| s[0]).collect();
        Ok(OrientedSimplicialComplex {
            vertices,
            simplices,
        })
    }

    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn simplices(&self, p: usize) -> &[Simplex] {
        &self.simplices[p]
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.simplices[self.dim()]
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(|s| s.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(p, &n)| if p % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn total_simplices(&self) -> usize {
        self.f_vector().iter().sum()
    }

    pub fn index_of(&self, p: usize, simplex: &[Vertex]) -> Option<usize> {
        self.simplices
            .get(p)?
            .binary_search_by(|s| s.as_slice().cmp(simplex))
            .ok()
    }

    /// Integer boundary matrix in degree `p`: rows are (p-1)-simplices,
    /// columns are p-simplices, and the column of `[v0..vp]` is
    /// `sum_i (-1)^i [v0..^vi..vp]`.
    pub fn boundary_matrix(&self, p: usize) -> Result<SparseMat<i64>> {
        if p == 0 || p > self.dim() {
            return Err(Error::DegreeOutOfRange {
                degree: p,
                top: self.dim(),
            });
        }
        let rows = self.simplices[p - 1].len();
        let cols = self.simplices[p].len();
        let mut triplets = Vec::with_capacity(cols * (p + 1));
        for (j, s) in self.simplices[p].iter().enumerate() {
            let mut face = s.clone();
            for i in 0..s.len() {
                let removed = face.remove(i);
                let r = self
                    .index_of(p - 1, &face)
                    .expect("closure contains all faces");
                triplets.push((r, j, if i % 2 == 0 { 1 } else { -1 }));
                face.insert(i, removed);
            }
        }
        Ok(SparseMat::from_i64_triplets(rows, cols, triplets))
    }

    /// Largest number of simplices (of all degrees, including the vertex
    /// itself) containing a single vertex.
    pub fn bounded_geometry_constant(&self) -> usize {
        let mut count: BTreeMap<Vertex, usize> = BTreeMap::new();
        for level in &self.simplices {
            for s in level {
                for v in s {
                    *count.entry(*v).or_insert(0) += 1;
                }
            }
        }
        count.values().cloned().max().unwrap_or(0)
    }

    fn ridge_cofacets(&self) -> BTreeMap<Simplex, Vec<usize>> {
        let d = self.dim();
        let mut map: BTreeMap<Simplex, Vec<usize>> = BTreeMap::new();
        if d == 0 {
            return map;
        }
        for (j, f) in self.simplices[d].iter().enumerate() {
            let mut ridge = f.clone();
            for i in 0..f.len() {
                let removed = ridge.remove(i);
                map.entry(ridge.clone()).or_default().push(j);
                ridge.insert(i, removed);
            }
        }
        map
    }

    fn is_pure(&self) -> bool {
        let d = self.dim();
        for p in 0..d {
            for s in &self.simplices[p] {
                let mut extended = false;
                'outer: for t in &self.simplices[p + 1] {
                    if is_subset(s, t) {
                        extended = true;
                        break 'outer;
                    }
                }
                if !extended {
                    return false;
                }
            }
        }
        true
    }

    fn facet_components(&self, ridges: &BTreeMap<Simplex, Vec<usize>>) -> usize {
        let n = self.facets().len();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = count;
            while let Some(j) = stack.pop() {
                let f = &self.simplices[self.dim()][j];
                let mut ridge = f.clone();
                for i in 0..f.len() {
                    let removed = ridge.remove(i);
                    for &k in &ridges[&ridge] {
                        if comp[k] == usize::MAX {
                            comp[k] = count;
                            stack.push(k);
                        }
                    }
                    ridge.insert(i, removed);
                }
            }
            count += 1;
        }
        count
    }

    /// Sign of facet `f` on its ridge `f \ {f[i]}`.
    fn incidence_sign(i: usize) -> i64 {
        if i % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Propagate facet signs across ridge adjacencies. Returns `None` on an
    /// orientation contradiction. The lexicographically least facet gets +1.
    fn propagate_orientation(&self, ridges: &BTreeMap<Simplex, Vec<usize>>) -> Option<Vec<i8>> {
        let d = self.dim();
        let facets = &self.simplices[d];
        let n = facets.len();
        let mut sign = vec![0i8; n];
        for start in 0..n {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut stack = vec![start];
            while let Some(j) = stack.pop() {
                let f = &facets[j];
                let mut ridge = f.clone();
                for i in 0..f.len() {
                    let removed = ridge.remove(i);
                    for &k in &ridges[&ridge] {
                        if k == j {
                            continue;
                        }
                        let g = &facets[k];
                        let i2 = g.iter().position(|v| !ridge.contains(v)).unwrap();
                        let want = -(sign[j] as i64)
                            * Self::incidence_sign(i)
                            * Self::incidence_sign(i2);
                        if sign[k] == 0 {
                            sign[k] = want as i8;
                            stack.push(k);
                        } else if sign[k] as i64 != want {
                            return None;
                        }
                    }
                    ridge.insert(i, removed);
                }
            }
        }
        Some(sign)
    }

    fn link_of_vertex(&self, v: Vertex) -> Option<OrientedSimplicialComplex> {
        let d = self.dim();
        let mut maximal: Vec<Simplex> = Vec::new();
        for f in &self.simplices[d] {
            if f.contains(&v) {
                maximal.push(f.iter().cloned().filter(|w| *w != v).collect());
            }
        }
        if maximal.is_empty() {
            return None;
        }
        OrientedSimplicialComplex::build(&maximal).ok()
    }

    /// Heuristic link certification: links of vertices must look like
    /// spheres (closed case) or disks (boundary vertices), measured by Euler
    /// characteristic, connectivity, and ridge degrees. This is a documented
    /// partial check; it does not decide PL sphericity.
    fn links_ok(&self, closed: bool) -> bool {
        let d = self.dim();
        if d == 0 {
            return true;
        }
        for &v in &self.vertices {
            let Some(link) = self.link_of_vertex(v) else {
                return false;
            };
            if d == 1 {
                // link of a vertex on a closed curve: two points
                let pts = link.simplices(0).len();
                if closed && pts != 2 {
                    return false;
                }
                if !closed && !(pts == 1 || pts == 2) {
                    return false;
                }
                continue;
            }
            if link.dim() + 1 != d {
                return false;
            }
            let ridges = link.ridge_cofacets();
            let degrees_ok = ridges.values().all(|c| c.len() <= 2);
            if !degrees_ok {
                return false;
            }
            let link_closed = ridges.values().all(|c| c.len() == 2);
            let chi = link.euler_characteristic();
            let connected = link.facet_components(&ridges) == 1;
            let sphere_chi = 1 + if (d - 1) % 2 == 0 { 1 } else { -1 };
            if link_closed {
                if chi != sphere_chi || !connected {
                    return false;
                }
            } else {
                // disk-like link at a boundary vertex
                if closed || chi != 1 || !connected {
                    return false;
                }
            }
        }
        true
    }

    /// Certify the closed-oriented-manifold hypotheses and produce the
    /// normalized fundamental cycle when they hold.
    pub fn certify_manifold(&self) -> ManifoldCertificate {
        let d = self.dim();
        let ridges = self.ridge_cofacets();
        let pure = self.is_pure();
        let degrees_ok = d > 0 && ridges.values().all(|c| c.len() == 1 || c.len() == 2);
        let connected = d > 0 && self.facet_components(&ridges) == 1;
        let is_pseudomanifold = pure && degrees_ok && connected;
        let is_closed = degrees_ok && ridges.values().all(|c| c.len() == 2);
        let orientation = if is_pseudomanifold {
            self.propagate_orientation(&ridges)
        } else {
            None
        };
        let is_orientable = orientation.is_some();
        let link_checks_passed = is_pseudomanifold && self.links_ok(is_closed);
        let fundamental_cycle = if is_pseudomanifold && is_closed && is_orientable {
            let coefficients = orientation.unwrap();
            let cycle = FundamentalCycle { coefficients };
            debug_assert!(self.cycle_closes(&cycle));
            Some(cycle)
        } else {
            None
        };
        ManifoldCertificate {
            is_pseudomanifold,
            is_closed,
            is_orientable,
            link_checks_passed,
            fundamental_cycle,
        }
    }

    /// Exact integer check that the weighted facet sum is a cycle.
    pub fn cycle_closes(&self, cycle: &FundamentalCycle) -> bool {
        let d = self.dim();
        if cycle.coefficients.len() != self.simplices[d].len() {
            return false;
        }
        let b = self.boundary_matrix(d).unwrap();
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (j, c) in cycle.coefficients.iter().enumerate() {
            for (r, v) in b.col(j) {
                *acc.entry(*r).or_insert(0) += v * (*c as i64);
            }
        }
        acc.values().all(|v| *v == 0)
    }

    /// Ridges with exactly one cofacet, i.e. the boundary of the complex.
    pub fn boundary_ridges(&self) -> Vec<Simplex> {
        self.ridge_cofacets()
            .into_iter()
            .filter(|(_, c)| c.len() == 1)
            .map(|(r, _)| r)
            .collect()
    }

    /// Barycentric subdivision together with the subdivision chain map in
    /// each degree (rows: subdivision simplices, columns: original ones).
    pub fn barycentric_subdivision(&self) -> (OrientedSimplicialComplex, Vec<SparseMat<i64>>) {
        // subdivision vertices = simplices of self, ordered by (dim, lex)
        let mut sd_vertex_id: BTreeMap<(usize, usize), Vertex> = BTreeMap::new();
        let mut next = 0u32;
        for (p, level) in self.simplices.iter().enumerate() {
            for i in 0..level.len() {
                sd_vertex_id.insert((p, i), next);
                next += 1;
            }
        }
        // maximal simplices of sd = full flags inside maximal simplices of self
        let d = self.dim();
        let mut maximal_flags: Vec<Simplex> = Vec::new();
        let maximal: Vec<(usize, usize)> = {
            // a simplex is maximal when no (p+1)-simplex contains it
            let mut out = Vec::new();
            for (p, level) in self.simplices.iter().enumerate() {
                for (i, s) in level.iter().enumerate() {
                    let extendable = p < d
                        && self.simplices[p + 1].iter().any(|t| is_subset(s, t));
                    if !extendable {
                        out.push((p, i));
                    }
                }
            }
            out
        };
        for (p, i) in maximal {
            let s = &self.simplices[p][i];
            let mut perm: Vec<usize> = (0..=p).collect();
            loop {
                // flag: prefixes of s in permuted order
                let mut flag: Simplex = Vec::with_capacity(p + 1);
                let mut prefix: Vec<Vertex> = Vec::with_capacity(p + 1);
                for k in 0..=p {
                    prefix.push(s[perm[k]]);
                    prefix.sort_unstable();
                    let idx = self.index_of(k, &prefix).unwrap();
                    flag.push(sd_vertex_id[&(k, idx)]);
                }
                flag.sort_unstable();
                maximal_flags.push(flag);
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
        maximal_flags.sort();
        maximal_flags.dedup();
        let sd = OrientedSimplicialComplex::build(&maximal_flags).expect("flags are simplices");

        // chain map by the cone recursion: sd(v) = v_hat,
        // sd(sigma) = cone(b_sigma, sd(boundary sigma)).
        let mut chains: Vec<Vec<BTreeMap<Simplex, i64>>> = Vec::with_capacity(d + 1);
        for (p, level) in self.simplices.iter().enumerate() {
            let mut level_chains = Vec::with_capacity(level.len());
            for (i, s) in level.iter().enumerate() {
                let apex = sd_vertex_id[&(p, i)];
                let mut chain: BTreeMap<Simplex, i64> = BTreeMap::new();
                if p == 0 {
                    chain.insert(vec![apex], 1);
                } else {
                    // boundary of s inside self, then cone with the apex last
                    let mut face = s.clone();
                    for k in 0..s.len() {
                        let removed = face.remove(k);
                        let fi = self.index_of(p - 1, &face).unwrap();
                        let face_sign = if k % 2 == 0 { 1 } else { -1 };
                        let cone_sign = if p % 2 == 0 { 1 } else { -1 };
                        for (tuple, coeff) in &chains[p - 1][fi] {
                            let mut t = tuple.clone();
                            t.push(apex); // apex id exceeds all lower-dim ids
                            *chain.entry(t).or_insert(0) += face_sign * cone_sign * coeff;
                        }
                        face.insert(k, removed);
                    }
                    chain.retain(|_, c| *c != 0);
                }
                level_chains.push(chain);
            }
            chains.push(level_chains);
        }

        let maps = (0..=d)
            .map(|p| {
                let rows = sd.simplices(p).len();
                let cols = self.simplices[p].len();
                let mut triplets = Vec::new();
                for (j, chain) in chains[p].iter().enumerate() {
                    for (tuple, coeff) in chain {
                        let r = sd.index_of(p, tuple).expect("sd contains chain cells");
                        triplets.push((r, j, *coeff));
                    }
                }
                SparseMat::from_i64_triplets(rows, cols, triplets)
            })
            .collect();
        (sd, maps)
    }

    /// Push a fundamental cycle through the subdivision chain map.
    pub fn subdivide_cycle(
        &self,
        sd: &OrientedSimplicialComplex,
        maps: &[SparseMat<i64>],
        cycle: &FundamentalCycle,
    ) -> Result<FundamentalCycle> {
        let d = self.dim();
        let top = &maps[d];
        let mut acc = vec![0i64; sd.simplices(d).len()];
        for (j, c) in cycle.coefficients.iter().enumerate() {
            for (r, v) in top.col(j) {
                acc[*r] += v * (*c as i64);
            }
        }
        let coefficients: Vec<i8> = acc
            .iter()
            .map(|&v| {
                if v == 1 {
                    Ok(1i8)
                } else if v == -1 {
                    Ok(-1i8)
                } else {
                    Err(Error::DegenerateForm(format!(
                        "subdivided cycle coefficient {v}"
                    )))
                }
            })
            .collect::<Result<_>>()?;
        let out = FundamentalCycle { coefficients };
        if !sd.cycle_closes(&out) {
            return Err(Error::DegenerateForm(
                "subdivided cycle does not close".into(),
            ));
        }
        Ok(out)
    }

    /// Staircase (shuffle) triangulation of the product, using the fixed
    /// vertex orders of the factors.
    pub fn product(&self, other: &OrientedSimplicialComplex) -> OrientedSimplicialComplex {
        let top = product_top_cells(self, other);
        let maximal: Vec<Simplex> = top.into_iter().map(|(cell, _)| cell).collect();
        OrientedSimplicialComplex::build(&maximal).expect("product cells are simplices")
    }

    /// Product vertex id for the pair (index in self, index in other).
    pub fn product_vertex_id(&self, other: &OrientedSimplicialComplex, ia: usize, ib: usize) -> Vertex {
        (ia * other.vertices.len() + ib) as Vertex
    }

    /// Two copies of the complex glued along their boundary subcomplex, the
    /// second with reversed orientation.
    ///
    /// Gluing two copies along the boundary is simplicial only when no
    /// interior simplex is spanned entirely by boundary vertices; when that
    /// fails (a cone over its own boundary, the cylinder) the complex is
    /// barycentrically subdivided first, after which the condition always
    /// holds (a flag lies in the boundary iff its top element does).
    pub fn double_along_boundary(&self) -> Result<OrientedSimplicialComplex> {
        let ridges = self.ridge_cofacets();
        let boundary: Vec<&Simplex> = ridges
            .iter()
            .filter(|(_, c)| c.len() == 1)
            .map(|(r, _)| r)
            .collect();
        if boundary.is_empty() {
            return Err(Error::NoBoundary);
        }
        if let Some((r, c)) = ridges.iter().find(|(_, c)| c.len() > 2) {
            return Err(Error::NonManifoldBoundary(r.clone(), c.len()));
        }
        let boundary_vertices: BTreeSet<Vertex> =
            boundary.iter().flat_map(|r| r.iter().cloned()).collect();
        let boundary_simplices: BTreeSet<Simplex> = {
            let mut set = BTreeSet::new();
            for r in &boundary {
                let n = r.len();
                for mask in 1u64..(1u64 << n) {
                    let face: Simplex = r
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, v)| *v)
                        .collect();
                    set.insert(face);
                }
            }
            set
        };
        let needs_subdivision = self.simplices.iter().flatten().any(|s| {
            s.iter().all(|v| boundary_vertices.contains(v)) && !boundary_simplices.contains(s)
        });
        if needs_subdivision {
            let (sd, _) = self.barycentric_subdivision();
            return sd.double_along_boundary();
        }
        let max_id = *self.vertices.last().unwrap();
        let interior: Vec<Vertex> = self
            .vertices
            .iter()
            .filter(|v| !boundary_vertices.contains(v))
            .cloned()
            .collect();
        let relabel: BTreeMap<Vertex, Vertex> = interior
            .iter()
            .enumerate()
            .map(|(k, &v)| (v, max_id + 1 + k as Vertex))
            .collect();
        let mut maximal: Vec<Simplex> = self.facets().to_vec();
        for f in self.facets() {
            let copy: Simplex = f
                .iter()
                .map(|v| relabel.get(v).cloned().unwrap_or(*v))
                .collect();
            let mut copy_sorted = copy;
            copy_sorted.sort_unstable();
            maximal.push(copy_sorted);
        }
        maximal.sort();
        maximal.dedup();
        OrientedSimplicialComplex::build(&maximal)
    }
}

fn is_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    let mut it = big.iter();
    'outer: for v in small {
        for w in it.by_ref() {
            match w.cmp(v) {
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
                std::cmp::Ordering::Less => {}
            }
        }
        return false;
    }
    true
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Top cells of the staircase product over all pairs of maximal simplices,
/// each with its shuffle sign relative to the factor orientations.
pub fn product_top_cells(
    k: &OrientedSimplicialComplex,
    l: &OrientedSimplicialComplex,
) -> Vec<(Simplex, i64)> {
    let vk: BTreeMap<Vertex, usize> = k
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let vl: BTreeMap<Vertex, usize> = l
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let p = k.dim();
    let q = l.dim();
    let mut out = Vec::new();
    for sigma in k.facets() {
        for tau in l.facets() {
            // enumerate monotone step sequences: bitmask with p ones among p+q
            let total = p + q;
            for mask in 0u64..(1u64 << total) {
                if mask.count_ones() as usize != p {
                    continue;
                }
                // bit set = advance in sigma, clear = advance in tau
                let mut cell: Simplex = Vec::with_capacity(total + 1);
                let (mut i, mut j) = (0usize, 0usize);
                cell.push(k.product_vertex_id(l, vk[&sigma[0]], vl[&tau[0]]));
                let mut inversions = 0u32;
                let mut c_seen = 0u32;
                for step in 0..total {
                    if mask & (1 << step) != 0 {
                        i += 1;
                        inversions += c_seen;
                    } else {
                        j += 1;
                        c_seen += 1;
                    }
                    cell.push(k.product_vertex_id(l, vk[&sigma[i]], vl[&tau[j]]));
                }
                let sign = if inversions % 2 == 0 { 1 } else { -1 };
                out.push((cell, sign));
            }
        }
    }
    out
}

/// Fundamental cycle of the product complex as the shuffle product of the
/// factor cycles.
pub fn product_fundamental_cycle(
    k: &OrientedSimplicialComplex,
    ck: &FundamentalCycle,
    l: &OrientedSimplicialComplex,
    cl: &FundamentalCycle,
    product: &OrientedSimplicialComplex,
) -> Result<FundamentalCycle> {
    let d = product.dim();
    let mut coeffs = vec![0i64; product.facets().len()];
    let cells = product_top_cells(k, l);
    let mut cell_idx = 0usize;
    for (si, _sigma) in k.facets().iter().enumerate() {
        for (ti, _tau) in l.facets().iter().enumerate() {
            let count = binomial(k.dim() + l.dim(), k.dim());
            for _ in 0..count {
                let (cell, sign) = &cells[cell_idx];
                cell_idx += 1;
                let idx = product
                    .index_of(d, cell)
                    .ok_or_else(|| Error::ShapeMismatch("product cell missing".into()))?;
                coeffs[idx] = sign * ck.coefficient(si) * cl.coefficient(ti);
            }
        }
    }
    let coefficients: Vec<i8> = coeffs
        .iter()
        .map(|&v| {
            if v == 1 || v == -1 {
                Ok(v as i8)
            } else {
                Err(Error::DegenerateForm(format!(
                    "product cycle coefficient {v}"
                )))
            }
        })
        .collect::<Result<_>>()?;
    let cycle = FundamentalCycle { coefficients };
    if !product.cycle_closes(&cycle) {
        return Err(Error::DegenerateForm("product cycle does not close".into()));
    }
    Ok(cycle)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Orientation data for a pseudomanifold with boundary: facet signs plus the
/// induced boundary cycle (the image of the oriented facet sum under the top
/// boundary matrix, supported on boundary ridges).
pub struct BoundaryData {
    pub boundary: OrientedSimplicialComplex,
    pub cycle: FundamentalCycle,
    pub facet_signs: Vec<i8>,
}

pub fn boundary_with_induced_cycle(k: &OrientedSimplicialComplex) -> Result<BoundaryData> {
    let ridges = k.ridge_cofacets();
    let boundary_ridges: Vec<Simplex> = ridges
        .iter()
        .filter(|(_, c)| c.len() == 1)
        .map(|(r, _)| r.clone())
        .collect();
    if boundary_ridges.is_empty() {
        return Err(Error::NoBoundary);
    }
    if let Some((r, c)) = ridges.iter().find(|(_, c)| c.len() > 2) {
        return Err(Error::NonManifoldBoundary(r.clone(), c.len()));
    }
    let signs = k
        .propagate_orientation(&ridges)
        .ok_or_else(|| Error::NotClosedOriented("bulk is not orientable".into()))?;
    let d = k.dim();
    let b = k.boundary_matrix(d)?;
    let mut chain: BTreeMap<usize, i64> = BTreeMap::new();
    for (j, s) in signs.iter().enumerate() {
        for (r, v) in b.col(j) {
            *chain.entry(*r).or_insert(0) += v * (*s as i64);
        }
    }
    chain.retain(|_, v| *v != 0);
    let boundary = OrientedSimplicialComplex::build(&boundary_ridges)?;
    let mut coefficients = vec![0i8; boundary.facets().len()];
    for (ridx, v) in &chain {
        let ridge = &k.simplices[d - 1][*ridx];
        let bidx = boundary
            .index_of(d - 1, ridge)
            .ok_or_else(|| Error::ShapeMismatch("boundary ridge missing".into()))?;
        if *v != 1 && *v != -1 {
            return Err(Error::NonManifoldBoundary(ridge.clone(), v.unsigned_abs() as usize));
        }
        coefficients[bidx] = *v as i8;
    }
    if coefficients.iter().any(|c| *c == 0) {
        return Err(Error::NotClosedOriented(
            "induced boundary cycle misses a facet".into(),
        ));
    }
    let cycle = FundamentalCycle { coefficients };
    if !boundary.cycle_closes(&cycle) {
        return Err(Error::NotClosedOriented(
            "induced boundary chain is not a cycle".into(),
        ));
    }
    Ok(BoundaryData {
        boundary,
        cycle,
        facet_signs: signs,
    })
}

/// A fundamental cycle supplied externally (e.g. lifted to a cover); checked
/// for closure before use.
pub fn cycle_from_signs(
    k: &OrientedSimplicialComplex,
    signs: Vec<i8>,
) -> Result<FundamentalCycle> {
    if signs.len() != k.facets().len() || signs.iter().any(|s| *s != 1 && *s != -1) {
        return Err(Error::NotClosedOriented("invalid facet signs".into()));
    }
    let cycle = FundamentalCycle {
        coefficients: signs,
    };
    if !k.cycle_closes(&cycle) {
        return Err(Error::NotClosedOriented("facet signs do not close".into()));
    }
    Ok(cycle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn build_single_triangle() {
        let k = OrientedSimplicialComplex::build(&[vec![0, 1, 2]]).unwrap();
        assert_eq!(k.f_vector(), vec![3, 3, 1]);
        assert_eq!(k.dim(), 2);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            OrientedSimplicialComplex::build(&[]),
            Err(Error::EmptyInput)
        );
        assert!(matches!(
            OrientedSimplicialComplex::build(&[vec![0, 1], vec![1, 0]]),
            Err(Error::DuplicateMaximalSimplex(_))
        ));
        assert!(matches!(
            OrientedSimplicialComplex::build(&[vec![0, 1, 1]]),
            Err(Error::InvalidSimplex(_))
        ));
    }

    #[test]
    fn boundary_of_tetra_sphere() {
        let k = fixtures::boundary_sphere(2);
        assert_eq!(k.f_vector(), vec![4, 6, 4]);
        let b1 = k.boundary_matrix(1).unwrap();
        let b2 = k.boundary_matrix(2).unwrap();
        assert!(b1.matmul_i64(&b2).unwrap().is_zero());
        assert!(k.boundary_matrix(3).is_err());
    }

    #[test]
    fn boundary_column_convention() {
        // edge [0,1] -> -[0] + [1]; triangle [0,1,2] -> [1,2] - [0,2] + [0,1]
        let k = OrientedSimplicialComplex::build(&[vec![0, 1, 2]]).unwrap();
        let b1 = k.boundary_matrix(1).unwrap();
        let j = k.index_of(1, &[0, 1]).unwrap();
        assert_eq!(b1.get(k.index_of(0, &[0]).unwrap(), j), -1);
        assert_eq!(b1.get(k.index_of(0, &[1]).unwrap(), j), 1);
        let b2 = k.boundary_matrix(2).unwrap();
        assert_eq!(b2.get(k.index_of(1, &[1, 2]).unwrap(), 0), 1);
        assert_eq!(b2.get(k.index_of(1, &[0, 2]).unwrap(), 0), -1);
        assert_eq!(b2.get(k.index_of(1, &[0, 1]).unwrap(), 0), 1);
    }

    #[test]
    fn certify_spheres_up_to_dim_5() {
        for d in 1..=5 {
            let k = fixtures::boundary_sphere(d);
            let cert = k.certify_manifold();
            assert!(cert.is_pseudomanifold && cert.is_closed && cert.is_orientable);
            assert!(cert.link_checks_passed, "links at d={d}");
            let cycle = cert.fundamental_cycle.expect("sphere oriented");
            assert_eq!(cycle.coefficient(0), 1, "normalization at d={d}");
            assert!(k.cycle_closes(&cycle));
        }
    }

    #[test]
    fn certify_open_triangle_not_closed() {
        let k = OrientedSimplicialComplex::build(&[vec![0, 1, 2]]).unwrap();
        let cert = k.certify_manifold();
        assert!(!cert.is_closed);
        assert!(cert.fundamental_cycle.is_none());
    }

    #[test]
    fn rp2_is_not_orientable() {
        let k = fixtures::projective_plane();
        let cert = k.certify_manifold();
        assert!(cert.is_pseudomanifold && cert.is_closed);
        assert!(!cert.is_orientable);
        assert!(cert.fundamental_cycle.is_none());
    }

    #[test]
    fn torus_bounded_geometry() {
        let k = fixtures::minimal_torus();
        let cert = k.certify_manifold();
        assert!(cert.is_closed && cert.is_orientable && cert.link_checks_passed);
        assert_eq!(k.bounded_geometry_constant(), 13);
    }

    #[test]
    fn bounded_geometry_small_cases() {
        let tri = OrientedSimplicialComplex::build(&[vec![0, 1, 2]]).unwrap();
        assert_eq!(tri.bounded_geometry_constant(), 4);
        assert_eq!(fixtures::boundary_sphere(2).bounded_geometry_constant(), 7);
    }

    #[test]
    fn subdivision_counts_and_chain_map() {
        let tri = OrientedSimplicialComplex::build(&[vec![0, 1, 2]]).unwrap();
        let (sd, maps) = tri.barycentric_subdivision();
        assert_eq!(sd.simplices(2).len(), 6);
        let s2 = fixtures::boundary_sphere(2);
        let (sd2, maps2) = s2.barycentric_subdivision();
        assert_eq!(sd2.simplices(2).len(), 24);
        assert_eq!(sd2.euler_characteristic(), s2.euler_characteristic());
        // chain map commutes with boundaries, exactly
        for (k, sd_k, maps_k) in [(&tri, &sd, &maps), (&s2, &sd2, &maps2)] {
            for p in 1..=k.dim() {
                let lhs = sd_k
                    .boundary_matrix(p)
                    .unwrap()
                    .matmul_i64(&maps_k[p])
                    .unwrap();
                let rhs = maps_k[p - 1]
                    .matmul_i64(&k.boundary_matrix(p).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs, "degree {p}");
            }
        }
    }

    #[test]
    fn subdivision_chain_map_on_torus() {
        let t = fixtures::minimal_torus();
        let (sd, maps) = t.barycentric_subdivision();
        for p in 1..=2 {
            let lhs = sd.boundary_matrix(p).unwrap().matmul_i64(&maps[p]).unwrap();
            let rhs = maps[p - 1].matmul_i64(&t.boundary_matrix(p).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        let cycle = t.certify_manifold().fundamental_cycle.unwrap();
        let sd_cycle = t.subdivide_cycle(&sd, &maps, &cycle).unwrap();
        assert!(sd.cycle_closes(&sd_cycle));
        assert_eq!(sd.euler_characteristic(), 0);
    }

    #[test]
    fn product_counts() {
        let s1 = fixtures::boundary_sphere(1);
        let t = s1.product(&s1);
        assert_eq!(t.f_vector(), vec![9, 27, 18]);
        assert_eq!(t.euler_characteristic(), 0);

        // X x point is X itself (vertex ids are indices, and the fixtures
        // are 0-based, so the tuples agree on the nose)
        let point = OrientedSimplicialComplex::build(&[vec![0]]).unwrap();
        let k = fixtures::boundary_sphere(2);
        let kp = k.product(&point);
        assert_eq!(kp, k);

        let s2 = fixtures::boundary_sphere(2);
        let p = s2.product(&s2);
        assert_eq!(p.simplices(0).len(), 16);
        assert_eq!(p.facets().len(), 96);
    }

    #[test]
    fn circle_boundary_matrix_rank() {
        let s1 = fixtures::boundary_sphere(1);
        let b1 = s1.boundary_matrix(1).unwrap().cast::<num_rational::BigRational>();
        assert_eq!(crate::sparse::rank(&b1), 2);
    }

    #[test]
    fn product_cycle_is_a_cycle() {
        let s1 = fixtures::boundary_sphere(1);
        let c1 = s1.certify_manifold().fundamental_cycle.unwrap();
        let t = s1.product(&s1);
        let ct = product_fundamental_cycle(&s1, &c1, &s1, &c1, &t).unwrap();
        assert!(t.cycle_closes(&ct));
        // the product of two circles is a torus
        let cert = t.certify_manifold();
        assert!(cert.is_closed && cert.is_orientable);
    }

    #[test]
    fn double_of_triangle_is_a_two_sphere() {
        // doubling a bare simplex forces a subdivision first; the result is
        // a closed orientable 2-sphere
        let tri = OrientedSimplicialComplex::build(&[vec![0, 1, 2]]).unwrap();
        let dbl = tri.double_along_boundary().unwrap();
        let cert = dbl.certify_manifold();
        assert!(cert.is_pseudomanifold && cert.is_closed && cert.is_orientable);
        assert_eq!(dbl.euler_characteristic(), 2);
    }

    #[test]
    fn double_of_cylinder_is_torus() {
        let cyl = fixtures::cylinder();
        let dbl = cyl.double_along_boundary().unwrap();
        let cert = dbl.certify_manifold();
        assert!(cert.is_pseudomanifold && cert.is_closed && cert.is_orientable);
        // chi(double) = 2 chi(K) - chi(boundary) = 0: a torus
        let bd = OrientedSimplicialComplex::build(&cyl.boundary_ridges()).unwrap();
        assert_eq!(
            dbl.euler_characteristic(),
            2 * cyl.euler_characteristic() - bd.euler_characteristic()
        );
        assert_eq!(dbl.euler_characteristic(), 0);
        // genus check through homology: H_1 has rank 2
        let c = crate::chain::simplicial_chain_complex::<num_rational::BigRational>(&dbl);
        assert_eq!(c.homology_ranks().unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn double_with_interior_vertices_skips_subdivision() {
        // a disk with an interior vertex: cone over the boundary square
        let disk = OrientedSimplicialComplex::build(&[
            vec![0, 1, 4],
            vec![1, 2, 4],
            vec![2, 3, 4],
            vec![0, 3, 4],
        ])
        .unwrap();
        let dbl = disk.double_along_boundary().unwrap();
        assert_eq!(dbl.f_vector(), vec![6, 12, 8]);
        let cert = dbl.certify_manifold();
        assert!(cert.is_closed && cert.is_orientable);
        assert_eq!(dbl.euler_characteristic(), 2);
    }

    #[test]
    fn double_of_closed_complex_errors() {
        let s2 = fixtures::boundary_sphere(2);
        assert_eq!(s2.double_along_boundary(), Err(Error::NoBoundary));
    }

    #[test]
    fn orientation_reverse_involution() {
        let k = fixtures::boundary_sphere(2);
        let c = k.certify_manifold().fundamental_cycle.unwrap();
        let r = orientation_reverse(&c);
        assert!(r.coefficients().iter().zip(c.coefficients()).all(|(a, b)| *a == -*b));
        assert_eq!(orientation_reverse(&r), c);
    }

    #[test]
    fn induced_boundary_cycle_of_simplex() {
        let delta5 = OrientedSimplicialComplex::build(&[vec![0, 1, 2, 3, 4, 5]]).unwrap();
        let data = boundary_with_induced_cycle(&delta5).unwrap();
        assert_eq!(data.boundary.f_vector(), fixtures::boundary_sphere(4).f_vector());
        assert!(data.boundary.cycle_closes(&data.cycle));
    }
}
