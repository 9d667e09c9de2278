//! Principal covers of a base complex presented by flat edge cocycles, the
//! twisted matrices they induce per irrep, and the explicit total space
//! used as a small-instance oracle.

use crate::chain::BasedChainComplex;
use crate::coeff::{transported_complex, Block, Transport};
use crate::error::{Error, Result};
use crate::group::{GroupData, Irrep};
use crate::scalar::Scalar;
use crate::simplicial::{
    cycle_from_signs, FundamentalCycle, OrientedSimplicialComplex, Vertex,
};
use std::collections::BTreeMap;

/// A pi-principal cover of a closed oriented base, encoded by a flat edge
/// cocycle. The total space is never materialized for computation; all
/// downstream work uses twisted matrices.
#[derive(Clone, Debug)]
pub struct CoverComplex {
    base: OrientedSimplicialComplex,
    group: GroupData,
    /// cocycle value for (v, w) with v < w: transport from the fiber over w
    /// to the fiber over v.
    cocycle: BTreeMap<(Vertex, Vertex), usize>,
}

impl CoverComplex {
    /// Validate edges against the base, antisymmetry by construction, and
    /// flatness over every triangle.
    pub fn build(
        base: OrientedSimplicialComplex,
        group: GroupData,
        edges: &[(Vertex, Vertex, usize)],
    ) -> Result<Self> {
        let mut cocycle: BTreeMap<(Vertex, Vertex), usize> = BTreeMap::new();
        for (v, w, g) in edges {
            if *g >= group.group.order() {
                return Err(Error::InvalidGroup(format!("element index {g} out of range")));
            }
            if v == w {
                return Err(Error::ShapeMismatch(format!("loop edge ({v},{v})")));
            }
            let (key, val) = if v < w {
                ((*v, *w), *g)
            } else {
                ((*w, *v), group.group.inv(*g))
            };
            if base.index_of(1, &[key.0, key.1]).is_none() {
                return Err(Error::ShapeMismatch(format!(
                    "cocycle edge ({},{}) is not an edge of the base",
                    key.0, key.1
                )));
            }
            cocycle.insert(key, val);
        }
        for e in base.simplices(1) {
            if !cocycle.contains_key(&(e[0], e[1])) {
                return Err(Error::MissingEdge(e[0], e[1]));
            }
        }
        let cover = CoverComplex {
            base,
            group,
            cocycle,
        };
        if cover.base.dim() >= 2 {
            for t in cover.base.simplices(2) {
                // g(u,v) g(v,w) = g(u,w) for u < v < w
                let lhs = cover
                    .group
                    .group
                    .mul(cover.g(t[0], t[1]), cover.g(t[1], t[2]));
                if lhs != cover.g(t[0], t[2]) {
                    return Err(Error::CocycleNotFlat(t.clone()));
                }
            }
        }
        Ok(cover)
    }

    pub fn trivial(base: OrientedSimplicialComplex, group: GroupData) -> Result<Self> {
        let e = group.group.identity();
        let edges: Vec<(Vertex, Vertex, usize)> = base
            .simplices(1)
            .iter()
            .map(|edge| (edge[0], edge[1], e))
            .collect();
        CoverComplex::build(base, group, &edges)
    }

    pub fn base(&self) -> &OrientedSimplicialComplex {
        &self.base
    }

    pub fn group(&self) -> &GroupData {
        &self.group
    }

    /// Transport from the fiber over `from` to the fiber over `to` along an
    /// edge (or the identity for equal vertices).
    pub fn g(&self, to: Vertex, from: Vertex) -> usize {
        if to == from {
            return self.group.group.identity();
        }
        if to < from {
            self.cocycle[&(to, from)]
        } else {
            self.group.group.inv(self.cocycle[&(from, to)])
        }
    }

    /// Ordered product of cocycle values along a vertex path; transport from
    /// the fiber over the first vertex to the fiber over the last.
    pub fn holonomy(&self, path: &[Vertex]) -> Result<usize> {
        let mut acc = self.group.group.identity();
        for pair in path.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b {
                continue;
            }
            let key = if a < b { [a, b] } else { [b, a] };
            if self.base.index_of(1, &key).is_none() {
                return Err(Error::NotAPath(a, b));
            }
            acc = self.group.group.mul(self.g(b, a), acc);
        }
        Ok(acc)
    }

    pub fn irrep_index(&self, label: &str) -> Result<usize> {
        self.group
            .irreps
            .iter()
            .position(|r| r.label() == label)
            .ok_or_else(|| Error::UnknownIrrep(label.to_string()))
    }

    /// Twisted boundary matrix in degree p for the given irrep.
    pub fn twisted_boundary<S: Scalar>(&self, irrep: usize, p: usize) -> Result<crate::sparse::SparseMat<S>> {
        let transport = CoverTransport {
            cover: self,
            irrep: self.irrep_checked(irrep)?,
        };
        crate::coeff::transported_boundary(&self.base, &transport, p)
    }

    /// The full twisted chain complex for one irrep.
    pub fn twisted_complex<S: Scalar>(&self, irrep: usize) -> Result<BasedChainComplex<S>> {
        let transport = CoverTransport {
            cover: self,
            irrep: self.irrep_checked(irrep)?,
        };
        transported_complex(&self.base, &transport)
    }

    fn irrep_checked(&self, irrep: usize) -> Result<usize> {
        if irrep >= self.group.irreps.len() {
            return Err(Error::UnknownIrrep(format!("#{irrep}")));
        }
        Ok(irrep)
    }

    /// Explicit total space: vertex (v, h) gets id pos(v) * |G| + h; facets
    /// are the |G| lifts of each base facet. Returns the lifted fundamental
    /// cycle when the base is closed oriented.
    pub fn materialize_total_space(
        &self,
    ) -> Result<(OrientedSimplicialComplex, Option<FundamentalCycle>)> {
        let n = self.group.group.order();
        let vpos: BTreeMap<Vertex, usize> = self
            .base
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut maximal = Vec::with_capacity(self.base.facets().len() * n);
        for facet in self.base.facets() {
            let anchor = facet[0];
            for h in 0..n {
                let lift: Vec<Vertex> = facet
                    .iter()
                    .map(|&v| {
                        let fiber = self.group.group.mul(self.g(v, anchor), h);
                        (vpos[&v] * n + fiber) as Vertex
                    })
                    .collect();
                let mut lift_sorted = lift;
                lift_sorted.sort_unstable();
                maximal.push(lift_sorted);
            }
        }
        let total = OrientedSimplicialComplex::build(&maximal)?;
        let cycle = match self.base.certify_manifold().fundamental_cycle {
            None => None,
            Some(base_cycle) => {
                // lifted signs: within a lift, ids sort by base vertex, so
                // the sorted order agrees with the base facet's order and
                // the sign transfers unchanged
                let mut signs = vec![0i8; total.facets().len()];
                for (fi, facet) in self.base.facets().iter().enumerate() {
                    let anchor = facet[0];
                    for h in 0..n {
                        let mut lift: Vec<Vertex> = facet
                            .iter()
                            .map(|&v| {
                                let fiber = self.group.group.mul(self.g(v, anchor), h);
                                (vpos[&v] * n + fiber) as Vertex
                            })
                            .collect();
                        lift.sort_unstable();
                        let idx = total.index_of(total.dim(), &lift).unwrap();
                        signs[idx] = base_cycle.coefficients()[fi];
                    }
                }
                Some(cycle_from_signs(&total, signs)?)
            }
        };
        Ok((total, cycle))
    }

    /// Change the cocycle by the coboundary of a vertex relabeling
    /// `h: V -> pi`, i.e. `g'(v,w) = h(v) g(v,w) h(w)^{-1}`.
    pub fn gauge_transform(&self, h: &[usize]) -> Result<CoverComplex> {
        if h.len() != self.base.vertices().len() {
            return Err(Error::ShapeMismatch(
                "gauge vector length != vertex count".into(),
            ));
        }
        let vpos: BTreeMap<Vertex, usize> = self
            .base
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let grp = &self.group.group;
        let edges: Vec<(Vertex, Vertex, usize)> = self
            .cocycle
            .iter()
            .map(|(&(v, w), &g)| {
                let hv = h[vpos[&v]];
                let hw = h[vpos[&w]];
                (v, w, grp.mul(grp.mul(hv, g), grp.inv(hw)))
            })
            .collect();
        CoverComplex::build(self.base.clone(), self.group.clone(), &edges)
    }

    /// Restrict the cocycle to a subcomplex (e.g. the boundary of a bulk).
    pub fn restrict_to(&self, sub: &OrientedSimplicialComplex) -> Result<CoverComplex> {
        let edges: Vec<(Vertex, Vertex, usize)> = sub
            .simplices(1)
            .iter()
            .map(|e| {
                if self.base.index_of(1, e).is_none() {
                    Err(Error::MissingEdge(e[0], e[1]))
                } else {
                    Ok((e[0], e[1], self.g(e[0], e[1])))
                }
            })
            .collect::<Result<_>>()?;
        CoverComplex::build(sub.clone(), self.group.clone(), &edges)
    }
}

/// Transport along the cover's cocycle through one irrep.
pub struct CoverTransport<'a> {
    pub cover: &'a CoverComplex,
    pub irrep: usize,
}

impl<'a, S: Scalar> Transport<S> for CoverTransport<'a> {
    fn dim(&self) -> usize {
        self.cover.group.irreps[self.irrep].dim()
    }

    fn block(&self, to: Vertex, from: Vertex) -> Result<Block<S>> {
        let g = self.cover.g(to, from);
        match &self.cover.group.irreps[self.irrep] {
            Irrep::Character { order, exps, .. } => {
                let v = S::root_of_unity(exps[g], *order).ok_or_else(|| {
                    Error::UnsupportedMode(format!(
                        "character of order {order} is not exact in this scalar mode"
                    ))
                })?;
                Ok(vec![vec![v]])
            }
            Irrep::MatrixRep { mats, .. } => mats[g]
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|z| {
                            S::from_c64(*z).ok_or_else(|| {
                                Error::UnsupportedMode(
                                    "matrix irreps require the float scalar mode".into(),
                                )
                            })
                        })
                        .collect()
                })
                .collect(),
        }
    }
}
