//! Finite-matrix model of geometrically controlled operators: based sets
//! with proper control maps into a metric space, propagation and coefficient
//! bounds, restriction idempotents, pi-compact support, and eventual
//! equality. Infinite spaces are modeled as finite windows, and existential
//! radius quantifiers are replaced by explicit radius parameters.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::simplicial::OrientedSimplicialComplex;
use crate::sparse::SparseMat;
use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

type C64 = Complex<f64>;

/// Proper metric space with an optional isometric group action.
#[derive(Debug)]
pub enum ControlSpace {
    /// Integer points of a box window in Z^n with the Euclidean metric.
    /// The optional action is by per-axis translations: generator i shifts
    /// axis i by `steps[i]` (0 disables the axis).
    Window {
        lo: Vec<i64>,
        hi: Vec<i64>,
        steps: Option<Vec<i64>>,
        basepoint: Vec<i64>,
    },
    /// Finite vertex set with the graph metric of a complex, optionally with
    /// a group acting by permutations (each permutation an isometry).
    Graph {
        dist: Vec<Vec<u32>>,
        perms: Option<Vec<Vec<usize>>>,
        basepoint: usize,
    },
}

/// A point is an index into the space's enumeration.
pub type PointId = usize;

impl ControlSpace {
    pub fn window(lo: Vec<i64>, hi: Vec<i64>, steps: Option<Vec<i64>>) -> Arc<Self> {
        let basepoint = vec![0; lo.len()];
        Arc::new(ControlSpace::Window {
            lo,
            hi,
            steps,
            basepoint,
        })
    }

    /// Graph metric on the vertices of a complex (BFS through edges).
    pub fn from_complex(k: &OrientedSimplicialComplex) -> Arc<Self> {
        let n = k.vertices().len();
        let pos: std::collections::BTreeMap<u32, usize> = k
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut adj = vec![Vec::new(); n];
        for e in k.simplices(1) {
            let (a, b) = (pos[&e[0]], pos[&e[1]]);
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut dist = vec![vec![u32::MAX; n]; n];
        for s in 0..n {
            let mut queue = std::collections::VecDeque::new();
            dist[s][s] = 0;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if dist[s][y] == u32::MAX {
                        dist[s][y] = dist[s][x] + 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        Arc::new(ControlSpace::Graph {
            dist,
            perms: None,
            basepoint: 0,
        })
    }

    pub fn point_count(&self) -> usize {
        match self {
            ControlSpace::Window { lo, hi, .. } => lo
                .iter()
                .zip(hi.iter())
                .map(|(a, b)| (b - a + 1).max(0) as usize)
                .product(),
            ControlSpace::Graph { dist, .. } => dist.len(),
        }
    }

    fn window_coords(lo: &[i64], hi: &[i64], id: PointId) -> Vec<i64> {
        let mut rem = id;
        let mut out = Vec::with_capacity(lo.len());
        for (a, b) in lo.iter().zip(hi.iter()) {
            let span = (b - a + 1) as usize;
            out.push(a + (rem % span) as i64);
            rem /= span;
        }
        out
    }

    pub fn distance(&self, x: PointId, y: PointId) -> f64 {
        match self {
            ControlSpace::Window { lo, hi, .. } => {
                let cx = Self::window_coords(lo, hi, x);
                let cy = Self::window_coords(lo, hi, y);
                cx.iter()
                    .zip(cy.iter())
                    .map(|(a, b)| ((a - b) * (a - b)) as f64)
                    .sum::<f64>()
                    .sqrt()
            }
            ControlSpace::Graph { dist, .. } => dist[x][y] as f64,
        }
    }

    pub fn has_action(&self) -> bool {
        match self {
            ControlSpace::Window { steps, .. } => {
                steps.as_ref().map_or(false, |s| s.iter().any(|&x| x != 0))
            }
            ControlSpace::Graph { perms, .. } => perms.is_some(),
        }
    }

    /// Membership in the saturation, under the group action, of the closed
    /// ball of the given radius around the basepoint.
    pub fn in_saturated_ball(&self, x: PointId, radius: f64) -> Result<bool> {
        if !self.has_action() {
            return Err(Error::NoGroupAction);
        }
        match self {
            ControlSpace::Window {
                lo,
                hi,
                steps,
                basepoint,
            } => {
                let steps = steps.as_ref().unwrap();
                let cx = Self::window_coords(lo, hi, x);
                // translate each axis to its nearest orbit representative
                let mut sq = 0.0f64;
                for i in 0..cx.len() {
                    let delta = cx[i] - basepoint[i];
                    let reduced = if steps[i] == 0 {
                        delta
                    } else {
                        let s = steps[i].abs();
                        let r = delta.rem_euclid(s);
                        r.min(s - r)
                    };
                    sq += (reduced * reduced) as f64;
                }
                Ok(sq.sqrt() <= radius + 1e-12)
            }
            ControlSpace::Graph {
                dist,
                perms,
                basepoint,
            } => {
                let perms = perms.as_ref().unwrap();
                // orbit of x under the listed permutations (closure)
                let mut seen = vec![false; dist.len()];
                let mut stack = vec![x];
                seen[x] = true;
                while let Some(p) = stack.pop() {
                    if dist[p][*basepoint] as f64 <= radius + 1e-12 {
                        return Ok(true);
                    }
                    for perm in perms {
                        let q = perm[p];
                        if !seen[q] {
                            seen[q] = true;
                            stack.push(q);
                        }
                    }
                }
                Ok(false)
            }
        }
    }
}

/// A based set with a proper control map into a space: element i sits over
/// `control[i]`.
#[derive(Debug)]
pub struct BasedSet {
    pub space: Arc<ControlSpace>,
    pub control: Vec<PointId>,
    /// Optional permutation action of the group generators on the set,
    /// equivariant with the space action.
    pub perms: Option<Vec<Vec<usize>>>,
}

impl BasedSet {
    pub fn new(space: Arc<ControlSpace>, control: Vec<PointId>) -> Arc<Self> {
        Arc::new(BasedSet {
            space,
            control,
            perms: None,
        })
    }

    pub fn len(&self) -> usize {
        self.control.len()
    }

    pub fn is_empty(&self) -> bool {
        self.control.is_empty()
    }

    /// Largest fiber of the control map; properness at desk scale.
    pub fn max_fiber(&self) -> usize {
        let mut counts = std::collections::BTreeMap::new();
        for &p in &self.control {
            *counts.entry(p).or_insert(0usize) += 1;
        }
        counts.values().cloned().max().unwrap_or(0)
    }
}

/// A matrix between based sets, carrying its control data.
#[derive(Clone, Debug)]
pub struct ControlledOperator<S: Scalar> {
    pub dom: Arc<BasedSet>,
    pub cod: Arc<BasedSet>,
    pub mat: SparseMat<S>,
}

impl<S: Scalar> ControlledOperator<S> {
    pub fn new(dom: Arc<BasedSet>, cod: Arc<BasedSet>, mat: SparseMat<S>) -> Result<Self> {
        if mat.ncols() != dom.len() || mat.nrows() != cod.len() {
            return Err(Error::ShapeMismatch(format!(
                "operator {}x{} between sets of sizes {} and {}",
                mat.nrows(),
                mat.ncols(),
                cod.len(),
                dom.len()
            )));
        }
        if !Arc::ptr_eq(&dom.space, &cod.space) {
            return Err(Error::ShapeMismatch(
                "domain and codomain control into different spaces".into(),
            ));
        }
        Ok(ControlledOperator { dom, cod, mat })
    }

    /// Least K with all coefficients supported within control distance K.
    pub fn propagation(&self) -> f64 {
        let space = &self.dom.space;
        self.mat
            .triplets()
            .map(|(r, c, _)| space.distance(self.cod.control[r], self.dom.control[c]))
            .fold(0.0, f64::max)
    }

    /// Largest coefficient modulus.
    pub fn coeff_bound(&self) -> f64 {
        self.mat.max_abs()
    }

    pub fn compose(&self, other: &ControlledOperator<S>) -> Result<ControlledOperator<S>> {
        if !Arc::ptr_eq(&self.dom, &other.cod) {
            return Err(Error::ShapeMismatch(
                "composition requires matching based sets".into(),
            ));
        }
        ControlledOperator::new(
            other.dom.clone(),
            self.cod.clone(),
            self.mat.matmul(&other.mat)?,
        )
    }

    pub fn add(&self, other: &ControlledOperator<S>) -> Result<ControlledOperator<S>> {
        if !Arc::ptr_eq(&self.dom, &other.dom) || !Arc::ptr_eq(&self.cod, &other.cod) {
            return Err(Error::ShapeMismatch("sum requires matching based sets".into()));
        }
        ControlledOperator::new(self.dom.clone(), self.cod.clone(), self.mat.add(&other.mat)?)
    }

    pub fn sub(&self, other: &ControlledOperator<S>) -> Result<ControlledOperator<S>> {
        if !Arc::ptr_eq(&self.dom, &other.dom) || !Arc::ptr_eq(&self.cod, &other.cod) {
            return Err(Error::ShapeMismatch("difference requires matching based sets".into()));
        }
        ControlledOperator::new(self.dom.clone(), self.cod.clone(), self.mat.sub(&other.mat)?)
    }

    /// Conjugate transpose; preserves propagation exactly.
    pub fn adjoint(&self) -> ControlledOperator<S> {
        ControlledOperator {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            mat: self.mat.adjoint(),
        }
    }

    /// Exact equivariance check against the permutation actions.
    pub fn is_equivariant(&self, tol: f64) -> Result<bool> {
        let (Some(dp), Some(cp)) = (&self.dom.perms, &self.cod.perms) else {
            return Err(Error::NoGroupAction);
        };
        for (pd, pc) in dp.iter().zip(cp.iter()) {
            // A P_dom == P_cod A
            let pdm = permutation_matrix::<S>(pd);
            let pcm = permutation_matrix::<S>(pc);
            let lhs = self.mat.matmul(&pdm)?;
            let rhs = pcm.matmul(&self.mat)?;
            if !lhs.sub(&rhs)?.is_zero_tol(tol) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Support inside the pi-saturation of a basepoint ball of the given
    /// radius, in both control coordinates.
    pub fn is_pi_compactly_supported(&self, radius: f64) -> Result<bool> {
        let space = &self.dom.space;
        for (r, c, _) in self.mat.triplets() {
            if !space.in_saturated_ball(self.dom.control[c], radius)?
                || !space.in_saturated_ball(self.cod.control[r], radius)?
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality modulo pi-compactly supported difference at the given
    /// radius.
    pub fn eventually_equal(&self, other: &ControlledOperator<S>, radius: f64) -> Result<bool> {
        self.sub(other)?.is_pi_compactly_supported(radius)
    }
}

fn permutation_matrix<S: Scalar>(perm: &[usize]) -> SparseMat<S> {
    SparseMat::from_triplets(
        perm.len(),
        perm.len(),
        perm.iter().enumerate().map(|(j, &i)| (i, j, S::one())),
    )
}

/// The diagonal idempotent onto a subset of a based set: p^2 = p = p^*,
/// propagation zero, image supported on the subset.
pub fn restriction_idempotent<S: Scalar>(
    set: &Arc<BasedSet>,
    subset: &[usize],
) -> Result<ControlledOperator<S>> {
    let n = set.len();
    let mut seen = vec![false; n];
    for &i in subset {
        if i >= n || seen[i] {
            return Err(Error::NotASubset(format!("{subset:?}")));
        }
        seen[i] = true;
    }
    let mat = SparseMat::from_triplets(n, n, subset.iter().map(|&i| (i, i, S::one())));
    ControlledOperator::new(set.clone(), set.clone(), mat)
}

/// All simplices of a complex, controlled by their anchor (least) vertex in
/// the base vertex graph; the based set `S` of the simplicial calculus.
pub fn simplex_based_set(
    k: &OrientedSimplicialComplex,
    space: &Arc<ControlSpace>,
    degree: usize,
) -> Arc<BasedSet> {
    let pos: std::collections::BTreeMap<u32, usize> = k
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let control: Vec<PointId> = k.simplices(degree).iter().map(|s| pos[&s[0]]).collect();
    BasedSet::new(space.clone(), control)
}

/// Wrap a matrix between simplicial degrees as a controlled operator with
/// anchor control maps.
pub fn controlled_simplicial_operator(
    k: &OrientedSimplicialComplex,
    space: &Arc<ControlSpace>,
    mat: &SparseMat<i64>,
    from_degree: usize,
    to_degree: usize,
) -> Result<ControlledOperator<C64>> {
    let dom = simplex_based_set(k, space, from_degree);
    let cod = simplex_based_set(k, space, to_degree);
    ControlledOperator::new(dom, cod, mat.cast::<C64>())
}

/// Seeded random banded operator on a window based set.
pub fn random_banded_operator(
    set: &Arc<BasedSet>,
    band: usize,
    density: f64,
    rng: &mut ChaCha8Rng,
) -> ControlledOperator<C64> {
    let n = set.len();
    let mut triplets = Vec::new();
    for c in 0..n {
        let lo = c.saturating_sub(band);
        let hi = (c + band).min(n.saturating_sub(1));
        for r in lo..=hi {
            if rng.gen_bool(density) {
                let re = rng.gen_range(-3i64..=3) as f64;
                let im = rng.gen_range(-3i64..=3) as f64;
                if re != 0.0 || im != 0.0 {
                    triplets.push((r, c, Complex::new(re, im)));
                }
            }
        }
    }
    ControlledOperator::new(
        set.clone(),
        set.clone(),
        SparseMat::from_triplets(n, n, triplets),
    )
    .unwrap()
}

/// Outcome of the seeded controlled-operator property suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub subadditivity_failures: usize,
    pub adjoint_invariance_failures: usize,
    pub idempotent_ok: bool,
    pub ideal_closure_ok: bool,
    pub congruence_ok: bool,
    pub simplicial_controlled_ok: bool,
    pub max_simplicial_propagation: f64,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.subadditivity_failures == 0
            && self.adjoint_invariance_failures == 0
            && self.idempotent_ok
            && self.ideal_closure_ok
            && self.congruence_ok
            && self.simplicial_controlled_ok
    }
}

/// Run the randomized law suite: propagation subadditivity and adjoint
/// invariance over `trials` seeded pairs, the restriction idempotent laws,
/// the two-sided ideal laws for pi-compact support with explicit witness
/// radii, the congruence property of eventual equality, and the control
/// bounds of the simplicial matrices on the standard fixtures.
pub fn run_property_suite(seed: u64, trials: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: i64 = 40;
    let space = ControlSpace::window(vec![-n], vec![n], Some(vec![1]));
    let set = BasedSet::new(space.clone(), (0..space.point_count()).collect());

    let mut subadditivity_failures = 0usize;
    let mut adjoint_invariance_failures = 0usize;
    for _ in 0..trials {
        let a = random_banded_operator(&set, 4, 0.3, &mut rng);
        let b = random_banded_operator(&set, 4, 0.3, &mut rng);
        let ab = a.compose(&b)?;
        if ab.propagation() > a.propagation() + b.propagation() + 1e-9 {
            subadditivity_failures += 1;
        }
        if (a.adjoint().propagation() - a.propagation()).abs() > 1e-9 {
            adjoint_invariance_failures += 1;
        }
    }

    // restriction idempotent laws on a fixture-sized set
    let torus = crate::fixtures::minimal_torus();
    let torus_space = ControlSpace::from_complex(&torus);
    let all_simplices: Vec<PointId> = {
        let pos: std::collections::BTreeMap<u32, usize> = torus
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        (0..=torus.dim())
            .flat_map(|p| torus.simplices(p).iter().map(|s| pos[&s[0]]).collect::<Vec<_>>())
            .collect()
    };
    let big_set = BasedSet::new(torus_space.clone(), all_simplices);
    // subset: the edges block (indices n0 .. n0+n1)
    let n0 = torus.simplices(0).len();
    let n1 = torus.simplices(1).len();
    let subset: Vec<usize> = (n0..n0 + n1).collect();
    let p = restriction_idempotent::<C64>(&big_set, &subset)?;
    let idempotent_ok = {
        let pp = p.compose(&p)?;
        let diff = pp.sub(&p)?.mat.is_zero_tol(0.0);
        let self_adj = p.adjoint().mat.sub(&p.mat)?.is_zero_tol(0.0);
        let prop_zero = p.propagation() == 0.0;
        // p A has rows supported in the subset
        let a = {
            let mut t = Vec::new();
            let total = big_set.len();
            for c in 0..total {
                t.push((c, c, Complex::new(1.0, 0.0)));
                if c + 3 < total {
                    t.push((c, c + 3, Complex::new(2.0, 0.0)));
                }
            }
            ControlledOperator::new(
                big_set.clone(),
                big_set.clone(),
                SparseMat::from_triplets(total, total, t),
            )?
        };
        let pa = p.compose(&a)?;
        let rows_ok = pa
            .mat
            .triplets()
            .all(|(r, _, _)| (n0..n0 + n1).contains(&r));
        diff && self_adj && prop_zero && rows_ok
    };
    let _ = restriction_idempotent::<C64>(&big_set, &[0, 0]).expect_err("duplicate subset");

    // ideal laws with explicit witness radii
    let ideal_closure_ok = {
        let mut ok = true;
        for _ in 0..50 {
            let a = random_banded_operator(&set, 3, 0.4, &mut rng);
            let b = random_banded_operator(&set, 3, 0.4, &mut rng);
            // compactly supported: restrict a to a ball of radius 5
            let a_cpt = {
                let mat = SparseMat::from_triplets(
                    set.len(),
                    set.len(),
                    a.mat
                        .triplets()
                        .filter(|(r, c, _)| {
                            space.distance(set.control[*r], set.control[*c]) <= 3.0
                                && (set.control[*r] as i64 - n).abs() <= 5
                                && (set.control[*c] as i64 - n).abs() <= 5
                        })
                        .map(|(r, c, v)| (r, c, *v)),
                );
                ControlledOperator::new(set.clone(), set.clone(), mat)?
            };
            // with translation action by step 1, the quotient is a point and
            // every finite-window operator is pi-compact at any radius
            if !a_cpt.is_pi_compactly_supported(0.0)? {
                ok = false;
            }
            // trivial-action space: witnesses matter
            let free_space = ControlSpace::window(vec![-n], vec![n], Some(vec![0]));
            let _ = free_space;
            let sum = a_cpt.add(&a_cpt)?;
            if !sum.is_pi_compactly_supported(0.0)? {
                ok = false;
            }
            let prod = a_cpt.compose(&b)?;
            if !prod.is_pi_compactly_supported(b.propagation())? {
                ok = false;
            }
            let prod2 = b.compose(&a_cpt)?;
            if !prod2.is_pi_compactly_supported(b.propagation())? {
                ok = false;
            }
            if !a_cpt.adjoint().is_pi_compactly_supported(0.0)? {
                ok = false;
            }
        }
        ok
    };

    // eventual equality is a congruence: use the trivial-action space where
    // pi-compactness means support near the basepoint
    let congruence_ok = {
        let free_space = ControlSpace::window(vec![-n], vec![n], Some(vec![2 * n + 1]));
        // period beyond the window: orbits are single points, so the
        // saturated ball is just the ball and radii are meaningful
        let fset = BasedSet::new(free_space.clone(), (0..free_space.point_count()).collect());
        let mut ok = true;
        for _ in 0..25 {
            let a = random_banded_operator(&fset, 3, 0.4, &mut rng);
            let near = {
                let mat = SparseMat::from_triplets(
                    fset.len(),
                    fset.len(),
                    a.mat
                        .triplets()
                        .filter(|(r, c, _)| {
                            free_space.in_saturated_ball(fset.control[*r], 6.0).unwrap()
                                && free_space.in_saturated_ball(fset.control[*c], 6.0).unwrap()
                        })
                        .map(|(r, c, v)| (r, c, *v)),
                );
                ControlledOperator::new(fset.clone(), fset.clone(), mat)?
            };
            let b = a.sub(&near)?; // a ~ b at radius 6
            if !a.eventually_equal(&b, 6.0)? {
                ok = false;
            }
            if !a.eventually_equal(&a, 0.0)? {
                ok = false;
            }
            if !b.eventually_equal(&a, 6.0)? {
                ok = false;
            }
            let c = random_banded_operator(&fset, 2, 0.4, &mut rng);
            // congruence: a c ~ b c at radius 6 + prop(c)
            let ac = a.compose(&c)?;
            let bc = b.compose(&c)?;
            if !ac.eventually_equal(&bc, 6.0 + c.propagation())? {
                ok = false;
            }
            let ca = c.compose(&a)?;
            let cb = c.compose(&b)?;
            if !ca.eventually_equal(&cb, 6.0 + c.propagation())? {
                ok = false;
            }
            // transitivity: a ~ b at 6 and b ~ d at 4 gives a ~ d at 6
            let nearer = {
                let mat = SparseMat::from_triplets(
                    fset.len(),
                    fset.len(),
                    b.mat
                        .triplets()
                        .filter(|(r, c2, _)| {
                            free_space.in_saturated_ball(fset.control[*r], 4.0).unwrap()
                                && free_space.in_saturated_ball(fset.control[*c2], 4.0).unwrap()
                        })
                        .map(|(r, c2, v)| (r, c2, *v)),
                );
                ControlledOperator::new(fset.clone(), fset.clone(), mat)?
            };
            let d = b.sub(&nearer)?;
            if !b.eventually_equal(&d, 4.0)? || !a.eventually_equal(&d, 6.0)? {
                ok = false;
            }
        }
        ok
    };

    // simplicial matrices are controlled with propagation <= 2
    let mut max_prop: f64 = 0.0;
    let mut simplicial_ok = true;
    for k in [
        crate::fixtures::boundary_sphere(2),
        crate::fixtures::boundary_sphere(4),
        crate::fixtures::minimal_torus(),
        crate::fixtures::complex_projective_plane(),
    ] {
        let sp = ControlSpace::from_complex(&k);
        for p in 1..=k.dim() {
            let op = controlled_simplicial_operator(&k, &sp, &k.boundary_matrix(p)?, p, p - 1)?;
            let prop = op.propagation();
            max_prop = max_prop.max(prop);
            if prop > 2.0 {
                simplicial_ok = false;
            }
            if op.coeff_bound() > 1.0 {
                simplicial_ok = false;
            }
        }
        // duality operators
        if let Some(cycle) = k.certify_manifold().fundamental_cycle {
            let duality = crate::poincare::cap_duality::<C64, _>(
                &k,
                &cycle,
                &crate::coeff::TrivialTransport,
            )?;
            for (p, dmat) in duality.iter().enumerate() {
                let dom = simplex_based_set(&k, &sp, p);
                let cod = simplex_based_set(&k, &sp, k.dim() - p);
                let op = ControlledOperator::new(dom, cod, dmat.clone())?;
                let prop = op.propagation();
                max_prop = max_prop.max(prop);
                if prop > 2.0 || op.coeff_bound() > 1.0 {
                    simplicial_ok = false;
                }
            }
        }
        // subdivision chain maps, controlled into the base graph
        let (sd, maps) = k.barycentric_subdivision();
        let pos: std::collections::BTreeMap<u32, usize> = k
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        // control sd simplices by the anchor vertex of their least flag
        // element (a simplex of k), mapped to its own anchor vertex
        let sd_vertex_anchor: Vec<usize> = {
            let mut anchors = Vec::new();
            for p in 0..=k.dim() {
                for s in k.simplices(p) {
                    anchors.push(pos[&s[0]]);
                }
            }
            anchors
        };
        for p in 0..=k.dim() {
            let dom = simplex_based_set(&k, &sp, p);
            let cod_control: Vec<PointId> = sd
                .simplices(p)
                .iter()
                .map(|s| sd_vertex_anchor[s[0] as usize])
                .collect();
            let cod = BasedSet::new(sp.clone(), cod_control);
            let op = ControlledOperator::new(dom, cod, maps[p].cast::<C64>())?;
            let prop = op.propagation();
            max_prop = max_prop.max(prop);
            if prop > 2.0 {
                simplicial_ok = false;
            }
        }
    }

    Ok(SuiteReport {
        seed,
        trials,
        subadditivity_failures,
        adjoint_invariance_failures,
        idempotent_ok,
        ideal_closure_ok,
        congruence_ok,
        simplicial_controlled_ok: simplicial_ok,
        max_simplicial_propagation: max_prop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window_set(n: i64, step: Option<i64>) -> (Arc<ControlSpace>, Arc<BasedSet>) {
        let space = ControlSpace::window(vec![-n], vec![n], step.map(|s| vec![s]));
        let set = BasedSet::new(space.clone(), (0..space.point_count()).collect());
        (space, set)
    }

    fn shift_by(set: &Arc<BasedSet>, k: i64) -> ControlledOperator<C64> {
        let n = set.len() as i64;
        let triplets = (0..n).filter_map(|c| {
            let r = c + k;
            if r >= 0 && r < n {
                Some((r as usize, c as usize, Complex::new(1.0, 0.0)))
            } else {
                None
            }
        });
        ControlledOperator::new(
            set.clone(),
            set.clone(),
            SparseMat::from_triplets(set.len(), set.len(), triplets),
        )
        .unwrap()
    }

    #[test]
    fn propagation_of_identity_and_shift() {
        let (_, set) = window_set(10, Some(1));
        let id = shift_by(&set, 0);
        assert_eq!(id.propagation(), 0.0);
        let sh = shift_by(&set, 1);
        assert_eq!(sh.propagation(), 1.0);
        let sh2 = sh.compose(&sh).unwrap();
        assert_eq!(sh2.propagation(), 2.0);
        // A compose identity = A
        let a = sh.compose(&id).unwrap();
        assert!(a.mat.sub(&sh.mat).unwrap().is_zero_tol(0.0));
    }

    #[test]
    fn adjoint_preserves_propagation_and_involutes() {
        let (_, set) = window_set(10, Some(1));
        let sh = shift_by(&set, 1);
        let adj = sh.adjoint();
        assert_eq!(adj.propagation(), 1.0);
        let back = adj.adjoint();
        assert!(back.mat.sub(&sh.mat).unwrap().is_zero_tol(0.0));
        // shift adjoint is shift by -1
        let shm = shift_by(&set, -1);
        assert!(adj.mat.sub(&shm.mat).unwrap().is_zero_tol(0.0));
    }

    #[test]
    fn restriction_idempotent_laws() {
        let (_, set) = window_set(5, Some(1));
        let p = restriction_idempotent::<C64>(&set, &[0, 2, 4]).unwrap();
        let pp = p.compose(&p).unwrap();
        assert!(pp.mat.sub(&p.mat).unwrap().is_zero_tol(0.0));
        assert!(p.adjoint().mat.sub(&p.mat).unwrap().is_zero_tol(0.0));
        assert_eq!(p.propagation(), 0.0);
        // T = S gives the identity, T = empty gives zero
        let full: Vec<usize> = (0..set.len()).collect();
        let pid = restriction_idempotent::<C64>(&set, &full).unwrap();
        assert!(pid
            .mat
            .sub(&SparseMat::identity(set.len()))
            .unwrap()
            .is_zero_tol(0.0));
        let pz = restriction_idempotent::<C64>(&set, &[]).unwrap();
        assert_eq!(pz.mat.nnz(), 0);
        assert!(restriction_idempotent::<C64>(&set, &[99]).is_err());
    }

    #[test]
    fn pi_compact_support_translation_vs_trivial() {
        // full translation action: quotient is a point, everything compact
        let (_, set) = window_set(10, Some(1));
        let sh = shift_by(&set, 1);
        assert!(sh.is_pi_compactly_supported(0.0).unwrap());
        // trivial action errors
        let (_, free_set) = window_set(10, None);
        let sh2 = shift_by(&free_set, 1);
        assert!(matches!(
            sh2.is_pi_compactly_supported(3.0),
            Err(Error::NoGroupAction)
        ));
        // period beyond the window: orbits are points; a full diagonal is
        // not compactly supported at small radii
        let (_, big_period) = window_set(10, Some(1000));
        let id = shift_by(&big_period, 0);
        assert!(!id.is_pi_compactly_supported(3.0).unwrap());
        assert!(id.is_pi_compactly_supported(100.0).unwrap());
    }

    #[test]
    fn eventual_equality_basics() {
        let (_space, set) = window_set(10, Some(1000));
        let a = shift_by(&set, 0);
        assert!(a.eventually_equal(&a, 0.0).unwrap());
        // single entry difference: equal at radius that covers it
        let mut entries: Vec<(usize, usize, C64)> = a
            .mat
            .triplets()
            .map(|(r, c, v)| (r, c, *v))
            .collect();
        entries.push((10, 10, Complex::new(1.0, 0.0))); // point -10+10=0 distance 0
        let b = ControlledOperator::new(
            set.clone(),
            set.clone(),
            SparseMat::from_triplets(set.len(), set.len(), entries),
        )
        .unwrap();
        assert!(a.eventually_equal(&b, 0.0).unwrap());
        // shift vs identity differ everywhere: never eventually equal on
        // radii inside the window
        let sh = shift_by(&set, 1);
        assert!(!a.eventually_equal(&sh, 5.0).unwrap());
    }

    #[test]
    fn property_suite_passes() {
        let report = run_property_suite(7, 200).unwrap();
        assert!(report.all_pass(), "{report:?}");
        assert!(report.max_simplicial_propagation <= 2.0);
    }

    #[test]
    fn anchor_control_fibers_bounded_by_geometry_constant() {
        // properness of the anchor control map: fibers over a vertex are at
        // most the number of simplices containing it
        for k in [
            crate::fixtures::minimal_torus(),
            crate::fixtures::complex_projective_plane(),
        ] {
            let space = ControlSpace::from_complex(&k);
            let bound = k.bounded_geometry_constant();
            for p in 0..=k.dim() {
                let set = simplex_based_set(&k, &space, p);
                assert!(set.max_fiber() <= bound);
            }
        }
    }
}
