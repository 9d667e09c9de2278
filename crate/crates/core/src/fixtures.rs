//! Canonical fixture complexes and cocycles. The JSON files shipped under
//! `fixtures/` are serializations of these; a test keeps them in sync.

use crate::coeff::IntVecCocycle;
use crate::simplicial::{OrientedSimplicialComplex, Vertex};

/// Boundary of the (d+1)-simplex: the minimal triangulation of the d-sphere.
pub fn boundary_sphere(d: usize) -> OrientedSimplicialComplex {
    let n = d + 2;
    let mut maximal = Vec::with_capacity(n);
    for skip in 0..n {
        let facet: Vec<Vertex> = (0..n as Vertex).filter(|&v| v != skip as Vertex).collect();
        maximal.push(facet);
    }
    OrientedSimplicialComplex::build(&maximal).unwrap()
}

/// The full (d)-simplex on d+1 vertices (a d-ball).
pub fn solid_simplex(d: usize) -> OrientedSimplicialComplex {
    let facet: Vec<Vertex> = (0..=d as Vertex).collect();
    OrientedSimplicialComplex::build(&[facet]).unwrap()
}

/// The 7-vertex (Moebius-Kantor) torus: vertex links are hexagons, every
/// pair of vertices spans an edge.
pub fn minimal_torus() -> OrientedSimplicialComplex {
    let mut maximal = Vec::with_capacity(14);
    for i in 0..7u32 {
        maximal.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        maximal.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    OrientedSimplicialComplex::build(&maximal).unwrap()
}

/// The 6-vertex real projective plane (icosahedron quotient).
pub fn projective_plane() -> OrientedSimplicialComplex {
    let maximal: Vec<Vec<Vertex>> = vec![
        vec![0, 1, 2],
        vec![0, 1, 5],
        vec![0, 2, 4],
        vec![0, 3, 4],
        vec![0, 3, 5],
        vec![1, 2, 3],
        vec![1, 3, 4],
        vec![1, 4, 5],
        vec![2, 3, 5],
        vec![2, 4, 5],
    ];
    OrientedSimplicialComplex::build(&maximal).unwrap()
}

/// Triangulated cylinder S^1 x I (staircase over the 3-vertex circle).
/// Vertex 2i + j is (circle vertex i, interval vertex j).
pub fn cylinder() -> OrientedSimplicialComplex {
    let maximal: Vec<Vec<Vertex>> = vec![
        vec![0, 2, 3],
        vec![0, 1, 3],
        vec![2, 4, 5],
        vec![2, 3, 5],
        vec![0, 4, 5],
        vec![0, 1, 5],
    ];
    OrientedSimplicialComplex::build(&maximal).unwrap()
}

/// The 9-vertex triangulation of the complex projective plane.
///
/// Facets are the orbit of four seed simplices under the order-9 group
/// generated by (0 1 2)(3 4 5)(6 7 8) and v -> v + 3 (mod 9); labels 7 and 8
/// are then swapped so that the normalized fundamental cycle (lex-least
/// facet positive) pairs to +1 on the middle cohomology form.
pub fn complex_projective_plane() -> OrientedSimplicialComplex {
    let seeds: [[u32; 5]; 4] = [
        [0, 1, 3, 4, 5],
        [0, 1, 3, 4, 8],
        [1, 2, 5, 3, 8],
        [2, 0, 4, 5, 8],
    ];
    let rotate = |v: u32| -> u32 { (v / 3) * 3 + (v + 1) % 3 };
    let mut maximal = Vec::with_capacity(36);
    for seed in seeds {
        for rot in 0..3 {
            for shift in [0u32, 3, 6] {
                let mut f: Vec<Vertex> = seed
                    .iter()
                    .map(|&v| {
                        let mut w = v;
                        for _ in 0..rot {
                            w = rotate(w);
                        }
                        (w + shift) % 9
                    })
                    .map(|v| match v {
                        7 => 8,
                        8 => 7,
                        other => other,
                    })
                    .collect();
                f.sort_unstable();
                maximal.push(f);
            }
        }
    }
    maximal.sort();
    maximal.dedup();
    OrientedSimplicialComplex::build(&maximal).unwrap()
}

/// Lattice vector of a directed step on the 7-vertex torus. The torus is
/// the quotient of the triangular lattice, so the steps +1, +2, +3 (mod 7)
/// carry the vectors (1,0), (0,1), (1,1); this makes the assignment a flat
/// Z^2-valued edge cocycle.
fn torus_step_vector(diff: u32) -> [i64; 2] {
    match diff {
        1 => [1, 0],
        2 => [0, 1],
        3 => [1, 1],
        other => panic!("not a step of the 7-vertex torus: {other}"),
    }
}

/// The standard Z^2-valued cocycle on the 7-vertex torus (lattice
/// displacement of each edge).
pub fn torus_lattice_cocycle(t: &OrientedSimplicialComplex) -> IntVecCocycle {
    let entries: Vec<(Vertex, Vertex, Vec<i64>)> = t
        .simplices(1)
        .iter()
        .map(|e| {
            let (v, w) = (e[0], e[1]);
            let fwd = (w + 7 - v) % 7;
            if fwd <= 3 {
                // natural step v -> w: transport value(to=w, from=v)
                let m = torus_step_vector(fwd);
                (w, v, vec![m[0], m[1]])
            } else {
                let m = torus_step_vector(7 - fwd);
                (v, w, vec![m[0], m[1]])
            }
        })
        .collect();
    IntVecCocycle::build(t, 2, &entries).unwrap()
}

/// Integer cocycle winding once around one handle of the torus (the first
/// lattice coordinate; its holonomy around the 7-cycle 0,1,...,6 is 7).
pub fn torus_winding_cocycle(t: &OrientedSimplicialComplex) -> IntVecCocycle {
    let full = torus_lattice_cocycle(t);
    let entries: Vec<(Vertex, Vertex, Vec<i64>)> = t
        .simplices(1)
        .iter()
        .map(|e| (e[0], e[1], vec![full.value(e[0], e[1])[0]]))
        .collect();
    IntVecCocycle::build(t, 1, &entries).unwrap()
}

/// The winding cocycle reduced modulo m, as group-element indices for the
/// cyclic group Z/m (element k is the k-th power of the generator).
pub fn torus_zm_cocycle_edges(t: &OrientedSimplicialComplex, m: usize) -> Vec<(Vertex, Vertex, usize)> {
    let z = torus_winding_cocycle(t);
    t.simplices(1)
        .iter()
        .map(|e| {
            let v = z.value(e[0], e[1])[0].rem_euclid(m as i64) as usize;
            (e[0], e[1], v)
        })
        .collect()
}
