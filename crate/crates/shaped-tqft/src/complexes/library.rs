//! Built-in complexes: one-vertex knot triangulations, the two-tetrahedron
//! figure-eight knot complement, and the standalone bipyramid.

use std::collections::HashMap;

use super::{build_complex, local_edge, EdgeRef, Gluing, Triangulation, FACE_VERTICES};
use crate::error::{Error, Result};

fn ordered(table: &[(usize, usize, usize, usize)]) -> Vec<Gluing> {
    table.iter().map(|(ta, fa, tb, fb)| Gluing::ordered(*ta, *fa, *tb, *fb)).collect()
}

/// A complex with its distinguished (knot) edge.
#[derive(Debug, Clone)]
pub struct KnotComplex {
    pub complex: Triangulation,
    pub knot_edge: EdgeRef,
}

impl KnotComplex {
    fn new(orientations: &[i8], table: &[(usize, usize, usize, usize)], knot: (usize, usize, usize)) -> Self {
        let complex = build_complex(orientations, &ordered(table)).expect("built-in gluing table");
        Self { complex, knot_edge: EdgeRef { tet: knot.0, edge: [knot.1, knot.2] } }
    }

    pub fn knot_edge_id(&self) -> usize {
        self.knot_edge.resolve(&self.complex).expect("built-in edge")
    }

    /// Tetrahedron and quad carrying the knot edge.
    pub fn knot_quad(&self) -> (usize, usize) {
        let [a, b] = self.knot_edge.edge;
        (self.knot_edge.tet, super::quad_of_edge(local_edge(a, b)))
    }
}

pub fn single_tetrahedron() -> Triangulation {
    build_complex(&[1], &[]).expect("no gluings")
}

/// One tetrahedron, `∂₀ ≅ ∂₃`, `∂₁ ≅ ∂₂`; the knot is edge 03.
pub fn trefoil() -> KnotComplex {
    KnotComplex::new(&[1], &[(0, 0, 0, 3), (0, 1, 0, 2)], (0, 0, 3))
}

/// Central `T` (+), `T_L` (+), `T_R` (−); the knot is edge 23 of `T`.
pub fn figure_eight() -> KnotComplex {
    KnotComplex::new(
        &[1, 1, -1],
        &[(0, 0, 0, 1), (0, 2, 1, 1), (0, 3, 2, 3), (1, 0, 2, 2), (1, 2, 2, 0), (1, 3, 2, 1)],
        (0, 2, 3),
    )
}

/// `T` (−) then `T1, T2, T3` (+); the knot is edge 23 of `T`.
pub fn five_two() -> KnotComplex {
    KnotComplex::new(
        &[-1, 1, 1, 1],
        &[
            (0, 0, 0, 1),
            (0, 2, 2, 0),
            (0, 3, 1, 3),
            (1, 0, 3, 3),
            (1, 1, 3, 2),
            (1, 2, 2, 3),
            (2, 1, 3, 0),
            (2, 2, 3, 1),
        ],
        (0, 2, 3),
    )
}

/// `T1, T3` (+) and `T2, T4, T5` (−); the knot is edge 01 of `T1`.
pub fn six_one() -> KnotComplex {
    KnotComplex::new(
        &[1, -1, 1, -1, -1],
        &[
            (0, 0, 1, 0),
            (0, 1, 2, 2),
            (0, 2, 0, 3),
            (1, 1, 3, 2),
            (1, 3, 4, 0),
            (1, 2, 2, 0),
            (2, 1, 4, 1),
            (2, 3, 3, 1),
            (3, 0, 4, 3),
            (3, 3, 4, 2),
        ],
        (0, 0, 1),
    )
}

/// Two positive tetrahedra with one vertex and two edges of degree six.
pub fn figure_eight_complement() -> Triangulation {
    let g = |ta, fa, tb, fb, perm| Gluing { a: [ta, fa], b: [tb, fb], perm };
    build_complex(
        &[1, 1],
        &[g(0, 0, 1, 0, [2, 1, 3]), g(0, 1, 1, 1, [2, 0, 3]), g(0, 2, 1, 3, [1, 2, 0]), g(0, 3, 1, 2, [1, 3, 0])],
    )
    .expect("built-in gluing table")
}

/// Tetrahedra given by global vertex labels, glued along every pair of faces
/// with equal label sets.
pub fn labeled_complex(tets: &[[usize; 4]], orientations: &[i8]) -> Result<Triangulation> {
    let mut faces: HashMap<[usize; 3], Vec<(usize, usize)>> = HashMap::new();
    for (t, labels) in tets.iter().enumerate() {
        for f in 0..4 {
            let mut key = FACE_VERTICES[f].map(|v| labels[v]);
            key.sort_unstable();
            faces.entry(key).or_default().push((t, f));
        }
    }
    let mut keys: Vec<_> = faces.keys().copied().collect();
    keys.sort_unstable();
    let mut gluings = Vec::new();
    for key in keys {
        let occ = &faces[&key];
        match occ.len() {
            1 => {}
            2 => {
                let [(ta, fa), (tb, fb)] = [occ[0], occ[1]];
                let perm = FACE_VERTICES[fa].map(|v| {
                    tets[tb].iter().position(|l| *l == tets[ta][v]).expect("shared label")
                });
                gluings.push(Gluing { a: [ta, fa], b: [tb, fb], perm });
            }
            n => return Err(Error::BadGluing(format!("face {key:?} occurs {n} times"))),
        }
    }
    build_complex(orientations, &gluings)
}

/// Three positive tetrahedra `0123`, `0134`, `1234` around the edge `13`.
pub fn bipyramid() -> Triangulation {
    labeled_complex(&[[0, 1, 2, 3], [0, 1, 3, 4], [1, 2, 3, 4]], &[1, 1, 1]).expect("bipyramid")
}
