use super::{
    build_complex, local_edge, quad_of_edge, Gluing, ShapeStructure, Triangulation, FACE_VERTICES,
};
use crate::error::{Error, Result};

/// Outcome of a shaped 3–2 move.
#[derive(Debug, Clone)]
pub struct PachnerMove {
    pub complex: Triangulation,
    pub shape: ShapeStructure,
    /// old edge id → new edge id; the removed axis maps to `None`
    pub edge_map: Vec<Option<usize>>,
    /// old tetrahedron id → new id for the untouched tetrahedra
    pub tet_map: Vec<Option<usize>>,
    /// the two new tetrahedra `[N, P0, P1, P2]` and `[S, P0, P1, P2]`
    pub new_tets: [usize; 2],
}

// labels of the bipyramid vertices
const N: usize = 0;
const S: usize = 1;
const P: [usize; 3] = [2, 3, 4];

fn coords(label: usize) -> [f64; 3] {
    match label {
        N => [0.0, 0.0, 1.0],
        S => [0.0, 0.0, -1.0],
        _ => {
            let k = (label - 2) as f64 * 2.0 * std::f64::consts::PI / 3.0;
            [k.cos(), k.sin(), 0.0]
        }
    }
}

fn geometric_sign(labels: &[usize; 4]) -> i8 {
    let x: Vec<[f64; 3]> = labels.iter().map(|l| coords(*l)).collect();
    let d = |i: usize| [x[i][0] - x[0][0], x[i][1] - x[0][1], x[i][2] - x[0][2]];
    let (a, b, c) = (d(1), d(2), d(3));
    let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0]);
    if det > 0.0 {
        1
    } else {
        -1
    }
}

/// Replace the three tetrahedra around the interior degree-3 `edge` by two
/// tetrahedra sharing the equatorial triangle.
///
/// The angle of a new tetrahedron at an edge from an apex to the equator is
/// the sum of the two old angles at that edge, so the new angles sum to π
/// exactly when the axis is balanced (weight 2π).
pub fn pachner_32(x: &Triangulation, edge: usize, alpha: &ShapeStructure) -> Result<PachnerMove> {
    if edge >= x.num_edges() {
        return Err(Error::NotApplicable(format!("edge {edge} does not exist")));
    }
    if x.is_boundary_edge(edge) {
        return Err(Error::NotApplicable(format!("edge {edge} lies on the boundary")));
    }
    let degree = x.edge_degree(edge);
    if degree != 3 {
        return Err(Error::NotApplicable(format!("edge {edge} has degree {degree}, not 3")));
    }
    let steps = x.edge_loop(edge)?;
    let tets: Vec<usize> = steps.iter().map(|s| s.tet).collect();
    if steps.len() != 3 || tets[0] == tets[1] || tets[1] == tets[2] || tets[0] == tets[2] {
        return Err(Error::NotApplicable(format!("edge {edge} is not surrounded by three distinct tetrahedra")));
    }

    // labels[i][v] = bipyramid label of local vertex v of tets[i]
    let mut labels = [[usize::MAX; 4]; 3];
    let axis0: Vec<usize> =
        (0..4).filter(|v| *v != steps[0].face_in && *v != steps[0].face_out).collect();
    let (mut n_loc, mut s_loc) = (axis0[0], axis0[1]);
    for i in 0..3 {
        let st = steps[i];
        labels[i][n_loc] = N;
        labels[i][s_loc] = S;
        labels[i][st.face_out] = P[i];
        labels[i][st.face_in] = P[(i + 1) % 3];
        let p = x.partner(st.tet, st.face_out).expect("interior edge loop");
        n_loc = p.map[n_loc];
        s_loc = p.map[s_loc];
    }
    if n_loc != axis0[0] {
        return Err(Error::NotApplicable(format!("edge {edge}: the link of the axis is not a bipyramid")));
    }

    let mut s_common = None;
    for i in 0..3 {
        let sg = x.orientation(tets[i]) * geometric_sign(&labels[i]);
        match s_common {
            None => s_common = Some(sg),
            Some(s0) if s0 != sg => {
                return Err(Error::NotApplicable(format!("edge {edge}: inconsistent orientations around the axis")))
            }
            _ => {}
        }
    }
    let sgn = s_common.expect("three tetrahedra");

    let pos = |i: usize, label: usize| labels[i].iter().position(|l| *l == label).expect("label");
    let angle = |i: usize, a: usize, b: usize| alpha.angle(tets[i], quad_of_edge(local_edge(pos(i, a), pos(i, b))));
    let new_labels = [[N, P[0], P[1], P[2]], [S, P[0], P[1], P[2]]];
    let mut new_angles = [[0.0; 3]; 2];
    for (j, apex) in [N, S].into_iter().enumerate() {
        for k in 0..3 {
            new_angles[j][k] = angle(k, apex, P[k]) + angle((k + 2) % 3, apex, P[k]);
        }
        for k in 0..3 {
            if !(new_angles[j][k] > 0.0 && new_angles[j][k] < std::f64::consts::PI) {
                return Err(Error::ShapeViolation(format!(
                    "induced angle {} at apex-equator edge {k} leaves (0, π)",
                    new_angles[j][k]
                )));
            }
        }
    }
    let weight: f64 = (0..3).map(|i| angle(i, N, S)).sum();
    if (weight - 2.0 * std::f64::consts::PI).abs() > 1e-10 {
        return Err(Error::ShapeViolation(format!("axis edge weight {weight} is not 2π")));
    }

    let n_old = x.num_tetrahedra();
    let mut tet_map = vec![None; n_old];
    let mut next = 0;
    for (t, slot) in tet_map.iter_mut().enumerate() {
        if !tets.contains(&t) {
            *slot = Some(next);
            next += 1;
        }
    }
    let new_tets = [next, next + 1];
    let mut orientations: Vec<i8> = (0..n_old).filter(|t| !tets.contains(t)).map(|t| x.orientation(t)).collect();
    let mut angles: Vec<[f64; 3]> = (0..n_old).filter(|t| !tets.contains(t)).map(|t| alpha.angles[t]).collect();
    for j in 0..2 {
        orientations.push(sgn * geometric_sign(&new_labels[j]));
        angles.push(new_angles[j]);
    }

    // (old tet, old face) → (new tet, new face, old local → new local)
    let relocate = |t: usize, f: usize| -> Option<(usize, usize, [usize; 4])> {
        if let Some(nt) = tet_map[t] {
            return Some((nt, f, [0, 1, 2, 3]));
        }
        let i = tets.iter().position(|u| *u == t).expect("bipyramid tet");
        let opposite = labels[i][f];
        let j = match opposite {
            S => 0,
            N => 1,
            _ => return None,
        };
        let mut rho = [0; 4];
        for v in FACE_VERTICES[f] {
            rho[v] = new_labels[j].iter().position(|m| *m == labels[i][v]).expect("face label");
        }
        let face = rho[FACE_VERTICES[f][0]] + rho[FACE_VERTICES[f][1]] + rho[FACE_VERTICES[f][2]];
        let new_face = 6 - face;
        rho[f] = new_face;
        Some((new_tets[j], new_face, rho))
    };

    let mut gluings = Vec::new();
    for g in x.gluings() {
        let (Some((ta, fa, ra)), Some((tb, fb, rb))) = (relocate(g.a[0], g.a[1]), relocate(g.b[0], g.b[1])) else {
            continue;
        };
        let sigma = g.full_perm();
        let mut perm = [0; 3];
        for v in FACE_VERTICES[g.a[1]].iter() {
            let new_a = ra[*v];
            let slot = FACE_VERTICES[fa].iter().position(|w| *w == new_a).expect("face vertex");
            perm[slot] = rb[sigma[*v]];
        }
        gluings.push(Gluing { a: [ta, fa], b: [tb, fb], perm });
    }
    gluings.push(Gluing { a: [new_tets[0], 0], b: [new_tets[1], 0], perm: [1, 2, 3] });

    let complex = build_complex(&orientations, &gluings)?;
    let shape = ShapeStructure::new(angles)?;

    let mut edge_map = vec![None; x.num_edges()];
    for (e, slot) in edge_map.iter_mut().enumerate() {
        if e == edge {
            continue;
        }
        let (t, le) = x.edge_occurrences(e)[0];
        let (a, b) = super::LOCAL_EDGES[le];
        *slot = Some(match tet_map[t] {
            Some(nt) => complex.edge(nt, le),
            None => {
                let i = tets.iter().position(|u| *u == t).expect("bipyramid tet");
                let (la, lb) = (labels[i][a], labels[i][b]);
                let j = if la == S || lb == S { 1 } else { 0 };
                let p = |l: usize| new_labels[j].iter().position(|m| *m == l).expect("label");
                complex.edge(new_tets[j], local_edge(p(la), p(lb)))
            }
        });
    }
    Ok(PachnerMove { complex, shape, edge_map, tet_map, new_tets })
}
