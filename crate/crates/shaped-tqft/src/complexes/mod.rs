//! Oriented triangulated pseudo-3-manifolds: face gluings, quotient cells,
//! normal quads with their cyclic order, shape structures, states and gauges.
//!
//! Local conventions: vertices of a tetrahedron are `0..4`; face `f` is the
//! face opposite vertex `f`, its vertices listed in increasing order. Quad `k`
//! (`k = 0, 1, 2`) is the opposite-edge pair separating `{0, k+1}` from the
//! other two vertices, and the cyclic order is `k → k+1 → k+2` (mod 3) on
//! positive tetrahedra and reversed on negative ones.

mod library;
mod pachner;
mod schema;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use library::{
    bipyramid, figure_eight, figure_eight_complement, five_two, labeled_complex, single_tetrahedron,
    six_one, trefoil, KnotComplex,
};
pub use pachner::{pachner_32, PachnerMove};
pub use schema::{ComplexFile, EdgeRef, GaugeTerm};

pub const FACE_VERTICES: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];
pub const LOCAL_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index of the local edge `{a, b}` in [`LOCAL_EDGES`].
pub fn local_edge(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("not a tetrahedron edge: {a}{b}"),
    }
}

/// Quad containing a local edge.
pub fn quad_of_edge(e: usize) -> usize {
    [0, 1, 2, 2, 1, 0][e]
}

/// The two opposite local edges forming quad `k`.
pub fn quad_edges(k: usize) -> [usize; 2] {
    [[0, 5], [1, 4], [2, 3]][k]
}

fn perm_sign(p: &[usize; 4]) -> i8 {
    let mut s = 1;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// Face identification `(tet_a, face_a) ↔ (tet_b, face_b)`; `perm[k]` is the
/// vertex of `tet_b` receiving the k-th (ascending) vertex of `face_a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub a: [usize; 2],
    pub b: [usize; 2],
    pub perm: [usize; 3],
}

impl Gluing {
    /// Order-preserving identification of the two faces.
    pub fn ordered(tet_a: usize, face_a: usize, tet_b: usize, face_b: usize) -> Self {
        Self { a: [tet_a, face_a], b: [tet_b, face_b], perm: FACE_VERTICES[face_b] }
    }

    /// The induced bijection on all four vertices (`face_a ↦ face_b`).
    pub fn full_perm(&self) -> [usize; 4] {
        let mut s = [0; 4];
        for (k, v) in FACE_VERTICES[self.a[1]].iter().enumerate() {
            s[*v] = self.perm[k];
        }
        s[self.a[1]] = self.b[1];
        s
    }
}

/// Face partner: tetrahedron, face and vertex bijection into the partner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FacePartner {
    pub tet: usize,
    pub face: usize,
    pub map: [usize; 4],
}

fn invert(p: &[usize; 4]) -> [usize; 4] {
    let mut q = [0; 4];
    for (i, v) in p.iter().enumerate() {
        q[*v] = i;
    }
    q
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// One step of a dual loop in a vertex link: it crosses tetrahedron `tet`,
/// entering through `face_in` and leaving through `face_out`, turning around
/// the corner at the local edge opposite to both faces' omitted vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopStep {
    pub tet: usize,
    pub face_in: usize,
    pub face_out: usize,
}

impl LoopStep {
    /// Local edge whose quad angle the step picks up.
    pub fn corner(&self) -> usize {
        let rest: Vec<usize> = (0..4).filter(|v| *v != self.face_in && *v != self.face_out).collect();
        local_edge(rest[0], rest[1])
    }
}

/// Immutable triangulation with its quotient cells.
#[derive(Debug, Clone)]
pub struct Triangulation {
    orientations: Vec<i8>,
    gluings: Vec<Gluing>,
    partners: Vec<[Option<FacePartner>; 4]>,
    edge_of: Vec<[usize; 6]>,
    vertex_of: Vec<[usize; 4]>,
    n_edges: usize,
    n_vertices: usize,
    edge_ends: Vec<[usize; 2]>,
    boundary_edge: Vec<bool>,
    boundary_vertex: Vec<bool>,
    n_boundary_faces: usize,
}

/// Build a triangulation from tetrahedron orientations and face gluings.
pub fn build_complex(orientations: &[i8], gluings: &[Gluing]) -> Result<Triangulation> {
    let n = orientations.len();
    if let Some(t) = orientations.iter().position(|o| *o != 1 && *o != -1) {
        return Err(Error::BadGluing(format!("tetrahedron {t} has orientation {}", orientations[t])));
    }
    let mut partners: Vec<[Option<FacePartner>; 4]> = vec![[None; 4]; n];
    for (i, g) in gluings.iter().enumerate() {
        let [ta, fa] = g.a;
        let [tb, fb] = g.b;
        if ta >= n || tb >= n || fa > 3 || fb > 3 {
            return Err(Error::BadGluing(format!("gluing {i} refers to a missing tetrahedron or face")));
        }
        if (ta, fa) == (tb, fb) {
            return Err(Error::BadGluing(format!("gluing {i} glues a face to itself")));
        }
        let mut target = g.perm;
        target.sort_unstable();
        if target != FACE_VERTICES[fb] {
            return Err(Error::BadGluing(format!(
                "gluing {i}: perm {:?} is not a bijection onto face {fb}",
                g.perm
            )));
        }
        let map = g.full_perm();
        if perm_sign(&map) * orientations[ta] * orientations[tb] != -1 {
            return Err(Error::BadGluing(format!("gluing {i} preserves orientation")));
        }
        for (t, f) in [(ta, fa), (tb, fb)] {
            if partners[t][f].is_some() {
                return Err(Error::BadGluing(format!("face {f} of tetrahedron {t} is glued twice")));
            }
        }
        partners[ta][fa] = Some(FacePartner { tet: tb, face: fb, map });
        partners[tb][fb] = Some(FacePartner { tet: ta, face: fa, map: invert(&map) });
    }

    let mut vuf = UnionFind::new(4 * n);
    let mut euf = UnionFind::new(6 * n);
    for g in gluings {
        let map = g.full_perm();
        let (ta, tb) = (g.a[0], g.b[0]);
        let face = FACE_VERTICES[g.a[1]];
        for v in face {
            vuf.union(4 * ta + v, 4 * tb + map[v]);
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let (x, y) = (face[i], face[j]);
            euf.union(6 * ta + local_edge(x, y), 6 * tb + local_edge(map[x], map[y]));
        }
    }
    let mut relabel = BTreeMap::new();
    let mut vertex_of = vec![[0; 4]; n];
    for t in 0..n {
        for v in 0..4 {
            let r = vuf.find(4 * t + v);
            let next = relabel.len();
            vertex_of[t][v] = *relabel.entry(r).or_insert(next);
        }
    }
    let n_vertices = relabel.len();
    relabel.clear();
    let mut edge_of = vec![[0; 6]; n];
    let mut edge_ends = Vec::new();
    for t in 0..n {
        for (e, (a, b)) in LOCAL_EDGES.iter().enumerate() {
            let r = euf.find(6 * t + e);
            let next = relabel.len();
            let id = *relabel.entry(r).or_insert(next);
            if id == next {
                let mut ends = [vertex_of[t][*a], vertex_of[t][*b]];
                ends.sort_unstable();
                edge_ends.push(ends);
            }
            edge_of[t][e] = id;
        }
    }
    let n_edges = relabel.len();

    let mut boundary_edge = vec![false; n_edges];
    let mut boundary_vertex = vec![false; n_vertices];
    let mut n_boundary_faces = 0;
    for t in 0..n {
        for f in 0..4 {
            if partners[t][f].is_none() {
                n_boundary_faces += 1;
                let fv = FACE_VERTICES[f];
                for v in fv {
                    boundary_vertex[vertex_of[t][v]] = true;
                }
                for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                    boundary_edge[edge_of[t][local_edge(fv[i], fv[j])]] = true;
                }
            }
        }
    }
    Ok(Triangulation {
        orientations: orientations.to_vec(),
        gluings: gluings.to_vec(),
        partners,
        edge_of,
        vertex_of,
        n_edges,
        n_vertices,
        edge_ends,
        boundary_edge,
        boundary_vertex,
        n_boundary_faces,
    })
}

impl Triangulation {
    pub fn num_tetrahedra(&self) -> usize {
        self.orientations.len()
    }

    pub fn num_edges(&self) -> usize {
        self.n_edges
    }

    pub fn num_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Number of quotient faces, glued pairs counted once.
    pub fn num_faces(&self) -> usize {
        self.gluings.len() + self.n_boundary_faces
    }

    pub fn num_boundary_faces(&self) -> usize {
        self.n_boundary_faces
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.n_edges as i64 + self.num_faces() as i64
            - self.num_tetrahedra() as i64
    }

    pub fn orientation(&self, t: usize) -> i8 {
        self.orientations[t]
    }

    pub fn orientations(&self) -> &[i8] {
        &self.orientations
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    pub fn partner(&self, t: usize, f: usize) -> Option<FacePartner> {
        self.partners[t][f]
    }

    /// Quotient edge of local edge `e` of tetrahedron `t`.
    pub fn edge(&self, t: usize, e: usize) -> usize {
        self.edge_of[t][e]
    }

    pub fn edges_of(&self, t: usize) -> [usize; 6] {
        self.edge_of[t]
    }

    pub fn vertex(&self, t: usize, v: usize) -> usize {
        self.vertex_of[t][v]
    }

    pub fn edge_endpoints(&self, e: usize) -> [usize; 2] {
        self.edge_ends[e]
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.boundary_edge[e]
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_vertex[v]
    }

    pub fn interior_edges(&self) -> Vec<usize> {
        (0..self.n_edges).filter(|e| !self.boundary_edge[*e]).collect()
    }

    pub fn boundary_edges(&self) -> Vec<usize> {
        (0..self.n_edges).filter(|e| self.boundary_edge[*e]).collect()
    }

    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.n_vertices).filter(|v| !self.boundary_vertex[*v]).collect()
    }

    /// Occurrences `(tet, local edge)` of a quotient edge.
    pub fn edge_occurrences(&self, e: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for t in 0..self.num_tetrahedra() {
            for le in 0..6 {
                if self.edge_of[t][le] == e {
                    out.push((t, le));
                }
            }
        }
        out
    }

    /// Number of local edges in the class of `e`.
    pub fn edge_degree(&self, e: usize) -> usize {
        self.edge_occurrences(e).len()
    }

    /// Quad reached from `k` by one step of the geometric cyclic order.
    pub fn tau(&self, t: usize, k: usize) -> usize {
        if self.orientations[t] > 0 {
            (k + 1) % 3
        } else {
            (k + 2) % 3
        }
    }

    /// Dual loop around an interior edge, through every tetrahedron corner
    /// at that edge.
    pub fn edge_loop(&self, e: usize) -> Result<Vec<LoopStep>> {
        if self.boundary_edge[e] {
            return Err(Error::BadLoop(format!("edge {e} lies on the boundary")));
        }
        let (t0, le0) = self.edge_occurrences(e)[0];
        let (a0, b0) = LOCAL_EDGES[le0];
        let others: Vec<usize> = (0..4).filter(|v| *v != a0 && *v != b0).collect();
        let start = (t0, a0, b0, others[0]);
        let (mut t, mut a, mut b, mut face_in) = start;
        let mut steps = Vec::new();
        loop {
            let face_out = (0..4).find(|v| *v != a && *v != b && *v != face_in).expect("four vertices");
            steps.push(LoopStep { tet: t, face_in, face_out });
            let p = self.partners[t][face_out]
                .ok_or_else(|| Error::BadLoop(format!("edge {e} reaches a boundary face")))?;
            t = p.tet;
            a = p.map[a];
            b = p.map[b];
            face_in = p.face;
            if (t, a, b, face_in) == start || (t, b, a, face_in) == start {
                return Ok(steps);
            }
            if steps.len() > 6 * self.num_tetrahedra() {
                return Err(Error::BadLoop(format!("walk around edge {e} does not close")));
            }
        }
    }

    /// Check that a loop is a closed dual path: each exit face is glued to
    /// the next step's entry face.
    pub fn validate_loop(&self, steps: &[LoopStep]) -> Result<()> {
        for (i, s) in steps.iter().enumerate() {
            if s.tet >= self.num_tetrahedra() || s.face_in > 3 || s.face_out > 3 || s.face_in == s.face_out {
                return Err(Error::BadLoop(format!("step {i} is malformed: {s:?}")));
            }
            let next = &steps[(i + 1) % steps.len()];
            match self.partners[s.tet][s.face_out] {
                Some(p) if p.tet == next.tet && p.face == next.face_in => {}
                _ => {
                    return Err(Error::BadLoop(format!(
                        "step {i} leaves through face {} of tetrahedron {} which is not glued to the next step",
                        s.face_out, s.tet
                    )))
                }
            }
        }
        Ok(())
    }
}

/// Dihedral angles per tetrahedron, indexed by quad.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeStructure {
    pub angles: Vec<[f64; 3]>,
}

pub const ANGLE_SUM_TOL: f64 = 1e-12;

impl ShapeStructure {
    /// Validated shape: every angle in `(0, π)`, every tetrahedron summing to π.
    pub fn new(angles: Vec<[f64; 3]>) -> Result<Self> {
        for (t, a) in angles.iter().enumerate() {
            if a.iter().any(|x| !(*x > 0.0 && *x < std::f64::consts::PI)) {
                return Err(Error::ShapeViolation(format!("tetrahedron {t}: angle outside (0, π): {a:?}")));
            }
            let s: f64 = a.iter().sum();
            if (s - std::f64::consts::PI).abs() > ANGLE_SUM_TOL {
                return Err(Error::ShapeViolation(format!("tetrahedron {t}: angles sum to {s}, not π")));
            }
        }
        Ok(Self { angles })
    }

    pub fn uniform(n: usize, a: [f64; 3]) -> Result<Self> {
        Self::new(vec![a; n])
    }

    pub fn angle(&self, t: usize, k: usize) -> f64 {
        self.angles[t][k]
    }

    /// Flattened quad vector `[t0q0, t0q1, t0q2, t1q0, …]`.
    pub fn to_vector(&self) -> Vec<f64> {
        self.angles.iter().flatten().copied().collect()
    }

    pub fn from_vector(v: &[f64]) -> Result<Self> {
        Self::new(v.chunks(3).map(|c| [c[0], c[1], c[2]]).collect())
    }
}

/// `Σ_{q∼e} α(q)`.
pub fn edge_weight(x: &Triangulation, alpha: &ShapeStructure, e: usize) -> f64 {
    x.edge_occurrences(e).iter().map(|(t, le)| alpha.angle(*t, quad_of_edge(*le))).sum()
}

/// Angle holonomy `Σ α(q_i)` along a dual loop.
pub fn angle_holonomy(x: &Triangulation, alpha: &ShapeStructure, steps: &[LoopStep]) -> Result<f64> {
    if steps.is_empty() {
        return Ok(0.0);
    }
    x.validate_loop(steps)?;
    Ok(steps.iter().map(|s| alpha.angle(s.tet, quad_of_edge(s.corner()))).sum())
}

/// Induced quad values `s̃(q) = s(e) + s(e')` over the opposite-edge pair.
pub fn quad_state(x: &Triangulation, s: &[f64], t: usize) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let [e1, e2] = quad_edges(k);
        *o = s[x.edge(t, e1)] + s[x.edge(t, e2)];
    }
    out
}

/// `(bg)(e) = g(∂₀e) + g(∂₁e)`; a loop edge gets `2g(v)`.
pub fn state_gauge_image(x: &Triangulation, g: &[f64]) -> Vec<f64> {
    (0..x.num_edges())
        .map(|e| {
            let [u, v] = x.edge_endpoints(e);
            g[u] + g[v]
        })
        .collect()
}

/// `⟨λ_v, s⟩ = Σ c·s(e)` for each interior vertex `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeForm {
    pub vertex: usize,
    pub terms: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeFixing {
    pub forms: Vec<GaugeForm>,
}

impl GaugeFixing {
    /// Coordinate gauge `λ_v = c·s(e)` per interior vertex.
    pub fn coordinate(forms: &[(usize, usize, f64)]) -> Self {
        Self {
            forms: forms.iter().map(|(v, e, c)| GaugeForm { vertex: *v, terms: vec![(*e, *c)] }).collect(),
        }
    }

    /// `M[v][w] = ⟨λ_v, b δ_w⟩` over the interior vertices, in the order of
    /// [`Triangulation::interior_vertices`].
    pub fn pairing_matrix(&self, x: &Triangulation) -> Result<Vec<Vec<f64>>> {
        let interior = x.interior_vertices();
        if self.forms.len() != interior.len() {
            return Err(Error::InvalidGauge(format!(
                "{} forms for {} interior vertices",
                self.forms.len(),
                interior.len()
            )));
        }
        let mut rows = Vec::with_capacity(interior.len());
        for v in &interior {
            let form = self
                .forms
                .iter()
                .find(|f| f.vertex == *v)
                .ok_or_else(|| Error::InvalidGauge(format!("no form for interior vertex {v}")))?;
            let mut row = Vec::with_capacity(interior.len());
            for w in &interior {
                let mut g = vec![0.0; x.num_vertices()];
                g[*w] = 1.0;
                let bg = state_gauge_image(x, &g);
                row.push(form.terms.iter().map(|(e, c)| c * bg[*e]).sum());
            }
            rows.push(row);
        }
        Ok(rows)
    }

    /// True when `⟨λ_v, bg⟩ = g(v)` for every potential `g`.
    pub fn is_normalized(&self, x: &Triangulation) -> Result<bool> {
        let m = self.pairing_matrix(x)?;
        Ok(m.iter().enumerate().all(|(i, r)| {
            r.iter().enumerate().all(|(j, v)| (v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12)
        }))
    }

    /// Coordinate gauge choosing, for each interior vertex, the least unused
    /// interior edge incident to it; coefficient ½ on loops and 1 otherwise.
    pub fn default_for(x: &Triangulation) -> Result<Self> {
        let mut used = vec![false; x.num_edges()];
        let mut forms = Vec::new();
        for v in x.interior_vertices() {
            let e = x
                .interior_edges()
                .into_iter()
                .find(|e| !used[*e] && x.edge_endpoints(*e).contains(&v))
                .ok_or_else(|| Error::InvalidGauge(format!("no interior edge at vertex {v}")))?;
            used[e] = true;
            let [a, b] = x.edge_endpoints(e);
            forms.push((v, e, if a == b { 0.5 } else { 1.0 }));
        }
        let gf = Self::coordinate(&forms);
        if determinant(&gf.pairing_matrix(x)?).abs() < 1e-12 {
            return Err(Error::InvalidGauge("default coordinate gauge is degenerate".into()));
        }
        Ok(gf)
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|i, j| a[*i][c].abs().total_cmp(&a[*j][c].abs())).expect("rows");
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

/// Shape-gauge generator of an interior edge: in every corner at the edge,
/// `+1` on the next quad and `−1` on the one after, in the geometric cyclic
/// order.
pub fn edge_generator(x: &Triangulation, e: usize) -> Vec<[f64; 3]> {
    let mut g = vec![[0.0; 3]; x.num_tetrahedra()];
    for (t, le) in x.edge_occurrences(e) {
        let k = quad_of_edge(le);
        let k1 = x.tau(t, k);
        let k2 = x.tau(t, k1);
        g[t][k1] += 1.0;
        g[t][k2] -= 1.0;
    }
    g
}

/// `α + t·g_e`; fails if an angle leaves `(0, π)`.
pub fn shape_gauge_transform(
    x: &Triangulation,
    alpha: &ShapeStructure,
    edge: usize,
    t: f64,
) -> Result<ShapeStructure> {
    if x.is_boundary_edge(edge) {
        return Err(Error::NotApplicable(format!("edge {edge} is on the boundary")));
    }
    let g = edge_generator(x, edge);
    let angles = alpha
        .angles
        .iter()
        .zip(&g)
        .map(|(a, d)| [a[0] + t * d[0], a[1] + t * d[1], a[2] + t * d[2]])
        .collect();
    ShapeStructure::new(angles)
}

/// Open interval of `t` keeping `α + t·g_e` a valid shape.
pub fn shape_gauge_interval(x: &Triangulation, alpha: &ShapeStructure, edge: usize) -> (f64, f64) {
    let g = edge_generator(x, edge);
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (a, d) in alpha.angles.iter().zip(&g) {
        for k in 0..3 {
            let pi = std::f64::consts::PI;
            if d[k] > 0.0 {
                hi = hi.min((pi - a[k]) / d[k]);
                lo = lo.max(-a[k] / d[k]);
            } else if d[k] < 0.0 {
                hi = hi.min(-a[k] / d[k]);
                lo = lo.max((pi - a[k]) / d[k]);
            }
        }
    }
    (lo, hi)
}

/// Edge generators of the tangential angle structures, one per interior edge.
/// Each satisfies `x(q)+x(q′)+x(q″) = 0` per tetrahedron and `Σ_{q∼e} x(q) = 0`
/// per interior edge; both are checked.
pub fn tas_basis(x: &Triangulation) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    for e in x.interior_edges() {
        let g: Vec<f64> = edge_generator(x, e).into_iter().flatten().collect();
        check_tangential(x, &g)?;
        out.push(g);
    }
    Ok(out)
}

/// Residual check of the tangential-angle-structure equations.
pub fn check_tangential(x: &Triangulation, v: &[f64]) -> Result<()> {
    for t in 0..x.num_tetrahedra() {
        let s = v[3 * t] + v[3 * t + 1] + v[3 * t + 2];
        if s.abs() > 1e-12 {
            return Err(Error::ConstraintViolation(format!("tetrahedron {t} sum {s}")));
        }
    }
    for e in x.interior_edges() {
        let s: f64 = x.edge_occurrences(e).iter().map(|(t, le)| v[3 * t + quad_of_edge(*le)]).sum();
        if s.abs() > 1e-12 {
            return Err(Error::ConstraintViolation(format!("edge {e} sum {s}")));
        }
    }
    Ok(())
}

/// Matrix of the tangential-angle-structure equations (tetrahedron rows,
/// then interior-edge rows) acting on quad vectors.
pub fn tas_constraints(x: &Triangulation) -> nalgebra::DMatrix<f64> {
    let n = x.num_tetrahedra();
    let interior = x.interior_edges();
    let mut m = nalgebra::DMatrix::zeros(n + interior.len(), 3 * n);
    for t in 0..n {
        for k in 0..3 {
            m[(t, 3 * t + k)] = 1.0;
        }
    }
    for (r, e) in interior.iter().enumerate() {
        for (t, le) in x.edge_occurrences(*e) {
            m[(n + r, 3 * t + quad_of_edge(le))] += 1.0;
        }
    }
    m
}

/// Orthonormal basis of the full tangential space by SVD.
pub fn tas_null_space(x: &Triangulation) -> Vec<Vec<f64>> {
    let m = tas_constraints(x);
    let cols = m.ncols();
    // pad to square so the SVD exposes the complete right singular basis
    let mut sq = nalgebra::DMatrix::zeros(cols.max(m.nrows()), cols);
    sq.view_mut((0, 0), (m.nrows(), cols)).copy_from(&m);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors");
    let tol = 1e-10 * svd.singular_values.max().max(1.0);
    (0..vt.nrows())
        .filter(|i| svd.singular_values[*i] <= tol)
        .map(|i| vt.row(i).iter().copied().collect())
        .collect()
}

/// Numerical rank of a set of vectors.
pub fn rank(vectors: &[Vec<f64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = nalgebra::DMatrix::from_fn(vectors.len(), vectors[0].len(), |i, j| vectors[i][j]);
    m.rank(1e-9)
}
