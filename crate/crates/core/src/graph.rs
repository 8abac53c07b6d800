//! Metric graphs with length measure plus vertex atoms, and finite atomic spaces.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use petgraph::algo::floyd_warshall;
use petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub id: u64,
    #[serde(default)]
    pub atom: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub u: u64,
    pub v: u64,
    pub len: f64,
}

/// A half-line attached at vertex `v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RaySpec {
    pub v: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<VertexSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub rays: Vec<RaySpec>,
}

/// 1-complex with unit length density on edges and rays, plus atoms at vertices.
#[derive(Clone, Debug)]
pub struct MetricGraph {
    spec: GraphSpec,
    atoms: Vec<f64>,
    /// `(u, v, len)` by vertex index.
    edges: Vec<(usize, usize, f64)>,
    rays: Vec<usize>,
    dist: Vec<Vec<f64>>,
}

/// A point of the graph: a vertex, or a parameter along an edge (from `u`) or ray.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphPoint {
    Vertex { index: usize },
    Edge { index: usize, t: f64 },
    Ray { index: usize, t: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Segment {
    Edge(usize),
    Ray(usize),
}

/// Sorted disjoint open intervals of a segment parameter.
fn merge(mut iv: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    iv.retain(|(a, b)| b > a);
    iv.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(iv.len());
    for (a, b) in iv {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

impl MetricGraph {
    pub fn new(spec: GraphSpec) -> Result<Self> {
        if spec.vertices.is_empty() {
            return invalid("graph needs at least one vertex");
        }
        let mut index = HashMap::new();
        for (i, v) in spec.vertices.iter().enumerate() {
            if index.insert(v.id, i).is_some() {
                return invalid(format!("duplicate vertex id {}", v.id));
            }
            if !(v.atom >= 0.0) || !v.atom.is_finite() {
                return invalid(format!("vertex {}: atom mass must be finite and nonnegative", v.id));
            }
        }
        let look = |id: u64, what: &str| index.get(&id).copied().ok_or_else(|| Error::InvalidInput(format!("{what} refers to unknown vertex {id}")));
        let mut edges = Vec::with_capacity(spec.edges.len());
        for (k, e) in spec.edges.iter().enumerate() {
            if !(e.len > 0.0) || !e.len.is_finite() {
                return invalid(format!("edges[{k}]: length must be positive and finite"));
            }
            edges.push((look(e.u, "edge")?, look(e.v, "edge")?, e.len));
        }
        let rays = spec.rays.iter().map(|r| look(r.v, "ray")).collect::<Result<Vec<_>>>()?;
        let n = spec.vertices.len();
        let mut g: UnGraph<(), f64> = UnGraph::with_capacity(n, edges.len());
        let nodes: Vec<NodeIndex> = (0..n).map(|_| g.add_node(())).collect();
        for &(u, v, l) in &edges {
            if u != v {
                g.add_edge(nodes[u], nodes[v], l);
            }
        }
        let table = floyd_warshall(&g, |e| *e.weight()).map_err(|_| Error::InvalidInput("negative cycle".into()))?;
        let mut dist = vec![vec![f64::INFINITY; n]; n];
        for ((a, b), d) in table {
            dist[a.index()][b.index()] = d;
        }
        if dist.iter().flatten().any(|d| !d.is_finite() || *d >= f64::MAX) {
            return invalid("graph is not connected");
        }
        let atoms = spec.vertices.iter().map(|v| v.atom).collect();
        Ok(Self { spec, atoms, edges, rays, dist })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: GraphSpec = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("graph JSON: {e}")))?;
        Self::new(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.spec).expect("graph spec serializes")
    }

    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn vertex_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, k: usize) -> (usize, usize, f64) {
        self.edges[k]
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn total_atom_mass(&self) -> f64 {
        self.atoms.iter().sum()
    }

    pub fn total_edge_length(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn vertex_distance(&self, a: usize, b: usize) -> f64 {
        self.dist[a][b]
    }

    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.spec.vertices.iter().position(|v| v.id == id)
    }

    pub fn check_point(&self, p: &GraphPoint) -> Result<()> {
        match *p {
            GraphPoint::Vertex { index } if index < self.atoms.len() => Ok(()),
            GraphPoint::Edge { index, t } if index < self.edges.len() && (0.0..=self.edges[index].2).contains(&t) => Ok(()),
            GraphPoint::Ray { index, t } if index < self.rays.len() && t >= 0.0 && t.is_finite() => Ok(()),
            _ => invalid(format!("{p:?} is not a point of the graph")),
        }
    }

    /// Distance from `p` to vertex `k`.
    pub fn to_vertex(&self, p: &GraphPoint, k: usize) -> f64 {
        match *p {
            GraphPoint::Vertex { index } => self.dist[index][k],
            GraphPoint::Edge { index, t } => {
                let (u, v, l) = self.edges[index];
                (t + self.dist[u][k]).min(l - t + self.dist[v][k])
            }
            GraphPoint::Ray { index, t } => t + self.dist[self.rays[index]][k],
        }
    }

    pub fn distance(&self, p: &GraphPoint, q: &GraphPoint) -> f64 {
        match *q {
            GraphPoint::Vertex { index } => self.to_vertex(p, index),
            GraphPoint::Edge { index, t } => {
                let (u, v, l) = self.edges[index];
                let mut d = (self.to_vertex(p, u) + t).min(self.to_vertex(p, v) + l - t);
                if let GraphPoint::Edge { index: i, t: s } = *p {
                    if i == index {
                        d = d.min((s - t).abs());
                    }
                }
                d
            }
            GraphPoint::Ray { index, t } => {
                let mut d = self.to_vertex(p, self.rays[index]) + t;
                if let GraphPoint::Ray { index: i, t: s } = *p {
                    if i == index {
                        d = d.min((s - t).abs());
                    }
                }
                d
            }
        }
    }

    /// Parameter intervals of every segment inside the open ball `B_r(p)`.
    fn covered(&self, p: &GraphPoint, r: f64) -> Vec<(Segment, Vec<(f64, f64)>)> {
        let mut out = Vec::new();
        for (k, &(u, v, l)) in self.edges.iter().enumerate() {
            let a = self.to_vertex(p, u);
            let b = self.to_vertex(p, v);
            let mut iv = vec![(0.0, (r - a).min(l)), ((l - (r - b)).max(0.0), l)];
            if let GraphPoint::Edge { index, t } = *p {
                if index == k {
                    iv.push(((t - r).max(0.0), (t + r).min(l)));
                }
            }
            let iv = merge(iv);
            if !iv.is_empty() {
                out.push((Segment::Edge(k), iv));
            }
        }
        for (k, &v) in self.rays.iter().enumerate() {
            let a = self.to_vertex(p, v);
            let mut iv = vec![(0.0, r - a)];
            if let GraphPoint::Ray { index, t } = *p {
                if index == k {
                    iv.push(((t - r).max(0.0), t + r));
                }
            }
            let iv = merge(iv);
            if !iv.is_empty() {
                out.push((Segment::Ray(k), iv));
            }
        }
        out
    }

    fn atoms_within(&self, p: &GraphPoint, r: f64) -> impl Iterator<Item = usize> + '_ {
        let p = *p;
        (0..self.atoms.len()).filter(move |&k| self.atoms[k] > 0.0 && self.to_vertex(&p, k) < r)
    }

    /// `μ(B_r(p))`: atoms at distance `< r` plus covered length.
    pub fn ball_measure(&self, p: &GraphPoint, r: f64) -> Result<f64> {
        self.check_point(p)?;
        if !(r > 0.0) {
            return invalid("radius must be positive");
        }
        let atoms: f64 = self.atoms_within(p, r).map(|k| self.atoms[k]).sum();
        let length: f64 = self.covered(p, r).iter().flat_map(|(_, iv)| iv.iter().map(|(a, b)| b - a)).sum();
        Ok(atoms + length)
    }

    fn segment_point(&self, s: Segment, t: f64) -> GraphPoint {
        match s {
            Segment::Edge(index) => GraphPoint::Edge { index, t },
            Segment::Ray(index) => GraphPoint::Ray { index, t },
        }
    }

    fn check_values(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.atoms.len() {
            return invalid(format!("need {} vertex values, got {}", self.atoms.len(), u.len()));
        }
        Ok(())
    }

    /// Vertex values extended affinely along edges and constantly along rays.
    pub fn interpolate(&self, u: &[f64], p: &GraphPoint) -> f64 {
        match *p {
            GraphPoint::Vertex { index } => u[index],
            GraphPoint::Edge { index, t } => {
                let (a, b, l) = self.edges[index];
                u[a] + (u[b] - u[a]) * t / l
            }
            GraphPoint::Ray { index, .. } => u[self.rays[index]],
        }
    }

    /// `(value at t = 0, slope)` of `u` along a segment.
    fn affine(&self, u: &[f64], s: Segment) -> (f64, f64) {
        match s {
            Segment::Edge(k) => {
                let (a, b, l) = self.edges[k];
                (u[a], (u[b] - u[a]) / l)
            }
            Segment::Ray(k) => (u[self.rays[k]], 0.0),
        }
    }

    /// `r⁻² ⨍_{B_r(x)} (u - u(x)) dμ`, integrated exactly.
    pub fn amv(&self, u: &[f64], x: &GraphPoint, r: f64) -> Result<f64> {
        self.check_values(u)?;
        let m = self.ball_measure(x, r)?;
        let ux = self.interpolate(u, x);
        let mut total: f64 = self.atoms_within(x, r).map(|k| self.atoms[k] * (u[k] - ux)).sum();
        for (seg, iv) in self.covered(x, r) {
            let (c0, c1) = self.affine(u, seg);
            for (a, b) in iv {
                total += (c0 - ux) * (b - a) + 0.5 * c1 * (b * b - a * a);
            }
        }
        Ok(total / (m * r * r))
    }

    /// `∫_a^b (c0 + c1 t) / m(t) dt` on a piece where the ball measure `m` is affine in `t`.
    fn rational_piece(&self, seg: Segment, r: f64, a: f64, b: f64, c0: f64, c1: f64, depth: u32) -> Result<f64> {
        let h = b - a;
        let m = |t: f64| self.ball_measure(&self.segment_point(seg, t), r);
        let (t1, t2) = (a + h / 3.0, a + 2.0 * h / 3.0);
        let (m1, m2) = (m(t1)?, m(t2)?);
        let beta = (m2 - m1) / (t2 - t1);
        let alpha = m1 - beta * t1;
        let mid = 0.5 * (a + b);
        let tol = 1e-12 * m1.abs().max(m2.abs());
        let affine_ok = [a + h * 1e-9, mid, b - h * 1e-9].iter().all(|&t| (m(t).map(|v| (v - alpha - beta * t).abs()).unwrap_or(f64::INFINITY)) <= tol);
        if !affine_ok && depth < 40 && h > 1e-14 {
            return Ok(self.rational_piece(seg, r, a, mid, c0, c1, depth + 1)? + self.rational_piece(seg, r, mid, b, c0, c1, depth + 1)?);
        }
        let (ma, mb) = (alpha + beta * a, alpha + beta * b);
        if beta.abs() * h <= 1e-9 * ma.abs().min(mb.abs()) {
            // m is constant up to round-off
            let avg = 0.5 * (ma + mb);
            return Ok((c0 * h + 0.5 * c1 * (b * b - a * a)) / avg);
        }
        // (c0 + c1 t)/(α + β t) = c1/β + (c0 - c1 α/β)/(α + β t)
        Ok(c1 / beta * h + (c0 - c1 * alpha / beta) / beta * (mb / ma).ln())
    }

    /// `∫_{B_r(x)} g(y) / μ(B_r(y)) dμ(y)` for `g` affine on segments with atom values `g_atoms`.
    fn reciprocal_integral(&self, x: &GraphPoint, r: f64, g: &dyn Fn(Segment) -> (f64, f64), g_atom: &dyn Fn(usize) -> f64) -> Result<f64> {
        let mut total = 0.0;
        for k in self.atoms_within(x, r).collect::<Vec<_>>() {
            total += self.atoms[k] * g_atom(k) / self.ball_measure(&GraphPoint::Vertex { index: k }, r)?;
        }
        for (seg, iv) in self.covered(x, r) {
            let (c0, c1) = g(seg);
            for (a, b) in iv {
                for (lo, hi) in self.affine_pieces(seg, r, a, b) {
                    total += self.rational_piece(seg, r, lo, hi, c0, c1, 0)?;
                }
            }
        }
        Ok(total)
    }

    /// Splits `[a, b]` where `t ↦ μ(B_r(point(t)))` may change slope.
    fn affine_pieces(&self, seg: Segment, r: f64, a: f64, b: f64) -> Vec<(f64, f64)> {
        let mut cuts = vec![a, b];
        let (ends, len): (Vec<(usize, f64)>, f64) = match seg {
            Segment::Edge(k) => {
                let (u, v, l) = self.edges[k];
                (vec![(u, 0.0), (v, l)], l)
            }
            Segment::Ray(k) => (vec![(self.rays[k], 0.0)], f64::INFINITY),
        };
        // distance from point(t) to vertex j: min over ends of |t - t_end| + d(end, j)
        let nv = self.atoms.len();
        for j in 0..nv {
            for &(e, te) in &ends {
                let d = self.dist[e][j];
                let (s, c) = if te == 0.0 { (1.0, d) } else { (-1.0, te + d) };
                cuts.push(if s > 0.0 { r - c } else { c - r });
            }
            if ends.len() == 2 {
                let (u, v) = (ends[0].0, ends[1].0);
                cuts.push(0.5 * (len + self.dist[v][j] - self.dist[u][j]));
            }
        }
        // edge saturation: d(p, u') + d(p, v') = 2r - L'
        for &(u2, v2, l2) in &self.edges {
            for &(e1, t1) in &ends {
                for &(e2, t2) in &ends {
                    let s1 = if t1 == 0.0 { 1.0 } else { -1.0 };
                    let s2 = if t2 == 0.0 { 1.0 } else { -1.0 };
                    let c = (if t1 == 0.0 { 0.0 } else { t1 }) + self.dist[e1][u2] + (if t2 == 0.0 { 0.0 } else { t2 }) + self.dist[e2][v2];
                    if s1 + s2 != 0.0 {
                        cuts.push((2.0 * r - l2 - c) / (s1 + s2));
                    }
                }
            }
        }
        // the own segment: t ± r reaching its ends
        cuts.extend([r, len - r, 0.5 * len]);
        let mut cuts: Vec<f64> = cuts.into_iter().filter(|t| t.is_finite() && *t >= a && *t <= b).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * (1.0 + y.abs()));
        cuts.windows(2).map(|w| (w[0], w[1])).filter(|(x, y)| y > x).collect()
    }

    /// `(2r²)⁻¹ ⨍_{B_r(x)} (u(y) - u(x)) (1 + μ(B_r(x)) / μ(B_r(y))) dμ(y)`.
    pub fn samv(&self, u: &[f64], x: &GraphPoint, r: f64) -> Result<f64> {
        self.check_values(u)?;
        let amv = self.amv(u, x, r)?;
        let ux = self.interpolate(u, x);
        let g = |s: Segment| {
            let (c0, c1) = self.affine(u, s);
            (c0 - ux, c1)
        };
        let adj = self.reciprocal_integral(x, r, &g, &|k| u[k] - ux)?;
        Ok(0.5 * (amv + adj / (r * r)))
    }

    /// Vertices plus points every `h` along edges (and rays, up to `ray_extent`).
    pub fn scan_points(&self, h: f64, ray_extent: f64) -> Vec<GraphPoint> {
        let mut pts: Vec<GraphPoint> = (0..self.atoms.len()).map(|index| GraphPoint::Vertex { index }).collect();
        for (index, &(_, _, l)) in self.edges.iter().enumerate() {
            let k = (l / h).ceil() as usize;
            for j in 1..k {
                pts.push(GraphPoint::Edge { index, t: l * j as f64 / k as f64 });
            }
        }
        for index in 0..self.rays.len() {
            let k = (ray_extent / h).ceil() as usize;
            for j in 1..=k {
                pts.push(GraphPoint::Ray { index, t: j as f64 * h });
            }
        }
        pts
    }

    pub fn min_edge_length(&self) -> Option<f64> {
        self.edges.iter().map(|e| e.2).min_by(f64::total_cmp)
    }

    /// `C(r) = max μ(B_r(x)) / μ(B_r(y))` over scan points with `d(x, y) < r`.
    /// The default resolution is (shortest edge) / 16.
    pub fn comparability_scan(&self, radii: &[f64], h: Option<f64>) -> Result<Vec<ComparabilityRow>> {
        let h = h.or_else(|| self.min_edge_length().map(|l| l / 16.0)).unwrap_or(0.1);
        if !(h > 0.0) {
            return invalid("scan resolution must be positive");
        }
        let extent = radii.iter().copied().fold(0.0, f64::max) * 2.0;
        let pts = self.scan_points(h, extent);
        let mut rows = Vec::with_capacity(radii.len());
        for &r in radii {
            let m: Vec<f64> = pts.iter().map(|p| self.ball_measure(p, r)).collect::<Result<_>>()?;
            let mut best = ComparabilityRow { r, ratio: 1.0, x: pts[0], y: pts[0] };
            for (i, p) in pts.iter().enumerate() {
                for (j, q) in pts.iter().enumerate() {
                    if m[i] / m[j] > best.ratio && self.distance(p, q) < r {
                        best = ComparabilityRow { r, ratio: m[i] / m[j], x: *p, y: *q };
                    }
                }
            }
            rows.push(best);
        }
        Ok(rows)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComparabilityRow {
    pub r: f64,
    pub ratio: f64,
    pub x: GraphPoint,
    pub y: GraphPoint,
}

/// Star of `n` spokes of length `1/n` at a hub `x_n`, atoms of mass 1 at the hub and at every spoke end,
/// lying on a line: a segment of length `3n - 1` to the left and a half-line to the right.
/// With `include_circle` the spoke ends are also joined by arcs of length `2π/n²`
/// (a circle of radius `1/n` through equally spaced ends).
pub fn circle_spokes(n: usize, include_circle: bool) -> Result<MetricGraph> {
    if n == 0 {
        return invalid("circle_spokes needs n ≥ 1");
    }
    let nf = n as f64;
    let mut vertices = vec![VertexSpec { id: 0, atom: 1.0 }, VertexSpec { id: 1, atom: 0.0 }];
    let mut edges = vec![EdgeSpec { u: 1, v: 0, len: 3.0 * nf - 1.0 }];
    for i in 0..n as u64 {
        vertices.push(VertexSpec { id: 2 + i, atom: 1.0 });
        edges.push(EdgeSpec { u: 0, v: 2 + i, len: 1.0 / nf });
    }
    if include_circle {
        let arc = 2.0 * std::f64::consts::PI / (nf * nf);
        for i in 0..n as u64 {
            edges.push(EdgeSpec { u: 2 + i, v: 2 + (i + 1) % n as u64, len: arc });
        }
    }
    MetricGraph::new(GraphSpec { vertices, edges, rays: vec![RaySpec { v: 0 }] })
}

/// Finite metric space with positive masses.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicSpace {
    pub dist: DMatrix<f64>,
    pub mass: DVector<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrices {
    pub averaging: DMatrix<f64>,
    pub adjoint: DMatrix<f64>,
    pub amv: DMatrix<f64>,
    pub samv: DMatrix<f64>,
    /// `u ↦ r⁻² Σ_y 1[d < r] m_y (u_y - u_x) / μ(B_r(y))`.
    pub adjoint_form: DMatrix<f64>,
    pub ball: DVector<f64>,
}

impl AtomicSpace {
    pub fn new(dist: DMatrix<f64>, mass: DVector<f64>) -> Result<Self> {
        let n = mass.len();
        if n == 0 || dist.nrows() != n || dist.ncols() != n {
            return invalid("distance matrix and mass vector disagree in size");
        }
        if mass.iter().any(|m| !(*m > 0.0) || !m.is_finite()) {
            return invalid("masses must be positive");
        }
        for i in 0..n {
            if dist[(i, i)] != 0.0 {
                return invalid("distance matrix needs a zero diagonal");
            }
            for j in 0..n {
                let d = dist[(i, j)];
                if d != dist[(j, i)] || (i != j && !(d > 0.0)) || !d.is_finite() {
                    return invalid(format!("entry ({i}, {j}) breaks symmetry or positivity"));
                }
                for k in 0..n {
                    if d > dist[(i, k)] + dist[(k, j)] * (1.0 + 1e-12) {
                        return invalid(format!("triangle inequality fails at ({i}, {k}, {j})"));
                    }
                }
            }
        }
        Ok(Self { dist, mass })
    }

    /// Points of the line with Euclidean distances.
    pub fn on_line(points: &[f64], masses: &[f64]) -> Result<Self> {
        let n = points.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| (points[i] - points[j]).abs()), DVector::from_column_slice(masses))
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn ball_measures(&self, r: f64) -> DVector<f64> {
        let n = self.len();
        DVector::from_fn(n, |i, _| (0..n).filter(|&j| self.dist[(i, j)] < r).map(|j| self.mass[j]).sum())
    }

    pub fn operator_matrices(&self, r: f64) -> Result<OperatorMatrices> {
        if !(r > 0.0) {
            return invalid("radius must be positive");
        }
        let n = self.len();
        let ball = self.ball_measures(r);
        let inside = |i: usize, j: usize| if self.dist[(i, j)] < r { 1.0 } else { 0.0 };
        let averaging = DMatrix::from_fn(n, n, |i, j| self.mass[j] * inside(i, j) / ball[i]);
        let adjoint = DMatrix::from_fn(n, n, |i, j| self.mass[j] * inside(i, j) / ball[j]);
        let r2 = r * r;
        let amv = (&averaging - DMatrix::identity(n, n)) / r2;
        let kernel = DMatrix::from_fn(n, n, |i, j| inside(i, j) * (1.0 / ball[i] + 1.0 / ball[j]) / (2.0 * r2));
        let samv = DMatrix::from_fn(n, n, |i, j| {
            let off = kernel[(i, j)] * self.mass[j];
            if i == j {
                off - (0..n).map(|k| kernel[(i, k)] * self.mass[k]).sum::<f64>()
            } else {
                off
            }
        });
        let adj_rows: Vec<f64> = (0..n).map(|i| adjoint.row(i).sum()).collect();
        let adjoint_form = DMatrix::from_fn(n, n, |i, j| (adjoint[(i, j)] - if i == j { adj_rows[i] } else { 0.0 }) / r2);
        Ok(OperatorMatrices { averaging, adjoint, amv, samv, adjoint_form, ball })
    }

    /// `⟨f, g⟩_μ = Σ m_x f_x g_x`.
    pub fn inner(&self, f: &DVector<f64>, g: &DVector<f64>) -> f64 {
        (0..self.len()).map(|i| self.mass[i] * f[i] * g[i]).sum()
    }

    /// `z_r(x) = ⨍_{B_r(x)} |1 - μ(B_r(x)) / μ(B_r(y))| dμ(y)` for every `x`.
    pub fn distortion_average(&self, r: f64) -> DVector<f64> {
        let n = self.len();
        let ball = self.ball_measures(r);
        DVector::from_fn(n, |i, _| {
            (0..n).filter(|&j| self.dist[(i, j)] < r).map(|j| self.mass[j] * (1.0 - ball[i] / ball[j]).abs()).sum::<f64>() / ball[i]
        })
    }

    pub fn lipschitz(&self, u: &DVector<f64>) -> f64 {
        let n = self.len();
        let mut l: f64 = 0.0;
        for i in 0..n {
            for j in 0..i {
                l = l.max((u[i] - u[j]).abs() / self.dist[(i, j)]);
            }
        }
        l
    }
}

/// Points 0, 1, 2 on a line with the given masses.
pub fn three_point_line(masses: [f64; 3]) -> Result<AtomicSpace> {
    AtomicSpace::on_line(&[0.0, 1.0, 2.0], &masses)
}
