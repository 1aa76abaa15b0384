//! Triangulated 2D domain with tagged boundary and an explicit crack curve.
//!
//! The crack is an open piecewise-linear curve that is part of the domain
//! boundary: an infinitesimally thin slit is replaced by a forward leg to
//! the tip and a return leg back to the outer boundary. Coordinates are in
//! millimetres.
//!
//! A `Mesh` is immutable after construction; [`Mesh::deform`] returns a new
//! mesh and re-validates element orientation.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Boundary edge with a symbolic tag ("bottom", "load", "crack", ...).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub tag: String,
}

#[derive(Debug, Clone)]
pub struct Mesh {
    nodes: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<BoundaryEdge>,
}

/// Geometric quality statistics, mostly used as a guard after deformation.
#[derive(Debug, Clone, Copy)]
pub struct QualityReport {
    pub min_angle_deg: f64,
    pub min_area: f64,
    pub aspect_max: f64,
}

fn signed_area(p0: [f64; 2], p1: [f64; 2], p2: [f64; 2]) -> f64 {
    0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]))
}

impl Mesh {
    /// Builds a mesh and checks all structural invariants: index ranges,
    /// strictly positive element areas, and that the tagged boundary edges
    /// are exactly the edges incident to a single triangle.
    pub fn new(
        nodes: Vec<[f64; 2]>,
        triangles: Vec<[usize; 3]>,
        boundary_edges: Vec<BoundaryEdge>,
    ) -> Result<Self> {
        let n = nodes.len();
        for tri in &triangles {
            for &i in tri {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, count: n });
                }
            }
        }
        for be in &boundary_edges {
            for &i in &be.nodes {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, count: n });
                }
            }
        }
        let mesh = Mesh {
            nodes,
            triangles,
            boundary_edges,
        };
        mesh.validate_areas()?;
        mesh.validate_boundary()?;
        Ok(mesh)
    }

    fn validate_areas(&self) -> Result<()> {
        for (e, tri) in self.triangles.iter().enumerate() {
            let a = signed_area(
                self.nodes[tri[0]],
                self.nodes[tri[1]],
                self.nodes[tri[2]],
            );
            if !(a > 0.0) {
                return Err(Error::InvertedElement { element: e, area: a });
            }
        }
        Ok(())
    }

    /// Every edge incident to exactly one triangle must appear exactly once
    /// in `boundary_edges`, and nothing else may appear there.
    fn validate_boundary(&self) -> Result<()> {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for tri in &self.triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                *count.entry(key).or_insert(0) += 1;
            }
        }
        let mut tagged: HashMap<(usize, usize), usize> = HashMap::new();
        for be in &self.boundary_edges {
            let (a, b) = (be.nodes[0], be.nodes[1]);
            let key = (a.min(b), a.max(b));
            *tagged.entry(key).or_insert(0) += 1;
        }
        for (key, c) in &count {
            let t = tagged.get(key).copied().unwrap_or(0);
            match *c {
                1 if t != 1 => {
                    return Err(Error::BadBoundary { a: key.0, b: key.1 });
                }
                2 if t != 0 => {
                    return Err(Error::BadBoundary { a: key.0, b: key.1 });
                }
                c if c > 2 => {
                    return Err(Error::BadBoundary { a: key.0, b: key.1 });
                }
                _ => {}
            }
        }
        for key in tagged.keys() {
            if !count.contains_key(key) {
                return Err(Error::BadBoundary { a: key.0, b: key.1 });
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn element_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn node(&self, i: usize) -> [f64; 2] {
        self.nodes[i]
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn triangle(&self, e: usize) -> [usize; 3] {
        self.triangles[e]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary_edges
    }

    pub fn triangle_points(&self, e: usize) -> [[f64; 2]; 3] {
        let t = self.triangles[e];
        [self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]]
    }

    pub fn area(&self, e: usize) -> f64 {
        let p = self.triangle_points(e);
        signed_area(p[0], p[1], p[2])
    }

    pub fn total_area(&self) -> f64 {
        (0..self.element_count()).map(|e| self.area(e)).sum()
    }

    /// Nodes incident to at least one boundary edge carrying `tag`.
    pub fn nodes_with_tag(&self, tag: &str) -> Vec<usize> {
        let mut marked = vec![false; self.node_count()];
        let mut found = false;
        for be in &self.boundary_edges {
            if be.tag == tag {
                found = true;
                marked[be.nodes[0]] = true;
                marked[be.nodes[1]] = true;
            }
        }
        if !found {
            return Vec::new();
        }
        marked
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect()
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.boundary_edges.iter().any(|be| be.tag == tag)
    }

    /// All nodes incident to any boundary edge.
    pub fn boundary_nodes(&self) -> Vec<bool> {
        let mut marked = vec![false; self.node_count()];
        for be in &self.boundary_edges {
            marked[be.nodes[0]] = true;
            marked[be.nodes[1]] = true;
        }
        marked
    }

    /// Moves every node by `tau * v` and revalidates orientation. `v` holds
    /// two components per node. Element inversion is a hard error; callers
    /// in the optimization loop treat it as a rejected step.
    pub fn deform(&self, v: &[f64], tau: f64) -> Result<Mesh> {
        assert_eq!(v.len(), 2 * self.node_count(), "deformation field size");
        let nodes: Vec<[f64; 2]> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, p)| [p[0] + tau * v[2 * i], p[1] + tau * v[2 * i + 1]])
            .collect();
        let mesh = Mesh {
            nodes,
            triangles: self.triangles.clone(),
            boundary_edges: self.boundary_edges.clone(),
        };
        for (e, tri) in mesh.triangles.iter().enumerate() {
            let a = signed_area(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]);
            if !(a > 0.0) {
                return Err(Error::ElementInversion { element: e });
            }
        }
        Ok(mesh)
    }

    pub fn quality_report(&self) -> QualityReport {
        let mut min_angle = f64::INFINITY;
        let mut min_area = f64::INFINITY;
        let mut aspect_max: f64 = 0.0;
        for e in 0..self.element_count() {
            let p = self.triangle_points(e);
            let area = signed_area(p[0], p[1], p[2]);
            min_area = min_area.min(area);
            let mut lens = [0.0; 3];
            for k in 0..3 {
                let (a, b) = (p[k], p[(k + 1) % 3]);
                lens[k] = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            }
            let lmax = lens.iter().cloned().fold(0.0, f64::max);
            let lmin = lens.iter().cloned().fold(f64::INFINITY, f64::min);
            aspect_max = aspect_max.max(lmax / lmin);
            for k in 0..3 {
                // angle at vertex k, law of cosines
                let (lo, la, lb) = (lens[(k + 1) % 3], lens[k], lens[(k + 2) % 3]);
                let c = ((la * la + lb * lb - lo * lo) / (2.0 * la * lb)).clamp(-1.0, 1.0);
                min_angle = min_angle.min(c.acos());
            }
        }
        QualityReport {
            min_angle_deg: min_angle.to_degrees(),
            min_area,
            aspect_max,
        }
    }

    /// Reads the normative ASCII mesh format:
    /// `nodes N` / N lines `x y` / `triangles M` / M lines `i j k` /
    /// `edges B` / B lines `i j tag`. Indices are 0-based.
    pub fn load(path: &Path) -> Result<Mesh> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Mesh> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let parse_count = |line: Option<(usize, &str)>, kw: &str| -> Result<(usize, usize)> {
            let (no, l) = line.ok_or(Error::MeshParse {
                line: 0,
                msg: format!("missing '{kw}' section"),
            })?;
            let mut it = l.split_whitespace();
            let head = it.next().unwrap_or("");
            if head != kw {
                return Err(Error::MeshParse {
                    line: no,
                    msg: format!("expected '{kw} N', found '{l}'"),
                });
            }
            let n: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or(Error::MeshParse {
                    line: no,
                    msg: format!("expected count after '{kw}'"),
                })?;
            Ok((no, n))
        };

        let (_, n_nodes) = parse_count(lines.next(), "nodes")?;
        let mut nodes = Vec::with_capacity(n_nodes);
        for _ in 0..n_nodes {
            let (no, l) = lines.next().ok_or(Error::MeshParse {
                line: 0,
                msg: "unexpected end of file in node block".into(),
            })?;
            let mut it = l.split_whitespace();
            let x: f64 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or(Error::MeshParse {
                    line: no,
                    msg: "bad node coordinate".into(),
                })?;
            let y: f64 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or(Error::MeshParse {
                    line: no,
                    msg: "bad node coordinate".into(),
                })?;
            nodes.push([x, y]);
        }

        let (_, n_tri) = parse_count(lines.next(), "triangles")?;
        let mut triangles = Vec::with_capacity(n_tri);
        for _ in 0..n_tri {
            let (no, l) = lines.next().ok_or(Error::MeshParse {
                line: 0,
                msg: "unexpected end of file in triangle block".into(),
            })?;
            let idx: Vec<usize> = l
                .split_whitespace()
                .map(|s| s.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::MeshParse {
                    line: no,
                    msg: "bad triangle index".into(),
                })?;
            if idx.len() != 3 {
                return Err(Error::MeshParse {
                    line: no,
                    msg: "triangle line must have 3 indices".into(),
                });
            }
            triangles.push([idx[0], idx[1], idx[2]]);
        }

        let (_, n_edges) = parse_count(lines.next(), "edges")?;
        let mut boundary_edges = Vec::with_capacity(n_edges);
        for _ in 0..n_edges {
            let (no, l) = lines.next().ok_or(Error::MeshParse {
                line: 0,
                msg: "unexpected end of file in edge block".into(),
            })?;
            let parts: Vec<&str> = l.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::MeshParse {
                    line: no,
                    msg: "edge line must be 'i j tag'".into(),
                });
            }
            let a: usize = parts[0].parse().map_err(|_| Error::MeshParse {
                line: no,
                msg: "bad edge index".into(),
            })?;
            let b: usize = parts[1].parse().map_err(|_| Error::MeshParse {
                line: no,
                msg: "bad edge index".into(),
            })?;
            boundary_edges.push(BoundaryEdge {
                nodes: [a, b],
                tag: parts[2].to_string(),
            });
        }

        Mesh::new(nodes, triangles, boundary_edges)
    }

    /// Constructor that skips invariant validation. For geometry-only
    /// fixtures (curvature and length of bare polylines) in tests.
    #[doc(hidden)]
    pub fn new_unchecked(
        nodes: Vec<[f64; 2]>,
        triangles: Vec<[usize; 3]>,
        boundary_edges: Vec<BoundaryEdge>,
    ) -> Mesh {
        Mesh {
            nodes,
            triangles,
            boundary_edges,
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        let _ = writeln!(out, "nodes {}", self.node_count());
        for p in &self.nodes {
            let _ = writeln!(out, "{:.17e} {:.17e}", p[0], p[1]);
        }
        let _ = writeln!(out, "triangles {}", self.element_count());
        for t in &self.triangles {
            let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
        }
        let _ = writeln!(out, "edges {}", self.boundary_edges.len());
        for be in &self.boundary_edges {
            let _ = writeln!(out, "{} {} {}", be.nodes[0], be.nodes[1], be.tag);
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}

/// Open (or mouth-closed) piecewise-linear crack curve along the boundary.
///
/// `path` is an ordered list of node indices connected by boundary edges.
/// The first and last node may coincide for a slit whose mouth segment on
/// the outer boundary is included. `active` marks the nodes of the subset
/// Γ̂ that carries homogeneous Neumann data in the deformation solve; the
/// rest of the curve is held fixed.
#[derive(Debug, Clone)]
pub struct CrackCurve {
    pub path: Vec<usize>,
    /// Indices into `path` where one smooth piece ends and the next starts.
    /// Defaults to every interior node: kinks may develop anywhere.
    pub segment_breaks: Vec<usize>,
    pub active: Vec<bool>,
}

impl CrackCurve {
    pub fn from_path(mesh: &Mesh, path: Vec<usize>) -> Result<CrackCurve> {
        if path.len() < 2 {
            return Err(Error::Curve("crack curve needs at least 2 nodes".into()));
        }
        for &i in &path {
            if i >= mesh.node_count() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    count: mesh.node_count(),
                });
            }
        }
        // injective except possibly coinciding endpoints
        let mut seen = std::collections::HashSet::new();
        let last = path.len() - 1;
        for (k, &i) in path.iter().enumerate() {
            if !seen.insert(i) && !(k == last && i == path[0]) {
                return Err(Error::Curve(format!("crack path repeats node {i}")));
            }
        }
        let n = path.len();
        Ok(CrackCurve {
            path,
            segment_breaks: (1..n.saturating_sub(1)).collect(),
            active: vec![true; n],
        })
    }

    /// Chains the boundary edges carrying one of `tags` into an ordered path.
    /// A closed chain (slit with its mouth segment included) is returned with
    /// coinciding first and last node.
    pub fn from_tags(mesh: &Mesh, tags: &[String]) -> Result<CrackCurve> {
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut n_edges = 0;
        for be in mesh.boundary_edges() {
            if tags.iter().any(|t| *t == be.tag) {
                adj.entry(be.nodes[0]).or_default().push(be.nodes[1]);
                adj.entry(be.nodes[1]).or_default().push(be.nodes[0]);
                n_edges += 1;
            }
        }
        if n_edges == 0 {
            return Err(Error::Curve(format!(
                "no boundary edges tagged {:?}",
                tags
            )));
        }
        for (n, nb) in &adj {
            if nb.len() > 2 {
                return Err(Error::Curve(format!(
                    "crack edges branch at node {n}; the curve must be a simple chain"
                )));
            }
        }
        // start at an endpoint if the chain is open, else anywhere (closed)
        let start = adj
            .iter()
            .filter(|(_, nb)| nb.len() == 1)
            .map(|(&n, _)| n)
            .min()
            .unwrap_or_else(|| *adj.keys().min().unwrap());
        let mut path = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = adj[&cur].iter().copied().find(|&n| n != prev);
            let Some(next) = next else { break };
            path.push(next);
            if next == start {
                break; // closed chain
            }
            prev = cur;
            cur = next;
            if path.len() > n_edges + 1 {
                return Err(Error::Curve("crack edge chain does not close".into()));
            }
        }
        if path.len() != n_edges + 1 {
            return Err(Error::Curve(
                "crack edges do not form a single connected chain".into(),
            ));
        }
        Self::from_path(mesh, path)
    }

    pub fn endpoints(&self, mesh: &Mesh) -> ([f64; 2], [f64; 2]) {
        (
            mesh.node(self.path[0]),
            mesh.node(*self.path.last().unwrap()),
        )
    }

    /// Marks curve nodes whose coordinates satisfy `pred` as the active
    /// subset Γ̂; the others are held fixed in the deformation solve.
    pub fn set_active_where(&mut self, mesh: &Mesh, pred: impl Fn([f64; 2]) -> bool) {
        for (k, &i) in self.path.iter().enumerate() {
            self.active[k] = pred(mesh.node(i));
        }
    }

    /// Total polyline length (counts the slit's legs separately).
    pub fn length(&self, mesh: &Mesh) -> f64 {
        self.path
            .windows(2)
            .map(|w| {
                let (a, b) = (mesh.node(w[0]), mesh.node(w[1]));
                ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
            })
            .sum()
    }

    /// Unsigned discrete curvature (1/mm) per curve node: turning angle
    /// between adjacent segments divided by the mean of their lengths.
    /// Endpoints get zero.
    pub fn discrete_curvature(&self, mesh: &Mesh) -> Result<Vec<f64>> {
        let n = self.path.len();
        assert!(n >= 3, "curvature needs at least 3 curve nodes");
        let mut kappa = vec![0.0; n];
        for k in 1..n - 1 {
            let a = mesh.node(self.path[k - 1]);
            let b = mesh.node(self.path[k]);
            let c = mesh.node(self.path[k + 1]);
            let u = [b[0] - a[0], b[1] - a[1]];
            let v = [c[0] - b[0], c[1] - b[1]];
            let lu = (u[0] * u[0] + u[1] * u[1]).sqrt();
            let lv = (v[0] * v[0] + v[1] * v[1]).sqrt();
            if lu == 0.0 {
                return Err(Error::DegenerateSegment {
                    a: self.path[k - 1],
                    b: self.path[k],
                });
            }
            if lv == 0.0 {
                return Err(Error::DegenerateSegment {
                    a: self.path[k],
                    b: self.path[k + 1],
                });
            }
            let cross = u[0] * v[1] - u[1] * v[0];
            let dot = u[0] * v[0] + u[1] * v[1];
            let angle = cross.atan2(dot).abs();
            kappa[k] = angle / (0.5 * (lu + lv));
        }
        Ok(kappa)
    }

    /// Node indices (into the mesh) of the active subset Γ̂.
    pub fn active_nodes(&self) -> Vec<usize> {
        self.path
            .iter()
            .zip(&self.active)
            .filter_map(|(&i, &a)| a.then_some(i))
            .collect()
    }

    pub fn coordinates(&self, mesh: &Mesh) -> Vec<[f64; 2]> {
        self.path.iter().map(|&i| mesh.node(i)).collect()
    }
}
