//! Finite incidence geometries and the vertex link graphs built from them.
//!
//! Three links occur: the incidence graph of the projective plane PG(2,q)
//! (a generalized triangle), the incidence graph of the symplectic
//! quadrangle W(q) (a generalized quadrangle) and the complete bipartite
//! graph K_{q+1,q+1} (a generalized 2-gon).

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::scalars::{FiniteField, ScalarError};

/// Largest vertex count any constructor will produce.
pub const MAX_LINK_VERTICES: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("link of order q = {q} would have {vertices} vertices (cap {cap})")]
    OrderTooLarge { q: u32, vertices: usize, cap: usize },
    #[error("parameter out of range: {0}")]
    InvalidParameter(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error(transparent)]
    Field(#[from] ScalarError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeometryKind {
    ProjectivePlane,
    SymplecticQuadrangle,
}

/// Points and lines of PG(2,q) or W(q).
///
/// Points are canonical projective representatives (first nonzero
/// coordinate equal to 1, coordinates are field-element indices); lines are
/// sorted lists of point indices.
#[derive(Clone, Debug)]
pub struct IncidenceGeometry {
    kind: GeometryKind,
    field: FiniteField,
    points: Vec<Vec<u32>>,
    lines: Vec<Vec<usize>>,
}

/// Canonical representatives of the projective space of lines in F_q^dim,
/// ordered by the position of the leading 1 and then by the trailing
/// coordinates read as a base-q number (most significant first).
fn projective_points(q: u32, dim: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for lead in 0..dim {
        let free = dim - lead - 1;
        let count = (q as usize).pow(free as u32);
        for mut code in 0..count {
            let mut v = vec![0u32; dim];
            v[lead] = 1;
            for pos in (lead + 1..dim).rev() {
                v[pos] = (code % q as usize) as u32;
                code /= q as usize;
            }
            out.push(v);
        }
    }
    out
}

/// Index of a vector's projective class in [`projective_points`] order, or
/// `None` for the zero vector.
fn projective_index(field: &FiniteField, v: &[u32]) -> Option<usize> {
    let q = field.order() as usize;
    let dim = v.len();
    let lead = v.iter().position(|&c| c != 0)?;
    let scale = field.inv_idx(v[lead])?;
    let mut offset = 0;
    for l in 0..lead {
        offset += q.pow((dim - l - 1) as u32);
    }
    let mut code = 0;
    for &c in &v[lead + 1..] {
        code = code * q + field.mul_idx(c, scale) as usize;
    }
    Some(offset + code)
}

fn dot(field: &FiniteField, a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| field.add_idx(acc, field.mul_idx(x, y)))
}

/// The alternating form `x₀y₂ − x₂y₀ + x₁y₃ − x₃y₁` on F_q⁴.
pub fn symplectic_form(field: &FiniteField, x: &[u32], y: &[u32]) -> u32 {
    let t1 = field.sub_idx(field.mul_idx(x[0], y[2]), field.mul_idx(x[2], y[0]));
    let t2 = field.sub_idx(field.mul_idx(x[1], y[3]), field.mul_idx(x[3], y[1]));
    field.add_idx(t1, t2)
}

fn check_size(q: u32, per_side: u64) -> Result<(), GeometryError> {
    let vertices = per_side.saturating_mul(2);
    if vertices > MAX_LINK_VERTICES as u64 {
        return Err(GeometryError::OrderTooLarge {
            q,
            vertices: usize::try_from(vertices).unwrap_or(usize::MAX),
            cap: MAX_LINK_VERTICES,
        });
    }
    Ok(())
}

impl IncidenceGeometry {
    /// PG(2,q): points are 1-dimensional subspaces of F_q³, lines are the
    /// kernels of nonzero linear functionals.
    pub fn projective_plane(field: &FiniteField) -> Result<Self, GeometryError> {
        let q = field.order();
        let qq = q as u64;
        check_size(q, qq * qq + qq + 1)?;
        let points = projective_points(q, 3);
        let lines = points
            .iter()
            .map(|functional| {
                points
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| dot(field, functional, x) == 0)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Ok(Self { kind: GeometryKind::ProjectivePlane, field: field.clone(), points, lines })
    }

    /// W(q): all points of PG(3,q) and the lines totally isotropic for
    /// [`symplectic_form`].
    pub fn symplectic_quadrangle(field: &FiniteField) -> Result<Self, GeometryError> {
        let q = field.order();
        let qq = q as u64;
        check_size(q, qq * qq * qq + qq * qq + qq + 1)?;
        let points = projective_points(q, 4);
        let mut lines = BTreeSet::new();
        for (i, x) in points.iter().enumerate() {
            for (j, y) in points.iter().enumerate().skip(i + 1) {
                if symplectic_form(field, x, y) != 0 {
                    continue;
                }
                // points of span{x, y}: y itself and x + a·y for every a
                let mut line = vec![j];
                for a in field.elements() {
                    let v: Vec<u32> =
                        x.iter().zip(y).map(|(&xc, &yc)| field.add_idx(xc, field.mul_idx(a, yc))).collect();
                    line.extend(projective_index(field, &v));
                }
                line.sort_unstable();
                if line[0] == i {
                    lines.insert(line);
                }
            }
        }
        Ok(Self {
            kind: GeometryKind::SymplecticQuadrangle,
            field: field.clone(),
            points,
            lines: lines.into_iter().collect(),
        })
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    /// Index of the point with the given (not necessarily normalized)
    /// coordinates.
    pub fn point_index(&self, coords: &[u32]) -> Option<usize> {
        if coords.len() != self.points.first()?.len() {
            return None;
        }
        projective_index(&self.field, coords)
    }

    /// Number of incident (point, line) pairs.
    pub fn flag_count(&self) -> usize {
        self.lines.iter().map(Vec::len).sum()
    }

    /// Point/line incidence graph with edges oriented point → line.
    pub fn incidence_graph(&self) -> LinkGraph {
        let np = self.points.len();
        let mut vertices: Vec<LinkVertex> = self
            .points
            .iter()
            .map(|p| LinkVertex { side: Some(Side::Point), label: coords_label(p) })
            .collect();
        vertices.extend(self.lines.iter().map(|l| LinkVertex { side: Some(Side::Line), label: line_label(l) }));
        let mut edges: Vec<(usize, usize)> = self
            .lines
            .iter()
            .enumerate()
            .flat_map(|(li, pts)| pts.iter().map(move |&p| (p, np + li)))
            .collect();
        edges.sort_unstable();
        let kind = match self.kind {
            GeometryKind::ProjectivePlane => LinkKind::Sl3,
            GeometryKind::SymplecticQuadrangle => LinkKind::Sp4Special,
        };
        LinkGraph::assemble(kind, self.q(), vertices, edges)
    }
}

fn coords_label(p: &[u32]) -> String {
    let parts: Vec<String> = p.iter().map(|c| format!("{c}")).collect();
    format!("({})", parts.join(","))
}

fn line_label(points: &[usize]) -> String {
    let parts: Vec<String> = points.iter().map(|c| format!("{c}")).collect();
    format!("{{{}}}", parts.join(","))
}

/// The three vertex links that occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkKind {
    /// Any vertex of the SL3 building: PG(2,q).
    Sl3,
    /// Special vertex of the Sp4 building: W(q).
    Sp4Special,
    /// Non-special vertex of the Sp4 building: K_{q+1,q+1}.
    Sp4NonSpecial,
}

impl LinkKind {
    pub const ALL: [LinkKind; 3] = [LinkKind::Sl3, LinkKind::Sp4Special, LinkKind::Sp4NonSpecial];

    pub fn name(self) -> &'static str {
        match self {
            LinkKind::Sl3 => "sl3",
            LinkKind::Sp4Special => "sp4-special",
            LinkKind::Sp4NonSpecial => "sp4-nonspecial",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// n such that the link is a generalized n-gon.
    pub fn gonality(self) -> usize {
        match self {
            LinkKind::Sl3 => 3,
            LinkKind::Sp4Special => 4,
            LinkKind::Sp4NonSpecial => 2,
        }
    }

    /// Vertex count of the link for parameter q.
    pub fn vertex_count(self, q: u32) -> u64 {
        let q = q as u64;
        match self {
            LinkKind::Sl3 => 2 * (q * q + q + 1),
            LinkKind::Sp4Special => 2 * (q * q * q + q * q + q + 1),
            LinkKind::Sp4NonSpecial => 2 * (q + 1),
        }
    }
}

impl fmt::Display for LinkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Point,
    Line,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Point => "point",
            Side::Line => "line",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkVertex {
    /// `None` on the two parts of a complete bipartite link.
    pub side: Option<Side>,
    pub label: String,
}

/// A (q+1)-regular bipartite link graph with a fixed orientation on every
/// edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkGraph {
    kind: LinkKind,
    q: u32,
    vertices: Vec<LinkVertex>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl LinkGraph {
    fn assemble(kind: LinkKind, q: u32, vertices: Vec<LinkVertex>, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for &(u, w) in &edges {
            adjacency[u].push(w);
            adjacency[w].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self { kind, q, vertices, edges, adjacency }
    }

    /// Builds a graph from explicit parts. Rejects out-of-range endpoints,
    /// self-loops and repeated edges; regularity is left to
    /// [`validate_generalized_polygon`].
    pub fn from_parts(
        kind: LinkKind,
        q: u32,
        vertices: Vec<LinkVertex>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n == 0 {
            return Err(GeometryError::InvalidGraph("no vertices".into()));
        }
        if n > MAX_LINK_VERTICES {
            return Err(GeometryError::OrderTooLarge { q, vertices: n, cap: MAX_LINK_VERTICES });
        }
        let mut seen = BTreeSet::new();
        for (i, &(u, w)) in edges.iter().enumerate() {
            if u >= n || w >= n {
                return Err(GeometryError::InvalidGraph(format!("edge {i} has an endpoint out of range")));
            }
            if u == w {
                return Err(GeometryError::InvalidGraph(format!("edge {i} is a self-loop")));
            }
            if !seen.insert((u.min(w), u.max(w))) {
                return Err(GeometryError::InvalidGraph(format!("edge {i} is repeated")));
            }
        }
        Ok(Self::assemble(kind, q, vertices, edges))
    }

    /// K_{q+1,q+1} with edges oriented from the first part to the second.
    pub fn complete_bipartite(q: u32) -> Result<Self, GeometryError> {
        if q == 0 {
            return Err(GeometryError::InvalidParameter("q must be at least 1".into()));
        }
        check_size(q, q as u64 + 1)?;
        let m = q as usize + 1;
        let mut vertices: Vec<LinkVertex> =
            (0..m).map(|i| LinkVertex { side: None, label: format!("a{i}") }).collect();
        vertices.extend((0..m).map(|i| LinkVertex { side: None, label: format!("b{i}") }));
        let edges = (0..m).flat_map(|i| (0..m).map(move |j| (i, m + j))).collect();
        Ok(Self::assemble(LinkKind::Sp4NonSpecial, q, vertices, edges))
    }

    /// The link of the given kind over F_q (any q ≥ 1 for the bipartite
    /// link, a prime power otherwise).
    pub fn build(kind: LinkKind, q: u32) -> Result<Self, GeometryError> {
        match kind {
            LinkKind::Sp4NonSpecial => Self::complete_bipartite(q),
            LinkKind::Sl3 | LinkKind::Sp4Special => {
                check_size(q, kind.vertex_count(q) / 2)?;
                let field = FiniteField::of_order(q)?;
                let geometry = if kind == LinkKind::Sl3 {
                    IncidenceGeometry::projective_plane(&field)?
                } else {
                    IncidenceGeometry::symplectic_quadrangle(&field)?
                };
                Ok(geometry.incidence_graph())
            }
        }
    }

    pub fn kind(&self) -> LinkKind {
        self.kind
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn vertices(&self) -> &[LinkVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn are_adjacent(&self, u: usize, w: usize) -> bool {
        self.adjacency[u].binary_search(&w).is_ok()
    }

    /// BFS distances from `root`; `usize::MAX` marks unreachable vertices.
    pub fn distances_from(&self, root: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[root] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.vertex_count()];
        let mut count = 0;
        for root in 0..self.vertex_count() {
            if seen[root] {
                continue;
            }
            count += 1;
            let mut stack = vec![root];
            seen[root] = true;
            while let Some(u) = stack.pop() {
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// A proper 2-colouring if one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut colour: Vec<Option<bool>> = vec![None; self.vertex_count()];
        for root in 0..self.vertex_count() {
            if colour[root].is_some() {
                continue;
            }
            colour[root] = Some(false);
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                let cu = colour[u]?;
                for &w in &self.adjacency[u] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!cu);
                            stack.push(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        colour.into_iter().collect()
    }

    /// Length of a shortest cycle, `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            parent.iter_mut().for_each(|p| *p = usize::MAX);
            dist[root] = 0;
            queue.clear();
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for &w in &self.adjacency[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        best = best.min(dist[u] + dist[w] + 1);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }

    /// Largest BFS distance, `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut diam = 0;
        for root in 0..self.vertex_count() {
            let d = self.distances_from(root);
            if d.contains(&usize::MAX) {
                return None;
            }
            diam = diam.max(d.into_iter().max().unwrap_or(0));
        }
        Some(diam)
    }

    /// Same graph with every edge reversed and point/line labels exchanged.
    pub fn dual(&self) -> Self {
        let vertices = self
            .vertices
            .iter()
            .map(|v| LinkVertex {
                side: v.side.map(|s| match s {
                    Side::Point => Side::Line,
                    Side::Line => Side::Point,
                }),
                label: v.label.clone(),
            })
            .collect();
        let edges = self.edges.iter().map(|&(u, w)| (w, u)).collect();
        Self::assemble(self.kind, self.q, vertices, edges)
    }
}

/// Outcome of [`validate_generalized_polygon`]. Failures are reported here
/// rather than returned as errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonReport {
    pub n: usize,
    pub girth: Option<usize>,
    pub diameter: Option<usize>,
    pub bipartite: bool,
    pub min_degree: usize,
    pub max_degree: usize,
    pub expected_degree: usize,
    pub passes: bool,
}

/// Checks that `g` is a generalized n-gon of order q: bipartite, girth 2n,
/// diameter n and every degree q+1.
pub fn validate_generalized_polygon(g: &LinkGraph, n: usize) -> PolygonReport {
    let degrees = (0..g.vertex_count()).map(|v| g.degree(v));
    let min_degree = degrees.clone().min().unwrap_or(0);
    let max_degree = degrees.max().unwrap_or(0);
    let expected_degree = g.q() as usize + 1;
    let girth = g.girth();
    let diameter = g.diameter();
    let bipartite = g.bipartition().is_some();
    let passes = bipartite
        && girth == Some(2 * n)
        && diameter == Some(n)
        && min_degree == expected_degree
        && max_degree == expected_degree;
    PolygonReport { n, girth, diameter, bipartite, min_degree, max_degree, expected_degree, passes }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u32) -> FiniteField {
        FiniteField::of_order(q).unwrap()
    }

    /// Independent count of projective points: enumerate all nonzero
    /// vectors and divide by the number of nonzero scalars.
    fn brute_projective_count(q: u32, dim: u32) -> usize {
        ((q as usize).pow(dim) - 1) / (q as usize - 1)
    }

    #[test]
    fn fano_plane() {
        let g = IncidenceGeometry::projective_plane(&field(2)).unwrap();
        assert_eq!(g.points().len(), 7);
        assert_eq!(g.lines().len(), 7);
        let a = g.point_index(&[1, 0, 0]).unwrap();
        let b = g.point_index(&[0, 1, 0]).unwrap();
        let c = g.point_index(&[1, 1, 0]).unwrap();
        assert!(g.lines().iter().any(|l| l.contains(&a) && l.contains(&b) && l.contains(&c)));
    }

    #[test]
    fn projective_plane_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let g = IncidenceGeometry::projective_plane(&field(q)).unwrap();
            let n = (q * q + q + 1) as usize;
            assert_eq!(g.points().len(), brute_projective_count(q, 3));
            assert_eq!(g.lines().len(), n);
            assert!(g.lines().iter().all(|l| l.len() == q as usize + 1));
            let mut on = vec![0; n];
            for l in g.lines() {
                for &p in l {
                    on[p] += 1;
                }
            }
            assert!(on.iter().all(|&c| c == q as usize + 1));
            assert_eq!(g.flag_count(), n * (q as usize + 1));
            if q <= 4 {
                for a in 0..n {
                    for b in a + 1..n {
                        let common = g.lines().iter().filter(|l| l.contains(&a) && l.contains(&b)).count();
                        assert_eq!(common, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn symplectic_quadrangle_counts_and_isotropy() {
        for (q, n) in [(2, 15), (3, 40), (4, 85), (5, 156)] {
            let f = field(q);
            let g = IncidenceGeometry::symplectic_quadrangle(&f).unwrap();
            assert_eq!(g.points().len(), n);
            assert_eq!(g.lines().len(), n);
            for l in g.lines() {
                assert_eq!(l.len(), q as usize + 1);
                for &a in l {
                    for &b in l {
                        assert_eq!(symplectic_form(&f, &g.points()[a], &g.points()[b]), 0);
                    }
                }
            }
            assert_eq!(g.flag_count(), n * (q as usize + 1));
        }
    }

    #[test]
    fn chosen_form_on_basis_vectors() {
        let f = field(2);
        let e = |i: usize| {
            let mut v = vec![0u32; 4];
            v[i] = 1;
            v
        };
        assert_eq!(symplectic_form(&f, &e(0), &e(1)), 0);
        assert_eq!(symplectic_form(&f, &e(0), &e(2)), 1);
        let g = IncidenceGeometry::symplectic_quadrangle(&f).unwrap();
        let p0 = g.point_index(&e(0)).unwrap();
        let p1 = g.point_index(&e(1)).unwrap();
        let p2 = g.point_index(&e(2)).unwrap();
        assert!(g.lines().iter().any(|l| l.contains(&p0) && l.contains(&p1)));
        assert!(!g.lines().iter().any(|l| l.contains(&p0) && l.contains(&p2)));
    }

    #[test]
    fn incidence_graph_sizes() {
        let h = LinkGraph::build(LinkKind::Sl3, 2).unwrap();
        assert_eq!((h.vertex_count(), h.edge_count()), (14, 21));
        let w = LinkGraph::build(LinkKind::Sp4Special, 2).unwrap();
        assert_eq!((w.vertex_count(), w.edge_count()), (30, 45));
        for g in [&h, &w] {
            assert!((0..g.vertex_count()).all(|v| g.degree(v) == 3));
            for &(u, t) in g.edges() {
                assert_eq!(g.vertices()[u].side, Some(Side::Point));
                assert_eq!(g.vertices()[t].side, Some(Side::Line));
            }
        }
    }

    #[test]
    fn complete_bipartite_sizes() {
        let k = LinkGraph::complete_bipartite(1).unwrap();
        assert_eq!((k.vertex_count(), k.edge_count()), (4, 4));
        let k = LinkGraph::complete_bipartite(2).unwrap();
        assert_eq!(k.edge_count(), 9);
        let k = LinkGraph::complete_bipartite(4).unwrap();
        assert_eq!((k.vertex_count(), k.edge_count()), (10, 25));
        assert!((0..10).all(|v| k.degree(v) == 5));
        for u in 0..5 {
            for w in 5..10 {
                assert!(k.are_adjacent(u, w));
            }
        }
        assert!(LinkGraph::complete_bipartite(0).is_err());
    }

    #[test]
    fn generalized_polygon_validation() {
        for (kind, q) in [
            (LinkKind::Sl3, 2),
            (LinkKind::Sl3, 3),
            (LinkKind::Sp4Special, 2),
            (LinkKind::Sp4Special, 3),
            (LinkKind::Sp4NonSpecial, 2),
            (LinkKind::Sp4NonSpecial, 1),
        ] {
            let g = LinkGraph::build(kind, q).unwrap();
            let r = validate_generalized_polygon(&g, kind.gonality());
            assert!(r.passes, "{kind} q={q}: {r:?}");
            assert_eq!(r.girth, Some(2 * kind.gonality()));
            assert_eq!(r.diameter, Some(kind.gonality()));
            // the wrong gonality must fail
            assert!(!validate_generalized_polygon(&g, kind.gonality() + 1).passes);
        }
    }

    #[test]
    fn no_common_neighbours_across_plane_edges() {
        let g = LinkGraph::build(LinkKind::Sl3, 3).unwrap();
        for &(u, w) in g.edges() {
            let common = g.neighbors(u).iter().filter(|x| g.neighbors(w).contains(x)).count();
            assert_eq!(common, 0);
        }
    }

    #[test]
    fn duality_preserves_degree_data() {
        for kind in [LinkKind::Sl3, LinkKind::Sp4Special] {
            let g = LinkGraph::build(kind, 3).unwrap();
            let d = g.dual();
            let count = |g: &LinkGraph, s: Side| g.vertices().iter().filter(|v| v.side == Some(s)).count();
            assert_eq!(count(&g, Side::Point), count(&d, Side::Point));
            assert_eq!(count(&g, Side::Line), count(&d, Side::Line));
            let mut a: Vec<usize> = (0..g.vertex_count()).map(|v| g.degree(v)).collect();
            let mut b: Vec<usize> = (0..d.vertex_count()).map(|v| d.degree(v)).collect();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn order_caps() {
        assert!(matches!(LinkGraph::build(LinkKind::Sp4Special, 16), Err(GeometryError::OrderTooLarge { .. })));
        assert!(matches!(LinkGraph::build(LinkKind::Sl3, 6), Err(GeometryError::Field(ScalarError::NotPrimePower(6)))));
    }

    #[test]
    fn from_parts_rejects_bad_edges() {
        let v = |n: usize| (0..n).map(|i| LinkVertex { side: None, label: format!("{i}") }).collect::<Vec<_>>();
        assert!(LinkGraph::from_parts(LinkKind::Sp4NonSpecial, 1, v(2), vec![(0, 2)]).is_err());
        assert!(LinkGraph::from_parts(LinkKind::Sp4NonSpecial, 1, v(2), vec![(1, 1)]).is_err());
        assert!(LinkGraph::from_parts(LinkKind::Sp4NonSpecial, 1, v(2), vec![(0, 1), (1, 0)]).is_err());
        assert!(LinkGraph::from_parts(LinkKind::Sp4NonSpecial, 1, v(2), vec![(0, 1)]).is_ok());
    }
}
