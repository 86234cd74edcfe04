//! Equivariant maps on finite voltage 2-complexes.
//!
//! A [`VoltageComplex`] is a finite quotient of a simplicial complex by a
//! group acting on a model space. Each edge `(u, v, g)` records that a lift
//! of `u` is adjacent to `g` applied to a lift of `v`, so an equivariant map
//! is just one point per quotient vertex and the edge contributes
//! `d(f(u), g·f(v))²` to the energy.

mod chain;
pub mod complexes;
mod descent;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::cat0::{Cat0Error, Isometry, ModelSpace, Point, Tangent};

pub use chain::{wang_chain_report, ChainReport, LambdaTable, SplitReport, VertexChain, CHAIN_SLACK, EQ3_RESIDUAL_GATE, EQ3_TOL};
pub use descent::{harmonic_descent, DescentOptions, DescentResult, DescentStatus};

/// Entrywise tolerance for a triangle holonomy to count as the identity.
pub const HOLONOMY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum HarmonicError {
    #[error("triangle {triangle} has holonomy {deviation:e} away from the identity")]
    BadHolonomy { triangle: usize, deviation: f64 },
    #[error("edge {edge} joins two non-special vertices")]
    ClassViolation { edge: usize },
    #[error("malformed complex: {0}")]
    MalformedInput(String),
    #[error("edge {edge} lies in {count} triangles, expected {expected}")]
    LinkMismatch { edge: usize, count: usize, expected: usize },
    #[error("no link gap given for {0} vertices")]
    MissingLambda(VertexClass),
    #[error(transparent)]
    Geometry(#[from] Cat0Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexClass {
    Generic,
    Special,
    NonSpecial,
}

impl VertexClass {
    pub const ALL: [VertexClass; 3] = [VertexClass::Generic, VertexClass::Special, VertexClass::NonSpecial];

    pub fn name(self) -> &'static str {
        match self {
            VertexClass::Generic => "generic",
            VertexClass::Special => "special",
            VertexClass::NonSpecial => "nonspecial",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

impl core::fmt::Display for VertexClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub voltage: Isometry,
}

/// An edge traversed in one direction. The forward dart of `(u, v, g)` runs
/// from `u` to `v` with voltage `g`; the reversed one from `v` to `u` with
/// voltage `g⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dart {
    pub edge: usize,
    pub reversed: bool,
}

impl Dart {
    pub fn forward(edge: usize) -> Self {
        Dart { edge, reversed: false }
    }

    pub fn backward(edge: usize) -> Self {
        Dart { edge, reversed: true }
    }

    pub fn reverse(self) -> Self {
        Dart { edge: self.edge, reversed: !self.reversed }
    }
}

/// Three darts forming a closed walk `d₀ d₁ d₂`. Its holonomy is the product
/// `g₀ g₁ g₂` of the dart voltages, which must be the identity.
pub type Triangle = [Dart; 3];

#[derive(Clone, Debug, PartialEq)]
pub struct VoltageComplex {
    space: ModelSpace,
    classes: Vec<VertexClass>,
    edges: Vec<Edge>,
    inverses: Vec<Isometry>,
    triangles: Vec<Triangle>,
    q: Option<usize>,
    /// Darts leaving each vertex, ordered by edge, forward before reversed.
    darts_at: Vec<Vec<Dart>>,
}

impl VoltageComplex {
    /// Validates and builds a complex: edge endpoints and voltages,
    /// triangle closure and holonomy, and the rule that no edge joins two
    /// non-special vertices.
    pub fn new(
        space: ModelSpace,
        classes: Vec<VertexClass>,
        edges: Vec<Edge>,
        triangles: Vec<Triangle>,
        q: Option<usize>,
    ) -> Result<Self, HarmonicError> {
        space.validate()?;
        let n = classes.len();
        let mut inverses = Vec::with_capacity(edges.len());
        let mut darts_at = alloc::vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.from >= n || e.to >= n {
                return Err(HarmonicError::MalformedInput(format!("edge {i} has an endpoint outside 0..{n}")));
            }
            space
                .validate_isometry(&e.voltage)
                .map_err(|err| HarmonicError::MalformedInput(format!("edge {i}: {err}")))?;
            if classes[e.from] == VertexClass::NonSpecial && classes[e.to] == VertexClass::NonSpecial {
                return Err(HarmonicError::ClassViolation { edge: i });
            }
            inverses.push(e.voltage.inverse()?);
            darts_at[e.from].push(Dart::forward(i));
            darts_at[e.to].push(Dart::backward(i));
        }
        let mut c = VoltageComplex { space, classes, edges, inverses, triangles: Vec::new(), q, darts_at };
        for (t, tri) in triangles.iter().enumerate() {
            if let Some(d) = tri.iter().find(|d| d.edge >= c.edges.len()) {
                return Err(HarmonicError::MalformedInput(format!("triangle {t} uses unknown edge {}", d.edge)));
            }
            for i in 0..3 {
                if c.head(tri[i]) != c.tail(tri[(i + 1) % 3]) {
                    return Err(HarmonicError::MalformedInput(format!("triangle {t} is not a closed walk")));
                }
            }
            let h = c.voltage(tri[0]).compose(c.voltage(tri[1]))?.compose(c.voltage(tri[2]))?;
            let deviation = h.deviation_from_identity();
            if !(deviation <= HOLONOMY_TOL) {
                return Err(HarmonicError::BadHolonomy { triangle: t, deviation });
            }
        }
        c.triangles = triangles;
        Ok(c)
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn vertex_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[VertexClass] {
        &self.classes
    }

    pub fn class(&self, v: usize) -> VertexClass {
        self.classes[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn q(&self) -> Option<usize> {
        self.q
    }

    pub fn tail(&self, d: Dart) -> usize {
        let e = &self.edges[d.edge];
        if d.reversed { e.to } else { e.from }
    }

    pub fn head(&self, d: Dart) -> usize {
        let e = &self.edges[d.edge];
        if d.reversed { e.from } else { e.to }
    }

    pub fn voltage(&self, d: Dart) -> &Isometry {
        if d.reversed { &self.inverses[d.edge] } else { &self.edges[d.edge].voltage }
    }

    /// Darts leaving `v`: the vertices of its link.
    pub fn darts_at(&self, v: usize) -> &[Dart] {
        &self.darts_at[v]
    }

    /// Number of triangles through each edge.
    pub fn triangle_counts(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.edges.len()];
        for tri in &self.triangles {
            for d in tri {
                counts[d.edge] += 1;
            }
        }
        counts
    }

    /// Edges of the link of `v` as pairs of positions in [`darts_at`]: one
    /// for each corner of a triangle at `v`, joining the dart leaving the
    /// corner and the reverse of the dart arriving at it.
    ///
    /// [`darts_at`]: VoltageComplex::darts_at
    pub fn link_edges(&self, v: usize) -> Vec<(usize, usize)> {
        let darts = &self.darts_at[v];
        let pos = |d: Dart| darts.iter().position(|x| *x == d).expect("dart leaves its tail");
        let mut out = Vec::new();
        for tri in &self.triangles {
            for i in 0..3 {
                if self.tail(tri[i]) == v {
                    out.push((pos(tri[i]), pos(tri[(i + 2) % 3].reverse())));
                }
            }
        }
        out
    }

    /// The value a dart sees at its far end: `g · f(head)`.
    pub fn transported(&self, f: &EquivariantMap, d: Dart) -> Result<Point, Cat0Error> {
        self.space.apply(self.voltage(d), &f.values[self.head(d)])
    }

    /// `E(f) = Σ_{(u,v,g)} d(f(u), g·f(v))²`.
    pub fn energy(&self, f: &EquivariantMap) -> Result<f64, HarmonicError> {
        self.check_map(f)?;
        let mut e = 0.0;
        for i in 0..self.edges.len() {
            e += self.edge_energy(f, i)?;
        }
        Ok(e)
    }

    pub fn edge_energy(&self, f: &EquivariantMap, edge: usize) -> Result<f64, Cat0Error> {
        let e = &self.edges[edge];
        let moved = self.space.apply(&e.voltage, &f.values[e.to])?;
        self.space.distance_sqr(&f.values[e.from], &moved)
    }

    /// Energy of the edges at `v`, loops counted once.
    pub(crate) fn local_energy(&self, f: &EquivariantMap, v: usize) -> Result<f64, Cat0Error> {
        let mut e = 0.0;
        for d in &self.darts_at[v] {
            let edge = &self.edges[d.edge];
            if d.reversed && edge.from == edge.to {
                continue;
            }
            e += self.edge_energy(f, d.edge)?;
        }
        Ok(e)
    }

    /// `Df|_v`: the tangent `log(f(v), g·f(u))` for every dart at `v`, in
    /// the order of [`darts_at`](VoltageComplex::darts_at).
    pub fn differential(&self, f: &EquivariantMap, v: usize) -> Result<Vec<Tangent>, HarmonicError> {
        self.check_map(f)?;
        self.differential_unchecked(f, v).map_err(Into::into)
    }

    pub(crate) fn differential_unchecked(&self, f: &EquivariantMap, v: usize) -> Result<Vec<Tangent>, Cat0Error> {
        self.darts_at[v]
            .iter()
            .map(|&d| self.space.log(&f.values[v], &self.transported(f, d)?))
            .collect()
    }

    /// `‖Σ_u Df|_v(u)‖` at one vertex; half the norm of the energy
    /// gradient there.
    pub fn vertex_residual(&self, f: &EquivariantMap, v: usize) -> Result<f64, Cat0Error> {
        let mut sum = self.space.zero_tangent();
        for t in self.differential_unchecked(f, v)? {
            sum = sum.add(&t);
        }
        self.space.tangent_norm(&f.values[v], &sum)
    }

    /// `max_v ‖Σ_u Df|_v(u)‖`.
    pub fn gradient_residual(&self, f: &EquivariantMap) -> Result<f64, HarmonicError> {
        self.check_map(f)?;
        let mut r: f64 = 0.0;
        for v in 0..self.vertex_count() {
            r = r.max(self.vertex_residual(f, v)?);
        }
        Ok(r)
    }

    /// The complex with every voltage conjugated by `h`, under which
    /// `h·f` has the same energy as `f`.
    pub fn conjugated(&self, h: &Isometry) -> Result<VoltageComplex, HarmonicError> {
        let edges = self
            .edges
            .iter()
            .map(|e| Ok(Edge { from: e.from, to: e.to, voltage: e.voltage.conjugate_by(h)? }))
            .collect::<Result<Vec<_>, Cat0Error>>()?;
        VoltageComplex::new(self.space.clone(), self.classes.clone(), edges, self.triangles.clone(), self.q)
    }

    pub fn check_map(&self, f: &EquivariantMap) -> Result<(), HarmonicError> {
        if f.space != self.space {
            return Err(HarmonicError::MalformedInput(format!(
                "map takes values in {}, complex acts on {}",
                f.space.name(),
                self.space.name()
            )));
        }
        if f.values.len() != self.vertex_count() {
            return Err(HarmonicError::MalformedInput(format!(
                "map has {} values for {} vertices",
                f.values.len(),
                self.vertex_count()
            )));
        }
        Ok(())
    }
}

/// One point per vertex of the fundamental domain.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantMap {
    space: ModelSpace,
    values: Vec<Point>,
}

impl EquivariantMap {
    pub fn new(space: ModelSpace, values: Vec<Point>) -> Result<Self, HarmonicError> {
        for (v, p) in values.iter().enumerate() {
            space
                .validate_point(p)
                .map_err(|e| HarmonicError::MalformedInput(format!("value at vertex {v}: {e}")))?;
        }
        Ok(EquivariantMap { space, values })
    }

    pub fn constant(space: ModelSpace, n: usize, p: Point) -> Result<Self, HarmonicError> {
        Self::new(space, alloc::vec![p; n])
    }

    pub fn random<R: rand::Rng + ?Sized>(space: ModelSpace, n: usize, rng: &mut R, scale: f64) -> Self {
        let values = (0..n).map(|_| space.random_point(rng, scale)).collect();
        EquivariantMap { space, values }
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn values(&self) -> &[Point] {
        &self.values
    }

    pub fn value(&self, v: usize) -> &Point {
        &self.values[v]
    }

    pub fn into_values(self) -> Vec<Point> {
        self.values
    }

    pub(crate) fn set(&mut self, v: usize, p: Point) {
        self.values[v] = p;
    }

    /// `v ↦ h·f(v)`.
    pub fn transformed(&self, h: &Isometry) -> Result<EquivariantMap, Cat0Error> {
        let values = self.values.iter().map(|p| self.space.apply(h, p)).collect::<Result<_, _>>()?;
        Ok(EquivariantMap { space: self.space.clone(), values })
    }

    /// `max_v d(f(v), g(v))`.
    pub fn max_distance(&self, other: &EquivariantMap) -> Result<f64, Cat0Error> {
        let mut m: f64 = 0.0;
        for (a, b) in self.values.iter().zip(&other.values) {
            m = m.max(self.space.distance(a, b)?);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests;
