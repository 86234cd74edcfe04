//! Small voltage complexes used as test beds.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{Dart, Edge, HarmonicError, Triangle, VertexClass, VoltageComplex};
use crate::cat0::{Isometry, ModelSpace};

/// One vertex and no edges.
pub fn trivial(space: ModelSpace) -> Result<VoltageComplex, HarmonicError> {
    VoltageComplex::new(space, alloc::vec![VertexClass::Generic], Vec::new(), Vec::new(), None)
}

/// One vertex with a loop per generator and no triangles. Its energy at
/// `x` is the displacement `Σ_g d(x, g·x)²`.
pub fn bouquet(space: ModelSpace, generators: &[Isometry]) -> Result<VoltageComplex, HarmonicError> {
    let edges = generators.iter().map(|g| Edge { from: 0, to: 0, voltage: g.clone() }).collect();
    VoltageComplex::new(space, alloc::vec![VertexClass::Generic], edges, Vec::new(), None)
}

/// A simplicial complex given by its faces, with identity voltages. Edges
/// are the sides of the faces, ordered lexicographically and oriented from
/// the smaller vertex.
pub fn simplicial(space: ModelSpace, classes: Vec<VertexClass>, faces: &[[usize; 3]], q: Option<usize>) -> Result<VoltageComplex, HarmonicError> {
    let mut index = BTreeMap::new();
    for f in faces {
        for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[0], f[2])] {
            index.insert((a.min(b), a.max(b)), 0);
        }
    }
    for (i, slot) in index.values_mut().enumerate() {
        *slot = i;
    }
    let id = space.identity_isometry();
    let edges = index.keys().map(|&(a, b)| Edge { from: a, to: b, voltage: id.clone() }).collect();
    let dart = |a: usize, b: usize| {
        let e = index[&(a.min(b), a.max(b))];
        if a < b { Dart::forward(e) } else { Dart::backward(e) }
    };
    let triangles: Vec<Triangle> = faces.iter().map(|f| [dart(f[0], f[1]), dart(f[1], f[2]), dart(f[2], f[0])]).collect();
    VoltageComplex::new(space, classes, edges, triangles, q)
}

/// Boundary of the tetrahedron: every edge lies in two faces and every
/// link is a triangle.
pub fn tetrahedron(space: ModelSpace) -> Result<VoltageComplex, HarmonicError> {
    let faces = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    simplicial(space, alloc::vec![VertexClass::Generic; 4], &faces, Some(1))
}

/// Boundary of the octahedron with vertices `±e₁, ±e₂` (indices 0–3)
/// special and `±e₃` (indices 4, 5) non-special. Every face has one
/// special–special edge and every link is a 4-cycle.
pub fn octahedron(space: ModelSpace) -> Result<VoltageComplex, HarmonicError> {
    let mut faces = Vec::new();
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                faces.push([x, y, z]);
            }
        }
    }
    let mut classes = alloc::vec![VertexClass::Special; 4];
    classes.extend([VertexClass::NonSpecial; 2]);
    simplicial(space, classes, &faces, Some(1))
}

/// One-vertex torus triangulated by two triangles, with loops `a`, `b` and
/// `c` carrying `g`, `h` and `g⁻¹h`. Needs `g` and `h` to commute; the link
/// of the vertex is a hexagon.
pub fn torus(space: ModelSpace, g: &Isometry, h: &Isometry) -> Result<VoltageComplex, HarmonicError> {
    let c = g.inverse()?.compose(h)?;
    let edges = alloc::vec![
        Edge { from: 0, to: 0, voltage: g.clone() },
        Edge { from: 0, to: 0, voltage: h.clone() },
        Edge { from: 0, to: 0, voltage: c },
    ];
    let triangles = alloc::vec![
        [Dart::forward(0), Dart::forward(2), Dart::backward(1)],
        [Dart::forward(1), Dart::backward(0), Dart::backward(2)],
    ];
    VoltageComplex::new(space, alloc::vec![VertexClass::Generic], edges, triangles, Some(1))
}
