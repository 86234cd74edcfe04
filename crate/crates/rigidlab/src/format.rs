//! JSON encodings of graphs, spaces, points, isometries, complexes and maps.
//!
//! Points and isometries carry no tag of their own; their shape is read
//! against the space they live in. Matrices are arrays of rows.

use rigidlab_core::geometry::{LinkVertex, Side};
use rigidlab_core::harmonic::{Dart, Edge, LambdaTable, VertexClass};
use rigidlab_core::{EquivariantMap, Isometry, LinkGraph, LinkKind, Mat, ModelSpace, Point, VoltageComplex};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::Error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub side: Option<String>,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub kind: String,
    pub q: u32,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
}

impl GraphJson {
    pub fn from_graph(g: &LinkGraph) -> Self {
        let vertices = g
            .vertices()
            .iter()
            .enumerate()
            .map(|(id, v)| VertexJson { id, side: v.side.map(|s| s.name().to_owned()), label: v.label.clone() })
            .collect();
        GraphJson {
            kind: g.kind().name().to_owned(),
            q: g.q(),
            vertices,
            edges: g.edges().iter().map(|&(u, w)| [u, w]).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<LinkGraph, Error> {
        let kind = LinkKind::from_name(&self.kind).ok_or_else(|| Error::Input(format!("unknown link kind {:?}", self.kind)))?;
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id != i {
                return Err(Error::Input(format!("vertex {i} has id {}", v.id)));
            }
            let side = match v.side.as_deref() {
                None => None,
                Some("point") => Some(Side::Point),
                Some("line") => Some(Side::Line),
                Some(s) => return Err(Error::Input(format!("unknown side {s:?}"))),
            };
            vertices.push(LinkVertex { side, label: v.label.clone() });
        }
        let edges = self.edges.iter().map(|&[u, w]| (u, w)).collect();
        LinkGraph::from_parts(kind, self.q, vertices, edges).map_err(|e| Error::Input(e.to_string()))
    }
}

/// `{"euclidean": n}`, `{"hyperbolic": n}`, `{"spd": n}` or
/// `{"product": [..]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceJson {
    Euclidean(usize),
    Hyperbolic(usize),
    Spd(usize),
    Product(Vec<SpaceJson>),
}

impl SpaceJson {
    pub fn from_space(s: &ModelSpace) -> Self {
        match s {
            ModelSpace::Euclidean(n) => SpaceJson::Euclidean(*n),
            ModelSpace::Hyperbolic(n) => SpaceJson::Hyperbolic(*n),
            ModelSpace::Spd(n) => SpaceJson::Spd(*n),
            ModelSpace::Product(f) => SpaceJson::Product(f.iter().map(Self::from_space).collect()),
        }
    }

    pub fn to_space(&self) -> Result<ModelSpace, Error> {
        let s = match self {
            SpaceJson::Euclidean(n) => ModelSpace::Euclidean(*n),
            SpaceJson::Hyperbolic(n) => ModelSpace::Hyperbolic(*n),
            SpaceJson::Spd(n) => ModelSpace::Spd(*n),
            SpaceJson::Product(f) => {
                let factors = f.iter().map(Self::to_space).collect::<Result<_, _>>()?;
                ModelSpace::product(factors).map_err(|e| Error::Input(e.to_string()))?
            }
        };
        s.validate().map_err(|e| Error::Input(e.to_string()))?;
        Ok(s)
    }
}

fn floats(v: &Value, what: &str) -> Result<Vec<f64>, Error> {
    let arr = v.as_array().ok_or_else(|| Error::Input(format!("{what}: expected an array")))?;
    arr.iter().map(|x| x.as_f64().ok_or_else(|| Error::Input(format!("{what}: expected numbers")))).collect()
}

fn matrix(v: &Value, what: &str) -> Result<Mat<f64>, Error> {
    let rows = v.as_array().ok_or_else(|| Error::Input(format!("{what}: expected an array of rows")))?;
    let rows = rows.iter().map(|r| floats(r, what)).collect::<Result<Vec<_>, _>>()?;
    Mat::from_rows(&rows).ok_or_else(|| Error::Input(format!("{what}: ragged matrix")))
}

fn matrix_json(m: &Mat<f64>) -> Value {
    json!(m.to_rows())
}

fn factors<'a>(v: &'a Value, n: usize, what: &str) -> Result<&'a Vec<Value>, Error> {
    match v.as_array() {
        Some(a) if a.len() == n => Ok(a),
        _ => Err(Error::Input(format!("{what}: expected {n} factors"))),
    }
}

pub fn point_from_json(space: &ModelSpace, v: &Value) -> Result<Point, Error> {
    let p = match space {
        ModelSpace::Euclidean(_) => Point::Euclidean(floats(v, "point")?),
        ModelSpace::Hyperbolic(_) => Point::Hyperbolic(floats(v, "point")?),
        ModelSpace::Spd(_) => Point::Spd(matrix(v, "point")?),
        ModelSpace::Product(fs) => Point::Product(
            fs.iter().zip(factors(v, fs.len(), "point")?).map(|(s, x)| point_from_json(s, x)).collect::<Result<_, _>>()?,
        ),
    };
    space.validate_point(&p).map_err(|e| Error::Input(e.to_string()))?;
    Ok(p)
}

pub fn point_to_json(p: &Point) -> Value {
    match p {
        Point::Euclidean(x) | Point::Hyperbolic(x) => json!(x),
        Point::Spd(m) => matrix_json(m),
        Point::Product(f) => Value::Array(f.iter().map(point_to_json).collect()),
    }
}

/// The string `"identity"` is accepted for any space.
pub fn isometry_from_json(space: &ModelSpace, v: &Value) -> Result<Isometry, Error> {
    if v.as_str() == Some("identity") {
        return Ok(space.identity_isometry());
    }
    let g = match space {
        ModelSpace::Euclidean(_) => {
            let obj = v.as_object().ok_or_else(|| Error::Input("euclidean isometry: expected {linear, translation}".into()))?;
            let linear = matrix(obj.get("linear").unwrap_or(&Value::Null), "linear")?;
            let translation = floats(obj.get("translation").unwrap_or(&Value::Null), "translation")?;
            Isometry::Euclidean { linear, translation }
        }
        ModelSpace::Hyperbolic(_) => Isometry::Hyperbolic(matrix(v, "isometry")?),
        ModelSpace::Spd(_) => Isometry::Spd(matrix(v, "isometry")?),
        ModelSpace::Product(fs) => Isometry::Product(
            fs.iter().zip(factors(v, fs.len(), "isometry")?).map(|(s, x)| isometry_from_json(s, x)).collect::<Result<_, _>>()?,
        ),
    };
    space.validate_isometry(&g).map_err(|e| Error::Input(e.to_string()))?;
    Ok(g)
}

pub fn isometry_to_json(g: &Isometry) -> Value {
    match g {
        Isometry::Euclidean { linear, translation } => json!({ "linear": matrix_json(linear), "translation": translation }),
        Isometry::Hyperbolic(m) | Isometry::Spd(m) => matrix_json(m),
        Isometry::Product(f) => Value::Array(f.iter().map(isometry_to_json).collect()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassJson {
    pub class: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: usize,
    pub to: usize,
    pub voltage: Value,
}

/// A triangle side: a bare edge index walks the edge forward.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DartJson {
    Forward(usize),
    Oriented {
        edge: usize,
        #[serde(default)]
        reverse: bool,
    },
}

impl DartJson {
    fn to_dart(self) -> Dart {
        match self {
            DartJson::Forward(e) => Dart::forward(e),
            DartJson::Oriented { edge, reverse } => Dart { edge, reversed: reverse },
        }
    }

    fn from_dart(d: Dart) -> Self {
        if d.reversed {
            DartJson::Oriented { edge: d.edge, reverse: true }
        } else {
            DartJson::Forward(d.edge)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub space: SpaceJson,
    pub vertices: Vec<ClassJson>,
    pub edges: Vec<EdgeJson>,
    #[serde(default)]
    pub triangles: Vec<[DartJson; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
}

impl ComplexJson {
    pub fn from_complex(c: &VoltageComplex) -> Self {
        ComplexJson {
            space: SpaceJson::from_space(c.space()),
            vertices: c.classes().iter().map(|k| ClassJson { class: k.name().to_owned() }).collect(),
            edges: c
                .edges()
                .iter()
                .map(|e| EdgeJson { from: e.from, to: e.to, voltage: isometry_to_json(&e.voltage) })
                .collect(),
            triangles: c.triangles().iter().map(|t| t.map(DartJson::from_dart)).collect(),
            q: c.q(),
        }
    }

    pub fn to_complex(&self) -> Result<VoltageComplex, Error> {
        let space = self.space.to_space()?;
        let classes = self
            .vertices
            .iter()
            .map(|v| VertexClass::from_name(&v.class).ok_or_else(|| Error::Input(format!("unknown vertex class {:?}", v.class))))
            .collect::<Result<Vec<_>, _>>()?;
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let voltage = isometry_from_json(&space, &e.voltage).map_err(|err| Error::Input(format!("edge {i}: {err}")))?;
                Ok(Edge { from: e.from, to: e.to, voltage })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let triangles = self.triangles.iter().map(|t| t.map(DartJson::to_dart)).collect();
        VoltageComplex::new(space, classes, edges, triangles, self.q).map_err(|e| Error::Input(e.to_string()))
    }
}

/// `{"values": [point, ..]}`, one point per vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapJson {
    pub values: Vec<Value>,
}

impl MapJson {
    pub fn from_map(f: &EquivariantMap) -> Self {
        MapJson { values: f.values().iter().map(point_to_json).collect() }
    }

    pub fn to_map(&self, c: &VoltageComplex) -> Result<EquivariantMap, Error> {
        let values = self.values.iter().map(|v| point_from_json(c.space(), v)).collect::<Result<Vec<_>, _>>()?;
        let f = EquivariantMap::new(c.space().clone(), values).map_err(|e| Error::Input(e.to_string()))?;
        c.check_map(&f).map_err(|e| Error::Input(e.to_string()))?;
        Ok(f)
    }
}

/// Link gaps per vertex class; absent classes must not occur in the complex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaJson {
    pub generic: Option<f64>,
    pub special: Option<f64>,
    pub nonspecial: Option<f64>,
}

impl LambdaJson {
    pub fn to_table(self) -> Result<LambdaTable, Error> {
        for v in [self.generic, self.special, self.nonspecial].into_iter().flatten() {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Input(format!("link gap {v} is not a nonnegative number")));
            }
        }
        Ok(LambdaTable { generic: self.generic, special: self.special, nonspecial: self.nonspecial })
    }
}
