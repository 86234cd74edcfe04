use alloc::format;
use alloc::vec::Vec;

use super::{hyperbolic, Cat0Error, ModelSpace, Point};
use crate::linalg::Mat;
use crate::math;

/// An isometry of a [`ModelSpace`].
#[derive(Clone, Debug, PartialEq)]
pub enum Isometry {
    /// `x ↦ Qx + t` with `Q` orthogonal.
    Euclidean { linear: Mat<f64>, translation: Vec<f64> },
    /// A matrix in O⁺(1,n) acting linearly on the hyperboloid.
    Hyperbolic(Mat<f64>),
    /// `S ↦ g S gᵀ` for invertible `g`.
    Spd(Mat<f64>),
    Product(Vec<Isometry>),
}

/// Entrywise tolerance of the defining matrix identities.
pub const ISOMETRY_TOL: f64 = 1e-10;

fn minkowski_metric(n: usize) -> Mat<f64> {
    let mut j = Mat::identity(n + 1);
    j[(0, 0)] = -1.0;
    j
}

impl Isometry {
    pub fn euclidean_translation(t: &[f64]) -> Self {
        Isometry::Euclidean { linear: Mat::identity(t.len()), translation: t.to_vec() }
    }

    /// Rotation by `theta` in the coordinate plane `(i, j)` of R^n, fixing the
    /// origin.
    pub fn euclidean_rotation(n: usize, i: usize, j: usize, theta: f64) -> Self {
        Isometry::Euclidean { linear: plane_rotation(n, i, j, theta), translation: alloc::vec![0.0; n] }
    }

    /// Rotation of H^n by `theta` in the spatial plane `(i, j)`
    /// (0-based spatial indices), fixing the origin.
    pub fn hyperbolic_rotation(n: usize, i: usize, j: usize, theta: f64) -> Self {
        let mut m = Mat::identity(n + 1);
        m.set_block(1, 1, &plane_rotation(n, i, j, theta));
        Isometry::Hyperbolic(m)
    }

    /// Translation of length `len` along the geodesic through the origin in
    /// spatial direction `axis`.
    pub fn hyperbolic_boost(n: usize, axis: usize, len: f64) -> Self {
        let mut m = Mat::identity(n + 1);
        let a = axis + 1;
        let (c, s) = (math::cosh(len), math::sinh(len));
        m[(0, 0)] = c;
        m[(a, a)] = c;
        m[(0, a)] = s;
        m[(a, 0)] = s;
        Isometry::Hyperbolic(m)
    }

    /// Parabolic element fixing the null vector `e₀ + e_b` (a point at
    /// infinity) and shearing along spatial direction `a`.
    pub fn hyperbolic_parabolic(n: usize, a: usize, b: usize, s: f64) -> Self {
        assert!(a != b, "parabolic needs two distinct spatial axes");
        let (a, b) = (a + 1, b + 1);
        let idx = [0, a, b];
        let h = 0.5 * s * s;
        let block = [[1.0 + h, s, -h], [s, 1.0, -s], [h, s, 1.0 - h]];
        let mut m = Mat::identity(n + 1);
        for (r, &ri) in idx.iter().enumerate() {
            for (c, &ci) in idx.iter().enumerate() {
                m[(ri, ci)] = block[r][c];
            }
        }
        Isometry::Hyperbolic(m)
    }

    pub fn spd_congruence(g: Mat<f64>) -> Self {
        Isometry::Spd(g)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry, Cat0Error> {
        match (self, other) {
            (
                Isometry::Euclidean { linear: q1, translation: t1 },
                Isometry::Euclidean { linear: q2, translation: t2 },
            ) if q1.shape() == q2.shape() => {
                let moved = q1.mat_vec(t2);
                Ok(Isometry::Euclidean {
                    linear: q1 * q2,
                    translation: moved.iter().zip(t1).map(|(a, b)| a + b).collect(),
                })
            }
            (Isometry::Hyperbolic(a), Isometry::Hyperbolic(b)) if a.shape() == b.shape() => {
                Ok(Isometry::Hyperbolic(a * b))
            }
            (Isometry::Spd(a), Isometry::Spd(b)) if a.shape() == b.shape() => Ok(Isometry::Spd(a * b)),
            (Isometry::Product(a), Isometry::Product(b)) if a.len() == b.len() => {
                a.iter().zip(b).map(|(x, y)| x.compose(y)).collect::<Result<Vec<_>, _>>().map(Isometry::Product)
            }
            _ => Err(Cat0Error::InvalidIsometry("cannot compose isometries of different spaces".into())),
        }
    }

    pub fn inverse(&self) -> Result<Isometry, Cat0Error> {
        match self {
            Isometry::Euclidean { linear, translation } => {
                let qt = linear.transpose();
                let t = qt.mat_vec(translation).into_iter().map(|x| -x).collect();
                Ok(Isometry::Euclidean { linear: qt, translation: t })
            }
            Isometry::Hyperbolic(g) => {
                let j = minkowski_metric(g.rows() - 1);
                Ok(Isometry::Hyperbolic(&(&j * &g.transpose()) * &j))
            }
            Isometry::Spd(g) => g
                .inverse()
                .map(Isometry::Spd)
                .ok_or_else(|| Cat0Error::InvalidIsometry("congruence matrix is singular".into())),
            Isometry::Product(gs) => gs.iter().map(Isometry::inverse).collect::<Result<Vec<_>, _>>().map(Isometry::Product),
        }
    }

    /// `h ∘ self ∘ h⁻¹`.
    pub fn conjugate_by(&self, h: &Isometry) -> Result<Isometry, Cat0Error> {
        h.compose(self)?.compose(&h.inverse()?)
    }

    /// Largest entry of the defining data minus the identity. For SPD
    /// congruences `g` and `-g` act alike, so the smaller of the two
    /// deviations is reported.
    pub fn deviation_from_identity(&self) -> f64 {
        match self {
            Isometry::Euclidean { linear, translation } => {
                let t = translation.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                linear.max_abs_diff(&Mat::identity(linear.rows())).max(t)
            }
            Isometry::Hyperbolic(g) => g.max_abs_diff(&Mat::identity(g.rows())),
            Isometry::Spd(g) => {
                let id = Mat::identity(g.rows());
                g.max_abs_diff(&id).min((-g).max_abs_diff(&id))
            }
            Isometry::Product(gs) => gs.iter().map(Isometry::deviation_from_identity).fold(0.0, f64::max),
        }
    }
}

fn plane_rotation(n: usize, i: usize, j: usize, theta: f64) -> Mat<f64> {
    assert!(i < n && j < n && i != j, "rotation plane out of range");
    let mut m = Mat::identity(n);
    let (c, s) = (math::cos(theta), math::sin(theta));
    m[(i, i)] = c;
    m[(j, j)] = c;
    m[(i, j)] = -s;
    m[(j, i)] = s;
    m
}

pub(super) fn validate(space: &ModelSpace, g: &Isometry) -> Result<(), Cat0Error> {
    let bad = |msg: alloc::string::String| Err(Cat0Error::InvalidIsometry(msg));
    match (space, g) {
        (ModelSpace::Euclidean(n), Isometry::Euclidean { linear, translation }) => {
            if linear.shape() != (*n, *n) || translation.len() != *n {
                return bad(format!("expected a {n}-dimensional Euclidean isometry"));
            }
            let r = (&linear.transpose() * linear).max_abs_diff(&Mat::identity(*n));
            if r > ISOMETRY_TOL {
                return bad(format!("linear part is not orthogonal (residual {r:e})"));
            }
            Ok(())
        }
        (ModelSpace::Hyperbolic(n), Isometry::Hyperbolic(m)) => {
            if m.shape() != (n + 1, n + 1) {
                return bad(format!("expected a {}x{} matrix", n + 1, n + 1));
            }
            let j = minkowski_metric(*n);
            let r = (&(&m.transpose() * &j) * m).max_abs_diff(&j);
            let scale = m.max_abs().max(1.0);
            if r > ISOMETRY_TOL * scale * scale {
                return bad(format!("matrix does not preserve the Minkowski form (residual {r:e})"));
            }
            if m[(0, 0)] < 1.0 - ISOMETRY_TOL * scale {
                return bad("matrix exchanges the two sheets".into());
            }
            Ok(())
        }
        (ModelSpace::Spd(p), Isometry::Spd(m)) => {
            if m.shape() != (*p, *p) {
                return bad(format!("expected a {p}x{p} matrix"));
            }
            if m.inverse().is_none() {
                return bad("congruence matrix is singular".into());
            }
            Ok(())
        }
        (ModelSpace::Product(fs), Isometry::Product(gs)) if fs.len() == gs.len() => {
            fs.iter().zip(gs).try_for_each(|(f, g)| validate(f, g))
        }
        _ => bad(format!("isometry does not act on {}", space.name())),
    }
}

pub(super) fn apply(space: &ModelSpace, g: &Isometry, x: &Point) -> Result<Point, Cat0Error> {
    match (space, g, x) {
        (ModelSpace::Euclidean(_), Isometry::Euclidean { linear, translation }, Point::Euclidean(v)) => {
            Ok(Point::Euclidean(linear.mat_vec(v).iter().zip(translation).map(|(a, b)| a + b).collect()))
        }
        (ModelSpace::Hyperbolic(_), Isometry::Hyperbolic(m), Point::Hyperbolic(v)) => {
            let mut out = m.mat_vec(v);
            hyperbolic::renormalize(&mut out);
            Ok(Point::Hyperbolic(out))
        }
        (ModelSpace::Spd(_), Isometry::Spd(m), Point::Spd(s)) => {
            Ok(Point::Spd((&(m * s) * &m.transpose()).symmetrize()))
        }
        (ModelSpace::Product(fs), Isometry::Product(gs), Point::Product(ps))
            if fs.len() == gs.len() && fs.len() == ps.len() =>
        {
            fs.iter()
                .zip(gs)
                .zip(ps)
                .map(|((f, g), p)| apply(f, g, p))
                .collect::<Result<Vec<_>, _>>()
                .map(Point::Product)
        }
        _ => Err(Cat0Error::InvalidIsometry(format!("isometry or point does not belong to {}", space.name()))),
    }
}
