//! Finite-rank CAT(0) model spaces: Euclidean space, hyperbolic space in
//! the hyperboloid model, symmetric positive-definite matrices with the
//! affine-invariant metric, and L² products of these.

mod hyperbolic;
mod isometry;
mod spd;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::Mat;
use crate::math;

pub use hyperbolic::{minkowski, translation_length};
pub use isometry::Isometry;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Cat0Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid tangent vector: {0}")]
    InvalidTangent(String),
    #[error("invalid isometry: {0}")]
    InvalidIsometry(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("weights must be nonnegative, finite, not all zero, and one per point")]
    BadWeights,
}

/// A model space. Products are kept flat.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpace {
    /// R^n.
    Euclidean(usize),
    /// H^n as the upper sheet of `-x₀² + x₁² + … + x_n² = -1` in R^{n+1}.
    Hyperbolic(usize),
    /// p×p symmetric positive-definite matrices, `d(X,Y) = ‖log(X^{-1/2} Y X^{-1/2})‖_F`.
    Spd(usize),
    /// L² product of non-product factors.
    Product(Vec<ModelSpace>),
}

/// A point of a [`ModelSpace`], with the same shape as the space.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Euclidean(Vec<f64>),
    /// Hyperboloid coordinates `(x₀, …, x_n)`.
    Hyperbolic(Vec<f64>),
    Spd(Mat<f64>),
    Product(Vec<Point>),
}

/// A tangent vector. Hyperbolic tangents are ambient vectors
/// Minkowski-orthogonal to the base point; SPD tangents are symmetric
/// matrices.
#[derive(Clone, Debug, PartialEq)]
pub enum Tangent {
    Euclidean(Vec<f64>),
    Hyperbolic(Vec<f64>),
    Spd(Mat<f64>),
    Product(Vec<Tangent>),
}

/// Tolerance of the Fréchet-mean stopping rule, relative to `Σwᵢ · max dᵢ`.
pub const FRECHET_TOL: f64 = 1e-10;
/// Relative energy increase attributed to rounding in descent loops.
pub const ENERGY_ROUNDING: f64 = 1e-12;
pub const FRECHET_MAX_ITER: usize = 10_000;
/// Iterations without a smaller residual after which the mean is returned.
const FRECHET_STALL: usize = 20;

impl ModelSpace {
    /// Builds a product, flattening nested products. Rejects empty
    /// products and zero-dimensional factors.
    pub fn product(factors: Vec<ModelSpace>) -> Result<Self, Cat0Error> {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                ModelSpace::Product(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.is_empty() {
            return Err(Cat0Error::InvalidSpace("empty product".into()));
        }
        let s = ModelSpace::Product(flat);
        s.validate()?;
        Ok(s)
    }

    /// Checks flatness and nontrivial dimensions.
    pub fn validate(&self) -> Result<(), Cat0Error> {
        match self {
            ModelSpace::Euclidean(0) | ModelSpace::Hyperbolic(0) | ModelSpace::Spd(0) => {
                Err(Cat0Error::InvalidSpace(format!("zero-dimensional factor {}", self.name())))
            }
            ModelSpace::Product(fs) => {
                if fs.is_empty() {
                    return Err(Cat0Error::InvalidSpace("empty product".into()));
                }
                for f in fs {
                    if matches!(f, ModelSpace::Product(_)) {
                        return Err(Cat0Error::InvalidSpace("nested product".into()));
                    }
                    f.validate()?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ModelSpace::Euclidean(n) => format!("euclidean({n})"),
            ModelSpace::Hyperbolic(n) => format!("hyperbolic({n})"),
            ModelSpace::Spd(p) => format!("spd({p})"),
            ModelSpace::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(ModelSpace::name).collect();
                format!("product({})", parts.join(", "))
            }
        }
    }

    /// Manifold dimension.
    pub fn dim(&self) -> usize {
        match self {
            ModelSpace::Euclidean(n) | ModelSpace::Hyperbolic(n) => *n,
            ModelSpace::Spd(p) => p * (p + 1) / 2,
            ModelSpace::Product(fs) => fs.iter().map(ModelSpace::dim).sum(),
        }
    }

    /// Base point: the origin, `(1, 0, …, 0)`, or the identity matrix.
    pub fn origin(&self) -> Point {
        match self {
            ModelSpace::Euclidean(n) => Point::Euclidean(alloc::vec![0.0; *n]),
            ModelSpace::Hyperbolic(n) => {
                let mut x = alloc::vec![0.0; n + 1];
                x[0] = 1.0;
                Point::Hyperbolic(x)
            }
            ModelSpace::Spd(p) => Point::Spd(Mat::identity(*p)),
            ModelSpace::Product(fs) => Point::Product(fs.iter().map(ModelSpace::origin).collect()),
        }
    }

    pub fn zero_tangent(&self) -> Tangent {
        match self {
            ModelSpace::Euclidean(n) => Tangent::Euclidean(alloc::vec![0.0; *n]),
            ModelSpace::Hyperbolic(n) => Tangent::Hyperbolic(alloc::vec![0.0; n + 1]),
            ModelSpace::Spd(p) => Tangent::Spd(Mat::zeros(*p, *p)),
            ModelSpace::Product(fs) => Tangent::Product(fs.iter().map(ModelSpace::zero_tangent).collect()),
        }
    }

    pub fn validate_point(&self, x: &Point) -> Result<(), Cat0Error> {
        match (self, x) {
            (ModelSpace::Euclidean(n), Point::Euclidean(v)) => {
                if v.len() != *n {
                    return Err(Cat0Error::InvalidPoint(format!("expected {n} coordinates, got {}", v.len())));
                }
                if v.iter().any(|c| !c.is_finite()) {
                    return Err(Cat0Error::InvalidPoint("non-finite coordinate".into()));
                }
                Ok(())
            }
            (ModelSpace::Hyperbolic(n), Point::Hyperbolic(v)) => hyperbolic::validate_point(*n, v),
            (ModelSpace::Spd(p), Point::Spd(m)) => spd::validate_point(*p, m),
            (ModelSpace::Product(fs), Point::Product(ps)) => {
                if fs.len() != ps.len() {
                    return Err(Cat0Error::InvalidPoint(format!(
                        "expected {} factors, got {}",
                        fs.len(),
                        ps.len()
                    )));
                }
                fs.iter().zip(ps).try_for_each(|(f, p)| f.validate_point(p))
            }
            _ => Err(Cat0Error::InvalidPoint(format!("point does not belong to {}", self.name()))),
        }
    }

    pub fn validate_tangent(&self, v: &Tangent) -> Result<(), Cat0Error> {
        let ok = match (self, v) {
            (ModelSpace::Euclidean(n), Tangent::Euclidean(t)) => t.len() == *n,
            (ModelSpace::Hyperbolic(n), Tangent::Hyperbolic(t)) => t.len() == n + 1,
            (ModelSpace::Spd(p), Tangent::Spd(m)) => {
                m.shape() == (*p, *p) && m.asymmetry() <= 1e-12 * m.max_abs().max(1.0)
            }
            (ModelSpace::Product(fs), Tangent::Product(ts)) => {
                return if fs.len() == ts.len() {
                    fs.iter().zip(ts).try_for_each(|(f, t)| f.validate_tangent(t))
                } else {
                    Err(Cat0Error::InvalidTangent("factor count mismatch".into()))
                };
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Cat0Error::InvalidTangent(format!("tangent does not match {}", self.name())))
        }
    }

    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64, Cat0Error> {
        match (self, x, y) {
            (ModelSpace::Euclidean(_), Point::Euclidean(a), Point::Euclidean(b)) => {
                Ok(math::sqrt(a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum()))
            }
            (ModelSpace::Hyperbolic(_), Point::Hyperbolic(a), Point::Hyperbolic(b)) => hyperbolic::distance(a, b),
            (ModelSpace::Spd(_), Point::Spd(a), Point::Spd(b)) => spd::distance(a, b),
            (ModelSpace::Product(fs), Point::Product(a), Point::Product(b)) => {
                let mut s = 0.0;
                for ((f, p), q) in fs.iter().zip(a).zip(b) {
                    let d = f.distance(p, q)?;
                    s += d * d;
                }
                Ok(math::sqrt(s))
            }
            _ => Err(self.shape_error()),
        }
    }

    pub fn distance_sqr(&self, x: &Point, y: &Point) -> Result<f64, Cat0Error> {
        self.distance(x, y).map(|d| d * d)
    }

    fn shape_error(&self) -> Cat0Error {
        Cat0Error::InvalidPoint(format!("arguments do not belong to {}", self.name()))
    }

    pub fn exp(&self, x: &Point, v: &Tangent) -> Result<Point, Cat0Error> {
        match (self, x, v) {
            (ModelSpace::Euclidean(_), Point::Euclidean(a), Tangent::Euclidean(t)) => {
                Ok(Point::Euclidean(a.iter().zip(t).map(|(p, d)| p + d).collect()))
            }
            (ModelSpace::Hyperbolic(_), Point::Hyperbolic(a), Tangent::Hyperbolic(t)) => {
                Ok(Point::Hyperbolic(hyperbolic::exp(a, t)))
            }
            (ModelSpace::Spd(_), Point::Spd(a), Tangent::Spd(t)) => spd::exp(a, t).map(Point::Spd),
            (ModelSpace::Product(fs), Point::Product(ps), Tangent::Product(ts)) => fs
                .iter()
                .zip(ps)
                .zip(ts)
                .map(|((f, p), t)| f.exp(p, t))
                .collect::<Result<Vec<_>, _>>()
                .map(Point::Product),
            _ => Err(self.shape_error()),
        }
    }

    pub fn log(&self, x: &Point, y: &Point) -> Result<Tangent, Cat0Error> {
        match (self, x, y) {
            (ModelSpace::Euclidean(_), Point::Euclidean(a), Point::Euclidean(b)) => {
                Ok(Tangent::Euclidean(a.iter().zip(b).map(|(p, q)| q - p).collect()))
            }
            (ModelSpace::Hyperbolic(_), Point::Hyperbolic(a), Point::Hyperbolic(b)) => {
                hyperbolic::log(a, b).map(Tangent::Hyperbolic)
            }
            (ModelSpace::Spd(_), Point::Spd(a), Point::Spd(b)) => spd::log(a, b).map(Tangent::Spd),
            (ModelSpace::Product(fs), Point::Product(ps), Point::Product(qs)) => fs
                .iter()
                .zip(ps)
                .zip(qs)
                .map(|((f, p), q)| f.log(p, q))
                .collect::<Result<Vec<_>, _>>()
                .map(Tangent::Product),
            _ => Err(self.shape_error()),
        }
    }

    /// Riemannian inner product at `x`.
    pub fn inner(&self, x: &Point, u: &Tangent, v: &Tangent) -> Result<f64, Cat0Error> {
        match (self, x, u, v) {
            (ModelSpace::Euclidean(_), _, Tangent::Euclidean(a), Tangent::Euclidean(b)) => {
                Ok(a.iter().zip(b).map(|(p, q)| p * q).sum())
            }
            (ModelSpace::Hyperbolic(_), _, Tangent::Hyperbolic(a), Tangent::Hyperbolic(b)) => Ok(minkowski(a, b)),
            (ModelSpace::Spd(_), Point::Spd(base), Tangent::Spd(a), Tangent::Spd(b)) => spd::inner(base, a, b),
            (ModelSpace::Product(fs), Point::Product(ps), Tangent::Product(us), Tangent::Product(vs)) => {
                let mut s = 0.0;
                for (((f, p), a), b) in fs.iter().zip(ps).zip(us).zip(vs) {
                    s += f.inner(p, a, b)?;
                }
                Ok(s)
            }
            _ => Err(Cat0Error::InvalidTangent(format!("arguments do not belong to {}", self.name()))),
        }
    }

    pub fn tangent_norm(&self, x: &Point, v: &Tangent) -> Result<f64, Cat0Error> {
        self.inner(x, v, v).map(|s| math::sqrt(s.max(0.0)))
    }

    /// `γ(t) = exp(x, t · log(x, y))`.
    pub fn geodesic(&self, x: &Point, y: &Point, t: f64) -> Result<Point, Cat0Error> {
        let v = self.log(x, y)?;
        self.exp(x, &v.scale(t))
    }

    pub fn midpoint(&self, x: &Point, y: &Point) -> Result<Point, Cat0Error> {
        self.geodesic(x, y, 0.5)
    }

    pub fn identity_isometry(&self) -> Isometry {
        match self {
            ModelSpace::Euclidean(n) => Isometry::Euclidean { linear: Mat::identity(*n), translation: alloc::vec![0.0; *n] },
            ModelSpace::Hyperbolic(n) => Isometry::Hyperbolic(Mat::identity(n + 1)),
            ModelSpace::Spd(p) => Isometry::Spd(Mat::identity(*p)),
            ModelSpace::Product(fs) => Isometry::Product(fs.iter().map(ModelSpace::identity_isometry).collect()),
        }
    }

    pub fn validate_isometry(&self, g: &Isometry) -> Result<(), Cat0Error> {
        isometry::validate(self, g)
    }

    pub fn apply(&self, g: &Isometry, x: &Point) -> Result<Point, Cat0Error> {
        isometry::apply(self, g, x)
    }

    /// `Σ_g d(x, g·x)²`.
    pub fn displacement(&self, gens: &[Isometry], x: &Point) -> Result<f64, Cat0Error> {
        let mut s = 0.0;
        for g in gens {
            s += self.distance_sqr(x, &self.apply(g, x)?)?;
        }
        Ok(s)
    }

    /// Weighted Fréchet mean: the minimizer of `Σ wᵢ d(x, pᵢ)²`.
    ///
    /// Fixed-point iteration `x ← exp(x, Σ wᵢ log(x, pᵢ) / Σ wᵢ cᵢ)` with
    /// `cᵢ = dᵢ coth dᵢ` (which is 1 in flat directions), halving the step
    /// whenever the weighted energy would increase. Product spaces are
    /// solved factor by factor, since the objective separates.
    pub fn frechet_mean(&self, points: &[Point], weights: &[f64]) -> Result<Point, Cat0Error> {
        if points.is_empty()
            || points.len() != weights.len()
            || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0))
            || weights.iter().sum::<f64>() <= 0.0
        {
            return Err(Cat0Error::BadWeights);
        }
        match self {
            ModelSpace::Product(fs) => {
                let tol = FRECHET_TOL / math::sqrt(fs.len() as f64);
                let mut out = Vec::with_capacity(fs.len());
                for (k, f) in fs.iter().enumerate() {
                    let factor_points = points
                        .iter()
                        .map(|p| match p {
                            Point::Product(ps) if ps.len() == fs.len() => Ok(ps[k].clone()),
                            _ => Err(self.shape_error()),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    out.push(f.frechet_single(&factor_points, weights, tol)?);
                }
                Ok(Point::Product(out))
            }
            _ => self.frechet_single(points, weights, FRECHET_TOL),
        }
    }

    fn frechet_single(&self, points: &[Point], weights: &[f64], tol: f64) -> Result<Point, Cat0Error> {
        let total: f64 = weights.iter().sum();
        let start = weights
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map_or(0, |(i, _)| i);
        let mut x = points[start].clone();
        if let ModelSpace::Euclidean(n) = self {
            let mut mean = alloc::vec![0.0; *n];
            for (p, &w) in points.iter().zip(weights) {
                let Point::Euclidean(c) = p else { return Err(self.shape_error()) };
                for (m, v) in mean.iter_mut().zip(c) {
                    *m += w * v;
                }
            }
            mean.iter_mut().for_each(|m| *m /= total);
            return Ok(Point::Euclidean(mean));
        }
        let energy = |x: &Point| -> Result<f64, Cat0Error> {
            let mut e = 0.0;
            for (p, &w) in points.iter().zip(weights) {
                e += w * self.distance_sqr(x, p)?;
            }
            Ok(e)
        };
        let mut current = energy(&x)?;
        let mut residual = f64::INFINITY;
        let (mut best, mut stale) = (f64::INFINITY, 0);
        for _ in 0..FRECHET_MAX_ITER {
            let mut sum = self.zero_tangent();
            let mut maxd: f64 = 0.0;
            // Σ wᵢ dᵢ coth dᵢ bounds the Hessian of the half energy under
            // curvature ≥ -1, which makes its inverse a safe step length
            let mut curvature = 0.0;
            for (p, &w) in points.iter().zip(weights) {
                let l = self.log(&x, p)?;
                let d = self.tangent_norm(&x, &l)?;
                maxd = maxd.max(d);
                curvature += w * math::x_over_tanh(d);
                sum = sum.add(&l.scale(w));
            }
            residual = self.tangent_norm(&x, &sum)?;
            if maxd == 0.0 || residual <= tol * total * maxd {
                return Ok(x);
            }
            // the iteration contracts the residual, so a long run without
            // improvement means it has reached the rounding floor
            if residual < best {
                (best, stale) = (residual, 0);
            } else {
                stale += 1;
                if stale >= FRECHET_STALL {
                    return Ok(x);
                }
            }
            let dir = sum.scale(1.0 / curvature);
            let mut step = 1.0;
            loop {
                let cand = self.exp(&x, &dir.scale(step))?;
                let e = energy(&cand)?;
                // the bounded step is a descent step, so only rounding can
                // make the energy appear to rise
                if e <= current * (1.0 + ENERGY_ROUNDING) {
                    x = cand;
                    current = e;
                    break;
                }
                step *= 0.5;
                if step < 1e-12 {
                    // no representable descent left: x is optimal to rounding
                    return Ok(x);
                }
            }
        }
        Err(Cat0Error::NoConvergence { iterations: FRECHET_MAX_ITER, residual })
    }

    /// A random point `exp(origin, v)` with `v` Gaussian of the given scale.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R, scale: f64) -> Point {
        let o = self.origin();
        let v = self.random_tangent(&o, rng).scale(scale);
        self.exp(&o, &v).expect("exp at the origin is total")
    }

    /// A Gaussian tangent vector at `x`.
    pub fn random_tangent<R: Rng + ?Sized>(&self, x: &Point, rng: &mut R) -> Tangent {
        match (self, x) {
            (ModelSpace::Euclidean(n), _) => Tangent::Euclidean((0..*n).map(|_| normal(rng)).collect()),
            (ModelSpace::Hyperbolic(n), Point::Hyperbolic(base)) => {
                let raw: Vec<f64> = (0..=*n).map(|_| normal(rng)).collect();
                Tangent::Hyperbolic(hyperbolic::project_tangent(base, &raw))
            }
            (ModelSpace::Spd(p), _) => {
                let m = Mat::from_fn(*p, *p, |_, _| normal(rng));
                Tangent::Spd(m.symmetrize())
            }
            (ModelSpace::Product(fs), Point::Product(ps)) => {
                Tangent::Product(fs.iter().zip(ps).map(|(f, p)| f.random_tangent(p, rng)).collect())
            }
            _ => self.zero_tangent(),
        }
    }
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

impl Tangent {
    pub fn scale(&self, s: f64) -> Tangent {
        match self {
            Tangent::Euclidean(v) => Tangent::Euclidean(v.iter().map(|x| x * s).collect()),
            Tangent::Hyperbolic(v) => Tangent::Hyperbolic(v.iter().map(|x| x * s).collect()),
            Tangent::Spd(m) => Tangent::Spd(m.scale_real(s)),
            Tangent::Product(ts) => Tangent::Product(ts.iter().map(|t| t.scale(s)).collect()),
        }
    }

    /// Sum of two tangents at the same base point. Panics on a shape
    /// mismatch.
    pub fn add(&self, o: &Tangent) -> Tangent {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Tangent) -> Tangent {
        self.zip(o, |a, b| a - b)
    }

    fn zip(&self, o: &Tangent, f: impl Fn(f64, f64) -> f64 + Copy) -> Tangent {
        match (self, o) {
            (Tangent::Euclidean(a), Tangent::Euclidean(b)) => {
                Tangent::Euclidean(a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect())
            }
            (Tangent::Hyperbolic(a), Tangent::Hyperbolic(b)) => {
                Tangent::Hyperbolic(a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect())
            }
            (Tangent::Spd(a), Tangent::Spd(b)) => Tangent::Spd(Mat::from_fn(a.rows(), a.cols(), |i, j| f(a[(i, j)], b[(i, j)]))),
            (Tangent::Product(a), Tangent::Product(b)) => {
                Tangent::Product(a.iter().zip(b).map(|(x, y)| x.zip(y, f)).collect())
            }
            _ => panic!("tangent shape mismatch"),
        }
    }
}

impl Point {
    /// Hyperboloid point over the given spatial coordinates.
    pub fn hyperbolic_from_spatial(spatial: &[f64]) -> Point {
        Point::Hyperbolic(hyperbolic::lift(spatial))
    }
}
