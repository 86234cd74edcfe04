use alloc::format;
use alloc::vec::Vec;

use super::Cat0Error;
use crate::linalg::Mat;
use crate::math;

/// `-a₀b₀ + a₁b₁ + … + a_nb_n`.
pub fn minkowski(a: &[f64], b: &[f64]) -> f64 {
    let spatial: f64 = a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum();
    spatial - a[0] * b[0]
}

/// Point of the upper sheet over the given spatial coordinates.
pub(super) fn lift(spatial: &[f64]) -> Vec<f64> {
    let s: f64 = spatial.iter().map(|x| x * x).sum();
    let mut v = Vec::with_capacity(spatial.len() + 1);
    v.push(math::sqrt(1.0 + s));
    v.extend_from_slice(spatial);
    v
}

/// Puts `x` back on the upper sheet by recomputing `x₀`.
pub(super) fn renormalize(x: &mut [f64]) {
    let s: f64 = x[1..].iter().map(|c| c * c).sum();
    x[0] = math::sqrt(1.0 + s);
}

pub(super) fn validate_point(n: usize, x: &[f64]) -> Result<(), Cat0Error> {
    if x.len() != n + 1 {
        return Err(Cat0Error::InvalidPoint(format!("expected {} hyperboloid coordinates, got {}", n + 1, x.len())));
    }
    if x.iter().any(|c| !c.is_finite()) {
        return Err(Cat0Error::InvalidPoint("non-finite coordinate".into()));
    }
    if x[0] <= 0.0 {
        return Err(Cat0Error::InvalidPoint("point is on the lower sheet".into()));
    }
    // the defect of a correctly rounded point grows like x₀²
    let defect = (minkowski(x, x) + 1.0).abs();
    let scale = x[0].max(1.0);
    if defect > 1e-10 * scale * scale {
        return Err(Cat0Error::InvalidPoint(format!("Minkowski norm off by {defect:e}")));
    }
    Ok(())
}

/// Distance computed from the chord `y - x`, whose Minkowski square equals
/// `2(cosh d - 1)` and keeps nearby points accurate.
pub(super) fn distance(x: &[f64], y: &[f64]) -> Result<f64, Cat0Error> {
    let alpha = -minkowski(x, y);
    let scale = x[0].max(y[0]).max(1.0);
    if alpha < 1.0 - 1e-9 * scale * scale {
        return Err(Cat0Error::NumericalDegeneracy(format!("arccosh argument {alpha} below 1")));
    }
    let diff: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
    let chord_sqr = minkowski(&diff, &diff).max(0.0);
    Ok(math::acosh_1p(0.5 * chord_sqr))
}

pub(super) fn project_tangent(base: &[f64], v: &[f64]) -> Vec<f64> {
    let c = minkowski(base, v);
    v.iter().zip(base).map(|(a, b)| a + c * b).collect()
}

pub(super) fn exp(x: &[f64], v: &[f64]) -> Vec<f64> {
    let r = math::sqrt(minkowski(v, v).max(0.0));
    let (c, s) = (math::cosh(r), math::sinh_over_x(r));
    let mut out: Vec<f64> = x.iter().zip(v).map(|(a, b)| c * a + s * b).collect();
    renormalize(&mut out);
    out
}

pub(super) fn log(x: &[f64], y: &[f64]) -> Result<Vec<f64>, Cat0Error> {
    let d = distance(x, y)?;
    let u = project_tangent(x, y);
    let k = math::x_over_sinh(d);
    Ok(u.iter().map(|c| k * c).collect())
}

/// Translation length of an isometry of H^n for `n ≤ 3`, given as a matrix
/// in O⁺(1,n), read off conjugation invariants:
///
/// * `n = 1`: `tr G = 2 cosh ℓ` (zero for the reflection);
/// * `n = 2`: `tr G - det G = 2 cosh ℓ`;
/// * `n = 3`: `cosh ℓ` and `cos θ` are the roots with sum `tr G / 2` and
///   sum of squares `(tr G² + 4) / 4`, `cosh ℓ` being the larger one.
///
/// Returns `None` for other dimensions.
pub fn translation_length(g: &Mat<f64>) -> Option<f64> {
    let cosh_len = match g.rows() {
        2 => 0.5 * g.trace(),
        3 => 0.5 * (g.trace() - det3(g)),
        4 => {
            let s = 0.5 * g.trace();
            let q = 0.25 * ((g * g).trace() + 4.0);
            // roots of t² - s t + (s² - q)/2
            let disc = (2.0 * q - s * s).max(0.0);
            0.5 * (s + math::sqrt(disc))
        }
        _ => return None,
    };
    Some(math::acosh_1p((cosh_len - 1.0).max(0.0)))
}

fn det3(m: &Mat<f64>) -> f64 {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}
