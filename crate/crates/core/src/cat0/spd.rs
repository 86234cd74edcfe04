use alloc::format;

use super::Cat0Error;
use crate::linalg::{Mat, SymEigen};
use crate::math;

/// Smallest eigenvalue a point may have.
pub(super) const MIN_EIGENVALUE: f64 = 1e-10;

fn eigen(m: &Mat<f64>) -> Result<SymEigen, Cat0Error> {
    SymEigen::new(&m.symmetrize()).map_err(|e| Cat0Error::NumericalDegeneracy(format!("{e}")))
}

pub(super) fn validate_point(p: usize, m: &Mat<f64>) -> Result<(), Cat0Error> {
    if m.shape() != (p, p) {
        return Err(Cat0Error::InvalidPoint(format!("expected a {p}x{p} matrix, got {:?}", m.shape())));
    }
    if m.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Cat0Error::InvalidPoint("non-finite entry".into()));
    }
    let asym = m.asymmetry();
    if asym > 1e-12 * m.max_abs().max(1.0) {
        return Err(Cat0Error::InvalidPoint(format!("matrix is not symmetric (asymmetry {asym:e})")));
    }
    let min = eigen(m)?.values[0];
    if min <= MIN_EIGENVALUE {
        return Err(Cat0Error::InvalidPoint(format!("matrix is not positive definite (min eigenvalue {min:e})")));
    }
    Ok(())
}

/// `(X^{1/2}, X^{-1/2})`.
fn sqrt_pair(x: &Mat<f64>) -> Result<(Mat<f64>, Mat<f64>), Cat0Error> {
    let e = eigen(x)?;
    if e.values[0] <= 0.0 {
        return Err(Cat0Error::NumericalDegeneracy(format!("eigenvalue {} is not positive", e.values[0])));
    }
    Ok((e.apply(math::sqrt), e.apply(|l| 1.0 / math::sqrt(l))))
}

/// `A B A` for symmetric `A`, symmetrized.
fn sandwich(a: &Mat<f64>, b: &Mat<f64>) -> Mat<f64> {
    (&(a * b) * a).symmetrize()
}

pub(super) fn distance(x: &Mat<f64>, y: &Mat<f64>) -> Result<f64, Cat0Error> {
    let (_, xm) = sqrt_pair(x)?;
    let w = eigen(&sandwich(&xm, y))?;
    let mut s = 0.0;
    for &l in &w.values {
        if l <= 0.0 {
            return Err(Cat0Error::NumericalDegeneracy(format!("eigenvalue {l} is not positive")));
        }
        let ll = math::ln(l);
        s += ll * ll;
    }
    Ok(math::sqrt(s))
}

pub(super) fn exp(x: &Mat<f64>, v: &Mat<f64>) -> Result<Mat<f64>, Cat0Error> {
    let (xp, xm) = sqrt_pair(x)?;
    let w = eigen(&sandwich(&xm, v))?;
    let e = w.apply(math::exp);
    let out = sandwich(&xp, &e);
    if eigen(&out)?.values[0] <= 0.0 {
        return Err(Cat0Error::NumericalDegeneracy("exponential underflowed".into()));
    }
    Ok(out)
}

pub(super) fn log(x: &Mat<f64>, y: &Mat<f64>) -> Result<Mat<f64>, Cat0Error> {
    let (xp, xm) = sqrt_pair(x)?;
    let w = eigen(&sandwich(&xm, y))?;
    if w.values[0] <= 0.0 {
        return Err(Cat0Error::NumericalDegeneracy(format!("eigenvalue {} is not positive", w.values[0])));
    }
    Ok(sandwich(&xp, &w.apply(math::ln)))
}

/// `tr(X⁻¹ U X⁻¹ V)`.
pub(super) fn inner(x: &Mat<f64>, u: &Mat<f64>, v: &Mat<f64>) -> Result<f64, Cat0Error> {
    let (_, xm) = sqrt_pair(x)?;
    let a = sandwich(&xm, u);
    let b = sandwich(&xm, v);
    Ok(a.as_slice().iter().zip(b.as_slice()).map(|(p, q)| p * q).sum())
}
