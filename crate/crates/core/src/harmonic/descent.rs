use alloc::vec::Vec;

use super::{EquivariantMap, HarmonicError, VoltageComplex};
use crate::cat0::Point;

#[derive(Clone, Debug, PartialEq)]
pub struct DescentOptions {
    pub max_iter: usize,
    /// Stop once a sweep lowers the energy by less than `tol`, provided the
    /// gradient residual is at most `stall_residual`.
    pub tol: f64,
    /// Stop as soon as the gradient residual is at most this.
    pub grad_tol: f64,
    pub stall_residual: f64,
    /// Report divergence once some value moves farther than this from its
    /// starting point.
    pub divergence_radius: f64,
    /// Update all vertices from the previous sweep (Jacobi) instead of in
    /// index order (Gauss–Seidel).
    pub simultaneous: bool,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions {
            max_iter: 10_000,
            tol: 1e-12,
            grad_tol: 1e-9,
            stall_residual: 1e-6,
            divergence_radius: 1e3,
            simultaneous: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescentStatus {
    Converged,
    MaxIter,
    Diverging,
}

impl DescentStatus {
    pub fn name(self) -> &'static str {
        match self {
            DescentStatus::Converged => "Converged",
            DescentStatus::MaxIter => "MaxIter",
            DescentStatus::Diverging => "Diverging",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DescentResult {
    pub map: EquivariantMap,
    /// Energy before the first sweep and after each sweep.
    pub trace: Vec<f64>,
    pub status: DescentStatus,
    pub sweeps: usize,
    pub residual: f64,
    /// Largest distance of a value from its starting point.
    pub drift: f64,
}

impl DescentResult {
    pub fn energy(&self) -> f64 {
        *self.trace.last().expect("trace holds the initial energy")
    }
}

/// Halvings of the step toward a candidate before a vertex is left alone.
const MAX_HALVINGS: usize = 40;

/// Energy descent by repeated local averaging: each vertex moves toward the
/// Fréchet mean of the values its darts see, backtracking along the
/// geodesic until its local energy does not increase.
pub fn harmonic_descent(
    c: &VoltageComplex,
    f0: &EquivariantMap,
    opts: &DescentOptions,
) -> Result<DescentResult, HarmonicError> {
    c.check_map(f0)?;
    let mut f = f0.clone();
    let mut energy = c.energy(&f)?;
    let mut trace = alloc::vec![energy];
    let mut residual = c.gradient_residual(&f)?;
    let mut drift = 0.0;
    if residual <= opts.grad_tol {
        return Ok(DescentResult { map: f, trace, status: DescentStatus::Converged, sweeps: 0, residual, drift });
    }
    for sweep in 1..=opts.max_iter {
        if opts.simultaneous {
            jacobi_sweep(c, &mut f, energy)?;
        } else {
            for v in 0..c.vertex_count() {
                gauss_seidel_step(c, &mut f, v)?;
            }
        }
        let next = c.energy(&f)?;
        let decrease = energy - next;
        energy = next;
        trace.push(energy);
        residual = c.gradient_residual(&f)?;
        drift = f.max_distance(f0)?;
        let status = if drift > opts.divergence_radius {
            Some(DescentStatus::Diverging)
        } else if residual <= opts.grad_tol || (decrease < opts.tol && residual <= opts.stall_residual) {
            Some(DescentStatus::Converged)
        } else {
            None
        };
        if let Some(status) = status {
            return Ok(DescentResult { map: f, trace, status, sweeps: sweep, residual, drift });
        }
    }
    Ok(DescentResult { map: f, trace, status: DescentStatus::MaxIter, sweeps: opts.max_iter, residual, drift })
}

fn candidate(c: &VoltageComplex, f: &EquivariantMap, v: usize) -> Result<Option<Point>, HarmonicError> {
    let darts = c.darts_at(v);
    if darts.is_empty() {
        return Ok(None);
    }
    let targets = darts.iter().map(|&d| c.transported(f, d)).collect::<Result<Vec<_>, _>>()?;
    let weights = alloc::vec![1.0; targets.len()];
    Ok(Some(c.space().frechet_mean(&targets, &weights)?))
}

fn gauss_seidel_step(c: &VoltageComplex, f: &mut EquivariantMap, v: usize) -> Result<(), HarmonicError> {
    let Some(target) = candidate(c, f, v)? else { return Ok(()) };
    let old = f.value(v).clone();
    let before = c.local_energy(f, v)?;
    let direction = c.space().log(&old, &target)?;
    let mut t = 1.0;
    for _ in 0..MAX_HALVINGS {
        f.set(v, c.space().exp(&old, &direction.scale(t))?);
        if c.local_energy(f, v)? <= before {
            return Ok(());
        }
        t *= 0.5;
    }
    f.set(v, old);
    Ok(())
}

fn jacobi_sweep(c: &VoltageComplex, f: &mut EquivariantMap, before: f64) -> Result<(), HarmonicError> {
    let old = f.clone();
    let mut directions = Vec::with_capacity(c.vertex_count());
    for v in 0..c.vertex_count() {
        directions.push(match candidate(c, &old, v)? {
            Some(target) => Some(c.space().log(old.value(v), &target)?),
            None => None,
        });
    }
    let mut t = 1.0;
    for _ in 0..MAX_HALVINGS {
        for (v, dir) in directions.iter().enumerate() {
            if let Some(dir) = dir {
                f.set(v, c.space().exp(old.value(v), &dir.scale(t))?);
            }
        }
        if c.energy(f)? <= before {
            return Ok(());
        }
        t *= 0.5;
    }
    *f = old;
    Ok(())
}
