//! The spherical apartment `S^{p-1}` cut into `2^p · p!` barycentric
//! simplices.
//!
//! The coordinate vectors `±e_i` are the vertices of `2^p` super-simplices
//! (one per sign pattern), each subdivided into `p!` simplices
//! `{x : |x_{σ(1)}| ≥ … ≥ |x_{σ(p)}|}`. Vertex `k` of the simplex `(s, σ)` is
//! the normalized partial sum `Σ_{i≤k} s_{σ(i)} e_{σ(i)} / √k`. Any two
//! points of one simplex have inner product at least `1/p`, so every
//! simplex has diameter at most `arccos(1/p) < π/2`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::math;

pub const MIN_RANK: usize = 2;
pub const MAX_RANK: usize = 7;
/// Slack of the inner-product bound `⟨x,y⟩ ≥ 1/p`.
pub const INNER_TOL: f64 = 1e-12;
/// Slack of the angle bound `∠(x,y) ≤ arccos(1/p)`.
pub const ANGLE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ApartmentError {
    #[error("rank {0} is below the minimum {MIN_RANK}")]
    RankTooSmall(usize),
    #[error("rank {0} exceeds the maximum {MAX_RANK}")]
    RankTooLarge(usize),
    #[error("invalid simplex: {0}")]
    InvalidSimplex(&'static str),
}

fn check_rank(p: usize) -> Result<(), ApartmentError> {
    if p < MIN_RANK {
        Err(ApartmentError::RankTooSmall(p))
    } else if p > MAX_RANK {
        Err(ApartmentError::RankTooLarge(p))
    } else {
        Ok(())
    }
}

/// `arccos(1/p)`.
pub fn diameter_bound(p: usize) -> f64 {
    math::acos(1.0 / p as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphericalSimplex {
    signs: Vec<i8>,
    /// `perm[k] = σ(k+1) - 1`.
    perm: Vec<usize>,
    vertices: Vec<Vec<f64>>,
}

impl SphericalSimplex {
    /// The simplex with the given signs (indexed by coordinate) and
    /// 0-based permutation.
    pub fn new(signs: Vec<i8>, perm: Vec<usize>) -> Result<Self, ApartmentError> {
        let p = signs.len();
        if perm.len() != p {
            return Err(ApartmentError::InvalidSimplex("signs and permutation differ in length"));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(ApartmentError::InvalidSimplex("signs must be ±1"));
        }
        let mut seen = alloc::vec![false; p];
        for &i in &perm {
            if i >= p || seen[i] {
                return Err(ApartmentError::InvalidSimplex("not a permutation"));
            }
            seen[i] = true;
        }
        let mut vertices = Vec::with_capacity(p);
        let mut partial = alloc::vec![0.0; p];
        for (k, &i) in perm.iter().enumerate() {
            partial[i] = f64::from(signs[i]);
            let scale = 1.0 / math::sqrt((k + 1) as f64);
            vertices.push(partial.iter().map(|x| x * scale).collect());
        }
        Ok(SphericalSimplex { signs, perm, vertices })
    }

    pub fn p(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Whether `x` lies in the simplex: `s_i x_i ≥ -tol` for all `i` and
    /// `s_{σ(k)} x_{σ(k)} ≥ s_{σ(k+1)} x_{σ(k+1)} - tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        let signed = |i: usize| f64::from(self.signs[i]) * x[i];
        (0..self.p()).all(|i| signed(i) >= -tol) && self.perm.windows(2).all(|w| signed(w[0]) >= signed(w[1]) - tol)
    }

    /// A point `Σ wᵢ vᵢ / ‖Σ wᵢ vᵢ‖` with Dirichlet(1, …, 1) weights.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let weights: Vec<f64> = (0..self.p()).map(|_| Exp1.sample(rng)).collect();
        let mut x = alloc::vec![0.0; self.p()];
        for (w, v) in weights.iter().zip(&self.vertices) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += w * vi;
            }
        }
        normalize(&mut x);
        x
    }

    /// Largest angle between two vertices.
    pub fn vertex_diameter(&self) -> f64 {
        let mut min_inner: f64 = 1.0;
        for a in &self.vertices {
            for b in &self.vertices {
                min_inner = min_inner.min(dot(a, b));
            }
        }
        math::acos(min_inner)
    }

    /// Vertex diameter plus `samples` random pairs of points.
    pub fn diameter<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> DiameterReport {
        let mut min_inner: f64 = 1.0;
        let mut min_leading: f64 = f64::INFINITY;
        let lead = self.perm[0];
        for _ in 0..samples {
            let x = self.sample(rng);
            let y = self.sample(rng);
            min_inner = min_inner.min(dot(&x, &y));
            for z in [&x, &y] {
                min_leading = min_leading.min(f64::from(self.signs[lead]) * z[lead]);
            }
        }
        let p = self.p();
        let vertex_diam = self.vertex_diameter();
        let sampled_diam = if samples == 0 { 0.0 } else { math::acos(min_inner) };
        let bound = diameter_bound(p);
        DiameterReport {
            vertex_diam,
            sampled_diam,
            min_sampled_inner: if samples == 0 { 1.0 } else { min_inner },
            min_leading: if samples == 0 { 1.0 } else { min_leading },
            passes: vertex_diam <= bound + ANGLE_TOL
                && sampled_diam <= bound + ANGLE_TOL
                && (samples == 0 || min_inner >= 1.0 / p as f64 - INNER_TOL),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiameterReport {
    pub vertex_diam: f64,
    pub sampled_diam: f64,
    pub min_sampled_inner: f64,
    /// Smallest value of the leading signed coordinate `s_{σ(1)} x_{σ(1)}`
    /// over the samples, at least `1/√p`.
    pub min_leading: f64,
    /// Both diameters are within `arccos(1/p)` and sampled inner products
    /// at least `1/p`.
    pub passes: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) {
    let n = math::sqrt(dot(x, x));
    x.iter_mut().for_each(|c| *c /= n);
}

/// All permutations of `0..p` in lexicographic order.
fn permutations(p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..p.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
        let j = (i + 1..p).rev().find(|&j| cur[j] > cur[i]).expect("a successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// All `2^p · p!` simplices, ordered by sign pattern (bit `i` set meaning
/// `s_i = -1`) and then lexicographically by permutation.
pub fn enumerate_simplices(p: usize) -> Result<Vec<SphericalSimplex>, ApartmentError> {
    check_rank(p)?;
    let perms = permutations(p);
    let mut out = Vec::with_capacity(perms.len() << p);
    for mask in 0..1u32 << p {
        let signs: Vec<i8> = (0..p).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        for perm in &perms {
            out.push(SphericalSimplex::new(signs.clone(), perm.clone())?);
        }
    }
    Ok(out)
}

/// The simplex containing `x`: signs from the coordinates (zero counted
/// positive) and the permutation sorting `|x_i|` decreasingly, ties by
/// index.
pub fn cell_of(x: &[f64]) -> (Vec<i8>, Vec<usize>) {
    let signs = x.iter().map(|&c| if c < 0.0 { -1 } else { 1 }).collect();
    let mut perm: Vec<usize> = (0..x.len()).collect();
    perm.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()).then(a.cmp(&b)));
    (signs, perm)
}

/// Number of simplices containing `x`: each zero coordinate doubles it,
/// and each group of `m` coordinates with equal absolute value multiplies
/// it by `m!`. Values within `tol` count as equal.
pub fn containing_count(x: &[f64], tol: f64) -> usize {
    let mut abs: Vec<f64> = x.iter().map(|c| c.abs()).collect();
    abs.sort_by(|a, b| b.total_cmp(a));
    let zeros = abs.iter().filter(|&&a| a <= tol).count();
    let mut count = 1usize << zeros;
    let mut run = 1;
    for w in abs.windows(2) {
        if w[0] - w[1] <= tol {
            run += 1;
            count *= run;
        } else {
            run = 1;
        }
    }
    count
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub samples: usize,
    /// Samples lying in the simplex [`cell_of`] assigns them.
    pub covered: usize,
    /// Samples lying in exactly one simplex.
    pub unique: usize,
}

impl CoverReport {
    pub fn passes(&self) -> bool {
        self.covered == self.samples
    }
}

/// Tolerance of cell membership in [`cover_check`].
pub const COVER_TOL: f64 = 1e-12;

/// Draws `samples` uniform unit vectors and locates each in the
/// subdivision.
pub fn cover_check<R: Rng + ?Sized>(p: usize, samples: usize, rng: &mut R) -> Result<CoverReport, ApartmentError> {
    check_rank(p)?;
    let mut report = CoverReport { samples, covered: 0, unique: 0 };
    for _ in 0..samples {
        let mut x: Vec<f64> = (0..p).map(|_| StandardNormal.sample(rng)).collect();
        normalize(&mut x);
        let (signs, perm) = cell_of(&x);
        if SphericalSimplex::new(signs, perm)?.contains(&x, COVER_TOL) {
            report.covered += 1;
        }
        if containing_count(&x, COVER_TOL) == 1 {
            report.unique += 1;
        }
    }
    Ok(report)
}

/// Result of checking every simplex of one rank.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApartmentReport {
    pub p: usize,
    pub n_simplices: usize,
    pub samples_per_simplex: usize,
    pub max_diameter: f64,
    pub min_inner: f64,
    pub min_leading: f64,
    /// `π/2 - max_diameter`.
    pub bound_pi_over_2_margin: f64,
    pub bound: f64,
    pub failures: usize,
}

impl ApartmentReport {
    pub fn passes(&self) -> bool {
        self.failures == 0 && self.max_diameter <= self.bound + ANGLE_TOL && self.bound_pi_over_2_margin > 0.0
    }
}

/// Diameter check of simplex number `index` with its own random stream.
pub fn check_simplex(s: &SphericalSimplex, samples: usize, seed: u64, index: u64) -> DiameterReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    s.diameter(samples, &mut rng)
}

/// Folds per-simplex results in enumeration order.
pub fn summarize(p: usize, samples: usize, results: &[DiameterReport]) -> ApartmentReport {
    let mut r = ApartmentReport {
        p,
        n_simplices: results.len(),
        samples_per_simplex: samples,
        max_diameter: 0.0,
        min_inner: 1.0,
        min_leading: 1.0,
        bound_pi_over_2_margin: 0.0,
        bound: diameter_bound(p),
        failures: 0,
    };
    for d in results {
        r.max_diameter = r.max_diameter.max(d.vertex_diam).max(d.sampled_diam);
        r.min_inner = r.min_inner.min(d.min_sampled_inner).min(math::cos(d.vertex_diam));
        r.min_leading = r.min_leading.min(d.min_leading);
        r.failures += usize::from(!d.passes);
    }
    r.bound_pi_over_2_margin = core::f64::consts::FRAC_PI_2 - r.max_diameter;
    r
}

/// Checks every simplex of rank `p` with `samples` random pairs each.
pub fn verify_apartment(p: usize, samples: usize, seed: u64) -> Result<ApartmentReport, ApartmentError> {
    let simplices = enumerate_simplices(p)?;
    let results: Vec<DiameterReport> =
        simplices.iter().enumerate().map(|(i, s)| check_simplex(s, samples, seed, i as u64)).collect();
    Ok(summarize(p, samples, &results))
}
