use alloc::vec::Vec;

use super::{EquivariantMap, HarmonicError, VertexClass, VoltageComplex};
use crate::cat0::Cat0Error;
use crate::linalg::{eigenvalues_symmetric, Mat};
use crate::spectra::KERNEL_TOL;

/// Per-vertex slack allowed in the comparison inequality.
pub const CHAIN_SLACK: f64 = 1e-9;
/// Relative tolerance of the lower bound through the link gaps.
pub const EQ3_TOL: f64 = 1e-8;
/// The lower bound needs `Σ_u Df|_v(u) = 0`; it is asserted only when the
/// gradient residual is at most this.
pub const EQ3_RESIDUAL_GATE: f64 = 1e-6;

/// Link spectral gap to use for each vertex class.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LambdaTable {
    pub generic: Option<f64>,
    pub special: Option<f64>,
    pub nonspecial: Option<f64>,
}

impl LambdaTable {
    pub fn uniform(lambda: f64) -> Self {
        LambdaTable { generic: Some(lambda), special: Some(lambda), nonspecial: Some(lambda) }
    }

    pub fn get(&self, class: VertexClass) -> Option<f64> {
        match class {
            VertexClass::Generic => self.generic,
            VertexClass::Special => self.special,
            VertexClass::NonSpecial => self.nonspecial,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexChain {
    pub vertex: usize,
    pub class: VertexClass,
    pub lambda: f64,
    /// Smallest nonzero Laplacian eigenvalue of the link as built from the
    /// triangles (0 if the link is disconnected or edgeless).
    pub link_lambda: f64,
    pub link_vertices: usize,
    pub link_edges: usize,
    /// `‖d(Df)_v‖² = Σ_{(u,w)} ‖Df|_v(u) − Df|_v(w)‖²` over link edges.
    pub differential_energy: f64,
    /// `Σ_{(u,w)} d(f(u), f(w))²` over the same link edges.
    pub comparison: f64,
    /// `comparison − differential_energy`, nonnegative in CAT(0) targets.
    pub slack: f64,
    /// `‖Df|_v‖² = Σ_u ‖Df|_v(u)‖²`.
    pub differential_norm: f64,
    /// `‖Σ_u Df|_v(u)‖`.
    pub residual: f64,
}

/// Sums over special and non-special vertices, with `E₁` the energy of
/// special–special edges and `E₂` that of special–non-special edges.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitReport {
    pub e1: f64,
    pub e2: f64,
    pub special_sum: f64,
    /// `(q+1) E₂`.
    pub special_upper: f64,
    /// `λ_S (2E₁ + E₂)`.
    pub special_lower: f64,
    pub nonspecial_sum: f64,
    /// `(q+1) E₁`.
    pub nonspecial_upper: f64,
    /// `λ_NS E₂`.
    pub nonspecial_lower: f64,
    pub upper_holds: bool,
    /// Both lower bounds; `None` when they are not asserted.
    pub lower_holds: Option<bool>,
    /// `E₁ ≥ E₂`, which follows from the bounds when `λ_NS = q+1`;
    /// `None` when the lower bounds are not asserted.
    pub e1_dominates: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainReport {
    pub q: usize,
    pub energy: f64,
    pub vertices: Vec<VertexChain>,
    /// Every vertex has slack at least `-CHAIN_SLACK`.
    pub comparison_holds: bool,
    /// `Σ_v ‖d(Df)_v‖²`.
    pub differential_total: f64,
    /// `Σ_v` of the comparison sums.
    pub comparison_total: f64,
    /// `(q+1) E(f)`, which the comparison total equals.
    pub counting_target: f64,
    pub counting_error: f64,
    pub counting_holds: bool,
    /// `Σ_v λ_v ‖Df|_v‖²`, equal to `2λE(f)` for a uniform gap.
    pub gap_bound: f64,
    pub gap_slack: f64,
    pub gradient_residual: f64,
    /// Whether the map is close enough to harmonic for the gap bound.
    pub gap_asserted: bool,
    pub gap_holds: Option<bool>,
    pub split: Option<SplitReport>,
}

impl ChainReport {
    /// All asserted inequalities and identities hold.
    pub fn passes(&self) -> bool {
        self.comparison_holds
            && self.counting_holds
            && self.gap_holds != Some(false)
            && self.split.as_ref().is_none_or(|s| s.upper_holds && s.lower_holds != Some(false))
    }
}

/// Compares the differential of `f` with the energy through the links:
/// per-vertex comparison sums, their total against `(q+1) E(f)`, the
/// lower bound `Σ_v λ_v ‖Df|_v‖²`, and the special/non-special split when
/// both classes occur.
pub fn wang_chain_report(c: &VoltageComplex, f: &EquivariantMap, lambdas: &LambdaTable) -> Result<ChainReport, HarmonicError> {
    c.check_map(f)?;
    let q = edge_regularity(c)?;
    let space = c.space();
    let energy = c.energy(f)?;
    let mut vertices = Vec::with_capacity(c.vertex_count());
    for v in 0..c.vertex_count() {
        let class = c.class(v);
        let lambda = lambdas.get(class).ok_or(HarmonicError::MissingLambda(class))?;
        let darts = c.darts_at(v);
        let link = c.link_edges(v);
        let df = c.differential_unchecked(f, v)?;
        let base = f.value(v);
        let transported = darts.iter().map(|&d| c.transported(f, d)).collect::<Result<Vec<_>, Cat0Error>>()?;
        let mut differential_energy = 0.0;
        let mut comparison = 0.0;
        for &(a, b) in &link {
            let diff = df[a].sub(&df[b]);
            differential_energy += space.inner(base, &diff, &diff)?;
            comparison += space.distance_sqr(&transported[a], &transported[b])?;
        }
        let mut differential_norm = 0.0;
        let mut sum = space.zero_tangent();
        for t in &df {
            differential_norm += space.inner(base, t, t)?;
            sum = sum.add(t);
        }
        vertices.push(VertexChain {
            vertex: v,
            class,
            lambda,
            link_lambda: link_gap(darts.len(), &link),
            link_vertices: darts.len(),
            link_edges: link.len(),
            differential_energy,
            comparison,
            slack: comparison - differential_energy,
            differential_norm,
            residual: space.tangent_norm(base, &sum)?,
        });
    }
    let differential_total: f64 = vertices.iter().map(|v| v.differential_energy).sum();
    let comparison_total: f64 = vertices.iter().map(|v| v.comparison).sum();
    let counting_target = (q + 1) as f64 * energy;
    let counting_error = (comparison_total - counting_target).abs();
    let gap_bound: f64 = vertices.iter().map(|v| v.lambda * v.differential_norm).sum();
    let gap_slack = differential_total - gap_bound;
    let gradient_residual = vertices.iter().map(|v| v.residual).fold(0.0, f64::max);
    let gap_asserted = gradient_residual <= EQ3_RESIDUAL_GATE;
    let scale = energy.max(1.0);
    let split = split_report(c, f, q, lambdas, &vertices, gap_asserted)?;
    Ok(ChainReport {
        q,
        energy,
        comparison_holds: vertices.iter().all(|v| v.slack >= -CHAIN_SLACK),
        vertices,
        differential_total,
        comparison_total,
        counting_target,
        counting_error,
        counting_holds: counting_error <= 1e-9 * scale,
        gap_bound,
        gap_slack,
        gradient_residual,
        gap_asserted,
        gap_holds: gap_asserted.then_some(gap_slack >= -EQ3_TOL * scale),
        split,
    })
}

/// The common number of triangles through each edge, minus one. Checked
/// against the declared `q` when there is one.
fn edge_regularity(c: &VoltageComplex) -> Result<usize, HarmonicError> {
    let counts = c.triangle_counts();
    let expected = match (c.q(), counts.first()) {
        (Some(q), _) => q + 1,
        (None, Some(&n)) => n,
        (None, None) => return Ok(0),
    };
    if let Some((edge, &count)) = counts.iter().enumerate().find(|(_, &n)| n != expected) {
        return Err(HarmonicError::LinkMismatch { edge, count, expected });
    }
    if expected == 0 {
        return Err(HarmonicError::LinkMismatch { edge: 0, count: 0, expected: 1 });
    }
    Ok(expected - 1)
}

fn link_gap(n: usize, edges: &[(usize, usize)]) -> f64 {
    if n < 2 || !connected(n, edges) {
        return 0.0;
    }
    let mut lap = Mat::zeros(n, n);
    for &(a, b) in edges {
        lap[(a, a)] += 1.0;
        lap[(b, b)] += 1.0;
        lap[(a, b)] -= 1.0;
        lap[(b, a)] -= 1.0;
    }
    let values = eigenvalues_symmetric(&lap).expect("graph Laplacians are symmetric");
    let scale = values.last().copied().unwrap_or(0.0).max(1.0);
    values.into_iter().find(|&l| l > KERNEL_TOL * scale).unwrap_or(0.0)
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let root = find(&mut parent, 0);
    (1..n).all(|x| find(&mut parent, x) == root)
}

fn split_report(
    c: &VoltageComplex,
    f: &EquivariantMap,
    q: usize,
    lambdas: &LambdaTable,
    vertices: &[VertexChain],
    asserted: bool,
) -> Result<Option<SplitReport>, HarmonicError> {
    let has = |k| c.classes().contains(&k);
    if !has(VertexClass::Special) || !has(VertexClass::NonSpecial) {
        return Ok(None);
    }
    let (mut e1, mut e2) = (0.0, 0.0);
    for (i, e) in c.edges().iter().enumerate() {
        let ends = (c.class(e.from), c.class(e.to));
        let value = c.edge_energy(f, i)?;
        match ends {
            (VertexClass::Special, VertexClass::Special) => e1 += value,
            (VertexClass::Special, VertexClass::NonSpecial) | (VertexClass::NonSpecial, VertexClass::Special) => e2 += value,
            _ => {}
        }
    }
    let sum_of = |k| vertices.iter().filter(|v| v.class == k).map(|v| v.differential_energy).sum::<f64>();
    let special_sum = sum_of(VertexClass::Special);
    let nonspecial_sum = sum_of(VertexClass::NonSpecial);
    let lambda_s = lambdas.special.ok_or(HarmonicError::MissingLambda(VertexClass::Special))?;
    let lambda_ns = lambdas.nonspecial.ok_or(HarmonicError::MissingLambda(VertexClass::NonSpecial))?;
    let k = (q + 1) as f64;
    let s = SplitReport {
        e1,
        e2,
        special_sum,
        special_upper: k * e2,
        special_lower: lambda_s * (2.0 * e1 + e2),
        nonspecial_sum,
        nonspecial_upper: k * e1,
        nonspecial_lower: lambda_ns * e2,
        upper_holds: false,
        lower_holds: None,
        e1_dominates: None,
    };
    let tol = |x: f64| EQ3_TOL * x.max(1.0);
    let upper_holds = s.special_sum <= s.special_upper + tol(s.special_upper)
        && s.nonspecial_sum <= s.nonspecial_upper + tol(s.nonspecial_upper);
    let lower_holds = asserted.then(|| {
        s.special_sum >= s.special_lower - tol(s.special_lower)
            && s.nonspecial_sum >= s.nonspecial_lower - tol(s.nonspecial_lower)
    });
    let e1_dominates = asserted.then(|| e1 >= e2 - tol(e2));
    Ok(Some(SplitReport { upper_holds, lower_holds, e1_dominates, ..s }))
}
