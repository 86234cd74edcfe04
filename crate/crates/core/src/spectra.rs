//! Oriented incidence matrices of link graphs, their Gram matrices and the
//! smallest nonzero eigenvalue λ₁.

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{LinkGraph, LinkKind};
use crate::linalg::{EigenError, Mat, SymEigen};
use crate::math;

/// Eigenvalues at or below this are treated as zero.
pub const KERNEL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("AᵀA differs from (q+1)I - Adj at entry ({row}, {col})")]
    StructureMismatch { row: usize, col: usize },
    #[error("graph has {components} connected components")]
    Disconnected { components: usize },
    #[error("function is not mean-zero (component {component} sums to {sum:e})")]
    NotMeanZero { component: usize, sum: f64 },
    #[error("expected {expected} values, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// Edge × vertex matrix with `+1` at the start and `-1` at the end of each
/// edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedIncidence {
    rows: usize,
    cols: usize,
    entries: Vec<i8>,
}

impl OrientedIncidence {
    /// Uses the graph's own edge orientation.
    pub fn new(g: &LinkGraph) -> Self {
        Self::with_flips(g, &vec![false; g.edge_count()])
    }

    /// Reverses edge `i` whenever `flip[i]` is set.
    pub fn with_flips(g: &LinkGraph, flip: &[bool]) -> Self {
        assert_eq!(flip.len(), g.edge_count(), "one flip flag per edge");
        let rows = g.edge_count();
        let cols = g.vertex_count();
        let mut entries = vec![0i8; rows * cols];
        for (i, (&(u, w), &f)) in g.edges().iter().zip(flip).enumerate() {
            let (s, t) = if f { (w, u) } else { (u, w) };
            entries[i * cols + s] = 1;
            entries[i * cols + t] = -1;
        }
        Self { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, edge: usize, vertex: usize) -> i8 {
        self.entries[edge * self.cols + vertex]
    }

    pub fn row(&self, edge: usize) -> &[i8] {
        &self.entries[edge * self.cols..(edge + 1) * self.cols]
    }

    /// `Σ_i |A_ij|` for every column j.
    pub fn column_abs_sums(&self) -> Vec<usize> {
        let mut sums = vec![0; self.cols];
        for r in 0..self.rows {
            for (s, &a) in sums.iter_mut().zip(self.row(r)) {
                *s += a.unsigned_abs() as usize;
            }
        }
        sums
    }

    /// `AᵀA` in exact integer arithmetic.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        let mut b = vec![vec![0i64; self.cols]; self.cols];
        for r in 0..self.rows {
            let nz: Vec<(usize, i64)> =
                self.row(r).iter().enumerate().filter(|(_, &a)| a != 0).map(|(j, &a)| (j, a as i64)).collect();
            for &(i, ai) in &nz {
                for &(j, aj) in &nz {
                    b[i][j] += ai * aj;
                }
            }
        }
        b
    }

    /// `‖Af‖²` for a scalar function on the vertices.
    pub fn coboundary_norm_sqr(&self, f: &[f64]) -> f64 {
        (0..self.rows)
            .map(|r| {
                let d: f64 = self.row(r).iter().zip(f).map(|(&a, &x)| a as f64 * x).sum();
                d * d
            })
            .sum()
    }
}

/// `B = AᵀA`, checked entrywise against `(q+1)I - Adj`.
pub fn gram_matrix(g: &LinkGraph, a: &OrientedIncidence) -> Result<Mat<f64>, SpectralError> {
    let exact = a.gram();
    let n = g.vertex_count();
    for (i, row) in exact.iter().enumerate() {
        for (j, &bij) in row.iter().enumerate() {
            let want = if i == j {
                g.degree(i) as i64
            } else if g.are_adjacent(i, j) {
                -1
            } else {
                0
            };
            if bij != want || (i == j && want != g.q() as i64 + 1) {
                return Err(SpectralError::StructureMismatch { row: i, col: j });
            }
        }
    }
    Ok(Mat::from_fn(n, n, |i, j| exact[i][j] as f64))
}

/// Closed-form λ₁ for each link kind.
pub fn expected_gap(kind: LinkKind, q: u32) -> f64 {
    let q = q as f64;
    match kind {
        LinkKind::Sl3 => q + 1.0 - math::sqrt(q),
        LinkKind::Sp4Special => q + 1.0 - math::sqrt(2.0 * q),
        LinkKind::Sp4NonSpecial => q + 1.0,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    pub kind: LinkKind,
    pub q: u32,
    pub n_vertices: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub lambda1: f64,
    pub expected: f64,
    pub residual: f64,
    pub kernel_dim: usize,
}

impl SpectralReport {
    /// Eigenvalues merged into clusters of width `tol`, as (value, multiplicity).
    pub fn distinct_eigenvalues(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &x in &self.eigenvalues {
            match out.last_mut() {
                Some((v, m)) if (x - *v).abs() <= tol => *m += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }
}

/// Full spectral analysis of a link graph together with its eigenvectors.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub report: SpectralReport,
    pub eigen: SymEigen,
}

impl Spectrum {
    pub fn compute(g: &LinkGraph) -> Result<Self, SpectralError> {
        let a = OrientedIncidence::new(g);
        let b = gram_matrix(g, &a)?;
        let eigen = SymEigen::new(&b)?;
        let kernel_dim = eigen.values.iter().filter(|&&x| x <= KERNEL_TOL).count();
        if kernel_dim != 1 {
            return Err(SpectralError::Disconnected { components: kernel_dim });
        }
        let lambda1 = eigen.values[kernel_dim.min(eigen.values.len() - 1)];
        let expected = expected_gap(g.kind(), g.q());
        let report = SpectralReport {
            kind: g.kind(),
            q: g.q(),
            n_vertices: g.vertex_count(),
            eigenvalues: eigen.values.clone(),
            lambda1,
            expected,
            residual: (lambda1 - expected).abs(),
            kernel_dim,
        };
        Ok(Self { report, eigen })
    }

    /// Eigenvector for λ₁ (column `kernel_dim` of the eigenvector matrix).
    pub fn first_nonconstant_eigenvector(&self) -> Vec<f64> {
        self.eigen.vectors.column(self.report.kernel_dim)
    }
}

/// λ₁ of the graph Laplacian `B = AᵀA` with closed-form comparison.
pub fn spectral_gap(g: &LinkGraph) -> Result<SpectralReport, SpectralError> {
    Spectrum::compute(g).map(|s| s.report)
}

/// Outcome of a Poincaré inequality check `‖df‖² ≥ λ₁‖f‖²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoincareCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub passes: bool,
}

/// Slack below which a Poincaré check fails.
pub const POINCARE_SLACK: f64 = -1e-9;

/// Caches λ₁ so that many functions can be checked against one graph.
#[derive(Clone, Debug)]
pub struct PoincareVerifier<'g> {
    graph: &'g LinkGraph,
    lambda1: f64,
}

impl<'g> PoincareVerifier<'g> {
    pub fn new(graph: &'g LinkGraph) -> Result<Self, SpectralError> {
        let lambda1 = spectral_gap(graph)?.lambda1;
        Ok(Self { graph, lambda1 })
    }

    pub fn with_lambda(graph: &'g LinkGraph, lambda1: f64) -> Self {
        Self { graph, lambda1 }
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    /// `f` holds `dim` components per vertex, vertex-major.
    pub fn check(&self, f: &[f64], dim: usize) -> Result<PoincareCheck, SpectralError> {
        let n = self.graph.vertex_count();
        if dim == 0 || f.len() != n * dim {
            return Err(SpectralError::DimensionMismatch { expected: n * dim, found: f.len() });
        }
        let scale = f.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for c in 0..dim {
            let sum: f64 = (0..n).map(|v| f[v * dim + c]).sum();
            if sum.abs() > 1e-10 * scale {
                return Err(SpectralError::NotMeanZero { component: c, sum });
            }
        }
        let mut lhs = 0.0;
        for &(u, w) in self.graph.edges() {
            for c in 0..dim {
                let d = f[u * dim + c] - f[w * dim + c];
                lhs += d * d;
            }
        }
        let norm: f64 = f.iter().map(|x| x * x).sum();
        let rhs = self.lambda1 * norm;
        let slack = lhs - rhs;
        Ok(PoincareCheck { lhs, rhs, slack, passes: slack >= POINCARE_SLACK })
    }
}

/// `‖df‖² ≥ λ₁‖f‖²` for a mean-zero, R^dim-valued function on the vertices.
pub fn verify_poincare(g: &LinkGraph, f: &[f64], dim: usize) -> Result<PoincareCheck, SpectralError> {
    PoincareVerifier::new(g)?.check(f, dim)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarginReport {
    pub kind: LinkKind,
    pub q: u32,
    pub lambda: f64,
    /// `c·λ - (q+1)` with c = 2 for SL3 and c = 3 for Sp4.
    pub margin: f64,
    /// True when the margin is zero up to rounding.
    pub threshold: bool,
}

/// Margin of the rigidity inequality: `2λ - (q+1)` for SL3 links, and
/// `3λ_S - (q+1)` for Sp4 with λ_S the special-vertex gap. The non-special
/// kind reports the Sp4 margin as well.
pub fn rigidity_margin(kind: LinkKind, q: u32) -> MarginReport {
    let qf = q as f64;
    let (lambda, factor) = match kind {
        LinkKind::Sl3 => (expected_gap(LinkKind::Sl3, q), 2.0),
        LinkKind::Sp4Special | LinkKind::Sp4NonSpecial => (expected_gap(LinkKind::Sp4Special, q), 3.0),
    };
    let margin = factor * lambda - (qf + 1.0);
    MarginReport { kind, q, lambda, margin, threshold: margin.abs() <= 1e-12 * (qf + 1.0) }
}
