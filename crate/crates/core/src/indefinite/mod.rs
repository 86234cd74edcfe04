//! Parabolic subgroups of the isometry group of an indefinite sesquilinear
//! form over R, C or H, truncated to finite size.
//!
//! In the basis `V₁ ⊕ V₂ ⊕ V₃` with `V₁ = span{e₁,…,e_q}` maximal isotropic
//! and `V₂` its dual copy, the form is
//!
//! ```text
//!     Q = [ 0  I  0 ]
//!         [ I  0  0 ]      J = diag(-I_{p-q}, I_{n₃-(p-q)})
//!         [ 0  0  J ]
//! ```
//!
//! and the stabilizer of `V₁` consists of the matrices
//!
//! ```text
//!     g = [ M  Y      -M B* J R ]
//!         [ 0  (M*)⁻¹  0        ]
//!         [ 0  B       R        ]
//! ```
//!
//! with `R* J R = J` and `M⁻¹Y + (M⁻¹Y)* = -B* J B`. Here `*` is the
//! conjugate transpose, which is what makes `g* Q g = Q` hold over C and H.

mod suite;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::linalg::{inner, Mat, Scalar};
use crate::math;

pub use suite::{run_trial, ParabolicConfig, TrialResiduals, PARABOLIC_CONFIGS, TRIAL_BOUNDS};

/// Tolerance of the defining constraints.
pub const CONSTRAINT_TOL: f64 = 1e-10;
/// Tolerance of the isotropy test.
pub const ISOTROPY_TOL: f64 = 1e-12;
/// Largest supported truncation of the positive block.
pub const MAX_N3: usize = 64;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum IndefiniteError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("constraint `{constraint}` violated (residual {residual:e})")]
    ConstraintViolated { constraint: &'static str, residual: f64 },
    #[error("basis is rank deficient")]
    RankDeficient,
}

fn dim_err<T>(msg: String) -> Result<T, IndefiniteError> {
    Err(IndefiniteError::Dimension(msg))
}

/// The form `Q` for an isotropic block of size `q`, index `p` and
/// truncation `n₃` of the third block.
#[derive(Clone, Debug, PartialEq)]
pub struct FormMatrix<T> {
    q_iso: usize,
    p: usize,
    n3: usize,
    matrix: Mat<T>,
    real: Mat<f64>,
}

impl<T: Scalar> FormMatrix<T> {
    /// Requires `1 ≤ q ≤ p ≤ q + n₃` and `n₃ ≤ MAX_N3`.
    pub fn standard(q_iso: usize, p: usize, n3: usize) -> Result<Self, IndefiniteError> {
        if q_iso < 1 || p < q_iso || p > q_iso + n3 {
            return dim_err(format!("need 1 <= q <= p <= q + n3, got q={q_iso}, p={p}, n3={n3}"));
        }
        if n3 > MAX_N3 {
            return dim_err(format!("n3 = {n3} exceeds the limit {MAX_N3}"));
        }
        let n = 2 * q_iso + n3;
        let neg = p - q_iso;
        let real = Mat::from_fn(n, n, |i, j| {
            if i < q_iso && j == i + q_iso || j < q_iso && i == j + q_iso {
                1.0
            } else if i >= 2 * q_iso && i == j {
                if i - 2 * q_iso < neg { -1.0 } else { 1.0 }
            } else {
                0.0
            }
        });
        let matrix = Mat::from_fn(n, n, |i, j| T::from_real(real[(i, j)]));
        Ok(FormMatrix { q_iso, p, n3, matrix, real })
    }

    pub fn q_iso(&self) -> usize {
        self.q_iso
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n3(&self) -> usize {
        self.n3
    }

    /// Size of the full matrix, `2q + n₃`.
    pub fn dim(&self) -> usize {
        2 * self.q_iso + self.n3
    }

    pub fn matrix(&self) -> &Mat<T> {
        &self.matrix
    }

    /// The real matrix underlying `Q`; all its entries are 0 or ±1.
    pub fn real_matrix(&self) -> &Mat<f64> {
        &self.real
    }

    /// `J = diag(-I_{p-q}, I_{n₃-(p-q)})`.
    pub fn j(&self) -> Mat<T> {
        self.matrix.block(2 * self.q_iso, 2 * self.q_iso, self.n3, self.n3)
    }

    /// `(positive, negative)` counts, `(n₃ - (p-q) + q, p)`.
    pub fn expected_signature(&self) -> (usize, usize) {
        (self.n3 - (self.p - self.q_iso) + self.q_iso, self.p)
    }

    /// `(positive, negative)` eigenvalue counts of `Q` as a Hermitian
    /// matrix. Since `Q` is real, these are those of the real symmetric
    /// matrix.
    pub fn signature(&self) -> (usize, usize) {
        let values = crate::linalg::eigenvalues_symmetric(&self.real).expect("Q is symmetric");
        let pos = values.iter().filter(|&&l| l > 0.5).count();
        let neg = values.iter().filter(|&&l| l < -0.5).count();
        (pos, neg)
    }

    /// `‖g* Q g - Q‖_max`.
    pub fn preserves_form(&self, g: &Mat<T>) -> Result<f64, IndefiniteError> {
        let n = self.dim();
        if g.shape() != (n, n) {
            return dim_err(format!("expected a {n}x{n} matrix, got {:?}", g.shape()));
        }
        Ok((&(&g.adjoint() * &self.matrix) * g).max_abs_diff(&self.matrix))
    }

    /// `‖R* J R - J‖_max`.
    pub fn r_residual(&self, r: &Mat<T>) -> Result<f64, IndefiniteError> {
        if r.shape() != (self.n3, self.n3) {
            return dim_err(format!("R must be {0}x{0}", self.n3));
        }
        let j = self.j();
        Ok((&(&r.adjoint() * &j) * r).max_abs_diff(&j))
    }

    /// Whether `v* Q w = 0` for all pairs of basis vectors (including
    /// `v = w`).
    pub fn is_isotropic(&self, basis: &[Vec<T>]) -> Result<bool, IndefiniteError> {
        let n = self.dim();
        if let Some(v) = basis.iter().find(|v| v.len() != n) {
            return dim_err(format!("basis vector has length {}, expected {n}", v.len()));
        }
        let cols = Mat::from_fn(n, basis.len(), |i, j| basis[j][i]);
        if cols.rank(1e-10) < basis.len() {
            return Err(IndefiniteError::RankDeficient);
        }
        for v in basis {
            let qv = self.matrix.mat_vec(v);
            for w in basis {
                if inner(w, &qv).abs() > ISOTROPY_TOL {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn check_shapes(&self, m: &Mat<T>, y: &Mat<T>, b: &Mat<T>, r: &Mat<T>) -> Result<(), IndefiniteError> {
        let (q, n3) = (self.q_iso, self.n3);
        if m.shape() != (q, q) || y.shape() != (q, q) || b.shape() != (n3, q) || r.shape() != (n3, n3) {
            return dim_err(format!("blocks must be M, Y: {q}x{q}, B: {n3}x{q}, R: {n3}x{n3}"));
        }
        Ok(())
    }

    /// Assembles and validates a parabolic element from its free blocks.
    pub fn make_parabolic(&self, m: Mat<T>, y: Mat<T>, b: Mat<T>, r: Mat<T>) -> Result<ParabolicElement<T>, IndefiniteError> {
        self.check_shapes(&m, &y, &b, &r)?;
        let m_inv = m.inverse().ok_or(IndefiniteError::ConstraintViolated { constraint: "M invertible", residual: f64::INFINITY })?;
        let residual = self.r_residual(&r)?;
        if !(residual <= CONSTRAINT_TOL) {
            return Err(IndefiniteError::ConstraintViolated { constraint: "R*JR = J", residual });
        }
        let residual = y_residual(&m_inv, &y, &b, &self.j());
        if !(residual <= CONSTRAINT_TOL) {
            return Err(IndefiniteError::ConstraintViolated { constraint: "M⁻¹Y + (M⁻¹Y)* = -B*JB", residual });
        }
        let matrix = self.assemble(&m, &m_inv.adjoint(), &y, &b, &r);
        let residual = self.preserves_form(&matrix)?;
        if !(residual <= CONSTRAINT_TOL) {
            return Err(IndefiniteError::ConstraintViolated { constraint: "g*Qg = Q", residual });
        }
        Ok(ParabolicElement { m, y, b, r, matrix })
    }

    fn assemble(&self, m: &Mat<T>, l: &Mat<T>, y: &Mat<T>, b: &Mat<T>, r: &Mat<T>) -> Mat<T> {
        let q = self.q_iso;
        let z = -&(&(&(m * &b.adjoint()) * &self.j()) * r);
        let mut g = Mat::zeros(self.dim(), self.dim());
        g.set_block(0, 0, m);
        g.set_block(0, q, y);
        g.set_block(0, 2 * q, &z);
        g.set_block(q, q, l);
        g.set_block(2 * q, q, b);
        g.set_block(2 * q, 2 * q, r);
        g
    }

    /// Reads a matrix as a parabolic element, checking the zero blocks and
    /// the forced blocks `L = (M*)⁻¹` and `Z = -M B* J R` up to `tol`
    /// (entrywise, relative to the largest entry).
    pub fn parse(&self, g: &Mat<T>, tol: f64) -> Result<ParabolicElement<T>, IndefiniteError> {
        let n = self.dim();
        if g.shape() != (n, n) {
            return dim_err(format!("expected a {n}x{n} matrix"));
        }
        let (q, n3) = (self.q_iso, self.n3);
        let m = g.block(0, 0, q, q);
        let y = g.block(0, q, q, q);
        let b = g.block(2 * q, q, n3, q);
        let r = g.block(2 * q, 2 * q, n3, n3);
        let scale = g.max_abs().max(1.0);
        let zero = g
            .block(q, 0, q, q)
            .max_abs()
            .max(g.block(q, 2 * q, q, n3).max_abs())
            .max(g.block(2 * q, 0, n3, q).max_abs());
        if zero > tol * scale {
            return Err(IndefiniteError::ConstraintViolated { constraint: "stabilizes span{e₁,…,e_q}", residual: zero });
        }
        let m_inv = m.inverse().ok_or(IndefiniteError::ConstraintViolated { constraint: "M invertible", residual: f64::INFINITY })?;
        let rebuilt = self.assemble(&m, &m_inv.adjoint(), &y, &b, &r);
        let residual = rebuilt.max_abs_diff(g);
        if residual > tol * scale {
            return Err(IndefiniteError::ConstraintViolated { constraint: "block structure", residual });
        }
        Ok(ParabolicElement { m, y, b, r, matrix: g.clone() })
    }

    /// `diag(M, (M*)⁻¹, R)`.
    pub fn levi_matrix(&self, m: &Mat<T>, r: &Mat<T>) -> Result<Mat<T>, IndefiniteError> {
        let m_inv = m.inverse().ok_or(IndefiniteError::ConstraintViolated { constraint: "M invertible", residual: f64::INFINITY })?;
        let q = self.q_iso;
        let mut g = Mat::zeros(self.dim(), self.dim());
        g.set_block(0, 0, m);
        g.set_block(q, q, &m_inv.adjoint());
        g.set_block(2 * q, 2 * q, r);
        Ok(g)
    }

    /// The block-diagonal part of a matrix: the projection of the
    /// parabolic group onto its Levi factor.
    pub fn project(&self, g: &Mat<T>) -> Mat<T> {
        let (q, n3) = (self.q_iso, self.n3);
        let mut out = Mat::zeros(self.dim(), self.dim());
        out.set_block(0, 0, &g.block(0, 0, q, q));
        out.set_block(q, q, &g.block(q, q, q, q));
        out.set_block(2 * q, 2 * q, &g.block(2 * q, 2 * q, n3, n3));
        out
    }

    /// A unipotent element `(Y, B)`, checking `Y + Y* = -B* J B`.
    pub fn nil(&self, y: Mat<T>, b: Mat<T>) -> Result<NilElement<T>, IndefiniteError> {
        let (q, n3) = (self.q_iso, self.n3);
        if y.shape() != (q, q) || b.shape() != (n3, q) {
            return dim_err(format!("blocks must be Y: {q}x{q}, B: {n3}x{q}"));
        }
        let residual = y_residual(&Mat::identity(q), &y, &b, &self.j());
        if !(residual <= CONSTRAINT_TOL) {
            return Err(IndefiniteError::ConstraintViolated { constraint: "Y + Y* = -B*JB", residual });
        }
        Ok(NilElement { y, b })
    }

    pub fn nil_matrix(&self, n: &NilElement<T>) -> Mat<T> {
        let id_q = Mat::identity(self.q_iso);
        self.assemble(&id_q, &id_q, &n.y, &n.b, &Mat::identity(self.n3))
    }

    /// Reads `(Y, B)` off a matrix of the unipotent kernel.
    pub fn nil_from_matrix(&self, g: &Mat<T>) -> NilElement<T> {
        let (q, n3) = (self.q_iso, self.n3);
        NilElement { y: g.block(0, q, q, q), b: g.block(2 * q, q, n3, q) }
    }

    /// `(Y₁, B₁)(Y₂, B₂) = (Y₁ + Y₂ - B₁* J B₂, B₁ + B₂)`.
    pub fn nil_compose(&self, a: &NilElement<T>, b: &NilElement<T>) -> NilElement<T> {
        let cross = &(&a.b.adjoint() * &self.j()) * &b.b;
        NilElement { y: &(&a.y + &b.y) - &cross, b: &a.b + &b.b }
    }

    /// `(Y, B)⁻¹ = (-Y - B* J B, -B)`.
    pub fn nil_inverse(&self, a: &NilElement<T>) -> NilElement<T> {
        let bjb = &(&a.b.adjoint() * &self.j()) * &a.b;
        NilElement { y: &(-&a.y) - &bjb, b: -&a.b }
    }

    /// `a b a⁻¹ b⁻¹`, computed by matrix multiplication.
    pub fn nil_commutator(&self, a: &NilElement<T>, b: &NilElement<T>) -> NilElement<T> {
        let (ma, mb) = (self.nil_matrix(a), self.nil_matrix(b));
        let (ia, ib) = (self.nil_matrix(&self.nil_inverse(a)), self.nil_matrix(&self.nil_inverse(b)));
        self.nil_from_matrix(&(&(&(&ma * &mb) * &ia) * &ib))
    }

    /// Splits `g = n · diag(M, (M*)⁻¹, R)` with `n = (Y M*, B M*)`.
    pub fn decompose(&self, g: &ParabolicElement<T>) -> (NilElement<T>, LeviElement<T>) {
        let ms = g.m.adjoint();
        (NilElement { y: &g.y * &ms, b: &g.b * &ms }, LeviElement { m: g.m.clone(), r: g.r.clone() })
    }

    /// `ℓ n ℓ⁻¹` for `ℓ = diag(M, (M*)⁻¹, R)`, computed by matrix
    /// multiplication. Requires `R* J R = J`.
    pub fn conjugate_by_levi(&self, n: &NilElement<T>, m: &Mat<T>, r: &Mat<T>) -> Result<NilElement<T>, IndefiniteError> {
        let residual = self.r_residual(r)?;
        if !(residual <= CONSTRAINT_TOL) {
            return Err(IndefiniteError::ConstraintViolated { constraint: "R*JR = J", residual });
        }
        if m.shape() != (self.q_iso, self.q_iso) {
            return dim_err(format!("M must be {0}x{0}", self.q_iso));
        }
        let l = self.levi_matrix(m, r)?;
        let l_inv = l.inverse().expect("Levi factors are invertible");
        Ok(self.nil_from_matrix(&(&(&l * &self.nil_matrix(n)) * &l_inv)))
    }

    /// A random element of `U_K(q)`: Gram–Schmidt applied to a Gaussian
    /// matrix.
    pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat<T> {
        if n == 0 {
            return Mat::zeros(0, 0);
        }
        loop {
            if let Some(u) = Mat::<T>::gaussian(n, n, rng).orthonormalize_columns() {
                return u;
            }
        }
    }

    /// `U D V` with `U, V` unitary and `D` diagonal with entries in
    /// `[1/2, 2]`.
    pub fn random_levi_m<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat<T> {
        let q = self.q_iso;
        let d: Vec<T> = (0..q).map(|_| T::from_real(math::exp(rng.random_range(-core::f64::consts::LN_2..core::f64::consts::LN_2)))).collect();
        &(&Self::random_unitary(q, rng) * &Mat::from_diagonal(&d)) * &Self::random_unitary(q, rng)
    }

    /// `diag(U₋, U₊)`, unitary on each sign block of `J`.
    pub fn random_compact_r<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat<T> {
        let neg = self.p - self.q_iso;
        let pos = self.n3 - neg;
        let mut r = Mat::zeros(self.n3, self.n3);
        r.set_block(0, 0, &Self::random_unitary(neg, rng));
        r.set_block(neg, neg, &Self::random_unitary(pos, rng));
        r
    }

    /// A random element of `O_K(p-q, n₃-(p-q))`: a boost of rapidity in
    /// `[-1, 1]` mixing the first negative and first positive directions,
    /// between two random block unitaries.
    pub fn random_r<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat<T> {
        let neg = self.p - self.q_iso;
        let mut boost = Mat::identity(self.n3);
        if neg > 0 && neg < self.n3 {
            let t: f64 = rng.random_range(-1.0..=1.0);
            let (c, s) = (T::from_real(math::cosh(t)), T::from_real(math::sinh(t)));
            boost[(0, 0)] = c;
            boost[(neg, neg)] = c;
            boost[(0, neg)] = s;
            boost[(neg, 0)] = s;
        }
        &(&self.random_compact_r(rng) * &boost) * &self.random_compact_r(rng)
    }

    /// `(Y, B)` with `B` Gaussian and `Y = S - ½ B* J B`, `S` skew-Hermitian
    /// Gaussian.
    pub fn random_nil<R: Rng + ?Sized>(&self, rng: &mut R) -> NilElement<T> {
        let b = Mat::gaussian(self.n3, self.q_iso, rng);
        let y = self.y_for(&Mat::identity(self.q_iso), &b, rng);
        NilElement { y, b }
    }

    fn y_for<R: Rng + ?Sized>(&self, m: &Mat<T>, b: &Mat<T>, rng: &mut R) -> Mat<T> {
        let g = Mat::<T>::gaussian(self.q_iso, self.q_iso, rng);
        let skew = (&g - &g.adjoint()).scale_real(0.5);
        let bjb = &(&b.adjoint() * &self.j()) * b;
        m * &(&skew - &bjb.scale_real(0.5))
    }

    /// A random valid parabolic element.
    pub fn random_parabolic<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ParabolicElement<T>, IndefiniteError> {
        let m = self.random_levi_m(rng);
        let r = self.random_r(rng);
        let b = Mat::gaussian(self.n3, self.q_iso, rng);
        let y = self.y_for(&m, &b, rng);
        self.make_parabolic(m, y, b, r)
    }
}

/// `‖A⁻¹Y + (A⁻¹Y)* + B* J B‖_max` with `A⁻¹` given.
fn y_residual<T: Scalar>(m_inv: &Mat<T>, y: &Mat<T>, b: &Mat<T>, j: &Mat<T>) -> f64 {
    let x = m_inv * y;
    let bjb = &(&b.adjoint() * j) * b;
    (&(&x + &x.adjoint()) + &bjb).max_abs()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParabolicElement<T> {
    pub m: Mat<T>,
    pub y: Mat<T>,
    pub b: Mat<T>,
    pub r: Mat<T>,
    matrix: Mat<T>,
}

impl<T: Scalar> ParabolicElement<T> {
    pub fn matrix(&self) -> &Mat<T> {
        &self.matrix
    }
}

/// An element of the unipotent kernel, `M = I` and `R = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct NilElement<T> {
    pub y: Mat<T>,
    pub b: Mat<T>,
}

/// `diag(M, (M*)⁻¹, R)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeviElement<T> {
    pub m: Mat<T>,
    pub r: Mat<T>,
}

#[cfg(test)]
mod tests;
