//! Small dense matrices over `R`, `C` and `H`, and a cyclic Jacobi
//! eigensolver for real symmetric matrices.
//!
//! Scalars act on column vectors from the right, so a product `AB` is always
//! evaluated as `(AB)_ij = Σ_k A_ik B_kj` with the factors in that order;
//! this is what keeps the quaternionic case consistent.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::math;
use crate::scalars::Quaternion;

/// The three division algebras of the parabolic checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldKind {
    Real,
    Complex,
    Quaternion,
}

impl FieldKind {
    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Real => "R",
            FieldKind::Complex => "C",
            FieldKind::Quaternion => "H",
        }
    }
}

/// Scalar operations needed by [`Mat`]. Multiplication need not commute.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const FIELD: FieldKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn conj(self) -> Self;
    fn norm_sqr(self) -> f64;
    /// Two-sided inverse; `None` for zero.
    fn inverse(self) -> Option<Self>;
    /// Every real component drawn from a standard normal.
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn abs(self) -> f64 {
        math::sqrt(self.norm_sqr())
    }
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

impl Scalar for f64 {
    const FIELD: FieldKind = FieldKind::Real;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
    fn norm_sqr(self) -> f64 {
        self * self
    }
    fn inverse(self) -> Option<Self> {
        (self != 0.0).then(|| 1.0 / self)
    }
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        normal(rng)
    }
}

impl Scalar for Complex64 {
    const FIELD: FieldKind = FieldKind::Complex;
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
    fn inverse(self) -> Option<Self> {
        let n = Complex64::norm_sqr(&self);
        (n != 0.0).then(|| Complex64::new(self.re / n, -self.im / n))
    }
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64::new(normal(rng), normal(rng))
    }
}

impl Scalar for Quaternion {
    const FIELD: FieldKind = FieldKind::Quaternion;
    fn zero() -> Self {
        Quaternion::ZERO
    }
    fn one() -> Self {
        Quaternion::ONE
    }
    fn from_real(x: f64) -> Self {
        Quaternion::real(x)
    }
    fn conj(self) -> Self {
        Quaternion::conj(self)
    }
    fn norm_sqr(self) -> f64 {
        Quaternion::norm_sqr(self)
    }
    fn inverse(self) -> Option<Self> {
        Quaternion::inverse(self)
    }
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Quaternion::new(normal(rng), normal(rng), normal(rng), normal(rng))
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T = f64> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// `None` when the rows are ragged.
    pub fn from_rows(rows: &[Vec<T>]) -> Option<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Self { rows: rows.len(), cols, data: rows.iter().flatten().copied().collect() })
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(rows, cols, |_, _| T::gaussian(rng))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        let s = T::from_real(s);
        self.map(|x| x * s)
    }

    /// Right multiplication of every entry by `s`.
    pub fn scale_right(&self, s: T) -> Self {
        self.map(|x| x * s)
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        math::sqrt(self.data.iter().map(|x| x.norm_sqr()).sum())
    }

    /// `max |a_ij - b_ij|`; infinite on a shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "mat_vec shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (&a, &x)| acc + a * x))
            .collect()
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting, using left
    /// row operations only. `None` when a pivot falls below
    /// `1e-14 · max|a_ij|`.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let scale = self.max_abs();
        if scale == 0.0 {
            return None;
        }
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&i, &j| a[(i, col)].abs().total_cmp(&a[(j, col)].abs()))?;
            if a[(pivot_row, col)].abs() <= 1e-14 * scale {
                return None;
            }
            a.swap_rows(col, pivot_row);
            inv.swap_rows(col, pivot_row);
            let pinv = a[(col, col)].inverse()?;
            for j in 0..n {
                a[(col, j)] = pinv * a[(col, j)];
                inv[(col, j)] = pinv * inv[(col, j)];
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let factor = a[(i, col)];
                if factor == T::zero() {
                    continue;
                }
                for j in 0..n {
                    a[(i, j)] = a[(i, j)] - factor * a[(col, j)];
                    inv[(i, j)] = inv[(i, j)] - factor * inv[(col, j)];
                }
            }
        }
        Some(inv)
    }

    /// Rank by row reduction; entries below `tol · max|a_ij|` count as zero.
    pub fn rank(&self, tol: f64) -> usize {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0;
        }
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot_row) = (rank..self.rows)
                .max_by(|&i, &j| a[(i, col)].abs().total_cmp(&a[(j, col)].abs()))
            else {
                break;
            };
            if a[(pivot_row, col)].abs() <= tol * scale {
                continue;
            }
            a.swap_rows(rank, pivot_row);
            let pinv = match a[(rank, col)].inverse() {
                Some(p) => p,
                None => continue,
            };
            for i in rank + 1..self.rows {
                let factor = a[(i, col)] * pinv;
                for j in col..self.cols {
                    a[(i, j)] = a[(i, j)] - factor * a[(rank, j)];
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    /// Gram–Schmidt on the columns with right scalars: `v_j -= v_i (v_i* v_j)`.
    /// `None` if the columns are numerically dependent.
    pub fn orthonormalize_columns(&self) -> Option<Self> {
        let mut cols: Vec<Vec<T>> = (0..self.cols).map(|j| self.column(j)).collect();
        for j in 0..cols.len() {
            // two passes for stability
            for _ in 0..2 {
                for i in 0..j {
                    let coeff = inner(&cols[i], &cols[j]);
                    let (head, tail) = cols.split_at_mut(j);
                    for (vj, &vi) in tail[0].iter_mut().zip(&head[i]) {
                        *vj = *vj - vi * coeff;
                    }
                }
            }
            let norm = math::sqrt(cols[j].iter().map(|x| x.norm_sqr()).sum());
            if norm < 1e-12 {
                return None;
            }
            let inv = T::from_real(1.0 / norm);
            for x in cols[j].iter_mut() {
                *x = *x * inv;
            }
        }
        Some(Self::from_fn(self.rows, self.cols, |i, j| cols[j][i]))
    }
}

/// `u* v` for column vectors.
pub fn inner<T: Scalar>(u: &[T], v: &[T]) -> T {
    u.iter().zip(v).fold(T::zero(), |acc, (&a, &b)| acc + a.conj() * b)
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: &Mat<T>) -> Mat<T> {
        self.matmul(rhs)
    }
}

impl<T: Scalar> Add for &Mat<T> {
    type Output = Mat<T>;
    fn add(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Scalar> Sub for &Mat<T> {
    type Output = Mat<T>;
    fn sub(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: Scalar> Neg for &Mat<T> {
    type Output = Mat<T>;
    fn neg(self) -> Mat<T> {
        self.map(|x| -x)
    }
}

impl Mat<f64> {
    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `(A + Aᵀ) / 2`.
    pub fn symmetrize(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    /// `max |a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }
}

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors as the
/// columns of `vectors`.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Mat<f64>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EigenError {
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("matrix is not square")]
    NotSquare,
    #[error("Jacobi iteration did not converge within {sweeps} sweeps (off-diagonal {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
}

/// Relative off-diagonal Frobenius threshold at which Jacobi stops.
pub const JACOBI_REL_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;

impl SymEigen {
    /// Cyclic Jacobi rotations. Stops once the off-diagonal Frobenius norm is
    /// at most `1e-13 · ‖M‖_F`.
    pub fn new(m: &Mat<f64>) -> Result<Self, EigenError> {
        if !m.is_square() {
            return Err(EigenError::NotSquare);
        }
        let scale = m.max_abs().max(1.0);
        let asym = m.asymmetry();
        if asym > 1e-12 * scale {
            return Err(EigenError::NotSymmetric(asym));
        }
        let n = m.rows();
        let mut a = m.symmetrize();
        // rows of `v` are eigenvectors; contiguous rows keep the updates cheap
        let mut v = Mat::<f64>::identity(n);
        let total = a.frobenius_norm();
        let target = JACOBI_REL_TOL * total;

        let off_norm = |a: &Mat<f64>| {
            let mut s = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    s += 2.0 * a[(i, j)] * a[(i, j)];
                }
            }
            math::sqrt(s)
        };

        let mut sweeps = 0;
        loop {
            let off = off_norm(&a);
            if off <= target || total == 0.0 {
                break;
            }
            if sweeps == JACOBI_MAX_SWEEPS {
                return Err(EigenError::NoConvergence { sweeps, off });
            }
            sweeps += 1;
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq == 0.0 {
                        continue;
                    }
                    let app = a[(p, p)];
                    let aqq = a[(q, q)];
                    // skip rotations that cannot change the diagonal in floating point
                    if sweeps > 3
                        && (apq.abs() * 1e17 <= app.abs().max(aqq.abs()))
                    {
                        a[(p, q)] = 0.0;
                        a[(q, p)] = 0.0;
                        continue;
                    }
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = if theta.abs() > 1e150 {
                        0.5 / theta
                    } else {
                        let s = if theta >= 0.0 { 1.0 } else { -1.0 };
                        s / (theta.abs() + math::sqrt(theta * theta + 1.0))
                    };
                    let c = 1.0 / math::sqrt(t * t + 1.0);
                    let s = t * c;
                    let tau = s / (1.0 + c);
                    a[(p, p)] = app - t * apq;
                    a[(q, q)] = aqq + t * apq;
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    for r in 0..n {
                        if r == p || r == q {
                            continue;
                        }
                        let g = a[(r, p)];
                        let h = a[(r, q)];
                        let new_rp = g - s * (h + g * tau);
                        let new_rq = h + s * (g - h * tau);
                        a[(r, p)] = new_rp;
                        a[(p, r)] = new_rp;
                        a[(r, q)] = new_rq;
                        a[(q, r)] = new_rq;
                    }
                    let (vp, vq) = two_rows(&mut v, p, q);
                    for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
                        let g = *x;
                        let h = *y;
                        *x = g - s * (h + g * tau);
                        *y = h + s * (g - h * tau);
                    }
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
        let values = order.iter().map(|&i| a[(i, i)]).collect();
        let vectors = Mat::from_fn(n, n, |r, c| v[(order[c], r)]);
        Ok(Self { values, vectors })
    }

    /// `V diag(f(λ)) Vᵀ`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Mat<f64> {
        let n = self.values.len();
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for (k, &w) in fl.iter().enumerate() {
                    s += self.vectors[(i, k)] * w * self.vectors[(j, k)];
                }
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        out
    }
}

fn two_rows(m: &mut Mat<f64>, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
    debug_assert!(p < q);
    let cols = m.cols;
    let (head, tail) = m.data.split_at_mut(q * cols);
    (&mut head[p * cols..(p + 1) * cols], &mut tail[..cols])
}

/// Sorted eigenvalues of a real symmetric matrix.
pub fn eigenvalues_symmetric(m: &Mat<f64>) -> Result<Vec<f64>, EigenError> {
    SymEigen::new(m).map(|e| e.values)
}
