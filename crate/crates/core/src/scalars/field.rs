use alloc::vec;
use alloc::vec::Vec;

use super::ScalarError;

/// Largest field order accepted by [`FiniteField::new`].
pub const DEFAULT_ORDER_CAP: u32 = 1024;

/// The finite field `F_q`, `q = p^k`, in a polynomial basis over `F_p`.
///
/// Elements are the integers `0..q`; the element with index
/// `c_0 + c_1 p + ... + c_{k-1} p^{k-1}` is the residue class of
/// `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` modulo [`FiniteField::modulus`].
/// Index 0 is zero and index 1 is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    /// Monic, low degree first, length `k + 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// An element tagged with the order of the field it belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    pub order: u32,
    pub index: u32,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Decomposes `q = p^k`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

impl FiniteField {
    pub fn new(p: u32, k: u32) -> Result<Self, ScalarError> {
        Self::with_cap(p, k, DEFAULT_ORDER_CAP)
    }

    /// The field of order `q`, which must be a prime power.
    pub fn of_order(q: u32) -> Result<Self, ScalarError> {
        let (p, k) = prime_power(q).ok_or(ScalarError::NotPrimePower(q))?;
        Self::new(p, k)
    }

    pub fn with_cap(p: u32, k: u32, cap: u32) -> Result<Self, ScalarError> {
        if !is_prime(p) {
            return Err(ScalarError::NotPrime(p));
        }
        if k == 0 {
            return Err(ScalarError::ZeroDegree);
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= cap)
            .ok_or(ScalarError::OrderTooLarge { p, k, cap })?;

        let modulus = first_irreducible(p, k).ok_or(ScalarError::NoIrreducibleFound { p, k })?;
        let mut field = Self { p, k, q, modulus, exp: Vec::new(), log: Vec::new() };
        field.build_log_tables()?;
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> core::ops::Range<u32> {
        0..self.q
    }

    /// Base-`p` digits of an element, constant term first.
    pub fn coefficients(&self, a: u32) -> Vec<u32> {
        let mut out = vec![0; self.k as usize];
        let mut rest = a;
        for c in out.iter_mut() {
            *c = rest % self.p;
            rest /= self.p;
        }
        out
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> u32 {
        coeffs
            .iter()
            .take(self.k as usize)
            .rev()
            .fold(0, |acc, &c| acc * self.p + c % self.p)
    }

    pub fn element(&self, index: u32) -> Result<FieldElement, ScalarError> {
        if index >= self.q {
            return Err(ScalarError::FieldMismatch { expected: self.q, found: index });
        }
        Ok(FieldElement { order: self.q, index })
    }

    #[inline]
    pub fn add_idx(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg_idx(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub_idx(&self, a: u32, b: u32) -> u32 {
        self.add_idx(a, self.neg_idx(b))
    }

    #[inline]
    pub fn mul_idx(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let e = (self.log[a as usize] + self.log[b as usize]) % n;
        self.exp[e as usize]
    }

    pub fn inv_idx(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow_idx(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = u64::from(self.q - 1);
        self.exp[((u64::from(self.log[a as usize]) * (e % n)) % n) as usize]
    }

    fn check(&self, a: FieldElement) -> Result<u32, ScalarError> {
        if a.order != self.q || a.index >= self.q {
            return Err(ScalarError::FieldMismatch { expected: self.q, found: a.order });
        }
        Ok(a.index)
    }

    fn wrap(&self, index: u32) -> FieldElement {
        FieldElement { order: self.q, index }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, ScalarError> {
        Ok(self.wrap(self.add_idx(self.check(a)?, self.check(b)?)))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, ScalarError> {
        Ok(self.wrap(self.mul_idx(self.check(a)?, self.check(b)?)))
    }

    pub fn neg(&self, a: FieldElement) -> Result<FieldElement, ScalarError> {
        Ok(self.wrap(self.neg_idx(self.check(a)?)))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, ScalarError> {
        let i = self.check(a)?;
        self.inv_idx(i).map(|x| self.wrap(x)).ok_or(ScalarError::DivisionByZero)
    }

    /// Multiplies two elements as polynomials and reduces by the modulus.
    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        let k = self.k as usize;
        let ca = self.coefficients(a);
        let cb = self.coefficients(b);
        let mut prod = vec![0u32; 2 * k];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for deg in (k..2 * k).rev() {
            let c = prod[deg];
            if c != 0 {
                // x^k = -(m_0 + ... + m_{k-1} x^{k-1})
                for (i, &m) in self.modulus[..k].iter().enumerate() {
                    let t = deg - k + i;
                    prod[t] = (prod[t] + (p - m) * c) % p;
                }
                prod[deg] = 0;
            }
        }
        self.from_coefficients(&prod[..k])
    }

    fn build_log_tables(&mut self) -> Result<(), ScalarError> {
        let n = (self.q - 1) as usize;
        let mut exp = vec![0u32; n];
        for g in 1..self.q {
            exp[0] = 1;
            let mut order = 0;
            for i in 1..=n {
                let next = self.poly_mul(exp[i - 1], g);
                if next == 1 {
                    order = i;
                    break;
                }
                if i < n {
                    exp[i] = next;
                }
            }
            if order == n {
                let mut log = vec![0u32; self.q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return Ok(());
            }
        }
        Err(ScalarError::NoIrreducibleFound { p: self.p, k: self.k })
    }
}

/// Remainder of `num` modulo the monic polynomial `den` over `F_p`
/// (coefficients low degree first). Returns `true` when it is zero.
fn divides(den: &[u32], num: &[u32], p: u32) -> bool {
    let mut r: Vec<u32> = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap_or(&0);
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &d) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - d) * lead % p) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

/// Monic polynomial of degree `deg` whose non-leading coefficients are the
/// base-`p` digits of `code`.
fn monic_from_code(code: u32, deg: usize, p: u32) -> Vec<u32> {
    let mut coeffs = vec![0u32; deg + 1];
    let mut rest = code;
    for c in coeffs.iter_mut().take(deg) {
        *c = rest % p;
        rest /= p;
    }
    coeffs[deg] = 1;
    coeffs
}

/// Irreducibility by trial division against every monic polynomial of
/// degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            if divides(&monic_from_code(code, d, p), poly, p) {
                return false;
            }
        }
    }
    true
}

/// Enumerates monic degree-`k` polynomials ordered lexicographically on
/// `(c_{k-1}, ..., c_0)` and returns the first irreducible one.
fn first_irreducible(p: u32, k: u32) -> Option<Vec<u32>> {
    let deg = k as usize;
    (0..p.pow(k))
        .map(|code| monic_from_code(code, deg, p))
        .find(|poly| is_irreducible(poly, p))
}
