//! Dense vectors and matrices over F_q with exact Gaussian elimination,
//! linear-system solving, and enumeration of GL(n, q) and AGL(n, q).
//!
//! Pivoting is first-nonzero and fully deterministic; there is no notion of
//! pivot magnitude over a finite field. Enumeration of GL is lexicographic on
//! the row-major entry sequence so that census outputs are reproducible.

use crate::error::{Error, Result};
use crate::field::Field;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// Column vector over F_q.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqVector {
    field: &'static Field,
    entries: Vec<u8>,
}

impl std::fmt::Debug for FqVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?} over F_{})", self.entries, self.field.q())
    }
}

impl FqVector {
    pub fn new(field: &'static Field, entries: Vec<u8>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("vector dimension must be positive".into()));
        }
        if let Some(&bad) = entries.iter().find(|&&x| x >= field.q()) {
            return Err(Error::InvalidArgument(format!(
                "entry {bad} out of range for F_{}",
                field.q()
            )));
        }
        Ok(FqVector { field, entries })
    }

    pub fn zero(field: &'static Field, dim: usize) -> Self {
        FqVector { field, entries: vec![0; dim] }
    }

    pub fn basis(field: &'static Field, dim: usize, i: usize) -> Self {
        let mut v = Self::zero(field, dim);
        v.entries[i] = 1;
        v
    }

    /// Inverse of [`FqVector::code`]: the vector with the given radix-q code.
    pub fn from_code(field: &'static Field, dim: usize, code: u64) -> Result<Self> {
        let q = field.q() as u64;
        if code >= q.pow(dim as u32) {
            return Err(Error::InvalidArgument(format!(
                "code {code} out of range for dimension {dim} over F_{q}"
            )));
        }
        let mut c = code;
        let entries = (0..dim)
            .map(|_| {
                let d = (c % q) as u8;
                c /= q;
                d
            })
            .collect();
        Ok(FqVector { field, entries })
    }

    /// Radix-q positional code: `(v_0, ..., v_{d-1})` maps to `sum v_i q^i`.
    pub fn code(&self) -> u64 {
        let q = self.field.q() as u64;
        self.entries.iter().rev().fold(0u64, |acc, &d| acc * q + d as u64)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn field(&self) -> &'static Field {
        self.field
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        self.entries[i]
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn add(&self, other: &FqVector) -> FqVector {
        assert_eq!(self.dim(), other.dim());
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        FqVector { field: self.field, entries }
    }

    pub fn sub(&self, other: &FqVector) -> FqVector {
        assert_eq!(self.dim(), other.dim());
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        FqVector { field: self.field, entries }
    }

    pub fn neg(&self) -> FqVector {
        let entries = self.entries.iter().map(|&a| self.field.neg(a)).collect();
        FqVector { field: self.field, entries }
    }

    pub fn scale(&self, c: u8) -> FqVector {
        let entries = self.entries.iter().map(|&a| self.field.mul(c, a)).collect();
        FqVector { field: self.field, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }
}

/// Row-major matrix over F_q.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    field: &'static Field,
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl std::fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}x{} over F_{}: {:?}]",
            self.rows,
            self.cols,
            self.field.q(),
            self.entries
        )
    }
}

impl FqMatrix {
    pub fn new(field: &'static Field, rows: usize, cols: usize, entries: Vec<u8>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&x| x >= field.q()) {
            return Err(Error::InvalidArgument(format!(
                "entry {bad} out of range for F_{}",
                field.q()
            )));
        }
        Ok(FqMatrix { field, rows, cols, entries })
    }

    pub fn zero(field: &'static Field, rows: usize, cols: usize) -> Self {
        FqMatrix { field, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(field: &'static Field, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> &'static Field {
        self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        debug_assert!(v < self.field.q());
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Lexicographic rank of the row-major entry sequence, entry 0 most
    /// significant. Matches the enumeration order of [`enumerate_gl`].
    pub fn lex_code(&self) -> u64 {
        let q = self.field.q() as u64;
        self.entries.iter().fold(0u64, |acc, &d| acc * q + d as u64)
    }

    pub fn from_lex_code(field: &'static Field, rows: usize, cols: usize, code: u64) -> Self {
        let q = field.q() as u64;
        let mut entries = vec![0u8; rows * cols];
        let mut c = code;
        for slot in entries.iter_mut().rev() {
            *slot = (c % q) as u8;
            c /= q;
        }
        debug_assert_eq!(c, 0);
        FqMatrix { field, rows, cols, entries }
    }

    pub fn mat_vec(&self, v: &FqVector) -> FqVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector dimension mismatch");
        let f = self.field;
        let entries = (0..self.rows)
            .map(|r| {
                let mut acc = 0u8;
                for c in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(r, c), v.get(c)));
                }
                acc
            })
            .collect();
        FqVector { field: f, entries }
    }

    pub fn mul(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let f = self.field;
        let mut out = FqMatrix::zero(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = f.add(out.get(r, c), f.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        FqMatrix { field: self.field, rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        FqMatrix { field: self.field, rows: self.rows, cols: self.cols, entries }
    }

    /// Exact exponentiation by squaring; requires a square matrix.
    pub fn pow(&self, mut k: u64) -> FqMatrix {
        assert_eq!(self.rows, self.cols, "pow requires a square matrix");
        let mut base = self.clone();
        let mut acc = FqMatrix::identity(self.field, self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        row_reduce(&mut work, None).len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Exact inverse via Gauss-Jordan on the augmented system.
    pub fn inverse(&self) -> Result<FqMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse requires a square matrix".into()));
        }
        let n = self.rows;
        let f = self.field;
        let mut work = self.clone();
        let mut inv = FqMatrix::identity(f, n);
        let mut pivot_row = 0usize;
        for col in 0..n {
            let Some(p) = (pivot_row..n).find(|&r| work.get(r, col) != 0) else {
                return Err(Error::SingularMatrix);
            };
            swap_rows(&mut work, pivot_row, p);
            swap_rows(&mut inv, pivot_row, p);
            let s = f.inv(work.get(pivot_row, col));
            scale_row(&mut work, pivot_row, s);
            scale_row(&mut inv, pivot_row, s);
            for r in 0..n {
                if r != pivot_row {
                    let factor = work.get(r, col);
                    if factor != 0 {
                        sub_scaled_row(&mut work, r, pivot_row, factor);
                        sub_scaled_row(&mut inv, r, pivot_row, factor);
                    }
                }
            }
            pivot_row += 1;
        }
        Ok(inv)
    }
}

fn swap_rows(m: &mut FqMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..m.cols {
        m.entries.swap(a * m.cols + c, b * m.cols + c);
    }
}

fn scale_row(m: &mut FqMatrix, r: usize, s: u8) {
    let f = m.field;
    for c in 0..m.cols {
        let v = f.mul(s, m.get(r, c));
        m.set(r, c, v);
    }
}

/// row_r -= factor * row_src
fn sub_scaled_row(m: &mut FqMatrix, r: usize, src: usize, factor: u8) {
    let f = m.field;
    for c in 0..m.cols {
        let v = f.sub(m.get(r, c), f.mul(factor, m.get(src, c)));
        m.set(r, c, v);
    }
}

/// Reduced row echelon form in place, optionally carrying a right-hand side.
/// Returns the pivot columns in order.
fn row_reduce(m: &mut FqMatrix, mut rhs: Option<&mut FqVector>) -> Vec<usize> {
    let f = m.field;
    let mut pivots = Vec::new();
    let mut pivot_row = 0usize;
    for col in 0..m.cols {
        let Some(p) = (pivot_row..m.rows).find(|&r| m.get(r, col) != 0) else {
            continue;
        };
        swap_rows(m, pivot_row, p);
        if let Some(ref mut v) = rhs {
            v.entries.swap(pivot_row, p);
        }
        let s = f.inv(m.get(pivot_row, col));
        scale_row(m, pivot_row, s);
        if let Some(ref mut v) = rhs {
            v.entries[pivot_row] = f.mul(s, v.entries[pivot_row]);
        }
        for r in 0..m.rows {
            if r != pivot_row {
                let factor = m.get(r, col);
                if factor != 0 {
                    sub_scaled_row(m, r, pivot_row, factor);
                    if let Some(ref mut v) = rhs {
                        v.entries[r] = f.sub(v.entries[r], f.mul(factor, v.entries[pivot_row]));
                    }
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
        if pivot_row == m.rows {
            break;
        }
    }
    pivots
}

/// Solution set of a linear system: empty, or `point + span(basis)`.
#[derive(Clone, Debug)]
pub struct AffineSubspace {
    field: &'static Field,
    ambient_dim: usize,
    point: Option<FqVector>,
    basis: Vec<FqVector>,
}

impl AffineSubspace {
    pub fn empty(field: &'static Field, ambient_dim: usize) -> Self {
        AffineSubspace { field, ambient_dim, point: None, basis: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.point.is_none()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn point(&self) -> Option<&FqVector> {
        self.point.as_ref()
    }

    pub fn basis(&self) -> &[FqVector] {
        &self.basis
    }

    /// Dimension of the solution space; empty sets report 0 alongside `is_empty`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn size(&self) -> BigUint {
        if self.is_empty() {
            BigUint::ZERO
        } else {
            BigUint::from(self.field.q()).pow(self.basis.len() as u32)
        }
    }

    /// Deterministic enumeration: the particular point plus every coefficient
    /// tuple over the basis, last coefficient varying fastest.
    pub fn iter_points(&self) -> impl Iterator<Item = FqVector> + '_ {
        let q = self.field.q() as u64;
        let k = self.basis.len() as u32;
        let total: u64 = if self.is_empty() { 0 } else { q.pow(k) };
        (0..total).map(move |mut t| {
            let mut v = self.point.clone().expect("nonempty");
            for b in self.basis.iter().rev() {
                let c = (t % q) as u8;
                t /= q;
                if c != 0 {
                    v = v.add(&b.scale(c));
                }
            }
            v
        })
    }
}

/// Full solution set of `A x = c` over F_q.
pub fn solve_linear(a: &FqMatrix, c: &FqVector) -> Result<AffineSubspace> {
    if a.rows() != c.dim() {
        return Err(Error::DimensionMismatch(format!(
            "system has {} rows but right-hand side has {} entries",
            a.rows(),
            c.dim()
        )));
    }
    let f = a.field();
    let mut work = a.clone();
    let mut rhs = c.clone();
    let pivots = row_reduce(&mut work, Some(&mut rhs));
    for r in pivots.len()..work.rows() {
        if rhs.get(r) != 0 {
            return Ok(AffineSubspace::empty(f, a.cols()));
        }
    }
    let mut point = FqVector::zero(f, a.cols());
    for (r, &col) in pivots.iter().enumerate() {
        point.entries[col] = rhs.get(r);
    }
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; a.cols()];
        for &c in &pivots {
            s[c] = true;
        }
        s
    };
    let mut basis = Vec::new();
    for free in 0..a.cols() {
        if pivot_set[free] {
            continue;
        }
        let mut v = FqVector::zero(f, a.cols());
        v.entries[free] = 1;
        for (r, &col) in pivots.iter().enumerate() {
            v.entries[col] = f.neg(work.get(r, free));
        }
        basis.push(v);
    }
    Ok(AffineSubspace { field: f, ambient_dim: a.cols(), point: Some(point), basis })
}

/// `prod_{i=0}^{n-1} (q^n - q^i)`, the order of GL(n, q).
pub fn gl_order(n: usize, q: u64) -> Result<BigUint> {
    Field::get(q)?;
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let qn = BigUint::from(q).pow(n as u32);
    let mut acc = BigUint::one();
    let mut qi = BigUint::one();
    for _ in 0..n {
        acc *= &qn - &qi;
        qi *= q;
    }
    Ok(acc)
}

/// `q^n * |GL(n, q)|`, the order of AGL(n, q).
pub fn agl_order(n: usize, q: u64) -> Result<BigUint> {
    Ok(BigUint::from(q).pow(n as u32) * gl_order(n, q)?)
}

fn check_group_budget(n: usize, q: u64, budget: u64, what: &str) -> Result<()> {
    let order = agl_order(n, q)?;
    if order.to_u64().is_none_or(|o| o > budget) {
        return Err(Error::BudgetExceeded {
            what: what.into(),
            required: order.to_string(),
            budget,
        });
    }
    Ok(())
}

/// Streaming enumeration of GL(n, q) in lexicographic order of the row-major
/// entry sequence. The cursor is cloneable; each instance is single-consumer.
#[derive(Clone, Debug)]
pub struct GlIter {
    field: &'static Field,
    n: usize,
    next_code: u64,
    end: u64,
}

impl Iterator for GlIter {
    type Item = FqMatrix;

    fn next(&mut self) -> Option<FqMatrix> {
        while self.next_code < self.end {
            let m = FqMatrix::from_lex_code(self.field, self.n, self.n, self.next_code);
            self.next_code += 1;
            if m.is_invertible() {
                return Some(m);
            }
        }
        None
    }
}

/// All invertible n x n matrices, each exactly once, deterministic order.
pub fn enumerate_gl(field: &'static Field, n: usize, budget: u64) -> Result<GlIter> {
    check_group_budget(n, field.q() as u64, budget, &format!("enumerate_gl({n},{})", field.q()))?;
    let end = (field.q() as u64).pow((n * n) as u32);
    Ok(GlIter { field, n, next_code: 0, end })
}

/// Streaming enumeration of AGL(n, q) as `(matrix, translation)` pairs:
/// matrices in [`enumerate_gl`] order, translations by ascending radix-q code.
#[derive(Clone, Debug)]
pub struct AglIter {
    inner: GlIter,
    current: Option<FqMatrix>,
    shift_code: u64,
    shift_end: u64,
}

impl Iterator for AglIter {
    type Item = (FqMatrix, FqVector);

    fn next(&mut self) -> Option<(FqMatrix, FqVector)> {
        loop {
            if self.current.is_none() {
                self.current = self.inner.next();
                self.shift_code = 0;
                self.current.as_ref()?;
            }
            if self.shift_code < self.shift_end {
                let m = self.current.clone().unwrap();
                let v = FqVector::from_code(self.inner.field, self.inner.n, self.shift_code)
                    .expect("in range");
                self.shift_code += 1;
                return Some((m, v));
            }
            self.current = None;
        }
    }
}

pub fn enumerate_agl(field: &'static Field, n: usize, budget: u64) -> Result<AglIter> {
    check_group_budget(n, field.q() as u64, budget, &format!("enumerate_agl({n},{})", field.q()))?;
    let end = (field.q() as u64).pow((n * n) as u32);
    Ok(AglIter {
        inner: GlIter { field, n, next_code: 0, end },
        current: None,
        shift_code: 0,
        shift_end: (field.q() as u64).pow(n as u32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn f(q: u64) -> &'static Field {
        Field::get(q).unwrap()
    }

    fn mat(q: u64, rows: usize, cols: usize, e: &[u8]) -> FqMatrix {
        FqMatrix::new(f(q), rows, cols, e.to_vec()).unwrap()
    }

    fn vec_(q: u64, e: &[u8]) -> FqVector {
        FqVector::new(f(q), e.to_vec()).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(gl_order(1, 2).unwrap(), BigUint::from(1u32));
        assert_eq!(gl_order(2, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(gl_order(3, 2).unwrap(), BigUint::from(168u32));
        assert_eq!(agl_order(1, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(agl_order(2, 2).unwrap(), BigUint::from(24u32));
        assert_eq!(agl_order(3, 2).unwrap(), BigUint::from(1344u32));
        assert!(matches!(gl_order(2, 6), Err(Error::UnsupportedField(6))));
    }

    #[test]
    fn solve_identity_system() {
        let a = FqMatrix::identity(f(2), 2);
        let c = vec_(2, &[1, 0]);
        let s = solve_linear(&a, &c).unwrap();
        assert_eq!(s.point().unwrap(), &c);
        assert!(s.basis().is_empty());
        assert_eq!(s.size(), BigUint::from(1u32));
    }

    #[test]
    fn solve_null_system() {
        let a = FqMatrix::zero(f(2), 2, 2);
        let c = vec_(2, &[0, 0]);
        let s = solve_linear(&a, &c).unwrap();
        assert_eq!(s.point().unwrap(), &vec_(2, &[0, 0]));
        assert_eq!(s.basis().len(), 2);
        assert_eq!(s.size(), BigUint::from(4u32));
    }

    #[test]
    fn solve_inconsistent_system() {
        // Enumerating all four vectors over F_2^2 confirms no solution.
        let a = mat(2, 2, 2, &[1, 1, 1, 1]);
        let c = vec_(2, &[1, 0]);
        for code in 0..4 {
            let x = FqVector::from_code(f(2), 2, code).unwrap();
            assert_ne!(a.mat_vec(&x), c);
        }
        let s = solve_linear(&a, &c).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.size(), BigUint::ZERO);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let a = FqMatrix::identity(f(2), 2);
        let c = vec_(2, &[1, 0, 0]);
        assert!(matches!(solve_linear(&a, &c), Err(Error::DimensionMismatch(_))));
    }

    /// Brute-force agreement of the full solution set, plus rank-nullity,
    /// over every right-hand side of a spread of systems.
    #[test]
    fn solve_matches_bruteforce() {
        use crate::rng::{stream_rng, uniform_u64};
        for &(q, rows, cols) in &[
            (2u64, 3usize, 6usize),
            (2, 6, 6),
            (2, 4, 3),
            (3, 3, 4),
            (3, 4, 4),
            (3, 2, 3),
        ] {
            let field = f(q);
            let mut rng = stream_rng(0x5eed, ((q * 100 + rows as u64 * 10 + cols as u64)));
            for _ in 0..40 {
                let entries: Vec<u8> =
                    (0..rows * cols).map(|_| uniform_u64(&mut rng, q) as u8).collect();
                let a = FqMatrix::new(field, rows, cols, entries).unwrap();
                let cv: Vec<u8> = (0..rows).map(|_| uniform_u64(&mut rng, q) as u8).collect();
                let c = FqVector::new(field, cv).unwrap();
                let s = solve_linear(&a, &c).unwrap();
                let mut expect: Vec<u64> = Vec::new();
                for code in 0..q.pow(cols as u32) {
                    let x = FqVector::from_code(field, cols, code).unwrap();
                    if a.mat_vec(&x) == c {
                        expect.push(code);
                    }
                }
                let mut got: Vec<u64> = s.iter_points().map(|p| p.code()).collect();
                got.sort_unstable();
                assert_eq!(got, expect, "q={q} {rows}x{cols}");
                // rank + nullity = cols (nullity from the homogeneous system)
                let hom = solve_linear(&a, &FqVector::zero(field, rows)).unwrap();
                assert_eq!(a.rank() + hom.dim(), cols);
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(FqMatrix::identity(f(2), 3).rank(), 3);
        assert_eq!(mat(2, 2, 2, &[1, 1, 1, 1]).rank(), 1);
    }

    #[test]
    fn swap_is_involution() {
        let swap = mat(2, 2, 2, &[0, 1, 1, 0]);
        assert_eq!(swap.pow(2), FqMatrix::identity(f(2), 2));
    }

    #[test]
    fn inverse_of_singular_fails() {
        assert!(matches!(mat(2, 2, 2, &[1, 1, 1, 1]).inverse(), Err(Error::SingularMatrix)));
    }

    /// 1000 random invertible matrices per (n, q), including extension fields.
    #[test]
    fn inverse_roundtrip_random() {
        use crate::rng::{stream_rng, uniform_u64};
        for &(n, q) in &[(2usize, 2u64), (3, 2), (2, 3), (3, 3), (2, 4), (2, 5), (2, 7), (2, 8), (2, 9)] {
            let field = f(q);
            let id = FqMatrix::identity(field, n);
            let mut rng = stream_rng(0xfeed, n as u64 * 16 + q);
            let mut found = 0;
            while found < 1000 {
                let entries: Vec<u8> =
                    (0..n * n).map(|_| uniform_u64(&mut rng, q) as u8).collect();
                let a = FqMatrix::new(field, n, n, entries).unwrap();
                if !a.is_invertible() {
                    continue;
                }
                found += 1;
                let inv = a.inverse().unwrap();
                assert_eq!(inv.mul(&a), id);
                assert_eq!(a.mul(&inv), id);
            }
        }
    }

    #[test]
    fn gl_enumeration_counts() {
        for &(n, q) in &[(1usize, 2u64), (2, 2), (3, 2), (1, 3), (2, 3)] {
            let count = enumerate_gl(f(q), n, 10_000_000).unwrap().count();
            assert_eq!(BigUint::from(count), gl_order(n, q).unwrap(), "GL({n},{q})");
        }
    }

    #[test]
    fn gl1_is_trivial_over_f2() {
        let all: Vec<_> = enumerate_gl(f(2), 1, 1000).unwrap().collect();
        assert_eq!(all, vec![FqMatrix::identity(f(2), 1)]);
    }

    #[test]
    fn agl_enumeration() {
        let all: Vec<_> = enumerate_agl(f(2), 2, 1000).unwrap().collect();
        assert_eq!(all.len(), 24);
        assert!(all.iter().all(|(m, _)| m.is_invertible()));
        // exactly the 6 invertible matrices crossed with 4 translations
        let mats: std::collections::HashSet<u64> = all.iter().map(|(m, _)| m.lex_code()).collect();
        assert_eq!(mats.len(), 6);
        // pairwise distinct
        let keys: std::collections::HashSet<(u64, u64)> =
            all.iter().map(|(m, v)| (m.lex_code(), v.code())).collect();
        assert_eq!(keys.len(), 24);
    }

    #[test]
    fn enumeration_budget_refusal() {
        let err = enumerate_agl(f(2), 4, 1000).unwrap_err();
        match err {
            Error::BudgetExceeded { required, budget, .. } => {
                assert_eq!(required, agl_order(4, 2).unwrap().to_string());
                assert_eq!(budget, 1000);
            }
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let codes: Vec<u64> =
            enumerate_gl(f(2), 2, 1000).unwrap().map(|m| m.lex_code()).collect();
        let mut sorted = codes.clone();
        sorted.sort_unstable();
        assert_eq!(codes, sorted);
    }

    #[test]
    fn vector_codes_roundtrip_small() {
        for &q in &[2u64, 3] {
            for dim in 1..=4usize {
                let total = q.pow(dim as u32);
                for code in 0..total {
                    let v = FqVector::from_code(f(q), dim, code).unwrap();
                    assert_eq!(v.code(), code);
                }
            }
        }
    }

    #[test]
    fn matrix_pow_matches_repeated_multiplication() {
        let a = mat(3, 2, 2, &[1, 2, 1, 1]);
        let mut acc = FqMatrix::identity(f(3), 2);
        for k in 0..20u64 {
            assert_eq!(a.pow(k), acc);
            acc = acc.mul(&a);
        }
    }

    #[test]
    fn gl_order_overflow_guard() {
        // agl_order(4, 3) exceeds a 10^7 budget; the iterator must refuse.
        assert!(enumerate_gl(f(3), 4, 10_000_000).is_err());
        assert!(agl_order(4, 3).unwrap().to_u64().unwrap() > 10_000_000);
    }
}
