//! Dense matrices over a prime field `F_p`.
//!
//! Entries are stored reduced in `0..p`. Every matrix carries its
//! characteristic so that mixing fields is caught at the call site.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Returns true if `p` is a prime small enough for `u32` arithmetic with `u64`
/// intermediates.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % p as u64) as u32
}

#[inline]
pub fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    add_mod(a, p - b % p, p)
}

#[inline]
pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn pow_mod(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1u32 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Multiplicative inverse; panics on zero.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(!a.is_multiple_of(p), "inverse of zero in F_{p}");
    pow_mod(a, (p - 2) as u64, p)
}

/// Reduce a signed integer into `0..p`.
pub fn reduce_i64(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Matrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn scalar(p: u32, n: usize, c: u32) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = c % p;
        }
        m
    }

    /// Builds a matrix from signed rows. All rows must have length `cols`.
    pub fn from_rows(p: u32, rows: usize, cols: usize, entries: &[Vec<i64>]) -> Self {
        assert_eq!(entries.len(), rows);
        let mut m = Self::zeros(p, rows, cols);
        for (r, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (c, v) in row.iter().enumerate() {
                m.data[r * cols + c] = reduce_i64(*v, p);
            }
        }
        m
    }

    pub fn from_vec(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        let data = data.into_iter().map(|v| v % p).collect();
        Matrix { p, rows, cols, data }
    }

    /// Column vector.
    pub fn column_vector(p: u32, v: &[u32]) -> Self {
        Self::from_vec(p, v.len(), 1, v.to_vec())
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
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
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: u32) {
        let i = r * self.cols + c;
        self.data[i] = add_mod(self.data[i], v, self.p);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.p, other.p, "field mismatch");
        assert_eq!(self.cols, other.rows, "shape mismatch {:?} * {:?}", self.shape(), other.shape());
        let p = self.p as u64;
        let mut out = Matrix::zeros(self.p, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (c, &b) in orow.iter().enumerate() {
                    acc[c] = (acc[c] + a * b as u64) % p;
                }
            }
            for c in 0..other.cols {
                out.data[r * other.cols + c] = acc[c] as u32;
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| add_mod(a, b, p)).collect();
        Matrix { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| sub_mod(a, b, p)).collect();
        Matrix { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(neg_mod(1 % self.p, self.p))
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let p = self.p;
        let data = self.data.iter().map(|&a| mul_mod(a, c, p)).collect();
        Matrix { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let p = self.p;
        let mut out = Matrix::zeros(p, self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a == 0 {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.get(r2, c2);
                        if b != 0 {
                            out.set(r1 * other.rows + r2, c1 * other.cols + c2, mul_mod(a, b, p));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(p: u32, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(p, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "hstack row mismatch");
            out.paste(0, off, m);
            off += m.cols;
        }
        out
    }

    pub fn vstack(p: u32, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(p, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "vstack column mismatch");
            out.paste(off, 0, m);
            off += m.rows;
        }
        out
    }

    pub fn block_diag(p: u32, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(p, rows, cols);
        let (mut ro, mut co) = (0, 0);
        for m in parts {
            out.paste(ro, co, m);
            ro += m.rows;
            co += m.cols;
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(&block.data[r * block.cols..(r + 1) * block.cols]);
        }
    }

    pub fn submatrix(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(self.p, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.data[r * cols + c] = self.get(r0 + r, c0 + c);
            }
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.p, self.rows, idx.len());
        for r in 0..self.rows {
            for (k, &c) in idx.iter().enumerate() {
                out.data[r * idx.len() + k] = self.get(r, c);
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.p, idx.len(), self.cols);
        for (k, &r) in idx.iter().enumerate() {
            out.data[k * self.cols..(k + 1) * self.cols].copy_from_slice(self.row(r));
        }
        out
    }

    /// Reduced row echelon form by Gauss–Jordan elimination.
    pub fn echelon(&self) -> Echelon {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else { continue };
            if piv != row {
                for c in 0..m.cols {
                    m.data.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = inv_mod(m.get(row, col), p);
            if inv != 1 {
                for c in col..m.cols {
                    let v = m.get(row, c);
                    m.data[row * m.cols + c] = mul_mod(v, inv, p);
                }
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col);
                if f == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = m.get(row, c);
                    if v != 0 {
                        let i = r * m.cols + c;
                        m.data[i] = sub_mod(m.data[i], mul_mod(f, v, p), p);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis of `{x : self * x = 0}` as the columns of the returned matrix.
    pub fn nullspace(&self) -> Matrix {
        let e = self.echelon();
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|c| !e.pivots.contains(c)).collect();
        let mut out = Matrix::zeros(self.p, n, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, 1);
            for (r, &pc) in e.pivots.iter().enumerate() {
                let v = e.matrix.get(r, f);
                if v != 0 {
                    out.set(pc, k, neg_mod(v, self.p));
                }
            }
        }
        out
    }

    /// A basis of the column space chosen among the columns of `self`.
    pub fn column_space(&self) -> Matrix {
        let e = self.echelon();
        self.select_columns(&e.pivots)
    }

    /// Rows spanning the annihilator of the column space: `Q` with
    /// `ker Q = col(self)` and full row rank.
    pub fn cokernel_projection(&self) -> Matrix {
        self.transpose().nullspace().transpose()
    }

    /// Solves `self * x = b`, returning one solution if any exists.
    pub fn solve(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows, "solve: row mismatch");
        let p = self.p;
        let aug = Matrix::hstack(p, self.rows, &[self, b]);
        let e = aug.echelon();
        let n = self.cols;
        if e.pivots.iter().any(|&c| c >= n) {
            return None;
        }
        let mut x = Matrix::zeros(p, n, b.cols);
        for (r, &pc) in e.pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(pc, c, e.matrix.get(r, n + c));
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.p, self.rows))?;
        Some(x)
    }

    /// A right inverse `s` with `self * s = id`; requires full row rank.
    pub fn right_inverse(&self) -> Option<Matrix> {
        self.solve(&Matrix::identity(self.p, self.rows))
    }

    /// A left inverse `s` with `s * self = id`; requires full column rank.
    pub fn left_inverse(&self) -> Option<Matrix> {
        Some(self.transpose().right_inverse()?.transpose())
    }

    /// Flattens row-major into a vector.
    pub fn to_vec(&self) -> Vec<u32> {
        self.data.clone()
    }
}

/// An incrementally maintained subspace of `F_p^n` in echelon form, used for
/// membership tests and greedy basis extraction.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    p: u32,
    n: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub fn new(p: u32, n: usize) -> Self {
        SpanBuilder { p, n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Reduces `v` against the current rows; the residue is zero iff `v` is in the span.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc];
            if f != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    if r != 0 {
                        *x = sub_mod(*x, mul_mod(f, r, p), p);
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Inserts `v`; returns true if the span grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.n);
        let p = self.p;
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|&x| x != 0) else { return false };
        let inv = inv_mod(r[pc], p);
        r.iter_mut().for_each(|x| *x = mul_mod(*x, inv, p));
        for row in self.rows.iter_mut() {
            let f = row[pc];
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(&r) {
                    if y != 0 {
                        *x = sub_mod(*x, mul_mod(f, y, p), p);
                    }
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(pc);
        true
    }
}
