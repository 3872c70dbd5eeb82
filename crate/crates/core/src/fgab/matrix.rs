use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

#[inline]
pub(crate) fn add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("integer overflow in addition")
}

#[inline]
pub(crate) fn sub(a: i128, b: i128) -> i128 {
    a.checked_sub(b).expect("integer overflow in subtraction")
}

#[inline]
pub(crate) fn mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b)
        .expect("integer overflow in multiplication")
}

pub(crate) fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(g, x, y)` with `a·x + b·y = g = gcd(a, b) ≥ 0`.
pub(crate) fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, sub(r0, mul(q, r1)));
        (s0, s1) = (s1, sub(s0, mul(q, s1)));
        (t0, t1) = (t1, sub(t0, mul(q, t1)));
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// A dense integer matrix with overflow-checked arithmetic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i128>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Malformed(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[i128]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds a matrix from rows of width `cols` (needed when there are no
    /// rows).
    pub fn from_rows(cols: usize, rows: &[Vec<i128>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Malformed(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i128 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i128) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i128] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<i128>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::BasisMismatch);
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = add(out.get(r, c), mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// The row vector `v · self`.
    pub fn apply_row(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(
            v.len(),
            self.rows,
            "vector length does not match the matrix"
        );
        let mut out = vec![0i128; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for c in 0..self.cols {
                out[c] = add(out[c], mul(a, self.get(k, c)));
            }
        }
        out
    }

    /// The column vector `self · v`.
    pub fn apply_col(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(
            v.len(),
            self.cols,
            "vector length does not match the matrix"
        );
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(_, &b)| b != 0)
                    .fold(0, |acc, (&a, &b)| add(acc, mul(a, b)))
            })
            .collect()
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::BasisMismatch);
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn push_row(&mut self, row: &[i128]) {
        assert_eq!(row.len(), self.cols, "row length does not match the matrix");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i128> {
        if self.rows != self.cols {
            return Err(Error::Malformed(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut m: Vec<Vec<i128>> = self.row_vectors();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                    return Ok(0);
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = sub(mul(m[i][j], m[k][k]), mul(m[i][k], m[k][j]));
                    m[i][j] = v / prev;
                }
            }
            prev = m[k][k];
        }
        Ok(mul(sign, m[n - 1][n - 1]))
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[dst] += q · row[src]`.
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, q: i128) {
        if q == 0 {
            return;
        }
        for c in 0..self.cols {
            let v = add(self.get(dst, c), mul(q, self.get(src, c)));
            self.set(dst, c, v);
        }
    }

    /// `col[dst] += q · col[src]`.
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, q: i128) {
        if q == 0 {
            return;
        }
        for r in 0..self.rows {
            let v = add(self.get(r, dst), mul(q, self.get(r, src)));
            self.set(r, dst, v);
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = self
                .get(r, c)
                .checked_neg()
                .expect("integer overflow in negation");
            self.set(r, c, v);
        }
    }

    pub(crate) fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = self
                .get(r, c)
                .checked_neg()
                .expect("integer overflow in negation");
            self.set(r, c, v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_of_small_matrices() {
        let m = IntMatrix::new(2, 2, vec![2, 4, 6, 8]).unwrap();
        assert_eq!(m.determinant().unwrap(), -8);
        let m = IntMatrix::new(3, 3, vec![0, 1, 0, 1, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(m.determinant().unwrap(), -1);
        assert_eq!(IntMatrix::identity(4).determinant().unwrap(), 1);
    }

    #[test]
    fn extended_gcd() {
        for (a, b) in [(12, 18), (-4, 6), (0, 5), (7, 0), (0, 0)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(g, gcd(a, b));
            assert_eq!(a * x + b * y, g);
        }
    }

    #[test]
    #[should_panic(expected = "integer overflow")]
    fn overflow_is_loud() {
        mul(i128::MAX, 2);
    }
}
