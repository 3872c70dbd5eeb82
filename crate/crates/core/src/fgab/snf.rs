use alloc::vec::Vec;

use super::matrix::IntMatrix;

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d₁ | d₂ | … | d_rank`, all positive.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    /// The nonzero diagonal entries, in order.
    pub diagonal: Vec<i128>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Re-derives every defining property against the input `m`, naming the
    /// first that fails.
    pub fn check(&self, m: &IntMatrix) -> core::result::Result<(), &'static str> {
        let (r, c) = (m.rows(), m.cols());
        let shapes = self.u.rows() == r
            && self.u.cols() == r
            && self.v.rows() == c
            && self.v.cols() == c
            && self.d.rows() == r
            && self.d.cols() == c;
        if !shapes {
            return Err("transform shapes");
        }
        let umv = self
            .u
            .mul(m)
            .and_then(|x| x.mul(&self.v))
            .map_err(|_| "shapes")?;
        if umv != self.d {
            return Err("U·M·V ≠ D");
        }
        if self.u.mul(&self.u_inv).ok() != Some(IntMatrix::identity(r))
            || self.v.mul(&self.v_inv).ok() != Some(IntMatrix::identity(c))
        {
            return Err("inverse transforms");
        }
        let unimodular = |x: &IntMatrix| x.determinant().is_ok_and(|d| d == 1 || d == -1);
        if !unimodular(&self.u) || !unimodular(&self.v) {
            return Err("not unimodular");
        }
        for i in 0..r {
            for j in 0..c {
                let expected = if i == j {
                    self.diagonal.get(i).copied().unwrap_or(0)
                } else {
                    0
                };
                if self.d.get(i, j) != expected {
                    return Err("D is not the reported diagonal");
                }
            }
        }
        if self.diagonal.iter().any(|&x| x <= 0) {
            return Err("non-positive invariant factor");
        }
        if self.diagonal.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err("divisibility chain");
        }
        Ok(())
    }
}

struct Work {
    m: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn add_row(&mut self, dst: usize, src: usize, q: i128) {
        self.m.add_row_multiple(dst, src, q);
        self.u.add_row_multiple(dst, src, q);
        self.u_inv.add_col_multiple(src, dst, -q);
    }

    fn add_col(&mut self, dst: usize, src: usize, q: i128) {
        self.m.add_col_multiple(dst, src, q);
        self.v.add_col_multiple(dst, src, q);
        self.v_inv.add_row_multiple(src, dst, -q);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn negate_row(&mut self, r: usize) {
        self.m.negate_row(r);
        self.u.negate_row(r);
        self.u_inv.negate_col(r);
    }

    /// Moves the entry of least nonzero absolute value among rows and columns
    /// `≥ t` to `(t, t)`; ties go to the first in row-major order.
    fn choose_pivot(
        &mut self,
        t: usize,
        rows: impl Iterator<Item = usize> + Clone,
        cols: impl Iterator<Item = usize> + Clone,
    ) -> bool {
        let mut best: Option<(i128, usize, usize)> = None;
        for r in rows {
            for c in cols.clone() {
                let a = self.m.get(r, c).abs();
                if a != 0 && best.map_or(true, |(b, _, _)| a < b) {
                    best = Some((a, r, c));
                }
            }
        }
        match best {
            Some((_, r, c)) => {
                self.swap_rows(t, r);
                self.swap_cols(t, c);
                true
            }
            None => false,
        }
    }

    /// Clears row and column `t` outside the pivot; returns `false` if a
    /// nonzero remainder was left behind.
    fn eliminate(&mut self, t: usize) -> bool {
        let p = self.m.get(t, t);
        let mut clean = true;
        for r in t + 1..self.m.rows() {
            let a = self.m.get(r, t);
            if a != 0 {
                self.add_row(r, t, -(a / p));
                clean &= self.m.get(r, t) == 0;
            }
        }
        for c in t + 1..self.m.cols() {
            let a = self.m.get(t, c);
            if a != 0 {
                self.add_col(c, t, -(a / p));
                clean &= self.m.get(t, c) == 0;
            }
        }
        clean
    }
}

/// Smith normal form with the pivot rule: least nonzero absolute value in
/// the remaining block, then row-major position.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        m: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        if !w.choose_pivot(t, t..rows, t..cols) {
            break;
        }
        loop {
            if !w.eliminate(t) {
                // A remainder survives in row or column t: it becomes the
                // new, strictly smaller pivot.
                let (rr, cc) = (t..rows, t..cols);
                let mut best: Option<(i128, usize, usize)> = None;
                for r in rr.clone() {
                    let a = w.m.get(r, t).abs();
                    if a != 0 && best.map_or(true, |(b, _, _)| a < b) {
                        best = Some((a, r, t));
                    }
                }
                for c in cc {
                    let a = w.m.get(t, c).abs();
                    if a != 0 && best.map_or(true, |(b, _, _)| a < b) {
                        best = Some((a, t, c));
                    }
                }
                let (_, r, c) = best.expect("pivot row or column is nonzero");
                w.swap_rows(t, r);
                w.swap_cols(t, c);
                continue;
            }
            let p = w.m.get(t, t);
            let bad = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| w.m.get(r, c) % p != 0));
            match bad {
                Some(r) => w.add_row(t, r, 1),
                None => break,
            }
        }
        if w.m.get(t, t) < 0 {
            w.negate_row(t);
        }
        diagonal.push(w.m.get(t, t));
        t += 1;
    }
    Snf {
        d: w.m,
        u: w.u,
        v: w.v,
        u_inv: w.u_inv,
        v_inv: w.v_inv,
        diagonal,
    }
}

/// A basis (as rows) of `{x : x · M = 0}`.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let rows: Vec<_> = (s.rank()..m.rows()).map(|r| s.u.row(r).to_vec()).collect();
    IntMatrix::from_rows(m.rows(), &rows).expect("rows of U have the right width")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn check(m: &IntMatrix) -> Snf {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(m.cols()));
        for w in s.diagonal.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        s
    }

    #[test]
    fn diag_2_3() {
        let s = check(&IntMatrix::diagonal(2, 2, &[2, 3]));
        assert_eq!(s.diagonal, vec![1, 6]);
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert!(s.diagonal.is_empty());
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn two_four_six_eight() {
        let s = check(&IntMatrix::new(2, 2, vec![2, 4, 6, 8]).unwrap());
        assert_eq!(s.diagonal, vec![2, 4]);
    }

    #[test]
    fn rectangular_and_negative() {
        let s = check(&IntMatrix::new(2, 3, vec![-4, 6, 0, 10, -2, 8]).unwrap());
        assert_eq!(s.diagonal, vec![2, 2]);
        let s = check(&IntMatrix::new(3, 1, vec![6, 10, 15]).unwrap());
        assert_eq!(s.diagonal, vec![1]);
    }

    #[test]
    fn kernel_rows_annihilate() {
        let m = IntMatrix::new(3, 2, vec![1, 2, 2, 4, 3, 6]).unwrap();
        let k = left_kernel(&m);
        assert_eq!(k.rows(), 2);
        assert!(k.mul(&m).unwrap().is_zero());
    }
}
