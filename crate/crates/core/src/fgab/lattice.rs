//! Sublattices of `Zⁿ` in row Hermite normal form.

use alloc::vec::Vec;

use super::matrix::{ext_gcd, mul, sub, IntMatrix};
use super::snf::{left_kernel, smith_normal_form};
use crate::{Error, Result};

/// Row-style Hermite normal form: pivots strictly move right, are positive,
/// and entries above a pivot lie in `0..pivot`. Zero rows are dropped.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let cols = m.cols();
    let mut rows: Vec<Vec<i128>> = m.row_vectors();
    let mut out: Vec<Vec<i128>> = Vec::new();
    let mut pivots = Vec::new();
    for c in 0..cols {
        // Combine every remaining row into one with gcd in column c.
        let mut pivot: Option<Vec<i128>> = None;
        let mut rest = Vec::with_capacity(rows.len());
        for r in rows.drain(..) {
            if r[c] == 0 {
                rest.push(r);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(r),
                Some(p) => {
                    let (g, x, y) = ext_gcd(p[c], r[c]);
                    let (a, b) = (p[c] / g, r[c] / g);
                    let new_p: Vec<i128> = (0..cols)
                        .map(|k| {
                            mul(x, p[k])
                                .checked_add(mul(y, r[k]))
                                .expect("integer overflow in addition")
                        })
                        .collect();
                    let new_r: Vec<i128> =
                        (0..cols).map(|k| sub(mul(a, r[k]), mul(b, p[k]))).collect();
                    debug_assert_eq!(new_r[c], 0);
                    pivot = Some(new_p);
                    rest.push(new_r);
                }
            }
        }
        rows = rest;
        if let Some(mut p) = pivot {
            if p[c] < 0 {
                p.iter_mut().for_each(|v| *v = -*v);
            }
            for prev in out.iter_mut() {
                let q = prev[c].div_euclid(p[c]);
                if q != 0 {
                    for k in 0..cols {
                        prev[k] = sub(prev[k], mul(q, p[k]));
                    }
                }
            }
            out.push(p);
            pivots.push(c);
        }
    }
    IntMatrix::from_rows(cols, &out).expect("rows have the matrix width")
}

/// A sublattice of `Zⁿ`, stored by its Hermite basis; equal lattices have
/// equal bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    basis: IntMatrix,
}

impl Lattice {
    /// The lattice spanned by the rows of `generators`.
    pub fn span(generators: &IntMatrix) -> Self {
        Self {
            basis: hermite_normal_form(generators),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            basis: IntMatrix::zeros(0, dim),
        }
    }

    pub fn full(dim: usize) -> Self {
        Self {
            basis: IntMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        assert_eq!(v.len(), self.dim(), "vector of the wrong dimension");
        let mut v = v.to_vec();
        let mut col = 0;
        for r in 0..self.basis.rows() {
            let row = self.basis.row(r);
            let pc = (col..self.dim())
                .find(|&c| row[c] != 0)
                .expect("HNF rows are nonzero");
            if v[col..pc].iter().any(|&x| x != 0) {
                return false;
            }
            if v[pc] % row[pc] != 0 {
                return false;
            }
            let q = v[pc] / row[pc];
            for c in pc..self.dim() {
                v[c] = sub(v[c], mul(q, row[c]));
            }
            col = pc + 1;
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn is_subset(&self, other: &Lattice) -> bool {
        (0..self.rank()).all(|r| other.contains(self.basis.row(r)))
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        Ok(Self::span(&self.basis.stack(&other.basis)?))
    }

    pub fn with_vector(&self, v: &[i128]) -> Result<Lattice> {
        let mut m = self.basis.clone();
        if v.len() != self.dim() {
            return Err(Error::BasisMismatch);
        }
        m.push_row(v);
        Ok(Self::span(&m))
    }

    /// `{x : x · m ∈ self}` for a matrix `m` with `dim` columns.
    pub fn preimage(&self, m: &IntMatrix) -> Result<Lattice> {
        if m.cols() != self.dim() {
            return Err(Error::BasisMismatch);
        }
        let stacked = m.stack(&self.basis)?;
        let k = left_kernel(&stacked);
        let proj: Vec<Vec<i128>> = (0..k.rows())
            .map(|r| k.row(r)[..m.rows()].to_vec())
            .collect();
        Ok(Self::span(&IntMatrix::from_rows(m.rows(), &proj)?))
    }

    /// `{v · m : v ∈ self}`.
    pub fn image(&self, m: &IntMatrix) -> Result<Lattice> {
        Ok(Self::span(&self.basis.mul(m)?))
    }

    pub fn intersection(&self, other: &Lattice) -> Result<Lattice> {
        if self.dim() != other.dim() {
            return Err(Error::BasisMismatch);
        }
        // x ∈ self ∩ other  ⇔  x = a·B₁ with a·B₁ ∈ other.
        let coeffs = other.preimage(&self.basis)?;
        coeffs.image(&self.basis)
    }

    /// `{v : m·v ∈ self for some m ≥ 1}`.
    ///
    /// In the Smith basis of `self` the quotient `Zⁿ/self` splits into cyclic
    /// torsion coordinates and free ones; the saturation is the set of
    /// vectors whose free coordinates vanish.
    pub fn saturation(&self) -> Lattice {
        let s = smith_normal_form(&self.basis);
        let r = s.rank();
        let rows: Vec<Vec<i128>> = (0..r).map(|i| s.v_inv.row(i).to_vec()).collect();
        Self::span(&IntMatrix::from_rows(self.dim(), &rows).expect("rows have the lattice width"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn hnf_of_a_small_lattice() {
        let m = IntMatrix::new(2, 2, vec![4, 6, 2, 2]).unwrap();
        let h = hermite_normal_form(&m);
        assert_eq!(h, IntMatrix::new(2, 2, vec![2, 0, 0, 2]).unwrap());
    }

    #[test]
    fn membership() {
        let l = Lattice::span(&IntMatrix::new(1, 2, vec![2, 4]).unwrap());
        assert!(l.contains(&[4, 8]));
        assert!(!l.contains(&[1, 2]));
        assert!(!l.contains(&[2, 5]));
        assert!(l.saturation().contains(&[1, 2]));
        assert!(!l.saturation().contains(&[1, 0]));
    }

    #[test]
    fn intersection_of_multiples() {
        let a = Lattice::span(&IntMatrix::new(1, 1, vec![6]).unwrap());
        let b = Lattice::span(&IntMatrix::new(1, 1, vec![4]).unwrap());
        let i = a.intersection(&b).unwrap();
        assert_eq!(i.basis().row(0), &[12]);
        assert_eq!(a.sum(&b).unwrap().basis().row(0), &[2]);
    }

    #[test]
    fn preimage_under_doubling() {
        let target = Lattice::span(&IntMatrix::new(1, 1, vec![4]).unwrap());
        let two = IntMatrix::new(1, 1, vec![2]).unwrap();
        assert_eq!(target.preimage(&two).unwrap().basis().row(0), &[2]);
    }
}
