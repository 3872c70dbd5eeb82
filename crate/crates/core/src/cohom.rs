//! Schur multipliers of finite groups from normalised 2-cocycles.
//!
//! `H²(B; Z/m)` with trivial action is computed exactly: the cocycle
//! condition is a linear system over `Z/m`, solved by an echelon form and a
//! diagonalisation that both work modulo `m` (the solution lattice always
//! contains `mZ^N`, so nothing is lost and entries stay small). Coboundaries
//! are divided out by a second diagonalisation. The multiplier `H₂(B)` follows from the universal coefficient
//! sequence `H²(B; Z/m) ≅ Hom(H₂B, Z/m) ⊕ Ext(B^ab, Z/m)`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::fgab::{ext_gcd, gcd, FgAb, IntMatrix};
use crate::finalg::{abelian_structure, FiniteAlgebra, Signature};
use crate::reflect::Reflector;
use crate::{Error, Result};

pub const DEFAULT_SCHUR_BOUND: usize = 16;

/// Normalised 2-cocycles and 2-coboundaries of a finite group with
/// coefficients in `Z/m`. Cochains are vectors indexed by pairs `(a, b)`
/// of nonzero elements, see [`CocycleSpace::index`].
#[derive(Clone, Debug)]
pub struct CocycleSpace {
    pub group: Arc<FiniteAlgebra>,
    pub modulus: i128,
    /// Generators of the cocycle group, entries reduced mod `m`.
    pub cocycles: Vec<Vec<i128>>,
    /// `δφ` for each basis cochain `φ = e_x`, `x ≠ 0`.
    pub coboundaries: Vec<Vec<i128>>,
    h2: FgAb,
}

impl CocycleSpace {
    pub fn new(group: &Arc<FiniteAlgebra>, modulus: i128) -> Result<Self> {
        if group.signature() != Signature::Group {
            return Err(Error::SignatureMismatch);
        }
        if modulus < 2 {
            return Err(Error::Malformed("modulus must be at least 2".into()));
        }
        let n = group.size();
        let k = n - 1;
        let dim = k * k;
        let m = modulus;
        if dim == 0 {
            return Ok(Self {
                group: group.clone(),
                modulus,
                cocycles: Vec::new(),
                coboundaries: Vec::new(),
                h2: FgAb::zero(),
            });
        }

        // Row lattice of the cocycle equations plus mZ^dim, kept as an
        // echelon basis with entries reduced mod m.
        let mut echelon = ModEchelon::new(dim, m);
        for a in 1..n {
            for b in 1..n {
                for g in 1..n {
                    echelon.insert(cocycle_equation(group, a, b, g));
                }
            }
        }
        let basis = echelon.basis();

        // H x ≡ 0 (mod m) with U H V ≡ D becomes d_i y_i ≡ 0 for y = V⁻¹x,
        // so the cocycles are y_i ∈ s_i Z with s_i = m / gcd(d_i, m).
        let diag = ModDiagonal::new(basis.row_vectors(), dim, m, true);
        let s: Vec<i128> = diag.orders().iter().map(|&o| m / o).collect();
        let cocycles = (0..dim)
            .map(|i| (0..dim).map(|r| (diag.v[r][i] * s[i]) % m).collect())
            .collect();

        let coboundaries: Vec<Vec<i128>> = (1..n).map(|x| coboundary(group, x)).collect();
        // Coboundaries and the orders m/s_i in the cocycle basis.
        let mut rels: Vec<Vec<i128>> = Vec::with_capacity(coboundaries.len() + dim);
        for b in &coboundaries {
            let y = diag.apply_v_inv(b);
            let mut coords = Vec::with_capacity(dim);
            for i in 0..dim {
                if y[i] % s[i] != 0 {
                    return Err(Error::InternalMismatch(
                        "a coboundary is not a cocycle".into(),
                    ));
                }
                coords.push(y[i] / s[i]);
            }
            rels.push(coords);
        }
        for i in 0..dim {
            let mut row = vec![0; dim];
            row[i] = m / s[i];
            rels.push(row);
        }
        let h2 = FgAb::finite(&ModDiagonal::new(rels, dim, m, false).orders());
        Ok(Self {
            group: group.clone(),
            modulus,
            cocycles,
            coboundaries,
            h2,
        })
    }

    /// Position of the pair `(a, b)`, both nonzero, in a cochain vector.
    pub fn index(&self, a: usize, b: usize) -> usize {
        (a - 1) * (self.group.size() - 1) + (b - 1)
    }

    /// Whether `c` satisfies the normalised cocycle identity mod `m`.
    pub fn is_cocycle(&self, c: &[i128]) -> bool {
        let n = self.group.size();
        (1..n).all(|a| {
            (1..n).all(|b| {
                (1..n).all(|g| {
                    let row = cocycle_equation(&self.group, a, b, g);
                    let v: i128 = row.iter().zip(c).map(|(r, x)| r * x).sum();
                    v.rem_euclid(self.modulus) == 0
                })
            })
        })
    }

    pub fn h2(&self) -> &FgAb {
        &self.h2
    }
}

/// Upper triangular basis of a lattice containing `mZ^dim`. Row `c` has
/// its leading entry at column `c`, a divisor of `m`, or is absent (then
/// `m·e_c` stands in).
struct ModEchelon {
    m: i128,
    pivots: Vec<Option<Vec<i128>>>,
}

impl ModEchelon {
    fn new(dim: usize, m: i128) -> Self {
        Self {
            m,
            pivots: vec![None; dim],
        }
    }

    fn insert(&mut self, v: Vec<i128>) {
        let m = self.m;
        let mut stack = vec![v];
        while let Some(mut v) = stack.pop() {
            for x in v.iter_mut() {
                *x = x.rem_euclid(m);
            }
            let Some(c) = v.iter().position(|&x| x != 0) else {
                continue;
            };
            let (p, pc) = match self.pivots[c].take() {
                Some(p) => {
                    let pc = p[c];
                    (p, pc)
                }
                None => {
                    let mut e = vec![0; v.len()];
                    e[c] = m;
                    (e, m)
                }
            };
            let (g, x, y) = ext_gcd(pc, v[c]);
            let (a, b) = (pc / g, v[c] / g);
            let lead: Vec<i128> = p
                .iter()
                .zip(&v)
                .map(|(&pi, &vi)| (x * pi + y * vi).rem_euclid(m))
                .collect();
            let rest: Vec<i128> = p.iter().zip(&v).map(|(&pi, &vi)| a * vi - b * pi).collect();
            let mut lead = lead;
            lead[c] = g;
            if g != pc {
                // (m/g)·lead vanishes at c and must stay in the span.
                stack.push(lead.iter().map(|&l| (m / g) * l).collect());
            }
            self.pivots[c] = Some(lead);
            stack.push(rest);
        }
    }

    fn basis(&self) -> IntMatrix {
        let dim = self.pivots.len();
        let rows: Vec<Vec<i128>> = self
            .pivots
            .iter()
            .enumerate()
            .map(|(c, p)| {
                p.clone().unwrap_or_else(|| {
                    let mut e = vec![0; dim];
                    e[c] = self.m;
                    e
                })
            })
            .collect();
        IntMatrix::from_rows(dim, &rows).expect("rows have the cochain width")
    }
}

/// Row and column reduction of a matrix over `Z/m`, for lattices that
/// contain `mZ^cols`. The column transform `V` and its inverse are kept
/// mod `m` on request.
struct ModDiagonal {
    m: i128,
    cols: usize,
    a: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
    v_inv: Vec<Vec<i128>>,
    track: bool,
}

impl ModDiagonal {
    fn new(rows: Vec<Vec<i128>>, cols: usize, m: i128, track: bool) -> Self {
        let a = rows
            .into_iter()
            .filter(|r| r.iter().any(|&x| x % m != 0))
            .map(|r| r.into_iter().map(|x| x.rem_euclid(m)).collect())
            .collect();
        let identity = |n: usize| {
            if track {
                (0..n)
                    .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
                    .collect()
            } else {
                Vec::new()
            }
        };
        let mut d = Self {
            m,
            cols,
            a,
            v: identity(cols),
            v_inv: identity(cols),
            track,
        };
        d.reduce();
        d
    }

    /// `gcd(a_ii, m)` for each column, `m` past the rank.
    fn orders(&self) -> Vec<i128> {
        (0..self.cols)
            .map(|i| {
                let d = self.a.get(i).map_or(0, |r| r.get(i).copied().unwrap_or(0));
                gcd(d, self.m)
            })
            .collect()
    }

    fn apply_v_inv(&self, x: &[i128]) -> Vec<i128> {
        self.v_inv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(0, |acc, (&p, &q)| (acc + p * q).rem_euclid(self.m))
            })
            .collect()
    }

    fn reduce(&mut self) {
        let (m, cols) = (self.m, self.cols);
        let rows = self.a.len();
        for t in 0..rows.min(cols) {
            // Pivot of least gcd with m, then row-major.
            let mut best: Option<(i128, usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    let x = self.a[r][c];
                    if x != 0 && best.map_or(true, |(g, _, _)| gcd(x, m) < g) {
                        best = Some((gcd(x, m), r, c));
                    }
                }
            }
            let Some((_, r, c)) = best else { return };
            self.a.swap(t, r);
            self.swap_cols(t, c);
            loop {
                let mut dirty = false;
                for r in t + 1..rows {
                    if self.a[r][t] != 0 {
                        self.clear_row_entry(t, r);
                    }
                }
                for c in t + 1..cols {
                    if self.a[t][c] != 0 {
                        self.clear_col_entry(t, c);
                        dirty |= (t + 1..rows).any(|r| self.a[r][t] != 0);
                    }
                }
                if !dirty {
                    break;
                }
            }
        }
    }

    /// `x ≡ k·p (mod m)` if `gcd(p, m) | x`.
    fn quotient(&self, p: i128, x: i128) -> Option<i128> {
        let q = gcd(p, self.m);
        if x % q != 0 {
            return None;
        }
        let n = self.m / q;
        let (_, inv, _) = ext_gcd((p / q).rem_euclid(n), n);
        Some(((x / q) % n * inv.rem_euclid(n)).rem_euclid(n))
    }

    fn clear_row_entry(&mut self, t: usize, r: usize) {
        let m = self.m;
        let (p, x) = (self.a[t][t], self.a[r][t]);
        if let Some(k) = self.quotient(p, x) {
            for c in 0..self.a[t].len() {
                self.a[r][c] = (self.a[r][c] - k * self.a[t][c]).rem_euclid(m);
            }
            return;
        }
        let (g, s, u) = ext_gcd(p, x);
        let (pg, xg) = (p / g, x / g);
        for c in 0..self.a[t].len() {
            let (y, z) = (self.a[t][c], self.a[r][c]);
            self.a[t][c] = (s * y + u * z).rem_euclid(m);
            self.a[r][c] = (pg * z - xg * y).rem_euclid(m);
        }
    }

    fn clear_col_entry(&mut self, t: usize, c: usize) {
        let m = self.m;
        let (p, x) = (self.a[t][t], self.a[t][c]);
        if let Some(k) = self.quotient(p, x) {
            for row in self.a.iter_mut() {
                row[c] = (row[c] - k * row[t]).rem_euclid(m);
            }
            if self.track {
                for row in self.v.iter_mut() {
                    row[c] = (row[c] - k * row[t]).rem_euclid(m);
                }
                for j in 0..self.v_inv[t].len() {
                    self.v_inv[t][j] = (self.v_inv[t][j] + k * self.v_inv[c][j]).rem_euclid(m);
                }
            }
            return;
        }
        let (g, s, u) = ext_gcd(p, x);
        let (pg, xg) = (p / g, x / g);
        let combine = |rows: &mut Vec<Vec<i128>>| {
            for row in rows.iter_mut() {
                let (y, z) = (row[t], row[c]);
                row[t] = (s * y + u * z).rem_euclid(m);
                row[c] = (pg * z - xg * y).rem_euclid(m);
            }
        };
        combine(&mut self.a);
        if self.track {
            combine(&mut self.v);
            for j in 0..self.v_inv[t].len() {
                let (y, z) = (self.v_inv[t][j], self.v_inv[c][j]);
                self.v_inv[t][j] = (pg * y + xg * z).rem_euclid(m);
                self.v_inv[c][j] = (s * z - u * y).rem_euclid(m);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(a, b);
        }
        if self.track {
            for row in self.v.iter_mut() {
                row.swap(a, b);
            }
            self.v_inv.swap(a, b);
        }
    }
}

/// Coefficients of `c(b,g) − c(ab,g) + c(a,bg) − c(a,b)` over the
/// normalised unknowns.
fn cocycle_equation(group: &FiniteAlgebra, a: usize, b: usize, g: usize) -> Vec<i128> {
    let n = group.size();
    let k = n - 1;
    let mut row = vec![0i128; k * k];
    let mut add = |x: usize, y: usize, v: i128| {
        if x != 0 && y != 0 {
            row[(x - 1) * k + (y - 1)] += v;
        }
    };
    add(b, g, 1);
    add(group.mul(a, b), g, -1);
    add(a, group.mul(b, g), 1);
    add(a, b, -1);
    row
}

/// `δe_x (a, b) = e_x(b) − e_x(ab) + e_x(a)`.
fn coboundary(group: &FiniteAlgebra, x: usize) -> Vec<i128> {
    let n = group.size();
    let mut v = Vec::with_capacity((n - 1) * (n - 1));
    for a in 1..n {
        for b in 1..n {
            let ind = |y: usize| i128::from(y == x);
            v.push(ind(b) - ind(group.mul(a, b)) + ind(a));
        }
    }
    v
}

/// `H²(B; Z/m)` with trivial action.
pub fn h2_mod(b: &Arc<FiniteAlgebra>, m: i128) -> Result<FgAb> {
    Ok(CocycleSpace::new(b, m)?.h2)
}

/// `log_p` of the order of a finite abelian group's `p`-part.
fn p_log(g: &FgAb, p: i128) -> u32 {
    g.invariant_factors()
        .iter()
        .map(|&d| {
            let (mut d, mut e) = (d, 0);
            while d % p == 0 {
                d /= p;
                e += 1;
            }
            e
        })
        .sum()
}

/// `log_p |X ⊗ Z/p^k|` summed over cyclic factors: `Σ min(e_i, k)`.
fn truncated_log(g: &FgAb, p: i128, k: u32) -> u32 {
    g.cyclic_orders()
        .iter()
        .map(|&d| {
            let (mut d, mut e) = (d, 0);
            while d % p == 0 && e < k {
                d /= p;
                e += 1;
            }
            e
        })
        .sum()
}

fn primes_of(mut n: usize) -> Vec<(i128, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while n > 1 {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p as i128, e));
        }
        p += 1;
    }
    out
}

/// `H₂(B; Z)` for a finite group of order at most [`DEFAULT_SCHUR_BOUND`].
pub fn schur_multiplier(b: &Arc<FiniteAlgebra>) -> Result<FgAb> {
    schur_multiplier_bounded(b, DEFAULT_SCHUR_BOUND)
}

/// For each prime `p` of `|B|` and `k = 1, 2, …`, the `p`-part of
/// `Hom(H₂B, Z/p^k)` has log-order `Σ min(e_j, k)` over the `p`-exponents
/// `e_j` of `H₂B`; its successive differences count the `e_j ≥ k`. The
/// exponent of `H₂B` divides `|B|`, so `k` never exceeds the `p`-adic
/// valuation of `|B|`.
pub fn schur_multiplier_bounded(b: &Arc<FiniteAlgebra>, bound: usize) -> Result<FgAb> {
    if b.signature() != Signature::Group {
        return Err(Error::SignatureMismatch);
    }
    if b.size() > bound {
        return Err(Error::TooLarge {
            size: b.size(),
            bound,
        });
    }
    let ab = abelian_structure(&Reflector::AB.reflect(b)?.image);
    let mut orders = Vec::new();
    for (p, vmax) in primes_of(b.size()) {
        let mut prev = 0u32;
        let mut q = 1i128;
        for k in 1..=vmax {
            q *= p;
            let x = h2_mod(b, q)?;
            let ext = truncated_log(&ab, p, k);
            let total = p_log(&x, p);
            let hom = total.checked_sub(ext).ok_or_else(|| {
                Error::InternalMismatch("H² mod p^k is smaller than its Ext part".into())
            })?;
            let at_least_k = hom - prev;
            if k > 1 && at_least_k > count_at_least(&orders, p, k - 1) {
                return Err(Error::InternalMismatch(
                    "peeling counts are not monotone".into(),
                ));
            }
            if at_least_k == 0 {
                break;
            }
            // Each factor with exponent ≥ k gains one more power of p.
            bump(&mut orders, p, k, at_least_k);
            prev = hom;
        }
    }
    Ok(FgAb::from_cyclic_orders(&orders))
}

fn count_at_least(orders: &[i128], p: i128, k: u32) -> u32 {
    orders.iter().filter(|&&d| d % p.pow(k) == 0).count() as u32
}

/// Promote `c` of the factors of order `p^{k−1}` to `p^k` (adding new
/// factors when `k = 1`).
fn bump(orders: &mut Vec<i128>, p: i128, k: u32, c: u32) {
    if k == 1 {
        orders.extend(core::iter::repeat(p).take(c as usize));
        return;
    }
    let target = p.pow(k - 1);
    let mut left = c;
    for d in orders.iter_mut() {
        if left == 0 {
            break;
        }
        if *d == target {
            *d *= p;
            left -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::named;

    /// Enumerate every normalised cochain mod m and count cocycles and
    /// coboundaries; `|H²| = #Z / #B`.
    fn brute_order(b: &Arc<FiniteAlgebra>, m: i128) -> usize {
        let space = CocycleSpace::new(b, m).unwrap();
        let dim = (b.size() - 1) * (b.size() - 1);
        let total = (m as usize).pow(dim as u32);
        let mut z = 0;
        for code in 0..total {
            let mut c = vec![0i128; dim];
            let mut t = code;
            for v in c.iter_mut() {
                *v = (t % m as usize) as i128;
                t /= m as usize;
            }
            if space.is_cocycle(&c) {
                z += 1;
            }
        }
        let mut bset = alloc::collections::BTreeSet::new();
        let k = b.size() - 1;
        let phis = (m as usize).pow(k as u32);
        for code in 0..phis {
            let mut c = vec![0i128; dim];
            let mut t = code;
            for (x, cob) in space.coboundaries.iter().enumerate() {
                let _ = x;
                let coef = (t % m as usize) as i128;
                t /= m as usize;
                for (ci, bi) in c.iter_mut().zip(cob) {
                    *ci = (*ci + coef * bi).rem_euclid(m);
                }
            }
            bset.insert(c);
        }
        z / bset.len()
    }

    #[test]
    fn small_cases_match_enumeration() {
        let z2 = named::cyclic(2);
        assert_eq!(h2_mod(&z2, 2).unwrap(), FgAb::cyclic(2));
        assert_eq!(brute_order(&z2, 2), 2);
        let z3 = named::cyclic(3);
        assert!(h2_mod(&z3, 2).unwrap().is_zero());
        assert_eq!(brute_order(&z3, 2), 1);
        assert_eq!(h2_mod(&z3, 3).unwrap(), FgAb::cyclic(3));
        assert_eq!(brute_order(&z3, 3), 3);
        assert!(h2_mod(&named::cyclic(1), 5).unwrap().is_zero());
    }

    #[test]
    fn mod_diagonal_matches_integer_smith_form() {
        let rows = vec![
            vec![2, 4, 4],
            vec![-6, 6, 12],
            vec![10, -4, -16],
            vec![3, 0, 9],
        ];
        for m in [4, 6, 12, 36] {
            let d = ModDiagonal::new(rows.clone(), 3, m, true);
            let mut stacked = IntMatrix::from_rows(3, &rows).unwrap();
            for i in 0..3 {
                let mut e = vec![0; 3];
                e[i] = m;
                stacked.push_row(&e);
            }
            assert_eq!(
                FgAb::finite(&d.orders()),
                FgAb::from_presentation(&stacked),
                "m = {m}"
            );
            for i in 0..3 {
                let col: Vec<i128> = (0..3).map(|r| d.v[r][i]).collect();
                let mut e = vec![0; 3];
                e[i] = 1;
                assert_eq!(d.apply_v_inv(&col), e);
            }
        }
    }

    #[test]
    fn stored_cocycles_are_cocycles() {
        let v = named::klein4();
        let s = CocycleSpace::new(&v, 4).unwrap();
        assert!(s.cocycles.iter().all(|c| s.is_cocycle(c)));
        assert!(s.coboundaries.iter().all(|c| s.is_cocycle(c)));
    }

    #[test]
    fn multipliers() {
        assert_eq!(schur_multiplier(&named::klein4()).unwrap(), FgAb::cyclic(2));
        assert!(schur_multiplier(&named::cyclic(6)).unwrap().is_zero());
        assert!(schur_multiplier(&named::quaternion8()).unwrap().is_zero());
        assert!(schur_multiplier(&named::symmetric3()).unwrap().is_zero());
        assert_eq!(
            schur_multiplier(&named::dihedral(4)).unwrap(),
            FgAb::cyclic(2)
        );
    }

    #[test]
    fn bound_is_enforced() {
        let z17 = named::cyclic(17);
        assert!(matches!(
            schur_multiplier(&z17),
            Err(Error::TooLarge {
                size: 17,
                bound: 16
            })
        ));
    }
}
