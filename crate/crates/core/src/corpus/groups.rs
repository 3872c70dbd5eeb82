//! Groups of small order.
//!
//! Every group of order at most 16 has an abelian normal subgroup `A` with
//! cyclic quotient `Z/k`. Such a group is determined by an automorphism `φ`
//! of `A` (conjugation by a generator `t` of the quotient) and the element
//! `a₀ = t^k ∈ A`, subject to `φ^k = 1` and `φ(a₀) = a₀`. Enumerating all such
//! data and removing isomorphic copies yields every group; the counts are
//! cross-checked against a direct table search for orders up to 8.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::finalg::{canonical_form, FiniteAlgebra, DEFAULT_CANONICAL_BOUND};

/// `Z/d₁ × … × Z/d_r` with mixed-radix element codes.
#[derive(Clone, Debug)]
struct Abelian {
    orders: Vec<usize>,
}

impl Abelian {
    fn size(&self) -> usize {
        self.orders.iter().product()
    }

    fn digits(&self, mut x: usize) -> Vec<usize> {
        let mut d = Vec::with_capacity(self.orders.len());
        for &o in self.orders.iter().rev() {
            d.push(x % o);
            x /= o;
        }
        d.reverse();
        d
    }

    fn code(&self, d: &[usize]) -> usize {
        d.iter()
            .zip(&self.orders)
            .fold(0, |acc, (&v, &o)| acc * o + v % o)
    }

    fn add(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.digits(x), self.digits(y));
        let s: Vec<usize> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
        self.code(&s)
    }

    fn scale(&self, x: usize, k: usize) -> usize {
        let s: Vec<usize> = self.digits(x).iter().map(|v| v * k).collect();
        self.code(&s)
    }

    fn order_of(&self, x: usize) -> usize {
        (1..=self.size())
            .find(|&k| self.scale(x, k) == 0)
            .expect("finite order")
    }

    /// Every automorphism as a table `x ↦ φ(x)`.
    fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let r = self.orders.len();
        let gens: Vec<usize> = (0..r)
            .map(|i| {
                let mut d = vec![0; r];
                d[i] = 1;
                self.code(&d)
            })
            .collect();
        let mut out = Vec::new();
        let mut images = vec![0usize; r];
        fn rec(
            a: &Abelian,
            i: usize,
            gens: &[usize],
            images: &mut Vec<usize>,
            n: usize,
            out: &mut Vec<Vec<usize>>,
        ) {
            if i == gens.len() {
                let phi: Vec<usize> = (0..n)
                    .map(|x| {
                        a.digits(x)
                            .iter()
                            .zip(images.iter())
                            .fold(0, |acc, (&c, &img)| a.add(acc, a.scale(img, c)))
                    })
                    .collect();
                let mut seen = vec![false; n];
                if phi.iter().all(|&y| !core::mem::replace(&mut seen[y], true)) {
                    out.push(phi);
                }
                return;
            }
            for y in 0..n {
                if a.orders[i] % a.order_of(y) == 0 {
                    images[i] = y;
                    rec(a, i + 1, gens, images, n, out);
                }
            }
        }
        rec(self, 0, &gens, &mut images, n, &mut out);
        out
    }
}

/// Lists of cyclic orders, one per abelian group of order `n`, in
/// elementary-divisor form (prime powers, grouped by prime).
fn abelian_types(n: usize) -> Vec<Vec<usize>> {
    let mut m = n;
    let mut per_prime: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut p = 2;
    while m > 1 {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            per_prime.push(
                partitions(e)
                    .into_iter()
                    .map(|part| part.iter().map(|&k| p.pow(k as u32)).collect())
                    .collect(),
            );
        }
        p += 1;
    }
    let mut out = vec![Vec::new()];
    for options in per_prime {
        let mut next = Vec::new();
        for base in &out {
            for o in &options {
                let mut v: Vec<usize> = base.clone();
                v.extend(o);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Partitions of `e` into non-increasing parts.
fn partitions(e: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=left.min(max)).rev() {
            cur.push(k);
            rec(left - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(e, e, &mut Vec::new(), &mut out);
    out
}

/// The extension group: `(a, i)` at index `a + |A|·i` with
/// `(a, i)(b, j) = (a + φⁱ(b) + [i + j ≥ k]·a₀, i + j mod k)`.
fn extension(a: &Abelian, k: usize, phi: &[usize], a0: usize) -> FiniteAlgebra {
    let m = a.size();
    let mut powers = vec![(0..m).collect::<Vec<usize>>()];
    for i in 1..k {
        let prev = &powers[i - 1];
        powers.push(prev.iter().map(|&x| phi[x]).collect());
    }
    FiniteAlgebra::group_from_fn(m * k, |x, y| {
        let (xa, xi) = (x % m, x / m);
        let (ya, yi) = (y % m, y / m);
        let mut s = a.add(xa, powers[xi][ya]);
        if xi + yi >= k {
            s = a.add(s, a0);
        }
        s + m * ((xi + yi) % k)
    })
    .expect("cyclic extension data satisfies the group axioms")
}

/// All groups of order `n` up to isomorphism, in a fixed order.
pub fn groups_of_order(n: usize) -> Vec<Arc<FiniteAlgebra>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut keep = |g: FiniteAlgebra| {
        let key = canonical_form(&g, DEFAULT_CANONICAL_BOUND).expect("small");
        if seen.insert(key) {
            out.push(Arc::new(g));
        }
    };
    for k in 1..=n {
        if n % k != 0 {
            continue;
        }
        for orders in abelian_types(n / k) {
            let a = Abelian { orders };
            let m = a.size();
            for phi in a.automorphisms() {
                let mut p = (0..m).collect::<Vec<usize>>();
                for _ in 0..k {
                    p = p.iter().map(|&x| phi[x]).collect();
                }
                if p.iter().enumerate().any(|(x, &y)| x != y) {
                    continue;
                }
                for a0 in (0..m).filter(|&x| phi[x] == x) {
                    keep(extension(&a, k, &phi, a0));
                }
            }
        }
    }
    out
}

/// All group tables on `0..n` with identity `0`, found by filling the table
/// cell by cell under the Latin and associativity constraints, reduced up to
/// isomorphism. Independent of [`groups_of_order`]; practical for `n ≤ 8`.
pub fn groups_by_table_search(n: usize) -> Vec<Arc<FiniteAlgebra>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    if n == 1 {
        out.push(Arc::new(FiniteAlgebra::trivial(
            crate::finalg::Signature::Group,
        )));
        return out;
    }
    const UNSET: u32 = u32::MAX;
    let mut t = vec![UNSET; n * n];
    for i in 0..n {
        t[i] = i as u32;
        t[i * n] = i as u32;
    }
    let cells: Vec<(usize, usize)> = (1..n).flat_map(|r| (1..n).map(move |c| (r, c))).collect();

    fn consistent(t: &[u32], n: usize) -> bool {
        const UNSET: u32 = u32::MAX;
        for a in 0..n {
            for b in 0..n {
                let ab = t[a * n + b];
                if ab == UNSET {
                    continue;
                }
                for c in 0..n {
                    let bc = t[b * n + c];
                    if bc == UNSET {
                        continue;
                    }
                    let l = t[ab as usize * n + c];
                    let r = t[a * n + bc as usize];
                    if l != UNSET && r != UNSET && l != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn rec(
        k: usize,
        n: usize,
        cells: &[(usize, usize)],
        t: &mut Vec<u32>,
        found: &mut dyn FnMut(&[u32]),
    ) {
        if k == cells.len() {
            found(t);
            return;
        }
        let (r, c) = cells[k];
        for v in 0..n as u32 {
            if (0..c).any(|j| t[r * n + j] == v) || (0..r).any(|i| t[i * n + c] == v) {
                continue;
            }
            t[r * n + c] = v;
            if consistent(t, n) {
                rec(k + 1, n, cells, t, found);
            }
            t[r * n + c] = u32::MAX;
        }
    }
    rec(0, n, &cells, &mut t, &mut |tab| {
        let g = FiniteAlgebra::group(tab.to_vec()).expect("associative Latin square with identity");
        let key = canonical_form(&g, DEFAULT_CANONICAL_BOUND).expect("small");
        if seen.insert(key) {
            out.push(Arc::new(g));
        }
    });
    out
}
