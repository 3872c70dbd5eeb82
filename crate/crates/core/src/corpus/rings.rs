//! Rings (not necessarily unital) of small order.
//!
//! On an additive group `⊕ Z/dᵢ` with generators `eᵢ`, a ring structure is
//! a choice of products `eᵢeⱼ` of order dividing `gcd(dᵢ, dⱼ)`, extended
//! bilinearly; it is associative as soon as it is on generator triples.
//! Exhaustive search over these choices, with early associativity checks,
//! gives every ring of order up to 8.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::finalg::{
    all_normal_subobjects, canonical_form, quotient, FiniteAlgebra, Signature,
    DEFAULT_CANONICAL_BOUND,
};

/// Mixed-radix additive group.
struct Additive {
    orders: Vec<usize>,
}

impl Additive {
    fn size(&self) -> usize {
        self.orders.iter().product()
    }

    fn digits(&self, mut x: usize) -> Vec<usize> {
        let mut d = vec![0; self.orders.len()];
        for (i, &o) in self.orders.iter().enumerate().rev() {
            d[i] = x % o;
            x /= o;
        }
        d
    }

    fn code(&self, d: &[usize]) -> usize {
        d.iter()
            .zip(&self.orders)
            .fold(0, |acc, (&v, &o)| acc * o + v % o)
    }

    fn add(&self, x: usize, y: usize) -> usize {
        let s: Vec<usize> = self
            .digits(x)
            .iter()
            .zip(self.digits(y))
            .map(|(a, b)| a + b)
            .collect();
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

    /// `x·y` from generator products `p[i][j]`, all of them known.
    fn mul(&self, p: &[Vec<usize>], x: usize, y: usize) -> usize {
        let (dx, dy) = (self.digits(x), self.digits(y));
        let mut acc = 0;
        for (i, &a) in dx.iter().enumerate() {
            for (j, &b) in dy.iter().enumerate() {
                if a * b != 0 {
                    acc = self.add(acc, self.scale(p[i][j], a * b));
                }
            }
        }
        acc
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Elementary-divisor forms of the abelian groups of order `n`.
pub(crate) fn additive_types(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    fn rec(left: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 1 {
            out.push(cur.clone());
            return;
        }
        for d in min..=left {
            if left % d == 0 && is_prime_power(d) {
                cur.push(d);
                rec(left / d, d, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, 2, &mut Vec::new(), &mut out);
    out
}

fn is_prime_power(d: usize) -> bool {
    let p = (2..=d).find(|p| d % p == 0).expect("d ≥ 2");
    let mut m = d;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

/// Calls `found` with the products `p[i][j]` of every associative bilinear
/// multiplication on the additive group. `commutative` restricts to
/// `p[i][j] = p[j][i]`.
fn multiplications(a: &Additive, commutative: bool, found: &mut dyn FnMut(&[Vec<usize>])) {
    let r = a.orders.len();
    let n = a.size();
    let allowed: Vec<Vec<Vec<usize>>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let g = gcd(a.orders[i], a.orders[j]);
                    (0..n).filter(|&x| g % a.order_of(x) == 0).collect()
                })
                .collect()
        })
        .collect();
    let cells: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .filter(|&(i, j)| !commutative || i <= j)
        .collect();
    let mut p = vec![vec![usize::MAX; r]; r];
    let mut known = vec![vec![false; r]; r];

    // x·e_k, or None if a needed product is unknown.
    let right = |p: &[Vec<usize>], known: &[Vec<bool>], x: usize, k: usize| -> Option<usize> {
        let mut acc = 0;
        for (l, &c) in a.digits(x).iter().enumerate() {
            if c != 0 {
                if !known[l][k] {
                    return None;
                }
                acc = a.add(acc, a.scale(p[l][k], c));
            }
        }
        Some(acc)
    };
    let left = |p: &[Vec<usize>], known: &[Vec<bool>], i: usize, x: usize| -> Option<usize> {
        let mut acc = 0;
        for (l, &c) in a.digits(x).iter().enumerate() {
            if c != 0 {
                if !known[i][l] {
                    return None;
                }
                acc = a.add(acc, a.scale(p[i][l], c));
            }
        }
        Some(acc)
    };
    let ok = |p: &[Vec<usize>], known: &[Vec<bool>]| -> bool {
        for i in 0..r {
            for j in 0..r {
                if !known[i][j] {
                    continue;
                }
                for k in 0..r {
                    if !known[j][k] {
                        continue;
                    }
                    if let (Some(l), Some(rr)) =
                        (right(p, known, p[i][j], k), left(p, known, i, p[j][k]))
                    {
                        if l != rr {
                            return false;
                        }
                    }
                }
            }
        }
        true
    };

    #[allow(clippy::too_many_arguments)]
    fn rec(
        idx: usize,
        cells: &[(usize, usize)],
        allowed: &[Vec<Vec<usize>>],
        commutative: bool,
        p: &mut Vec<Vec<usize>>,
        known: &mut Vec<Vec<bool>>,
        ok: &dyn Fn(&[Vec<usize>], &[Vec<bool>]) -> bool,
        found: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        if idx == cells.len() {
            found(p);
            return;
        }
        let (i, j) = cells[idx];
        for &v in &allowed[i][j] {
            p[i][j] = v;
            known[i][j] = true;
            if commutative {
                p[j][i] = v;
                known[j][i] = true;
            }
            if ok(p, known) {
                rec(idx + 1, cells, allowed, commutative, p, known, ok, found);
            }
            known[i][j] = false;
            if commutative {
                known[j][i] = false;
            }
        }
    }
    rec(
        0,
        &cells,
        &allowed,
        commutative,
        &mut p,
        &mut known,
        &ok,
        found,
    );
}

fn ring_from_products(a: &Additive, p: &[Vec<usize>]) -> FiniteAlgebra {
    let n = a.size();
    FiniteAlgebra::ring_from_fn(n, |x, y| a.add(x, y), |x, y| a.mul(p, x, y))
        .expect("bilinear associative products give a ring")
}

fn dedupe(
    rings: impl IntoIterator<Item = FiniteAlgebra>,
    seen: &mut BTreeSet<Vec<Vec<u32>>>,
    out: &mut Vec<Arc<FiniteAlgebra>>,
) {
    for r in rings {
        let key = canonical_form(&r, DEFAULT_CANONICAL_BOUND).expect("small");
        if seen.insert(key) {
            out.push(Arc::new(r));
        }
    }
}

/// Every ring of order `n` up to isomorphism (commutative ones only if
/// asked). Exhaustive; intended for `n ≤ 8`.
pub fn rings_of_order(n: usize, commutative: bool) -> Vec<Arc<FiniteAlgebra>> {
    if n == 1 {
        return vec![Arc::new(FiniteAlgebra::trivial(Signature::Ring))];
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for orders in additive_types(n) {
        let a = Additive { orders };
        let mut batch = Vec::new();
        multiplications(&a, commutative, &mut |p| {
            batch.push(ring_from_products(&a, p))
        });
        dedupe(batch, &mut seen, &mut out);
    }
    out
}

/// `R[x]/(f)` for a monic `f` given by its lower coefficients
/// `f = x^d + c_{d−1}x^{d−1} + … + c₀` over `Z/q`.
fn polynomial_quotient(q: usize, lower: &[usize]) -> FiniteAlgebra {
    let d = lower.len();
    let n = q.pow(d as u32);
    let digits = |mut x: usize| {
        let mut v = vec![0usize; d];
        for c in v.iter_mut() {
            *c = x % q;
            x /= q;
        }
        v
    };
    let code = |v: &[usize]| v.iter().rev().fold(0, |acc, &c| acc * q + c % q);
    let mul = |x: usize, y: usize| {
        let (a, b) = (digits(x), digits(y));
        let mut prod = vec![0usize; 2 * d];
        for i in 0..d {
            for j in 0..d {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % q;
            }
        }
        for k in (d..2 * d).rev() {
            let c = prod[k];
            if c != 0 {
                prod[k] = 0;
                for (t, &l) in lower.iter().enumerate() {
                    prod[k - d + t] = (prod[k - d + t] + q * q - (c * l) % q) % q;
                }
            }
        }
        code(&prod[..d])
    };
    let add = |x: usize, y: usize| {
        let s: Vec<usize> = digits(x)
            .iter()
            .zip(digits(y))
            .map(|(a, b)| a + b)
            .collect();
        code(&s)
    };
    FiniteAlgebra::ring_from_fn(n, add, mul).expect("polynomial quotient ring")
}

/// Largest order for which commutative rings are enumerated exhaustively.
/// Order 16 is exact too, but takes minutes.
pub const EXHAUSTIVE_COMMUTATIVE: usize = 15;

/// Commutative rings of order `16..=max` built from `Z/n`,
/// polynomial quotients `Z/q[x]/(f)`, zero rings, products of smaller
/// commutative rings, and ideals of all of these viewed as rings.
pub fn extra_commutative_rings(
    small: &[Arc<FiniteAlgebra>],
    max: usize,
) -> Vec<Arc<FiniteAlgebra>> {
    let mut cands: Vec<FiniteAlgebra> = Vec::new();
    let lo = EXHAUSTIVE_COMMUTATIVE + 1;
    for n in lo..=max {
        cands.push((*super::named::zmod_ring(n)).clone());
        for orders in additive_types(n) {
            let a = Additive { orders };
            let r = a.orders.len();
            cands.push(ring_from_products(&a, &vec![vec![0; r]; r]));
        }
    }
    for q in [2usize, 3, 4] {
        for d in 2..=4u32 {
            if q.pow(d) > max || q.pow(d) < lo {
                continue;
            }
            let total = q.pow(d);
            for code in 0..total {
                let lower: Vec<usize> = (0..d as usize)
                    .map(|t| (code / q.pow(t as u32)) % q)
                    .collect();
                cands.push(polynomial_quotient(q, &lower));
            }
        }
    }
    for (i, a) in small.iter().enumerate() {
        for b in &small[i..] {
            let s = a.size() * b.size();
            if (lo..=max).contains(&s) {
                cands.push(a.product(b).expect("rings"));
            }
        }
    }
    let mut with_ideals = Vec::new();
    for r in &cands {
        let r = Arc::new(r.clone());
        for i in all_normal_subobjects(&r) {
            let (sub, _) = i.to_algebra();
            if (lo..=max).contains(&sub.size()) {
                with_ideals.push((*sub).clone());
            }
            let (q, _) = quotient(&r, &i).expect("ideal");
            if (lo..=max).contains(&q.size()) {
                with_ideals.push((*q).clone());
            }
        }
    }
    cands.extend(with_ideals);
    cands.sort_by_key(|r| r.size());
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    dedupe(
        cands.into_iter().filter(|r| r.is_commutative()),
        &mut seen,
        &mut out,
    );
    out
}
