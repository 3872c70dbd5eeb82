//! Homomorphism search, isomorphism testing and canonical labels.
//!
//! Every search assigns images to a generating set and propagates them
//! through the tables, rejecting an assignment as soon as two products
//! disagree. When the propagation covers the whole domain every pair of
//! elements has been checked, so the result is a homomorphism.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::algebra::{relabel_table, FiniteAlgebra, Signature};
use super::morphism::{same, Morphism};
use super::normal::normal_closure;
use crate::{Error, FgAb, Result};

/// Largest carrier for which [`iso_type`] computes a canonical form rather
/// than a fingerprint.
pub const DEFAULT_CANONICAL_BOUND: usize = 32;

/// Above this size the generating set is chosen by element order instead of
/// by maximal span.
const GREEDY_SPAN_LIMIT: usize = 64;

/// Left powers `x, x∘x, x∘(x∘x), …` under the primary operation.
fn power(a: &FiniteAlgebra, x: usize, k: usize) -> usize {
    let mut p = 0;
    for _ in 0..k {
        p = a.op(0, x, p);
    }
    p
}

fn primary_order(a: &FiniteAlgebra, x: usize) -> usize {
    let mut p = x;
    let mut k = 1;
    while p != 0 {
        p = a.op(0, x, p);
        k += 1;
    }
    k
}

/// Pre-period and period of the multiplicative powers `x, x², …` of a ring
/// element.
fn mul_cycle(a: &FiniteAlgebra, x: usize) -> (usize, usize) {
    let mut seen = vec![usize::MAX; a.size()];
    let mut p = x;
    let mut k = 1;
    loop {
        if seen[p] != usize::MAX {
            return (seen[p], k - seen[p]);
        }
        seen[p] = k;
        p = a.mul(p, x);
        k += 1;
    }
}

fn mul_power(a: &FiniteAlgebra, x: usize, k: usize) -> usize {
    let mut p = x;
    for _ in 1..k {
        p = a.mul(p, x);
    }
    p
}

/// Isomorphism-invariant data attached to an element.
pub fn element_profile(a: &FiniteAlgebra, x: usize) -> [u32; 4] {
    let n = a.size();
    let order = primary_order(a, x) as u32;
    let commuting = (0..n).filter(|&y| a.mul(x, y) == a.mul(y, x)).count() as u32;
    match a.signature() {
        Signature::Group => {
            let square = primary_order(a, a.mul(x, x)) as u32;
            [order, square, commuting, 0]
        }
        Signature::Loop => {
            let square = primary_order(a, a.mul(x, x)) as u32;
            let alt = (0..n)
                .filter(|&y| a.mul(a.mul(y, x), x) == a.mul(y, a.mul(x, x)))
                .count();
            [order, square, commuting, alt as u32]
        }
        Signature::Ring => {
            let (pre, per) = mul_cycle(a, x);
            let annihilated = (0..n).filter(|&y| a.mul(x, y) == 0).count() as u32;
            [order, (pre * 256 + per) as u32, commuting, annihilated]
        }
    }
}

/// Whether `y` satisfies every relation a homomorphism must carry over from
/// `x` that the profile records: the primary order and the multiplicative
/// cycle.
fn compatible_image(a: &FiniteAlgebra, x: usize, b: &FiniteAlgebra, y: usize) -> bool {
    if power(b, y, primary_order(a, x)) != 0 {
        return false;
    }
    if a.signature() == Signature::Ring {
        let (pre, per) = mul_cycle(a, x);
        if mul_power(b, y, pre + per) != mul_power(b, y, pre) {
            return false;
        }
    }
    true
}

/// A generating set chosen greedily: each step adds the element enlarging
/// the generated subalgebra most (ties to the smallest index).
pub fn generators(a: &FiniteAlgebra) -> Vec<usize> {
    let n = a.size();
    let mut gens = Vec::new();
    let mut span = a.generated(&[]);
    if n > GREEDY_SPAN_LIMIT {
        let mut order: Vec<usize> = (1..n).collect();
        let ords: Vec<usize> = (0..n).map(|x| primary_order(a, x)).collect();
        order.sort_by(|&x, &y| ords[y].cmp(&ords[x]).then(x.cmp(&y)));
        for x in order {
            if !span[x] {
                gens.push(x);
                span = a.generated(&gens);
            }
        }
        return gens;
    }
    while span.iter().any(|&b| !b) {
        let mut best = (0usize, 0usize, Vec::new());
        for x in (1..n).filter(|&x| !span[x]) {
            let mut trial = gens.clone();
            trial.push(x);
            let s = a.generated(&trial);
            let count = s.iter().filter(|&&b| b).count();
            if count > best.0 {
                best = (count, x, s);
            }
        }
        gens.push(best.1);
        span = best.2;
    }
    gens
}

struct State {
    img: Vec<u32>,
    used: Vec<bool>,
    members: Vec<usize>,
    processed: usize,
}

struct Search<'a> {
    dom: &'a FiniteAlgebra,
    cod: &'a FiniteAlgebra,
    gens: Vec<usize>,
    cands: Vec<Vec<usize>>,
    injective: bool,
    limit: usize,
    found: Vec<Vec<u32>>,
}

impl Search<'_> {
    fn set(&self, st: &mut State, x: usize, y: usize) -> bool {
        if st.img[x] != u32::MAX {
            return st.img[x] as usize == y;
        }
        if self.injective {
            if st.used[y] {
                return false;
            }
            st.used[y] = true;
        }
        st.img[x] = y as u32;
        st.members.push(x);
        true
    }

    /// Propagates images through every pair of members not yet combined.
    fn propagate(&self, st: &mut State) -> bool {
        let ops = self.dom.signature().basic_ops();
        while st.processed < st.members.len() {
            let i = st.processed;
            let x = st.members[i];
            for j in 0..=i {
                let z = st.members[j];
                for t in 0..ops {
                    let (ix, iz) = (st.img[x] as usize, st.img[z] as usize);
                    if !self.set(st, self.dom.op(t, x, z), self.cod.op(t, ix, iz)) {
                        return false;
                    }
                    if !self.set(st, self.dom.op(t, z, x), self.cod.op(t, iz, ix)) {
                        return false;
                    }
                }
            }
            st.processed += 1;
        }
        true
    }

    fn run(&mut self, depth: usize, st: State) {
        if self.found.len() >= self.limit {
            return;
        }
        if depth == self.gens.len() {
            debug_assert!(st.members.len() == self.dom.size());
            self.found.push(st.img);
            return;
        }
        let g = self.gens[depth];
        for k in 0..self.cands[depth].len() {
            let y = self.cands[depth][k];
            let mut next = State {
                img: st.img.clone(),
                used: st.used.clone(),
                members: st.members.clone(),
                processed: st.processed,
            };
            if self.set(&mut next, g, y) && self.propagate(&mut next) {
                self.run(depth + 1, next);
                if self.found.len() >= self.limit {
                    return;
                }
            }
        }
    }
}

fn search(
    dom: &FiniteAlgebra,
    cod: &FiniteAlgebra,
    cand: impl Fn(usize) -> Vec<usize>,
    injective: bool,
    limit: usize,
) -> Vec<Vec<u32>> {
    if dom.signature() != cod.signature() {
        return Vec::new();
    }
    let gens = generators(dom);
    let cands = gens.iter().map(|&g| cand(g)).collect();
    let mut s = Search {
        dom,
        cod,
        gens,
        cands,
        injective,
        limit,
        found: Vec::new(),
    };
    let mut st = State {
        img: vec![u32::MAX; dom.size()],
        used: vec![false; cod.size()],
        members: Vec::new(),
        processed: 0,
    };
    if s.set(&mut st, 0, 0) && s.propagate(&mut st) {
        s.run(0, st);
    }
    s.found
}

/// All homomorphisms `a → b`, at most `limit` of them, in the order of the
/// search (lexicographic in the images of [`generators`]).
pub fn homomorphisms(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
    limit: usize,
) -> Vec<Morphism> {
    search(
        a,
        b,
        |x| {
            (0..b.size())
                .filter(|&y| compatible_image(a, x, b, y))
                .collect()
        },
        false,
        limit,
    )
    .into_iter()
    .map(|m| Morphism::new_unchecked(a.clone(), b.clone(), m))
    .collect()
}

fn profile_multiset(a: &FiniteAlgebra) -> BTreeMap<[u32; 4], usize> {
    let mut m = BTreeMap::new();
    for x in 0..a.size() {
        *m.entry(element_profile(a, x)).or_insert(0) += 1;
    }
    m
}

pub fn find_isomorphism(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> Option<Morphism> {
    if a.signature() != b.signature() || a.size() != b.size() {
        return None;
    }
    if same(a, b) {
        return Some(Morphism::identity(a).with_cod(b.clone()));
    }
    if profile_multiset(a) != profile_multiset(b) {
        return None;
    }
    let pb: Vec<[u32; 4]> = (0..b.size()).map(|y| element_profile(b, y)).collect();
    let found = search(
        a,
        b,
        |x| {
            let p = element_profile(a, x);
            (0..b.size()).filter(|&y| pb[y] == p).collect()
        },
        true,
        1,
    );
    found
        .into_iter()
        .next()
        .map(|m| Morphism::new_unchecked(a.clone(), b.clone(), m))
}

/// A homomorphism `s` with `f ∘ s = id`, if one exists.
pub fn find_section(f: &Morphism) -> Option<Morphism> {
    let (a, b) = (f.dom(), f.cod());
    let mut fibres = vec![Vec::new(); b.size()];
    for x in 0..a.size() {
        fibres[f.apply(x)].push(x);
    }
    search(b, a, |y| fibres[y].clone(), false, 1)
        .into_iter()
        .next()
        .map(|m| Morphism::new_unchecked(b.clone(), a.clone(), m))
}

/// Morphisms `u: E → E'` with `p' ∘ u = p`, at most `limit` of them.
pub fn factorizations(p: &Morphism, p_prime: &Morphism, limit: usize) -> Vec<Morphism> {
    if !same(p.cod(), p_prime.cod()) {
        return Vec::new();
    }
    let (e, e2) = (p.dom(), p_prime.dom());
    let mut fibres = vec![Vec::new(); p.cod().size()];
    for x in 0..e2.size() {
        fibres[p_prime.apply(x)].push(x);
    }
    search(e, e2, |x| fibres[p.apply(x)].clone(), false, limit)
        .into_iter()
        .map(|m| Morphism::new_unchecked(e.clone(), e2.clone(), m))
        .collect()
}

/// Relabels by breadth-first generation from the tuple: the point gets `0`,
/// the tuple `1..=d`, and every further element the next free label in the
/// order products are first met.
fn bfs_labelling(a: &FiniteAlgebra, tuple: &[usize]) -> Vec<u32> {
    let n = a.size();
    let mut label = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(n);
    label[0] = 0;
    order.push(0);
    for &x in tuple {
        if label[x] == u32::MAX {
            label[x] = order.len() as u32;
            order.push(x);
        }
    }
    let ops = a.signature().basic_ops();
    let mut i = 0;
    while i < order.len() {
        for j in 0..=i {
            for t in 0..ops {
                for c in [a.op(t, order[i], order[j]), a.op(t, order[j], order[i])] {
                    if label[c] == u32::MAX {
                        label[c] = order.len() as u32;
                        order.push(c);
                    }
                }
            }
        }
        i += 1;
    }
    label
}

fn combinations(n: usize, d: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(
        start: usize,
        n: usize,
        d: usize,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if cur.len() == d {
            visit(cur);
            return;
        }
        for x in start..n {
            if n - x < d - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, d, cur, visit);
            cur.pop();
        }
    }
    rec(1, n, d, &mut Vec::new(), &mut visit);
}

fn permutations(items: &[usize], mut visit: impl FnMut(&[usize])) {
    fn rec(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            rec(items, k + 1, visit);
            items.swap(k, i);
        }
    }
    rec(&mut items.to_vec(), 0, &mut visit);
}

/// A canonical form of `a`: isomorphic algebras, and only those, get equal
/// tables.
///
/// Among all generating tuples of minimal length, only those whose sequence
/// of element profiles is lexicographically least are considered; each one
/// induces a breadth-first relabelling, and the least relabelled table wins.
pub fn canonical_form(a: &FiniteAlgebra, bound: usize) -> Result<Vec<Vec<u32>>> {
    let n = a.size();
    if n > bound {
        return Err(Error::TooLarge { size: n, bound });
    }
    if n == 1 {
        return Ok(a.basic_tables().to_vec());
    }
    let profiles: Vec<[u32; 4]> = (0..n).map(|x| element_profile(a, x)).collect();
    let mut gen_sets: Vec<Vec<usize>> = Vec::new();
    let mut d = 1;
    while gen_sets.is_empty() {
        combinations(n, d, |c| {
            if a.generated(c).iter().all(|&b| b) {
                gen_sets.push(c.to_vec());
            }
        });
        d += 1;
    }
    let mut best_profile: Option<Vec<[u32; 4]>> = None;
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    for set in &gen_sets {
        permutations(set, |t| {
            let p: Vec<[u32; 4]> = t.iter().map(|&x| profiles[x]).collect();
            match &best_profile {
                Some(b) if p > *b => {}
                Some(b) if p == *b => tuples.push(t.to_vec()),
                _ => {
                    best_profile = Some(p);
                    tuples.clear();
                    tuples.push(t.to_vec());
                }
            }
        });
    }
    let mut best: Option<Vec<Vec<u32>>> = None;
    for t in &tuples {
        let perm = bfs_labelling(a, t);
        let tables: Vec<Vec<u32>> = a
            .basic_tables()
            .iter()
            .map(|tb| relabel_table(tb, n, &perm))
            .collect();
        if best.as_ref().map_or(true, |b| tables < *b) {
            best = Some(tables);
        }
    }
    Ok(best.expect("a generating tuple exists"))
}

/// A label identifying the isomorphism class: exact below the canonical
/// bound, an invariant fingerprint above it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IsoType {
    Canonical {
        signature: Signature,
        size: usize,
        hash: u64,
    },
    Fingerprint {
        signature: Signature,
        size: usize,
        hash: u64,
    },
}

impl fmt::Display for IsoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoType::Canonical {
                signature,
                size,
                hash,
            } => {
                write!(f, "{signature}{size}:c{hash:016x}")
            }
            IsoType::Fingerprint {
                signature,
                size,
                hash,
            } => {
                write!(f, "{signature}{size}:f{hash:016x}")
            }
        }
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn word(&mut self, w: u64) {
        for byte in w.to_le_bytes() {
            self.0 ^= byte as u64;
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }
}

pub fn iso_type(a: &FiniteAlgebra) -> IsoType {
    match canonical_form(a, DEFAULT_CANONICAL_BOUND) {
        Ok(tables) => {
            let mut h = Fnv::new();
            for t in &tables {
                for &v in t {
                    h.word(v as u64);
                }
            }
            IsoType::Canonical {
                signature: a.signature(),
                size: a.size(),
                hash: h.0,
            }
        }
        Err(_) => IsoType::Fingerprint {
            signature: a.signature(),
            size: a.size(),
            hash: fingerprint(a),
        },
    }
}

/// Hash of the element-profile multiset, the centre size and, for groups,
/// the sizes of the derived series.
pub fn fingerprint(a: &FiniteAlgebra) -> u64 {
    let mut h = Fnv::new();
    for (p, count) in profile_multiset(a) {
        for v in p {
            h.word(v as u64);
        }
        h.word(count as u64);
    }
    let n = a.size();
    let centre = (0..n)
        .filter(|&x| (0..n).all(|y| a.mul(x, y) == a.mul(y, x)))
        .count();
    h.word(centre as u64);
    if a.signature() == Signature::Group {
        let mut g = Arc::new(a.clone());
        loop {
            let comms: Vec<usize> = (0..g.size())
                .flat_map(|x| {
                    let g = &g;
                    (0..g.size()).map(move |y| g.ldiv(g.mul(y, x), g.mul(x, y)))
                })
                .collect();
            let d = normal_closure(&g, &comms);
            h.word(d.len() as u64);
            if d.len() == g.size() || d.len() == 1 {
                break;
            }
            g = d.to_algebra().0;
        }
    }
    h.0
}

/// The invariant factors of an abelian group table, read off from the
/// number of elements killed by each prime power.
pub fn abelian_structure(a: &FiniteAlgebra) -> FgAb {
    let n = a.size();
    let mut orders = Vec::new();
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            // s[k] = log_p #{x : p^k x = 0}
            let mut s = vec![0usize];
            let mut q = 1;
            loop {
                q *= p;
                let count = (0..n).filter(|&x| power(a, x, q) == 0).count();
                let mut e = 0;
                let mut c = count;
                while c > 1 {
                    c /= p;
                    e += 1;
                }
                if e == *s.last().expect("nonempty") {
                    break;
                }
                s.push(e);
            }
            // Factors of order ≥ p^k: s[k] - s[k-1].
            let top = s.len() - 1;
            for k in 1..=top {
                let at_least_k = s[k] - s[k - 1];
                let at_least_next = if k < top { s[k + 1] - s[k] } else { 0 };
                for _ in 0..(at_least_k - at_least_next) {
                    orders.push((p as i128).pow(k as u32));
                }
            }
        }
        p += 1;
    }
    FgAb::finite(&orders)
}

/// A short human-readable name: the invariant factors for abelian groups,
/// otherwise the signature, order and (for rings) additive group.
pub fn describe(a: &FiniteAlgebra) -> String {
    match a.signature() {
        Signature::Group if a.is_commutative() => format!("{}", abelian_structure(a)),
        Signature::Group => format!("nonabelian group of order {}", a.size()),
        Signature::Loop if a.is_associative() => {
            format!("loop of order {} (associative)", a.size())
        }
        Signature::Loop => format!("loop of order {}", a.size()),
        Signature::Ring => {
            let additive = FiniteAlgebra::assemble(
                Signature::Group,
                a.size(),
                vec![a.basic_tables()[0].clone()],
            );
            let kind = if a.is_commutative() {
                "commutative ring"
            } else {
                "ring"
            };
            format!("{kind} on {}", abelian_structure(&additive))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::named;

    #[test]
    fn z4_and_klein_are_not_isomorphic() {
        assert!(find_isomorphism(&named::cyclic(4), &named::klein4()).is_none());
    }

    #[test]
    fn an_algebra_is_isomorphic_to_itself() {
        let q8 = named::quaternion8();
        let f = find_isomorphism(&q8, &q8).unwrap();
        assert_eq!(f, Morphism::identity(&q8));
    }

    #[test]
    fn crt_isomorphism_is_found() {
        let z6 = named::cyclic(6);
        let z2z3 = Arc::new(named::cyclic(2).product(&named::cyclic(3)).unwrap());
        let f = find_isomorphism(&z6, &z2z3).unwrap();
        assert!(f.is_isomorphism());
        assert!(Morphism::new(z6, z2z3, f.map().to_vec()).is_ok());
    }

    #[test]
    fn relabelled_copies_share_a_canonical_form() {
        let q8 = named::quaternion8();
        let perm: Vec<u32> = vec![0, 3, 1, 2, 7, 4, 6, 5];
        let copy = q8.relabel(&perm);
        assert_eq!(iso_type(&q8), iso_type(&copy));
        assert_ne!(iso_type(&q8), iso_type(&named::dihedral(4)));
    }

    #[test]
    fn canonical_form_respects_its_bound() {
        let z = named::cyclic(12);
        assert_eq!(
            canonical_form(&z, 10),
            Err(Error::TooLarge {
                size: 12,
                bound: 10
            })
        );
    }

    #[test]
    fn counting_homomorphisms() {
        let z4 = named::cyclic(4);
        let z2 = named::cyclic(2);
        assert_eq!(homomorphisms(&z4, &z2, usize::MAX).len(), 2);
        assert_eq!(homomorphisms(&z2, &z4, usize::MAX).len(), 2);
        let v = named::klein4();
        // Aut(V) ≅ S₃ plus the non-injective endomorphisms: 16 in total.
        assert_eq!(homomorphisms(&v, &v, usize::MAX).len(), 16);
        let s3 = named::symmetric3();
        assert_eq!(homomorphisms(&s3, &s3, usize::MAX).len(), 10);
    }

    #[test]
    fn ring_homomorphisms_respect_multiplication() {
        let z4 = named::zmod_ring(4);
        let z2 = named::zmod_ring(2);
        // Only the zero map and reduction mod 2.
        assert_eq!(homomorphisms(&z4, &z2, usize::MAX).len(), 2);
        // Z/2 → Z/4: x ↦ 2x fails 1·1 = 1; only zero.
        assert_eq!(homomorphisms(&z2, &z4, usize::MAX).len(), 1);
    }

    #[test]
    fn sections_of_sign_and_of_z4() {
        assert!(find_section(&named::sign_map()).is_some());
        let z4 = named::cyclic(4);
        let z2 = named::cyclic(2);
        let f = Morphism::new(z4, z2, vec![0, 1, 0, 1]).unwrap();
        assert!(find_section(&f).is_none());
    }

    #[test]
    fn descriptions() {
        assert_eq!(describe(&named::klein4()), "Z/2 x Z/2");
        assert_eq!(describe(&named::cyclic(12)), "Z/12");
        assert_eq!(describe(&named::cyclic(1)), "0");
        assert_eq!(
            describe(&named::symmetric3()),
            "nonabelian group of order 6"
        );
    }

    #[test]
    fn generating_sets_are_small() {
        assert_eq!(generators(&named::cyclic(12)).len(), 1);
        assert_eq!(generators(&named::quaternion8()).len(), 2);
    }
}
