//! Normal subobjects: kernels of surjections.
//!
//! Normality is decided per signature: conjugation-invariant subgroups, two
//! sided ideals, and for loops subloops satisfying the three displacement
//! conditions `x·K = K·x`, `(x·K)·y = x·(K·y)`, `x·(y·K) = (x·y)·K`.
//! [`congruence_closure`] computes the same objects through congruence
//! generation and serves as an independent check of those conditions.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::algebra::{FiniteAlgebra, Signature};
use super::morphism::{same, Morphism};
use crate::{Error, Result};

/// A subset of an algebra that is the kernel of some surjection out of it.
#[derive(Clone, Debug)]
pub struct NormalSubobject {
    ambient: Arc<FiniteAlgebra>,
    mask: Vec<bool>,
}

impl PartialEq for NormalSubobject {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask && same(&self.ambient, &other.ambient)
    }
}

impl Eq for NormalSubobject {}

impl NormalSubobject {
    pub fn new(ambient: Arc<FiniteAlgebra>, elements: &[usize]) -> Result<Self> {
        let mut mask = vec![false; ambient.size()];
        for &x in elements {
            if x >= ambient.size() {
                return Err(Error::Malformed(alloc::format!("element {x} out of range")));
            }
            mask[x] = true;
        }
        Self::from_mask(ambient, mask)
    }

    pub fn from_mask(ambient: Arc<FiniteAlgebra>, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != ambient.size() || !is_normal(&ambient, &mask) {
            return Err(Error::NotNormal);
        }
        Ok(Self { ambient, mask })
    }

    pub(crate) fn from_mask_unchecked(ambient: Arc<FiniteAlgebra>, mask: Vec<bool>) -> Self {
        debug_assert!(is_normal(&ambient, &mask));
        Self { ambient, mask }
    }

    pub fn zero(ambient: &Arc<FiniteAlgebra>) -> Self {
        let mut mask = vec![false; ambient.size()];
        mask[0] = true;
        Self {
            ambient: ambient.clone(),
            mask,
        }
    }

    pub fn top(ambient: &Arc<FiniteAlgebra>) -> Self {
        Self {
            ambient: ambient.clone(),
            mask: vec![true; ambient.size()],
        }
    }

    pub fn ambient(&self) -> &Arc<FiniteAlgebra> {
        &self.ambient
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..self.mask.len()).filter(|&x| self.mask[x]).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_zero(&self) -> bool {
        self.len() == 1
    }

    pub fn is_top(&self) -> bool {
        self.mask.iter().all(|&b| b)
    }

    pub fn is_subset(&self, other: &NormalSubobject) -> bool {
        self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b)
    }

    /// The subobject as an algebra in its own right, with its embedding.
    pub fn to_algebra(&self) -> (Arc<FiniteAlgebra>, Morphism) {
        let (sub, embed) = self
            .ambient
            .subalgebra(&self.mask)
            .expect("normal subobjects are subalgebras");
        let sub = Arc::new(sub);
        let emb = Morphism::new_unchecked(sub.clone(), self.ambient.clone(), embed);
        (sub, emb)
    }
}

/// Signature-specific normality test.
pub fn is_normal(a: &FiniteAlgebra, mask: &[bool]) -> bool {
    if mask.len() != a.size() || !a.is_subalgebra(mask) {
        return false;
    }
    let n = a.size();
    let members: Vec<usize> = (0..n).filter(|&x| mask[x]).collect();
    match a.signature() {
        Signature::Group => (0..n).all(|x| {
            let xi = a.neg(x);
            members.iter().all(|&k| mask[a.mul(a.mul(x, k), xi)])
        }),
        Signature::Ring => (0..n).all(|x| {
            members
                .iter()
                .all(|&k| mask[a.mul(x, k)] && mask[a.mul(k, x)])
        }),
        Signature::Loop => loop_displacement_conditions(a, &members),
    }
}

fn loop_displacement_conditions(a: &FiniteAlgebra, members: &[usize]) -> bool {
    let n = a.size();
    let set_of = |f: &dyn Fn(usize) -> usize| {
        let mut s = vec![false; n];
        for &k in members {
            s[f(k)] = true;
        }
        s
    };
    for x in 0..n {
        if set_of(&|k| a.mul(x, k)) != set_of(&|k| a.mul(k, x)) {
            return false;
        }
        for y in 0..n {
            let xy = a.mul(x, y);
            if set_of(&|k| a.mul(a.mul(x, k), y)) != set_of(&|k| a.mul(x, a.mul(k, y))) {
                return false;
            }
            if set_of(&|k| a.mul(x, a.mul(y, k))) != set_of(&|k| a.mul(xy, k)) {
                return false;
            }
        }
    }
    true
}

/// The smallest normal subobject containing `seeds`, by saturation.
///
/// Groups saturate under products and conjugation, rings under sums and
/// two-sided absorption, loops under products and the inner mappings
/// `T_x`, `L_{x,y}`, `R_{x,y}`.
pub fn normal_closure(a: &Arc<FiniteAlgebra>, seeds: &[usize]) -> NormalSubobject {
    let n = a.size();
    let mut mask = vec![false; n];
    let mut members = Vec::new();
    let push = |x: usize, mask: &mut Vec<bool>, members: &mut Vec<usize>| {
        if !mask[x] {
            mask[x] = true;
            members.push(x);
        }
    };
    push(0, &mut mask, &mut members);
    for &s in seeds {
        push(s, &mut mask, &mut members);
    }
    let mut i = 0;
    while i < members.len() {
        let k = members[i];
        // Products with every earlier member, both orders.
        for j in 0..=i {
            let m = members[j];
            for t in 0..a.signature().basic_ops() {
                push(a.op(t, k, m), &mut mask, &mut members);
                push(a.op(t, m, k), &mut mask, &mut members);
            }
        }
        match a.signature() {
            Signature::Group => {
                for x in 0..n {
                    push(a.mul(a.mul(x, k), a.neg(x)), &mut mask, &mut members);
                }
            }
            Signature::Ring => {
                for x in 0..n {
                    push(a.mul(x, k), &mut mask, &mut members);
                    push(a.mul(k, x), &mut mask, &mut members);
                }
            }
            Signature::Loop => {
                for x in 0..n {
                    push(a.ldiv(x, a.mul(k, x)), &mut mask, &mut members);
                    push(a.rdiv(a.mul(x, k), x), &mut mask, &mut members);
                    for y in 0..n {
                        let l = a.ldiv(a.mul(y, x), a.mul(y, a.mul(x, k)));
                        push(l, &mut mask, &mut members);
                        let r = a.rdiv(a.mul(a.mul(k, x), y), a.mul(x, y));
                        push(r, &mut mask, &mut members);
                    }
                }
            }
        }
        i += 1;
    }
    NormalSubobject::from_mask_unchecked(a.clone(), mask)
}

/// The class of `0` in the congruence generated by `{(s, 0) : s ∈ seeds}`.
///
/// This is congruence generation by union-find, propagating every merged
/// pair through all left and right translations of all tables (divisions
/// included). It does not use any of the signature-specific normality
/// conditions.
pub fn congruence_closure(a: &FiniteAlgebra, seeds: &[usize]) -> Vec<bool> {
    let n = a.size();
    let mut uf = UnionFind::new(n);
    let mut pending: Vec<(usize, usize)> = seeds.iter().map(|&s| (s, 0)).collect();
    while let Some((x, y)) = pending.pop() {
        if !uf.union(x, y) {
            continue;
        }
        for t in a.all_tables().iter().enumerate().map(|(t, _)| t) {
            for z in 0..n {
                pending.push((a.op(t, z, x), a.op(t, z, y)));
                pending.push((a.op(t, x, z), a.op(t, y, z)));
            }
        }
    }
    let root = uf.find(0);
    (0..n).map(|x| uf.find(x) == root).collect()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns whether the classes were distinct.
    pub(crate) fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.parent[hi] = lo;
        true
    }
}

/// Builds the quotient algebra for a partition of the carrier given by class
/// ids (`class[0]` must be `0`), verifying that every table is well defined
/// on classes.
pub(crate) fn quotient_by_partition(
    a: &Arc<FiniteAlgebra>,
    class: &[u32],
    count: usize,
) -> Result<(Arc<FiniteAlgebra>, Morphism)> {
    let n = a.size();
    debug_assert_eq!(class[0], 0);
    let mut rep = vec![usize::MAX; count];
    for x in (0..n).rev() {
        rep[class[x] as usize] = x;
    }
    let mut tables = Vec::new();
    for t in 0..a.all_tables().len() {
        let mut out = vec![0u32; count * count];
        for ca in 0..count {
            for cb in 0..count {
                out[ca * count + cb] = class[a.op(t, rep[ca], rep[cb])];
            }
        }
        for x in 0..n {
            for y in 0..n {
                if class[a.op(t, x, y)] != out[class[x] as usize * count + class[y] as usize] {
                    return Err(Error::NotNormal);
                }
            }
        }
        tables.push(out);
    }
    tables.truncate(a.signature().basic_ops());
    let q = Arc::new(FiniteAlgebra::assemble(a.signature(), count, tables));
    let map = Morphism::new_unchecked(a.clone(), q.clone(), class.to_vec());
    Ok((q, map))
}

/// `A/N` with the canonical surjection. Classes are numbered by their least
/// element, so the class of `0` is `0`.
pub fn quotient(
    a: &Arc<FiniteAlgebra>,
    n: &NormalSubobject,
) -> Result<(Arc<FiniteAlgebra>, Morphism)> {
    if !same(a, &n.ambient) {
        return Err(Error::Malformed("subobject of a different algebra".into()));
    }
    let size = a.size();
    let mut class = vec![u32::MAX; size];
    let mut count = 0usize;
    for x in 0..size {
        if class[x] != u32::MAX {
            continue;
        }
        for y in x..size {
            if class[y] == u32::MAX && n.mask[a.ldiv(x, y)] {
                class[y] = count as u32;
            }
        }
        count += 1;
    }
    let zero_class: Vec<bool> = class.iter().map(|&c| c == 0).collect();
    if zero_class != n.mask {
        return Err(Error::NotNormal);
    }
    quotient_by_partition(a, &class, count)
}

pub fn kernel(f: &Morphism) -> NormalSubobject {
    NormalSubobject::from_mask_unchecked(f.dom().clone(), f.kernel_mask())
}

pub fn meet(n1: &NormalSubobject, n2: &NormalSubobject) -> Result<NormalSubobject> {
    if !same(&n1.ambient, &n2.ambient) {
        return Err(Error::Malformed("subobjects of different algebras".into()));
    }
    let mask = n1
        .mask
        .iter()
        .zip(&n2.mask)
        .map(|(&x, &y)| x && y)
        .collect();
    Ok(NormalSubobject::from_mask_unchecked(
        n1.ambient.clone(),
        mask,
    ))
}

pub fn join(n1: &NormalSubobject, n2: &NormalSubobject) -> Result<NormalSubobject> {
    if !same(&n1.ambient, &n2.ambient) {
        return Err(Error::Malformed("subobjects of different algebras".into()));
    }
    if n1.is_subset(n2) {
        return Ok(n2.clone());
    }
    if n2.is_subset(n1) {
        return Ok(n1.clone());
    }
    let mut seeds = n1.elements();
    seeds.extend(n2.elements());
    Ok(normal_closure(&n1.ambient, &seeds))
}

/// The pushout of the two quotient maps `A → A/N1` and `A → A/N2`, with its
/// diagonal `A → P`.
///
/// Computed as the quotient by the join of the two kernel congruences (the
/// transitive closure of their union), independently of [`join`].
pub fn pushout_of_quotients(
    n1: &NormalSubobject,
    n2: &NormalSubobject,
) -> Result<(Arc<FiniteAlgebra>, Morphism)> {
    let a = &n1.ambient;
    let size = a.size();
    let mut uf = UnionFind::new(size);
    for x in 0..size {
        for y in 0..size {
            let d = a.ldiv(x, y);
            if n1.mask[d] || n2.mask[d] {
                uf.union(x, y);
            }
        }
    }
    let mut ids = vec![u32::MAX; size];
    let mut class = vec![0u32; size];
    let mut count = 0u32;
    for x in 0..size {
        let r = uf.find(x);
        if ids[r] == u32::MAX {
            ids[r] = count;
            count += 1;
        }
        class[x] = ids[r];
    }
    quotient_by_partition(a, &class, count as usize)
}

/// `{f(x) : x ∈ N}` for a surjective `f`.
pub fn direct_image(f: &Morphism, n: &NormalSubobject) -> Result<NormalSubobject> {
    if !f.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let mut mask = vec![false; f.cod().size()];
    for x in n.elements() {
        mask[f.apply(x)] = true;
    }
    NormalSubobject::from_mask(f.cod().clone(), mask)
}

/// `{x : f(x) ∈ N}`.
pub fn preimage(f: &Morphism, n: &NormalSubobject) -> Result<NormalSubobject> {
    if !same(f.cod(), &n.ambient) {
        return Err(Error::Malformed("subobject of a different algebra".into()));
    }
    let mask = (0..f.dom().size()).map(|x| n.mask[f.apply(x)]).collect();
    Ok(NormalSubobject::from_mask_unchecked(f.dom().clone(), mask))
}

/// Every normal subobject of `a`, ordered by size and then by membership
/// mask (members first).
pub fn all_normal_subobjects(a: &Arc<FiniteAlgebra>) -> Vec<NormalSubobject> {
    let mut found: BTreeSet<Vec<bool>> = BTreeSet::new();
    let mut zero = vec![false; a.size()];
    zero[0] = true;
    found.insert(zero);
    let mut principal = Vec::new();
    for x in 1..a.size() {
        let c = normal_closure(a, &[x]);
        if found.insert(c.mask.clone()) {
            principal.push(c);
        }
    }
    // Every normal subobject is the join of the principal ones it contains.
    let mut frontier: Vec<NormalSubobject> = principal.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for p in &principal {
                if p.is_subset(f) {
                    continue;
                }
                let j = join(f, p).expect("same ambient");
                if found.insert(j.mask.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<NormalSubobject> = found
        .into_iter()
        .map(|mask| NormalSubobject::from_mask_unchecked(a.clone(), mask))
        .collect();
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| y.mask.cmp(&x.mask)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::named;

    #[test]
    fn kernel_of_reduction_mod_two() {
        let z4 = named::cyclic(4);
        let z2 = named::cyclic(2);
        let f = Morphism::new(z4.clone(), z2, vec![0, 1, 0, 1]).unwrap();
        assert_eq!(kernel(&f).elements(), vec![0, 2]);
        assert_eq!(kernel(&Morphism::identity(&z4)).elements(), vec![0]);
        assert!(kernel(&Morphism::to_trivial(&z4)).is_top());
    }

    #[test]
    fn quotient_of_z4_by_two() {
        let z4 = named::cyclic(4);
        let n = NormalSubobject::new(z4.clone(), &[0, 2]).unwrap();
        let (q, map) = quotient(&z4, &n).unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(map.map(), &[0, 1, 0, 1]);
        assert_eq!(kernel(&map), n);
    }

    #[test]
    fn s3_mod_a3_is_z2() {
        let s3 = named::symmetric3();
        let a3 = normal_closure(&s3, &[named::S3_ROTATION]);
        assert_eq!(a3.len(), 3);
        let (q, map) = quotient(&s3, &a3).unwrap();
        assert_eq!(q.size(), 2);
        assert!(map.is_surjective());
        assert_eq!(kernel(&map), a3);
    }

    #[test]
    fn z8_mod_even_ideal_is_f2() {
        let z8 = named::zmod_ring(8);
        let even = NormalSubobject::new(z8.clone(), &[0, 2, 4, 6]).unwrap();
        let (q, _) = quotient(&z8, &even).unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(q.mul(1, 1), 1);
        assert_eq!(q.add(1, 1), 0);
    }

    #[test]
    fn transposition_generates_s3() {
        let s3 = named::symmetric3();
        assert!(normal_closure(&s3, &[named::S3_TRANSPOSITION]).is_top());
        assert!(normal_closure(&s3, &[]).is_zero());
    }

    #[test]
    fn ideal_generated_by_two() {
        let z8 = named::zmod_ring(8);
        assert_eq!(normal_closure(&z8, &[2]).elements(), vec![0, 2, 4, 6]);
    }

    #[test]
    fn join_and_meet_in_z12() {
        let z12 = named::cyclic(12);
        let six = NormalSubobject::new(z12.clone(), &[0, 6]).unwrap();
        let four = NormalSubobject::new(z12.clone(), &[0, 4, 8]).unwrap();
        let j = join(&six, &four).unwrap();
        assert_eq!(j.elements(), vec![0, 2, 4, 6, 8, 10]);
        assert!(meet(&six, &four).unwrap().is_zero());
        assert_eq!(join(&six, &NormalSubobject::zero(&z12)).unwrap(), six);
    }

    #[test]
    fn subgroup_that_is_not_normal() {
        let s3 = named::symmetric3();
        let t = named::S3_TRANSPOSITION;
        assert!(matches!(
            NormalSubobject::new(s3.clone(), &[0, t]),
            Err(Error::NotNormal)
        ));
    }

    #[test]
    fn preimage_under_z12_to_z6() {
        let z12 = named::cyclic(12);
        let z6 = named::cyclic(6);
        let f = Morphism::new(z12, z6.clone(), (0..12).map(|x| (x % 6) as u32).collect()).unwrap();
        let n = NormalSubobject::new(z6.clone(), &[0, 3]).unwrap();
        assert_eq!(preimage(&f, &n).unwrap().elements(), vec![0, 3, 6, 9]);
        assert_eq!(
            preimage(&f, &NormalSubobject::zero(&z6)).unwrap(),
            kernel(&f)
        );
        assert!(preimage(&f, &NormalSubobject::top(&z6)).unwrap().is_top());
    }

    #[test]
    fn direct_image_of_a3_under_sign() {
        let s3 = named::symmetric3();
        let a3 = normal_closure(&s3, &[named::S3_ROTATION]);
        let (_, sign) = quotient(&s3, &a3).unwrap();
        assert!(direct_image(&sign, &a3).unwrap().is_zero());
        assert!(direct_image(&sign, &NormalSubobject::top(&s3))
            .unwrap()
            .is_top());
        let not_onto = Morphism::zero(&s3, sign.cod());
        assert_eq!(direct_image(&not_onto, &a3), Err(Error::NotSurjective));
    }

    #[test]
    fn normal_subobjects_of_small_groups() {
        assert_eq!(all_normal_subobjects(&named::symmetric3()).len(), 3);
        assert_eq!(all_normal_subobjects(&named::quaternion8()).len(), 6);
        assert_eq!(all_normal_subobjects(&named::klein4()).len(), 5);
        assert_eq!(all_normal_subobjects(&named::cyclic(12)).len(), 6);
    }

    #[test]
    fn trivial_algebra_is_its_own_everything() {
        let t = Arc::new(FiniteAlgebra::trivial(Signature::Loop));
        let z = NormalSubobject::zero(&t);
        assert!(z.is_top());
        let (q, map) = quotient(&t, &z).unwrap();
        assert_eq!(q.size(), 1);
        assert!(map.is_isomorphism());
        assert_eq!(all_normal_subobjects(&t).len(), 1);
    }

    #[test]
    fn pushout_diagonal_kernel_is_the_join() {
        let z12 = named::cyclic(12);
        let six = NormalSubobject::new(z12.clone(), &[0, 6]).unwrap();
        let four = NormalSubobject::new(z12.clone(), &[0, 4, 8]).unwrap();
        let (_, diag) = pushout_of_quotients(&six, &four).unwrap();
        assert_eq!(kernel(&diag), join(&six, &four).unwrap());
    }
}
