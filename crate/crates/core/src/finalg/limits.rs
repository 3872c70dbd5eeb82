use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::algebra::FiniteAlgebra;
use super::morphism::{same, Morphism};
use crate::{Error, Result};

/// `A ×_C B` with its two projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub algebra: Arc<FiniteAlgebra>,
    pub p1: Morphism,
    pub p2: Morphism,
    /// Index of the pair `(a, b)` in the pullback, or `u32::MAX` when
    /// `f(a) ≠ g(b)`; stored at `a * |B| + b`.
    index: Vec<u32>,
    width: usize,
}

impl Pullback {
    /// The element `(a, b)`, if it lies in the pullback.
    pub fn pair(&self, a: usize, b: usize) -> Option<usize> {
        match self.index[a * self.width + b] {
            u32::MAX => None,
            i => Some(i as usize),
        }
    }
}

/// The kernel pair `R[f] = A ×_B A` of `f: A → B` with the diagonal.
#[derive(Clone, Debug)]
pub struct KernelPair {
    pub algebra: Arc<FiniteAlgebra>,
    pub pi1: Morphism,
    pub pi2: Morphism,
    pub delta: Morphism,
    pullback: Pullback,
}

impl KernelPair {
    pub fn pair(&self, a: usize, b: usize) -> Option<usize> {
        self.pullback.pair(a, b)
    }

    pub fn as_pullback(&self) -> &Pullback {
        &self.pullback
    }
}

/// `{(a, b) : f(a) = g(b)}`, elements ordered lexicographically by pair.
pub fn pullback(f: &Morphism, g: &Morphism) -> Result<Pullback> {
    if !same(f.cod(), g.cod()) {
        return Err(Error::Malformed(
            "pullback of maps with different codomains".into(),
        ));
    }
    let (a, b) = (f.dom(), g.dom());
    let (n, m) = (a.size(), b.size());
    let mut index = vec![u32::MAX; n * m];
    let mut pairs = Vec::new();
    for x in 0..n {
        for y in 0..m {
            if f.apply(x) == g.apply(y) {
                index[x * m + y] = pairs.len() as u32;
                pairs.push((x, y));
            }
        }
    }
    let size = pairs.len();
    let tables = (0..a.signature().basic_ops())
        .map(|t| {
            let mut out = Vec::with_capacity(size * size);
            for &(x1, y1) in &pairs {
                for &(x2, y2) in &pairs {
                    out.push(index[a.op(t, x1, x2) * m + b.op(t, y1, y2)]);
                }
            }
            out
        })
        .collect();
    let p = Arc::new(FiniteAlgebra::assemble(a.signature(), size, tables));
    let p1 = Morphism::new_unchecked(
        p.clone(),
        a.clone(),
        pairs.iter().map(|&(x, _)| x as u32).collect(),
    );
    let p2 = Morphism::new_unchecked(
        p.clone(),
        b.clone(),
        pairs.iter().map(|&(_, y)| y as u32).collect(),
    );
    Ok(Pullback {
        algebra: p,
        p1,
        p2,
        index,
        width: m,
    })
}

pub fn kernel_pair(f: &Morphism) -> KernelPair {
    let pb = pullback(f, f).expect("a map and itself share a codomain");
    let a = f.dom();
    let delta = Morphism::new_unchecked(
        a.clone(),
        pb.algebra.clone(),
        (0..a.size())
            .map(|x| pb.pair(x, x).expect("diagonal") as u32)
            .collect(),
    );
    KernelPair {
        algebra: pb.algebra.clone(),
        pi1: pb.p1.clone(),
        pi2: pb.p2.clone(),
        delta,
        pullback: pb,
    }
}

/// The map `⟨u, v⟩: X → A ×_C B` induced by a commutative square, or `None`
/// if the square does not commute.
pub fn pullback_comparison(pb: &Pullback, u: &Morphism, v: &Morphism) -> Option<Morphism> {
    if !same(u.dom(), v.dom()) {
        return None;
    }
    let map = (0..u.dom().size())
        .map(|x| pb.pair(u.apply(x), v.apply(x)).map(|i| i as u32))
        .collect::<Option<Vec<u32>>>()?;
    Some(Morphism::new_unchecked(
        u.dom().clone(),
        pb.algebra.clone(),
        map,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::named;

    #[test]
    fn kernel_pair_sizes() {
        let z4 = named::cyclic(4);
        let z2 = named::cyclic(2);
        let f = Morphism::new(z4.clone(), z2, vec![0, 1, 0, 1]).unwrap();
        assert_eq!(kernel_pair(&f).algebra.size(), 8);
        let kp = kernel_pair(&Morphism::identity(&z4));
        assert_eq!(kp.algebra.size(), 4);
        assert!(kp.delta.is_isomorphism());
        let s3 = named::symmetric3();
        let sign = named::sign_map();
        assert!(same(sign.dom(), &s3));
        assert_eq!(kernel_pair(&sign).algebra.size(), 18);
    }

    #[test]
    fn kernel_pair_is_the_self_pullback() {
        let sign = named::sign_map();
        let kp = kernel_pair(&sign);
        let pb = pullback(&sign, &sign).unwrap();
        assert_eq!(*kp.algebra, *pb.algebra);
        assert_eq!(kp.pi1.map(), pb.p1.map());
        assert_eq!(kp.pi2.map(), pb.p2.map());
    }

    #[test]
    fn pullback_along_identity() {
        let sign = named::sign_map();
        let id = Morphism::identity(sign.cod());
        let pb = pullback(&sign, &id).unwrap();
        assert_eq!(pb.algebra.size(), sign.dom().size());
        assert!(pb.p1.is_isomorphism());
        assert_eq!(pb.p1.then(&sign).unwrap().map(), pb.p2.map());
    }

    #[test]
    fn pullback_over_the_point_is_the_product() {
        let z2 = named::cyclic(2);
        let z3 = named::cyclic(3);
        let pb = pullback(
            &Morphism::to_trivial(&z2),
            &Morphism::to_trivial(&z3).with_cod(Morphism::to_trivial(&z2).cod().clone()),
        )
        .unwrap();
        assert_eq!(pb.algebra.size(), 6);
        assert_eq!(*pb.algebra, z2.product(&z3).unwrap());
    }

    #[test]
    fn comparison_into_a_pullback() {
        let sign = named::sign_map();
        let kp = kernel_pair(&sign);
        let id = Morphism::identity(sign.dom());
        let d = pullback_comparison(kp.as_pullback(), &id, &id).unwrap();
        assert_eq!(d, kp.delta);
    }
}
