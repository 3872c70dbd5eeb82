use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::algebra::FiniteAlgebra;
use crate::{Error, Result};

/// A homomorphism between two algebras of the same signature.
#[derive(Clone, Debug)]
pub struct Morphism {
    dom: Arc<FiniteAlgebra>,
    cod: Arc<FiniteAlgebra>,
    map: Vec<u32>,
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && same(&self.dom, &other.dom) && same(&self.cod, &other.cod)
    }
}

impl Eq for Morphism {}

pub(crate) fn same(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Morphism {
    /// Checks that `map` sends the point to the point and preserves every
    /// basic operation.
    pub fn new(dom: Arc<FiniteAlgebra>, cod: Arc<FiniteAlgebra>, map: Vec<u32>) -> Result<Self> {
        if dom.signature() != cod.signature() {
            return Err(Error::SignatureMismatch);
        }
        if map.len() != dom.size() {
            return Err(Error::Malformed(alloc::format!(
                "map has {} values for a domain of size {}",
                map.len(),
                dom.size()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&v| v as usize >= cod.size()) {
            return Err(Error::Malformed(alloc::format!(
                "map value {bad} outside the codomain"
            )));
        }
        if map[0] != 0 {
            return Err(Error::NotHomomorphism {
                op: "point",
                witness: [0, 0],
            });
        }
        let f = Self { dom, cod, map };
        f.check_preserves()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        dom: Arc<FiniteAlgebra>,
        cod: Arc<FiniteAlgebra>,
        map: Vec<u32>,
    ) -> Self {
        debug_assert_eq!(map.len(), dom.size());
        Self { dom, cod, map }
    }

    fn check_preserves(&self) -> Result<()> {
        let n = self.dom.size();
        for t in 0..self.dom.signature().basic_ops() {
            for a in 0..n {
                for b in 0..n {
                    let lhs = self.apply(self.dom.op(t, a, b));
                    let rhs = self.cod.op(t, self.apply(a), self.apply(b));
                    if lhs != rhs {
                        let op = match (self.dom.signature(), t) {
                            (crate::Signature::Ring, 0) => "+",
                            (crate::Signature::Ring, _) => "×",
                            _ => "·",
                        };
                        return Err(Error::NotHomomorphism {
                            op,
                            witness: [a, b],
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(a: &Arc<FiniteAlgebra>) -> Self {
        Self::new_unchecked(a.clone(), a.clone(), (0..a.size() as u32).collect())
    }

    pub fn zero(dom: &Arc<FiniteAlgebra>, cod: &Arc<FiniteAlgebra>) -> Self {
        Self::new_unchecked(dom.clone(), cod.clone(), vec![0; dom.size()])
    }

    /// The unique map to the one-element algebra.
    pub fn to_trivial(dom: &Arc<FiniteAlgebra>) -> Self {
        let t = Arc::new(FiniteAlgebra::trivial(dom.signature()));
        Self::zero(dom, &t)
    }

    pub fn dom(&self) -> &Arc<FiniteAlgebra> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FiniteAlgebra> {
        &self.cod
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Morphism) -> Result<Morphism> {
        if !same(&self.cod, &g.dom) {
            return Err(Error::Malformed(
                "composing morphisms with mismatched ends".into(),
            ));
        }
        let map = self.map.iter().map(|&x| g.map[x as usize]).collect();
        Ok(Self::new_unchecked(self.dom.clone(), g.cod.clone(), map))
    }

    /// Replaces the codomain by an equal algebra behind a different pointer.
    pub(crate) fn with_cod(mut self, cod: Arc<FiniteAlgebra>) -> Self {
        debug_assert!(*cod == *self.cod);
        self.cod = cod;
        self
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        self.map
            .iter()
            .all(|&y| !core::mem::replace(&mut seen[y as usize], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mask = self.image_mask();
        mask.iter().all(|&b| b)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.dom.size() == self.cod.size() && self.is_injective()
    }

    pub fn image_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.cod.size()];
        for &y in &self.map {
            mask[y as usize] = true;
        }
        mask
    }

    /// `{x : f(x) = 0}` as a mask on the domain.
    pub fn kernel_mask(&self) -> Vec<bool> {
        self.map.iter().map(|&y| y == 0).collect()
    }

    /// The inverse of a bijective morphism.
    pub fn inverse(&self) -> Result<Morphism> {
        if !self.is_isomorphism() {
            return Err(Error::Malformed("morphism is not bijective".into()));
        }
        let mut inv = vec![0u32; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Ok(Self::new_unchecked(self.cod.clone(), self.dom.clone(), inv))
    }

    /// Factors `self: A → C` through a surjection `q: A → B`, returning the
    /// unique `h: B → C` with `h ∘ q = self`, or `None` if `self` is not
    /// constant on the fibres of `q`.
    pub fn factor_through(&self, q: &Morphism) -> Option<Morphism> {
        if !same(&self.dom, &q.dom) {
            return None;
        }
        let mut h = vec![u32::MAX; q.cod.size()];
        for x in 0..self.dom.size() {
            let slot = &mut h[q.apply(x)];
            if *slot == u32::MAX {
                *slot = self.map[x];
            } else if *slot != self.map[x] {
                return None;
            }
        }
        if h.contains(&u32::MAX) {
            return None;
        }
        Some(Self::new_unchecked(q.cod.clone(), self.cod.clone(), h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmod(n: usize) -> Arc<FiniteAlgebra> {
        Arc::new(FiniteAlgebra::group_from_fn(n, |a, b| (a + b) % n).unwrap())
    }

    #[test]
    fn reduction_mod_two() {
        let z4 = zmod(4);
        let z2 = zmod(2);
        let f = Morphism::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        assert!(f.is_surjective());
        assert!(!f.is_injective());
        assert_eq!(f.kernel_mask(), vec![true, false, true, false]);
        assert!(Morphism::new(z4, z2, vec![0, 1, 1, 0]).is_err());
    }

    #[test]
    fn point_must_be_preserved() {
        let z2 = zmod(2);
        assert!(matches!(
            Morphism::new(z2.clone(), z2, vec![1, 0]),
            Err(Error::NotHomomorphism { op: "point", .. })
        ));
    }

    #[test]
    fn factoring_through_a_quotient() {
        let z4 = zmod(4);
        let z2 = zmod(2);
        let q = Morphism::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let zero = Morphism::zero(&z4, &z2);
        let h = zero.factor_through(&q).unwrap();
        assert_eq!(h.map(), &[0, 0]);
        assert!(Morphism::identity(&z4).factor_through(&q).is_none());
    }
}
