use alloc::sync::Arc;

use super::algebra::FiniteAlgebra;
use super::iso::find_section;
use super::morphism::{same, Morphism};
use super::normal::{quotient, NormalSubobject};
use crate::Result;

/// `0 → K → A → B → 0`, optionally with a section of `f`.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub k: Morphism,
    pub f: Morphism,
    pub s: Option<Morphism>,
}

impl ShortExactSequence {
    pub fn new(k: Morphism, f: Morphism, s: Option<Morphism>) -> Self {
        Self { k, f, s }
    }

    /// `0 → N → A → A/N → 0` with the embedding and the quotient map.
    pub fn of_normal(a: &Arc<FiniteAlgebra>, n: &NormalSubobject) -> Result<Self> {
        let (_, k) = n.to_algebra();
        let (_, f) = quotient(a, n)?;
        Ok(Self { k, f, s: None })
    }

    /// Fills in a section of `f` by search; leaves `s` empty if none exists.
    pub fn with_found_section(mut self) -> Self {
        self.s = find_section(&self.f);
        self
    }

    pub fn is_exact(&self) -> bool {
        same(self.k.cod(), self.f.dom())
            && self.k.is_injective()
            && self.f.is_surjective()
            && self.k.image_mask() == self.f.kernel_mask()
    }

    pub fn is_split_exact(&self) -> bool {
        let Some(s) = &self.s else { return false };
        self.is_exact()
            && same(s.dom(), self.f.cod())
            && same(s.cod(), self.f.dom())
            && (0..s.dom().size()).all(|b| self.f.apply(s.apply(b)) == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::named;
    use crate::finalg::normal_closure;
    use alloc::vec;

    #[test]
    fn z6_splits_over_z3() {
        let z2 = named::cyclic(2);
        let z3 = named::cyclic(3);
        let a = Arc::new(z2.product(&z3).unwrap());
        let k = Morphism::new(z2.clone(), a.clone(), vec![0, 3]).unwrap();
        let f = Morphism::new(
            a.clone(),
            z3.clone(),
            (0..6).map(|x| (x % 3) as u32).collect(),
        )
        .unwrap();
        let s = Morphism::new(z3, a, vec![0, 1, 2]).unwrap();
        assert!(ShortExactSequence::new(k, f, Some(s)).is_split_exact());
    }

    #[test]
    fn z4_over_z2_does_not_split() {
        let z4 = named::cyclic(4);
        let n = normal_closure(&z4, &[2]);
        let seq = ShortExactSequence::of_normal(&z4, &n).unwrap();
        assert!(seq.is_exact());
        let seq = seq.with_found_section();
        assert!(seq.s.is_none());
        assert!(!seq.is_split_exact());
    }

    #[test]
    fn zero_kernel_with_identity_section() {
        let a = named::quaternion8();
        let zero = NormalSubobject::zero(&a);
        let seq = ShortExactSequence::of_normal(&a, &zero).unwrap();
        let s = seq.f.inverse().unwrap();
        let seq = ShortExactSequence::new(seq.k, seq.f, Some(s));
        assert!(seq.is_split_exact());
    }
}
