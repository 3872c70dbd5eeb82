//! Regular-epi reflectors, their composites, and the protoadditivity search.
//!
//! A reflector is described only by its object part: the kernel of the unit
//! `η_A: A → I(A)`. The image is the quotient by that kernel, and the action
//! on a morphism `f: A → B` is the unique factorisation of `η_B ∘ f` through
//! `η_A`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::fgab::{FgAb, FgAbMap, IntMatrix, Lattice, PresentedAb};
use crate::finalg::{
    all_normal_subobjects, direct_image, find_section, normal_closure, preimage, quotient,
    FiniteAlgebra, Morphism, NormalSubobject, ShortExactSequence, Signature,
};
use crate::{Error, Result};

/// The reflectors shipped with the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basic {
    /// Abelianisation of groups.
    Ab,
    /// Commutative quotient of rings.
    CRng,
    /// Reduced quotient of commutative rings (quotient by the nilradical).
    Red,
    /// Associative quotient of loops.
    Grp,
    /// Torsion-free quotient of abelian groups.
    Tf,
    Id,
}

impl Basic {
    pub fn name(self) -> &'static str {
        match self {
            Basic::Ab => "ab",
            Basic::CRng => "crng",
            Basic::Red => "red",
            Basic::Grp => "grp",
            Basic::Tf => "tf",
            Basic::Id => "id",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "ab" => Basic::Ab,
            "crng" => Basic::CRng,
            "red" => Basic::Red,
            "grp" => Basic::Grp,
            "tf" => Basic::Tf,
            "id" => Basic::Id,
            _ => return None,
        })
    }

    fn is_birkhoff(self) -> bool {
        matches!(self, Basic::Ab | Basic::CRng | Basic::Grp | Basic::Id)
    }

    fn unit_kernel(self, a: &Arc<FiniteAlgebra>) -> Result<NormalSubobject> {
        let n = a.size();
        let sig = a.signature();
        let mismatch = |what: &str| {
            Err(Error::AmbientMismatch(format!(
                "{} applies to {what}, not to a {sig}",
                self.name()
            )))
        };
        match self {
            Basic::Id => Ok(NormalSubobject::zero(a)),
            Basic::Ab => {
                if sig != Signature::Group {
                    return mismatch("groups");
                }
                let mut comms = Vec::new();
                for x in 0..n {
                    for y in 0..x {
                        comms.push(a.ldiv(a.mul(y, x), a.mul(x, y)));
                    }
                }
                Ok(normal_closure(a, &comms))
            }
            Basic::CRng => {
                if sig != Signature::Ring {
                    return mismatch("rings");
                }
                let mut comms = Vec::new();
                for x in 0..n {
                    for y in 0..x {
                        comms.push(a.sub(a.mul(x, y), a.mul(y, x)));
                    }
                }
                Ok(normal_closure(a, &comms))
            }
            Basic::Red => {
                if sig != Signature::Ring {
                    return mismatch("commutative rings");
                }
                if !a.is_commutative() {
                    return Err(Error::NotCommutative);
                }
                NormalSubobject::from_mask(a.clone(), nilpotents(a))
            }
            Basic::Grp => {
                if sig == Signature::Group {
                    return Ok(NormalSubobject::zero(a));
                }
                if sig != Signature::Loop {
                    return mismatch("loops");
                }
                let mut assoc = Vec::new();
                for x in 0..n {
                    for y in 0..n {
                        let xy = a.mul(x, y);
                        for z in 0..n {
                            assoc.push(a.ldiv(a.mul(xy, z), a.mul(x, a.mul(y, z))));
                        }
                    }
                }
                assoc.sort_unstable();
                assoc.dedup();
                Ok(normal_closure(a, &assoc))
            }
            Basic::Tf => {
                if !a.is_abelian_group() {
                    return mismatch("abelian groups");
                }
                // Every element of a finite group is torsion.
                Ok(NormalSubobject::top(a))
            }
        }
    }

    fn is_member(self, a: &FiniteAlgebra) -> Result<bool> {
        Ok(match self {
            Basic::Id => true,
            Basic::Ab => a.signature() == Signature::Group && a.is_commutative(),
            Basic::CRng => a.signature() == Signature::Ring && a.is_commutative(),
            Basic::Red => {
                if !a.is_commutative() {
                    return Err(Error::NotCommutative);
                }
                nilpotents(a).iter().filter(|&&b| b).count() == 1
            }
            Basic::Grp => a.signature() != Signature::Ring && a.is_associative(),
            Basic::Tf => a.size() == 1,
        })
    }
}

/// `{x : xᵏ = 0 for some k ≤ n}`.
fn nilpotents(a: &FiniteAlgebra) -> Vec<bool> {
    let n = a.size();
    (0..n)
        .map(|x| {
            let mut p = x;
            for _ in 0..n {
                if p == 0 {
                    return true;
                }
                p = a.mul(p, x);
            }
            p == 0
        })
        .collect()
}

/// A reflector: a basic one, or `F ∘ I` for an inner and outer basic one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Reflector {
    inner: Basic,
    outer: Basic,
}

/// The reflection of an object: `I(A)` and the unit `η_A`.
#[derive(Clone, Debug)]
pub struct Reflection {
    pub image: Arc<FiniteAlgebra>,
    pub unit: Morphism,
}

impl Reflector {
    pub const AB: Reflector = Reflector::basic(Basic::Ab);
    pub const CRNG: Reflector = Reflector::basic(Basic::CRng);
    pub const RED: Reflector = Reflector::basic(Basic::Red);
    pub const GRP: Reflector = Reflector::basic(Basic::Grp);
    pub const TF: Reflector = Reflector::basic(Basic::Tf);
    pub const ID: Reflector = Reflector::basic(Basic::Id);

    pub const fn basic(b: Basic) -> Self {
        Reflector {
            inner: b,
            outer: Basic::Id,
        }
    }

    /// `outer ∘ inner`. Composing with `id` on either side gives the other
    /// reflector back.
    pub fn compose(inner: Reflector, outer: Reflector) -> Result<Reflector> {
        if outer.is_identity() {
            return Ok(inner);
        }
        if inner.is_identity() {
            return Ok(outer);
        }
        if !inner.is_basic() || !outer.is_basic() {
            return Err(Error::AmbientMismatch(
                "only two-stage composites are supported".into(),
            ));
        }
        let ok = matches!(
            (inner.inner, outer.inner),
            (Basic::Ab, Basic::Tf) | (Basic::CRng, Basic::Red)
        );
        if !ok {
            return Err(Error::AmbientMismatch(format!(
                "{} does not act on the image of {}",
                outer.inner.name(),
                inner.inner.name()
            )));
        }
        Ok(Reflector {
            inner: inner.inner,
            outer: outer.inner,
        })
    }

    pub fn is_basic(&self) -> bool {
        self.outer == Basic::Id
    }

    pub fn is_identity(&self) -> bool {
        self.inner == Basic::Id && self.outer == Basic::Id
    }

    /// The first stage, as a reflector in its own right.
    pub fn inner(&self) -> Reflector {
        Reflector::basic(self.inner)
    }

    /// The second stage (`id` for a basic reflector).
    pub fn outer(&self) -> Reflector {
        Reflector::basic(self.outer)
    }

    /// Whether the subcategory is closed under quotients. Only basic
    /// reflectors are classified; composites with a non-identity outer
    /// stage report `false`.
    pub fn is_birkhoff(&self) -> bool {
        self.is_basic() && self.inner.is_birkhoff()
    }

    /// `K[η_A]`.
    pub fn unit_kernel(&self, a: &Arc<FiniteAlgebra>) -> Result<NormalSubobject> {
        let k1 = self.inner.unit_kernel(a)?;
        if self.is_basic() {
            return Ok(k1);
        }
        let (i, q) = quotient(a, &k1)?;
        let k2 = self.outer.unit_kernel(&i)?;
        preimage(&q, &k2)
    }

    pub fn reflect(&self, a: &Arc<FiniteAlgebra>) -> Result<Reflection> {
        let k = self.unit_kernel(a)?;
        let (image, unit) = quotient(a, &k)?;
        Ok(Reflection { image, unit })
    }

    /// Membership in the reflective subcategory, decided from the defining
    /// identities rather than from the unit.
    pub fn is_member(&self, a: &FiniteAlgebra) -> Result<bool> {
        Ok(self.inner.is_member(a)? && (self.is_basic() || self.outer.is_member(a)?))
    }

    /// `I(f): I(A) → I(B)` for given reflections of the two ends.
    pub fn reflect_morphism(f: &Morphism, ra: &Reflection, rb: &Reflection) -> Result<Morphism> {
        f.then(&rb.unit)?
            .factor_through(&ra.unit)
            .ok_or_else(|| Error::InternalMismatch("unit does not factor a morphism".into()))
    }

    /// Whether `f(K[η_A]) = K[η_B]` for a surjection `f: A → B`.
    pub fn pushes_forward(&self, f: &Morphism) -> Result<bool> {
        let ka = self.unit_kernel(f.dom())?;
        let kb = self.unit_kernel(f.cod())?;
        Ok(direct_image(f, &ka)? == kb)
    }

    /// The torsion-free reflection of a finitely generated abelian group in
    /// its standard presentation.
    pub fn tf_of_fgab(g: &FgAb) -> (FgAb, FgAbMap) {
        let dom = PresentedAb::standard(g);
        let image = g.tf_quotient();
        let cod = PresentedAb::standard(&image);
        let mut m = IntMatrix::zeros(g.generator_count(), g.rank());
        for i in 0..g.rank() {
            m.set(i, i, 1);
        }
        let unit = FgAbMap::new(dom, cod, m).expect("projection onto the free part");
        (image, unit)
    }

    /// The kernel of the torsion-free unit at `Zⁿ/R`: the saturation of `R`.
    pub fn tf_unit_kernel(g: &PresentedAb) -> Lattice {
        g.torsion_lattice()
    }
}

impl fmt::Display for Reflector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_basic() {
            f.write_str(self.inner.name())
        } else {
            write!(f, "{}+{}", self.inner.name(), self.outer.name())
        }
    }
}

impl FromStr for Reflector {
    type Err = Error;

    /// `ab`, `crng`, `red`, `grp`, `tf`, `id`, or `inner+outer`.
    fn from_str(s: &str) -> Result<Self> {
        let basic = |p: &str| {
            Basic::from_name(p.trim())
                .map(Reflector::basic)
                .ok_or_else(|| Error::Malformed(format!("unknown reflector `{p}`")))
        };
        match s.split_once('+') {
            None => basic(s),
            Some((i, o)) => Reflector::compose(basic(i)?, basic(o)?),
        }
    }
}

/// `F ∘ I` with `I` Birkhoff and `F` protoadditive, keeping both stages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CompositeAdjunction {
    inner: Reflector,
    outer: Reflector,
}

impl CompositeAdjunction {
    pub fn new(inner: Reflector, outer: Reflector) -> Result<Self> {
        if !inner.is_birkhoff() {
            return Err(Error::NotBirkhoffInner);
        }
        Reflector::compose(inner, outer)?;
        Ok(Self { inner, outer })
    }

    /// The Birkhoff case `F = id`.
    pub fn birkhoff(inner: Reflector) -> Result<Self> {
        Self::new(inner, Reflector::ID)
    }

    pub fn inner(&self) -> Reflector {
        self.inner
    }

    pub fn outer(&self) -> Reflector {
        self.outer
    }

    pub fn composite(&self) -> Reflector {
        Reflector::compose(self.inner, self.outer).expect("checked on construction")
    }

    /// The composite reflection of `A`, with the outer stage re-checked to
    /// fix its own output.
    pub fn reflect(&self, a: &Arc<FiniteAlgebra>) -> Result<Reflection> {
        let r = self.composite().reflect(a)?;
        if !self.outer.is_member(&r.image)? {
            return Err(Error::InternalMismatch(format!(
                "{} does not land in its subcategory",
                self.composite()
            )));
        }
        Ok(r)
    }
}

impl fmt::Display for CompositeAdjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.inner, self.outer)
    }
}

impl FromStr for CompositeAdjunction {
    type Err = Error;

    /// `inner+outer`, or a single name for the Birkhoff case.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('+') {
            None => Self::birkhoff(s.parse()?),
            Some((i, o)) => Self::new(i.parse()?, o.parse()?),
        }
    }
}

/// A split short exact sequence whose image under a reflector is not split
/// exact.
#[derive(Clone, Debug)]
pub struct ProtoadditivityFailure {
    /// Position of the middle object in the searched corpus.
    pub algebra: usize,
    /// The kernel `K`, as elements of the middle object.
    pub kernel: Vec<usize>,
    pub reason: String,
}

/// Searches the split short exact sequences `0 → K → A → A/K → 0` over the
/// corpus (every normal `K` whose quotient map has a section) for one that
/// the reflector does not send to a split short exact sequence.
pub fn protoadditivity_search(
    r: &Reflector,
    corpus: &[Arc<FiniteAlgebra>],
) -> Result<Option<ProtoadditivityFailure>> {
    for (idx, a) in corpus.iter().enumerate() {
        for k in all_normal_subobjects(a) {
            let seq = ShortExactSequence::of_normal(a, &k)?;
            let Some(s) = find_section(&seq.f) else {
                continue;
            };
            if let Some(reason) = reflected_failure(r, &seq.k, &seq.f, &s)? {
                return Ok(Some(ProtoadditivityFailure {
                    algebra: idx,
                    kernel: k.elements(),
                    reason,
                }));
            }
        }
    }
    Ok(None)
}

/// Applies `r` to `K → A ⇄ B` and describes why the result is not split
/// exact, if it is not.
pub fn reflected_failure(
    r: &Reflector,
    k: &Morphism,
    f: &Morphism,
    s: &Morphism,
) -> Result<Option<String>> {
    let rk = r.reflect(k.dom())?;
    let ra = r.reflect(f.dom())?;
    let rb = r.reflect(f.cod())?;
    let fk = Reflector::reflect_morphism(k, &rk, &ra)?;
    let ff = Reflector::reflect_morphism(f, &ra, &rb)?;
    let fs = Reflector::reflect_morphism(s, &rb, &ra)?;
    let seq = ShortExactSequence::new(fk.clone(), ff.clone(), Some(fs));
    if seq.is_split_exact() {
        return Ok(None);
    }
    let reason = if !fk.is_injective() {
        format!(
            "{r} of the kernel inclusion is not injective ({} → {})",
            rk.image.size(),
            ra.image.size()
        )
    } else {
        format!("{r} of the sequence is not exact in the middle")
    };
    Ok(Some(reason))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::named;
    use crate::finalg::{find_isomorphism, kernel};

    #[test]
    fn abelianisation() {
        let z6 = named::cyclic(6);
        let r = Reflector::AB.reflect(&z6).unwrap();
        assert!(r.unit.is_isomorphism());
        let r = Reflector::AB.reflect(&named::symmetric3()).unwrap();
        assert_eq!(r.image.size(), 2);
        let r = Reflector::AB.reflect(&named::quaternion8()).unwrap();
        assert!(find_isomorphism(&r.image, &named::klein4()).is_some());
    }

    #[test]
    fn commutative_quotient_of_upper_triangular_ring() {
        let t = named::upper_triangular_f2();
        assert!(!t.is_commutative());
        let r = Reflector::CRNG.reflect(&t).unwrap();
        assert!(r.image.is_commutative());
        // xy − yx spans the strictly upper corner, an ideal of order 2.
        assert_eq!(kernel(&r.unit).len(), 2);
        assert_eq!(r.image.size(), 4);
        let z = Arc::new(FiniteAlgebra::trivial(Signature::Ring));
        assert_eq!(Reflector::CRNG.reflect(&z).unwrap().image.size(), 1);
    }

    #[test]
    fn reduced_quotients() {
        let r = Reflector::RED.reflect(&named::zmod_ring(8)).unwrap();
        assert_eq!(kernel(&r.unit).elements(), alloc::vec![0, 2, 4, 6]);
        assert_eq!(r.image.size(), 2);
        let f2f3 = Arc::new(named::zmod_ring(2).product(&named::zmod_ring(3)).unwrap());
        assert!(Reflector::RED.reflect(&f2f3).unwrap().unit.is_isomorphism());
        assert!(Reflector::RED
            .reflect(&named::zmod_ring(6))
            .unwrap()
            .unit
            .is_isomorphism());
        assert_eq!(
            Reflector::RED.reflect(&named::upper_triangular_f2()).err(),
            Some(Error::NotCommutative)
        );
    }

    #[test]
    fn group_reflection_of_loops() {
        let l = named::least_nonassociative_loop5();
        assert!(!l.is_associative());
        let r = Reflector::GRP.reflect(&l).unwrap();
        assert!(r.image.is_associative());
        let as_loop = named::as_loop(&named::cyclic(4));
        assert!(Reflector::GRP
            .reflect(&as_loop)
            .unwrap()
            .unit
            .is_isomorphism());
        let one = Arc::new(FiniteAlgebra::trivial(Signature::Loop));
        assert_eq!(Reflector::GRP.reflect(&one).unwrap().image.size(), 1);
    }

    #[test]
    fn torsion_free_reflection_of_fgab() {
        let g: FgAb = "Z x Z/4".parse().unwrap();
        let (i, unit) = Reflector::tf_of_fgab(&g);
        assert_eq!(i, FgAb::free(1));
        assert_eq!(unit.kernel_image().0, FgAb::cyclic(4));
        assert!(Reflector::tf_of_fgab(&FgAb::cyclic(12)).0.is_zero());
        let (i, unit) = Reflector::tf_of_fgab(&FgAb::free(3));
        assert_eq!(i, FgAb::free(3));
        assert_eq!(unit.matrix(), &IntMatrix::identity(3));
    }

    #[test]
    fn composites() {
        let cr: Reflector = "crng+red".parse().unwrap();
        let r = cr.reflect(&named::zmod_ring(8)).unwrap();
        assert_eq!(r.image.size(), 2);
        assert_eq!("ab+id".parse::<Reflector>().unwrap(), Reflector::AB);
        let f2 = named::zmod_ring(2);
        assert!(cr.reflect(&f2).unwrap().unit.is_isomorphism());
        assert!(matches!(
            "red+ab".parse::<Reflector>(),
            Err(Error::AmbientMismatch(_))
        ));
        assert!(matches!(
            "grp+red".parse::<Reflector>(),
            Err(Error::AmbientMismatch(_))
        ));
        assert_eq!(cr.to_string(), "crng+red");
    }

    #[test]
    fn ambient_mismatch() {
        assert!(matches!(
            Reflector::AB.reflect(&named::zmod_ring(4)),
            Err(Error::AmbientMismatch(_))
        ));
        assert!(matches!(
            Reflector::CRNG.reflect(&named::cyclic(4)),
            Err(Error::AmbientMismatch(_))
        ));
        assert!(matches!(
            "red+id".parse::<CompositeAdjunction>(),
            Err(Error::NotBirkhoffInner)
        ));
    }

    #[test]
    fn idempotence_and_membership() {
        for a in [
            named::symmetric3(),
            named::quaternion8(),
            named::dihedral(4),
        ] {
            let r = Reflector::AB.reflect(&a).unwrap();
            assert!(Reflector::AB
                .reflect(&r.image)
                .unwrap()
                .unit
                .is_isomorphism());
            assert!(Reflector::AB.is_member(&r.image).unwrap());
            assert!(!Reflector::AB.is_member(&a).unwrap());
        }
    }

    #[test]
    fn ab_is_not_protoadditive_on_s3() {
        let found = protoadditivity_search(&Reflector::AB, &[named::symmetric3()])
            .unwrap()
            .unwrap();
        assert_eq!(found.kernel.len(), 3);
        assert!(
            protoadditivity_search(&Reflector::ID, &[named::symmetric3()])
                .unwrap()
                .is_none()
        );
    }
}
