//! Extensions, relative commutators, centralisation and Galois groups.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::finalg::{
    factorizations, kernel, kernel_pair, meet, pullback, pullback_comparison, quotient,
    FiniteAlgebra, Morphism, NormalSubobject,
};
use crate::reflect::{CompositeAdjunction, Reflection, Reflector};
use crate::{Error, Result};

/// A surjection `p: E → B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    map: Morphism,
}

impl Extension {
    pub fn new(map: Morphism) -> Result<Self> {
        if !map.is_surjective() {
            return Err(Error::NotSurjective);
        }
        Ok(Self { map })
    }

    pub fn identity(a: &Arc<FiniteAlgebra>) -> Self {
        Self {
            map: Morphism::identity(a),
        }
    }

    /// The quotient map `A → A/N`.
    pub fn quotient(a: &Arc<FiniteAlgebra>, n: &NormalSubobject) -> Result<Self> {
        let (_, q) = quotient(a, n)?;
        Ok(Self { map: q })
    }

    pub fn map(&self) -> &Morphism {
        &self.map
    }

    pub fn total(&self) -> &Arc<FiniteAlgebra> {
        self.map.dom()
    }

    pub fn base(&self) -> &Arc<FiniteAlgebra> {
        self.map.cod()
    }

    /// `K[p]`.
    pub fn kernel(&self) -> NormalSubobject {
        kernel(&self.map)
    }
}

/// `[K[f], E]_B`: the elements `b` with `(0, b)` in the closure of zero of the
/// kernel pair `R[f]`, that is, the kernel of the first projection restricted
/// to `0̄_{R[f]}`, embedded in `E` by the second projection.
pub fn relative_commutator(r_b: &Reflector, f: &Extension) -> Result<NormalSubobject> {
    if !r_b.is_birkhoff() {
        return Err(Error::NotBirkhoffInner);
    }
    let e = f.total();
    let kp = kernel_pair(&f.map);
    let zr = r_b.unit_kernel(&kp.algebra)?;
    let mask: Vec<bool> = (0..e.size())
        .map(|b| kp.pair(0, b).is_some_and(|i| zr.contains(i)))
        .collect();
    NormalSubobject::from_mask(e.clone(), mask)
        .map_err(|_| Error::InternalMismatch("relative commutator is not normal".into()))
}

pub fn is_b_central(r_b: &Reflector, f: &Extension) -> Result<bool> {
    Ok(relative_commutator(r_b, f)?.is_zero())
}

/// The induced morphism `I(f)` along with the two reflections.
fn reflect_square(r: &Reflector, f: &Morphism) -> Result<(Reflection, Reflection, Morphism)> {
    let re = r.reflect(f.dom())?;
    let rb = r.reflect(f.cod())?;
    let i_f = Reflector::reflect_morphism(f, &re, &rb)?;
    Ok((re, rb, i_f))
}

/// Whether the square `η_B ∘ f = I(f) ∘ η_E` is a pullback: the comparison
/// `e ↦ (f(e), η_E(e))` into `B ×_{I(B)} I(E)` is bijective.
pub fn is_trivial_ext(r: &Reflector, f: &Extension) -> Result<bool> {
    let (re, rb, i_f) = reflect_square(r, &f.map)?;
    let pb = pullback(&rb.unit, &i_f)?;
    let cmp = pullback_comparison(&pb, &f.map, &re.unit)
        .ok_or_else(|| Error::InternalMismatch("unit square does not commute".into()))?;
    Ok(cmp.is_isomorphism())
}

/// Whether the first projection `R[f] → E` is a trivial extension.
pub fn is_normal_ext(r: &Reflector, f: &Extension) -> Result<bool> {
    let kp = kernel_pair(&f.map);
    is_trivial_ext(r, &Extension::new(kp.pi1)?)
}

/// `f` is B-central and its kernel lies in the outer subcategory.
pub fn is_f_central(adj: &CompositeAdjunction, f: &Extension) -> Result<bool> {
    if !is_b_central(&adj.inner(), f)? {
        return Ok(false);
    }
    let (k, _) = f.kernel().to_algebra();
    adj.composite().is_member(&k)
}

/// A quotient of an extension's total object, with the quotient map.
#[derive(Clone, Debug)]
pub struct Centralized {
    pub ext: Extension,
    pub quotient: Morphism,
    /// What was divided out, as a subobject of the original total object.
    pub divided: NormalSubobject,
}

fn divide(f: &Extension, n: NormalSubobject) -> Result<Centralized> {
    let (_, q) = quotient(f.total(), &n)?;
    let g = f.map.factor_through(&q).ok_or_else(|| {
        Error::InternalMismatch("extension does not factor through quotient".into())
    })?;
    Ok(Centralized {
        ext: Extension::new(g)?,
        quotient: q,
        divided: n,
    })
}

/// `I₁(f): E/[K[f], E]_B → B`.
pub fn centralize_i1(r_b: &Reflector, f: &Extension) -> Result<Centralized> {
    let c = relative_commutator(r_b, f)?;
    divide(f, c)
}

/// `F₁(f): E/0̄_K → B` for a B-central `f`, where `0̄_K` is the closure of
/// zero in the kernel object `K[f]` under the composite reflector.
pub fn centralize_f1(adj: &CompositeAdjunction, f: &Extension) -> Result<Centralized> {
    if !is_b_central(&adj.inner(), f)? {
        return Err(Error::NotBCentral);
    }
    let (k, emb) = f.kernel().to_algebra();
    let z = adj.composite().unit_kernel(&k)?;
    let mut mask = alloc::vec![false; f.total().size()];
    for x in z.elements() {
        mask[emb.apply(x)] = true;
    }
    let n = NormalSubobject::from_mask(f.total().clone(), mask).map_err(|_| {
        Error::InternalMismatch(
            "closure of zero in the kernel is not normal in the total object".into(),
        )
    })?;
    divide(f, n)
}

/// `F₁(I₁(f))`, with the quotient map from the original total object.
pub fn centralize(adj: &CompositeAdjunction, f: &Extension) -> Result<Centralized> {
    let c1 = centralize_i1(&adj.inner(), f)?;
    let c2 = centralize_f1(adj, &c1.ext)?;
    let q = c1.quotient.then(&c2.quotient)?;
    let divided = kernel(&q);
    Ok(Centralized {
        ext: c2.ext,
        quotient: q,
        divided,
    })
}

#[derive(Clone, Debug)]
pub struct GaloisGroup {
    /// `Gal(E, p)` as the kernel of `⟨I(π₁), I(π₂)⟩`.
    pub group: Arc<FiniteAlgebra>,
    /// The same kernel as elements of `I(R[p])`.
    pub witness: Vec<usize>,
    /// `K[p] ∧ K[η_E]` in `E`.
    pub intersection: NormalSubobject,
    /// `k ↦ η_{R[p]}(0, k)` from the intersection onto the Galois group;
    /// checked to be an isomorphism.
    pub comparison: Morphism,
}

/// The Galois group of a normal extension, computed as a kernel in the
/// reflected kernel pair and compared with `K[p] ∧ K[η_E]`.
pub fn galois_group(r: &Reflector, p: &Extension) -> Result<GaloisGroup> {
    if !is_normal_ext(r, p)? {
        return Err(Error::NotNormalExtension);
    }
    let e = p.total();
    let kp = kernel_pair(&p.map);
    let rr = r.reflect(&kp.algebra)?;
    let re = r.reflect(e)?;
    let i1 = Reflector::reflect_morphism(&kp.pi1, &rr, &re)?;
    let i2 = Reflector::reflect_morphism(&kp.pi2, &rr, &re)?;
    let mask: Vec<bool> = (0..rr.image.size())
        .map(|x| i1.apply(x) == 0 && i2.apply(x) == 0)
        .collect();
    let gal = NormalSubobject::from_mask(rr.image.clone(), mask)
        .map_err(|_| Error::InternalMismatch("Galois kernel is not normal".into()))?;
    let (group, gal_emb) = gal.to_algebra();

    let intersection = meet(&p.kernel(), &kernel(&re.unit))?;
    let (meet_alg, meet_emb) = intersection.to_algebra();
    let mut index = alloc::vec![u32::MAX; rr.image.size()];
    for (i, &x) in gal_emb.map().iter().enumerate() {
        index[x as usize] = i as u32;
    }
    let map = (0..meet_alg.size())
        .map(|k| {
            let pair = kp
                .pair(0, meet_emb.apply(k))
                .expect("kernel elements pair with zero");
            index[rr.unit.apply(pair)]
        })
        .collect::<Vec<u32>>();
    if map.contains(&u32::MAX) {
        return Err(Error::InternalMismatch(
            "intersection does not land in the Galois group".into(),
        ));
    }
    let comparison = Morphism::new(meet_alg, group.clone(), map)
        .map_err(|e| Error::InternalMismatch(format!("comparison is not a morphism: {e}")))?;
    if !comparison.is_isomorphism() {
        return Err(Error::InternalMismatch(format!(
            "Galois group has order {} but K[p] ∧ K[η_E] has order {}",
            group.size(),
            intersection.len()
        )));
    }
    Ok(GaloisGroup {
        group,
        witness: gal.elements(),
        intersection,
        comparison,
    })
}

/// The reflected kernel equivalence relation of a normal extension.
#[derive(Clone, Debug)]
pub struct GaloisGroupoid {
    pub objects: Arc<FiniteAlgebra>,
    pub arrows: Arc<FiniteAlgebra>,
    pub source: Morphism,
    pub target: Morphism,
    pub unit: Morphism,
    /// Whether `I(R ×_E R) → I(R) ×_{I(E)} I(R)` is bijective.
    pub composable: bool,
}

pub fn galois_groupoid(r: &Reflector, p: &Extension) -> Result<GaloisGroupoid> {
    if !is_normal_ext(r, p)? {
        return Err(Error::NotNormalExtension);
    }
    let kp = kernel_pair(&p.map);
    let rr = r.reflect(&kp.algebra)?;
    let re = r.reflect(p.total())?;
    let source = Reflector::reflect_morphism(&kp.pi1, &rr, &re)?;
    let target = Reflector::reflect_morphism(&kp.pi2, &rr, &re)?;
    let unit = Reflector::reflect_morphism(&kp.delta, &re, &rr)?;
    let id = Morphism::identity(&re.image);
    if unit.then(&source)? != id || unit.then(&target)? != id {
        return Err(Error::InternalMismatch(
            "groupoid unit is not a section".into(),
        ));
    }
    // Composable pairs (r, r') with π₂(r) = π₁(r').
    let t = pullback(&kp.pi2, &kp.pi1)?;
    let rt = r.reflect(&t.algebra)?;
    let t1 = Reflector::reflect_morphism(&t.p1, &rt, &rr)?;
    let t2 = Reflector::reflect_morphism(&t.p2, &rt, &rr)?;
    let pairs = pullback(&target, &source)?;
    let composable = pullback_comparison(&pairs, &t1, &t2).is_some_and(|c| c.is_isomorphism());
    Ok(GaloisGroupoid {
        objects: re.image,
        arrows: rr.image,
        source,
        target,
        unit,
        composable,
    })
}

/// For each candidate `p'`, a morphism `u` with `p = p' ∘ u` if one exists.
pub fn weakly_universal_check(p: &Extension, others: &[Extension]) -> Vec<Option<Morphism>> {
    others
        .iter()
        .map(|q| factorizations(&p.map, &q.map, 1).into_iter().next())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::named;
    use crate::finalg::{find_isomorphism, normal_closure, NormalSubobject};
    use alloc::vec;

    fn q8_to_v() -> Extension {
        let q8 = named::quaternion8();
        let centre = normal_closure(&q8, &[named::Q8_MINUS_ONE]);
        Extension::quotient(&q8, &centre).unwrap()
    }

    fn z4_to_z2() -> Extension {
        let z4 = named::cyclic(4);
        Extension::quotient(&z4, &normal_closure(&z4, &[2])).unwrap()
    }

    fn sign() -> Extension {
        Extension::new(named::sign_map()).unwrap()
    }

    /// `⟨[k, a] : k ∈ K, a ∈ A⟩` closed normally.
    fn group_commutator_oracle(f: &Extension) -> NormalSubobject {
        let a = f.total();
        let k = f.kernel();
        let mut seeds = vec![];
        for x in k.elements() {
            for y in 0..a.size() {
                seeds.push(a.ldiv(a.mul(y, x), a.mul(x, y)));
            }
        }
        normal_closure(a, &seeds)
    }

    #[test]
    fn relative_commutators_of_groups() {
        let r = Reflector::AB;
        assert!(relative_commutator(&r, &z4_to_z2()).unwrap().is_zero());
        let s = sign();
        let c = relative_commutator(&r, &s).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c, group_commutator_oracle(&s));
        assert!(relative_commutator(&r, &q8_to_v()).unwrap().is_zero());
        assert_eq!(
            relative_commutator(&Reflector::RED, &z4_to_z2()),
            Err(Error::NotBirkhoffInner)
        );
    }

    #[test]
    fn associators_vanish_in_a_group_seen_as_a_loop() {
        let l = named::as_loop(&named::cyclic(4));
        let f = Extension::quotient(&l, &normal_closure(&l, &[2])).unwrap();
        assert!(relative_commutator(&Reflector::GRP, &f).unwrap().is_zero());
    }

    #[test]
    fn centrality() {
        let r = Reflector::AB;
        assert!(is_b_central(&r, &z4_to_z2()).unwrap());
        assert!(is_b_central(&r, &q8_to_v()).unwrap());
        assert!(!is_b_central(&r, &sign()).unwrap());
    }

    #[test]
    fn trivial_extensions() {
        let r = Reflector::AB;
        assert!(is_trivial_ext(&r, &Extension::identity(&named::symmetric3())).unwrap());
        let z2 = named::cyclic(2);
        let z3 = named::cyclic(3);
        let z6 = Arc::new(z2.product(&z3).unwrap());
        let proj = Morphism::new(z6, z3, (0..6).map(|x| (x % 3) as u32).collect()).unwrap();
        assert!(is_trivial_ext(&r, &Extension::new(proj).unwrap()).unwrap());
        // Both ends are abelian, so the unit square is made of identities.
        assert!(is_trivial_ext(&r, &z4_to_z2()).unwrap());
        // Z/4 → F₂ in rings: the reduced reflection collapses Z/4 onto F₂.
        let z4 = named::zmod_ring(4);
        let f = Extension::quotient(&z4, &normal_closure(&z4, &[2])).unwrap();
        assert!(!is_trivial_ext(&Reflector::RED, &f).unwrap());
        // Torsion-free reflection of finite groups is zero.
        assert!(!is_trivial_ext(&Reflector::TF, &z4_to_z2()).unwrap());
    }

    #[test]
    fn normal_extensions() {
        let r = Reflector::AB;
        assert!(is_normal_ext(&r, &q8_to_v()).unwrap());
        assert!(!is_normal_ext(&r, &sign()).unwrap());
        let q8 = named::quaternion8();
        assert!(is_normal_ext(&r, &Extension::identity(&q8)).unwrap());
    }

    #[test]
    fn f_centrality_in_rings() {
        let adj: CompositeAdjunction = "crng+red".parse().unwrap();
        let f2 = named::zmod_ring(2);
        let f3 = named::zmod_ring(3);
        let prod = Arc::new(f2.product(&f3).unwrap());
        let proj = Morphism::new(prod, f3, (0..6).map(|x| (x % 3) as u32).collect()).unwrap();
        assert!(is_f_central(&adj, &Extension::new(proj).unwrap()).unwrap());
        let z8 = named::zmod_ring(8);
        let to_f2 = Extension::quotient(&z8, &normal_closure(&z8, &[2])).unwrap();
        assert!(!is_f_central(&adj, &to_f2).unwrap());
        assert!(is_f_central(&adj, &Extension::identity(&z8)).unwrap());
    }

    #[test]
    fn centralising_with_i1() {
        let r = Reflector::AB;
        let c = centralize_i1(&r, &sign()).unwrap();
        assert_eq!(c.ext.total().size(), 2);
        assert!(c.ext.map().is_isomorphism());
        assert!(is_b_central(&r, &c.ext).unwrap());
        let c = centralize_i1(&r, &q8_to_v()).unwrap();
        assert_eq!(c.ext.total().size(), 8);
    }

    #[test]
    fn centralising_with_f1() {
        let adj: CompositeAdjunction = "crng+red".parse().unwrap();
        let z4 = named::zmod_ring(4);
        let f = Extension::quotient(&z4, &normal_closure(&z4, &[2])).unwrap();
        let c = centralize_f1(&adj, &f).unwrap();
        assert_eq!(c.ext.total().size(), 2);
        assert!(c.ext.map().is_isomorphism());
        assert!(is_f_central(&adj, &c.ext).unwrap());
        let ab: CompositeAdjunction = "ab".parse().unwrap();
        assert_eq!(centralize_f1(&ab, &sign()).err(), Some(Error::NotBCentral));
        let id = Extension::identity(&z4);
        assert!(centralize(&adj, &id).unwrap().ext.map().is_isomorphism());
    }

    #[test]
    fn galois_groups() {
        let r = Reflector::AB;
        let g = galois_group(&r, &q8_to_v()).unwrap();
        assert!(find_isomorphism(&g.group, &named::cyclic(2)).is_some());
        assert_eq!(galois_group(&r, &z4_to_z2()).unwrap().group.size(), 1);
        let id = Extension::identity(&named::quaternion8());
        assert_eq!(galois_group(&r, &id).unwrap().group.size(), 1);
        assert_eq!(
            galois_group(&r, &sign()).err(),
            Some(Error::NotNormalExtension)
        );
    }

    #[test]
    fn galois_groupoids() {
        let r = Reflector::AB;
        let g = galois_groupoid(&r, &q8_to_v()).unwrap();
        assert_eq!(g.objects.size(), 4);
        assert_eq!(g.arrows.size(), 8);
        assert!(g.composable);
        let id = galois_groupoid(&r, &Extension::identity(&named::cyclic(3))).unwrap();
        assert!(id.source.is_isomorphism());
        assert_eq!(id.arrows.size(), id.objects.size());
    }

    #[test]
    fn weak_universality() {
        let p = q8_to_v();
        let v = p.base().clone();
        let z2 = named::cyclic(2);
        let z2v = Arc::new(z2.product(&v).unwrap());
        let proj = Morphism::new(z2v, v.clone(), (0..8).map(|x| (x % 4) as u32).collect()).unwrap();
        let found = weakly_universal_check(&p, &[p.clone(), Extension::new(proj).unwrap()]);
        assert!(found[0].is_some());
        assert!(found[1].is_some());
        // Nothing factors V → V through Q₈ → V, as Q₈ → V has no section.
        let back = weakly_universal_check(&Extension::identity(&v), &[p]);
        assert!(back[0].is_none());
        let _ = NormalSubobject::zero(&v);
    }
}
