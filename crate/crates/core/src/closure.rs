//! The homological closure operator induced by a reflector.
//!
//! For a normal `K ≤ A`, the closure is the preimage of `K[η_{A/K}]` under
//! the quotient map `A → A/K`. The same definition is used for every
//! reflector, Birkhoff or not; the formula `K ∨ 0̄` only appears as a check.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::fgab::{FgAbMap, Lattice, PresentedAb};
use crate::finalg::{
    all_normal_subobjects, join, preimage, quotient, same, FiniteAlgebra, Morphism, NormalSubobject,
};
use crate::reflect::Reflector;
use crate::{Error, Result};

/// `K ↦ K̄_A` for a fixed reflector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureOperator {
    pub reflector: Reflector,
}

impl ClosureOperator {
    pub fn new(reflector: Reflector) -> Self {
        Self { reflector }
    }

    pub fn close(&self, k: &NormalSubobject) -> Result<NormalSubobject> {
        close(&self.reflector, k.ambient(), k)
    }
}

/// `q_K⁻¹(K[η_{A/K}])`.
pub fn close(
    r: &Reflector,
    a: &Arc<FiniteAlgebra>,
    k: &NormalSubobject,
) -> Result<NormalSubobject> {
    if !same(a, k.ambient()) {
        return Err(Error::NotNormal);
    }
    let (q_alg, q) = quotient(a, k)?;
    let unit_kernel = r.unit_kernel(&q_alg)?;
    preimage(&q, &unit_kernel)
}

/// `0̄_A`, the kernel of the unit at `A`.
pub fn close_zero(r: &Reflector, a: &Arc<FiniteAlgebra>) -> Result<NormalSubobject> {
    close(r, a, &NormalSubobject::zero(a))
}

/// The torsion-free closure of a subgroup `K` (a lattice containing the
/// relations) of `Zⁿ/R`: the preimage of the torsion of `Zⁿ/K`.
pub fn close_tf(a: &PresentedAb, k: &Lattice) -> Result<Lattice> {
    let k = k.sum(a.relations())?;
    Ok(k.saturation())
}

/// A failed axiom with the algebra it failed on and a readable witness.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub axiom: u8,
    pub algebra: usize,
    /// Index into the morphism list, for the axiom that quantifies over maps.
    pub morphism: Option<usize>,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    /// Number of instances checked per axiom.
    pub checked: [usize; 5],
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: AxiomReport) {
        for i in 0..5 {
            self.checked[i] += other.checked[i];
        }
        self.violations.extend(other.violations);
        self.violations.sort();
    }
}

fn fmt_set(n: &NormalSubobject) -> String {
    format!("{:?}", n.elements())
}

/// The normal subobjects of an algebra with their closures.
struct Closures {
    subs: Vec<NormalSubobject>,
    closed: BTreeMap<Vec<bool>, NormalSubobject>,
}

impl Closures {
    fn new(r: &Reflector, a: &Arc<FiniteAlgebra>) -> Result<Self> {
        let subs = all_normal_subobjects(a);
        let mut closed = BTreeMap::new();
        for k in &subs {
            closed.insert(k.mask().to_vec(), close(r, a, k)?);
        }
        Ok(Self { subs, closed })
    }

    fn of(&self, k: &NormalSubobject) -> &NormalSubobject {
        &self.closed[k.mask()]
    }
}

/// Checks the five closure axioms on one algebra:
///
/// 1. `K ⊆ K̄`;
/// 2. `K ⊆ L ⇒ K̄ ⊆ L̄`;
/// 3. `f⁻¹(K)‾ ⊆ f⁻¹(K̄)` for the given morphisms out of `a`;
/// 4. `K̄̄ = K̄`;
/// 5. `g⁻¹(K)‾ = g⁻¹(K̄)` for every quotient map `g: A → A/N`.
///
/// `morphisms` lists maps `a → b` with `b` identified by `index`.
pub fn axiom_suite_one(
    r: &Reflector,
    index: usize,
    a: &Arc<FiniteAlgebra>,
    morphisms: &[Morphism],
) -> Result<AxiomReport> {
    let mut rep = AxiomReport::default();
    let ca = Closures::new(r, a)?;
    let fail = |rep: &mut AxiomReport, axiom: u8, morphism: Option<usize>, witness: String| {
        rep.violations.push(Violation {
            axiom,
            algebra: index,
            morphism,
            witness,
        })
    };
    for k in &ca.subs {
        let kb = ca.of(k);
        rep.checked[0] += 1;
        if !k.is_subset(kb) {
            fail(&mut rep, 1, None, format!("K = {}", fmt_set(k)));
        }
        rep.checked[3] += 1;
        if close(r, a, kb)? != *kb {
            fail(&mut rep, 4, None, format!("K = {}", fmt_set(k)));
        }
        for l in &ca.subs {
            if k.is_subset(l) {
                rep.checked[1] += 1;
                if !kb.is_subset(ca.of(l)) {
                    fail(
                        &mut rep,
                        2,
                        None,
                        format!("K = {}, L = {}", fmt_set(k), fmt_set(l)),
                    );
                }
            }
        }
    }
    let mut cods: Vec<(*const FiniteAlgebra, Closures)> = Vec::new();
    for (fi, f) in morphisms.iter().enumerate() {
        let key = Arc::as_ptr(f.cod());
        let pos = match cods.iter().position(|(p, _)| *p == key) {
            Some(i) => i,
            None => {
                cods.push((key, Closures::new(r, f.cod())?));
                cods.len() - 1
            }
        };
        let cb = &cods[pos].1;
        for k in &cb.subs {
            rep.checked[2] += 1;
            let lhs = ca.of(&preimage(f, k)?);
            let rhs = preimage(f, cb.of(k))?;
            if !lhs.is_subset(&rhs) {
                fail(
                    &mut rep,
                    3,
                    Some(fi),
                    format!("f = {:?}, K = {}", f.map(), fmt_set(k)),
                );
            }
        }
    }
    for n in &ca.subs {
        let (q_alg, g) = quotient(a, n)?;
        let cq = Closures::new(r, &q_alg)?;
        for k in &cq.subs {
            rep.checked[4] += 1;
            let lhs = ca.of(&preimage(&g, k)?).clone();
            let rhs = preimage(&g, cq.of(k))?;
            if lhs != rhs {
                fail(
                    &mut rep,
                    5,
                    None,
                    format!("N = {}, K = {}", fmt_set(n), fmt_set(k)),
                );
            }
        }
    }
    rep.violations.sort();
    Ok(rep)
}

/// [`axiom_suite_one`] over a corpus; `morphisms[i]` lists maps out of
/// `corpus[i]`.
pub fn axiom_suite(
    r: &Reflector,
    corpus: &[Arc<FiniteAlgebra>],
    morphisms: &[Vec<Morphism>],
) -> Result<AxiomReport> {
    let mut rep = AxiomReport::default();
    for (i, a) in corpus.iter().enumerate() {
        let ms = morphisms.get(i).map_or(&[][..], |v| &v[..]);
        rep.merge(axiom_suite_one(r, i, a, ms)?);
    }
    Ok(rep)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FermetureReport {
    /// Instances checked for parts 1, 2 and 3.
    pub checked: [usize; 3],
    pub violations: Vec<Violation>,
    /// For a non-Birkhoff reflector: a `K` with `K ∨ 0̄ ⊊ K̄`.
    pub strict_witness: Option<(usize, Vec<usize>)>,
}

impl FermetureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: FermetureReport) {
        for i in 0..3 {
            self.checked[i] += other.checked[i];
        }
        self.violations.extend(other.violations);
        self.violations.sort();
        if self.strict_witness.is_none() {
            self.strict_witness = other.strict_witness;
        }
    }
}

/// 1. `K̄ = (K ∨ 0̄)‾` for every reflector;
/// 2. `K ∨ 0̄ = K̄` for Birkhoff reflectors, and a strict witness is looked
///    for otherwise;
/// 3. `(K ∨ L)‾ = K̄ ∨ L̄` for Birkhoff reflectors.
pub fn fermeture_checks_one(
    r: &Reflector,
    index: usize,
    a: &Arc<FiniteAlgebra>,
) -> Result<FermetureReport> {
    let mut rep = FermetureReport::default();
    let ca = Closures::new(r, a)?;
    let zero_bar = ca.of(&NormalSubobject::zero(a)).clone();
    let birkhoff = r.is_birkhoff();
    for k in &ca.subs {
        let kb = ca.of(k);
        let k_join = join(k, &zero_bar)?;
        rep.checked[0] += 1;
        if ca.of(&k_join) != kb {
            rep.violations.push(Violation {
                axiom: 1,
                algebra: index,
                morphism: None,
                witness: format!("K = {}", fmt_set(k)),
            });
        }
        if birkhoff {
            rep.checked[1] += 1;
            if k_join != *kb {
                rep.violations.push(Violation {
                    axiom: 2,
                    algebra: index,
                    morphism: None,
                    witness: format!("K = {}", fmt_set(k)),
                });
            }
            for l in &ca.subs {
                rep.checked[2] += 1;
                if *ca.of(&join(k, l)?) != join(kb, ca.of(l))? {
                    rep.violations.push(Violation {
                        axiom: 3,
                        algebra: index,
                        morphism: None,
                        witness: format!("K = {}, L = {}", fmt_set(k), fmt_set(l)),
                    });
                }
            }
        } else if rep.strict_witness.is_none() && k_join != *kb {
            rep.strict_witness = Some((index, k.elements()));
        }
    }
    rep.violations.sort();
    Ok(rep)
}

pub fn fermeture_checks(r: &Reflector, corpus: &[Arc<FiniteAlgebra>]) -> Result<FermetureReport> {
    let mut rep = FermetureReport::default();
    for (i, a) in corpus.iter().enumerate() {
        rep.merge(fermeture_checks_one(r, i, a)?);
    }
    Ok(rep)
}

/// One test configuration for the torsion-free closure on `Zⁿ/R`.
#[derive(Clone, Debug)]
pub struct TfInstance {
    pub a: PresentedAb,
    /// Subgroups of `a` (lattices containing its relations) with `k ⊆ l`.
    pub k: Lattice,
    pub l: Lattice,
    /// A morphism `a → b` and a subgroup of `b`.
    pub f: FgAbMap,
    pub kb: Lattice,
    /// A quotient map `a → a/S` and a subgroup of `a/S`.
    pub g: FgAbMap,
    pub kq: Lattice,
}

/// The axioms violated by one torsion-free instance.
pub fn tf_axioms(inst: &TfInstance) -> Result<Vec<u8>> {
    let mut bad = Vec::new();
    let a = &inst.a;
    let k = inst.k.sum(a.relations())?;
    let l = inst.l.sum(a.relations())?;
    let kb = close_tf(a, &k)?;
    if !k.is_subset(&kb) {
        bad.push(1);
    }
    if k.is_subset(&l) && !kb.is_subset(&close_tf(a, &l)?) {
        bad.push(2);
    }
    let b = inst.f.cod();
    let lhs = close_tf(a, &inst.f.preimage(&inst.kb)?)?;
    let rhs = inst.f.preimage(&close_tf(b, &inst.kb)?)?;
    if !lhs.is_subset(&rhs) {
        bad.push(3);
    }
    if close_tf(a, &kb)? != kb {
        bad.push(4);
    }
    if !inst.g.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let q = inst.g.cod();
    let lhs = close_tf(a, &inst.g.preimage(&inst.kq)?)?;
    let rhs = inst.g.preimage(&close_tf(q, &inst.kq)?)?;
    if lhs != rhs {
        bad.push(5);
    }
    Ok(bad)
}
