//! Finite pointed algebras presented by operation tables and the basic
//! categorical constructions on them.

mod algebra;
mod exact;
mod iso;
mod limits;
mod morphism;
mod normal;

pub use algebra::{FiniteAlgebra, Signature};
pub use exact::ShortExactSequence;
pub use iso::{
    abelian_structure, canonical_form, describe, element_profile, factorizations, find_isomorphism,
    find_section, fingerprint, generators, homomorphisms, iso_type, IsoType,
    DEFAULT_CANONICAL_BOUND,
};
pub use limits::{kernel_pair, pullback, pullback_comparison, KernelPair, Pullback};
pub use morphism::Morphism;
pub use normal::{
    all_normal_subobjects, congruence_closure, direct_image, is_normal, join, kernel, meet,
    normal_closure, preimage, pushout_of_quotients, quotient, NormalSubobject,
};

pub(crate) use morphism::same;
