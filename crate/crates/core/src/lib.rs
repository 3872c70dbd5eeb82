//! Categorical Galois theory on finite algebras.
//!
//! The crate works with three semi-abelian varieties presented by finite
//! operation tables (groups, loops and not necessarily unital rings) and with
//! finitely generated abelian groups presented by integer matrices. On top of
//! the basic constructions (kernels, quotients, kernel pairs, pullbacks,
//! joins of normal subobjects) it provides:
//!
//! * regular-epi reflectors and their composites ([`reflect`]),
//! * the homological closure operator induced by a reflector ([`closure`]),
//! * relative commutators, centralisation and Galois groups ([`galois`]),
//! * the generalised Hopf formula for the fundamental group ([`hopf`]),
//! * an independent Schur multiplier oracle built on 2-cocycles ([`cohom`]),
//! * deterministic generation of small test corpora ([`corpus`]).
//!
//! Everything here is `no_std` + `alloc`; file formats and the command-line
//! front end live in the `galois-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod closure;
pub mod cohom;
pub mod corpus;
mod error;
pub mod fgab;
pub mod finalg;
pub mod galois;
pub mod hopf;
pub mod reflect;

pub use error::{Error, Result};
pub use fgab::{FgAb, IntMatrix};
pub use finalg::{FiniteAlgebra, Morphism, NormalSubobject, Signature};
pub use reflect::{CompositeAdjunction, Reflector};
