//! Finitely generated abelian groups over exact integers.

mod group;
mod lattice;
mod map;
mod matrix;
mod snf;

pub use group::FgAb;
pub use lattice::{hermite_normal_form, Lattice};
pub use map::{quotient, subgroup, FgAbMap, PresentedAb};
pub use matrix::IntMatrix;
pub use snf::{left_kernel, smith_normal_form, Snf};

pub(crate) use matrix::{ext_gcd, gcd};
