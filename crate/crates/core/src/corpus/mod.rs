//! Deterministic test corpora: groups of order at most 16, loops of order
//! at most 6, rings of order at most 8, commutative rings up to 16,
//! and random finitely generated abelian groups.

mod groups;
mod loops;
pub mod named;
mod rings;

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closure::TfInstance;
use crate::fgab::{FgAbMap, IntMatrix, Lattice, PresentedAb};
use crate::finalg::{all_normal_subobjects, quotient, FiniteAlgebra, Morphism};

pub use groups::{groups_by_table_search, groups_of_order};
pub use loops::{latin_loops, loops_of_order};
pub use rings::{extra_commutative_rings, rings_of_order, EXHAUSTIVE_COMMUTATIVE};

/// Number of isomorphism classes of groups of order `1..=16`. Derived by
/// cyclic-extension enumeration; orders up to 8 agree with a direct table
/// search.
pub const GROUP_COUNTS: [usize; 16] = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14];

/// Loops of order `1..=6`, by exhaustive normalised Latin-square search.
pub const LOOP_COUNTS: [usize; 6] = [1, 1, 1, 2, 6, 109];

/// Rings (not necessarily unital) of order `1..=8`, by exhaustive search
/// over bilinear associative products.
pub const RING_COUNTS: [usize; 8] = [1, 2, 2, 11, 2, 4, 2, 52];

/// Number of commutative rings of order `1..=15`.
pub const COMMUTATIVE_RING_COUNTS: [usize; 15] = [1, 2, 2, 9, 2, 4, 2, 34, 9, 4, 2, 18, 2, 4, 4];

/// A named corpus member.
#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub algebra: Arc<FiniteAlgebra>,
}

fn entries(prefix: &str, n: usize, algebras: Vec<Arc<FiniteAlgebra>>) -> Vec<Entry> {
    algebras
        .into_iter()
        .enumerate()
        .map(|(i, algebra)| Entry {
            name: format!("{prefix}{n:02}-{i:02}"),
            algebra,
        })
        .collect()
}

/// Groups of order `1..=max`, up to isomorphism.
pub fn groups(max: usize) -> Vec<Entry> {
    (1..=max)
        .flat_map(|n| entries("g", n, groups_of_order(n)))
        .collect()
}

/// Loops of order `1..=max` (`max ≤ 6` is practical), up to isomorphism.
pub fn loops(max: usize) -> Vec<Entry> {
    (1..=max)
        .flat_map(|n| entries("l", n, loops_of_order(n)))
        .collect()
}

/// Rings of order `1..=max` (`max ≤ 8`), up to isomorphism.
pub fn rings(max: usize) -> Vec<Entry> {
    (1..=max)
        .flat_map(|n| entries("r", n, rings_of_order(n, false)))
        .collect()
}

/// Commutative rings: exhaustive up to order 8, constructed ones above.
pub fn commutative_rings(max: usize) -> Vec<Entry> {
    let exact = max.min(EXHAUSTIVE_COMMUTATIVE);
    let small: Vec<Arc<FiniteAlgebra>> =
        (1..=exact).flat_map(|n| rings_of_order(n, true)).collect();
    let mut out = Vec::new();
    for n in 1..=exact {
        let these = small.iter().filter(|r| r.size() == n).cloned().collect();
        out.extend(entries("c", n, these));
    }
    if max > exact {
        let extra = extra_commutative_rings(&small, max);
        for n in exact + 1..=max {
            let these = extra.iter().filter(|r| r.size() == n).cloned().collect();
            out.extend(entries("c", n, these));
        }
    }
    out
}

/// The quotient maps `A → A/N`, one per normal subobject `N`. Every
/// surjection out of `A` is one of these followed by an isomorphism.
pub fn quotient_maps(a: &Arc<FiniteAlgebra>) -> Vec<Morphism> {
    all_normal_subobjects(a)
        .iter()
        .map(|n| quotient(a, n).expect("normal subobject").1)
        .collect()
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i128) -> IntMatrix {
    let data = (0..rows * cols)
        .map(|_| rng.gen_range(-bound..=bound))
        .collect();
    IntMatrix::new(rows, cols, data).expect("shape")
}

/// A lattice spanned by up to `max_rows` random rows, summed with `base`.
fn random_sublattice(rng: &mut ChaCha8Rng, base: &Lattice, max_rows: usize) -> Lattice {
    let rows = rng.gen_range(0..=max_rows);
    let m = random_matrix(rng, rows, base.dim(), 4);
    Lattice::span(&m).sum(base).expect("same dimension")
}

/// Random configurations for the torsion-free closure axioms on `Zⁿ/R`,
/// `n ≤ 3`.
pub fn random_tf_instances(seed: u64, count: usize) -> Vec<TfInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=3);
            let rel_rows = rng.gen_range(0..=n);
            let a = PresentedAb::new(&random_matrix(&mut rng, rel_rows, n, 6));
            let k = random_sublattice(&mut rng, a.relations(), 2);
            let l = random_sublattice(&mut rng, &k, 2);

            let m = rng.gen_range(1..=3);
            let matrix = random_matrix(&mut rng, n, m, 3);
            let forced = a.relations().image(&matrix).expect("shapes agree");
            let b = PresentedAb::from_lattice(random_sublattice(&mut rng, &forced, 1));
            let f = FgAbMap::new(a.clone(), b.clone(), matrix)
                .expect("relations respected by construction");
            let kb = random_sublattice(&mut rng, b.relations(), 2);

            let s = random_sublattice(&mut rng, &Lattice::zero(n), 2);
            let g = FgAbMap::quotient_map(&a, &s).expect("same dimension");
            let kq = random_sublattice(&mut rng, g.cod().relations(), 2);
            TfInstance {
                a,
                k,
                l,
                f,
                kb,
                g,
                kq,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_group_counts() {
        for n in 1..=8 {
            assert_eq!(groups_of_order(n).len(), GROUP_COUNTS[n - 1], "order {n}");
        }
    }

    #[test]
    fn loops_of_order_four() {
        let l = loops_of_order(4);
        assert_eq!(l.len(), 2);
        assert!(l.iter().all(|x| x.is_associative()));
    }

    #[test]
    fn rings_on_two_elements() {
        let r = rings_of_order(2, false);
        assert_eq!(r.len(), 2);
        assert_eq!(r.iter().filter(|x| x.mul(1, 1) == 1).count(), 1);
    }

    #[test]
    fn least_nonassociative_loop() {
        let l = named::least_nonassociative_loop5();
        assert_eq!(l.size(), 5);
        assert!(!l.is_associative());
    }

    #[test]
    fn tf_instances_are_deterministic() {
        let a = random_tf_instances(7, 5);
        let b = random_tf_instances(7, 5);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.a, y.a);
            assert_eq!(x.k, y.k);
        }
    }

    #[test]
    fn named_algebras() {
        assert_eq!(named::quaternion8().mul(2, 2), named::Q8_MINUS_ONE);
        assert!(!named::dihedral(4).is_commutative());
        assert!(!named::upper_triangular_f2().is_commutative());
        assert_eq!(named::sign_map().dom().size(), 6);
    }
}
