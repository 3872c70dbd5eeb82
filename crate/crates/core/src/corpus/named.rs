//! Small algebras that appear in examples and tests.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::finalg::{FiniteAlgebra, Morphism};

/// `Z/n` as a group.
pub fn cyclic(n: usize) -> Arc<FiniteAlgebra> {
    Arc::new(FiniteAlgebra::group_from_fn(n, |a, b| (a + b) % n).expect("Z/n is a group"))
}

/// `Z/2 × Z/2`, the pair `(a, b)` at index `2a + b`.
pub fn klein4() -> Arc<FiniteAlgebra> {
    Arc::new(cyclic(2).product(&cyclic(2)).expect("same signature"))
}

/// Permutations of `{0, 1, 2}` in the order `id, (012), (021), (01), (02), (12)`.
const S3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 2, 0],
    [2, 0, 1],
    [1, 0, 2],
    [2, 1, 0],
    [0, 2, 1],
];

pub const S3_ROTATION: usize = 1;
pub const S3_TRANSPOSITION: usize = 3;

/// The symmetric group on three letters; `(στ)(x) = σ(τ(x))`.
pub fn symmetric3() -> Arc<FiniteAlgebra> {
    Arc::new(
        FiniteAlgebra::group_from_fn(6, |a, b| {
            let p = [S3[a][S3[b][0]], S3[a][S3[b][1]], S3[a][S3[b][2]]];
            S3.iter()
                .position(|q| *q == p)
                .expect("closed under composition")
        })
        .expect("S3 is a group"),
    )
}

/// `A₃` inside [`symmetric3`].
pub fn s3_rotations() -> Vec<usize> {
    alloc::vec![0, 1, 2]
}

/// The sign `S₃ → Z/2`.
pub fn sign_map() -> Morphism {
    Morphism::new(symmetric3(), cyclic(2), alloc::vec![0, 0, 0, 1, 1, 1])
        .expect("sign is a homomorphism")
}

/// `Q₈ = {±1, ±i, ±j, ±k}`; index `2u + s` for the unit `u ∈ {1, i, j, k}`
/// and sign `s` (`1` meaning negative).
pub fn quaternion8() -> Arc<FiniteAlgebra> {
    // Products of basis units as (unit, negative).
    const T: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    Arc::new(
        FiniteAlgebra::group_from_fn(8, |a, b| {
            let (u, s) = T[a / 2][b / 2];
            2 * u + (s + a % 2 + b % 2) % 2
        })
        .expect("Q8 is a group"),
    )
}

pub const Q8_MINUS_ONE: usize = 1;

/// The dihedral group of order `2n`; `r^a s^b` at index `a + n·b`.
pub fn dihedral(n: usize) -> Arc<FiniteAlgebra> {
    Arc::new(
        FiniteAlgebra::group_from_fn(2 * n, |x, y| {
            let (a, b) = (x % n, x / n);
            let (c, d) = (y % n, y / n);
            let c = if b == 1 { (n - c) % n } else { c };
            (a + c) % n + n * ((b + d) % 2)
        })
        .expect("dihedral groups are groups"),
    )
}

/// `Z/n` as a ring.
pub fn zmod_ring(n: usize) -> Arc<FiniteAlgebra> {
    Arc::new(
        FiniteAlgebra::ring_from_fn(n, |a, b| (a + b) % n, |a, b| (a * b) % n)
            .expect("Z/n is a ring"),
    )
}

/// Upper triangular 2×2 matrices over `F₂`; `[[a, b], [0, c]]` at index
/// `a + 2b + 4c`.
pub fn upper_triangular_f2() -> Arc<FiniteAlgebra> {
    let split = |x: usize| (x & 1, (x >> 1) & 1, (x >> 2) & 1);
    Arc::new(
        FiniteAlgebra::ring_from_fn(
            8,
            |x, y| x ^ y,
            |x, y| {
                let (a, b, c) = split(x);
                let (d, e, f) = split(y);
                (a & d) | ((((a & e) ^ (b & f)) & 1) << 1) | ((c & f) << 2)
            },
        )
        .expect("matrix ring"),
    )
}

/// A group viewed as a loop.
pub fn as_loop(g: &Arc<FiniteAlgebra>) -> Arc<FiniteAlgebra> {
    Arc::new(FiniteAlgebra::loop_from(g.basic_tables()[0].clone()).expect("a group is a loop"))
}

/// The nonassociative loop of order 5 whose multiplication table comes
/// first in row-major lexicographic order.
pub fn least_nonassociative_loop5() -> Arc<FiniteAlgebra> {
    let mut found = None;
    super::loops::latin_loops(5, |t| {
        let l = FiniteAlgebra::loop_from(t.to_vec()).expect("normalised Latin square");
        if l.is_associative() {
            true
        } else {
            found = Some(l);
            false
        }
    });
    Arc::new(found.expect("a nonassociative loop of order 5 exists"))
}
