use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// The three varieties an algebra can belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Signature {
    /// One associative operation with neutral element and inverses.
    Group,
    /// Multiplication, left and right division, unit; the multiplication
    /// table is a Latin square.
    Loop,
    /// Abelian group `+` together with an associative, bi-distributive `×`.
    /// A multiplicative unit is not required.
    Ring,
}

impl Signature {
    pub fn name(self) -> &'static str {
        match self {
            Signature::Group => "group",
            Signature::Loop => "loop",
            Signature::Ring => "ring",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "group" => Some(Signature::Group),
            "loop" => Some(Signature::Loop),
            "ring" => Some(Signature::Ring),
            _ => None,
        }
    }

    /// Number of tables a file (and a homomorphism) has to account for.
    pub fn basic_ops(self) -> usize {
        match self {
            Signature::Group | Signature::Loop => 1,
            Signature::Ring => 2,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A pointed algebra given by total operation tables on `0..n`.
///
/// Element `0` is always the point: the identity of a group or loop, the zero
/// of a ring. Tables are stored row-major, `t[a * n + b] = a ∘ b`.
///
/// Table layout by signature:
/// * group: `[·]`
/// * loop: `[·, \, /]` (divisions derived from `·`)
/// * ring: `[+, ×]`
#[derive(Clone)]
pub struct FiniteAlgebra {
    signature: Signature,
    size: usize,
    tables: Vec<Vec<u32>>,
    /// Group inverse or ring negation; empty for loops.
    neg: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature
            && self.size == other.size
            && self.tables[..self.signature.basic_ops()]
                == other.tables[..other.signature.basic_ops()]
    }
}

impl Eq for FiniteAlgebra {}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteAlgebra")
            .field("signature", &self.signature)
            .field("size", &self.size)
            .finish_non_exhaustive()
    }
}

impl FiniteAlgebra {
    /// Validates the tables exhaustively and returns the algebra.
    ///
    /// `tables` holds the basic tables of the signature (one for groups and
    /// loops, `+` then `×` for rings). If the neutral element is not `0` the
    /// elements are relabelled by swapping it with `0`.
    pub fn from_tables(signature: Signature, mut tables: Vec<Vec<u32>>) -> Result<Self> {
        if tables.len() != signature.basic_ops() {
            return Err(Error::Malformed(alloc::format!(
                "a {} needs {} table(s), got {}",
                signature,
                signature.basic_ops(),
                tables.len()
            )));
        }
        let n = table_side(&tables[0])?;
        if n == 0 {
            return Err(Error::Malformed("empty carrier".into()));
        }
        for t in &tables {
            if t.len() != n * n {
                return Err(Error::Malformed("tables have different sizes".into()));
            }
            if let Some(&bad) = t.iter().find(|&&v| v as usize >= n) {
                return Err(Error::Malformed(alloc::format!(
                    "entry {bad} outside 0..{n}"
                )));
            }
        }
        let e = neutral_element(&tables[0], n).ok_or(Error::AxiomViolation {
            axiom: "neutral element: x∘e = x = e∘x",
            witness: [0, 0, 0],
        })?;
        if e != 0 {
            let mut perm: Vec<u32> = (0..n as u32).collect();
            perm.swap(0, e);
            for t in tables.iter_mut() {
                *t = relabel_table(t, n, &perm);
            }
        }
        match signature {
            Signature::Group => check_group(&tables[0], n, "")?,
            Signature::Loop => check_loop(&tables[0], n)?,
            Signature::Ring => check_ring(&tables[0], &tables[1], n)?,
        }
        Ok(Self::assemble(signature, n, tables))
    }

    pub fn group(table: Vec<u32>) -> Result<Self> {
        Self::from_tables(Signature::Group, vec![table])
    }

    pub fn loop_from(table: Vec<u32>) -> Result<Self> {
        Self::from_tables(Signature::Loop, vec![table])
    }

    pub fn ring(add: Vec<u32>, mul: Vec<u32>) -> Result<Self> {
        Self::from_tables(Signature::Ring, vec![add, mul])
    }

    /// Group from a multiplication function on `0..n`.
    pub fn group_from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        Self::group(fn_table(n, f))
    }

    pub fn ring_from_fn(
        n: usize,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        Self::ring(fn_table(n, add), fn_table(n, mul))
    }

    /// The one-element algebra of a signature.
    pub fn trivial(signature: Signature) -> Self {
        Self::assemble(signature, 1, vec![vec![0]; signature.basic_ops()])
    }

    /// Builds an algebra from tables already known to satisfy the axioms with
    /// `0` as the point. Used for quotients, products and subalgebras.
    pub(crate) fn assemble(signature: Signature, n: usize, mut tables: Vec<Vec<u32>>) -> Self {
        debug_assert_eq!(tables.len(), signature.basic_ops());
        let neg = match signature {
            Signature::Group | Signature::Ring => {
                let t = &tables[0];
                let mut neg = vec![0u32; n];
                for a in 0..n {
                    let b = (0..n).find(|&b| t[a * n + b] == 0).expect("inverse exists");
                    neg[a] = b as u32;
                }
                neg
            }
            Signature::Loop => Vec::new(),
        };
        if signature == Signature::Loop {
            let mul = &tables[0];
            let mut ldiv = vec![0u32; n * n];
            let mut rdiv = vec![0u32; n * n];
            for x in 0..n {
                for y in 0..n {
                    let p = mul[x * n + y] as usize;
                    ldiv[x * n + p] = y as u32;
                    rdiv[p * n + y] = x as u32;
                }
            }
            tables.push(ldiv);
            tables.push(rdiv);
        }
        Self {
            signature,
            size: n,
            tables,
            neg,
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        if labels.len() == self.size {
            self.labels = Some(labels);
        }
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// The tables a homomorphism must preserve (the ones stored in files).
    pub fn basic_tables(&self) -> &[Vec<u32>] {
        &self.tables[..self.signature.basic_ops()]
    }

    /// Every stored table, including derived loop divisions.
    pub fn all_tables(&self) -> &[Vec<u32>] {
        &self.tables
    }

    #[inline]
    pub fn op(&self, table: usize, a: usize, b: usize) -> usize {
        self.tables[table][a * self.size + b] as usize
    }

    /// Multiplication: `·` for groups and loops, `×` for rings.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match self.signature {
            Signature::Ring => self.op(1, a, b),
            _ => self.op(0, a, b),
        }
    }

    /// Ring addition, or the group operation.
    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        debug_assert!(self.signature != Signature::Loop);
        self.op(0, a, b)
    }

    /// Group inverse or ring negation.
    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    /// `a \ b`, the unique `x` with `a · x = b`.
    pub fn ldiv(&self, a: usize, b: usize) -> usize {
        match self.signature {
            Signature::Loop => self.op(1, a, b),
            Signature::Group => self.op(0, self.neg(a), b),
            Signature::Ring => self.add(self.neg(a), b),
        }
    }

    /// `a / b`, the unique `x` with `x · b = a`.
    pub fn rdiv(&self, a: usize, b: usize) -> usize {
        match self.signature {
            Signature::Loop => self.op(2, a, b),
            Signature::Group => self.op(0, a, self.neg(b)),
            Signature::Ring => self.add(a, self.neg(b)),
        }
    }

    /// `a - b` in a ring, `a · b⁻¹` in a group.
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.rdiv(a, b)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.size;
        (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul(a, b);
                (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }

    /// Whether the primary operation (`·` or `+`) is commutative and
    /// associative with inverses, i.e. the algebra is an abelian group.
    pub fn is_abelian_group(&self) -> bool {
        self.signature == Signature::Group && self.is_commutative()
    }

    /// The subalgebra generated by `seeds` (the point is always included),
    /// as a membership mask.
    ///
    /// Closure under the basic operations suffices in every signature: in a
    /// finite loop a subset closed under `·` is closed under the divisions, and
    /// in a finite group or ring additive inverses are powers.
    pub fn generated(&self, seeds: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.size];
        mask[0] = true;
        let mut members = vec![0usize];
        for &s in seeds {
            if !mask[s] {
                mask[s] = true;
                members.push(s);
            }
        }
        self.close_mask(&mut mask, &mut members);
        mask
    }

    /// Closes `mask` under the basic operations; `members` lists the elements
    /// already set in `mask`.
    pub(crate) fn close_mask(&self, mask: &mut [bool], members: &mut Vec<usize>) {
        let ops = self.signature.basic_ops();
        let mut i = 0;
        while i < members.len() {
            let a = members[i];
            let mut j = 0;
            while j <= i {
                let b = members[j];
                for t in 0..ops {
                    for c in [self.op(t, a, b), self.op(t, b, a)] {
                        if !mask[c] {
                            mask[c] = true;
                            members.push(c);
                        }
                    }
                }
                j += 1;
            }
            i += 1;
        }
    }

    /// Whether `mask` is closed under every operation of the signature.
    pub fn is_subalgebra(&self, mask: &[bool]) -> bool {
        if !mask[0] {
            return false;
        }
        let members: Vec<usize> = (0..self.size).filter(|&x| mask[x]).collect();
        self.tables.iter().enumerate().all(|(t, _)| {
            members
                .iter()
                .all(|&a| members.iter().all(|&b| mask[self.op(t, a, b)]))
        })
    }

    /// The subalgebra on `mask` with elements relabelled in increasing order,
    /// together with the embedding as a list of ambient indices.
    pub fn subalgebra(&self, mask: &[bool]) -> Result<(FiniteAlgebra, Vec<u32>)> {
        if !self.is_subalgebra(mask) {
            return Err(Error::Malformed(
                "subset is not closed under the operations".into(),
            ));
        }
        let embed: Vec<u32> = (0..self.size)
            .filter(|&x| mask[x])
            .map(|x| x as u32)
            .collect();
        let mut index = vec![u32::MAX; self.size];
        for (i, &x) in embed.iter().enumerate() {
            index[x as usize] = i as u32;
        }
        let m = embed.len();
        let tables = (0..self.signature.basic_ops())
            .map(|t| {
                let mut out = Vec::with_capacity(m * m);
                for &a in &embed {
                    for &b in &embed {
                        out.push(index[self.op(t, a as usize, b as usize)]);
                    }
                }
                out
            })
            .collect();
        Ok((FiniteAlgebra::assemble(self.signature, m, tables), embed))
    }

    /// Direct product; the pair `(a, b)` has index `a * |other| + b`.
    pub fn product(&self, other: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch);
        }
        let (n, m) = (self.size, other.size);
        let size = n * m;
        let tables = (0..self.signature.basic_ops())
            .map(|t| {
                let mut out = Vec::with_capacity(size * size);
                for a in 0..size {
                    for b in 0..size {
                        let x = self.op(t, a / m, b / m);
                        let y = other.op(t, a % m, b % m);
                        out.push((x * m + y) as u32);
                    }
                }
                out
            })
            .collect();
        Ok(FiniteAlgebra::assemble(self.signature, size, tables))
    }

    /// Applies the bijection `perm` (old index → new index) to every table.
    /// `perm[0]` must be `0`.
    pub fn relabel(&self, perm: &[u32]) -> FiniteAlgebra {
        debug_assert_eq!(perm[0], 0);
        let tables = self
            .basic_tables()
            .iter()
            .map(|t| relabel_table(t, self.size, perm))
            .collect();
        FiniteAlgebra::assemble(self.signature, self.size, tables)
    }
}

fn table_side(t: &[u32]) -> Result<usize> {
    let n = t.len().isqrt();
    if n * n == t.len() {
        return Ok(n);
    }
    Err(Error::Malformed(alloc::format!(
        "table of {} entries is not square",
        t.len()
    )))
}

fn fn_table(n: usize, f: impl Fn(usize, usize) -> usize) -> Vec<u32> {
    let mut t = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            t.push(f(a, b) as u32);
        }
    }
    t
}

fn neutral_element(t: &[u32], n: usize) -> Option<usize> {
    (0..n).find(|&e| (0..n).all(|x| t[e * n + x] as usize == x && t[x * n + e] as usize == x))
}

pub(crate) fn relabel_table(t: &[u32], n: usize, perm: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            let pa = perm[a] as usize;
            let pb = perm[b] as usize;
            out[pa * n + pb] = perm[t[a * n + b] as usize];
        }
    }
    out
}

fn check_associative(t: &[u32], n: usize, axiom: &'static str) -> Result<()> {
    for a in 0..n {
        for b in 0..n {
            let ab = t[a * n + b] as usize;
            for c in 0..n {
                let bc = t[b * n + c] as usize;
                if t[ab * n + c] != t[a * n + bc] {
                    return Err(Error::AxiomViolation {
                        axiom,
                        witness: [a, b, c],
                    });
                }
            }
        }
    }
    Ok(())
}

fn check_group(t: &[u32], n: usize, prefix: &str) -> Result<()> {
    let additive = !prefix.is_empty();
    for a in 0..n {
        let right = (0..n).find(|&b| t[a * n + b] == 0);
        let left = (0..n).find(|&b| t[b * n + a] == 0);
        if right.is_none() || left.is_none() {
            return Err(Error::AxiomViolation {
                axiom: if additive {
                    "additive inverse: x + (-x) = 0"
                } else {
                    "inverse: x·x⁻¹ = 1 = x⁻¹·x"
                },
                witness: [a, 0, 0],
            });
        }
    }
    check_associative(
        t,
        n,
        if additive {
            "additive associativity: (x+y)+z = x+(y+z)"
        } else {
            "associativity: (x·y)·z = x·(y·z)"
        },
    )
}

fn check_loop(t: &[u32], n: usize) -> Result<()> {
    for x in 0..n {
        let mut seen = vec![usize::MAX; n];
        for y in 0..n {
            let p = t[x * n + y] as usize;
            if seen[p] != usize::MAX {
                return Err(Error::AxiomViolation {
                    axiom: "left division: y = x\\(x·y)",
                    witness: [x, seen[p], y],
                });
            }
            seen[p] = y;
        }
    }
    for y in 0..n {
        let mut seen = vec![usize::MAX; n];
        for x in 0..n {
            let p = t[x * n + y] as usize;
            if seen[p] != usize::MAX {
                return Err(Error::AxiomViolation {
                    axiom: "right division: x = (x·y)/y",
                    witness: [seen[p], x, y],
                });
            }
            seen[p] = x;
        }
    }
    Ok(())
}

fn check_ring(add: &[u32], mul: &[u32], n: usize) -> Result<()> {
    check_group(add, n, "additive")?;
    for a in 0..n {
        for b in 0..a {
            if add[a * n + b] != add[b * n + a] {
                return Err(Error::AxiomViolation {
                    axiom: "additive commutativity: x+y = y+x",
                    witness: [a, b, 0],
                });
            }
        }
    }
    check_associative(mul, n, "multiplicative associativity: (xy)z = x(yz)")?;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let bc = add[b * n + c] as usize;
                let left = mul[a * n + bc];
                let left_exp = add[mul[a * n + b] as usize * n + mul[a * n + c] as usize];
                if left != left_exp {
                    return Err(Error::AxiomViolation {
                        axiom: "left distributivity: x(y+z) = xy+xz",
                        witness: [a, b, c],
                    });
                }
                let right = mul[bc * n + a];
                let right_exp = add[mul[b * n + a] as usize * n + mul[c * n + a] as usize];
                if right != right_exp {
                    return Err(Error::AxiomViolation {
                        axiom: "right distributivity: (y+z)x = yx+zx",
                        witness: [b, c, a],
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmod(n: usize) -> FiniteAlgebra {
        FiniteAlgebra::group_from_fn(n, |a, b| (a + b) % n).unwrap()
    }

    #[test]
    fn z2_is_a_group() {
        let g = FiniteAlgebra::group(vec![0, 1, 1, 0]).unwrap();
        assert_eq!(g.size(), 2);
        assert_eq!(g.signature(), Signature::Group);
        assert_eq!(g.neg(1), 1);
    }

    #[test]
    fn z8_ring_loads() {
        let r = FiniteAlgebra::ring_from_fn(8, |a, b| (a + b) % 8, |a, b| (a * b) % 8).unwrap();
        assert_eq!(r.size(), 8);
        assert!(r.is_commutative());
        assert_eq!(r.neg(3), 5);
    }

    #[test]
    fn point_is_normalised() {
        // Z/2 written with the identity at index 1.
        let g = FiniteAlgebra::group(vec![1, 0, 0, 1]).unwrap();
        assert_eq!(g.op(0, 0, 0), 0);
        assert_eq!(g.op(0, 1, 1), 0);
    }

    #[test]
    fn latin_failure_names_left_division() {
        // A 5x5 table with unit 0 whose row 1 repeats an entry.
        let mut t: Vec<u32> = Vec::new();
        for a in 0..5u32 {
            for b in 0..5u32 {
                t.push((a + b) % 5);
            }
        }
        t[5 + 2] = 4; // 1·2 = 4, but 1·3 = 4 already
        match FiniteAlgebra::loop_from(t) {
            Err(Error::AxiomViolation { axiom, witness }) => {
                assert!(axiom.starts_with("left division"));
                assert_eq!(witness[0], 1);
            }
            other => panic!("expected axiom violation, got {other:?}"),
        }
    }

    #[test]
    fn non_associative_group_table_is_rejected() {
        // The order-5 loop with a non-associative Latin square.
        let t = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(FiniteAlgebra::loop_from(t.clone()).is_ok());
        assert!(matches!(
            FiniteAlgebra::group(t),
            Err(Error::AxiomViolation { .. })
        ));
    }

    #[test]
    fn ring_distributivity_is_checked() {
        let err = FiniteAlgebra::ring_from_fn(
            3,
            |a, b| (a + b) % 3,
            |a, b| if a == 1 && b == 1 { 1 } else { 0 },
        )
        .unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { .. }));
    }

    #[test]
    fn product_and_subalgebra() {
        let z2 = zmod(2);
        let z3 = zmod(3);
        let p = z2.product(&z3).unwrap();
        assert_eq!(p.size(), 6);
        assert!(p.is_commutative());
        let gen = p.generated(&[3]); // (1, 0)
        assert_eq!(gen.iter().filter(|&&b| b).count(), 2);
        let (sub, emb) = p.subalgebra(&gen).unwrap();
        assert_eq!(sub.size(), 2);
        assert_eq!(emb, vec![0, 3]);
    }

    #[test]
    fn loop_divisions_are_derived() {
        let t = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        let l = FiniteAlgebra::loop_from(t).unwrap();
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(l.ldiv(x, l.mul(x, y)), y);
                assert_eq!(l.rdiv(l.mul(x, y), y), x);
                assert_eq!(l.mul(x, l.ldiv(x, y)), y);
                assert_eq!(l.mul(l.rdiv(x, y), y), x);
            }
        }
    }
}
