use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::matrix::{gcd, IntMatrix};
use super::snf::smith_normal_form;
use crate::{Error, Result};

/// A finitely generated abelian group `Z^rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_k` with
/// `d₁ | d₂ | … | d_k`, all `dᵢ ≥ 2`. Equality is isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FgAb {
    rank: usize,
    factors: Vec<i128>,
}

impl FgAb {
    pub fn new(rank: usize, factors: Vec<i128>) -> Result<Self> {
        if factors.iter().any(|&d| d < 2) {
            return Err(Error::Malformed(
                "invariant factors must be at least 2".into(),
            ));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Malformed(
                "invariant factors must form a divisibility chain".into(),
            ));
        }
        Ok(Self { rank, factors })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            factors: Vec::new(),
        }
    }

    /// `Z/d`, with `d = 0` meaning `Z`.
    pub fn cyclic(d: i128) -> Self {
        Self::from_cyclic_orders(&[d])
    }

    /// The direct sum of cyclic groups of the given orders, `0` standing
    /// for `Z`; orders need not divide each other.
    pub fn from_cyclic_orders(orders: &[i128]) -> Self {
        let rank = orders.iter().filter(|&&d| d == 0).count();
        let finite: Vec<i128> = orders
            .iter()
            .filter(|&&d| d != 0)
            .map(|d| d.abs())
            .collect();
        let n = finite.len();
        let s = smith_normal_form(&IntMatrix::diagonal(n, n, &finite));
        Self {
            rank,
            factors: s.diagonal.into_iter().filter(|&d| d > 1).collect(),
        }
    }

    /// A finite group from cyclic orders, none of them zero.
    pub fn finite(orders: &[i128]) -> Self {
        debug_assert!(orders.iter().all(|&d| d != 0));
        Self::from_cyclic_orders(orders)
    }

    /// The cokernel of a relation matrix: one generator per column, one
    /// relation per row.
    pub fn from_presentation(relations: &IntMatrix) -> Self {
        let s = smith_normal_form(relations);
        Self {
            rank: relations.cols() - s.rank(),
            factors: s.diagonal.into_iter().filter(|&d| d > 1).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn invariant_factors(&self) -> &[i128] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn order(&self) -> Option<i128> {
        self.is_finite().then(|| self.factors.iter().product())
    }

    /// Generators: `rank` free ones first, then one per invariant factor.
    pub fn generator_count(&self) -> usize {
        self.rank + self.factors.len()
    }

    /// The standard relation matrix: `dᵢ` times the generator of the i-th
    /// torsion summand.
    pub fn presentation(&self) -> IntMatrix {
        let n = self.generator_count();
        let mut m = IntMatrix::zeros(self.factors.len(), n);
        for (i, &d) in self.factors.iter().enumerate() {
            m.set(i, self.rank + i, d);
        }
        m
    }

    /// Cyclic summands as orders, `0` for `Z`.
    pub fn cyclic_orders(&self) -> Vec<i128> {
        let mut v = vec![0; self.rank];
        v.extend_from_slice(&self.factors);
        v
    }

    pub fn torsion(&self) -> Self {
        Self {
            rank: 0,
            factors: self.factors.clone(),
        }
    }

    pub fn tf_quotient(&self) -> Self {
        Self::free(self.rank)
    }

    pub fn direct_sum(&self, other: &FgAb) -> Self {
        let mut orders = self.cyclic_orders();
        orders.extend(other.cyclic_orders());
        Self::from_cyclic_orders(&orders)
    }

    /// Number of cyclic factors of order divisible by `p^k` in the primary
    /// decomposition of the torsion part.
    pub fn p_rank_at_least(&self, p: i128, k: u32) -> usize {
        let q = p.pow(k);
        self.factors.iter().filter(|&&d| d % q == 0).count()
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &FgAb) -> Self {
        let mut orders = Vec::new();
        for a in self.cyclic_orders() {
            for b in other.cyclic_orders() {
                orders.push(cyclic_tensor(a, b));
            }
        }
        Self::from_cyclic_orders(&orders)
    }

    /// `Λ²(self) = ⊕_{i<j} Cᵢ ⊗ Cⱼ` over the cyclic summands.
    pub fn exterior_square(&self) -> Self {
        let c = self.cyclic_orders();
        let mut orders = Vec::new();
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                orders.push(cyclic_tensor(c[i], c[j]));
            }
        }
        Self::from_cyclic_orders(&orders)
    }
}

/// `Z/a ⊗ Z/b` as an order (`0` for `Z`).
fn cyclic_tensor(a: i128, b: i128) -> i128 {
    match (a, b) {
        (0, 0) => 0,
        (0, d) | (d, 0) => d,
        (a, b) => gcd(a, b),
    }
}

impl fmt::Display for FgAb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(alloc::format!("Z^{r}")),
        }
        for d in &self.factors {
            parts.push(alloc::format!("Z/{d}"));
        }
        f.write_str(&parts.join(" x "))
    }
}

impl FromStr for FgAb {
    type Err = Error;

    /// Accepts the display form (`0`, `Z^2 x Z/4`, `Z/2 x Z/6`, ...), with
    /// summands in any order and not necessarily in invariant-factor form.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut orders = Vec::new();
        for part in s.split(" x ") {
            let part = part.trim();
            let bad = || Error::Malformed(alloc::format!("bad abelian group summand `{part}`"));
            if part == "Z" {
                orders.push(0);
            } else if let Some(r) = part.strip_prefix("Z^") {
                let r: usize = r.parse().map_err(|_| bad())?;
                orders.extend(core::iter::repeat(0).take(r));
            } else if let Some(d) = part.strip_prefix("Z/") {
                let d: i128 = d.parse().map_err(|_| bad())?;
                if d < 1 {
                    return Err(bad());
                }
                orders.push(d);
            } else {
                return Err(bad());
            }
        }
        Ok(Self::from_cyclic_orders(&orders))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn presentations() {
        let m = IntMatrix::new(2, 2, vec![2, 0, 0, 2]).unwrap();
        assert_eq!(
            FgAb::from_presentation(&m),
            FgAb::new(0, vec![2, 2]).unwrap()
        );
        assert_eq!(
            FgAb::from_presentation(&IntMatrix::zeros(0, 1)),
            FgAb::free(1)
        );
        let m = IntMatrix::new(1, 3, vec![1, 2, 3]).unwrap();
        assert_eq!(FgAb::from_presentation(&m), FgAb::free(2));
    }

    #[test]
    fn torsion_and_free_parts() {
        let g: FgAb = "Z x Z/4".parse().unwrap();
        assert_eq!(g.torsion(), FgAb::cyclic(4));
        assert_eq!(g.tf_quotient(), FgAb::free(1));
        assert!(FgAb::cyclic(12).tf_quotient().is_zero());
        assert!(FgAb::free(2).torsion().is_zero());
    }

    #[test]
    fn tensor_and_exterior_square() {
        assert!(FgAb::cyclic(2).tensor(&FgAb::cyclic(3)).is_zero());
        assert_eq!(FgAb::finite(&[2, 2]).exterior_square(), FgAb::cyclic(2));
        assert_eq!(FgAb::free(3).exterior_square(), FgAb::free(3));
        assert_eq!(
            FgAb::free(2).tensor(&FgAb::cyclic(6)),
            FgAb::finite(&[6, 6])
        );
        assert_eq!(FgAb::cyclic(4).tensor(&FgAb::cyclic(6)), FgAb::cyclic(2));
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "Z", "Z^3", "Z/2 x Z/4", "Z^2 x Z/6"] {
            let g: FgAb = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        let g: FgAb = "Z/2 x Z/3".parse().unwrap();
        assert_eq!(g.to_string(), "Z/6");
        assert!("Z/0".parse::<FgAb>().is_err());
        assert!("Q".parse::<FgAb>().is_err());
    }

    #[test]
    fn factors_must_chain() {
        assert!(FgAb::new(0, vec![2, 3]).is_err());
        assert!(FgAb::new(0, vec![1]).is_err());
    }
}
