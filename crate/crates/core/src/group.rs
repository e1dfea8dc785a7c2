//! Finitely generated abelian groups in prime-power form.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::factorize;
use crate::lattice::{snf, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupParseError {
    #[error("cannot parse group term `{0}`")]
    BadTerm(String),
    #[error("cyclic order must be positive, got {0}")]
    BadOrder(String),
}

/// `Z^k ⊕ ⊕ Z_{p^e}^{c}`; `torsion` maps `(p, e)` to the multiplicity `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    pub torsion: BTreeMap<(u64, u32), usize>,
}

impl FgAbelianGroup {
    pub fn free(k: usize) -> Self {
        Self { free_rank: k, torsion: BTreeMap::new() }
    }

    /// `Z^k` plus one `Z_n` for each listed order, split into prime powers.
    pub fn new(free_rank: usize, cyclic_orders: &[BigInt]) -> Self {
        let mut g = Self::free(free_rank);
        for n in cyclic_orders {
            g.add_cyclic(n, 1);
        }
        g
    }

    /// Adds `count` copies of `Z_n`. `n = 1` is trivial, `n = 0` is free.
    pub fn add_cyclic(&mut self, n: &BigInt, count: usize) {
        if count == 0 || n.abs().is_one() {
            return;
        }
        if n.is_zero() {
            self.free_rank += count;
            return;
        }
        for (p, e) in factorize(n) {
            *self.torsion.entry((p, e)).or_insert(0) += count;
        }
    }

    /// Cokernel of the map `Z^rows → Z^cols` given by the rows of `a`.
    pub fn cokernel(a: &IntMatrix) -> Self {
        let s = snf(a);
        let mut g = Self::free(a.cols() - s.rank());
        for d in s.d.iter().filter(|d| !d.is_zero()) {
            g.add_cyclic(d, 1);
        }
        g
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut g = self.clone();
        g.free_rank += other.free_rank;
        for (k, c) in &other.torsion {
            *g.torsion.entry(*k).or_insert(0) += c;
        }
        g
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion
            .iter()
            .map(|(&(p, e), &c)| BigInt::from(p).pow(e * c as u32))
            .fold(BigInt::one(), |a, b| a * b)
    }

    /// Multiplicity of `Z_{p^e}`.
    pub fn multiplicity(&self, p: u64, e: u32) -> usize {
        self.torsion.get(&(p, e)).copied().unwrap_or(0)
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.torsion.keys().map(|&(p, _)| p).collect();
        ps.dedup();
        ps
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        match self.free_rank {
            0 => {}
            1 => terms.push("Z".to_string()),
            k => terms.push(format!("Z^{k}")),
        }
        for (&(p, e), &c) in &self.torsion {
            let q = BigInt::from(p).pow(e);
            terms.push(if c == 1 { format!("Z_{q}") } else { format!("Z_{q}^{c}") });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FromStr for FgAbelianGroup {
    type Err = GroupParseError;

    /// Parses sums like `Z^2 + Z_2^2 + Z_4` (commas also separate terms), or
    /// `0` for the trivial group.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut g = Self::default();
        for term in s.split(['+', ',']).map(str::trim) {
            if term == "0" {
                continue;
            }
            let bad = || GroupParseError::BadTerm(term.to_string());
            let (base, exp) = match term.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<usize>().map_err(|_| bad())?),
                None => (term, 1),
            };
            if base == "Z" {
                g.free_rank += exp;
            } else if let Some(order) = base.strip_prefix("Z_") {
                let n: BigInt = order.trim().parse().map_err(|_| bad())?;
                if !n.is_positive() {
                    return Err(GroupParseError::BadOrder(order.to_string()));
                }
                g.add_cyclic(&n, exp);
            } else {
                return Err(bad());
            }
        }
        Ok(g)
    }
}

/// Prime-power orders `p^e` as integers, for display.
pub fn prime_power(p: u64, e: u32) -> u128 {
    BigInt::from(p).pow(e).to_u128().expect("prime power fits in u128")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let g = FgAbelianGroup::new(1, &[6.into(), 9.into(), 3.into()]);
        assert_eq!(g.to_string(), "Z + Z_2 + Z_3^2 + Z_9");
        assert_eq!(g.torsion_order(), BigInt::from(162));
        assert_eq!(FgAbelianGroup::free(0).to_string(), "0");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["Z^2 + Z_2^2 + Z_4^2 + Z_8^2", "Z_5^4", "0", "Z", "Z^22"] {
            let g: FgAbelianGroup = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        let g: FgAbelianGroup = "Z_6 + Z".parse().unwrap();
        assert_eq!(g, FgAbelianGroup::new(1, &[2.into(), 3.into()]));
        assert!("Q^2".parse::<FgAbelianGroup>().is_err());
        assert!("Z_0".parse::<FgAbelianGroup>().is_err());
    }

    #[test]
    fn cokernel_of_matrix() {
        let a = IntMatrix::from_rows(&[[2, 0, 0], [0, 6, 0]]);
        let g = FgAbelianGroup::cokernel(&a);
        assert_eq!(g.to_string(), "Z + Z_2^2 + Z_3");
    }
}
