//! Hirzebruch-Jung continued fractions for cyclic quotient singularities.
//!
//! A singularity `C²/Z_m` with action `(z₁, z₂) ↦ (ξz₁, ξʳz₂)` is resolved by a
//! chain of smooth rational curves with self-intersections `-b₁, …, -b_l`,
//! where `m/r = [b₁, …, b_l] = b₁ - 1/(b₂ - 1/(…))`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HjError {
    #[error("invalid cyclic singularity (m={m}, r={r}): need 0 < r < m and gcd(r, m) = 1")]
    InvalidSingularity { m: BigInt, r: BigInt },
    #[error("chain entry {value} at position {index} is below {min}")]
    EntryTooSmall { index: usize, value: BigInt, min: u32 },
    #[error("empty chain")]
    EmptyChain,
    #[error("continued fraction divides by zero at position {index}")]
    DivisionByZero { index: usize },
    #[error("chain evaluates to {value}, which is not of the form m/r with 0 < r < m")]
    NotASingularity { value: BigRational },
}

/// Data `(m, r)` of the action `(ξz₁, ξʳz₂)` of `Z_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicSingularity {
    m: BigInt,
    r: BigInt,
}

impl CyclicSingularity {
    pub fn new(m: impl Into<BigInt>, r: impl Into<BigInt>) -> Result<Self, HjError> {
        let (m, r) = (m.into(), r.into());
        if !r.is_positive() || r >= m || !m.gcd(&r).is_one() {
            return Err(HjError::InvalidSingularity { m, r });
        }
        Ok(Self { m, r })
    }

    pub fn order(&self) -> &BigInt {
        &self.m
    }

    pub fn weight(&self) -> &BigInt {
        &self.r
    }

    /// The singularity `(m, m - r)` whose chain is the dual chain.
    pub fn dual(&self) -> Self {
        Self { m: self.m.clone(), r: &self.m - &self.r }
    }

    /// The same singularity seen from the other end of its chain: `(m, r')`
    /// with `r·r' ≡ 1 (mod m)`.
    pub fn reversed(&self) -> Self {
        let e = self.r.extended_gcd(&self.m);
        Self { m: self.m.clone(), r: e.x.mod_floor(&self.m) }
    }

    /// `A_n` singularity `(n+1, n)`.
    pub fn type_a(n: u64) -> Self {
        Self::new(n + 1, n).expect("A_n data is always valid")
    }
}

impl fmt::Display for CyclicSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.r)
    }
}

/// A Hirzebruch-Jung chain `[b₁, …, b_l]` with every `b_i ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HjChain(Vec<BigInt>);

impl HjChain {
    pub fn new(entries: Vec<BigInt>) -> Result<Self, HjError> {
        if entries.is_empty() {
            return Err(HjError::EmptyChain);
        }
        if let Some((index, value)) =
            entries.iter().enumerate().find(|(_, b)| **b < BigInt::from(2))
        {
            return Err(HjError::EntryTooSmall { index, value: value.clone(), min: 2 });
        }
        Ok(Self(entries))
    }

    pub fn from_small(entries: &[i64]) -> Result<Self, HjError> {
        Self::new(entries.iter().map(|&b| BigInt::from(b)).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().cloned().collect())
    }

    /// Intersection matrix of the exceptional chain: `-b_i` on the diagonal,
    /// `1` between neighbours.
    pub fn gram(&self) -> IntMatrix {
        let l = self.0.len();
        let mut g = IntMatrix::zeros(l, l);
        for (i, b) in self.0.iter().enumerate() {
            g = g.with_entry(i, i, -b.clone());
            if i + 1 < l {
                g = g.with_entry(i, i + 1, BigInt::one()).with_entry(i + 1, i, BigInt::one());
            }
        }
        g
    }
}

impl fmt::Display for HjChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "]")
    }
}

/// Expands `m/r` into its Hirzebruch-Jung continued fraction.
pub fn hj_expand(s: &CyclicSingularity) -> HjChain {
    let (mut num, mut den) = (s.m.clone(), s.r.clone());
    let mut out = Vec::new();
    while den.is_positive() {
        let b = num.div_ceil(&den);
        let next = &b * &den - &num;
        out.push(b);
        num = std::mem::replace(&mut den, next);
    }
    HjChain(out)
}

/// Evaluates a chain back to the rational `b₁ - 1/(b₂ - …)` in lowest terms.
pub fn hj_eval(c: &HjChain) -> BigRational {
    hj_eval_relaxed(&c.0).expect("entries >= 2 never divide by zero")
}

/// Evaluation that also admits entries equal to 1. Such chains can hit a zero
/// denominator, and their value need not lie in the range `m/r > 1`.
pub fn hj_eval_relaxed(entries: &[BigInt]) -> Result<BigRational, HjError> {
    if entries.is_empty() {
        return Err(HjError::EmptyChain);
    }
    if let Some((index, value)) = entries.iter().enumerate().find(|(_, b)| !b.is_positive()) {
        return Err(HjError::EntryTooSmall { index, value: value.clone(), min: 1 });
    }
    // acc = num/den; b - 1/acc = (b*num - den)/num keeps num, den coprime.
    let last = entries.len() - 1;
    let mut num = entries[last].clone();
    let mut den = BigInt::one();
    for index in (0..last).rev() {
        if num.is_zero() {
            return Err(HjError::DivisionByZero { index: index + 1 });
        }
        let next = &entries[index] * &num - &den;
        den = std::mem::replace(&mut num, next);
    }
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    Ok(BigRational::new_raw(num, den))
}

/// The dual chain `[a₁, …, a_k]` with `m/(m - r) = [a₁, …, a_k]`; its length
/// generally differs from that of the primal chain.
pub fn hj_dual(s: &CyclicSingularity) -> HjChain {
    hj_expand(&s.dual())
}

/// Recovers the singularity whose expansion is `b`.
pub fn chain_recognize(b: &HjChain) -> CyclicSingularity {
    let v = hj_eval(b);
    let (m, r) = (v.numer().clone(), v.denom().clone());
    // Chains of length one evaluate to b/1, the singularity (b, 1).
    CyclicSingularity::new(m, r).expect("entries >= 2 evaluate to m/r > 1 in lowest terms")
}

/// Like [`chain_recognize`] for relaxed chains, failing when the value is not
/// a valid singularity (e.g. chains containing a `(-1)`-curve).
pub fn recognize_relaxed(entries: &[BigInt]) -> Result<CyclicSingularity, HjError> {
    let v = hj_eval_relaxed(entries)?;
    let ok = v.is_positive() && v.numer() > v.denom();
    if !ok {
        return Err(HjError::NotASingularity { value: v });
    }
    CyclicSingularity::new(v.numer().clone(), v.denom().clone())
        .map_err(|_| HjError::NotASingularity { value: v })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sing(m: i64, r: i64) -> CyclicSingularity {
        CyclicSingularity::new(m, r).unwrap()
    }

    fn chain(xs: &[i64]) -> HjChain {
        HjChain::from_small(xs).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn expand_examples() {
        assert_eq!(hj_expand(&sing(2, 1)), chain(&[2]));
        assert_eq!(hj_expand(&sing(10, 9)), chain(&[2; 9]));
        assert_eq!(hj_expand(&sing(19, 9)), chain(&[3, 2, 2, 2, 2, 2, 2, 2, 2]));
        assert_eq!(hj_expand(&sing(5, 2)), chain(&[3, 2]));
        assert_eq!(hj_expand(&sing(7, 3)), chain(&[3, 2, 2]));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(hj_eval(&chain(&[2])), q(2, 1));
        assert_eq!(hj_eval(&chain(&[5, 2, 2, 2, 2, 2, 2, 2, 2])), q(37, 9));
        assert_eq!(hj_eval(&chain(&[2, 3])), q(5, 3));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(hj_dual(&sing(2, 1)), chain(&[2]));
        assert_eq!(hj_dual(&sing(10, 9)), chain(&[10]));
        assert_eq!(hj_dual(&sing(5, 2)), chain(&[2, 3]));
        assert_eq!(hj_eval(&hj_dual(&sing(7, 3))), q(7, 4));
    }

    #[test]
    fn recognize_examples() {
        assert_eq!(chain_recognize(&chain(&[2])), sing(2, 1));
        assert_eq!(chain_recognize(&chain(&[3, 2, 2, 2, 2, 2, 2, 2, 2])), sing(19, 9));
        assert_eq!(chain_recognize(&chain(&[2, 2, 2])), sing(4, 3));
    }

    #[test]
    fn reversed_chain_gives_inverse_weight() {
        // [2^8, 3] read from the other end of [3, 2^8]
        let mut entries = vec![2; 8];
        entries.push(3);
        let s = chain_recognize(&chain(&entries));
        assert_eq!(s, sing(19, 17));
        assert_eq!(s.reversed(), sing(19, 9));
    }

    #[test]
    fn relaxed_evaluation() {
        let mut b1: Vec<BigInt> = vec![BigInt::from(1)];
        b1.extend(std::iter::repeat_n(BigInt::from(2), 8));
        assert_eq!(hj_eval_relaxed(&b1).unwrap(), q(1, 9));
        assert!(matches!(recognize_relaxed(&b1), Err(HjError::NotASingularity { .. })));
        let bad = [BigInt::from(2), BigInt::from(1), BigInt::from(1)];
        assert_eq!(hj_eval_relaxed(&bad), Err(HjError::DivisionByZero { index: 1 }));
        assert!(matches!(
            HjChain::from_small(&[2, 1]),
            Err(HjError::EntryTooSmall { index: 1, .. })
        ));
    }

    #[test]
    fn invalid_singularities() {
        assert!(CyclicSingularity::new(4, 2).is_err());
        assert!(CyclicSingularity::new(3, 3).is_err());
        assert!(CyclicSingularity::new(3, 0).is_err());
    }

    #[test]
    fn chain_gram_determinant_is_order() {
        let c = hj_expand(&sing(19, 9));
        let neg = c.gram().det() * if c.len().is_multiple_of(2) { 1 } else { -1 };
        assert_eq!(neg, BigInt::from(19));
    }
}
