//! Exact integer and rational linear algebra.
//!
//! Everything downstream (intersection forms, contraction corrections,
//! homology of Seifert total spaces, the obstruction search) is computed with
//! arbitrary-precision integers and rationals. Matrices are immutable values:
//! every operation returns a fresh result.

mod matrix;
mod normal_form;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use matrix::{IntMatrix, RatMatrix};
pub use normal_form::{hnf, integer_kernel, row_lattice_basis, snf, HnfResult, SnfResult};

use crate::arith::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("the zero vector is never primitive")]
    ZeroVector,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}

/// Exact rational inverse of a nonsingular integer matrix.
pub fn invert(g: &IntMatrix) -> Result<RatMatrix, LatticeError> {
    if !g.is_square() {
        return Err(LatticeError::NotSquare { rows: g.rows(), cols: g.cols() });
    }
    if g.det().is_zero() {
        return Err(LatticeError::SingularMatrix);
    }
    g.to_rational().inverse()
}

/// Decides whether `v` is primitive with respect to the functionals given by
/// the rows of `pairing`: the gcd of all values `pairing · v` must be 1.
///
/// With the identity pairing this is the gcd of the coordinates of `v`.
pub fn is_primitive(v: &[BigInt], pairing: &IntMatrix) -> Result<bool, LatticeError> {
    if v.len() != pairing.cols() {
        return Err(LatticeError::DimensionMismatch { expected: pairing.cols(), actual: v.len() });
    }
    if v.iter().all(Zero::is_zero) {
        return Err(LatticeError::ZeroVector);
    }
    Ok(pairing_gcd(v, pairing).is_one())
}

/// gcd of the values `pairing · v` (zero if every value vanishes).
pub fn pairing_gcd(v: &[BigInt], pairing: &IntMatrix) -> BigInt {
    pairing
        .apply(v)
        .iter()
        .fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Rank of `a` over the field with `p` elements.
pub fn rank_mod_p(a: &IntMatrix, p: u64) -> Result<usize, LatticeError> {
    if !is_prime(p) {
        return Err(LatticeError::NotPrime(p));
    }
    let modulus = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .map(|x| x.mod_floor(&modulus).to_u64().expect("residue fits in u64"))
                .collect()
        })
        .collect();
    let pp = p as u128;
    let mut rank = 0;
    for col in 0..a.cols() {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = mod_inverse(m[rank][col], p);
        for j in col..a.cols() {
            m[rank][j] = ((m[rank][j] as u128 * inv as u128) % pp) as u64;
        }
        for r in 0..m.len() {
            if r == rank || m[r][col] == 0 {
                continue;
            }
            let factor = m[r][col] as u128;
            for j in col..a.cols() {
                let sub = (factor * m[rank][j] as u128) % pp;
                m[r][j] = ((m[r][j] as u128 + pp - sub) % pp) as u64;
            }
        }
        rank += 1;
    }
    Ok(rank)
}

fn mod_inverse(x: u64, p: u64) -> u64 {
    let e = BigInt::from(x).extended_gcd(&BigInt::from(p));
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Convenience: converts small integers into a `BigInt` vector.
pub fn int_vec(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

/// Rank over the rationals.
pub fn rank(a: &IntMatrix) -> usize {
    snf(a).d.iter().filter(|x| !x.is_zero()).count()
}

/// True iff the square matrix has determinant ±1.
pub fn is_unimodular(a: &IntMatrix) -> bool {
    a.is_square() && a.det().abs().is_one()
}
