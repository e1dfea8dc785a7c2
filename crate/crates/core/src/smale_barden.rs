//! Invariants of simply connected 5-manifolds read off `H₂(M, Z)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::group::FgAbelianGroup;

/// Barden's invariant `i(M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BardenInvariant {
    Zero,
    Infinity,
    Declared(u32),
}

impl fmt::Display for BardenInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BardenInvariant::Zero => write!(f, "0"),
            BardenInvariant::Infinity => write!(f, "inf"),
            BardenInvariant::Declared(j) => write!(f, "{j}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SbWarning {
    /// Some `c(p^i)` is odd, so the torsion is not of the form `Z_{m_i}^{2g_i}`.
    NonSeifertRealizable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmaleBardenInvariants {
    pub k: usize,
    /// `c(p^i)` keyed by `(p, i)`.
    pub c_table: BTreeMap<(u64, u32), usize>,
    /// `t(p) = #{i : c(p^i) > 0}`.
    pub t_table: BTreeMap<u64, usize>,
    pub t_max: usize,
    /// `max c(p^i)`; the invariant `𝐜` is half of it.
    pub c_max_twice: usize,
    pub barden_i: BardenInvariant,
    pub spin: bool,
    pub warnings: Vec<SbWarning>,
}

impl SmaleBardenInvariants {
    pub fn c_max(&self) -> BigRational {
        BigRational::new(BigInt::from(self.c_max_twice), BigInt::from(2))
    }

    pub fn t(&self, p: u64) -> usize {
        self.t_table.get(&p).copied().unwrap_or(0)
    }

    pub fn c(&self, p: u64, i: u32) -> usize {
        self.c_table.get(&(p, i)).copied().unwrap_or(0)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.c_table.is_empty()
    }
}

pub fn invariants_from_group(g: &FgAbelianGroup, spin: bool, barden_i: BardenInvariant) -> SmaleBardenInvariants {
    let c_table: BTreeMap<(u64, u32), usize> =
        g.torsion.iter().filter(|(_, &c)| c > 0).map(|(&k, &c)| (k, c)).collect();
    let mut t_table = BTreeMap::new();
    for &(p, _) in c_table.keys() {
        *t_table.entry(p).or_insert(0) += 1;
    }
    let t_max = t_table.values().copied().max().unwrap_or(0);
    let c_max_twice = c_table.values().copied().max().unwrap_or(0);
    let warnings = if c_table.values().any(|c| c % 2 == 1) {
        vec![SbWarning::NonSeifertRealizable]
    } else {
        Vec::new()
    };
    SmaleBardenInvariants { k: g.free_rank, c_table, t_table, t_max, c_max_twice, barden_i, spin, warnings }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub reasons: Vec<String>,
}

impl Verdict {
    fn from_reasons(reasons: Vec<String>) -> Self {
        Self { holds: reasons.is_empty(), reasons }
    }
}

/// `t(p) ≤ k + 1` for all `p`, `i(M) ∈ {0, ∞}`, and `t(2) ≤ k` when non-spin.
pub fn gk_condition(inv: &SmaleBardenInvariants) -> Verdict {
    let mut reasons = Vec::new();
    for (&p, &t) in &inv.t_table {
        if t > inv.k + 1 {
            reasons.push(format!("t({p}) = {t} > k + 1 = {}", inv.k + 1));
        }
    }
    if let BardenInvariant::Declared(j) = inv.barden_i {
        reasons.push(format!("i(M) = {j} is not 0 or inf"));
    }
    let non_spin = !inv.spin || inv.barden_i == BardenInvariant::Infinity;
    if non_spin && inv.t(2) > inv.k {
        reasons.push(format!("non-spin with t(2) = {} > k = {}", inv.t(2), inv.k));
    }
    Verdict::from_reasons(reasons)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NullVerdict {
    pub admissible: bool,
    pub reasons: Vec<String>,
    /// `b₂ = 21` forces the structure to be regular.
    pub regular_required: bool,
}

/// Torsion-free, `2 ≤ k ≤ 21`, spin.
pub fn null_sasakian_constraints(inv: &SmaleBardenInvariants) -> NullVerdict {
    let mut reasons = Vec::new();
    if !inv.is_torsion_free() {
        reasons.push("H_2 has torsion".to_string());
    }
    if inv.k < 2 {
        reasons.push(format!("b_2 = {} < 2", inv.k));
    }
    if inv.k > 21 {
        reasons.push(format!("b_2 = {} > 21", inv.k));
    }
    if !inv.spin {
        reasons.push("not spin".to_string());
    }
    NullVerdict { admissible: reasons.is_empty(), reasons, regular_required: inv.k == 21 }
}
