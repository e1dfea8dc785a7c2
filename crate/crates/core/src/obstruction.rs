//! Disjoint pairs of elliptic classes on Hirzebruch surfaces.
//!
//! Convention: `σ² = -n`, `f² = 0`, `σ·f = 1`, `K = -2σ - (n+2)f`. A class
//! `xσ + yf` is Kähler iff `x > 0` and `y > nx`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search bounds must satisfy 1 <= bound <= {max}, got a/b bound {a}, n bound {n}")]
    InvalidBounds { a: i64, n: i64, max: i64 },
}

/// Largest accepted bound; keeps every intermediate value far inside `i128`.
pub const MAX_BOUND: i64 = 1_000_000;

// ---- polynomials in a, b, c, d, n ----

const VARS: [&str; 5] = ["a", "b", "c", "d", "n"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    A,
    B,
    C,
    D,
    N,
}

/// Integer polynomial in the five variables `a, b, c, d, n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(BTreeMap<[u8; 5], i64>);

impl Poly {
    pub fn constant(c: i64) -> Self {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert([0; 5], c);
        }
        Poly(m)
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0u8; 5];
        e[v as usize] = 1;
        Poly(BTreeMap::from([(e, 1)]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn insert(&mut self, e: [u8; 5], c: i64) {
        let entry = self.0.entry(e).or_insert(0);
        *entry = entry.checked_add(c).expect("polynomial coefficient overflow");
        if *entry == 0 {
            self.0.remove(&e);
        }
    }

    /// Substitutes an integer for one variable.
    pub fn substitute(&self, v: Var, value: i64) -> Self {
        let mut out = Poly::default();
        for (e, c) in &self.0 {
            let mut e2 = *e;
            let k = std::mem::replace(&mut e2[v as usize], 0);
            let factor = value.checked_pow(u32::from(k)).expect("substitution overflow");
            out.insert(e2, c.checked_mul(factor).expect("substitution overflow"));
        }
        out
    }

    pub fn eval(&self, values: [i64; 5]) -> i128 {
        self.0
            .iter()
            .map(|(e, &c)| {
                e.iter().zip(values).fold(i128::from(c), |acc, (&k, x)| acc * i128::from(x).pow(u32::from(k)))
            })
            .sum()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.0 {
            out.insert(*e, *c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|(e, c)| (*e, -c)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::default();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &rhs.0 {
                let e: [u8; 5] = std::array::from_fn(|i| e1[i].checked_add(e2[i]).expect("exponent overflow"));
                out.insert(e, c1.checked_mul(*c2).expect("polynomial coefficient overflow"));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, &c) in self.0.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .zip(VARS)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let abs = c.unsigned_abs();
            let body = match (abs, mono.is_empty()) {
                (_, true) => abs.to_string(),
                (1, false) => mono.join("*"),
                _ => format!("{abs}*{}", mono.join("*")),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, " {sign} {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// A class `xσ + yf` with polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
struct SymClass(Poly, Poly);

impl SymClass {
    fn add(&self, o: &Self) -> Self {
        SymClass(&self.0 + &o.0, &self.1 + &o.1)
    }

    fn dot(&self, o: &Self, n: &Poly) -> Poly {
        let ss = &(&(-n) * &self.0) * &o.0;
        &(&ss + &(&self.0 * &o.1)) + &(&self.1 * &o.0)
    }
}

/// Outcome of checking that `D₁·D₂ = 0` and adjunction force `K + D₁ + D₂ = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumRelationRecord {
    pub n: Option<i64>,
    /// `(K+D₁+D₂)·D_i - D_i·(K+D_i) - D₁·D₂` as polynomials; zero means the
    /// pairing vanishes whenever the hypotheses do.
    pub residuals: [Poly; 2],
    /// `det` of the coefficient matrix of `(D₁, D₂)` if numeric classes were given.
    pub spanning_det: Option<i64>,
}

impl SumRelationRecord {
    pub fn identities_hold(&self) -> bool {
        self.residuals.iter().all(Poly::is_zero)
    }

    /// The relation follows when both identities hold and the classes span.
    pub fn concluded(&self) -> bool {
        self.identities_hold() && self.spanning_det.is_some_and(|d| d != 0)
    }
}

/// Symbolic check with `D₁ = aσ + bf`, `D₂ = cσ + df`; `n` is symbolic when `None`.
pub fn derive_sum_relation(n: Option<i64>) -> SumRelationRecord {
    let np = n.map_or_else(|| Poly::var(Var::N), Poly::constant);
    let k = SymClass(Poly::constant(-2), &(-&np) - &Poly::constant(2));
    let d1 = SymClass(Poly::var(Var::A), Poly::var(Var::B));
    let d2 = SymClass(Poly::var(Var::C), Poly::var(Var::D));
    let total = k.add(&d1).add(&d2);
    let d12 = d1.dot(&d2, &np);
    let residual = |d: &SymClass| &(&total.dot(d, &np) - &d.dot(&k.add(d), &np)) - &d12;
    SumRelationRecord { n, residuals: [residual(&d1), residual(&d2)], spanning_det: None }
}

/// [`derive_sum_relation`] for explicit classes `D₁ = (a, b)`, `D₂ = (c, d)`.
pub fn derive_sum_relation_for(n: i64, d1: (i64, i64), d2: (i64, i64)) -> SumRelationRecord {
    let mut r = derive_sum_relation(Some(n));
    r.spanning_det = Some(d1.0 * d2.1 - d1.1 * d2.0);
    r
}

/// `((K+D₁+D₂)·D₁, (K+D₁+D₂)·D₂)` for numeric classes.
pub fn sum_relation_pairings(n: i64, d1: (i64, i64), d2: (i64, i64)) -> (i128, i128) {
    let k = (-2, -(n + 2));
    let t = (k.0 + d1.0 + d2.0, k.1 + d1.1 + d2.1);
    (pair(n, t, d1), pair(n, t, d2))
}

// ---- numeric search ----

/// `(xσ + yf)·(uσ + vf) = -n·x·u + x·v + y·u`.
pub fn pair(n: i64, p: (i64, i64), q: (i64, i64)) -> i128 {
    let (n, x, y, u, v) = (i128::from(n), i128::from(p.0), i128::from(p.1), i128::from(q.0), i128::from(q.1));
    -n * x * u + x * v + y * u
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPairCandidate {
    pub n: i64,
    pub a: i64,
    pub b: i64,
}

impl TorusPairCandidate {
    pub fn new(n: i64, a: i64, b: i64) -> Self {
        Self { n, a, b }
    }

    pub fn d1(&self) -> (i64, i64) {
        (self.a, self.b)
    }

    /// `D₂ = -K - D₁`.
    pub fn d2(&self) -> (i64, i64) {
        (2 - self.a, self.n + 2 - self.b)
    }

    pub fn canonical(&self) -> Self {
        if self.a <= 1 {
            *self
        } else {
            let (a, b) = self.d2();
            Self { n: self.n, a, b }
        }
    }
}

/// `(a-1)(an-2b) + 2a`.
pub fn relation_polynomial(c: &TorusPairCandidate) -> i128 {
    let (n, a, b) = (i128::from(c.n), i128::from(c.a), i128::from(c.b));
    (a - 1) * (a * n - 2 * b) + 2 * a
}

/// `D·(K + D)`; zero iff `D` has arithmetic genus one.
pub fn adjunction_defect(n: i64, d: (i64, i64)) -> i128 {
    let k = (-2, -(n + 2));
    pair(n, d, (d.0 + k.0, d.1 + k.1))
}

/// Whether some Kähler class pairs positively with both classes.
///
/// With `t = y - nx > 0` and `x > 0`, `ω·(uσ + vf) = u·t + v·x`. Dividing by
/// `x`, each condition `u·s + v > 0` cuts an open interval of `s = t/x > 0`.
pub fn kahler_positive(d1: (i64, i64), d2: (i64, i64)) -> bool {
    // Bounds are fractions (num, den) with den > 0; None is unbounded.
    let mut lo: (i128, i128) = (0, 1);
    let mut hi: Option<(i128, i128)> = None;
    for (u, v) in [d1, d2] {
        let (u, v) = (i128::from(u), i128::from(v));
        match u.signum() {
            0 => {
                if v <= 0 {
                    return false;
                }
            }
            1 => {
                // s > -v/u
                let cand = (-v, u);
                if cand.0 * lo.1 > lo.0 * cand.1 {
                    lo = cand;
                }
            }
            _ => {
                // s < -v/u = v/(-u)
                let cand = (v, -u);
                if hi.is_none_or(|h| cand.0 * h.1 < h.0 * cand.1) {
                    hi = Some(cand);
                }
            }
        }
    }
    hi.is_none_or(|h| lo.0 * h.1 < h.0 * lo.1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub bound_ab: i64,
    pub bound_n: i64,
    pub kahler_filter: bool,
}

impl SearchOptions {
    pub fn new(bound_ab: i64, bound_n: i64) -> Self {
        Self { bound_ab, bound_n, kahler_filter: true }
    }

    pub fn without_kahler_filter(mut self) -> Self {
        self.kahler_filter = false;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub options: SearchOptions,
    pub examined: u64,
    /// Survivors of every filter, sorted by `(n, a, b)`.
    pub survivors: Vec<TorusPairCandidate>,
    /// Survivors of the arithmetic filters, before the Kähler test.
    pub arithmetic_survivors: Vec<TorusPairCandidate>,
}

/// Passes eq. `(a-1)(an-2b) = -2a`, adjunction for both classes, `D₁·D₂ = 0`
/// and rational spanning.
pub fn passes_arithmetic(c: &TorusPairCandidate) -> bool {
    let (d1, d2) = (c.d1(), c.d2());
    relation_polynomial(c) == 0
        && adjunction_defect(c.n, d1) == 0
        && adjunction_defect(c.n, d2) == 0
        && pair(c.n, d1, d2) == 0
        && i128::from(d1.0) * i128::from(d2.1) - i128::from(d1.1) * i128::from(d2.0) != 0
}

/// Enumerates `0 ≤ n ≤ N`, `|a|, |b| ≤ A` with `a ≤ 1` (the other half is
/// the same pair with `D₁` and `D₂` swapped).
pub fn exhaustive_search(opts: SearchOptions) -> Result<SearchReport, SearchError> {
    let bad = opts.bound_ab < 1 || opts.bound_n < 1 || opts.bound_ab > MAX_BOUND || opts.bound_n > MAX_BOUND;
    if bad {
        return Err(SearchError::InvalidBounds { a: opts.bound_ab, n: opts.bound_n, max: MAX_BOUND });
    }
    let (a_max, n_max) = (opts.bound_ab, opts.bound_n);
    let mut examined = 0u64;
    let mut arithmetic_survivors = Vec::new();
    for n in 0..=n_max {
        for a in -a_max..=a_max.min(1) {
            for b in -a_max..=a_max {
                examined += 1;
                let c = TorusPairCandidate { n, a, b };
                if passes_arithmetic(&c) {
                    arithmetic_survivors.push(c);
                }
            }
        }
    }
    let survivors = arithmetic_survivors
        .iter()
        .copied()
        .filter(|c| !opts.kahler_filter || kahler_positive(c.d1(), c.d2()))
        .collect();
    Ok(SearchReport { options: opts, examined, survivors, arithmetic_survivors })
}

/// Every arithmetic survivor has `(a-1) | 2` and `a ≤ -1`, hence `a = -1`,
/// and satisfies `n + 2b = 1`.
pub fn divisibility_invariant_holds(report: &SearchReport) -> bool {
    report.arithmetic_survivors.iter().all(|c| {
        let a1 = c.a - 1;
        2 % a1 == 0 && c.a <= -1 && c.a == -1 && c.n + 2 * c.b == 1
    })
}

/// For `a = -1` candidates `b ≤ 0` when `n ≥ 1`, so `ω·D₁ = -t + bx < 0` on
/// the whole Kähler cone; checked against the exact interval test.
pub fn sign_argument_holds(report: &SearchReport) -> bool {
    report
        .arithmetic_survivors
        .iter()
        .all(|c| c.a == -1 && c.b <= 0 && !kahler_positive(c.d1(), c.d2()))
}
