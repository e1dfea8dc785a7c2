//! Seifert bundles over cyclic orbifolds: Chern class, the `H₁ = 0` test and
//! the second homology of the total space.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{factorize, lcm_all};
use crate::group::FgAbelianGroup;
use crate::lattice::{self, integer_kernel, rank_mod_p, IntMatrix};
use crate::orbifold::{IsotropyData, OrbifoldError, OrbifoldSurface};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeifertError {
    #[error(transparent)]
    Orbifold(#[from] OrbifoldError),
    #[error("local invariant {b} of `{divisor}` is not a unit mod {m}")]
    NonUnitInvariant { divisor: String, b: BigInt, m: BigInt },
    #[error("no test classes declared for the primitivity check")]
    MissingPairingData,
    #[error("class has length {actual}, resolution lattice has rank {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("H_1(M) is not zero: {0}")]
    H1NotZero(String),
    #[error("base orbifold has b_2 = 0")]
    ZeroSecondBetti,
}

/// Local invariants `(m_i, b_i)` of one isotropy divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalInvariant {
    pub divisor: String,
    pub m: BigInt,
    pub b: BigInt,
}

impl LocalInvariant {
    pub fn new(divisor: impl Into<String>, m: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self { divisor: divisor.into(), m: m.into(), b: b.into() }
    }
}

/// A named class on the resolution lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedClass {
    pub name: String,
    pub vector: Vec<BigInt>,
}

impl NamedClass {
    pub fn new(name: impl Into<String>, vector: Vec<BigInt>) -> Self {
        Self { name: name.into(), vector }
    }
}

/// A fact taken as given, with where it comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclaredFact {
    pub holds: bool,
    pub citation: String,
}

impl DeclaredFact {
    pub fn new(holds: bool, citation: impl Into<String>) -> Self {
        Self { holds, citation: citation.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertData {
    base: OrbifoldSurface,
    invariants: Vec<LocalInvariant>,
    m: BigInt,
    line_class: Option<Vec<BigInt>>,
    test_classes: Vec<NamedClass>,
    surjectivity_classes: Vec<NamedClass>,
    point_invariants: Vec<(usize, BigInt)>,
}

impl SeifertData {
    /// Assigns isotropy on `base` and records the local invariants.
    pub fn new(base: &OrbifoldSurface, invariants: Vec<LocalInvariant>) -> Result<Self, SeifertError> {
        let data: Vec<IsotropyData> =
            invariants.iter().map(|l| IsotropyData::new(l.divisor.clone(), l.m.clone())).collect();
        let base = base.assign_isotropy(&data)?;
        for l in &invariants {
            if !l.b.gcd(&l.m).is_one() {
                return Err(SeifertError::NonUnitInvariant {
                    divisor: l.divisor.clone(),
                    b: l.b.clone(),
                    m: l.m.clone(),
                });
            }
        }
        let m = lcm_all(invariants.iter().map(|l| &l.m));
        Ok(Self {
            base,
            invariants,
            m,
            line_class: None,
            test_classes: Vec::new(),
            surjectivity_classes: Vec::new(),
            point_invariants: Vec::new(),
        })
    }

    fn check_len(&self, v: &[BigInt]) -> Result<(), SeifertError> {
        let n = self.base.resolution().rank();
        if v.len() != n {
            return Err(SeifertError::DimensionMismatch { expected: n, actual: v.len() });
        }
        Ok(())
    }

    /// Adds an integral line class `L`, so that `c₁(M) = Σ (b_i/m_i) D_i + L`.
    pub fn with_line_class(mut self, l: Vec<BigInt>) -> Result<Self, SeifertError> {
        self.check_len(&l)?;
        self.line_class = Some(l);
        Ok(self)
    }

    /// Declares classes of `H₂(X - P)` used for the primitivity test.
    pub fn with_test_classes(mut self, classes: Vec<NamedClass>) -> Result<Self, SeifertError> {
        for c in &classes {
            self.check_len(&c.vector)?;
        }
        self.test_classes = classes;
        Ok(self)
    }

    /// Classes `α` for the surjectivity test; the resolution basis if unset.
    pub fn with_surjectivity_classes(mut self, classes: Vec<NamedClass>) -> Result<Self, SeifertError> {
        for c in &classes {
            self.check_len(&c.vector)?;
        }
        self.surjectivity_classes = classes;
        Ok(self)
    }

    /// Local invariants `j_x` at singular points, kept as given.
    pub fn with_point_invariant(mut self, point: usize, j: BigInt) -> Result<Self, SeifertError> {
        let mult = self.base.point_multiplicity(point);
        if !j.gcd(&mult).is_one() {
            return Err(SeifertError::NonUnitInvariant { divisor: format!("point {point}"), b: j, m: mult });
        }
        self.point_invariants.push((point, j));
        Ok(self)
    }

    pub fn base(&self) -> &OrbifoldSurface {
        &self.base
    }

    pub fn invariants(&self) -> &[LocalInvariant] {
        &self.invariants
    }

    pub fn point_invariants(&self) -> &[(usize, BigInt)] {
        &self.point_invariants
    }

    /// `lcm(m_i)`, or 1 without divisors.
    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn test_classes(&self) -> &[NamedClass] {
        &self.test_classes
    }

    fn divisor_vector(&self, name: &str) -> &[BigInt] {
        &self.base.curve(name).expect("divisors were checked on construction").resolution_vector
    }

    fn surjectivity_rows(&self) -> Vec<Vec<BigInt>> {
        let n = self.base.resolution().rank();
        if self.surjectivity_classes.is_empty() {
            (0..n)
                .map(|i| {
                    let mut e = vec![BigInt::zero(); n];
                    e[i] = BigInt::one();
                    e
                })
                .collect()
        } else {
            self.surjectivity_classes.iter().map(|c| c.vector.clone()).collect()
        }
    }
}

/// `Σ b_i (m/m_i) [D_i] + m L` on the resolution lattice.
pub fn chern_class_numerator(s: &SeifertData) -> Vec<BigInt> {
    let n = s.base.resolution().rank();
    let mut out = vec![BigInt::zero(); n];
    for l in &s.invariants {
        let coeff = &l.b * (&s.m / &l.m);
        for (o, x) in out.iter_mut().zip(s.divisor_vector(&l.divisor)) {
            *o += &coeff * x;
        }
    }
    if let Some(line) = &s.line_class {
        for (o, x) in out.iter_mut().zip(line) {
            *o += &s.m * x;
        }
    }
    out
}

/// `c₁(M)` in surviving orbifold coordinates.
pub fn chern_class(s: &SeifertData) -> Vec<BigRational> {
    let m = BigRational::from_integer(s.m.clone());
    s.base.push_forward(&chern_class_numerator(s)).into_iter().map(|x| x / &m).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSurjectivity {
    pub p: u64,
    pub divisors: Vec<String>,
    pub rank: usize,
}

impl PrimeSurjectivity {
    pub fn holds(&self) -> bool {
        self.rank == self.divisors.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Verdict {
    pub base_h1_zero: DeclaredFact,
    pub surjectivity: Vec<PrimeSurjectivity>,
    /// `gcd` of the pairings of the Chern numerator with the test classes.
    pub chern_pairing_gcd: BigInt,
}

impl H1Verdict {
    pub fn base_condition(&self) -> bool {
        self.base_h1_zero.holds
    }

    pub fn surjective(&self) -> bool {
        self.surjectivity.iter().all(PrimeSurjectivity::holds)
    }

    pub fn primitive(&self) -> bool {
        self.chern_pairing_gcd.is_one()
    }

    pub fn holds(&self) -> bool {
        self.base_condition() && self.surjective() && self.primitive()
    }

    pub fn failure(&self) -> Option<String> {
        if !self.base_condition() {
            return Some("H_1 of the base is not declared zero".into());
        }
        if let Some(p) = self.surjectivity.iter().find(|p| !p.holds()) {
            return Some(format!(
                "restriction to divisors with {} | m_i has rank {} mod {}, need {}",
                p.p,
                p.rank,
                p.p,
                p.divisors.len()
            ));
        }
        if !self.primitive() {
            return Some(format!("Chern class is divisible by {}", self.chern_pairing_gcd));
        }
        None
    }
}

/// All three conditions for `H₁(M) = 0`.
pub fn check_h1_zero(s: &SeifertData, h1_base_zero: &DeclaredFact) -> Result<H1Verdict, SeifertError> {
    if s.test_classes.is_empty() {
        return Err(SeifertError::MissingPairingData);
    }
    let res = s.base.resolution();
    let alphas = s.surjectivity_rows();
    let mut primes: Vec<u64> = s.invariants.iter().flat_map(|l| factorize(&l.m)).map(|(p, _)| p).collect();
    primes.sort_unstable();
    primes.dedup();
    let mut surjectivity = Vec::new();
    for p in primes {
        let bp = BigInt::from(p);
        let divs: Vec<&LocalInvariant> = s.invariants.iter().filter(|l| l.m.is_multiple_of(&bp)).collect();
        let rows: Vec<Vec<BigInt>> = divs
            .iter()
            .map(|l| {
                let d = s.divisor_vector(&l.divisor);
                alphas.iter().map(|a| res.intersect(d, a)).collect()
            })
            .collect();
        let a = IntMatrix::from_big_rows(&rows, alphas.len());
        let rank = rank_mod_p(&a, p).expect("p is prime");
        surjectivity.push(PrimeSurjectivity {
            p,
            divisors: divs.iter().map(|l| l.divisor.clone()).collect(),
            rank,
        });
    }
    let c = chern_class_numerator(s);
    let pairings: Vec<Vec<BigInt>> = s.test_classes.iter().map(|t| res.gram().apply(&t.vector)).collect();
    let chern_pairing_gcd =
        lattice::pairing_gcd(&c, &IntMatrix::from_big_rows(&pairings, res.rank()));
    Ok(H1Verdict { base_h1_zero: h1_base_zero.clone(), surjectivity, chern_pairing_gcd })
}

/// `H₂(M) = Z^k ⊕ ⊕ Z_{m_i}^{2g_i}` with `k + 1 = b₂(X)`.
pub fn h2_total_space(s: &SeifertData, h1_base_zero: &DeclaredFact) -> Result<FgAbelianGroup, SeifertError> {
    let verdict = check_h1_zero(s, h1_base_zero)?;
    if let Some(reason) = verdict.failure() {
        return Err(SeifertError::H1NotZero(reason));
    }
    let b2 = s.base.b2();
    if b2 == 0 {
        return Err(SeifertError::ZeroSecondBetti);
    }
    let mut g = FgAbelianGroup::free(b2 - 1);
    for d in s.base.isotropy() {
        g.add_cyclic(&d.multiplicity, 2 * d.genus.to_usize().expect("genus fits in usize"));
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KahlerCheck {
    pub c1_squared: BigRational,
    /// `(class name, c₁ · class)`.
    pub ample_pairings: Vec<(String, BigRational)>,
}

impl KahlerCheck {
    pub fn holds(&self) -> bool {
        self.c1_squared.is_positive() && self.ample_pairings.iter().all(|(_, x)| x.is_positive())
    }
}

/// `c₁(M)² > 0` and `c₁(M)` positive on the given ample classes.
pub fn kahler_check(s: &SeifertData, ample: &[NamedClass]) -> Result<KahlerCheck, SeifertError> {
    for a in ample {
        s.check_len(&a.vector)?;
    }
    let c = chern_class(s);
    let c1_squared = s.base.pair(&c, &c);
    let ample_pairings = ample
        .iter()
        .map(|a| (a.name.clone(), s.base.pair(&c, &s.base.push_forward(&a.vector))))
        .collect();
    Ok(KahlerCheck { c1_squared, ample_pairings })
}

/// A basis of the classes in the resolution orthogonal to every contracted
/// chain, i.e. the image of `H₂(X - P)`.
pub fn classes_away_from_points(x: &OrbifoldSurface) -> Vec<NamedClass> {
    let res = x.resolution();
    let n = res.rank();
    let chain: Vec<Vec<BigInt>> = x
        .singular_points()
        .iter()
        .flat_map(|p| p.chain_curves.iter())
        .map(|c| res.gram().apply(res.curve_vector(c).expect("chain curves exist")))
        .collect();
    if chain.is_empty() {
        return (0..n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                NamedClass::new(res.basis_labels()[i].clone(), e)
            })
            .collect();
    }
    let k = integer_kernel(&IntMatrix::from_big_rows(&chain, n));
    (0..k.rows()).map(|i| NamedClass::new(format!("w{}", i + 1), k.row(i).to_vec())).collect()
}

/// The first combination `Σ c_i w_i` (with `|c_i| ≤ bound`, in order of
/// increasing `Σ|c_i|`) of the given classes whose pairings with all of them
/// have gcd 1.
pub fn primitive_combination(x: &OrbifoldSurface, classes: &[NamedClass], bound: i64) -> Option<Vec<BigInt>> {
    let res = x.resolution();
    let k = classes.len();
    if k == 0 {
        return None;
    }
    let pairings: Vec<Vec<BigInt>> = classes.iter().map(|t| res.gram().apply(&t.vector)).collect();
    let pm = IntMatrix::from_big_rows(&pairings, res.rank());
    let mut best: Option<(i64, Vec<i64>)> = None;
    let mut c = vec![-bound; k];
    loop {
        let weight: i64 = c.iter().map(|x| x.abs()).sum();
        if weight > 0 && best.as_ref().is_none_or(|(w, _)| weight < *w) {
            let v: Vec<BigInt> = (0..res.rank())
                .map(|j| (0..k).map(|i| BigInt::from(c[i]) * &classes[i].vector[j]).sum())
                .collect();
            if lattice::pairing_gcd(&v, &pm).is_one() {
                best = Some((weight, c.clone()));
            }
        }
        let mut i = 0;
        while i < k && c[i] == bound {
            c[i] = -bound;
            i += 1;
        }
        if i == k {
            break;
        }
        c[i] += 1;
    }
    best.map(|(_, c)| {
        (0..res.rank())
            .map(|j| (0..k).map(|i| BigInt::from(c[i]) * &classes[i].vector[j]).sum())
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{elliptic_pencil_orbifold, hirzebruch_genus_two_orbifold, k3_a19_orbifold};
    use crate::lattice::int_vec;
    use crate::surface::SurfaceModel;

    fn fact() -> DeclaredFact {
        DeclaredFact::new(true, "rational surface")
    }

    fn g(s: &str) -> FgAbelianGroup {
        s.parse().unwrap()
    }

    fn elliptic(b: u64, p: u64) -> SeifertData {
        let x = elliptic_pencil_orbifold(b).unwrap();
        let inv = (1..=b as u32).map(|i| LocalInvariant::new(format!("D{i}"), BigInt::from(p).pow(i), 1)).collect();
        let s = SeifertData::new(&x, inv).unwrap();
        let tests = (1..=b).map(|i| {
            let name = format!("D{i}");
            let v = x.curve(&name).unwrap().resolution_vector.clone();
            NamedClass::new(name, v)
        });
        s.with_test_classes(tests.collect()).unwrap()
    }

    fn genus_two(m: i64) -> SeifertData {
        let x = hirzebruch_genus_two_orbifold().unwrap();
        SeifertData::new(&x, vec![LocalInvariant::new("D", m, 1)])
            .unwrap()
            .with_test_classes(vec![NamedClass::new("sigma-2f", int_vec(&[1, -2]))])
            .unwrap()
    }

    #[test]
    fn chern_numerators() {
        let s = genus_two(5);
        assert_eq!(chern_class_numerator(&s), int_vec(&[2, 1]));
        let x = elliptic_pencil_orbifold(2).unwrap();
        let s = SeifertData::new(&x, vec![LocalInvariant::new("D1", 2, 1), LocalInvariant::new("D2", 3, 1)]).unwrap();
        let d1 = &x.curve("D1").unwrap().resolution_vector;
        let d2 = &x.curve("D2").unwrap().resolution_vector;
        let want: Vec<BigInt> = d1.iter().zip(d2).map(|(a, b)| 3 * a + 2 * b).collect();
        assert_eq!(chern_class_numerator(&s), want);
        assert_eq!(s.m(), &BigInt::from(6));
    }

    #[test]
    fn non_unit_invariant_rejected() {
        let x = hirzebruch_genus_two_orbifold().unwrap();
        assert!(matches!(
            SeifertData::new(&x, vec![LocalInvariant::new("D", 6, 3)]),
            Err(SeifertError::NonUnitInvariant { .. })
        ));
    }

    #[test]
    fn genus_two_homology() {
        for m in [5, 7, 11, 13, 25] {
            let s = genus_two(m);
            let v = check_h1_zero(&s, &fact()).unwrap();
            assert!(v.holds(), "m = {m}: {:?}", v.failure());
            let mut want = FgAbelianGroup::free(0);
            want.add_cyclic(&BigInt::from(m), 4);
            assert_eq!(h2_total_space(&s, &fact()).unwrap(), want);
        }
    }

    #[test]
    fn genus_two_against_complement() {
        let x = hirzebruch_genus_two_orbifold().unwrap();
        let away = classes_away_from_points(&x);
        assert_eq!(away.len(), 1);
        let s = SeifertData::new(&x, vec![LocalInvariant::new("D", 7, 1)])
            .unwrap()
            .with_test_classes(away)
            .unwrap();
        let v = check_h1_zero(&s, &fact()).unwrap();
        assert_eq!(v.chern_pairing_gcd, BigInt::from(5));
    }

    #[test]
    fn elliptic_homology() {
        let s = elliptic(3, 2);
        assert_eq!(h2_total_space(&s, &fact()).unwrap(), g("Z^2 + Z_2^2 + Z_4^2 + Z_8^2"));
        let s = elliptic(2, 3);
        assert_eq!(h2_total_space(&s, &fact()).unwrap(), g("Z + Z_3^2 + Z_9^2"));
    }

    #[test]
    fn k3_homology() {
        let x = k3_a19_orbifold().unwrap();
        let away = classes_away_from_points(&x);
        assert_eq!(away.len(), 3);
        let l = primitive_combination(&x, &away, 2).unwrap();
        let s = SeifertData::new(&x, vec![]).unwrap().with_line_class(l).unwrap().with_test_classes(away).unwrap();
        let v = check_h1_zero(&s, &DeclaredFact::new(true, "K3 surfaces are simply connected")).unwrap();
        assert!(v.holds());
        assert!(kahler_check(&s, &[]).unwrap().holds());
        assert_eq!(h2_total_space(&s, &fact()).unwrap(), g("Z^2"));
    }

    #[test]
    fn missing_test_classes() {
        let x = hirzebruch_genus_two_orbifold().unwrap();
        let s = SeifertData::new(&x, vec![LocalInvariant::new("D", 5, 1)]).unwrap();
        assert_eq!(check_h1_zero(&s, &fact()), Err(SeifertError::MissingPairingData));
    }

    #[test]
    fn trivial_isotropy() {
        let p2 = OrbifoldSurface::from_smooth(&SurfaceModel::projective_plane());
        let s = SeifertData::new(&p2, vec![])
            .unwrap()
            .with_line_class(int_vec(&[1]))
            .unwrap()
            .with_test_classes(vec![NamedClass::new("H", int_vec(&[1]))])
            .unwrap();
        let v = check_h1_zero(&s, &fact()).unwrap();
        assert!(v.holds());
        assert!(v.surjectivity.is_empty());
        assert_eq!(h2_total_space(&s, &fact()).unwrap(), FgAbelianGroup::free(0));
    }

    #[test]
    fn even_pairings_fail_surjectivity() {
        let s = SurfaceModel::new(IntMatrix::from_rows(&[[-2, 0], [0, -2]]), int_vec(&[0, 0]), vec!["u".into(), "v".into()])
            .unwrap()
            .with_curve("D1", int_vec(&[1, 0]), 0)
            .unwrap()
            .with_curve("D2", int_vec(&[0, 1]), 0)
            .unwrap();
        let x = OrbifoldSurface::from_smooth(&s);
        let sd = SeifertData::new(&x, vec![LocalInvariant::new("D1", 2, 1), LocalInvariant::new("D2", 2, 1)])
            .unwrap()
            .with_test_classes(vec![NamedClass::new("u", int_vec(&[1, 0]))])
            .unwrap();
        let v = check_h1_zero(&sd, &fact()).unwrap();
        assert!(!v.surjective());
        assert_eq!(v.surjectivity[0].rank, 0);
        assert!(matches!(h2_total_space(&sd, &fact()), Err(SeifertError::H1NotZero(_))));
    }

    #[test]
    fn kahler_positivity_is_informational() {
        let s = genus_two(7);
        let k = kahler_check(&s, &[NamedClass::new("sigma", int_vec(&[1, 0])), NamedClass::new("f", int_vec(&[0, 1]))]).unwrap();
        assert!(k.holds());
        assert_eq!(k.c1_squared, BigRational::new(25.into(), 98.into()));
    }
}
