//! Smooth surfaces as intersection lattices.
//!
//! A [`SurfaceModel`] is an integer Gram matrix on a chosen basis of `H²`,
//! the canonical class `K`, and a list of named curve classes. Only lattice
//! data is tracked: blow-ups are described by which named curves pass through
//! the centre, never by point coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{self, row_lattice_basis, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("unknown curve class `{0}`")]
    InvalidIncidence(String),
    #[error("infinitely-near blow-up requested but no exceptional curve exists yet")]
    NoPreviousExceptional,
    #[error("curve name `{0}` is already in use")]
    DuplicateCurve(String),
    #[error("gram matrix must be square and symmetric")]
    NotSymmetric,
    #[error("vector has length {actual}, lattice has rank {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("D² + K·D = {value} is odd, genus is not integral")]
    NonIntegralGenus { value: BigInt },
    #[error("the zero class is not represented by a curve")]
    ZeroClass,
    #[error("curve `{name}`: declared genus {declared} but adjunction gives {computed}")]
    AdjunctionMismatch { name: String, declared: u64, computed: BigInt },
    #[error("curve `{name}` is not a (-1)-curve (E² = {square}, K·E = {k_dot})")]
    NotExceptional { name: String, square: BigInt, k_dot: BigInt },
    #[error("no Kodaira dimension for K·[ω] {k_dot_omega:?} and K² {k_squared:?}")]
    UndefinedCase { k_dot_omega: Sign, k_squared: Sign },
}

/// Which section of a Hirzebruch surface is the first basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HirzebruchConvention {
    /// `σ² = +n`, `K = -2σ + (n-2)f`; for `n = 2` this is `K = -2σ`.
    PositiveSection,
    /// `σ² = -n`, `K = -2σ - (n+2)f`.
    NegativeSection,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveClass {
    pub name: String,
    pub vector: Vec<BigInt>,
    pub genus: u64,
}

/// Arithmetic genus `1 + (D² + K·D)/2`. Negative values are kept so callers
/// can report them; such classes carry no smooth connected curve.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArithmeticGenus(pub BigInt);

impl ArithmeticGenus {
    pub fn is_representable(&self) -> bool {
        !self.0.is_negative()
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }
}

/// Incidence data of a blow-up centre.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlowUpCenter {
    /// Curves passing transversally through the point, each with multiplicity 1.
    pub through: Vec<String>,
    /// The point lies on the most recent exceptional curve.
    pub infinitely_near: bool,
    /// Name of the new exceptional curve and basis element.
    pub exceptional: String,
}

impl BlowUpCenter {
    pub fn new(exceptional: impl Into<String>) -> Self {
        Self { exceptional: exceptional.into(), ..Self::default() }
    }

    pub fn through<I, S>(mut self, curves: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.through.extend(curves.into_iter().map(Into::into));
        self
    }

    pub fn infinitely_near(mut self) -> Self {
        self.infinitely_near = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceModel {
    gram: IntMatrix,
    canonical: Vec<BigInt>,
    basis_labels: Vec<String>,
    curves: Vec<CurveClass>,
    convention: Option<HirzebruchConvention>,
    last_exceptional: Option<String>,
}

impl SurfaceModel {
    pub fn new(
        gram: IntMatrix,
        canonical: Vec<BigInt>,
        basis_labels: Vec<String>,
    ) -> Result<Self, SurfaceError> {
        if !gram.is_symmetric() {
            return Err(SurfaceError::NotSymmetric);
        }
        for len in [canonical.len(), basis_labels.len()] {
            if len != gram.rows() {
                return Err(SurfaceError::DimensionMismatch { expected: gram.rows(), actual: len });
            }
        }
        Ok(Self {
            gram,
            canonical,
            basis_labels,
            curves: Vec::new(),
            convention: None,
            last_exceptional: None,
        })
    }

    /// `CP²` with hyperplane class `H`, `K = -3H`.
    pub fn projective_plane() -> Self {
        Self::new(IntMatrix::from_rows(&[[1]]), lattice::int_vec(&[-3]), vec!["H".into()])
            .expect("valid plane data")
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn canonical(&self) -> &[BigInt] {
        &self.canonical
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn curves(&self) -> &[CurveClass] {
        &self.curves
    }

    pub fn convention(&self) -> Option<HirzebruchConvention> {
        self.convention
    }

    pub fn curve(&self, name: &str) -> Option<&CurveClass> {
        self.curves.iter().find(|c| c.name == name)
    }

    pub fn curve_vector(&self, name: &str) -> Result<&[BigInt], SurfaceError> {
        self.curve(name)
            .map(|c| c.vector.as_slice())
            .ok_or_else(|| SurfaceError::InvalidIncidence(name.to_string()))
    }

    pub fn basis_vector(&self, label: &str) -> Option<Vec<BigInt>> {
        let i = self.basis_labels.iter().position(|l| l == label)?;
        let mut v = vec![BigInt::zero(); self.rank()];
        v[i] = BigInt::one();
        Some(v)
    }

    pub fn intersect(&self, v: &[BigInt], w: &[BigInt]) -> BigInt {
        self.gram.pair(v, w)
    }

    pub fn k_dot(&self, v: &[BigInt]) -> BigInt {
        self.intersect(&self.canonical, v)
    }

    pub fn canonical_square(&self) -> BigInt {
        self.intersect(&self.canonical, &self.canonical)
    }

    fn check_len(&self, v: &[BigInt]) -> Result<(), SurfaceError> {
        if v.len() != self.rank() {
            return Err(SurfaceError::DimensionMismatch { expected: self.rank(), actual: v.len() });
        }
        Ok(())
    }

    /// `1 + (v² + K·v)/2`.
    pub fn adjunction_genus(&self, v: &[BigInt]) -> Result<ArithmeticGenus, SurfaceError> {
        self.check_len(v)?;
        if v.iter().all(Zero::is_zero) {
            return Err(SurfaceError::ZeroClass);
        }
        let value = self.intersect(v, v) + self.k_dot(v);
        if value.is_odd() {
            return Err(SurfaceError::NonIntegralGenus { value });
        }
        Ok(ArithmeticGenus(BigInt::one() + value / 2))
    }

    /// Adds a named curve after checking its declared genus against adjunction.
    pub fn with_curve(
        &self,
        name: impl Into<String>,
        vector: Vec<BigInt>,
        genus: u64,
    ) -> Result<Self, SurfaceError> {
        let name = name.into();
        if self.curve(&name).is_some() {
            return Err(SurfaceError::DuplicateCurve(name));
        }
        let computed = self.adjunction_genus(&vector)?;
        if computed.0 != BigInt::from(genus) {
            return Err(SurfaceError::AdjunctionMismatch { name, declared: genus, computed: computed.0 });
        }
        let mut out = self.clone();
        out.curves.push(CurveClass { name, vector, genus });
        Ok(out)
    }

    /// Blows up one point. The new exceptional class `E` has `E² = -1` and is
    /// orthogonal to the old basis; `K ← K + E`; every incident curve `C`
    /// becomes `C - E`.
    pub fn blow_up(&self, center: &BlowUpCenter) -> Result<Self, SurfaceError> {
        if self.curve(&center.exceptional).is_some()
            || self.basis_labels.contains(&center.exceptional)
        {
            return Err(SurfaceError::DuplicateCurve(center.exceptional.clone()));
        }
        let mut incident: Vec<&str> = Vec::new();
        for name in &center.through {
            if self.curve(name).is_none() {
                return Err(SurfaceError::InvalidIncidence(name.clone()));
            }
            incident.push(name);
        }
        if center.infinitely_near {
            let prev = self.last_exceptional.as_deref().ok_or(SurfaceError::NoPreviousExceptional)?;
            if !incident.contains(&prev) {
                incident.push(prev);
            }
        }

        let n = self.rank();
        let mut rows = self.gram.row_vectors();
        for r in rows.iter_mut() {
            r.push(BigInt::zero());
        }
        let mut last = vec![BigInt::zero(); n + 1];
        last[n] = BigInt::from(-1);
        rows.push(last);
        let gram = IntMatrix::from_big_rows(&rows, n + 1);

        let mut canonical = self.canonical.clone();
        canonical.push(BigInt::one());
        let mut basis_labels = self.basis_labels.clone();
        basis_labels.push(center.exceptional.clone());

        let mut curves: Vec<CurveClass> = self
            .curves
            .iter()
            .map(|c| {
                let mut vector = c.vector.clone();
                let coeff = if incident.contains(&c.name.as_str()) { -1 } else { 0 };
                vector.push(BigInt::from(coeff));
                CurveClass { name: c.name.clone(), vector, genus: c.genus }
            })
            .collect();
        let mut e = vec![BigInt::zero(); n + 1];
        e[n] = BigInt::one();
        curves.push(CurveClass { name: center.exceptional.clone(), vector: e, genus: 0 });

        Ok(Self {
            gram,
            canonical,
            basis_labels,
            curves,
            convention: self.convention,
            last_exceptional: Some(center.exceptional.clone()),
        })
    }

    /// Contracts a smooth rational `(-1)`-curve. Classes are projected to the
    /// orthogonal complement of `E` (`v ↦ v + (v·E)E`) and re-expressed in a
    /// Z-basis of it. A curve meeting `E` in `t` points gains `t(t-1)/2` in
    /// arithmetic genus.
    pub fn blow_down(&self, name: &str) -> Result<Self, SurfaceError> {
        let e = self.curve_vector(name)?.to_vec();
        let square = self.intersect(&e, &e);
        let k_dot = self.k_dot(&e);
        if square != BigInt::from(-1) || k_dot != BigInt::from(-1) {
            return Err(SurfaceError::NotExceptional { name: name.to_string(), square, k_dot });
        }
        let n = self.rank();
        let project = |v: &[BigInt]| -> Vec<BigInt> {
            let t = self.intersect(v, &e);
            v.iter().zip(&e).map(|(a, b)| a + &t * b).collect()
        };
        let projected: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut ei = vec![BigInt::zero(); n];
                ei[i] = BigInt::one();
                project(&ei)
            })
            .collect();
        let basis = row_lattice_basis(&IntMatrix::from_big_rows(&projected, n));
        let coords = |v: &[BigInt]| coordinates_in(&basis, v);

        let gram = &(&basis * &self.gram) * &basis.transpose();
        let canonical = coords(&project(&self.canonical));
        let basis_labels = (0..basis.rows())
            .map(|i| {
                let row = basis.row(i);
                let unit = row.iter().filter(|x| !x.is_zero()).count() == 1
                    && row.iter().any(|x| x.is_one());
                match (unit, row.iter().position(|x| x.is_one())) {
                    (true, Some(j)) => self.basis_labels[j].clone(),
                    _ => format!("w{}", i + 1),
                }
            })
            .collect();
        let curves = self
            .curves
            .iter()
            .filter(|c| c.name != name)
            .map(|c| {
                let t = self.intersect(&c.vector, &e);
                let extra: BigInt = (&t * (&t - 1u32)) / 2u32;
                CurveClass {
                    name: c.name.clone(),
                    vector: coords(&project(&c.vector)),
                    genus: c.genus + extra.to_u64().expect("genus increment is non-negative"),
                }
            })
            .collect();
        Ok(Self {
            gram,
            canonical,
            basis_labels,
            curves,
            convention: self.convention,
            last_exceptional: None,
        })
    }

    /// `|det(gram)| = 1`.
    pub fn is_unimodular(&self) -> bool {
        lattice::is_unimodular(&self.gram)
    }
}

/// Coordinates of `v` in the row basis `basis` (which must span `v`).
fn coordinates_in(basis: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    let b = basis.to_rational();
    let bbt = &b * &b.transpose();
    let vq: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let c = bbt.solve(&b.apply(&vq)).expect("basis rows are independent");
    c.into_iter()
        .map(|x| {
            assert!(x.is_integer(), "vector not in the integral span of the basis");
            x.to_integer()
        })
        .collect()
}

/// Hirzebruch surface `H_n` with basis `(σ, f)`, `σ·f = 1`, `f² = 0`.
///
/// Curves `sigma` and `f` are registered; in the positive convention the
/// negative section `sigma_inf = σ - nf` is registered too.
pub fn make_hirzebruch(n: u64, convention: HirzebruchConvention) -> SurfaceModel {
    let n_i = n as i64;
    let (sigma_sq, canonical) = match convention {
        HirzebruchConvention::PositiveSection => (n_i, [-2, n_i - 2]),
        HirzebruchConvention::NegativeSection => (-n_i, [-2, -(n_i + 2)]),
    };
    let gram = IntMatrix::from_rows(&[[sigma_sq, 1], [1, 0]]);
    let mut s = SurfaceModel::new(gram, lattice::int_vec(&canonical), vec!["sigma".into(), "f".into()])
        .expect("valid Hirzebruch data")
        .with_curve("sigma", lattice::int_vec(&[1, 0]), 0)
        .and_then(|s| s.with_curve("f", lattice::int_vec(&[0, 1]), 0))
        .expect("sections and fibres are rational");
    if convention == HirzebruchConvention::PositiveSection && n > 0 {
        s = s
            .with_curve("sigma_inf", lattice::int_vec(&[1, -n_i]), 0)
            .expect("negative section is rational");
    }
    s.convention = Some(convention);
    s
}

/// Sign of an exact quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of<T: Signed>(x: &T) -> Self {
        if x.is_negative() {
            Sign::Negative
        } else if x.is_zero() {
            Sign::Zero
        } else {
            Sign::Positive
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KodairaDimension {
    NegativeInfinity,
    Zero,
    One,
    Two,
}

impl fmt::Display for KodairaDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaDimension::NegativeInfinity => write!(f, "-inf"),
            KodairaDimension::Zero => write!(f, "0"),
            KodairaDimension::One => write!(f, "1"),
            KodairaDimension::Two => write!(f, "2"),
        }
    }
}

/// Kodaira dimension of a minimal symplectic 4-manifold from the signs of
/// `K·[ω]` and `K²`. Sign pairs outside the four-row table are reported.
pub fn kodaira_dimension(k_dot_omega: Sign, k_squared: Sign) -> Result<KodairaDimension, SurfaceError> {
    use Sign::*;
    match (k_dot_omega, k_squared) {
        (Negative, _) | (_, Negative) => Ok(KodairaDimension::NegativeInfinity),
        (Zero, Zero) => Ok(KodairaDimension::Zero),
        (Positive, Zero) => Ok(KodairaDimension::One),
        (Positive, Positive) => Ok(KodairaDimension::Two),
        (Zero, Positive) => Err(SurfaceError::UndefinedCase { k_dot_omega, k_squared }),
    }
}

/// Degree of multiplication by `k` on the degree-zero divisor group of an
/// elliptic curve: every point has `k²` preimages.
pub fn multiplication_degree(k: u64) -> BigInt {
    BigInt::from(k) * BigInt::from(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int_vec;

    #[test]
    fn hirzebruch_conventions() {
        let h2 = make_hirzebruch(2, HirzebruchConvention::PositiveSection);
        let s_inf = h2.curve_vector("sigma_inf").unwrap();
        assert_eq!(h2.intersect(s_inf, s_inf), BigInt::from(-2));
        assert_eq!(h2.canonical(), int_vec(&[-2, 0]).as_slice());

        let h0 = make_hirzebruch(0, HirzebruchConvention::NegativeSection);
        assert_eq!(h0.gram(), &IntMatrix::from_rows(&[[0, 1], [1, 0]]));

        let h2n = make_hirzebruch(2, HirzebruchConvention::NegativeSection);
        assert_eq!(h2n.k_dot(&int_vec(&[0, 1])), BigInt::from(-2));
        assert_eq!(h2n.canonical_square(), BigInt::from(8));
    }

    #[test]
    fn plane_blow_up() {
        let s = SurfaceModel::projective_plane().blow_up(&BlowUpCenter::new("E1")).unwrap();
        assert_eq!(s.gram(), &IntMatrix::from_rows(&[[1, 0], [0, -1]]));
        assert_eq!(s.canonical(), int_vec(&[-3, 1]).as_slice());
        assert_eq!(s.canonical_square(), BigInt::from(8));
    }

    #[test]
    fn cubic_pencil_base_point() {
        let mut s = SurfaceModel::projective_plane();
        for i in 1..=2 {
            s = s.with_curve(format!("C{i}"), int_vec(&[3]), 1).unwrap();
        }
        for j in 1..=9 {
            let mut c = BlowUpCenter::new(format!("E{j}")).through(["C1", "C2"]);
            if j > 1 {
                c = c.infinitely_near();
            }
            s = s.blow_up(&c).unwrap();
        }
        let c1 = s.curve_vector("C1").unwrap();
        assert_eq!(s.intersect(c1, c1), BigInt::zero());
        for j in 1..=8 {
            let e = s.curve_vector(&format!("E{j}")).unwrap();
            assert_eq!(s.intersect(e, e), BigInt::from(-2));
        }
        let e9 = s.curve_vector("E9").unwrap();
        assert_eq!(s.intersect(e9, e9), BigInt::from(-1));
        assert_eq!(s.intersect(c1, e9), BigInt::one());
        assert_eq!(s.canonical_square(), BigInt::zero());
        assert!(s.is_unimodular());

        // b = 3: blow up C2 ∩ E9 and C3-style points on E9.
        let s = s.blow_up(&BlowUpCenter::new("F2").through(["C2", "E9"])).unwrap();
        let e9 = s.curve_vector("E9").unwrap();
        assert_eq!(s.intersect(e9, e9), BigInt::from(-2));
        let d2 = s.curve_vector("C2").unwrap();
        assert_eq!(s.intersect(d2, d2), BigInt::from(-1));
        assert_eq!(s.intersect(d2, e9), BigInt::zero());
    }

    #[test]
    fn adjunction_examples() {
        let p2 = SurfaceModel::projective_plane();
        assert_eq!(p2.adjunction_genus(&int_vec(&[4])).unwrap().0, BigInt::from(3));
        assert_eq!(p2.adjunction_genus(&int_vec(&[0])), Err(SurfaceError::ZeroClass));
        let h2 = make_hirzebruch(2, HirzebruchConvention::PositiveSection);
        let d = int_vec(&[2, 1]);
        assert_eq!(h2.adjunction_genus(&d).unwrap().0, BigInt::from(2));
        assert_eq!(h2.intersect(&d, &d), BigInt::from(12));
        let e = SurfaceModel::projective_plane().blow_up(&BlowUpCenter::new("E")).unwrap();
        let g = e.adjunction_genus(&int_vec(&[0, 2])).unwrap();
        assert_eq!(g.0, BigInt::from(-2));
        assert!(!g.is_representable());
    }

    #[test]
    fn non_integral_genus() {
        let s = SurfaceModel::new(IntMatrix::from_rows(&[[1]]), int_vec(&[0]), vec!["x".into()]).unwrap();
        assert!(matches!(s.adjunction_genus(&int_vec(&[1])), Err(SurfaceError::NonIntegralGenus { .. })));
    }

    #[test]
    fn curve_insertion_checks_adjunction() {
        let p2 = SurfaceModel::projective_plane();
        assert!(matches!(
            p2.with_curve("C", int_vec(&[3]), 0),
            Err(SurfaceError::AdjunctionMismatch { .. })
        ));
        let p2 = p2.with_curve("C", int_vec(&[3]), 1).unwrap();
        assert_eq!(p2.with_curve("C", int_vec(&[1]), 0), Err(SurfaceError::DuplicateCurve("C".into())));
    }

    #[test]
    fn unknown_incidence_rejected() {
        let p2 = SurfaceModel::projective_plane();
        assert_eq!(
            p2.blow_up(&BlowUpCenter::new("E").through(["nope"])),
            Err(SurfaceError::InvalidIncidence("nope".into()))
        );
        assert_eq!(
            p2.blow_up(&BlowUpCenter::new("E").infinitely_near()),
            Err(SurfaceError::NoPreviousExceptional)
        );
    }

    #[test]
    fn blow_down_inverts_blow_up() {
        let p2 = SurfaceModel::projective_plane().with_curve("L", int_vec(&[1]), 0).unwrap();
        let s = p2.blow_up(&BlowUpCenter::new("E").through(["L"])).unwrap();
        let back = s.blow_down("E").unwrap();
        assert_eq!(back.gram(), p2.gram());
        assert_eq!(back.canonical(), p2.canonical());
        assert_eq!(back.curve_vector("L").unwrap(), p2.curve_vector("L").unwrap());
        assert_eq!(back.basis_labels(), p2.basis_labels());
        assert!(matches!(s.blow_down("L"), Err(SurfaceError::NotExceptional { .. })));
    }

    #[test]
    fn kodaira_table() {
        use Sign::*;
        assert_eq!(kodaira_dimension(Negative, Positive), Ok(KodairaDimension::NegativeInfinity));
        assert_eq!(kodaira_dimension(Zero, Zero), Ok(KodairaDimension::Zero));
        assert_eq!(kodaira_dimension(Positive, Zero), Ok(KodairaDimension::One));
        assert_eq!(kodaira_dimension(Positive, Positive), Ok(KodairaDimension::Two));
        assert_eq!(kodaira_dimension(Positive, Negative), Ok(KodairaDimension::NegativeInfinity));
        assert!(matches!(kodaira_dimension(Zero, Positive), Err(SurfaceError::UndefinedCase { .. })));
    }

    #[test]
    fn multiplication_by_nine_has_81_preimages() {
        // Brute force over (Q/Z)²: solutions of 9x ≡ s for s = (1/3, 2/5).
        let k = 9i64;
        let (s, den) = ([5i64, 6], 15i64); // s = (5/15, 6/15)
        let grid = k * den;
        let mut count = 0;
        for i in 0..grid {
            for j in 0..grid {
                // x = (i, j)/grid; 9x ≡ s  ⇔  k·i ≡ s·k (mod grid)
                if (k * i - s[0] * k).rem_euclid(grid) == 0 && (k * j - s[1] * k).rem_euclid(grid) == 0 {
                    count += 1;
                }
            }
        }
        assert_eq!(BigInt::from(count), multiplication_degree(9));
        assert_eq!(multiplication_degree(9), BigInt::from(81));
    }
}
