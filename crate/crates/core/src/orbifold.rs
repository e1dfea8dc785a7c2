//! Cyclic orbifolds obtained by contracting Hirzebruch-Jung chains.
//!
//! An [`OrbifoldSurface`] keeps the smooth resolution it came from. The
//! surviving lattice is spanned by resolution basis vectors that are
//! independent of the contracted chains, and carries the rational pairing
//! `v·w - u_vᵀ G⁻¹ u_w` (orthogonal projection away from the chains).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::hj::{chain_recognize, hj_expand, CyclicSingularity, HjChain, HjError};
use crate::lattice::{IntMatrix, RatMatrix};
use crate::surface::SurfaceModel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbifoldError {
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("curves do not form a chain: {0}")]
    NotAChain(String),
    #[error("chain curve `{curve}` has self-intersection {square}, need at most -2")]
    SelfIntersectionTooLarge { curve: String, square: BigInt },
    #[error("chain intersection matrix is not negative definite")]
    NotNegativeDefinite,
    #[error("chain curve `{0}` meets an existing singular point")]
    ChainTouchesSingularPoint(String),
    #[error("curve `{0}` meets the chain other than once transversally at a tail")]
    NonTailIncidence(String),
    #[error("isotropy multiplicity of `{divisor}` is {multiplicity}, need > 1")]
    MultiplicityNotGreaterThanOne { divisor: String, multiplicity: BigInt },
    #[error(transparent)]
    CoprimalityViolation(Box<CoprimalityViolation>),
    #[error("divisor `{0}` listed twice")]
    DuplicateDivisor(String),
    #[error(transparent)]
    Hj(#[from] HjError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("divisors `{first}` and `{second}` intersect but gcd({m1}, {m2}) = {gcd}")]
pub struct CoprimalityViolation {
    pub first: String,
    pub second: String,
    pub m1: BigInt,
    pub m2: BigInt,
    pub gcd: BigInt,
}

/// A cyclic quotient point together with the chain that resolves it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularPoint {
    pub singularity: CyclicSingularity,
    pub chain_curves: Vec<String>,
    /// Surviving curves meeting a tail of the chain.
    pub incident_curves: Vec<String>,
    chain_vectors: Vec<Vec<BigInt>>,
}

impl SingularPoint {
    pub fn order(&self) -> &BigInt {
        self.singularity.order()
    }

    pub fn chain(&self) -> HjChain {
        hj_expand(&self.singularity)
    }
}

/// A surviving curve. `coords` are rational coordinates in the surviving basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbifoldCurve {
    pub name: String,
    pub coords: Vec<BigRational>,
    pub genus: u64,
    /// Class of the curve on the resolution.
    pub resolution_vector: Vec<BigInt>,
    /// Indices of singular points the curve passes through.
    pub points: Vec<usize>,
}

/// Input to [`OrbifoldSurface::assign_isotropy`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropyData {
    pub divisor: String,
    pub multiplicity: BigInt,
}

impl IsotropyData {
    pub fn new(divisor: impl Into<String>, multiplicity: impl Into<BigInt>) -> Self {
        Self { divisor: divisor.into(), multiplicity: multiplicity.into() }
    }
}

/// A recorded isotropy divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropyDivisor {
    pub divisor: String,
    pub multiplicity: BigInt,
    pub genus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbifoldSurface {
    resolution: SurfaceModel,
    points: Vec<SingularPoint>,
    surviving: Vec<usize>,
    /// `(Mᵀ)⁻¹` where the rows of `M` are the surviving basis vectors followed
    /// by all chain vectors.
    coord_map: RatMatrix,
    gram_q: RatMatrix,
    canonical_q: Vec<BigRational>,
    curves: Vec<OrbifoldCurve>,
    isotropy: Vec<IsotropyDivisor>,
    declared_intersections: Vec<(String, String)>,
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

fn unit(n: usize, i: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); n];
    e[i] = BigInt::one();
    e
}

fn rank_q(rows: &[Vec<BigInt>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    crate::lattice::rank(&IntMatrix::from_big_rows(rows, rows[0].len()))
}

impl OrbifoldSurface {
    /// A smooth surface seen as an orbifold without singular points.
    pub fn from_smooth(s: &SurfaceModel) -> Self {
        let mut out = Self {
            resolution: s.clone(),
            points: Vec::new(),
            surviving: Vec::new(),
            coord_map: RatMatrix::identity(0),
            gram_q: RatMatrix::identity(0),
            canonical_q: Vec::new(),
            curves: Vec::new(),
            isotropy: Vec::new(),
            declared_intersections: Vec::new(),
        };
        out.rebuild();
        out
    }

    pub fn resolution(&self) -> &SurfaceModel {
        &self.resolution
    }

    pub fn singular_points(&self) -> &[SingularPoint] {
        &self.points
    }

    pub fn b2(&self) -> usize {
        self.surviving.len()
    }

    pub fn gram_q(&self) -> &RatMatrix {
        &self.gram_q
    }

    pub fn canonical_q(&self) -> &[BigRational] {
        &self.canonical_q
    }

    pub fn curves(&self) -> &[OrbifoldCurve] {
        &self.curves
    }

    pub fn isotropy(&self) -> &[IsotropyDivisor] {
        &self.isotropy
    }

    pub fn basis_labels(&self) -> Vec<String> {
        self.surviving.iter().map(|&i| self.resolution.basis_labels()[i].clone()).collect()
    }

    pub fn curve(&self, name: &str) -> Result<&OrbifoldCurve, OrbifoldError> {
        self.curves
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| OrbifoldError::UnknownCurve(name.to_string()))
    }

    /// Rational pairing of two classes given in surviving coordinates.
    pub fn pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        self.gram_q.pair(x, y)
    }

    pub fn self_intersection(&self, name: &str) -> Result<BigRational, OrbifoldError> {
        let c = self.curve(name)?;
        Ok(self.pair(&c.coords, &c.coords))
    }

    pub fn intersection(&self, a: &str, b: &str) -> Result<BigRational, OrbifoldError> {
        let (x, y) = (self.curve(a)?, self.curve(b)?);
        Ok(self.pair(&x.coords, &y.coords))
    }

    /// Surviving coordinates of a resolution class (its pushforward).
    pub fn push_forward(&self, v: &[BigInt]) -> Vec<BigRational> {
        let vq: Vec<BigRational> = v.iter().map(rat).collect();
        let mut c = self.coord_map.apply(&vq);
        c.truncate(self.b2());
        c
    }

    fn chain_vectors(&self) -> Vec<Vec<BigInt>> {
        self.points.iter().flat_map(|p| p.chain_vectors.iter().cloned()).collect()
    }

    fn contracted(&self, name: &str) -> bool {
        self.points.iter().any(|p| p.chain_curves.iter().any(|c| c == name))
    }

    /// Recomputes the surviving basis, pairing and curve coordinates.
    fn rebuild(&mut self) {
        let s = self.resolution.clone();
        let n = s.rank();
        let chains = self.chain_vectors();
        let mut picked: Vec<usize> = Vec::new();
        let mut rows = chains.clone();
        for i in 0..n {
            if rows.len() == n {
                break;
            }
            let mut trial = rows.clone();
            trial.push(unit(n, i));
            if rank_q(&trial) == trial.len() {
                rows = trial;
                picked.push(i);
            }
        }
        let mut m_rows: Vec<Vec<BigInt>> = picked.iter().map(|&i| unit(n, i)).collect();
        m_rows.extend(chains.iter().cloned());
        let m = IntMatrix::from_big_rows(&m_rows, n);
        let coord_map =
            m.transpose().to_rational().inverse().expect("surviving basis and chains span");

        let g = s.gram();
        let b2 = picked.len();
        let gram_q = if chains.is_empty() {
            g.select(&picked, &picked).to_rational()
        } else {
            let c = IntMatrix::from_big_rows(&chains, n);
            let chain_gram = &(&c * g) * &c.transpose();
            let ginv = chain_gram.to_rational().inverse().expect("chains are negative definite");
            let u = (&m.select_rows(&(0..b2).collect::<Vec<_>>()) * &(g * &c.transpose()))
                .to_rational();
            let corr = &(&u * &ginv) * &u.transpose();
            let base = g.select(&picked, &picked).to_rational();
            let data = (0..b2)
                .flat_map(|i| (0..b2).map(move |j| (i, j)))
                .map(|(i, j)| base.get(i, j) - corr.get(i, j))
                .collect();
            RatMatrix::new(b2, b2, data)
        };

        self.surviving = picked;
        self.coord_map = coord_map;
        self.gram_q = gram_q;
        self.canonical_q = self.push_forward(s.canonical());
        let curves = s
            .curves()
            .iter()
            .filter(|c| !self.contracted(&c.name))
            .map(|c| OrbifoldCurve {
                name: c.name.clone(),
                coords: self.push_forward(&c.vector),
                genus: c.genus,
                resolution_vector: c.vector.clone(),
                points: (0..self.points.len())
                    .filter(|&i| self.points[i].incident_curves.contains(&c.name))
                    .collect(),
            })
            .collect();
        self.curves = curves;
    }

    /// Contracts a chain of named rational curves, given in chain order.
    pub fn contract(&self, chain: &[&str]) -> Result<Self, OrbifoldError> {
        let s = &self.resolution;
        if chain.is_empty() {
            return Err(HjError::EmptyChain.into());
        }
        let mut vectors = Vec::with_capacity(chain.len());
        for &name in chain {
            let c = s.curve(name).ok_or_else(|| OrbifoldError::UnknownCurve(name.to_string()))?;
            if self.contracted(name) {
                return Err(OrbifoldError::ChainTouchesSingularPoint(name.to_string()));
            }
            if c.genus != 0 {
                return Err(OrbifoldError::NotAChain(format!("`{name}` has genus {}", c.genus)));
            }
            vectors.push(c.vector.clone());
        }
        for (i, &a) in chain.iter().enumerate() {
            for (j, &b) in chain.iter().enumerate().skip(i + 1) {
                let x = s.intersect(&vectors[i], &vectors[j]);
                let want = if j == i + 1 { BigInt::one() } else { BigInt::zero() };
                if x != want {
                    return Err(OrbifoldError::NotAChain(format!("`{a}`·`{b}` = {x}, expected {want}")));
                }
            }
        }
        let mut entries = Vec::with_capacity(chain.len());
        for (v, &name) in vectors.iter().zip(chain) {
            let square = s.intersect(v, v);
            if square > BigInt::from(-2) {
                return Err(OrbifoldError::SelfIntersectionTooLarge { curve: name.to_string(), square });
            }
            entries.push(-square);
        }
        let hj = HjChain::new(entries)?;
        if !hj.gram().to_rational().is_negative_definite() {
            return Err(OrbifoldError::NotNegativeDefinite);
        }
        for (v, &name) in vectors.iter().zip(chain) {
            if self.chain_vectors().iter().any(|w| !s.intersect(v, w).is_zero()) {
                return Err(OrbifoldError::ChainTouchesSingularPoint(name.to_string()));
            }
        }

        let last = chain.len() - 1;
        let mut incident = Vec::new();
        for c in s.curves() {
            if chain.contains(&c.name.as_str()) || self.contracted(&c.name) {
                continue;
            }
            let u: Vec<BigInt> = vectors.iter().map(|v| s.intersect(&c.vector, v)).collect();
            let nonzero: Vec<usize> = (0..u.len()).filter(|&i| !u[i].is_zero()).collect();
            match nonzero.as_slice() {
                [] => {}
                [i] if (*i == 0 || *i == last) && u[*i].is_one() => incident.push(c.name.clone()),
                _ => return Err(OrbifoldError::NonTailIncidence(c.name.clone())),
            }
        }

        let mut out = self.clone();
        out.points.push(SingularPoint {
            singularity: chain_recognize(&hj),
            chain_curves: chain.iter().map(|c| c.to_string()).collect(),
            incident_curves: incident,
            chain_vectors: vectors,
        });
        out.rebuild();
        Ok(out)
    }

    /// Records the isotropy divisors, replacing any previous assignment.
    pub fn assign_isotropy(&self, data: &[IsotropyData]) -> Result<Self, OrbifoldError> {
        let mut recorded: Vec<IsotropyDivisor> = Vec::with_capacity(data.len());
        for d in data {
            let c = self.curve(&d.divisor)?;
            if d.multiplicity <= BigInt::one() {
                return Err(OrbifoldError::MultiplicityNotGreaterThanOne {
                    divisor: d.divisor.clone(),
                    multiplicity: d.multiplicity.clone(),
                });
            }
            if recorded.iter().any(|r| r.divisor == d.divisor) {
                return Err(OrbifoldError::DuplicateDivisor(d.divisor.clone()));
            }
            recorded.push(IsotropyDivisor {
                divisor: d.divisor.clone(),
                multiplicity: d.multiplicity.clone(),
                genus: c.genus,
            });
        }
        for (i, a) in recorded.iter().enumerate() {
            for b in &recorded[i + 1..] {
                if !self.divisors_intersect(&a.divisor, &b.divisor)? {
                    continue;
                }
                let gcd = a.multiplicity.gcd(&b.multiplicity);
                if !gcd.is_one() {
                    return Err(OrbifoldError::CoprimalityViolation(Box::new(CoprimalityViolation {
                        first: a.divisor.clone(),
                        second: b.divisor.clone(),
                        m1: a.multiplicity.clone(),
                        m2: b.multiplicity.clone(),
                        gcd,
                    })));
                }
            }
        }
        let mut out = self.clone();
        out.isotropy = recorded;
        Ok(out)
    }

    /// Declares that two curves meet even if their pairing vanishes.
    pub fn declare_intersection(&self, a: &str, b: &str) -> Result<Self, OrbifoldError> {
        self.curve(a)?;
        self.curve(b)?;
        let mut out = self.clone();
        out.declared_intersections.push((a.to_string(), b.to_string()));
        Ok(out)
    }

    fn divisors_intersect(&self, a: &str, b: &str) -> Result<bool, OrbifoldError> {
        let declared = self
            .declared_intersections
            .iter()
            .any(|(x, y)| (x == a && y == b) || (x == b && y == a));
        Ok(declared || !self.intersection(a, b)?.is_zero())
    }

    /// `d(x) · ∏ m_i` over isotropy divisors through the point.
    pub fn point_multiplicity(&self, index: usize) -> BigInt {
        let p = &self.points[index];
        let mut m = p.order().clone();
        for d in &self.isotropy {
            if p.incident_curves.contains(&d.divisor) {
                m *= &d.multiplicity;
            }
        }
        m
    }

    /// The class `K + Σ (1 - 1/m_i) D_i` in surviving coordinates.
    pub fn log_canonical(&self) -> Vec<BigRational> {
        let mut k = self.canonical_q.clone();
        for d in &self.isotropy {
            let c = self.curve(&d.divisor).expect("isotropy divisors are surviving curves");
            let w = BigRational::one() - BigRational::new(BigInt::one(), d.multiplicity.clone());
            for (x, y) in k.iter_mut().zip(&c.coords) {
                *x += &w * y;
            }
        }
        k
    }

    /// Whether `K + Δ` pairs to zero with every surviving class.
    pub fn is_calabi_yau(&self) -> bool {
        let k = self.log_canonical();
        (0..self.b2()).all(|i| {
            let mut e = vec![BigRational::zero(); self.b2()];
            e[i] = BigRational::one();
            self.pair(&k, &e).is_zero()
        })
    }

    /// Gram matrix of the resolution in the basis (surviving basis vectors,
    /// chain curves), read off the stored resolution.
    pub fn split_basis_gram(&self) -> IntMatrix {
        let n = self.resolution.rank();
        let mut rows: Vec<Vec<BigInt>> = self.surviving.iter().map(|&i| unit(n, i)).collect();
        rows.extend(self.chain_vectors());
        let m = IntMatrix::from_big_rows(&rows, n);
        &(&m * self.resolution.gram()) * &m.transpose()
    }

    /// Rebuilds the resolution Gram matrix in the split basis from the orbifold
    /// pairing, the tail incidences and the chains `hj_expand(m, r)`:
    /// `[[Q + U G⁻¹ Uᵀ, U], [Uᵀ, G]]`.
    pub fn reresolve(&self) -> IntMatrix {
        let n = self.resolution.rank();
        let b2 = self.b2();
        let chains = self.chain_vectors();
        let l = chains.len();
        let mut g = vec![vec![BigInt::zero(); l]; l];
        let mut offset = 0;
        for p in &self.points {
            let block = hj_expand(&p.singularity).gram();
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    g[offset + i][offset + j] = block.get(i, j).clone();
                }
            }
            offset += block.rows();
        }
        let g = IntMatrix::from_big_rows(&g, l);
        let u: Vec<Vec<BigInt>> = self
            .surviving
            .iter()
            .map(|&i| chains.iter().map(|c| self.resolution.intersect(&unit(n, i), c)).collect())
            .collect();
        let u = IntMatrix::from_big_rows(&u, l);
        let top = if l == 0 {
            self.gram_q.clone()
        } else {
            let ginv = g.to_rational().inverse().expect("chain gram is invertible");
            let uq = u.to_rational();
            let corr = &(&uq * &ginv) * &uq.transpose();
            let data = (0..b2)
                .flat_map(|i| (0..b2).map(move |j| (i, j)))
                .map(|(i, j)| self.gram_q.get(i, j) + corr.get(i, j))
                .collect();
            RatMatrix::new(b2, b2, data)
        };
        let mut rows = vec![vec![BigInt::zero(); b2 + l]; b2 + l];
        for i in 0..b2 {
            for j in 0..b2 {
                let x = top.get(i, j);
                assert!(x.is_integer(), "re-resolved pairing is integral");
                rows[i][j] = x.to_integer();
            }
            for j in 0..l {
                rows[i][b2 + j] = u.get(i, j).clone();
                rows[b2 + j][i] = u.get(i, j).clone();
            }
        }
        for i in 0..l {
            for j in 0..l {
                rows[b2 + i][b2 + j] = g.get(i, j).clone();
            }
        }
        IntMatrix::from_big_rows(&rows, b2 + l)
    }
}

/// Contracts one chain on a smooth surface.
pub fn contract_chain(s: &SurfaceModel, chain: &[&str]) -> Result<OrbifoldSurface, OrbifoldError> {
    OrbifoldSurface::from_smooth(s).contract(chain)
}

/// `-vᵀ G⁻¹ v`, the gain in self-intersection of a class with incidence
/// vector `u` against a chain with Gram matrix `g`.
pub fn contraction_correction(g: &IntMatrix, u: &[BigInt]) -> BigRational {
    let ginv = g.to_rational().inverse().expect("chain gram is invertible");
    let uq: Vec<BigRational> = u.iter().map(rat).collect();
    -ginv.pair(&uq, &uq)
}
