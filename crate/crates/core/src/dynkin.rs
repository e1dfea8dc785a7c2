//! ADE configurations of fibre components on elliptic K3 surfaces.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynkinError {
    #[error("invalid Dynkin component `{0}`")]
    InvalidComponent(String),
    #[error("configuration has rank {rank}, ambient allows at most {max}")]
    RankExceedsAmbient { rank: u32, max: u32 },
    #[error("fibre `{fiber}` component `{component}` has multiplicity 0")]
    ZeroMultiplicity { fiber: String, component: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DynkinType {
    A,
    D,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DynkinComponent {
    kind: DynkinType,
    rank: u32,
}

impl DynkinComponent {
    pub fn new(kind: DynkinType, rank: u32) -> Result<Self, DynkinError> {
        let ok = match kind {
            DynkinType::A => rank >= 1,
            DynkinType::D => rank >= 4,
            DynkinType::E => (6..=8).contains(&rank),
        };
        if !ok {
            return Err(DynkinError::InvalidComponent(format!("{kind:?}{rank}")));
        }
        Ok(Self { kind, rank })
    }

    pub fn kind(&self) -> DynkinType {
        self.kind
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Euler number of the corresponding singular fibre.
    pub fn eu(&self) -> u64 {
        let r = u64::from(self.rank);
        match self.kind {
            DynkinType::A => r + 1,
            DynkinType::D | DynkinType::E => r + 2,
        }
    }
}

impl fmt::Display for DynkinComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self.rank)
    }
}

impl FromStr for DynkinComponent {
    type Err = DynkinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || DynkinError::InvalidComponent(s.to_string());
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('A') => DynkinType::A,
            Some('D') => DynkinType::D,
            Some('E') => DynkinType::E,
            _ => return Err(bad()),
        };
        let rank = chars.as_str().parse().map_err(|_| bad())?;
        Self::new(kind, rank)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DynkinConfiguration {
    components: Vec<DynkinComponent>,
}

impl DynkinConfiguration {
    pub fn new(mut components: Vec<DynkinComponent>) -> Self {
        components.sort();
        Self { components }
    }

    pub fn components(&self) -> &[DynkinComponent] {
        &self.components
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut c = self.components.clone();
        c.extend_from_slice(&other.components);
        Self::new(c)
    }

    pub fn total_rank(&self) -> u32 {
        self.components.iter().map(|c| c.rank).sum()
    }

    /// Rank bound on a K3 surface after splitting off the hyperbolic plane.
    pub fn validate_k3(&self) -> Result<(), DynkinError> {
        let rank = self.total_rank();
        if rank > 20 {
            return Err(DynkinError::RankExceedsAmbient { rank, max: 20 });
        }
        Ok(())
    }
}

impl fmt::Display for DynkinConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.components.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for DynkinConfiguration {
    type Err = DynkinError;

    /// `A19`, `E8 + E8 + D4`, `2A1 + E6`; `0` or empty for nothing.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Self::default());
        }
        let mut out = Vec::new();
        for term in s.split('+').map(str::trim) {
            let digits = term.chars().take_while(char::is_ascii_digit).count();
            let (count, rest) = term.split_at(digits);
            let count: usize = if count.is_empty() {
                1
            } else {
                count.parse().map_err(|_| DynkinError::InvalidComponent(term.to_string()))?
            };
            let c: DynkinComponent = rest.parse()?;
            out.extend(std::iter::repeat_n(c, count));
        }
        Ok(Self::new(out))
    }
}

/// `Σ a_l (l+1) + Σ d_m (m+2) + Σ e_n (n+2)`.
pub fn eu(config: &DynkinConfiguration) -> u64 {
    config.components.iter().map(DynkinComponent::eu).sum()
}

pub fn check_z2(config: &DynkinConfiguration) -> bool {
    eu(config) <= 23
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberComponent {
    pub name: String,
    pub multiplicity: u32,
    pub included: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub name: String,
    pub components: Vec<FiberComponent>,
}

impl Fiber {
    pub fn new(name: impl Into<String>, components: Vec<FiberComponent>) -> Result<Self, DynkinError> {
        let name = name.into();
        if let Some(c) = components.iter().find(|c| c.multiplicity == 0) {
            return Err(DynkinError::ZeroMultiplicity { fiber: name, component: c.name.clone() });
        }
        Ok(Self { name, components })
    }

    /// A fibre of type `I_n`: `n` reduced components, the first `included` of
    /// which lie in the configuration.
    pub fn reduced_cycle(name: impl Into<String>, n: usize, included: usize) -> Self {
        let components = (0..n)
            .map(|i| FiberComponent { name: format!("C{i}"), multiplicity: 1, included: i < included })
            .collect();
        Self { name: name.into(), components }
    }

    /// Every multiplicity-one component is in the configuration.
    pub fn reduced_part_included(&self) -> bool {
        self.components.iter().filter(|c| c.multiplicity == 1).all(|c| c.included)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Z1Verdict {
    pub count: usize,
    pub holds: bool,
}

pub fn check_z1(fibers: &[Fiber]) -> Z1Verdict {
    let count = fibers.iter().filter(|f| f.reduced_part_included()).count();
    Z1Verdict { count, holds: count <= 1 }
}
