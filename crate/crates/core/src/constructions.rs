//! Ready-made resolution lattices and their contractions.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::lattice::{IntMatrix, RatMatrix};
use crate::orbifold::{contract_chain, OrbifoldError, OrbifoldSurface};
use crate::surface::{make_hirzebruch, BlowUpCenter, HirzebruchConvention, SurfaceError, SurfaceModel};

/// Plane pencil of `b` degree-`d` curves `D1..Db` meeting at one point with
/// multiplicity `d²`, blown up `d²` times there (`E1..E_{d²}`) and once more
/// at the points where `D2..Db` cross the last exceptional curve (`F2..Fb`).
pub fn pencil_resolution(d: u64, b: u64) -> Result<SurfaceModel, SurfaceError> {
    assert!(d >= 1 && b >= 1, "degree and number of curves must be positive");
    let genus = (d - 1) * (d - 2) / 2;
    let mut s = SurfaceModel::projective_plane();
    let names: Vec<String> = (1..=b).map(|i| format!("D{i}")).collect();
    for name in &names {
        s = s.with_curve(name.clone(), vec![BigInt::from(d)], genus)?;
    }
    for j in 1..=d * d {
        let mut c = BlowUpCenter::new(format!("E{j}")).through(names.iter().cloned());
        if j > 1 {
            c = c.infinitely_near();
        }
        s = s.blow_up(&c)?;
    }
    let last = format!("E{}", d * d);
    for i in 2..=b {
        s = s.blow_up(&BlowUpCenter::new(format!("F{i}")).through([format!("D{i}"), last.clone()]))?;
    }
    Ok(s)
}

/// Chain order `E_{d²}, …, E1`, which reads `[b, 2, …, 2]`.
pub fn pencil_chain(d: u64) -> Vec<String> {
    (1..=d * d).rev().map(|j| format!("E{j}")).collect()
}

pub fn pencil_orbifold(d: u64, b: u64) -> Result<OrbifoldSurface, OrbifoldError> {
    let s = pencil_resolution(d, b).map_err(|e| OrbifoldError::NotAChain(e.to_string()))?;
    let chain = pencil_chain(d);
    let names: Vec<&str> = chain.iter().map(String::as_str).collect();
    contract_chain(&s, &names)
}

pub fn elliptic_pencil_resolution(b: u64) -> Result<SurfaceModel, SurfaceError> {
    pencil_resolution(3, b)
}

pub fn elliptic_pencil_chain() -> Vec<String> {
    pencil_chain(3)
}

/// `b` disjoint elliptic curves on an orbifold with one point `(9b-8, 9)`.
pub fn elliptic_pencil_orbifold(b: u64) -> Result<OrbifoldSurface, OrbifoldError> {
    pencil_orbifold(3, b)
}

/// `H₂` with the genus-two curve `D = 2σ + f`.
pub fn hirzebruch_genus_two_resolution() -> SurfaceModel {
    make_hirzebruch(2, HirzebruchConvention::PositiveSection)
        .with_curve("D", crate::lattice::int_vec(&[2, 1]), 2)
        .expect("2σ + f has genus two")
}

/// `H₂` with `σ_∞` contracted to a point `(2, 1)`.
pub fn hirzebruch_genus_two_orbifold() -> Result<OrbifoldSurface, OrbifoldError> {
    contract_chain(&hirzebruch_genus_two_resolution(), &["sigma_inf"])
}

/// Negated Cartan matrix of `T_{2,3,7}`: nodes `1..9` in a chain with node
/// `10` attached to node `3`.
pub fn e10_gram() -> IntMatrix {
    let mut g = IntMatrix::zeros(10, 10);
    let edge = |g: IntMatrix, i: usize, j: usize| g.with_entry(i, j, 1.into()).with_entry(j, i, 1.into());
    for i in 0..10 {
        g = g.with_entry(i, i, (-2).into());
    }
    for i in 0..8 {
        g = edge(g, i, i + 1);
    }
    edge(g, 2, 9)
}

/// Even unimodular lattice `E10 ⊕ E10 ⊕ U` of signature `(3, 19)`.
pub fn k3_gram() -> IntMatrix {
    let e10 = e10_gram();
    let mut g = IntMatrix::zeros(22, 22);
    for off in [0, 10] {
        for i in 0..10 {
            for j in 0..10 {
                g = g.with_entry(off + i, off + j, e10.get(i, j).clone());
            }
        }
    }
    g.with_entry(20, 21, 1.into()).with_entry(21, 20, 1.into())
}

pub const K3_CHAIN: [&str; 19] = [
    "O", "Theta0", "Theta1", "Theta2", "Theta3", "Theta4", "Theta5", "Theta6", "Theta7", "Theta8",
    "Theta9", "Theta10", "Theta11", "Theta12", "Theta13", "Theta14", "Theta15", "Theta16", "Theta17",
];

/// K3 lattice with `K = 0` carrying an `A₁₉` chain of `(-2)`-curves named
/// `O, Theta0, …, Theta17`.
///
/// The chain is `c1..c9` of the first `E10`, a middle vector `x`, then `c9..c1`
/// of the second. With `ω` dual to `c9` inside `E10`, `x = ω ⊕ ω ⊕ (e + k f)`
/// where `k = -1 - ω²`.
pub fn k3_a19_resolution() -> SurfaceModel {
    let g = k3_gram();
    let mut labels: Vec<String> = Vec::with_capacity(22);
    labels.extend((1..=10).map(|i| format!("a{i}")));
    labels.extend((1..=10).map(|i| format!("b{i}")));
    labels.extend(["e".to_string(), "f".to_string()]);
    let mut s = SurfaceModel::new(g, vec![BigInt::zero(); 22], labels).expect("valid K3 data");

    let inv: RatMatrix = e10_gram().to_rational().inverse().expect("E10 is unimodular");
    let omega: Vec<BigInt> = (0..10)
        .map(|i| {
            let x = inv.get(i, 8);
            assert!(x.is_integer());
            x.to_integer()
        })
        .collect();
    let omega_sq = {
        let o: Vec<BigInt> = omega.clone();
        e10_gram().pair(&o, &o)
    };
    let k = BigInt::from(-1) - omega_sq;

    let unit = |i: usize| {
        let mut v = vec![BigInt::zero(); 22];
        v[i] = 1.into();
        v
    };
    let mut chain: Vec<Vec<BigInt>> = (0..9).map(unit).collect();
    let mut x = vec![BigInt::zero(); 22];
    x[..10].clone_from_slice(&omega[..10]);
    x[10..20].clone_from_slice(&omega[..10]);
    x[20] = 1.into();
    x[21] = k;
    chain.push(x);
    chain.extend((0..9).rev().map(|i| unit(10 + i)));

    for (name, v) in K3_CHAIN.iter().zip(chain) {
        s = s.with_curve(*name, v, 0).expect("(-2)-classes on a K3 are rational");
    }
    s
}

pub fn k3_a19_orbifold() -> Result<OrbifoldSurface, OrbifoldError> {
    contract_chain(&k3_a19_resolution(), &K3_CHAIN)
}
