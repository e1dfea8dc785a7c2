#![allow(dead_code)]

use num_bigint::BigInt;
use orbicalc::lattice::{snf, IntMatrix};
use orbicalc::surface::{BlowUpCenter, SurfaceModel};
use proptest::prelude::*;

/// A resolution carrying a chain of rational curves with squares `<= -2`,
/// built by blowing up the plane at `L1 ∩ L2` and then repeatedly at a node
/// of the newest exceptional curve.
pub struct ChainSurface {
    pub surface: SurfaceModel,
    pub chain: Vec<String>,
    /// The two ends of the curve string, `L1` and `L2`.
    pub ends: [String; 2],
}

pub fn chain_surface(choices: &[bool]) -> Option<ChainSurface> {
    let mut s = SurfaceModel::projective_plane()
        .with_curve("L1", vec![BigInt::from(1)], 0)
        .and_then(|s| s.with_curve("L2", vec![BigInt::from(1)], 0))
        .ok()?;
    s = s.blow_up(&BlowUpCenter::new("E1").through(["L1", "L2"])).ok()?;
    let mut order: Vec<String> = vec!["L1".into(), "E1".into(), "L2".into()];
    let mut pos = 1;
    for (k, &left) in choices.iter().enumerate() {
        let name = format!("E{}", k + 2);
        let nb = if left { pos - 1 } else { pos + 1 };
        s = s.blow_up(&BlowUpCenter::new(name.clone()).through([order[pos].clone(), order[nb].clone()])).ok()?;
        if left {
            order.insert(pos, name);
        } else {
            order.insert(pos + 1, name);
            pos += 1;
        }
    }
    let left = &order[1..pos];
    let right = &order[pos + 1..order.len() - 1];
    let chain = if !left.is_empty() { left.to_vec() } else { right.to_vec() };
    if chain.is_empty() {
        return None;
    }
    Some(ChainSurface { surface: s, chain, ends: ["L1".into(), "L2".into()] })
}

pub fn small_matrix(max_dim: usize, max_entry: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-max_entry..=max_entry, r * c)
            .prop_map(move |v| IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()))
    })
}

/// Product of random elementary operations: unimodular by construction.
pub fn unimodular(n: usize, ops: &[(usize, usize, i64, bool)]) -> IntMatrix {
    let mut rows: Vec<Vec<BigInt>> = IntMatrix::identity(n).row_vectors();
    for &(i, j, k, swap) in ops {
        let (i, j) = (i % n, j % n);
        if swap {
            rows.swap(i, j);
        } else if i != j {
            let rj = rows[j].clone();
            for (a, b) in rows[i].iter_mut().zip(rj) {
                *a += BigInt::from(k) * b;
            }
        }
    }
    IntMatrix::from_big_rows(&rows, n)
}

/// `U·A·V = D`, `U` and `V` unimodular, `d_i | d_{i+1}`.
pub fn snf_is_valid(a: &IntMatrix) -> Result<(), String> {
    let r = snf(a);
    if &(&r.u * a) * &r.v != r.diagonal_matrix() {
        return Err(format!("U A V != D for {a:?}"));
    }
    for m in [&r.u, &r.v] {
        let d = m.det();
        if d != BigInt::from(1) && d != BigInt::from(-1) {
            return Err(format!("transform has det {d}"));
        }
    }
    let nz: Vec<&BigInt> = r.d.iter().filter(|x| **x != BigInt::from(0)).collect();
    if nz.len() != r.rank() || r.d[..nz.len()].iter().any(|x| *x <= BigInt::from(0)) {
        return Err("nonzero entries must be positive and come first".into());
    }
    for w in nz.windows(2) {
        if (w[1] % w[0]) != BigInt::from(0) {
            return Err(format!("{} does not divide {}", w[0], w[1]));
        }
    }
    Ok(())
}
