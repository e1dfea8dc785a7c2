mod support;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use orbicalc::constructions::{elliptic_pencil_orbifold, hirzebruch_genus_two_orbifold};
use orbicalc::dynkin::{check_z2, eu, DynkinConfiguration};
use orbicalc::group::FgAbelianGroup;
use orbicalc::hj::{chain_recognize, hj_dual, hj_eval, hj_expand, CyclicSingularity};
use orbicalc::lattice::{rank, rank_mod_p, snf, IntMatrix};
use orbicalc::orbifold::{contract_chain, contraction_correction};
use orbicalc::seifert::{chern_class, chern_class_numerator, h2_total_space, DeclaredFact, LocalInvariant, NamedClass, SeifertData};
use orbicalc::smale_barden::{gk_condition, invariants_from_group, BardenInvariant};
use orbicalc::surface::{BlowUpCenter, SurfaceModel};
use proptest::prelude::*;
use support::{chain_surface, small_matrix, snf_is_valid, unimodular};

fn singularity() -> impl Strategy<Value = CyclicSingularity> {
    (2u64..=500).prop_flat_map(|m| (Just(m), 1..m)).prop_filter_map("coprime", |(m, r)| CyclicSingularity::new(m, r).ok())
}

fn configuration() -> impl Strategy<Value = DynkinConfiguration> {
    let comp = prop_oneof![
        (1u32..12).prop_map(|r| format!("A{r}")),
        (4u32..12).prop_map(|r| format!("D{r}")),
        (6u32..=8).prop_map(|r| format!("E{r}")),
    ];
    proptest::collection::vec(comp, 0..5).prop_map(|v| v.join(" + ").parse().unwrap())
}

fn torsion_group() -> impl Strategy<Value = FgAbelianGroup> {
    (0usize..4, proptest::collection::vec((prop::sample::select(vec![2u64, 3, 5, 7]), 1u32..4), 0..6)).prop_map(
        |(k, parts)| {
            let orders: Vec<BigInt> = parts.iter().map(|&(p, e)| BigInt::from(p).pow(e)).collect();
            FgAbelianGroup::new(k, &orders)
        },
    )
}

fn fact() -> DeclaredFact {
    DeclaredFact::new(true, "rational surface")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn snf_divisibility(a in small_matrix(5, 40)) {
        snf_is_valid(&a).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn snf_unimodular_invariance(
        a in small_matrix(4, 20),
        o1 in proptest::collection::vec((0usize..4, 0usize..4, -3i64..=3, any::<bool>()), 0..10),
        o2 in proptest::collection::vec((0usize..4, 0usize..4, -3i64..=3, any::<bool>()), 0..10),
    ) {
        let b = &(&unimodular(a.rows(), &o1) * &a) * &unimodular(a.cols(), &o2);
        prop_assert_eq!(snf(&a).d, snf(&b).d);
    }

    #[test]
    fn inverse_of_unimodular_is_integral(o in proptest::collection::vec((0usize..4, 0usize..4, -4i64..=4, any::<bool>()), 0..12)) {
        let u = unimodular(4, &o);
        let inv = u.to_rational().inverse().unwrap();
        let back = inv.to_integer().expect("unimodular inverse is integral");
        prop_assert_eq!(&u * &back, IntMatrix::identity(4));
    }

    #[test]
    fn rank_mod_p_bounded_by_rank(a in small_matrix(5, 10), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let r = rank_mod_p(&a, p).unwrap();
        prop_assert!(r <= rank(&a));
        let bp = BigInt::from(p);
        let divisible = snf(&a).d.iter().filter(|d| !d.is_zero() && (*d % &bp).is_zero()).count();
        prop_assert_eq!(r, rank(&a) - divisible);
    }

    #[test]
    fn hj_round_trip(s in singularity()) {
        let c = hj_expand(&s);
        prop_assert!(c.entries().iter().all(|b| *b >= BigInt::from(2)));
        prop_assert_eq!(hj_eval(&c), BigRational::new(s.order().clone(), s.weight().clone()));
        prop_assert_eq!(chain_recognize(&c), s);
    }

    #[test]
    fn hj_duality_is_an_involution(s in singularity()) {
        prop_assert_eq!(s.dual().dual(), s.clone());
        let d = hj_dual(&s);
        prop_assert_eq!(chain_recognize(&d), s.dual());
    }

    #[test]
    fn riemenschneider_lengths(s in singularity()) {
        let a = hj_expand(&s);
        let b = hj_dual(&s);
        let excess = |c: &orbicalc::hj::HjChain| c.entries().iter().map(|x| x - BigInt::from(2)).sum::<BigInt>();
        prop_assert_eq!(excess(&a), BigInt::from(b.len() - 1));
        prop_assert_eq!(excess(&b), BigInt::from(a.len() - 1));
    }

    #[test]
    fn blow_up_keeps_unimodularity(steps in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 0..6), 1..8)) {
        let mut s = SurfaceModel::projective_plane().with_curve("C", vec![BigInt::from(2)], 0).unwrap();
        for (k, mask) in steps.iter().enumerate() {
            let through: Vec<String> = s.curves().iter().zip(mask).filter(|(_, m)| **m).map(|(c, _)| c.name.clone()).collect();
            let t = s.blow_up(&BlowUpCenter::new(format!("E{k}")).through(through)).unwrap();
            prop_assert_eq!(t.gram().det().abs(), BigInt::one());
            prop_assert_eq!(t.canonical_square(), s.canonical_square() - 1);
            prop_assert_eq!(t.rank(), s.rank() + 1);
            s = t;
        }
    }

    #[test]
    fn contraction_matches_resolution(choices in proptest::collection::vec(any::<bool>(), 1..10)) {
        let Some(cs) = chain_surface(&choices) else { return Ok(()) };
        let names: Vec<&str> = cs.chain.iter().map(String::as_str).collect();
        let x = contract_chain(&cs.surface, &names).unwrap();
        prop_assert_eq!(x.reresolve(), x.split_basis_gram());
        let res = x.resolution();
        let (p, n, z) = res.gram().to_rational().inertia();
        let (xp, xn, xz) = x.gram_q().inertia();
        prop_assert_eq!((xp, xn + names.len(), xz), (p, n, z));
        let squares: Vec<BigInt> = names.iter().map(|c| -res.intersect(res.curve_vector(c).unwrap(), res.curve_vector(c).unwrap())).collect();
        prop_assert_eq!(&x.singular_points()[0].chain().entries().to_vec(), &squares);
    }

    #[test]
    fn correction_is_positive(choices in proptest::collection::vec(any::<bool>(), 1..10)) {
        let Some(cs) = chain_surface(&choices) else { return Ok(()) };
        let names: Vec<&str> = cs.chain.iter().map(String::as_str).collect();
        let x = contract_chain(&cs.surface, &names).unwrap();
        let g = x.singular_points()[0].chain().gram();
        let res = x.resolution();
        for c in x.curves() {
            let u: Vec<BigInt> = names.iter().map(|n| res.intersect(&c.resolution_vector, res.curve_vector(n).unwrap())).collect();
            let corr = contraction_correction(&g, &u);
            let before = BigRational::from_integer(res.intersect(&c.resolution_vector, &c.resolution_vector));
            prop_assert_eq!(x.self_intersection(&c.name).unwrap(), before + &corr);
            if u.iter().any(|v| !v.is_zero()) {
                prop_assert!(corr.is_positive());
            }
        }
    }

    #[test]
    fn eu_is_additive(a in configuration(), b in configuration()) {
        prop_assert_eq!(eu(&a.union(&b)), eu(&a) + eu(&b));
    }

    #[test]
    fn z2_is_monotone(a in configuration(), b in configuration()) {
        if check_z2(&a.union(&b)) {
            prop_assert!(check_z2(&a) && check_z2(&b));
        }
    }

    #[test]
    fn gk_is_monotone(g in torsion_group(), spin in any::<bool>(), drop in any::<prop::sample::Index>()) {
        let full = gk_condition(&invariants_from_group(&g, spin, BardenInvariant::Zero)).holds;
        let keys: Vec<(u64, u32)> = g.torsion.keys().copied().collect();
        if keys.is_empty() {
            return Ok(());
        }
        let mut smaller = g.clone();
        let key = keys[drop.index(keys.len())];
        let c = smaller.torsion.get_mut(&key).unwrap();
        *c -= 1;
        if *c == 0 {
            smaller.torsion.remove(&key);
        }
        if full {
            prop_assert!(gk_condition(&invariants_from_group(&smaller, spin, BardenInvariant::Zero)).holds);
        }
    }

    #[test]
    fn invariants_ignore_summand_order(k in 0usize..4, mut orders in proptest::collection::vec(2u64..60, 0..6), seed in any::<u64>()) {
        let a: Vec<BigInt> = orders.iter().copied().map(BigInt::from).collect();
        let n = orders.len().max(1);
        orders.rotate_left((seed as usize) % n);
        orders.reverse();
        let b: Vec<BigInt> = orders.into_iter().map(BigInt::from).collect();
        let ga = FgAbelianGroup::new(k, &a);
        let gb = FgAbelianGroup::new(k, &b);
        prop_assert_eq!(&ga, &gb);
        prop_assert_eq!(invariants_from_group(&ga, true, BardenInvariant::Zero), invariants_from_group(&gb, true, BardenInvariant::Zero));
    }

    #[test]
    fn group_display_round_trips(g in torsion_group()) {
        prop_assert_eq!(g.to_string().parse::<FgAbelianGroup>().unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chern_class_shifts_integrally(m in 2i64..=12, b in 1i64..12, k in 1i64..3) {
        let x = hirzebruch_genus_two_orbifold().unwrap();
        let g = num_integer::Integer::gcd(&b, &m);
        prop_assume!(g == 1);
        let s1 = SeifertData::new(&x, vec![LocalInvariant::new("D", m, b)]).unwrap();
        let s2 = SeifertData::new(&x, vec![LocalInvariant::new("D", m, b + k * m)]).unwrap();
        let d = &x.curve("D").unwrap().resolution_vector;
        let diff: Vec<BigInt> = chern_class_numerator(&s2).iter().zip(chern_class_numerator(&s1)).map(|(a, c)| a - c).collect();
        let want: Vec<BigInt> = d.iter().map(|v| v * BigInt::from(k * m)).collect();
        prop_assert_eq!(diff, want);
        prop_assert_eq!(chern_class(&s1).len(), x.b2());
    }

    #[test]
    fn pencil_torsion_order(b in 2u64..=4, m in proptest::collection::vec(2i64..=12, 4)) {
        let x = elliptic_pencil_orbifold(b).unwrap();
        let inv: Vec<LocalInvariant> = (0..b as usize).map(|i| LocalInvariant::new(format!("D{}", i + 1), m[i], 1)).collect();
        let tests: Vec<NamedClass> = (1..=b).map(|i| {
            let name = format!("D{i}");
            NamedClass::new(name.clone(), x.curve(&name).unwrap().resolution_vector.clone())
        }).collect();
        let s = SeifertData::new(&x, inv).unwrap().with_test_classes(tests).unwrap();
        if let Ok(h) = h2_total_space(&s, &fact()) {
            let want: BigInt = m[..b as usize].iter().map(|&v| BigInt::from(v).pow(2)).product();
            prop_assert_eq!(h.torsion_order(), want);
            prop_assert_eq!(h.free_rank, b as usize - 1);
        }
    }
}
