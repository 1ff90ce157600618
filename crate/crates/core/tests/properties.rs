use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use powersum::classify::{self, group_by_association};
use powersum::modmath;
use powersum::orbits;
use powersum::search::{enumerate_solutions, enumerate_solutions_par};
use powersum::Instance;
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = Instance> {
    (3u64..60, prop::collection::vec(2u64..16, 1..=3), 1u32..=7)
        .prop_filter_map("bases must be coprime to c", |(c, d, z)| {
            Instance::new(c, d).ok()?.with_depth(z).ok()
        })
}

fn odd_instance() -> impl Strategy<Value = Instance> {
    instance().prop_filter("odd modulus", |i| i.c % 2 == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn solutions_are_valid_and_parallel_agrees(inst in instance()) {
        let seq = enumerate_solutions(&inst).unwrap();
        for s in &seq {
            prop_assert!(s.check(&inst));
        }
        prop_assert_eq!(seq, enumerate_solutions_par(&inst).unwrap());
    }

    #[test]
    fn deeper_search_only_adds(inst in instance()) {
        let shallow = enumerate_solutions(&inst).unwrap();
        let deep = enumerate_solutions(&inst.clone().with_depth(inst.z_max + 1).unwrap()).unwrap();
        prop_assert!(shallow.iter().all(|s| deep.contains(s)));
    }

    #[test]
    fn classification_congruences(inst in odd_instance()) {
        let sols = enumerate_solutions(&inst).unwrap();
        let g = group_by_association(&sols, &inst).unwrap();
        for (s, cl) in sols.iter().zip(&g.labels) {
            let dec = &cl.decomposition;
            prop_assert_eq!(&dec.xr * &dec.xr * dec.d1, s.a.clone());
            prop_assert_eq!(&dec.yr * &dec.yr * dec.d2, s.b.clone());
            let l = cl.key as i128;
            prop_assert_eq!((l * l + dec.d as i128).rem_euclid(inst.c as i128), 0);
            prop_assert!(classify::observation_holds(&s.a, &s.b, cl, inst.c));
            prop_assert!(2 * cl.tag.l <= inst.c);
        }
    }

    #[test]
    fn inverse_and_crt(a in 1i64..10_000, m in 2u64..10_000, r1 in 0u64..97, r2 in 0u64..101) {
        if let Ok(inv) = modmath::inverse_mod(a, m) {
            prop_assert_eq!(modmath::mul_mod(modmath::residue(a, m), inv, m), 1 % m);
        }
        let x = modmath::crt(&[(BigUint::from(r1), BigUint::from(97u32)), (BigUint::from(r2), BigUint::from(101u32))]);
        prop_assert_eq!(&x % 97u32, BigUint::from(r1));
        prop_assert_eq!(&x % 101u32, BigUint::from(r2));
    }

    #[test]
    fn roots_of_minus_d(d in 1u64..200, p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 29, 41]), k in 1u32..6) {
        prop_assume!(d % p != 0);
        let m = BigUint::from(p).pow(k);
        for r in modmath::sqrt_neg_mod_prime_power(d, p, k) {
            prop_assert_eq!((&r * &r + d) % &m, BigUint::from(0u32));
        }
    }
}

#[test]
fn seeds_satisfy_their_invariants() {
    for (c, d) in [
        (13u64, vec![10u64, 3]),
        (5, vec![3, 2]),
        (3, vec![5, 2]),
        (7, vec![3, 2]),
        (11, vec![5, 3, 2]),
    ] {
        let inst = Instance::new(c, d).unwrap().with_depth(8).unwrap();
        let sols = enumerate_solutions(&inst).unwrap();
        for check in orbits::cross_check(&inst, &sols).unwrap() {
            let seed = check.seed.expect("seed");
            let cz = BigInt::from(c).pow(2 * seed.j);
            let v = BigInt::from(seed.v.clone());
            assert_eq!(&seed.u * &seed.u + BigInt::from(seed.d) * &v * &v, cz);
            let lhs = seed.u.clone() - &v * BigInt::from(check.tag.l);
            assert!((lhs % BigInt::from(c)).abs() == BigInt::from(0));
            for t in 1..=9 {
                let (a, b) = orbits::orbit_power(&seed, t);
                assert_eq!(
                    &a * &a + BigInt::from(seed.d) * &b * &b,
                    BigInt::from(c).pow(2 * seed.j * t)
                );
            }
        }
    }
}
