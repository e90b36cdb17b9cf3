// SPDX-License-Identifier: Apache-2.0

mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use quadrep::decompose::{decompose_coprime, decompose_order_ideal};
use quadrep::intmath::{factor, kronecker};
use quadrep::{ClassGroup, OrderIdeal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn decomposition_recomposes_and_respects_norms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dk = FUNDAMENTAL[rng.gen_range(0..FUNDAMENTAL.len())];
        let f = CONDUCTORS[rng.gen_range(0..CONDUCTORS.len())];
        let g = ClassGroup::enumerate_reduced(dk * (f * f) as i64).unwrap();
        let mut a = random_integral_ideal(&mut rng, &g);
        if rng.gen_bool(0.5) {
            a = a.mul(&random_integral_ideal(&mut rng, &g)).unwrap();
        }
        let dec = decompose_order_ideal(&a).unwrap();
        prop_assert_eq!(dec.recompose().unwrap(), a.clone());
        prop_assert_eq!(dec.norm(), a.norm_int().unwrap());
        for (p, _) in &dec.split_ramified {
            let n = p.norm_int().unwrap();
            prop_assert!(p.is_proper());
            prop_assert!(quadrep::intmath::is_prime(n.try_into().unwrap()));
        }
        for &(q, _) in &dec.inert {
            prop_assert_eq!(kronecker(dk, q), -1);
        }
        for (l, c) in &dec.conductor_parts {
            prop_assert!(c.is_proper());
            prop_assert_eq!(f % l, 0);
            let n: u64 = c.norm_int().unwrap().try_into().unwrap();
            prop_assert!(factor(n).unwrap().primes().all(|p| p == *l));
        }
        prop_assert!(dec.class_equation_holds(&g, &a).unwrap());
        let n: u64 = a.norm_int().unwrap().try_into().unwrap();
        if quadrep::intmath::gcd(n, f) == 1 {
            let direct = decompose_coprime(&a).unwrap();
            prop_assert_eq!(&direct.split_ramified, &dec.split_ramified);
            prop_assert_eq!(&direct.inert, &dec.inert);
            prop_assert!(dec.conductor_parts.iter().all(|(_, c)| c.is_unit()));
        }
    }
}

#[test]
fn principal_integers_factor_through_rational_primes() {
    for d in [-4, -20, -32, -108, -144] {
        let c = ctx(d);
        for n in 1..=60u64 {
            let a = OrderIdeal::principal_integer(c.clone(), n).unwrap();
            let dec = decompose_order_ideal(&a).unwrap();
            assert_eq!(dec.recompose().unwrap(), a);
            assert_eq!(dec.norm(), BigInt::from(n * n));
        }
    }
}
