// SPDX-License-Identifier: Apache-2.0

mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use quadrep::{ClassGroup, QuadForm, UnimodularMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn small_pool() -> Vec<i64> {
    discriminants_from(-300)
}

proptest! {
    #[test]
    fn reduce_returns_an_equivalent_reduced_form(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = small_pool();
        let d = pool[rng.gen_range(0..pool.len())];
        let g = ClassGroup::enumerate_reduced(d).unwrap();
        let x = rng.gen_range(0..g.order());
        let base = g.reps()[x].clone();
        let form = base.apply_transform(&random_map(&mut rng, 12));
        let (red, m) = form.reduce().unwrap();
        prop_assert!(red.is_reduced());
        prop_assert_eq!(m.det(), BigInt::from(1));
        prop_assert_eq!(form.apply_transform(&m), red.clone());
        prop_assert_eq!(red.apply_transform(&m.inverse().unwrap()), form);
        // distinct reduced forms are inequivalent, so we land back on the base
        prop_assert_eq!(red, base);
    }

    #[test]
    fn transform_scales_discriminant_by_det_squared(
        a in 1i64..50, b in -50i64..50, c in 1i64..50,
        p in -10i64..=10, q in -10i64..=10, r in -10i64..=10, s in -10i64..=10,
    ) {
        let f = QuadForm::new(a, b, c);
        let m = UnimodularMap::new(p, q, r, s);
        let det = m.det();
        prop_assert_eq!(f.apply_transform(&m).discriminant(), &det * &det * f.discriminant());
    }
}

#[test]
fn represent_agrees_with_double_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pool = small_pool();
    for _ in 0..200 {
        let d = pool[rng.gen_range(0..pool.len())];
        let g = ClassGroup::enumerate_reduced(d).unwrap();
        let form = random_form(&mut rng, &g);
        let m: i64 = rng.gen_range(1..3000);
        let found = form.represent(&BigInt::from(m), false);
        if let Some((x, y)) = &found {
            assert_eq!(form.eval(x, y), BigInt::from(m));
        }
        assert_eq!(found.is_some(), represents_by_double_loop(&form, m), "{form} m={m}");
        if let Some((x, y)) = form.represent(&BigInt::from(m), true) {
            assert_eq!(form.eval(&x, &y), BigInt::from(m));
            assert_eq!(num_integer::Integer::gcd(&x, &y), BigInt::from(1));
        }
    }
}

#[test]
fn represented_values_are_closed_under_square_multiples() {
    const BOUND: u64 = 4000;
    for d in [-4, -20, -32, -64, -108, -56, -84, -135] {
        let g = ClassGroup::enumerate_reduced(d).unwrap();
        for form in g.reps() {
            let set = form.represented_set(BOUND);
            for &m in &set {
                for n in 2..=((BOUND / m.max(1)) as f64).sqrt() as u64 {
                    if m > 0 && m * n * n <= BOUND {
                        assert!(set.contains(&(m * n * n)), "{form}: m={m} n={n}");
                    }
                }
            }
        }
    }
}

#[test]
fn lead_with_produces_equivalent_form_with_given_lead() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in [-20, -32, -64, -108, -231] {
        let g = ClassGroup::enumerate_reduced(d).unwrap();
        for form in g.reps() {
            for _ in 0..20 {
                let m = BigInt::from(rng.gen_range(1..500));
                if let Some((lead, map)) = form.lead_with(&m) {
                    assert_eq!(lead.a, m);
                    assert_eq!(map.det(), BigInt::from(1));
                    assert_eq!(form.apply_transform(&map), lead);
                    assert_eq!(lead.reduced().unwrap(), form.reduced().unwrap());
                } else {
                    assert!(form.represent(&m, true).is_none());
                }
            }
        }
    }
}
