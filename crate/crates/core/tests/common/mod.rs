// SPDX-License-Identifier: Apache-2.0

//! Generators and independent reference routines shared by the integration
//! tests.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use quadrep::{ClassGroup, DiscContext, OrderIdeal, QuadForm, UnimodularMap};
use rand::Rng;

pub const FUNDAMENTAL: [i64; 8] = [-3, -4, -7, -8, -11, -15, -20, -24];
pub const CONDUCTORS: [u64; 7] = [1, 2, 3, 4, 6, 9, 12];

pub fn is_discriminant(d: i64) -> bool {
    d < 0 && d.rem_euclid(4) <= 1
}

pub fn discriminants_from(lo: i64) -> Vec<i64> {
    (lo..=-3).filter(|&d| is_discriminant(d)).collect()
}

/// A random unimodular map built from `steps` elementary moves.
pub fn random_map<R: Rng>(rng: &mut R, steps: usize) -> UnimodularMap {
    let mut m = UnimodularMap::identity();
    for _ in 0..steps {
        let k: i64 = rng.gen_range(-3..=3);
        let e = match rng.gen_range(0..3) {
            0 => UnimodularMap::new(1, k, 0, 1),
            1 => UnimodularMap::new(1, 0, k, 1),
            _ => UnimodularMap::new(0, -1, 1, 0),
        };
        m = m.compose(&e);
    }
    m
}

/// A random primitive form in a random class of `group`.
pub fn random_form<R: Rng>(rng: &mut R, group: &ClassGroup) -> QuadForm {
    let base = &group.reps()[rng.gen_range(0..group.order())];
    let steps = rng.gen_range(0..5);
    base.apply_transform(&random_map(rng, steps))
}

/// A random proper integral ideal: the ideal of a random primitive form,
/// times a small integer with probability 1/4.
pub fn random_integral_ideal<R: Rng>(rng: &mut R, group: &ClassGroup) -> OrderIdeal {
    let form = random_form(rng, group);
    let ideal = OrderIdeal::from_form_in(group.ctx().clone(), &form).unwrap();
    if rng.gen_ratio(1, 4) {
        let n: i64 = rng.gen_range(2..=6);
        ideal.scaled(&BigRational::from_integer(n.into())).unwrap()
    } else {
        ideal
    }
}

/// A random proper fractional ideal.
pub fn random_ideal<R: Rng>(rng: &mut R, group: &ClassGroup) -> OrderIdeal {
    let ideal = random_integral_ideal(rng, group);
    if rng.gen_ratio(1, 3) {
        let den: i64 = rng.gen_range(2..=5);
        ideal.scaled(&BigRational::new(BigInt::one(), den.into())).unwrap()
    } else {
        ideal
    }
}

/// A random proper integral ideal whose norm is prime to `r`.
pub fn random_ideal_prime_to<R: Rng>(rng: &mut R, group: &ClassGroup, r: u64) -> OrderIdeal {
    let rb = BigInt::from(r);
    loop {
        let form = random_form(rng, group);
        let a = if form.a.gcd(&rb).is_one() {
            form
        } else if form.c.gcd(&rb).is_one() {
            QuadForm::new(form.c.clone(), -&form.b, form.a.clone())
        } else {
            continue;
        };
        return OrderIdeal::from_form_in(group.ctx().clone(), &a).unwrap();
    }
}

/// Every conductor dividing `f`, smallest first.
pub fn divisors(f: u64) -> Vec<u64> {
    (1..=f).filter(|k| f.is_multiple_of(*k)).collect()
}

/// Representation by a plain double loop over the box that positive
/// definiteness allows.
pub fn represents_by_double_loop(form: &QuadForm, m: i64) -> bool {
    let (a, b, c) = (form.a.to_i64().unwrap(), form.b.to_i64().unwrap(), form.c.to_i64().unwrap());
    let d = (b * b - 4 * a * c).abs();
    let xs = ((4 * c * m) as f64 / d as f64).sqrt() as i64 + 1;
    let ys = ((4 * a * m) as f64 / d as f64).sqrt() as i64 + 1;
    for x in -xs..=xs {
        for y in -ys..=ys {
            if a * x * x + b * x * y + c * y * y == m {
                return true;
            }
        }
    }
    false
}

/// Dirichlet composition of two forms with `gcd(a1, a2, (b1 + b2)/2) = 1`:
/// `(a1 a2, B, (B^2 - D)/(4 a1 a2))` with `B` found by scanning residues.
pub fn dirichlet_compose(f: &QuadForm, g: &QuadForm) -> Option<QuadForm> {
    let d = f.discriminant();
    let half = (&f.b + &g.b) / 2;
    if !f.a.gcd(&g.a).gcd(&half).is_one() {
        return None;
    }
    let a3 = &f.a * &g.a;
    let two_a3 = BigInt::from(2) * &a3;
    let mut b = BigInt::zero();
    while b < two_a3 {
        if (&b - &f.b).is_multiple_of(&(BigInt::from(2) * &f.a))
            && (&b - &g.b).is_multiple_of(&(BigInt::from(2) * &g.a))
            && (&b * &b - &d).is_multiple_of(&(BigInt::from(4) * &a3))
        {
            let c = (&b * &b - &d) / (BigInt::from(4) * &a3);
            return Some(QuadForm::new(a3, b, c));
        }
        b += 1;
    }
    None
}

pub fn group(d: i64) -> Arc<ClassGroup> {
    Arc::new(ClassGroup::enumerate_reduced(d).unwrap())
}

pub fn ctx(d: i64) -> Arc<DiscContext> {
    DiscContext::new(d).unwrap()
}

pub fn set_of(xs: impl IntoIterator<Item = u64>) -> BTreeSet<u64> {
    xs.into_iter().collect()
}
