// SPDX-License-Identifier: Apache-2.0

mod common;

use num_bigint::BigInt;
use quadrep::{oracle_decide, Decider, Failure};
use rayon::prelude::*;

use common::*;

#[test]
fn decide_agrees_with_exhaustion_for_all_small_inputs() {
    let mismatches: Vec<(i64, String, u64)> = discriminants_from(-400)
        .into_par_iter()
        .flat_map_iter(|d| {
            let decider = Decider::new(d).unwrap();
            let reps = decider.group().reps().to_vec();
            let mut bad = Vec::new();
            for form in &reps {
                for m in 1..=2000u64 {
                    let mb = BigInt::from(m);
                    if decider.decide(form, &mb).unwrap().verdict != oracle_decide(form, &mb).is_some() {
                        bad.push((d, form.to_string(), m));
                    }
                }
            }
            bad
        })
        .collect();
    assert!(mismatches.is_empty(), "{} mismatches, first {:?}", mismatches.len(), mismatches.first());
}

#[test]
fn certificates_validate_themselves() {
    for d in [-20, -32, -64, -108, -135, -231, -288] {
        let decider = Decider::new(d).unwrap();
        let g = decider.group();
        for form in g.reps() {
            let target = g.element_of(form).unwrap();
            for m in 1..=600u64 {
                let mb = BigInt::from(m);
                let dec = decider.decide(form, &mb).unwrap();
                assert_eq!(dec, decider.decide(form, &mb).unwrap());
                if !dec.verdict {
                    assert!(dec.failure.is_some() && dec.witness.is_none());
                    continue;
                }
                let (x, y) = dec.witness.clone().unwrap();
                assert_eq!(form.eval(&x, &y), mb);
                let cw = dec.class_witness.unwrap();
                assert_eq!(cw.iter().fold(g.identity(), |acc, &(_, c)| g.mul(acc, c)), target);
                let mut covered: u128 = 1;
                for (w, c) in &cw {
                    assert!(g.represents(*c, w.value() as u64), "D={d} m={m} {w}");
                    covered *= w.value();
                }
                let rest = m as u128 / covered;
                assert_eq!(rest * covered, m as u128);
                let root = (rest as f64).sqrt().round() as u128;
                assert_eq!(root * root, rest, "inert part must be a square");
            }
        }
    }
}

#[test]
fn failures_follow_check_order() {
    let d = Decider::new(-32).unwrap();
    let f = quadrep::QuadForm::new(3, 2, 3);
    // 5 is inert and 2 is unrepresentable, the inert check comes first
    assert_eq!(d.decide(&f, &BigInt::from(10)).unwrap().failure, Some(Failure::OddInertExponent(5)));
    assert_eq!(d.decide(&f, &BigInt::from(2)).unwrap().failure, Some(Failure::ConductorPowerUnrepresentable(2, 1)));
    assert_eq!(d.decide(&f, &BigInt::from(0)).unwrap().failure, Some(Failure::NonPositive));
}
