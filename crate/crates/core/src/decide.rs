// SPDX-License-Identifier: Apache-2.0

//! Deciding whether a form represents `m` through the class group, with
//! certificates, plus closed-form predicates for a handful of worked
//! discriminants and an exhaustive oracle to check both against.
//!
//! Write `m = p_1 ... p_r * q_1^{e_1} ... q_s^{e_s} * l_1^{h_1} ... l_t^{h_t}`
//! with `p_i` prime to the conductor and not inert, `q_j` inert and `l_k`
//! dividing the conductor. Then `F` represents `m` iff every `e_j` is even
//! and `[F] = [f_1] ... [f_r] [g_1] ... [g_t]` for some forms `f_i`
//! representing `p_i` and `g_k` representing `l_k^{h_k}`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::classgroup::{ClassElem, ClassGroup};
use crate::error::{Error, Result};
use crate::forms::QuadForm;
use crate::intmath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Failure {
    NonPositive,
    OddInertExponent(u64),
    ClassEquationUnsatisfiable,
    ConductorPowerUnrepresentable(u64, u32),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::NonPositive => write!(f, "m is not positive"),
            Failure::OddInertExponent(q) => write!(f, "inert prime {q} has odd exponent"),
            Failure::ClassEquationUnsatisfiable => {
                write!(f, "no choice of classes multiplies to the class of the form")
            }
            Failure::ConductorPowerUnrepresentable(l, h) => {
                write!(f, "no form of this discriminant represents {l}^{h}")
            }
        }
    }
}

/// The factor of `m` a chosen class accounts for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessFactor {
    Prime(u64),
    ConductorPower(u64, u32),
}

impl WitnessFactor {
    pub fn value(&self) -> u128 {
        match *self {
            WitnessFactor::Prime(p) => p as u128,
            WitnessFactor::ConductorPower(l, h) => (l as u128).pow(h),
        }
    }
}

impl fmt::Display for WitnessFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessFactor::Prime(p) => write!(f, "{p}"),
            WitnessFactor::ConductorPower(l, h) => write!(f, "{l}^{h}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub verdict: bool,
    pub witness: Option<(BigInt, BigInt)>,
    pub class_witness: Option<Vec<(WitnessFactor, ClassElem)>>,
    pub failure: Option<Failure>,
    pub trace: Vec<String>,
}

impl Decision {
    fn no(failure: Failure, mut trace: Vec<String>) -> Decision {
        trace.push(format!("NO: {failure}"));
        Decision { verdict: false, witness: None, class_witness: None, failure: Some(failure), trace }
    }
}

/// Decision procedure bound to one discriminant. Caches the class sets of
/// conductor prime powers, which are found by search.
#[derive(Debug)]
pub struct Decider {
    group: Arc<ClassGroup>,
    power_sets: Mutex<HashMap<(u64, u32), BTreeSet<ClassElem>>>,
}

impl Decider {
    pub fn new(d: i64) -> Result<Decider> {
        Ok(Self::with_group(Arc::new(ClassGroup::enumerate_reduced(d)?)))
    }

    pub fn with_group(group: Arc<ClassGroup>) -> Decider {
        Decider { group, power_sets: Mutex::new(HashMap::new()) }
    }

    pub fn group(&self) -> &Arc<ClassGroup> {
        &self.group
    }

    fn power_set(&self, l: u64, h: u32) -> Result<BTreeSet<ClassElem>> {
        if let Some(s) = self.power_sets.lock().expect("cache lock").get(&(l, h)) {
            return Ok(s.clone());
        }
        let s = self.group.classes_representing_power(l, h)?;
        self.power_sets.lock().expect("cache lock").insert((l, h), s.clone());
        Ok(s)
    }

    pub fn decide(&self, form: &QuadForm, m: &BigInt) -> Result<Decision> {
        let group = &self.group;
        let ctx = group.ctx();
        let target = group.element_of(form)?;
        let mut trace = vec![format!(
            "form {form} has discriminant {} = {}^2 * {}, class number {}",
            ctx.d(),
            ctx.conductor(),
            ctx.d_k(),
            group.order()
        )];
        trace.push(format!("[F] = [{}]", group.form(target)));
        if !m.is_positive() {
            return Ok(Decision::no(Failure::NonPositive, trace));
        }
        let m64 = m.to_u64().ok_or_else(|| Error::OutOfRange(format!("m = {m}")))?;
        let fact = intmath::factor(m64)?;
        trace.push(format!("m = {fact}"));

        let f = ctx.conductor();
        let mut primes = Vec::new();
        let mut powers = Vec::new();
        let mut inert = Vec::new();
        for &(p, e) in fact.factors() {
            if f.is_multiple_of(p) {
                powers.push((p, e));
            } else if intmath::kronecker(ctx.d(), p) < 0 {
                inert.push((p, e));
            } else {
                primes.push((p, e));
            }
        }
        for &(q, e) in &inert {
            trace.push(format!("{q} is inert with exponent {e}"));
            if e % 2 == 1 {
                return Ok(Decision::no(Failure::OddInertExponent(q), trace));
            }
        }

        let mut labels = Vec::new();
        let mut sets = Vec::new();
        for &(p, e) in &primes {
            let s = group.classes_representing_prime(p)?;
            trace.push(format!("S({p}) = {} (exponent {e})", self.describe(&s)));
            for _ in 0..e {
                labels.push(WitnessFactor::Prime(p));
                sets.push(s.clone());
            }
        }
        for &(l, h) in &powers {
            let s = self.power_set(l, h)?;
            trace.push(format!("S({l}^{h}) = {}", self.describe(&s)));
            if s.is_empty() {
                return Ok(Decision::no(Failure::ConductorPowerUnrepresentable(l, h), trace));
            }
            labels.push(WitnessFactor::ConductorPower(l, h));
            sets.push(s);
        }

        let Some(picks) = group.choose_factors(&sets, target) else {
            return Ok(Decision::no(Failure::ClassEquationUnsatisfiable, trace));
        };
        let chosen: Vec<_> = labels.into_iter().zip(picks).collect();
        trace.push(format!(
            "[F] = {}",
            if chosen.is_empty() {
                "identity".to_string()
            } else {
                chosen
                    .iter()
                    .map(|(w, x)| format!("[{}]({w})", group.form(*x)))
                    .collect::<Vec<_>>()
                    .join(" * ")
            }
        ));
        let witness = form.represent(m, false).ok_or_else(|| {
            Error::Internal(format!("class equation holds but {form} does not represent {m}"))
        })?;
        trace.push(format!("YES: F({}, {}) = {m}", witness.0, witness.1));
        Ok(Decision { verdict: true, witness: Some(witness), class_witness: Some(chosen), failure: None, trace })
    }

    fn describe(&self, s: &BTreeSet<ClassElem>) -> String {
        let parts: Vec<String> = s.iter().map(|&x| self.group.form(x).to_string()).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// One-shot decision; builds the class group of `form`'s discriminant.
pub fn decide(form: &QuadForm, m: &BigInt) -> Result<Decision> {
    form.validate()?;
    Decider::new(form.discriminant_i64()?)?.decide(form, m)
}

/// Ground truth by exhaustive search.
pub fn oracle_decide(form: &QuadForm, m: &BigInt) -> Option<(BigInt, BigInt)> {
    if !m.is_positive() {
        return None;
    }
    form.represent(m, false)
}

/// Worked discriminants with a closed-form answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExampleId {
    /// `x^2 + y^2`
    E1_1,
    /// `3x^2 + 2xy + 3y^2`
    E1_2,
    /// `4x^2 + 2xy + 7y^2`
    E1_3,
    /// `2x^2 + 2xy + 3y^2`
    E8_2,
    /// `4x^2 + 4xy + 5y^2`
    E8_5,
}

impl ExampleId {
    pub const ALL: [ExampleId; 5] =
        [ExampleId::E1_1, ExampleId::E1_2, ExampleId::E1_3, ExampleId::E8_2, ExampleId::E8_5];

    pub fn form(&self) -> QuadForm {
        match self {
            ExampleId::E1_1 => QuadForm::new(1, 0, 1),
            ExampleId::E1_2 => QuadForm::new(3, 2, 3),
            ExampleId::E1_3 => QuadForm::new(4, 2, 7),
            ExampleId::E8_2 => QuadForm::new(2, 2, 3),
            ExampleId::E8_5 => QuadForm::new(4, 4, 5),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ExampleId::E1_1 => "1.1",
            ExampleId::E1_2 => "1.2",
            ExampleId::E1_3 => "1.3",
            ExampleId::E8_2 => "8.2",
            ExampleId::E8_5 => "8.5",
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ExampleId::ALL
            .into_iter()
            .find(|e| e.as_str() == s.trim())
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

/// The closed-form criterion for `example`, evaluated from the
/// factorization of `m` alone.
pub fn closed_form_predicate(example: ExampleId, m: u64) -> Result<bool> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let fact = intmath::factor(m)?;
    let even = |pred: &dyn Fn(u64) -> bool| fact.factors().iter().all(|&(q, e)| !pred(q) || e % 2 == 0);
    let count = |pred: &dyn Fn(u64) -> bool| -> u32 {
        fact.factors().iter().filter(|&&(p, _)| pred(p)).map(|&(_, e)| e).sum()
    };
    Ok(match example {
        ExampleId::E1_1 => even(&|q| q % 4 == 3),
        ExampleId::E1_2 => {
            let h = fact.exponent_of(2);
            let threes = count(&|p| p % 8 == 3);
            even(&|q| q % 8 == 5 || q % 8 == 7) && ((threes % 2 == 1 && h == 0) || h >= 2)
        }
        ExampleId::E1_3 => {
            let h2 = fact.exponent_of(2);
            let h3 = fact.exponent_of(3);
            let mut non_cubic = false;
            for p in fact.primes().filter(|p| p % 3 == 1) {
                non_cubic |= !intmath::is_cubic_residue(2, p)?;
            }
            even(&|q| q != 2 && q % 3 == 2)
                && ((non_cubic && h2 == 0 && h3 == 0) || (h2 % 2 == 0 && h3 != 1 && (h2, h3) != (0, 0)))
        }
        ExampleId::E8_2 => {
            let odd_class = count(&|p| p == 2 || p % 20 == 3 || p % 20 == 7);
            even(&|q| matches!(q % 20, 11 | 13 | 17 | 19)) && odd_class % 2 == 1
        }
        ExampleId::E8_5 => {
            let h = fact.exponent_of(2);
            let fives = count(&|p| p % 8 == 5);
            even(&|q| q % 8 == 3 || q % 8 == 7) && ((fives % 2 == 1 && h == 0) || h == 2 || h >= 4)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub m: u64,
    pub decide: bool,
    pub predicate: bool,
    pub oracle: bool,
}

#[derive(Debug, Clone)]
pub struct ExampleReport {
    pub example: ExampleId,
    pub form: QuadForm,
    pub max_m: u64,
    pub represented: u64,
    pub disagreements: Vec<Disagreement>,
    pub elapsed: Duration,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compare the decision procedure, the closed-form predicate and the oracle
/// for every `1 <= m <= max_m`.
pub fn verify_example(example: ExampleId, max_m: u64) -> Result<ExampleReport> {
    let start = Instant::now();
    let form = example.form();
    let decider = Decider::new(form.discriminant_i64()?)?;
    let rows: Vec<(u64, bool, bool, bool)> = (1..=max_m)
        .into_par_iter()
        .map(|m| {
            let mb = BigInt::from(m);
            let d = decider.decide(&form, &mb)?.verdict;
            let p = closed_form_predicate(example, m)?;
            let o = oracle_decide(&form, &mb).is_some();
            Ok((m, d, p, o))
        })
        .collect::<Result<_>>()?;
    let represented = rows.iter().filter(|r| r.3).count() as u64;
    let disagreements = rows
        .into_iter()
        .filter(|&(_, d, p, o)| !(d == p && p == o))
        .map(|(m, decide, predicate, oracle)| Disagreement { m, decide, predicate, oracle })
        .collect();
    Ok(ExampleReport { example, form, max_m, represented, disagreements, elapsed: start.elapsed() })
}
