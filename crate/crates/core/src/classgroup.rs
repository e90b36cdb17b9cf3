// SPDX-License-Identifier: Apache-2.0

//! The form class group `C(D)`, listed by reduced forms, with the group law
//! computed through ideal multiplication in the order of discriminant `D`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::forms::QuadForm;
use crate::intmath;
use crate::orders::{self, relative_conductor, DiscContext, OrderIdeal};

/// Index of a class in its group's list of reduced forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassElem(pub usize);

#[derive(Debug)]
pub struct ClassGroup {
    ctx: Arc<DiscContext>,
    reps: Vec<QuadForm>,
    lookup: HashMap<QuadForm, usize>,
    table: Vec<OnceLock<usize>>,
}

/// Smallest starting box for the coprime-representative search.
const PI_SEARCH_START: i64 = 32;
const PI_SEARCH_LIMIT: i64 = 1024;

impl ClassGroup {
    /// All reduced primitive positive definite forms of discriminant `d`,
    /// ordered by `(a, |b|, b < 0)`. The principal form comes first.
    pub fn enumerate_reduced(d: i64) -> Result<ClassGroup> {
        let ctx = DiscContext::new(d)?;
        let reps = reduced_forms(d);
        Ok(Self::from_reps(ctx, reps))
    }

    fn from_reps(ctx: Arc<DiscContext>, reps: Vec<QuadForm>) -> ClassGroup {
        let lookup = reps.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let h = reps.len();
        ClassGroup { ctx, reps, lookup, table: (0..h * h).map(|_| OnceLock::new()).collect() }
    }

    /// Rebuild a group from a previously exported multiplication table.
    /// Returns `None` if the table does not match the reduced forms of `d`
    /// in shape or fails the identity/commutativity checks.
    pub fn with_table(d: i64, table: &[Vec<usize>]) -> Result<Option<ClassGroup>> {
        let g = Self::enumerate_reduced(d)?;
        let h = g.order();
        if table.len() != h || table.iter().any(|row| row.len() != h || row.iter().any(|&k| k >= h)) {
            return Ok(None);
        }
        for (i, row) in table.iter().enumerate() {
            if table[0][i] != i || row[0] != i {
                return Ok(None);
            }
            if row.iter().enumerate().any(|(j, &k)| table[j][i] != k) {
                return Ok(None);
            }
        }
        for (i, row) in table.iter().enumerate() {
            for (j, &k) in row.iter().enumerate() {
                let _ = g.table[i * h + j].set(k);
            }
        }
        Ok(Some(g))
    }

    pub fn ctx(&self) -> &Arc<DiscContext> {
        &self.ctx
    }

    pub fn discriminant(&self) -> i64 {
        self.ctx.d()
    }

    /// The class number `h(D)`.
    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[QuadForm] {
        &self.reps
    }

    pub fn elements(&self) -> impl Iterator<Item = ClassElem> {
        (0..self.reps.len()).map(ClassElem)
    }

    pub fn form(&self, x: ClassElem) -> &QuadForm {
        &self.reps[x.0]
    }

    pub fn identity(&self) -> ClassElem {
        ClassElem(0)
    }

    /// Class of an arbitrary primitive positive definite form of this
    /// discriminant.
    pub fn element_of(&self, form: &QuadForm) -> Result<ClassElem> {
        form.validate()?;
        if form.discriminant() != self.ctx.d_big() {
            return Err(Error::ContextMismatch);
        }
        let reduced = form.reduced()?;
        self.lookup
            .get(&reduced)
            .map(|&i| ClassElem(i))
            .ok_or_else(|| Error::Internal(format!("reduced form {reduced} missing from C({})", self.ctx.d())))
    }

    /// Class of a proper ideal of the order.
    pub fn class_of_ideal(&self, ideal: &OrderIdeal) -> Result<ClassElem> {
        if ideal.ctx().d() != self.ctx.d() {
            return Err(Error::ContextMismatch);
        }
        self.element_of(&ideal.to_form()?)
    }

    pub fn ideal_of(&self, x: ClassElem) -> OrderIdeal {
        OrderIdeal::from_form_in(self.ctx.clone(), self.form(x)).expect("reduced forms are valid")
    }

    pub fn mul(&self, x: ClassElem, y: ClassElem) -> ClassElem {
        let h = self.order();
        let (i, j) = if x <= y { (x.0, y.0) } else { (y.0, x.0) };
        let k = *self.table[i * h + j].get_or_init(|| {
            let prod = self
                .ideal_of(ClassElem(i))
                .mul(&self.ideal_of(ClassElem(j)))
                .expect("ideals of primitive forms are proper");
            self.class_of_ideal(&prod).expect("product stays in the group").0
        });
        let _ = self.table[j * h + i].set(k);
        ClassElem(k)
    }

    pub fn inverse(&self, x: ClassElem) -> ClassElem {
        self.element_of(&self.form(x).opposite()).expect("opposite form is valid")
    }

    pub fn pow(&self, x: ClassElem, mut n: u64) -> ClassElem {
        let mut acc = self.identity();
        let mut base = x;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Full multiplication table (fills the memo).
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.elements()
            .map(|x| self.elements().map(|y| self.mul(x, y).0).collect())
            .collect()
    }

    /// Classes of forms representing the prime `p` (`p` not dividing the
    /// conductor, `(D/p) >= 0`): the reductions of `(p, ±b, c)`.
    pub fn classes_representing_prime(&self, p: u64) -> Result<BTreeSet<ClassElem>> {
        if !intmath::is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if self.ctx.conductor().is_multiple_of(p) {
            return Err(Error::ConductorPrime(p));
        }
        let Some(b) = orders::prime_form_b(self.ctx.d(), p) else {
            return Err(Error::InertPrime(p));
        };
        let d = self.ctx.d_big();
        let mut out = BTreeSet::new();
        for b in [b, -b] {
            let form = QuadForm::from_discriminant(p, b, &d).expect("b^2 = D mod 4p");
            out.insert(self.element_of(&form)?);
        }
        Ok(out)
    }

    /// Classes whose forms represent `l^h` for a prime `l` dividing the
    /// conductor, by exhaustive search on each reduced form.
    pub fn classes_representing_power(&self, l: u64, h: u32) -> Result<BTreeSet<ClassElem>> {
        if !intmath::is_prime(l) || !self.ctx.conductor().is_multiple_of(l) {
            return Err(Error::NotConductorPrime(l));
        }
        let target = BigInt::from(l).pow(h);
        Ok(self
            .elements()
            .filter(|&x| self.form(x).represent(&target, false).is_some())
            .collect())
    }

    /// The map `C(D) -> C(D')`, `[a] -> [a O']`, for `D = r^2 D'`.
    /// Uses a representative of the class whose norm is prime to `r`.
    pub fn surjection_pi(&self, x: ClassElem, target: &ClassGroup) -> Result<ClassElem> {
        let r = relative_conductor(&self.ctx, &target.ctx)?;
        let m = self.coprime_value(x, r)?;
        self.pi_via_value(x, &m, target)
    }

    /// `pi` computed through the representative `(m, B, C)` of `x`, for a
    /// value `m` properly represented by `x`'s form.
    pub fn pi_via_value(&self, x: ClassElem, m: &BigInt, target: &ClassGroup) -> Result<ClassElem> {
        relative_conductor(&self.ctx, &target.ctx)?;
        let (lead, _) = self
            .form(x)
            .lead_with(m)
            .ok_or_else(|| Error::InvalidInput(format!("{m} is not properly represented")))?;
        let ideal = OrderIdeal::from_form_in(self.ctx.clone(), &lead)?;
        let extended = ideal.extend(target.ctx())?;
        target.class_of_ideal(&extended)
    }

    /// Properly represented values of `x`'s form that are prime to `r`, in
    /// increasing order, from the search box `|x|, |y| <= bound`.
    pub fn coprime_values(&self, x: ClassElem, r: u64, bound: i64) -> Vec<BigInt> {
        let form = self.form(x);
        let rb = BigInt::from(r);
        let mut values = BTreeSet::new();
        for u in -bound..=bound {
            for v in -bound..=bound {
                if u.gcd(&v) != 1 {
                    continue;
                }
                let val = form.eval(&BigInt::from(u), &BigInt::from(v));
                if val.gcd(&rb).is_one() {
                    values.insert(val);
                }
            }
        }
        values.into_iter().collect()
    }

    fn coprime_value(&self, x: ClassElem, r: u64) -> Result<BigInt> {
        let mut bound = PI_SEARCH_START;
        while bound <= PI_SEARCH_LIMIT {
            if let Some(m) = self.coprime_values(x, r, bound).into_iter().next() {
                return Ok(m);
            }
            bound *= 2;
        }
        Err(Error::RepresentativeSearchExhausted(r))
    }

    /// `{ s_1 * ... * s_n : s_i in sets[i] }`; the empty product is the
    /// identity.
    pub fn reachable_products(&self, sets: &[BTreeSet<ClassElem>]) -> BTreeSet<ClassElem> {
        self.product_layers(sets)
            .last()
            .map(|layer| layer.keys().copied().collect())
            .unwrap_or_default()
    }

    /// One choice `s_i in sets[i]` per set with product `target`, if any.
    pub fn choose_factors(
        &self,
        sets: &[BTreeSet<ClassElem>],
        target: ClassElem,
    ) -> Option<Vec<ClassElem>> {
        let layers = self.product_layers(sets);
        let mut current = target;
        let mut picks = Vec::with_capacity(sets.len());
        for layer in layers.iter().skip(1).rev() {
            let &(prev, choice) = layer.get(&current)?.as_ref()?;
            picks.push(choice);
            current = prev;
        }
        if !layers.last()?.contains_key(&target) {
            return None;
        }
        picks.reverse();
        Some(picks)
    }

    /// Layer `i` maps each product of the first `i` sets to the
    /// (predecessor, choice) that first reached it.
    fn product_layers(
        &self,
        sets: &[BTreeSet<ClassElem>],
    ) -> Vec<BTreeMap<ClassElem, Option<(ClassElem, ClassElem)>>> {
        let mut layers = Vec::with_capacity(sets.len() + 1);
        let mut first = BTreeMap::new();
        first.insert(self.identity(), None);
        layers.push(first);
        for set in sets {
            let prev = layers.last().expect("non-empty");
            let mut next = BTreeMap::new();
            for &x in prev.keys() {
                for &s in set {
                    next.entry(self.mul(x, s)).or_insert(Some((x, s)));
                }
            }
            layers.push(next);
        }
        layers
    }
}

fn reduced_forms(d: i64) -> Vec<QuadForm> {
    let n = d.unsigned_abs() as u128;
    let a_max = intmath::isqrt_u128(n / 3) as i64;
    let mut out = Vec::new();
    let parity = d.rem_euclid(2);
    for a in 1..=a_max {
        for b in -a..=a {
            if b.rem_euclid(2) != parity {
                continue;
            }
            let num = (b as i128) * (b as i128) - d as i128;
            let den = 4 * a as i128;
            if num % den != 0 {
                continue;
            }
            let c = num / den;
            if c < a as i128 {
                continue;
            }
            if b < 0 && (-b == a || c == a as i128) {
                continue;
            }
            let g = (a as i128).gcd(&(b as i128)).gcd(&c);
            if g != 1 {
                continue;
            }
            out.push(QuadForm::new(a, b, c));
        }
    }
    out.sort_by_key(|f| (f.a.clone(), f.b.abs(), f.b.is_negative()));
    out
}

/// `h(D)` as a plain integer.
pub fn class_number(d: i64) -> Result<usize> {
    DiscContext::new(d)?;
    Ok(reduced_forms(d).len())
}

impl ClassGroup {
    /// Whether the reduced form of `x` represents `m`.
    pub fn represents(&self, x: ClassElem, m: u64) -> bool {
        self.form(x).represent(&BigInt::from(m), false).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn forms(d: i64) -> Vec<(i64, i64, i64)> {
        ClassGroup::enumerate_reduced(d)
            .unwrap()
            .reps()
            .iter()
            .map(|f| (f.a.to_i64().unwrap(), f.b.to_i64().unwrap(), f.c.to_i64().unwrap()))
            .collect()
    }

    fn elem(g: &ClassGroup, a: i64, b: i64, c: i64) -> ClassElem {
        g.element_of(&QuadForm::new(a, b, c)).unwrap()
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(forms(-4), vec![(1, 0, 1)]);
        assert_eq!(forms(-20), vec![(1, 0, 5), (2, 2, 3)]);
        assert_eq!(forms(-108), vec![(1, 0, 27), (4, 2, 7), (4, -2, 7)]);
        assert_eq!(forms(-3), vec![(1, 1, 1)]);
        assert!(ClassGroup::enumerate_reduced(-5).is_err());
        assert_eq!(class_number(-23).unwrap(), 3);
        assert_eq!(class_number(-47).unwrap(), 5);
    }

    #[test]
    fn multiplication_examples() {
        let g = ClassGroup::enumerate_reduced(-20).unwrap();
        let x = elem(&g, 2, 2, 3);
        assert_eq!(g.mul(g.identity(), x), x);
        assert_eq!(g.mul(x, x), g.identity());
        assert_eq!(g.pow(x, 2), g.identity());

        let g = ClassGroup::enumerate_reduced(-108).unwrap();
        let x = elem(&g, 4, 2, 7);
        let y = elem(&g, 4, -2, 7);
        assert_eq!(g.mul(x, x), y);
        assert_eq!(g.inverse(x), y);
        assert_eq!(g.inverse(g.identity()), g.identity());
        assert_eq!(g.pow(x, 3), g.identity());
    }

    #[test]
    fn prime_class_sets() {
        let g = ClassGroup::enumerate_reduced(-20).unwrap();
        let s = g.classes_representing_prime(3).unwrap();
        assert_eq!(s, BTreeSet::from([elem(&g, 2, 2, 3)]));
        let s = g.classes_representing_prime(29).unwrap();
        assert_eq!(s, BTreeSet::from([g.identity()]));
        assert_eq!(g.classes_representing_prime(11), Err(Error::InertPrime(11)));
        let g4 = ClassGroup::enumerate_reduced(-4).unwrap();
        assert_eq!(g4.classes_representing_prime(2).unwrap(), BTreeSet::from([g4.identity()]));
        let g32 = ClassGroup::enumerate_reduced(-32).unwrap();
        assert_eq!(g32.classes_representing_prime(2), Err(Error::ConductorPrime(2)));
    }

    #[test]
    fn power_class_sets() {
        let g = ClassGroup::enumerate_reduced(-32).unwrap();
        assert!(g.classes_representing_power(2, 1).unwrap().is_empty());
        assert_eq!(g.classes_representing_power(2, 2).unwrap().len(), 2);
        assert_eq!(g.classes_representing_power(2, 0).unwrap(), BTreeSet::from([g.identity()]));
        assert_eq!(g.classes_representing_power(3, 1), Err(Error::NotConductorPrime(3)));
        let g = ClassGroup::enumerate_reduced(-108).unwrap();
        assert!(g.classes_representing_power(3, 1).unwrap().is_empty());
    }

    #[test]
    fn pi_examples() {
        let g = ClassGroup::enumerate_reduced(-32).unwrap();
        let t = ClassGroup::enumerate_reduced(-8).unwrap();
        let img = g.surjection_pi(elem(&g, 3, 2, 3), &t).unwrap();
        assert_eq!(t.form(img), &QuadForm::new(1, 0, 2));

        let g = ClassGroup::enumerate_reduced(-108).unwrap();
        let t = ClassGroup::enumerate_reduced(-27).unwrap();
        let img = g.surjection_pi(elem(&g, 4, 2, 7), &t).unwrap();
        assert_eq!(t.form(img), &QuadForm::new(1, 1, 7));
        assert_eq!(g.surjection_pi(g.identity(), &t).unwrap(), t.identity());

        let g = ClassGroup::enumerate_reduced(-20).unwrap();
        let x = elem(&g, 2, 2, 3);
        assert_eq!(g.surjection_pi(x, &g).unwrap(), x);
        let bad = ClassGroup::enumerate_reduced(-4).unwrap();
        assert!(matches!(g.surjection_pi(x, &bad), Err(Error::NotNested { .. })));
    }

    #[test]
    fn reachable_examples() {
        let g = ClassGroup::enumerate_reduced(-20).unwrap();
        assert_eq!(g.reachable_products(&[]), BTreeSet::from([g.identity()]));
        let x = elem(&g, 2, 2, 3);
        let s = BTreeSet::from([x]);
        assert_eq!(g.reachable_products(&[s.clone(), s.clone()]), BTreeSet::from([g.identity()]));
        assert_eq!(g.choose_factors(&[s.clone(), s.clone()], g.identity()), Some(vec![x, x]));
        assert_eq!(g.choose_factors(&[s.clone(), s], x), None);
        let g = ClassGroup::enumerate_reduced(-32).unwrap();
        let both: BTreeSet<_> = g.elements().collect();
        assert_eq!(g.reachable_products(std::slice::from_ref(&both)), both);
    }

    #[test]
    fn table_import_validates() {
        let g = ClassGroup::enumerate_reduced(-108).unwrap();
        let t = g.table();
        let again = ClassGroup::with_table(-108, &t).unwrap().unwrap();
        assert_eq!(again.table(), t);
        assert!(ClassGroup::with_table(-108, &[vec![0]]).unwrap().is_none());
        let mut broken = t.clone();
        broken[1][2] = 1;
        assert!(ClassGroup::with_table(-108, &broken).unwrap().is_none());
    }
}
