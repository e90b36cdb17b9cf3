// SPDX-License-Identifier: Apache-2.0

//! Binary quadratic forms `ax^2 + bxy + cy^2`: reduction, change of
//! variables and exhaustive representation search.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// 2x2 integer matrix `[[p, q], [r, s]]` acting by
/// `F(x, y) -> F(px + qy, rx + sy)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnimodularMap {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub s: BigInt,
}

impl UnimodularMap {
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        r: impl Into<BigInt>,
        s: impl Into<BigInt>,
    ) -> Self {
        UnimodularMap { p: p.into(), q: q.into(), r: r.into(), s: s.into() }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.p * &self.s - &self.q * &self.r
    }

    /// Matrix product `self * other`; applying `self` then `other` to a form
    /// equals applying the product.
    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        UnimodularMap {
            p: &self.p * &other.p + &self.q * &other.r,
            q: &self.p * &other.q + &self.q * &other.s,
            r: &self.r * &other.p + &self.s * &other.r,
            s: &self.r * &other.q + &self.s * &other.s,
        }
    }

    /// Inverse of a determinant `±1` matrix.
    pub fn inverse(&self) -> Option<UnimodularMap> {
        let d = self.det();
        if !d.abs().is_one() {
            return None;
        }
        Some(UnimodularMap {
            p: &d * &self.s,
            q: -(&d * &self.q),
            r: -(&d * &self.r),
            s: &d * &self.p,
        })
    }

    /// Image of the column vector `(x, y)`.
    pub fn apply(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        (&self.p * x + &self.q * y, &self.r * x + &self.s * y)
    }
}

impl fmt::Display for UnimodularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.p, self.q, self.r, self.s)
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl QuadForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        QuadForm { a: a.into(), b: b.into(), c: c.into() }
    }

    /// The principal form of discriminant `d`.
    pub fn principal(d: i64) -> Result<Self> {
        match d.rem_euclid(4) {
            _ if d >= 0 => Err(Error::InvalidDiscriminant(d.to_string())),
            0 => Ok(QuadForm::new(1, 0, -d / 4)),
            1 => Ok(QuadForm::new(1, 1, (1 - d) / 4)),
            _ => Err(Error::InvalidDiscriminant(d.to_string())),
        }
    }

    /// The form `(a, b, (b^2 - d) / 4a)`, if `4a` divides `b^2 - d`.
    pub fn from_discriminant(a: impl Into<BigInt>, b: impl Into<BigInt>, d: &BigInt) -> Option<Self> {
        let (a, b) = (a.into(), b.into());
        if a.is_zero() {
            return None;
        }
        let (c, rem) = (&b * &b - d).div_rem(&(BigInt::from(4) * &a));
        rem.is_zero().then_some(QuadForm { a, b, c })
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    /// Discriminant as a machine integer, the range every class-group
    /// computation works in.
    pub fn discriminant_i64(&self) -> Result<i64> {
        self.discriminant()
            .to_i64()
            .ok_or_else(|| Error::OutOfRange(format!("discriminant of {self}")))
    }

    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a.is_positive() && self.discriminant().is_negative()
    }

    /// Check primitivity and positive definiteness.
    pub fn validate(&self) -> Result<()> {
        if !self.is_positive_definite() {
            return Err(Error::InvalidForm(self.to_string(), "not positive definite"));
        }
        if !self.is_primitive() {
            return Err(Error::InvalidForm(self.to_string(), "not primitive"));
        }
        Ok(())
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    /// `(a, -b, c)`, the inverse class.
    pub fn opposite(&self) -> QuadForm {
        QuadForm { a: self.a.clone(), b: -&self.b, c: self.c.clone() }
    }

    /// `|b| <= a <= c`, with `b >= 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let babs = self.b.abs();
        if babs > self.a || self.a > self.c {
            return false;
        }
        if (babs == self.a || self.a == self.c) && self.b.is_negative() {
            return false;
        }
        true
    }

    pub fn apply_transform(&self, m: &UnimodularMap) -> QuadForm {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        let (p, q, r, s) = (&m.p, &m.q, &m.r, &m.s);
        let two = BigInt::from(2);
        QuadForm {
            a: a * p * p + b * p * r + c * r * r,
            b: &two * a * p * q + b * (p * s + q * r) + &two * c * r * s,
            c: a * q * q + b * q * s + c * s * s,
        }
    }

    /// Reduce a primitive positive definite form. Returns `(G, M)` with
    /// `G = self.apply_transform(M)`, `det M = 1` and `G` reduced.
    pub fn reduce(&self) -> Result<(QuadForm, UnimodularMap)> {
        self.validate()?;
        let mut form = self.clone();
        let mut map = UnimodularMap::identity();
        let swap = UnimodularMap::new(0, -1, 1, 0);
        loop {
            // b into (-a, a] via x -> x + k y
            let two_a = BigInt::from(2) * &form.a;
            let k = (&form.a - &form.b).div_floor(&two_a);
            if !k.is_zero() {
                let shift = UnimodularMap::new(1, k, 0, 1);
                form = form.apply_transform(&shift);
                map = map.compose(&shift);
            }
            if form.a > form.c || (form.a == form.c && form.b.is_negative()) {
                form = form.apply_transform(&swap);
                map = map.compose(&swap);
            } else {
                break;
            }
        }
        debug_assert!(form.is_reduced());
        Ok((form, map))
    }

    pub fn reduced(&self) -> Result<QuadForm> {
        Ok(self.reduce()?.0)
    }

    /// Search for `(x, y)` with `F(x, y) = m`, optionally with
    /// `gcd(x, y) = 1`. The witness returned is the least under the key
    /// `(|x|, |y|, x < 0, y < 0)`. The search is complete for positive
    /// definite forms since `4cF = (2cy + bx)^2 + |D|x^2`.
    pub fn represent(&self, m: &BigInt, proper: bool) -> Option<(BigInt, BigInt)> {
        debug_assert!(self.is_positive_definite());
        if m.is_negative() {
            return None;
        }
        if m.is_zero() {
            return (!proper).then(|| (BigInt::zero(), BigInt::zero()));
        }
        let d = self.discriminant();
        let four_cm = BigInt::from(4) * &self.c * m;
        let x_max = (&four_cm / -&d).sqrt();
        let two_c = BigInt::from(2) * &self.c;
        let mut x_abs = BigInt::zero();
        while x_abs <= x_max {
            let mut best: Option<(BigInt, BigInt)> = None;
            let signs: &[i32] = if x_abs.is_zero() { &[1] } else { &[1, -1] };
            for &sx in signs {
                let x = &x_abs * sx;
                let delta = &d * &x * &x + &four_cm;
                if delta.is_negative() {
                    continue;
                }
                let root = delta.sqrt();
                if &root * &root != delta {
                    continue;
                }
                let bx = &self.b * &x;
                for numerator in [-&bx + &root, -&bx - &root] {
                    if !numerator.is_multiple_of(&two_c) {
                        continue;
                    }
                    let y = numerator / &two_c;
                    if proper && !x.gcd(&y).is_one() {
                        continue;
                    }
                    let better = match &best {
                        None => true,
                        Some(cur) => witness_key(&x, &y) < witness_key(&cur.0, &cur.1),
                    };
                    if better {
                        best = Some((x.clone(), y));
                    }
                }
            }
            if best.is_some() {
                return best;
            }
            x_abs += 1;
        }
        None
    }

    /// Every `0 <= n <= bound` that the form represents.
    pub fn represented_set(&self, bound: u64) -> BTreeSet<u64> {
        let d = -self.discriminant();
        let bound_big = BigInt::from(bound);
        let four_b = BigInt::from(4) * &bound_big;
        let x_max = (&four_b * &self.c / &d).sqrt().to_i64().unwrap_or(i64::MAX);
        let y_max = (&four_b * &self.a / &d).sqrt().to_i64().unwrap_or(i64::MAX);
        let mut out = BTreeSet::new();
        for x in -x_max..=x_max {
            let xb = BigInt::from(x);
            for y in -y_max..=y_max {
                let v = self.eval(&xb, &BigInt::from(y));
                if v <= bound_big {
                    out.insert(v.to_u64().expect("positive definite values are non-negative"));
                }
            }
        }
        out
    }

    /// If `m` is properly represented, a form `(m, b, c)` of the same
    /// discriminant together with `M` (determinant 1) such that
    /// `self.apply_transform(M) = (m, b, c)`.
    pub fn lead_with(&self, m: &BigInt) -> Option<(QuadForm, UnimodularMap)> {
        let (x0, y0) = self.represent(m, true)?;
        let (u, v) = bezout(&x0, &y0);
        // [[x0, -v], [y0, u]] has determinant u*x0 + v*y0 = 1
        let map = UnimodularMap { p: x0, q: -v, r: y0, s: u };
        let form = self.apply_transform(&map);
        debug_assert_eq!(&form.a, m);
        Some((form, map))
    }
}

fn witness_key(x: &BigInt, y: &BigInt) -> (BigInt, BigInt, bool, bool) {
    (x.abs(), y.abs(), x.is_negative(), y.is_negative())
}

/// Canonical Bezout pair `(u, v)` with `u*x + v*y = 1` for coprime `x, y`.
fn bezout(x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
    let e = x.extended_gcd(y);
    if e.gcd.is_negative() {
        (-e.x, -e.y)
    } else {
        (e.x, e.y)
    }
}
