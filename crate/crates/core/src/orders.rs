// SPDX-License-Identifier: Apache-2.0

//! Orders in imaginary quadratic fields and their fractional ideals.
//!
//! The order of discriminant `D` is `Z + Z w` with `w = (D + sqrt D)/2`,
//! `w^2 = D w - (D^2 - D)/4`. Every fractional ideal is a lattice
//! `scale * <a, (-b + sqrt D)/2>` with `scale` a positive rational, `a > 0`,
//! `-a < b <= a` and `b^2 = D (mod 4a)`. That triple is unique, so ideal
//! equality is field-wise equality. Products, extensions and contractions
//! are done on Hermite normal form bases over `{1, w}`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::forms::QuadForm;
use crate::intmath::{self, Factorization};
use crate::lattice::{Lattice, Vector};

/// A negative discriminant with its field discriminant and conductor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscContext {
    d: i64,
    d_k: i64,
    f: u64,
    f_factors: Factorization,
}

impl DiscContext {
    pub fn new(d: i64) -> Result<Arc<DiscContext>> {
        let (d_k, f) = intmath::fundamental_discriminant(d)?;
        let f_factors = intmath::factor(f)?;
        Ok(Arc::new(DiscContext { d, d_k, f, f_factors }))
    }

    /// The order of conductor `f` in the field of discriminant `d_k`.
    pub fn with_conductor(d_k: i64, f: u64) -> Result<Arc<DiscContext>> {
        let f2 = (f as i128) * (f as i128);
        let d = (f2 * d_k as i128)
            .to_i64()
            .ok_or_else(|| Error::OutOfRange(format!("{f}^2 * {d_k}")))?;
        let ctx = DiscContext::new(d)?;
        if ctx.d_k != d_k {
            return Err(Error::InvalidDiscriminant(format!("{d_k} is not fundamental")));
        }
        Ok(ctx)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn d_big(&self) -> BigInt {
        BigInt::from(self.d)
    }

    pub fn d_k(&self) -> i64 {
        self.d_k
    }

    pub fn conductor(&self) -> u64 {
        self.f
    }

    pub fn conductor_factors(&self) -> &Factorization {
        &self.f_factors
    }

    /// `(D^2 - D)/4`, the norm of `w`.
    fn norm_w(&self) -> BigInt {
        let d = self.d_big();
        (&d * &d - &d) / 4
    }

    /// Product of `x1 + y1 w` and `x2 + y2 w`.
    pub fn mul_elements(&self, u: &Vector, v: &Vector) -> Vector {
        let (x1, y1) = u;
        let (x2, y2) = v;
        let yy = y1 * y2;
        (
            x1 * x2 - &yy * self.norm_w(),
            x1 * y2 + x2 * y1 + yy * self.d_big(),
        )
    }

    /// Whether `self` is a suborder of `larger`.
    pub fn is_nested_in(&self, larger: &DiscContext) -> bool {
        self.d_k == larger.d_k && self.f.is_multiple_of(larger.f)
    }
}

/// `|O' / O|` for orders `O ⊆ O'`.
pub fn relative_conductor(small: &DiscContext, large: &DiscContext) -> Result<u64> {
    if !small.is_nested_in(large) {
        return Err(Error::NotNested { small: small.d, large: large.d });
    }
    Ok(small.f / large.f)
}

/// Coordinates in the `{1, w'}` basis of `O'` of the element `x + y w` of
/// `O`, where `w = (D - rD')/2 + r w'`.
fn to_larger_basis(v: &Vector, small: &DiscContext, large: &DiscContext, r: u64) -> Vector {
    let r = BigInt::from(r);
    let shift = (small.d_big() - &r * large.d_big()) / 2;
    (&v.0 + &v.1 * shift, &v.1 * r)
}

fn to_smaller_basis(v: &Vector, small: &DiscContext, large: &DiscContext, r: u64) -> Vector {
    let r = BigInt::from(r);
    let shift = (small.d_big() - &r * large.d_big()) / 2;
    debug_assert!(v.1.is_multiple_of(&r));
    let y = &v.1 / r;
    (&v.0 - &y * shift, y)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderIdeal {
    ctx: Arc<DiscContext>,
    scale: BigRational,
    a: BigInt,
    b: BigInt,
}

/// Result of intersecting an ideal of a larger order with a smaller one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub ideal: OrderIdeal,
    /// Whether the input was prime to the relative conductor; only then
    /// are norm preservation and properness guaranteed.
    pub prime_to_relative_conductor: bool,
}

impl OrderIdeal {
    /// `scale * <a, (-b + sqrt D)/2>`; `b` is taken modulo `2a`.
    pub fn new(ctx: Arc<DiscContext>, scale: BigRational, a: BigInt, b: BigInt) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::InvalidInput(format!("ideal scale {scale} must be positive")));
        }
        if !a.is_positive() {
            return Err(Error::InvalidInput(format!("ideal generator a={a} must be positive")));
        }
        let b = normalize_b(&b, &a);
        let four_a = BigInt::from(4) * &a;
        if !(&b * &b - ctx.d_big()).is_multiple_of(&four_a) {
            return Err(Error::InvalidInput(format!(
                "b^2 = D mod 4a fails for a={a}, b={b}, D={}",
                ctx.d
            )));
        }
        Ok(OrderIdeal { ctx, scale, a, b })
    }

    pub fn unit(ctx: Arc<DiscContext>) -> Self {
        let b = BigInt::from(ctx.d.rem_euclid(2));
        OrderIdeal { ctx, scale: BigRational::one(), a: BigInt::one(), b }
    }

    /// The principal ideal `n O`.
    pub fn principal_integer(ctx: Arc<DiscContext>, n: impl Into<BigInt>) -> Result<Self> {
        let n: BigInt = n.into();
        let mut unit = Self::unit(ctx);
        if !n.is_positive() {
            return Err(Error::InvalidInput(format!("{n} must be positive")));
        }
        unit.scale = BigRational::from_integer(n);
        Ok(unit)
    }

    /// `q * self` for a positive rational `q`.
    pub fn scaled(&self, q: &BigRational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::InvalidInput(format!("ideal scale {q} must be positive")));
        }
        let mut out = self.clone();
        out.scale = &out.scale * q;
        Ok(out)
    }

    pub fn ctx(&self) -> &Arc<DiscContext> {
        &self.ctx
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// `c = (b^2 - D) / 4a` of the attached form.
    fn c(&self) -> BigInt {
        (&self.b * &self.b - self.ctx.d_big()) / (BigInt::from(4) * &self.a)
    }

    pub fn norm(&self) -> BigRational {
        &self.scale * &self.scale * BigRational::from_integer(self.a.clone())
    }

    /// Norm of an integral ideal as an integer.
    pub fn norm_int(&self) -> Option<BigInt> {
        let n = self.norm();
        n.is_integer().then(|| n.to_integer())
    }

    pub fn is_integral(&self) -> bool {
        self.scale.is_integer()
    }

    pub fn is_unit(&self) -> bool {
        self.a.is_one() && self.scale.is_one()
    }

    /// Proper (equivalently invertible) iff the attached form is primitive.
    pub fn is_proper(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c()).is_one()
    }

    fn require_proper(&self) -> Result<()> {
        if self.is_proper() {
            Ok(())
        } else {
            Err(Error::NotProper)
        }
    }

    /// HNF of the primitive part `<a, (-b + sqrt D)/2>` over `{1, w}`.
    fn primitive_lattice(&self) -> Lattice {
        let second = ((-&self.b - self.ctx.d_big()) / 2, BigInt::one());
        Lattice::from_generators(&[(self.a.clone(), BigInt::zero()), second])
            .expect("ideal lattice has full rank")
    }

    /// HNF of `k * self` for an integer `k` that clears the scale.
    fn lattice_times(&self, k: &BigInt) -> Lattice {
        let s = &self.scale * BigRational::from_integer(k.clone());
        debug_assert!(s.is_integer());
        self.primitive_lattice().scaled(&s.to_integer())
    }

    /// Read off the canonical triple of the O-module `scale * lattice`.
    fn from_lattice(ctx: Arc<DiscContext>, scale: BigRational, lattice: &Lattice) -> Result<Self> {
        let gamma = &lattice.gamma;
        if !lattice.alpha.is_multiple_of(gamma) || !lattice.beta.is_multiple_of(gamma) {
            return Err(Error::Internal(format!("lattice {lattice:?} is not an order module")));
        }
        let a = &lattice.alpha / gamma;
        let beta = &lattice.beta / gamma;
        let b = -ctx.d_big() - BigInt::from(2) * beta;
        let scale = scale * BigRational::from_integer(gamma.clone());
        OrderIdeal::new(ctx, scale, a, b)
            .map_err(|e| Error::Internal(format!("lattice is not an order module: {e}")))
    }

    fn same_ctx(&self, other: &OrderIdeal) -> Result<()> {
        if self.ctx.d != other.ctx.d {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    /// Product of two proper ideals.
    pub fn mul(&self, other: &OrderIdeal) -> Result<OrderIdeal> {
        self.same_ctx(other)?;
        self.require_proper()?;
        other.require_proper()?;
        Ok(self.mul_lattices(other))
    }

    fn mul_lattices(&self, other: &OrderIdeal) -> OrderIdeal {
        let l1 = self.primitive_lattice().basis();
        let l2 = other.primitive_lattice().basis();
        let gens: Vec<Vector> = l1
            .iter()
            .flat_map(|u| l2.iter().map(move |v| (u, v)))
            .map(|(u, v)| self.ctx.mul_elements(u, v))
            .collect();
        let lattice = Lattice::from_generators(&gens).expect("product of ideals has full rank");
        Self::from_lattice(self.ctx.clone(), &self.scale * &other.scale, &lattice)
            .expect("product of order modules is an order module")
    }

    pub fn pow(&self, n: u32) -> Result<OrderIdeal> {
        self.require_proper()?;
        let mut acc = OrderIdeal::unit(self.ctx.clone());
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn conj(&self) -> OrderIdeal {
        OrderIdeal {
            ctx: self.ctx.clone(),
            scale: self.scale.clone(),
            b: normalize_b(&-&self.b, &self.a),
            a: self.a.clone(),
        }
    }

    /// `conj(A) / N(A)`.
    pub fn inv(&self) -> Result<OrderIdeal> {
        self.require_proper()?;
        let mut c = self.conj();
        c.scale = &c.scale / self.norm();
        Ok(c)
    }

    /// `self * other^{-1}`.
    pub fn div(&self, other: &OrderIdeal) -> Result<OrderIdeal> {
        self.mul(&other.inv()?)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &OrderIdeal) -> Result<bool> {
        self.same_ctx(other)?;
        let k = self.scale.denom().lcm(other.scale.denom());
        Ok(self.lattice_times(&k).contains_lattice(&other.lattice_times(&k)))
    }

    pub fn is_prime_to(&self, n: u64) -> bool {
        self.norm_int()
            .is_some_and(|norm| norm.gcd(&BigInt::from(n)).is_one())
    }

    /// The attached form `(a, b, (b^2 - D)/4a)`.
    pub fn to_form(&self) -> Result<QuadForm> {
        self.require_proper()?;
        Ok(QuadForm { a: self.a.clone(), b: self.b.clone(), c: self.c() })
    }

    /// `<a, (-b + sqrt D)/2>` for a primitive positive definite `(a, b, c)`.
    pub fn from_form(form: &QuadForm) -> Result<OrderIdeal> {
        form.validate()?;
        let ctx = DiscContext::new(form.discriminant_i64()?)?;
        Self::from_form_in(ctx, form)
    }

    pub fn from_form_in(ctx: Arc<DiscContext>, form: &QuadForm) -> Result<OrderIdeal> {
        form.validate()?;
        if form.discriminant() != ctx.d_big() {
            return Err(Error::ContextMismatch);
        }
        OrderIdeal::new(ctx, BigRational::one(), form.a.clone(), form.b.clone())
    }

    /// `A O'` for a proper `A` and a larger order `O'`.
    pub fn extend(&self, large: &Arc<DiscContext>) -> Result<OrderIdeal> {
        let r = relative_conductor(&self.ctx, large)?;
        self.require_proper()?;
        if r == 1 {
            return Ok(self.clone());
        }
        let w_prime = (BigInt::zero(), BigInt::one());
        let mut gens = Vec::with_capacity(4);
        for g in self.primitive_lattice().basis() {
            let g = to_larger_basis(&g, &self.ctx, large, r);
            gens.push(large.mul_elements(&g, &w_prime));
            gens.push(g);
        }
        let lattice = Lattice::from_generators(&gens).expect("extension has full rank");
        Self::from_lattice(large.clone(), self.scale.clone(), &lattice)
    }

    /// `A' ∩ O` for an integral ideal `A'` of a larger order.
    pub fn contract(&self, small: &Arc<DiscContext>) -> Result<Contraction> {
        let r = relative_conductor(small, &self.ctx)?;
        if !self.is_integral() {
            return Err(Error::NotIntegral);
        }
        let prime_to_relative_conductor = self.is_prime_to(r);
        if r == 1 {
            return Ok(Contraction { ideal: self.clone(), prime_to_relative_conductor });
        }
        let own = self.lattice_times(&BigInt::one());
        let order = Lattice::from_generators(&[
            (BigInt::one(), BigInt::zero()),
            to_larger_basis(&(BigInt::zero(), BigInt::one()), small, &self.ctx, r),
        ])
        .expect("order has full rank");
        let meet = own.intersect(&order);
        let gens: Vec<Vector> = meet
            .basis()
            .iter()
            .map(|v| to_smaller_basis(v, small, &self.ctx, r))
            .collect();
        let lattice = Lattice::from_generators(&gens).expect("contraction has full rank");
        let ideal = Self::from_lattice(small.clone(), BigRational::one(), &lattice)?;
        Ok(Contraction { ideal, prime_to_relative_conductor })
    }
}

/// Representative of `b mod 2a` in `(-a, a]`.
fn normalize_b(b: &BigInt, a: &BigInt) -> BigInt {
    let two_a = BigInt::from(2) * a;
    let mut r = b.mod_floor(&two_a);
    if &r > a {
        r -= two_a;
    }
    r
}

/// Prime ideals of norm `p` for a prime `p` not dividing the conductor:
/// two conjugates (positive `b` first) when `p` splits, one when it
/// ramifies, none when it is inert.
pub fn prime_ideals_above(ctx: &Arc<DiscContext>, p: u64) -> Result<Vec<OrderIdeal>> {
    if !intmath::is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if ctx.conductor().is_multiple_of(p) {
        return Err(Error::ConductorPrime(p));
    }
    let Some(b) = prime_form_b(ctx.d, p) else {
        return Ok(Vec::new());
    };
    let pb = BigInt::from(p);
    let one = BigRational::one();
    let first = OrderIdeal::new(ctx.clone(), one.clone(), pb.clone(), BigInt::from(b))?;
    let second = first.conj();
    if second == first {
        Ok(vec![first])
    } else {
        Ok(vec![first, second])
    }
}

/// Non-negative `b` in `[0, p]` with `b^2 = D (mod 4p)`, if any.
pub(crate) fn prime_form_b(d: i64, p: u64) -> Option<i64> {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 => Some(1),
            0 => Some(0),
            4 => Some(2),
            _ => None,
        };
    }
    let r = intmath::sqrt_mod(d, p)? as i64;
    let p = p as i64;
    let b = if (r - d).rem_euclid(2) == 0 { r } else { p - r };
    debug_assert!((b as i128 * b as i128 - d as i128).rem_euclid(4 * p as i128) == 0);
    Some(b)
}

impl fmt::Display for OrderIdeal {
    /// `D:num/den:a:b`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}/{}:{}:{}",
            self.ctx.d,
            self.scale.numer(),
            self.scale.denom(),
            self.a,
            self.b
        )
    }
}

impl FromStr for OrderIdeal {
    type Err = Error;

    /// Parses `D:num/den:a:b` (the `/den` part is optional).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("malformed ideal literal {s:?}"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [d, scale, a, b] = parts.as_slice() else {
            return Err(bad());
        };
        let d: i64 = d.parse().map_err(|_| bad())?;
        let (num, den) = match scale.split_once('/') {
            Some((n, m)) => (n, m),
            None => (*scale, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        let a: BigInt = a.parse().map_err(|_| bad())?;
        let b: BigInt = b.parse().map_err(|_| bad())?;
        let ctx = DiscContext::new(d)?;
        OrderIdeal::new(ctx, BigRational::new(num, den), a, b)
    }
}
