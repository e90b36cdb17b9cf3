// SPDX-License-Identifier: Apache-2.0

//! Factorization of proper integral ideals of an order into prime ideals of
//! norm `p` (for primes prime to the conductor), powers of `qO` for inert
//! `q`, and one proper ideal of norm `l^h` per conductor prime `l`.
//!
//! Parts prime to the conductor are handled in the maximal order and
//! contracted back. Conductor primes are peeled one at a time in ascending
//! order: extend to the order whose conductor drops `l`, split off the
//! prime-to-`l` part there, contract it, and divide.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::classgroup::ClassGroup;
use crate::error::{Error, Result};
use crate::intmath;
use crate::orders::{prime_ideals_above, DiscContext, OrderIdeal};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealDecomposition {
    pub ctx: Arc<DiscContext>,
    /// Prime ideals of prime norm `p` (split or ramified) with exponents.
    pub split_ramified: Vec<(OrderIdeal, u32)>,
    /// Inert primes `q` with the exponent of `qO` (half the exponent of `q`
    /// in the norm).
    pub inert: Vec<(u64, u32)>,
    /// One proper ideal per conductor prime `l`, of norm `l^h`.
    pub conductor_parts: Vec<(u64, OrderIdeal)>,
}

impl IdealDecomposition {
    fn empty(ctx: Arc<DiscContext>) -> Self {
        IdealDecomposition {
            ctx,
            split_ramified: Vec::new(),
            inert: Vec::new(),
            conductor_parts: Vec::new(),
        }
    }

    /// Multiply all parts back together.
    pub fn recompose(&self) -> Result<OrderIdeal> {
        let mut acc = OrderIdeal::unit(self.ctx.clone());
        for (p, e) in &self.split_ramified {
            acc = acc.mul(&p.pow(*e)?)?;
        }
        for &(q, k) in &self.inert {
            acc = acc.mul(&OrderIdeal::principal_integer(self.ctx.clone(), q)?.pow(k)?)?;
        }
        for (_, c) in &self.conductor_parts {
            acc = acc.mul(c)?;
        }
        Ok(acc)
    }

    /// Product of the norms of all parts.
    pub fn norm(&self) -> BigInt {
        let mut n = BigInt::one();
        for (p, e) in &self.split_ramified {
            n *= p.norm_int().expect("prime ideals are integral").pow(*e);
        }
        for &(q, k) in &self.inert {
            n *= BigInt::from(q).pow(2 * k);
        }
        for (_, c) in &self.conductor_parts {
            n *= c.norm_int().expect("conductor parts are integral");
        }
        n
    }

    pub fn is_empty(&self) -> bool {
        self.split_ramified.is_empty()
            && self.inert.is_empty()
            && self.conductor_parts.iter().all(|(_, c)| c.is_unit())
    }

    /// Whether `[a] = prod [p_i]^{e_i} * prod [c_k]` holds in the class group.
    pub fn class_equation_holds(&self, group: &ClassGroup, ideal: &OrderIdeal) -> Result<bool> {
        let mut acc = group.identity();
        for (p, e) in &self.split_ramified {
            acc = group.mul(acc, group.pow(group.class_of_ideal(p)?, *e as u64));
        }
        for (_, c) in &self.conductor_parts {
            acc = group.mul(acc, group.class_of_ideal(c)?);
        }
        Ok(acc == group.class_of_ideal(ideal)?)
    }
}

fn require_integral(a: &OrderIdeal) -> Result<BigInt> {
    if !a.is_integral() {
        return Err(Error::NotIntegral);
    }
    Ok(a.norm_int().expect("integral ideals have integral norm"))
}

fn norm_u64(n: &BigInt) -> Result<u64> {
    n.to_u64().ok_or_else(|| Error::OutOfRange(format!("ideal norm {n}")))
}

/// `a / b`, which must be integral.
fn divide_exact(a: &OrderIdeal, b: &OrderIdeal) -> Result<OrderIdeal> {
    let q = a.div(b)?;
    if !q.is_integral() {
        return Err(Error::Internal(format!("{a} / {b} is not integral")));
    }
    Ok(q)
}

/// Prime factorization of an integral ideal of a maximal order.
pub fn decompose_maximal(ideal: &OrderIdeal) -> Result<IdealDecomposition> {
    let ctx = ideal.ctx().clone();
    if ctx.conductor() != 1 {
        return Err(Error::InvalidInput(format!("order of discriminant {} is not maximal", ctx.d())));
    }
    let norm = norm_u64(&require_integral(ideal)?)?;
    let mut rest = ideal.clone();
    let mut out = IdealDecomposition::empty(ctx.clone());
    for &(p, v) in intmath::factor(norm)?.factors() {
        if intmath::kronecker(ctx.d_k(), p) >= 0 {
            for prime in prime_ideals_above(&ctx, p)? {
                let mut e = 0;
                while prime.contains(&rest)? {
                    rest = divide_exact(&rest, &prime)?;
                    e += 1;
                }
                if e > 0 {
                    out.split_ramified.push((prime, e));
                }
            }
        } else {
            let q_ideal = OrderIdeal::principal_integer(ctx.clone(), p)?;
            let mut k = 0;
            while q_ideal.contains(&rest)? {
                rest = divide_exact(&rest, &q_ideal)?;
                k += 1;
            }
            if 2 * k != v {
                return Err(Error::OddInertExponent(p));
            }
            out.inert.push((p, k));
        }
    }
    if !rest.is_unit() {
        return Err(Error::Internal(format!("cofactor {rest} left after prime extraction")));
    }
    Ok(out)
}

/// Decomposition of a proper integral ideal whose norm is prime to the
/// conductor, via the maximal order.
pub fn decompose_coprime(ideal: &OrderIdeal) -> Result<IdealDecomposition> {
    let ctx = ideal.ctx().clone();
    let norm = require_integral(ideal)?;
    if !ideal.is_proper() {
        return Err(Error::NotProper);
    }
    if !norm.gcd(&BigInt::from(ctx.conductor())).is_one() {
        return Err(Error::NotCoprime(norm.to_string()));
    }
    let maximal = DiscContext::with_conductor(ctx.d_k(), 1)?;
    let upstairs = decompose_maximal(&ideal.extend(&maximal)?)?;
    let mut out = IdealDecomposition::empty(ctx.clone());
    for (prime, e) in upstairs.split_ramified {
        out.split_ramified.push((prime.contract(&ctx)?.ideal, e));
    }
    out.inert = upstairs.inert;
    Ok(out)
}

/// Split `a` with `N(a) = n l^h`, `gcd(n, l) = 1`, as `a = b c` with
/// `N(b) = n` and `N(c) = l^h`, both proper.
pub fn split_conductor(ideal: &OrderIdeal, l: u64) -> Result<(OrderIdeal, OrderIdeal)> {
    let ctx = ideal.ctx().clone();
    require_integral(ideal)?;
    if !ideal.is_proper() {
        return Err(Error::NotProper);
    }
    let lambda = ctx.conductor_factors().exponent_of(l);
    if lambda == 0 {
        return Err(Error::NotConductorPrime(l));
    }
    let larger = DiscContext::with_conductor(ctx.d_k(), ctx.conductor() / l.pow(lambda))?;
    let upstairs = decompose_order_ideal(&ideal.extend(&larger)?)?;
    // the part of the extension away from l
    let mut away = OrderIdeal::unit(larger.clone());
    for (prime, e) in &upstairs.split_ramified {
        if prime.norm_int() != Some(BigInt::from(l)) {
            away = away.mul(&prime.pow(*e)?)?;
        }
    }
    for &(q, k) in &upstairs.inert {
        if q != l {
            away = away.mul(&OrderIdeal::principal_integer(larger.clone(), q)?.pow(k)?)?;
        }
    }
    for (_, c) in &upstairs.conductor_parts {
        away = away.mul(c)?;
    }
    let contracted = away.contract(&ctx)?;
    if !contracted.prime_to_relative_conductor {
        return Err(Error::Internal(format!("{away} is not prime to {l}")));
    }
    let b = contracted.ideal;
    let c = divide_exact(ideal, &b)?;
    Ok((b, c))
}

/// Full decomposition of a proper integral ideal of any order.
pub fn decompose_order_ideal(ideal: &OrderIdeal) -> Result<IdealDecomposition> {
    require_integral(ideal)?;
    if !ideal.is_proper() {
        return Err(Error::NotProper);
    }
    let ctx = ideal.ctx().clone();
    let mut rest = ideal.clone();
    let mut parts = Vec::new();
    for l in ctx.conductor_factors().primes() {
        let (b, c) = split_conductor(&rest, l)?;
        parts.push((l, c));
        rest = b;
    }
    let mut out = decompose_coprime(&rest)?;
    out.conductor_parts = parts;
    Ok(out)
}
