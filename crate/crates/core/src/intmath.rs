// SPDX-License-Identifier: Apache-2.0

//! Integer number theory on machine words: factorization, primality,
//! Kronecker symbols, square roots modulo primes, cubic residuosity and
//! fundamental discriminants.
//!
//! Everything here works on `u64`/`i64` inputs; intermediate products are
//! carried in 128 bits so nothing wraps silently.

use crate::error::{Error, Result};

/// Trial division runs over all primes below this bound before falling back
/// to Pollard rho.
const TRIAL_DIVISION_BOUND: u64 = 1_000_000;
/// Number of distinct rho polynomials `x^2 + c` tried per cofactor.
const RHO_SEEDS: u64 = 64;
/// Iteration cap for a single rho polynomial.
const RHO_ITERATIONS: u64 = 1 << 22;

/// Prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Recompute the product of `prime^exponent`.
    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, &(p, e)| acc * (p as u128).pow(e))
    }

    fn from_primes(value: u64, mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        let mut factors: Vec<(u64, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        Factorization { value, factors }
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid: returns `(g, u, v)` with `u*a + v*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Floor of the square root.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// `a mod m` in `[0, m)` for signed `a`.
#[inline]
pub fn mod_floor(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho on `x^2 + c`; returns a proper divisor.
fn rho(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let (mut x, mut ys) = (0u64, 0u64);
    let mut g = 1u64;
    let mut spent = 0u64;
    const BLOCK: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BLOCK.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += BLOCK;
        }
        r *= 2;
        spent += r;
        if spent > RHO_ITERATIONS {
            return None;
        }
    }
    if g == n {
        // backtrack one step at a time
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_cofactor(n: u64, out: &mut Vec<u64>, original: u64) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime(n) {
        out.push(n);
        return Ok(());
    }
    let r = isqrt_u128(n as u128) as u64;
    if r * r == n {
        split_cofactor(r, out, original)?;
        return split_cofactor(r, out, original);
    }
    for c in 1..=RHO_SEEDS {
        if let Some(d) = rho(n, c) {
            split_cofactor(d, out, original)?;
            return split_cofactor(n / d, out, original);
        }
    }
    Err(Error::FactorizationIncomplete(original))
}

/// Factor `m >= 1` into primes.
pub fn factor(m: u64) -> Result<Factorization> {
    if m == 0 {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let mut primes = Vec::new();
    let mut n = m;
    while n.is_multiple_of(2) {
        primes.push(2);
        n /= 2;
    }
    let mut p = 3u64;
    while p < TRIAL_DIVISION_BOUND && p * p <= n {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
        p += 2;
    }
    if n > 1 {
        if (p as u128) * (p as u128) > n as u128 {
            primes.push(n);
        } else {
            split_cofactor(n, &mut primes, m)?;
        }
    }
    Ok(Factorization::from_primes(m, primes))
}

/// Jacobi symbol `(a/n)` for odd `n > 0`.
pub fn jacobi(a: u64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(d/n)` for `n >= 1`, multiplicative in `n`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    assert!(n >= 1, "kronecker symbol needs n >= 1");
    let mut n = n;
    let mut sign = 1;
    let twos = n.trailing_zeros();
    if twos > 0 {
        if d.rem_euclid(2) == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if (r == 3 || r == 5) && twos % 2 == 1 {
            sign = -1;
        }
        n >>= twos;
    }
    if n == 1 {
        return sign;
    }
    sign * jacobi(mod_floor(d as i128, n), n)
}

/// Smallest non-negative `r` with `r^2 = a (mod p)`, or `None` for a
/// non-residue. `p` must be prime.
pub fn sqrt_mod(a: i64, p: u64) -> Option<u64> {
    let a = mod_floor(a as i128, p);
    if p == 2 || a == 0 {
        return Some(a);
    }
    if jacobi(a, p) != 1 {
        return None;
    }
    // Tonelli-Shanks with the smallest non-residue.
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| jacobi(z, p) == -1).expect("odd prime has a non-residue");
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r.min(p - r))
}

/// Whether `a` is a cubic residue modulo the prime `p = 1 (mod 3)`.
pub fn is_cubic_residue(a: i64, p: u64) -> Result<bool> {
    if p % 3 != 1 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not a prime congruent to 1 mod 3")));
    }
    let a = mod_floor(a as i128, p);
    if a == 0 {
        return Err(Error::InvalidInput(format!("{p} divides the residue")));
    }
    Ok(pow_mod(a, (p - 1) / 3, p) == 1)
}

pub fn is_squarefree(n: u64) -> Result<bool> {
    Ok(factor(n)?.factors().iter().all(|&(_, e)| e == 1))
}

/// Whether `d` is the discriminant of the maximal order of `Q(sqrt d)`.
pub fn is_fundamental(d: i64) -> Result<bool> {
    if d >= 0 {
        return Ok(false);
    }
    let n = d.unsigned_abs();
    match d.rem_euclid(4) {
        1 => is_squarefree(n),
        0 => {
            let k = d / 4;
            Ok(matches!(k.rem_euclid(4), 2 | 3) && is_squarefree(k.unsigned_abs())?)
        }
        _ => Ok(false),
    }
}

/// Split a negative discriminant as `D = f^2 d_K`, returning `(d_K, f)`.
pub fn fundamental_discriminant(d: i64) -> Result<(i64, u64)> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::InvalidDiscriminant(d.to_string()));
    }
    let fac = factor(d.unsigned_abs())?;
    let mut square_root = 1u64;
    let mut core = 1u64;
    for &(p, e) in fac.factors() {
        square_root *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
    }
    let core = -(core as i64);
    if core.rem_euclid(4) == 1 {
        Ok((core, square_root))
    } else {
        Ok((4 * core, square_root / 2))
    }
}

/// All primes `<= n`, by sieve.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_examples() {
        assert!(factor(1).unwrap().factors().is_empty());
        assert_eq!(factor(108).unwrap().factors(), &[(2, 2), (3, 3)]);
        assert_eq!(factor(63).unwrap().factors(), &[(3, 2), (7, 1)]);
        assert!(factor(0).is_err());
    }

    #[test]
    fn factor_large_semiprimes() {
        let p = 1_000_000_007u64;
        let q = 998_244_353u64;
        assert_eq!(factor(p * q).unwrap().factors(), &[(q, 1), (p, 1)]);
        let big = 4_294_967_291u64; // largest prime below 2^32
        assert_eq!(factor(big * big).unwrap().factors(), &[(big, 2)]);
        assert_eq!(factor(i64::MAX as u64).unwrap().product(), i64::MAX as u128);
        assert_eq!(factor(u64::MAX).unwrap().product(), u64::MAX as u128);
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-4, 7), -1);
        assert_eq!(kronecker(-20, 3), 1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(5, 1), 1);
    }

    #[test]
    fn sqrt_mod_examples() {
        assert_eq!(sqrt_mod(1, 5), Some(1));
        assert_eq!(sqrt_mod(12, 13), Some(5));
        assert_eq!(sqrt_mod(3, 7), None);
        assert_eq!(sqrt_mod(-20, 29), Some(3));
        assert_eq!(sqrt_mod(0, 11), Some(0));
    }

    #[test]
    fn cubic_residue_examples() {
        assert!(is_cubic_residue(1, 7).unwrap());
        assert!(!is_cubic_residue(2, 7).unwrap());
        assert!(is_cubic_residue(2, 31).unwrap());
        assert!(is_cubic_residue(2, 5).is_err());
        assert!(is_cubic_residue(14, 7).is_err());
    }

    #[test]
    fn fundamental_discriminant_examples() {
        assert_eq!(fundamental_discriminant(-108).unwrap(), (-3, 6));
        assert_eq!(fundamental_discriminant(-32).unwrap(), (-8, 2));
        assert_eq!(fundamental_discriminant(-4).unwrap(), (-4, 1));
        assert_eq!(fundamental_discriminant(-64).unwrap(), (-4, 4));
        assert_eq!(fundamental_discriminant(-20).unwrap(), (-20, 1));
        assert_eq!(fundamental_discriminant(-99).unwrap(), (-11, 3));
        assert!(fundamental_discriminant(-6).is_err());
        assert!(fundamental_discriminant(5).is_err());
    }

    #[test]
    fn ext_gcd_signs() {
        assert_eq!(ext_gcd(0, 1), (1, 0, 1));
        let (g, u, v) = ext_gcd(-6, 4);
        assert_eq!(g, 2);
        assert_eq!(u * -6 + v * 4, 2);
    }
}
