//! Elementary number theory on `BigInt`: trial-division factorization,
//! valuations and modular inverses. Desk-scale inputs only.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn is_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= *n {
        if n.is_multiple_of(&d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization of `|n|` as ascending `(p, e)` pairs. Empty for `0`
/// and `±1`.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut e = 0;
        while n.is_multiple_of(&d) {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// `v_p(n)`; `None` for `n = 0`.
pub fn valuation(n: &BigInt, p: &BigInt) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let mut n = n.abs();
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    Some(e)
}

/// If `n = p^e` for a prime `p`, returns `(p, e)` (with `e ≥ 1`).
pub fn prime_power(n: &BigInt) -> Option<(BigInt, u32)> {
    match factorize(n).as_slice() {
        [(p, e)] => Some((p.clone(), *e)),
        _ => None,
    }
}

pub fn pow(base: &BigInt, exp: u32) -> BigInt {
    num_traits::pow(base.clone(), exp as usize)
}

/// Inverse of `a` modulo `m`, in `[0, m)`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}
