//! Integer helpers: primality, trial-division factorization, modular
//! exponentiation and linear congruences.
//!
//! Every exponent that shows up in the tower (q^l + 1, q^{2l} - 1, ...) fits in
//! a `u64` once the field order does, so intermediate products are done in
//! `u128`.

use alloc::vec::Vec;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while n > 1 && d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Merge two factorizations (of coprime or non-coprime numbers) into the
/// factorization of their product.
pub fn merge_factors(a: &[(u64, u32)], b: &[(u64, u32)]) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = a.to_vec();
    for &(p, e) in b {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some(slot) => slot.1 += e,
            None => out.push((p, e)),
        }
    }
    out.sort_unstable();
    out
}

pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

pub fn pow_mod(base: u128, mut exp: u128, modulus: u128) -> u128 {
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u128;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, modulus);
        }
        b = mul_mod(b, b, modulus);
        exp >>= 1;
    }
    result
}

/// `a * b mod m` without overflow for any `m < 2^127`.
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    let (a, b) = (a % m, b % m);
    if a == 0 || b == 0 {
        return 0;
    }
    if a.leading_zeros() + b.leading_zeros() >= 128 {
        return (a * b) % m;
    }
    // Double-and-add; only reached for moduli above 2^64.
    let mut result = 0u128;
    let mut x = a;
    let mut y = b;
    while y > 0 {
        if y & 1 == 1 {
            result = (result + x) % m;
        }
        x = (x << 1) % m;
        y >>= 1;
    }
    result
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u128, m: u128) -> Option<u128> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u128)
}

/// Smallest `s >= 0` with `a * s ≡ b (mod m)`.
pub fn solve_linear_congruence(a: u128, b: u128, m: u128) -> Option<u128> {
    let a = a % m;
    let b = b % m;
    let g = gcd_u128(a, m);
    if !b.is_multiple_of(g) {
        return None;
    }
    let m2 = m / g;
    let a2 = (a / g) % m2;
    let b2 = (b / g) % m2;
    let inv = inv_mod(a2, m2)?;
    Some(mul_mod(b2, inv, m2))
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Splits `q` into `(p, h)` with `q = p^h`, `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = factor(q);
    match f.as_slice() {
        [(p, h)] => Some((*p, *h)),
        _ => None,
    }
}
