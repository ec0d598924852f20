//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact Bernoulli number `B_k` as a reduced fraction.
pub fn bernoulli(k: usize) -> (BigInt, BigInt) {
    // Akiyama-Tanigawa
    let mut a: Vec<(BigInt, BigInt)> = Vec::new();
    let mut out = (BigInt::zero(), BigInt::one());
    for m in 0..=k {
        a.push((BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let (n1, d1) = &a[j - 1];
            let (n2, d2) = &a[j];
            let num = (n1 * d2 - n2 * d1) * BigInt::from(j);
            let den = d1 * d2;
            a[j - 1] = reduce(num, den);
        }
        out = a[0].clone();
    }
    // the recurrence yields B_1 = +1/2; only even k is used
    out
}

fn reduce(n: BigInt, d: BigInt) -> (BigInt, BigInt) {
    let g = num_integer::Integer::gcd(&n, &d);
    let (mut n, mut d) = if g.is_zero() {
        (n, d)
    } else {
        (n / &g, d / &g)
    };
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    (n, d)
}

fn to_mod(x: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((x % &m) + &m) % &m;
    r.try_into().unwrap()
}

fn pow_mod(b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % p) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc as u64
}

/// `-2k / B_k mod p`, or `None` when `p` divides the denominator of that
/// constant.
pub fn eisenstein_constant_mod(k: usize, p: u64) -> Option<u64> {
    let (n, d) = bernoulli(k);
    // -2k/B_k = -2k d / n
    let num = BigInt::from(-2 * k as i64) * d;
    let den_mod = to_mod(&n, p);
    if den_mod == 0 {
        return None;
    }
    Some((to_mod(&num, p) as u128 * pow_mod(den_mod, p - 2, p) as u128 % p as u128) as u64)
}

/// `sigma_m(n)` by summing over all divisors.
pub fn naive_sigma_mod(m: u32, n: u64, p: u64) -> u64 {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .fold(0u64, |acc, d| {
            ((acc as u128 + pow_mod(d, m as u64, p) as u128) % p as u128) as u64
        })
}

/// Coefficients of `E_k mod p` from scratch.
pub fn eisenstein_mod(k: usize, p: u64, len: usize) -> Vec<u64> {
    let c = eisenstein_constant_mod(k, p).expect("p-integral constant");
    (0..len as u64)
        .map(|n| match n {
            0 => 1,
            _ => (c as u128 * naive_sigma_mod(k as u32 - 1, n, p) as u128 % p as u128) as u64,
        })
        .collect()
}

/// Schoolbook product of two coefficient vectors mod `p`.
pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().min(b.len());
    let mut out = vec![0u64; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    out
}

pub fn pow(a: &[u64], e: u32, p: u64) -> Vec<u64> {
    let mut acc = vec![0u64; a.len()];
    if !acc.is_empty() {
        acc[0] = 1;
    }
    for _ in 0..e {
        acc = mul(&acc, a, p);
    }
    acc
}

/// The `q` and `q^2` coefficients of `E2^r E4^s E6^t` over the integers,
/// from the first three coefficients of each factor.
pub fn quotient_low_coefficients(r: i64, s: i64, t: i64) -> (i128, i128) {
    // (1 + a q + b q^2)^e = 1 + e a q + (e b + e(e-1)/2 a^2) q^2
    let factor = |a: i128, b: i128, e: i128| (e * a, e * b + e * (e - 1) / 2 * a * a);
    let parts = [
        factor(-24, -72, r as i128),
        factor(240, 2160, s as i128),
        factor(-504, -16632, t as i128),
    ];
    let (mut c1, mut c2) = (0i128, 0i128);
    for (x1, x2) in parts {
        c2 += x2 + c1 * x1;
        c1 += x1;
    }
    (c1, c2)
}

/// Primes in `[lo, hi]` by trial division.
pub fn primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi)
        .filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

/// Euler's criterion.
pub fn legendre(c: u64, p: u64) -> i8 {
    match pow_mod(c % p, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}
