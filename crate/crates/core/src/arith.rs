//! Shared integer and rational helpers: primality, sieving, factorization,
//! balanced big-integer products, and exact-rational parsing/rendering.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Deterministic Miller-Rabin, valid for all `u64` inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r > 0 && r.checked_mul(r).is_none_or(|s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// Bit-packed Eratosthenes sieve over `0..=limit`; one bit per integer, so a
/// scan to 10^7 costs about a megabyte.
pub struct PrimeSieve {
    limit: u64,
    composite: Vec<u64>,
}

impl PrimeSieve {
    pub fn new(limit: u64) -> Self {
        let words = (limit / 64 + 1) as usize;
        let mut composite = vec![0u64; words];
        let set = |bits: &mut Vec<u64>, i: u64| bits[(i / 64) as usize] |= 1 << (i % 64);
        set(&mut composite, 0);
        if limit >= 1 {
            set(&mut composite, 1);
        }
        let mut i = 2u64;
        while i * i <= limit {
            if composite[(i / 64) as usize] & (1 << (i % 64)) == 0 {
                let mut j = i * i;
                while j <= limit {
                    set(&mut composite, j);
                    j += i;
                }
            }
            i += 1;
        }
        PrimeSieve { limit, composite }
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n <= self.limit && self.composite[(n / 64) as usize] & (1 << (n % 64)) == 0
    }

    /// Primes `>= start`, ascending.
    pub fn primes_from(&self, start: u64) -> impl Iterator<Item = u64> + '_ {
        (start..=self.limit).filter(move |&n| self.is_prime(n))
    }
}

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Prime factorization of `v` by trial division against `small_primes`,
/// which must cover every prime `<= sqrt(v)`. Exponents are accumulated
/// into `out` scaled by `sign` (so numerator/denominator contributions
/// cancel in a single map).
pub fn accumulate_factors(mut v: u64, small_primes: &[u64], sign: i64, out: &mut BTreeMap<u64, i64>) {
    for &p in small_primes {
        if p * p > v {
            break;
        }
        while v.is_multiple_of(p) {
            v /= p;
            *out.entry(p).or_insert(0) += sign;
        }
    }
    if v > 1 {
        *out.entry(v).or_insert(0) += sign;
    }
}

/// Balanced product of a slice of big integers (empty product is 1).
pub fn product_tree(factors: &[BigUint]) -> BigUint {
    match factors.len() {
        0 => BigUint::one(),
        1 => factors[0].clone(),
        n => {
            let (a, b) = factors.split_at(n / 2);
            product_tree(a) * product_tree(b)
        }
    }
}

/// Exact value of a signed factor map as a reduced rational. The map sends a
/// prime to its exponent; positive exponents form the numerator, negative
/// ones the denominator, so the result is coprime by construction and no
/// large gcd is ever taken.
pub fn factor_map_value(factors: &BTreeMap<u64, i64>) -> BigRational {
    let mut num = Vec::new();
    let mut den = Vec::new();
    for (&p, &e) in factors {
        match e.cmp(&0) {
            std::cmp::Ordering::Greater => num.push(BigUint::from(p).pow(e as u32)),
            std::cmp::Ordering::Less => den.push(BigUint::from(p).pow((-e) as u32)),
            std::cmp::Ordering::Equal => {}
        }
    }
    BigRational::new_raw(
        BigInt::from(product_tree(&num)),
        BigInt::from(product_tree(&den)),
    )
}

/// Exact `a - b` in lowest terms for a reduced `a` whose denominator has the
/// given prime factorization. Avoids a full gcd on huge operands: any common
/// factor of the difference and the combined denominator is supported on the
/// primes of `b`'s (small) denominator.
pub fn sub_with_factored_den(
    a: &BigRational,
    a_den_factors: &BTreeMap<u64, i64>,
    b: &BigRational,
) -> BigRational {
    let num = a.numer() * b.denom() - b.numer() * a.denom();
    if num.is_zero() {
        return BigRational::zero();
    }
    let den = a.denom() * b.denom();
    // Reduction modulus: the part of `den` supported on primes of b.denom().
    let mut reducer = b.denom().magnitude().clone();
    for (&p, &e) in a_den_factors {
        debug_assert!(e <= 0);
        if e < 0 && (b.denom().magnitude() % BigUint::from(p)).is_zero() {
            reducer *= BigUint::from(p).pow((-e) as u32);
        }
    }
    // Reduce mod the small modulus first so the gcd never runs on the
    // full-size numerator.
    let g: BigUint = (num.magnitude() % &reducer).gcd(&reducer);
    let g = BigInt::from(g);
    BigRational::new_raw(num / &g, den / g)
}

/// Parses an exact rational from `a/b`, an integer, or a decimal literal with
/// optional exponent (`0.25`, `1e-3`, `2.5e-2`). Decimals convert exactly.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational literal".into());
    }
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().map_err(|_| format!("bad numerator {n:?}"))?;
        let den: BigInt = d.trim().parse().map_err(|_| format!("bad denominator {d:?}"))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e.parse().map_err(|_| format!("bad exponent {e:?}"))?;
            (m, exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("no digits in {s:?}"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("bad decimal literal {s:?}"));
    }
    let joined = format!("{int_part}{frac_part}");
    let mut num: BigInt = if joined.is_empty() { BigInt::zero() } else { joined.parse().unwrap() };
    if negative {
        num = -num;
    }
    let scale = frac_part.len() as i64 - exp;
    let ten = BigInt::from(10u32);
    Ok(if scale >= 0 {
        BigRational::new(num, ten.pow(scale as u32))
    } else {
        BigRational::new(num * ten.pow((-scale) as u32), BigInt::one())
    })
}

/// `num/den` rendering, reduced form assumed.
pub fn fraction_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal expansion truncated toward zero to `digits` fractional places.
pub fn decimal_string(r: &BigRational, digits: usize) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let int_part = num / den;
    let rem = num - &int_part * den;
    let scaled = rem * BigUint::from(10u32).pow(digits as u32) / den;
    let mut frac = scaled.to_string();
    while frac.len() < digits {
        frac.insert(0, '0');
    }
    format!("{sign}{int_part}.{frac}")
}
