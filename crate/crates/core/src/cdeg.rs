//! Cyclicity degrees: the closed form for modular groups, multiplicativity
//! over coprime direct products, and a greedy approximator that realizes any
//! target degree in (0, 1] by a finite product over distinct odd primes.
//!
//! The greedy scan is exact: every include/skip/stop decision is the exact
//! rational comparison from the contract. Decisions are settled through a
//! 96-fractional-bit fixed-point interval on the running product and fall
//! back to exact big-rational comparison whenever the interval straddles the
//! decision point (which is also how exact ties are honored). The returned
//! product is evaluated exactly by prime-factorization cancellation, so the
//! numerator and denominator come out coprime without a large gcd.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;

pub const DEFAULT_PRIME_LIMIT: u64 = 10_000_000;
pub const MAX_PRIME_LIMIT: u64 = 1_000_000_000;

pub fn default_epsilon() -> BigRational {
    BigRational::new(1.into(), 1000.into())
}

pub fn min_epsilon() -> BigRational {
    BigRational::new(1.into(), BigUint::from(10u32).pow(9).into())
}

#[derive(Debug, Error)]
pub enum CdegError {
    #[error("{0} is not an odd prime")]
    NotAnOddPrime(u64),
    #[error("repeated prime {0}: multiplicativity needs coprime orders")]
    RepeatedPrime(u64),
    #[error("modular group needs n >= 3, got {0}")]
    BadModularDegree(u32),
}

#[derive(Debug, Error)]
pub enum ApproxError {
    #[error("target 0 is unreachable: finite products stay positive")]
    ZeroTarget,
    #[error("target must lie in [0, 1]")]
    TargetOutOfRange,
    #[error("epsilon must lie in [10^-9, 1/2]")]
    EpsilonOutOfRange,
    #[error("prime limit must lie in [3, {MAX_PRIME_LIMIT}]")]
    BadPrimeLimit,
    #[error("prime limit {limit} exhausted before reaching tolerance; best gap {gap}")]
    LimitExhausted {
        limit: u64,
        gap: String,
        best: Box<PrimeSelection>,
    },
}

/// cdeg(M_{p^n}) = ((n-1)p + 2) / ((n-1)p + n + 1) for odd p, n >= 3.
pub fn cdeg_modular(p: u64, n: u32) -> Result<BigRational, CdegError> {
    if p == 2 || !arith::is_prime(p) {
        return Err(CdegError::NotAnOddPrime(p));
    }
    if n < 3 {
        return Err(CdegError::BadModularDegree(n));
    }
    let base = BigUint::from(n as u64 - 1) * BigUint::from(p);
    let num = &base + BigUint::from(2u32);
    let den = base + BigUint::from(n as u64 + 1);
    Ok(BigRational::new(num.into(), den.into()))
}

/// cdeg of the direct product of M_{p^3} over the given primes:
/// ∏ (p+1)/(p+2). Requires the primes to be odd and pairwise distinct, and
/// returns 1 for the empty product.
pub fn cdeg_product(primes: &[u64]) -> Result<BigRational, CdegError> {
    validate_prime_set(primes)?;
    Ok(product_over(primes))
}

fn validate_prime_set(primes: &[u64]) -> Result<(), CdegError> {
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(CdegError::RepeatedPrime(w[0]));
        }
    }
    if primes.len() >= 1024 {
        let max = *sorted.last().unwrap();
        let sieve = arith::PrimeSieve::new(max);
        for &p in primes {
            if p == 2 || !sieve.is_prime(p) {
                return Err(CdegError::NotAnOddPrime(p));
            }
        }
    } else {
        for &p in primes {
            if p == 2 || !arith::is_prime(p) {
                return Err(CdegError::NotAnOddPrime(p));
            }
        }
    }
    Ok(())
}

/// Exact ∏ (p+1)/(p+2) through a signed factor map, so the result is built
/// already in lowest terms.
fn product_over(primes: &[u64]) -> BigRational {
    factored_product(primes).0
}

fn factored_product(primes: &[u64]) -> (BigRational, BTreeMap<u64, i64>) {
    if primes.is_empty() {
        return (BigRational::one(), BTreeMap::new());
    }
    let max = primes.iter().copied().max().unwrap() + 2;
    let small = arith::primes_up_to(arith::isqrt(max) + 1);
    let mut map = BTreeMap::new();
    for &p in primes {
        arith::accumulate_factors(p + 1, &small, 1, &mut map);
        arith::accumulate_factors(p + 2, &small, -1, &mut map);
    }
    (arith::factor_map_value(&map), map)
}

/// All odd primes `<= limit`, ascending (empty below 3).
pub fn odd_primes(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    arith::PrimeSieve::new(limit).primes_from(3).collect()
}

/// Result of the greedy approximation.
#[derive(Debug, Clone)]
pub struct PrimeSelection {
    /// Chosen odd primes, strictly increasing.
    pub primes: Vec<u64>,
    /// ∏ (p+1)/(p+2) over the chosen primes, exact and reduced.
    pub achieved: BigRational,
    pub target: BigRational,
    pub epsilon: BigRational,
    /// achieved − target, exact; within epsilon on success.
    pub gap: BigRational,
    /// Largest prime examined by the scan, if any.
    pub scanned_up_to: Option<u64>,
}

impl PrimeSelection {
    /// Canonical JSON: fractions as "num/den" strings, plus a 50-digit
    /// decimal rendering of the achieved product.
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert("target".into(), arith::fraction_string(&self.target).into());
        obj.insert("epsilon".into(), arith::fraction_string(&self.epsilon).into());
        obj.insert("primes".into(), self.primes.clone().into());
        obj.insert("achieved".into(), arith::fraction_string(&self.achieved).into());
        obj.insert("achieved_decimal".into(), arith::decimal_string(&self.achieved, 50).into());
        obj.insert("gap".into(), arith::fraction_string(&self.gap).into());
        serde_json::Value::Object(obj)
    }
}

/// Greedily approximates `target` from above: scanning odd primes in
/// ascending order, a prime q joins the selection exactly when the running
/// product stays `>= target` after the factor (q+1)/(q+2); the scan stops
/// once product − target <= epsilon. After any skipped prime q the gap is
/// already below target/(q+1), which is what drives it to zero.
pub fn approximate_cdeg(
    target: &BigRational,
    epsilon: &BigRational,
    prime_limit: u64,
) -> Result<PrimeSelection, ApproxError> {
    approximate_cdeg_observed(target, epsilon, prime_limit, |_, _| {})
}

/// Same scan with a callback invoked at every skip event with the skipped
/// prime and the selection so far; tests use it to assert the gap bound.
pub(crate) fn approximate_cdeg_observed(
    target: &BigRational,
    epsilon: &BigRational,
    prime_limit: u64,
    mut on_skip: impl FnMut(u64, &[u64]),
) -> Result<PrimeSelection, ApproxError> {
    if target.is_negative() || target > &BigRational::one() {
        return Err(ApproxError::TargetOutOfRange);
    }
    if target.is_zero() {
        return Err(ApproxError::ZeroTarget);
    }
    if epsilon < &min_epsilon() || epsilon > &BigRational::new(1.into(), 2.into()) {
        return Err(ApproxError::EpsilonOutOfRange);
    }
    if !(3..=MAX_PRIME_LIMIT).contains(&prime_limit) {
        return Err(ApproxError::BadPrimeLimit);
    }

    let stop_at = target + epsilon;
    let include_cut = Fixed::of(target);
    let stop_cut = Fixed::of(&stop_at);

    // Interval bounds on 2^96 · P; P starts at the exactly representable 1.
    let mut lo: u128 = 1u128 << FRAC_BITS;
    let mut hi: u128 = 1u128 << FRAC_BITS;
    let mut chosen: Vec<u64> = Vec::new();
    let mut scanned: Option<u64> = None;
    let mut done = false;

    let sieve = arith::PrimeSieve::new(prime_limit);
    for q in sieve.primes_from(3) {
        if stop_cut.value_at_most(lo, hi, || exact_cmp(&chosen, None, &stop_at).is_le()) {
            done = true;
            break;
        }
        scanned = Some(q);
        let (cl, ch) = step_bounds(lo, hi, q);
        let include =
            include_cut.value_at_least(cl, ch, || exact_cmp(&chosen, Some(q), target).is_ge());
        if include {
            chosen.push(q);
            lo = cl;
            hi = ch;
        } else {
            on_skip(q, &chosen);
        }
    }
    if !done {
        done = stop_cut.value_at_most(lo, hi, || exact_cmp(&chosen, None, &stop_at).is_le());
    }

    let selection = finish_selection(chosen, target, epsilon, scanned);
    if done {
        debug_assert!(selection.gap >= BigRational::zero() && selection.gap <= *epsilon);
        Ok(selection)
    } else {
        Err(ApproxError::LimitExhausted {
            limit: prime_limit,
            gap: arith::fraction_string(&selection.gap),
            best: Box::new(selection),
        })
    }
}

fn finish_selection(
    chosen: Vec<u64>,
    target: &BigRational,
    epsilon: &BigRational,
    scanned: Option<u64>,
) -> PrimeSelection {
    let (achieved, factor_map) = factored_product(&chosen);
    let den_factors: BTreeMap<u64, i64> =
        factor_map.into_iter().filter(|&(_, e)| e < 0).collect();
    let gap = arith::sub_with_factored_den(&achieved, &den_factors, target);
    PrimeSelection {
        primes: chosen,
        achieved,
        target: target.clone(),
        epsilon: epsilon.clone(),
        gap,
        scanned_up_to: scanned,
    }
}

const FRAC_BITS: u32 = 96;

/// A comparison cutoff in 2^96 fixed point: the exact scaled value is either
/// the integer `floor` (when `exact`) or lies strictly inside
/// (floor, floor + 1).
#[derive(Clone, Copy)]
struct Fixed {
    floor: u128,
    exact: bool,
}

impl Fixed {
    fn of(r: &BigRational) -> Fixed {
        let scaled = r.numer().magnitude() << FRAC_BITS;
        let (q, rem) = num_integer::Integer::div_rem(&scaled, r.denom().magnitude());
        Fixed { floor: q.to_u128().expect("cutoff fits 2^98"), exact: rem.is_zero() }
    }

    /// Decides `value <= cutoff` for a value known to lie in `[lo, hi]`
    /// (2^96-scaled); calls the exact comparator when the interval straddles.
    fn value_at_most(&self, lo: u128, hi: u128, exact: impl FnOnce() -> bool) -> bool {
        if hi <= self.floor {
            return true;
        }
        if lo > self.floor {
            return false;
        }
        exact()
    }

    /// Decides `value >= cutoff` analogously.
    fn value_at_least(&self, lo: u128, hi: u128, exact: impl FnOnce() -> bool) -> bool {
        if self.exact {
            if lo >= self.floor {
                return true;
            }
            if hi < self.floor {
                return false;
            }
        } else {
            if lo > self.floor {
                return true;
            }
            if hi <= self.floor {
                return false;
            }
        }
        exact()
    }
}

/// Directed-rounding multiplication of the bounds by (q+1)/(q+2).
fn step_bounds(lo: u128, hi: u128, q: u64) -> (u128, u128) {
    let num = (q + 1) as u128;
    let den = (q + 2) as u128;
    (lo * num / den, (hi * num).div_ceil(den))
}

/// Exact sign of ∏ factors − rhs, where the product runs over (p+1)/(p+2)
/// for the chosen primes plus an optional extra prime. Balanced product
/// trees keep this affordable even for very long selections.
fn exact_cmp(chosen: &[u64], extra: Option<u64>, rhs: &BigRational) -> std::cmp::Ordering {
    let mut num: Vec<BigUint> = chosen.iter().map(|&p| BigUint::from(p + 1)).collect();
    let mut den: Vec<BigUint> = chosen.iter().map(|&p| BigUint::from(p + 2)).collect();
    if let Some(q) = extra {
        num.push(BigUint::from(q + 1));
        den.push(BigUint::from(q + 2));
    }
    num.push(rhs.denom().magnitude().clone());
    den.push(rhs.numer().magnitude().clone());
    arith::product_tree(&num).cmp(&arith::product_tree(&den))
}
