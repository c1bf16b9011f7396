//! Exact integer and rational primitives: prime-power factorization, p-adic
//! valuations, big rationals, and the binomial-coefficient congruence that
//! underlies every period certificate.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational numbers. `num_rational` reduces on construction and keeps
/// the denominator positive, so equality is structural.
pub type Rational = num_rational::BigRational;

/// Convenience constructor for small rationals.
pub fn rational(numerator: i64, denominator: i64) -> Rational {
    Rational::new(BigInt::from(numerator), BigInt::from(denominator))
}

/// A p-adic valuation: the exponent of `p` in an integer, with `Infinite`
/// reserved for the integer 0 (which every power of `p` divides).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// Finite value, or `None` for `Infinite`.
    pub fn finite(&self) -> Option<u64> {
        match self {
            Valuation::Finite(e) => Some(*e),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Valuation::*;
        match (self, other) {
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

/// Largest `e` with `p^e | x`; `Infinite` for `x = 0`. Sign-independent.
pub fn val(x: &BigInt, p: u64) -> Valuation {
    debug_assert!(is_prime(p), "val requires a prime modulus");
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut e = 0u64;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&x, &p);
        if !r.is_zero() {
            return Valuation::Finite(e);
        }
        x = q;
        e += 1;
    }
}

/// `val` specialised to machine words; the hot path of the enumeration.
pub fn val_i64(x: i64, p: u64) -> Valuation {
    if x == 0 {
        return Valuation::Infinite;
    }
    let mut x = x.unsigned_abs();
    if p == 2 {
        return Valuation::Finite(x.trailing_zeros() as u64);
    }
    let mut e = 0u64;
    while x.is_multiple_of(p) {
        x /= p;
        e += 1;
    }
    Valuation::Finite(e)
}

/// `m` as an ordered list of `(prime, exponent)` pairs. The number of factors
/// is the arithmetic function omega(m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePowerFactorization {
    m: u64,
    factors: Vec<(u64, u32)>,
}

impl PrimePowerFactorization {
    pub fn m(&self) -> u64 {
        self.m
    }

    /// The `(p, s)` pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// The prime powers q_i = p_i^{s_i}.
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, s)| p.pow(s))
    }
}

/// Factor `m >= 1` by trial division. `m = 1` yields the empty factorization.
///
/// Inputs here are small multiplicities of representation degrees, not
/// cryptographic moduli, so trial division up to sqrt(m) is the right tool.
pub fn factorize(m: u64) -> Result<PrimePowerFactorization> {
    if m == 0 {
        return Err(Error::InvalidInput("cannot factorize m = 0".into()));
    }
    let mut rest = m;
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            let mut s = 0u32;
            while rest.is_multiple_of(d) {
                rest /= d;
                s += 1;
            }
            factors.push((d, s));
        }
        d += 1;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(PrimePowerFactorization { m, factors })
}

/// Deterministic trial-division primality test for the small moduli used here.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Binomial coefficient as the polynomial n(n-1)...(n-k+1)/k!, valid for any
/// integer upper argument (including negatives).
pub fn binomial(n: &BigInt, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    let (q, r) = num_integer::Integer::div_rem(&num, &den);
    debug_assert!(r.is_zero(), "binomial must be an integer");
    q
}

/// Whether C(n + p^{s+r}, k) = C(n, k) mod p^r, computed with exact big
/// integers. Under the precondition p^s <= k < p^{s+1} this always holds;
/// the function exists as an executable oracle for that congruence.
pub fn fray_congruence_holds(n: i64, k: u64, p: u64, r: u32, s: u32) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if k == 0 || r == 0 {
        return Err(Error::InvalidInput("k and r must be positive".into()));
    }
    let ps = p
        .checked_pow(s)
        .ok_or_else(|| Error::InvalidInput("p^s overflows".into()))?;
    let ps1 = ps
        .checked_mul(p)
        .ok_or_else(|| Error::InvalidInput("p^{s+1} overflows".into()))?;
    if !(ps <= k && k < ps1) {
        return Err(Error::InvalidInput(format!(
            "precondition p^s <= k < p^(s+1) violated: p={p}, s={s}, k={k}"
        )));
    }
    let shift = BigInt::from(p).pow(s + r);
    let modulus = BigInt::from(p).pow(r);
    let a = binomial(&(BigInt::from(n) + shift), k);
    let b = binomial(&BigInt::from(n), k);
    Ok(num_integer::Integer::mod_floor(&(a - b), &modulus).is_zero())
}
