//! Integer-valued polynomials kept in factored form: a product of integer
//! affine-linear forms over a positive integer denominator.
//!
//! Every dimension polynomial handled by this crate arrives naturally in this
//! shape (the Weyl formula is such a product), so the polynomials are never
//! expanded. The per-variable degree is read off the factors, the period
//! modulo a prime power comes from a closed formula, and divisibility tests
//! reduce to summing valuations of the individual forms.

use std::hash::{Hash, Hasher};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::{val, val_i64, PrimePowerFactorization, Valuation};

/// An integer affine-linear form `x -> coeffs . x + constant`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub coeffs: Vec<i64>,
    pub constant: i64,
}

impl LinearForm {
    pub fn new(coeffs: Vec<i64>, constant: i64) -> Self {
        LinearForm { coeffs, constant }
    }

    /// Evaluate with checked machine arithmetic; `None` on overflow.
    pub fn eval_checked(&self, x: &[i64]) -> Option<i64> {
        debug_assert_eq!(self.coeffs.len(), x.len());
        let mut acc = self.constant;
        for (&c, &xi) in self.coeffs.iter().zip(x) {
            acc = acc.checked_add(c.checked_mul(xi)?)?;
        }
        Some(acc)
    }

    pub fn eval_big(&self, x: &[i64]) -> BigInt {
        let mut acc = BigInt::from(self.constant);
        for (&c, &xi) in self.coeffs.iter().zip(x) {
            acc += BigInt::from(c) * BigInt::from(xi);
        }
        acc
    }
}

/// A polynomial `(product of linear forms) / denominator` that takes integer
/// values on all of Z^rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredPolynomial {
    rank: usize,
    forms: Vec<LinearForm>,
    denominator: BigUint,
}

impl FactoredPolynomial {
    pub fn new(rank: usize, forms: Vec<LinearForm>, denominator: BigUint) -> Self {
        assert!(!denominator.is_zero(), "denominator must be positive");
        for f in &forms {
            assert_eq!(f.coeffs.len(), rank, "form arity must match rank");
        }
        FactoredPolynomial {
            rank,
            forms,
            denominator,
        }
    }

    /// The constant polynomial 1 on Z^rank (empty product).
    pub fn one(rank: usize) -> Self {
        FactoredPolynomial::new(rank, Vec::new(), BigUint::one())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    /// Max over variables of the number of forms in which that variable
    /// appears. For a factored polynomial this is exactly max_i deg_{x_i}.
    pub fn deg_bullet(&self) -> usize {
        (0..self.rank)
            .map(|i| self.forms.iter().filter(|f| f.coeffs[i] != 0).count())
            .max()
            .unwrap_or(0)
    }

    /// Exact value at `x`. Fails with `IntegralityViolation` if the product
    /// of the forms is not divisible by the denominator, which signals a
    /// malformed polynomial rather than a property of `x`.
    pub fn eval_exact(&self, x: &[i64]) -> Result<BigInt> {
        assert_eq!(x.len(), self.rank);
        let mut prod = BigInt::one();
        for f in &self.forms {
            prod *= f.eval_big(x);
        }
        let den = BigInt::from(self.denominator.clone());
        let (q, r) = num_integer::Integer::div_rem(&prod, &den);
        if !r.is_zero() {
            return Err(Error::IntegralityViolation {
                point: x.to_vec(),
                numerator: prod.to_string(),
                denominator: self.denominator.to_string(),
            });
        }
        Ok(q)
    }

    /// p-adic valuation of the value at `x`, computed without forming the
    /// big product: sum the per-form valuations and subtract the
    /// denominator's. `Infinite` as soon as one form vanishes.
    pub fn eval_valuation(&self, x: &[i64], p: u64) -> Valuation {
        assert_eq!(x.len(), self.rank);
        let mut total = 0u64;
        for f in &self.forms {
            let v = match f.eval_checked(x) {
                Some(v) => val_i64(v, p),
                None => val(&f.eval_big(x), p),
            };
            match v {
                Valuation::Infinite => return Valuation::Infinite,
                Valuation::Finite(e) => total += e,
            }
        }
        let vden = match val(&BigInt::from(self.denominator.clone()), p) {
            Valuation::Finite(e) => e,
            Valuation::Infinite => unreachable!("denominator is positive"),
        };
        debug_assert!(total >= vden, "integer-valuedness fixes val >= val(den)");
        Valuation::Finite(total - vden)
    }

    /// Whether `m` divides the exact value at `x`.
    pub fn value_divisible_by(&self, x: &[i64], m: u64) -> Result<bool> {
        let v = self.eval_exact(x)?;
        Ok(num_integer::Integer::mod_floor(&v, &BigInt::from(m)).is_zero())
    }

    /// Pull back through the integer affine map `x -> cols * x + offset`,
    /// where `cols` are the images of the source basis vectors expressed in
    /// this polynomial's coordinates. Composition with an integer affine map
    /// preserves integer-valuedness and the denominator.
    pub fn pullback(&self, cols: &[Vec<i64>], offset: &[i64]) -> FactoredPolynomial {
        assert_eq!(offset.len(), self.rank);
        for c in cols {
            assert_eq!(c.len(), self.rank);
        }
        let forms = self
            .forms
            .iter()
            .map(|f| {
                let coeffs = cols
                    .iter()
                    .map(|col| f.coeffs.iter().zip(col).map(|(&a, &b)| a * b).sum())
                    .collect();
                let constant =
                    f.constant + f.coeffs.iter().zip(offset).map(|(&a, &b)| a * b).sum::<i64>();
                LinearForm::new(coeffs, constant)
            })
            .collect();
        FactoredPolynomial::new(cols.len(), forms, self.denominator.clone())
    }

    /// Structural fingerprint tying a `PeriodCertificate` to the polynomial
    /// it was issued for.
    pub fn fingerprint(&self) -> u64 {
        let mut h = std::hash::DefaultHasher::new();
        self.rank.hash(&mut h);
        self.forms.hash(&mut h);
        self.denominator.to_bytes_le().hash(&mut h);
        h.finish()
    }
}

/// Certifies that `polynomial mod q` is invariant under translating any
/// coordinate by `period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodCertificate {
    pub prime: u64,
    pub exponent: u32,
    pub period: u64,
    pub fingerprint: u64,
}

impl PeriodCertificate {
    pub fn modulus(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

/// Period of `f mod p^s`: p^(floor(log_p deg(f)) + s), where deg is
/// [`FactoredPolynomial::deg_bullet`]. A constant polynomial gets the
/// degenerate period 1.
pub fn period_prime_power(f: &FactoredPolynomial, p: u64, s: u32) -> PeriodCertificate {
    assert!(crate::numeric::is_prime(p), "modulus base must be prime");
    assert!(s >= 1, "exponent must be positive");
    let d = f.deg_bullet() as u64;
    let period = if d == 0 {
        1
    } else {
        // floor(log_p d) by repeated multiplication, exact
        let mut e = 0u32;
        let mut pe = p;
        while pe <= d {
            e += 1;
            pe *= p;
        }
        p.pow(e + s)
    };
    PeriodCertificate {
        prime: p,
        exponent: s,
        period,
        fingerprint: f.fingerprint(),
    }
}

/// An m-period of `f`: the product of the prime-power periods. Periods for
/// coprime moduli multiply.
pub fn period_composite(f: &FactoredPolynomial, m: &PrimePowerFactorization) -> u64 {
    m.factors()
        .iter()
        .map(|&(p, s)| period_prime_power(f, p, s).period)
        .product::<u64>()
        .max(1)
}

/// Check the sandwich (q/p) * deg <= period <= q * deg for a certificate.
pub fn period_bounds_hold(f: &FactoredPolynomial, cert: &PeriodCertificate) -> bool {
    let d = f.deg_bullet() as u64;
    if d == 0 {
        return cert.period == 1;
    }
    let q = cert.modulus();
    let lower = (q / cert.prime) * d;
    let upper = q * d;
    lower <= cert.period && cert.period <= upper
}

/// Evaluate `f` through big integers and reduce mod `q`; reference path for
/// period soundness checks.
pub fn eval_mod(f: &FactoredPolynomial, x: &[i64], q: u64) -> Result<u64> {
    let v = f.eval_exact(x)?;
    let m = num_integer::Integer::mod_floor(&v, &BigInt::from(q));
    Ok(m.to_u64().expect("residue fits"))
}
