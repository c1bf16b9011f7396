//! Closed-form bounds on the densities, as pure evaluators, plus a
//! comparator that checks computed exact values against every bound that
//! applies to them.
//!
//! Upper bounds have the shape `c * exp(-x)` with rational `c >= 0` and
//! `x > 0`. Comparisons against exact rationals are decided through nested
//! rational enclosures of `exp(-x)` from the truncated series with an
//! explicit remainder term, so no check ever depends on floating-point
//! rounding.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::{factorize, rational, Rational};
use crate::roots::{AlgebraId, Family, GroupId, VariantKind, VariantSpec};

/// `coefficient * exp(-exponent)` with exact rational parts.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpBound {
    pub coefficient: Rational,
    pub exponent: Rational,
}

impl ExpBound {
    pub fn new(coefficient: Rational, exponent: Rational) -> Self {
        assert!(exponent >= Rational::zero());
        assert!(coefficient >= Rational::zero());
        ExpBound {
            coefficient,
            exponent,
        }
    }

    /// Rational enclosure `lo <= c * exp(-x) <= hi` using `terms` series
    /// terms. Requires `x < terms + 2`.
    pub fn enclosure(&self, terms: u32) -> (Rational, Rational) {
        if self.coefficient.is_zero() {
            return (Rational::zero(), Rational::zero());
        }
        let x = &self.exponent;
        if x.is_zero() {
            return (self.coefficient.clone(), self.coefficient.clone());
        }
        // series for exp(x): s = sum_{t<=T} x^t / t!, with remainder
        // r <= x^{T+1}/(T+1)! * 1/(1 - x/(T+2))
        let mut term = Rational::one();
        let mut s = Rational::one();
        for t in 1..=terms {
            term = term * x / rational(t as i64, 1);
            s += term.clone();
        }
        let t1 = rational(terms as i64 + 1, 1);
        let t2 = rational(terms as i64 + 2, 1);
        assert!(
            x < &t2,
            "series length too small for exponent {x}: need terms + 2 > x"
        );
        let tail = term * x / t1 * (t2.clone() / (t2 - x));
        let upper_exp = s.clone() + tail; // exp(x) <= upper_exp
        let lo = self.coefficient.clone() / upper_exp; // c / exp-upper <= c e^{-x}
        let hi = self.coefficient.clone() / s; // c e^{-x} <= c / series
        (lo, hi)
    }

    /// Certified decision of `value <= self`. Refines the enclosure until
    /// the comparison is unambiguous.
    pub fn holds_above(&self, value: &Rational) -> bool {
        if self.coefficient.is_zero() {
            return value <= &Rational::zero();
        }
        let mut terms = 8u32;
        loop {
            // keep the remainder bound valid: terms + 2 > x
            let min_terms = self.exponent.ceil().to_integer().to_u32().unwrap_or(0) + 2;
            terms = terms.max(min_terms);
            let (lo, hi) = self.enclosure(terms);
            if value <= &lo {
                return true;
            }
            if value > &hi {
                return false;
            }
            assert!(terms < 1 << 14, "enclosure failed to separate {value}");
            terms *= 2;
        }
    }

    /// A certified rational upper bound, for rendering.
    pub fn upper_rational(&self, terms: u32) -> Rational {
        self.enclosure(terms).1
    }

    pub fn approx(&self) -> f64 {
        let c = self.coefficient.to_f64().unwrap_or(f64::NAN);
        let x = self.exponent.to_f64().unwrap_or(f64::NAN);
        c * (-x).exp()
    }
}

/// Comparison of one exact density against its applicable bounds.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub variant: String,
    pub m: u64,
    pub lower: Option<Rational>,
    pub upper: Option<ExpBound>,
    pub exact: Option<Rational>,
    pub satisfied: bool,
}

fn omega(m: u64) -> Result<u64> {
    Ok(factorize(m)?.omega() as u64)
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, b| a * BigInt::from(b))
}

/// Lower and upper bounds for gl_n: n!/(mn)^n below, omega(m) exp(-n/4m)
/// above. The upper bound's derivation needs n >= 2, so it is omitted at
/// n = 1.
pub fn bound_gl(n: usize, m: u64) -> Result<(Rational, Option<ExpBound>)> {
    if n == 0 || m < 2 {
        return Err(Error::InvalidInput("bound_gl needs n >= 1 and m >= 2".into()));
    }
    let lower = Rational::new(
        factorial(n as u64),
        BigInt::from(m * n as u64).pow(n as u32),
    );
    let upper = (n >= 2).then(|| {
        ExpBound::new(
            rational(omega(m).unwrap() as i64, 1),
            rational(n as i64, 4 * m as i64),
        )
    });
    Ok((lower, upper))
}

/// Upper bound for the simple families B_n, C_n, D_n: omega(m) exp(-n/8m).
pub fn bound_classical(family: Family, n: usize, m: u64) -> Result<ExpBound> {
    if !matches!(family, Family::SoOdd | Family::Sp | Family::SoEven) {
        return Err(Error::InvalidInput("bound_classical covers B, C, D".into()));
    }
    if n < 2 {
        return Err(Error::InvalidInput("bound_classical needs rank >= 2".into()));
    }
    Ok(ExpBound::new(
        rational(omega(m)? as i64, 1),
        rational(n as i64, 8 * m as i64),
    ))
}

/// Upper bound for self-dual densities: omega(m) exp(-n/36m) for sl_n,
/// omega(m) exp(-n/16m) for so_{2n} with odd n >= 3.
pub fn bound_selfdual(id: AlgebraId, m: u64) -> Result<ExpBound> {
    let w = rational(omega(m)? as i64, 1);
    match id.family {
        Family::Sl => Ok(ExpBound::new(w, rational(id.n as i64, 36 * m as i64))),
        Family::SoEven if id.n % 2 == 1 && id.n >= 3 => {
            Ok(ExpBound::new(w, rational(id.n as i64, 16 * m as i64)))
        }
        _ => Err(Error::UnsupportedVariant(format!(
            "no dedicated self-dual bound for {id}"
        ))),
    }
}

/// Upper bound for orthogonal densities of sl_n: twice the self-dual bound.
pub fn bound_orthogonal(id: AlgebraId, m: u64) -> Result<ExpBound> {
    let sd = bound_selfdual(id, m)?;
    Ok(ExpBound::new(
        sd.coefficient * rational(2, 1),
        sd.exponent,
    ))
}

/// Upper bounds for groups: 2 omega(m) exp(-n/8m) for SO_n (n the matrix
/// size), n omega(m) exp(-n/4m) for PGL_n, and the plain algebra bound for a
/// simply connected group.
pub fn bound_group(group: GroupId, m: u64) -> Result<Option<ExpBound>> {
    let w = rational(omega(m)? as i64, 1);
    match group {
        GroupId::SpecialOrthogonal { size } => Ok(Some(ExpBound::new(
            w * rational(2, 1),
            rational(size as i64, 8 * m as i64),
        ))),
        GroupId::ProjectiveGeneralLinear { n } => Ok(Some(ExpBound::new(
            w * rational(n as i64, 1),
            rational(n as i64, 4 * m as i64),
        ))),
        GroupId::SimplyConnected(id) => algebra_upper(id, m),
    }
}

fn algebra_upper(id: AlgebraId, m: u64) -> Result<Option<ExpBound>> {
    match id.family {
        Family::Gl | Family::Sl => Ok(bound_gl(id.n, m)?.1),
        _ if id.n >= 2 => Ok(Some(bound_classical(id.family, id.n, m)?)),
        _ => Ok(None),
    }
}

/// Exact falling-factorial ratio (w)_n / w^n together with the bound
/// exp(-n^2/4w) it never exceeds. Zero exactly when w < n.
pub fn vandermonde_tail(w: u64, n: u64) -> Result<(Rational, ExpBound)> {
    if n < 2 {
        return Err(Error::InvalidInput("vandermonde_tail needs n >= 2".into()));
    }
    if w == 0 {
        return Err(Error::InvalidInput("period must be positive".into()));
    }
    let exact = if w < n {
        Rational::zero()
    } else {
        let mut num = BigInt::one();
        for i in 0..n {
            num *= BigInt::from(w - i);
        }
        Rational::new(num, BigInt::from(w).pow(n as u32))
    };
    let bound = ExpBound::new(
        Rational::one(),
        rational((n * n) as i64, (4 * w) as i64),
    );
    assert!(
        bound.holds_above(&exact),
        "falling-factorial ratio exceeded its exponential bound"
    );
    Ok((exact, bound))
}

/// Compare a computed exact density against every bound applicable to its
/// variant. `satisfied` is decided with exact rational arithmetic on the
/// lower side and certified enclosures on the exponential side.
pub fn report_for(variant: &VariantSpec, m: u64, exact: &Rational) -> Result<BoundReport> {
    let id = variant.algebra;
    let (lower, upper): (Option<Rational>, Option<ExpBound>) = if m == 1 {
        // omega(1) = 0 makes every upper bound vacuous and the density is 0
        (None, Some(ExpBound::new(Rational::zero(), Rational::zero())))
    } else {
        match variant.kind {
            VariantKind::Algebra => match id.family {
                Family::Gl | Family::Sl => {
                    let (lo, up) = bound_gl(id.n, m)?;
                    (Some(lo), up)
                }
                _ if id.n >= 2 => (None, Some(bound_classical(id.family, id.n, m)?)),
                _ => (None, None),
            },
            VariantKind::Group(g) => (None, bound_group(g, m)?),
            VariantKind::SelfDual => (None, bound_selfdual(id, m).ok()),
            VariantKind::Orthogonal => (None, bound_orthogonal(id, m).ok()),
        }
    };
    let mut satisfied = true;
    if let Some(lo) = &lower {
        satisfied &= lo <= exact;
    }
    if let Some(up) = &upper {
        satisfied &= up.holds_above(exact);
    }
    Ok(BoundReport {
        variant: variant.label(),
        m,
        lower,
        upper,
        exact: Some(exact.clone()),
        satisfied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enclosures_bracket_the_exponential() {
        for (num, den) in [(1i64, 8), (3, 8), (1, 1), (2, 1), (5, 2)] {
            let b = ExpBound::new(Rational::one(), rational(num, den));
            let (lo, hi) = b.enclosure(24);
            let true_val = (-(num as f64) / den as f64).exp();
            assert!(lo.to_f64().unwrap() <= true_val);
            assert!(hi.to_f64().unwrap() >= true_val);
            assert!(lo <= hi);
        }
    }

    #[test]
    fn bound_gl_examples() {
        // n=2, m=2: lower 2/16 = 1/8, exact density is 1/2
        let (lo, up) = bound_gl(2, 2).unwrap();
        assert_eq!(lo, rational(1, 8));
        assert!(lo <= rational(1, 2));
        assert!(up.unwrap().holds_above(&rational(1, 2)));

        // n=3, m=2: exact 3/8 <= exp(-3/8) ~ 0.687
        let (_, up) = bound_gl(3, 2).unwrap();
        assert!(up.unwrap().holds_above(&rational(3, 8)));

        // n=1: lower 1/m <= exact 1, no upper asserted
        let (lo, up) = bound_gl(1, 2).unwrap();
        assert_eq!(lo, rational(1, 2));
        assert!(up.is_none());
    }

    #[test]
    fn exp_bound_rejects_values_above() {
        // exp(-1) ~ 0.3679: 3/8 = 0.375 is above it
        let b = ExpBound::new(Rational::one(), rational(1, 1));
        assert!(!b.holds_above(&rational(3, 8)));
        assert!(b.holds_above(&rational(4, 11))); // 0.3636..
    }

    #[test]
    fn vandermonde_tail_examples() {
        // (4)_3 / 4^3 = 24/64 = 3/8, bounded by exp(-9/16)
        let (exact, bound) = vandermonde_tail(4, 3).unwrap();
        assert_eq!(exact, rational(3, 8));
        assert!(bound.holds_above(&exact));

        // w < n: ratio is exactly zero
        let (exact, _) = vandermonde_tail(2, 3).unwrap();
        assert_eq!(exact, Rational::zero());

        // w = n: n!/n^n
        let (exact, _) = vandermonde_tail(4, 4).unwrap();
        assert_eq!(exact, rational(24, 256));
    }

    #[test]
    fn classical_and_group_bounds_evaluate() {
        let b = bound_classical(Family::SoOdd, 2, 2).unwrap();
        assert_eq!(b.exponent, rational(1, 8));

        let b = bound_classical(Family::SoEven, 4, 3).unwrap();
        assert_eq!(b.exponent, rational(1, 6));
        assert_eq!(b.coefficient, rational(1, 1));

        let b = bound_group(GroupId::SpecialOrthogonal { size: 5 }, 2)
            .unwrap()
            .unwrap();
        assert_eq!(b.coefficient, rational(2, 1));
        assert_eq!(b.exponent, rational(5, 16));

        let b = bound_group(GroupId::ProjectiveGeneralLinear { n: 3 }, 2)
            .unwrap()
            .unwrap();
        assert_eq!(b.coefficient, rational(3, 1));
        assert_eq!(b.exponent, rational(3, 8));
    }

    #[test]
    fn selfdual_bound_examples() {
        let id = AlgebraId::new(Family::Sl, 6).unwrap();
        let b = bound_selfdual(id, 2).unwrap();
        assert_eq!(b.exponent, rational(1, 12));

        let so6 = AlgebraId::new(Family::SoEven, 3).unwrap();
        let b = bound_selfdual(so6, 2).unwrap();
        assert_eq!(b.exponent, rational(3, 32));

        let sl4 = AlgebraId::new(Family::Sl, 4).unwrap();
        let b = bound_selfdual(sl4, 2).unwrap();
        assert_eq!(b.exponent, rational(1, 18));
        let b = bound_orthogonal(sl4, 3).unwrap();
        assert_eq!(b.coefficient, rational(2, 1));
        assert_eq!(b.exponent, rational(1, 27));

        assert!(bound_selfdual(AlgebraId::new(Family::SoEven, 4).unwrap(), 2).is_err());
    }

    #[test]
    fn omega_one_makes_bounds_vacuous_at_m_1() {
        let b = ExpBound::new(Rational::zero(), Rational::zero());
        assert!(b.holds_above(&Rational::zero()));
        assert!(!b.holds_above(&rational(1, 10)));
    }
}
