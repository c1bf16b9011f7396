//! Named verification suites: executable oracles for the facts the engine
//! relies on. Each suite re-derives a claim by an independent route (direct
//! big-integer arithmetic, ball enumeration, composite-period brute force)
//! and reports a minimal witness on failure.
//!
//! The command-line `verify` subcommand and the acceptance tests both run
//! these.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bounds::vandermonde_tail;
use crate::engine::{density_of_algebra, density_selfdual, EngineOptions};
use crate::error::Result;
use crate::ivpoly::{eval_mod, period_bounds_hold, period_prime_power, FactoredPolynomial};
use crate::lattice::{
    density_empirical, density_empirical_cone, density_fundamental, Norm, PeriodicSetSpec,
};
use crate::numeric::{fray_congruence_holds, rational, val, Rational};
use crate::roots::{
    build_root_datum, dimension_polynomial, selfdual_embedding, weight_polynomial, AlgebraId,
    Family,
};

/// Outcome of one verification suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<String>,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            checks: Vec::new(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        if ok {
            self.checks.push(detail);
        } else {
            self.failures.push(detail);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Deterministic pseudo-random stream; keeps the suites reproducible without
/// an external dependency.
pub(crate) struct SplitMix64(u64);

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub(crate) fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub(crate) fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}

/// Binomial-coefficient congruence on random admissible tuples.
pub fn verify_fray(samples: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("fray");
    let mut rng = SplitMix64::new(seed);
    let primes = [2u64, 3, 5, 7];
    let mut failures = 0usize;
    for _ in 0..samples {
        let p = primes[(rng.next() % 4) as usize];
        let k = 1 + rng.next() % 60;
        let mut s = 0u32;
        while p.pow(s + 1) <= k {
            s += 1;
        }
        let r = 1 + (rng.next() % 4) as u32;
        let n = rng.range_i64(-10_000, 10_000);
        match fray_congruence_holds(n, k, p, r, s) {
            Ok(true) => {}
            Ok(false) => {
                failures += 1;
                report.check(
                    false,
                    format!("congruence failed at n={n}, k={k}, p={p}, r={r}, s={s}"),
                );
            }
            Err(e) => {
                failures += 1;
                report.check(false, format!("oracle error: {e}"));
            }
        }
        if failures > 3 {
            break;
        }
    }
    if report.failures.is_empty() {
        report.check(true, format!("{samples} random admissible tuples"));
    }
    report
}

fn named_polynomials() -> Vec<(String, FactoredPolynomial)> {
    let mut out = Vec::new();
    for id in [
        AlgebraId::new(Family::Gl, 2).unwrap(),
        AlgebraId::new(Family::Gl, 3).unwrap(),
        AlgebraId::new(Family::Gl, 4).unwrap(),
        AlgebraId::new(Family::SoOdd, 2).unwrap(),
        AlgebraId::new(Family::Sp, 2).unwrap(),
        AlgebraId::new(Family::SoEven, 3).unwrap(),
    ] {
        let datum = build_root_datum(id).unwrap();
        out.push((id.to_string(), dimension_polynomial(&datum)));
    }
    // a pulled-back polynomial: the self-dual embedding of sl_4
    let sl4 = AlgebraId::new(Family::Sl, 4).unwrap();
    let datum = build_root_datum(sl4).unwrap();
    let sd = selfdual_embedding(sl4).unwrap();
    out.push((
        "sd:sl4".to_string(),
        weight_polynomial(&datum, &sd.map, true),
    ));
    out
}

/// Period certificates hold: translation by period * e_j never changes the
/// value mod q, and the period sits inside its sandwich bounds.
pub fn verify_periods(samples_per_certificate: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("periods");
    let mut rng = SplitMix64::new(seed);
    for (name, poly) in named_polynomials() {
        for (p, s) in [(2u64, 1u32), (3, 1), (2, 2), (3, 2)] {
            let cert = period_prime_power(&poly, p, s);
            let q = cert.modulus();
            if !period_bounds_hold(&poly, &cert) {
                report.check(
                    false,
                    format!("{name} mod {q}: period {} outside its bounds", cert.period),
                );
                continue;
            }
            let mut bad = None;
            for _ in 0..samples_per_certificate {
                let x: Vec<i64> = (0..poly.rank())
                    .map(|_| rng.range_i64(-1000, 1000))
                    .collect();
                let j = (rng.next() as usize) % poly.rank();
                let mut y = x.clone();
                y[j] += cert.period as i64;
                let a = eval_mod(&poly, &x, q).unwrap();
                let b = eval_mod(&poly, &y, q).unwrap();
                if a != b {
                    bad = Some((x, j));
                    break;
                }
            }
            match bad {
                None => report.check(
                    true,
                    format!(
                        "{name} mod {q}: period {} on {samples_per_certificate} samples",
                        cert.period
                    ),
                ),
                Some((x, j)) => report.check(
                    false,
                    format!("{name} mod {q}: period broken at x={x:?}, direction {j}"),
                ),
            }
        }
    }
    report
}

/// p-adic valuation of values agrees with the big-integer route.
pub fn verify_valuations(samples: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("valuations");
    let mut rng = SplitMix64::new(seed);
    for (name, poly) in named_polynomials() {
        let mut bad = None;
        for _ in 0..samples {
            let x: Vec<i64> = (0..poly.rank())
                .map(|_| rng.range_i64(-50, 50))
                .collect();
            let p = [2u64, 3, 5][(rng.next() % 3) as usize];
            let direct = poly.eval_valuation(&x, p);
            let through_value = val(&poly.eval_exact(&x).unwrap(), p);
            if direct != through_value {
                bad = Some((x, p));
                break;
            }
        }
        match bad {
            None => report.check(true, format!("{name}: {samples} samples")),
            Some((x, p)) => {
                report.check(false, format!("{name}: disagreement at x={x:?}, p={p}"))
            }
        }
    }
    report
}

/// Norm-independence for periodic sets: empirical densities under the sup
/// norm and under a sheared sup norm both approach the fundamental-domain
/// value (within 10% relative at radius 50 * period).
pub fn verify_norms(budget: u64) -> SuiteReport {
    let mut report = SuiteReport::new("norms");
    let cases: Vec<(&str, usize, u64, Box<dyn Fn(&[i64]) -> bool + Sync>)> = vec![
        (
            "gl2 m=2",
            2,
            2,
            Box::new(|x: &[i64]| (x[0] - x[1] + 1) % 2 != 0),
        ),
        (
            "gl3 m=2",
            3,
            4,
            Box::new(|x: &[i64]| {
                let v = (x[0] - x[1] + 1) * (x[0] - x[2] + 2) * (x[1] - x[2] + 1);
                (v / 2) % 2 != 0
            }),
        ),
    ];
    for (name, rank, period, pred) in cases {
        let spec = PeriodicSetSpec::new(rank, period, &*pred);
        let fund = density_fundamental(&spec, budget).unwrap();
        let radius = (50 * period) as i64;
        let mut shear = vec![vec![0i64; rank]; rank];
        for (i, row) in shear.iter_mut().enumerate() {
            row[i] = 1;
        }
        shear[1][0] = 1; // v -> max(|x1|, |x1+x2|, ..)
        for (nname, norm) in [("sup", Norm::Sup), ("sheared", Norm::ShearedSup(shear))] {
            let emp = density_empirical(rank, &*pred, &norm, radius, budget).unwrap();
            let gap = (emp.value.clone() - fund.clone()).abs() / fund.clone();
            let ok = gap <= rational(1, 10);
            report.check(
                ok,
                format!(
                    "{name} under {nname} norm at r={radius}: empirical {} vs fundamental {} (relative gap {})",
                    emp.value, fund, gap
                ),
            );
        }
    }
    report
}

/// The per-prime-power product rule agrees with direct enumeration over the
/// composite fundamental domain.
pub fn verify_product_rule(options: &EngineOptions) -> SuiteReport {
    let mut report = SuiteReport::new("product-rule");
    for n in [2usize, 3] {
        let id = AlgebraId::new(Family::Gl, n).unwrap();
        let datum = build_root_datum(id).unwrap();
        let poly = dimension_polynomial(&datum);
        for m in [6u64, 12] {
            let engine = density_of_algebra(id, m, options).unwrap();
            let factorization = crate::numeric::factorize(m).unwrap();
            let composite_period = crate::ivpoly::period_composite(&poly, &factorization);
            let poly_ref = &poly;
            let spec = PeriodicSetSpec::new(n, composite_period, move |x: &[i64]| {
                let v = poly_ref.eval_exact(x).unwrap();
                !num_integer::Integer::mod_floor(&v, &BigInt::from(m)).is_zero()
            });
            let brute = density_fundamental(&spec, options.budget_points).unwrap();
            report.check(
                engine.value == brute,
                format!(
                    "gl{n} m={m}: product rule {} vs composite period {} enumeration {}",
                    engine.value, composite_period, brute
                ),
            );
        }
    }
    report
}

/// Dominant-cone empirical densities approach the full-lattice fundamental
/// value as the radius grows.
pub fn verify_cone(options: &EngineOptions) -> SuiteReport {
    let mut report = SuiteReport::new("cone");
    for n in [2usize, 3] {
        let id = AlgebraId::new(Family::Gl, n).unwrap();
        let datum = build_root_datum(id).unwrap();
        let poly = dimension_polynomial(&datum);
        let m = 2u64;
        let fund = density_of_algebra(id, m, options).unwrap().value;
        let cert = period_prime_power(&poly, 2, 1);
        let w = cert.period;
        let poly_ref = &poly;
        let pred = move |x: &[i64]| {
            let v = poly_ref.eval_exact(x).unwrap();
            !num_integer::Integer::mod_floor(&v, &BigInt::from(m)).is_zero()
        };
        let datum_ref = &datum;
        let dominance = move |x: &[i64]| {
            let lam2: Vec<i64> = x.iter().map(|&v| 2 * v).collect();
            datum_ref.is_dominant2(&lam2)
        };
        let mut gaps = Vec::new();
        for factor in [10u64, 25, 50] {
            let r = (factor * w) as i64;
            let emp = density_empirical_cone(n, pred, dominance, &Norm::Sup, r, options.budget_points)
                .unwrap();
            let gap = (emp.value.clone() - fund.clone()).abs() / fund.clone();
            gaps.push((r, emp.value.clone(), gap));
        }
        let final_ok = gaps[2].2 <= rational(1, 10);
        report.check(
            final_ok,
            format!(
                "gl{n} m=2: cone density {} at r={} vs fundamental {} (relative gap {})",
                gaps[2].1, gaps[2].0, fund, gaps[2].2
            ),
        );
        // shrinkage over the radius ladder: at least 2 of the 3 pairwise
        // comparisons must improve
        let comparisons = [
            gaps[0].2 >= gaps[1].2,
            gaps[1].2 >= gaps[2].2,
            gaps[0].2 >= gaps[2].2,
        ];
        let shrinking = comparisons.iter().filter(|&&b| b).count();
        report.check(
            shrinking >= 2,
            format!(
                "gl{n} m=2: gap ladder {} -> {} -> {} ({shrinking}/3 comparisons shrink)",
                gaps[0].2, gaps[1].2, gaps[2].2
            ),
        );
    }
    report
}

/// The non-periodic first-and-third-quadrant set has norm-dependent density:
/// about 1/2 under the sup norm, about 1/4 under max(|x|, |x+y|).
pub fn verify_counterexample(radius: i64, budget: u64) -> SuiteReport {
    let mut report = SuiteReport::new("counterexample");
    let pred = |x: &[i64]| x[0] * x[1] >= 0;
    let targets = [
        ("sup", Norm::Sup, rational(1, 2)),
        (
            "max(|x|,|x+y|)",
            Norm::ShearedSup(vec![vec![1, 0], vec![1, 1]]),
            rational(1, 4),
        ),
    ];
    for (name, norm, target) in targets {
        match density_empirical(2, pred, &norm, radius, budget) {
            Ok(emp) => {
                let gap = (emp.value.clone() - target.clone()).abs() / target.clone();
                report.check(
                    gap <= rational(1, 100),
                    format!(
                        "{name} at r={radius}: density {} vs limit {} (relative gap {})",
                        emp.value, target, gap
                    ),
                );
            }
            Err(e) => report.check(false, format!("{name}: {e}")),
        }
    }
    report
}

/// Exact equality of densities across the exceptional low-rank isomorphisms,
/// each side computed independently from its own root datum.
pub fn verify_isomorphisms(options: &EngineOptions) -> SuiteReport {
    let mut report = SuiteReport::new("isomorphisms");
    let pairs = [
        ("so3", AlgebraId::new(Family::SoOdd, 1).unwrap(), "sl2", AlgebraId::new(Family::Sl, 2).unwrap()),
        ("sp2", AlgebraId::new(Family::Sp, 1).unwrap(), "sl2", AlgebraId::new(Family::Sl, 2).unwrap()),
        ("so5", AlgebraId::new(Family::SoOdd, 2).unwrap(), "sp4", AlgebraId::new(Family::Sp, 2).unwrap()),
        ("so6", AlgebraId::new(Family::SoEven, 3).unwrap(), "sl4", AlgebraId::new(Family::Sl, 4).unwrap()),
    ];
    for m in [2u64, 3] {
        for (la, a, lb, b) in &pairs {
            let da = density_of_algebra(*a, m, options).unwrap();
            let db = density_of_algebra(*b, m, options).unwrap();
            report.check(
                da.value == db.value,
                format!("m={m}: {la} gives {} and {lb} gives {}", da.value, db.value),
            );
        }
        // so6 and sl4 also agree on self-dual representations
        let sa = density_selfdual(AlgebraId::new(Family::SoEven, 3).unwrap(), m, options).unwrap();
        let sb = density_selfdual(AlgebraId::new(Family::Sl, 4).unwrap(), m, options).unwrap();
        report.check(
            sa.value == sb.value,
            format!("m={m}: sd:so6 gives {} and sd:sl4 gives {}", sa.value, sb.value),
        );
    }
    // so_4 = sl_2 x sl_2, documented via the product polynomial (a+1)(b+1):
    // density at a prime p must be ((p-1)/p)^2
    for p in [2u64, 3, 5] {
        let spec = PeriodicSetSpec::new(2, p, move |x: &[i64]| {
            ((x[0] + 1) * (x[1] + 1)).rem_euclid(p as i64) != 0
        });
        let d = density_fundamental(&spec, 1_000_000).unwrap();
        let expect = rational(p as i64 - 1, p as i64) * rational(p as i64 - 1, p as i64);
        report.check(
            d == expect,
            format!("so4 as sl2 x sl2 at p={p}: {d} vs ((p-1)/p)^2 = {expect}"),
        );
    }
    report
}

/// Falling-factorial tail bound and the per-prime-power union-bound
/// consistency for gl_n counts.
pub fn verify_union_bound(options: &EngineOptions) -> SuiteReport {
    let mut report = SuiteReport::new("union-bound");
    for (w, n) in [(4u64, 3u64), (2, 3), (6, 4), (8, 5), (3, 3)] {
        match vandermonde_tail(w, n) {
            Ok((exact, bound)) => report.check(
                bound.holds_above(&exact),
                format!("falling factorial ({w})_{n}/{w}^{n} = {exact} within exp bound"),
            ),
            Err(e) => report.check(false, format!("vandermonde_tail({w},{n}): {e}")),
        }
    }
    for n in 2..=6usize {
        let id = AlgebraId::new(Family::Gl, n).unwrap();
        for m in [2u64, 3] {
            let d = density_of_algebra(id, m, options).unwrap();
            for pp in &d.per_prime_power {
                let ratio = Rational::new(BigInt::from(pp.nondivisible), BigInt::from(pp.points));
                let bound = crate::bounds::ExpBound::new(
                    Rational::one(),
                    rational((n * n) as i64, (4 * pp.period) as i64),
                );
                report.check(
                    bound.holds_above(&ratio),
                    format!(
                        "gl{n} q={}: count ratio {} within exp(-n^2/4w), w={}",
                        pp.modulus, ratio, pp.period
                    ),
                );
            }
        }
    }
    report
}

/// Run every suite with default parameters.
pub fn verify_all(options: &EngineOptions) -> Vec<SuiteReport> {
    vec![
        verify_fray(10_000, 7),
        verify_periods(10_000, 11),
        verify_valuations(10_000, 13),
        verify_norms(options.budget_points),
        verify_product_rule(options),
        verify_cone(options),
        verify_counterexample(1000, options.budget_points),
        verify_isomorphisms(options),
        verify_union_bound(options),
    ]
}

/// Names accepted by the `verify` front ends.
pub fn suite_by_name(name: &str, options: &EngineOptions) -> Result<SuiteReport> {
    Ok(match name {
        "fray" => verify_fray(10_000, 7),
        "periods" => verify_periods(10_000, 11),
        "valuations" => verify_valuations(10_000, 13),
        "norms" => verify_norms(options.budget_points),
        "product-rule" => verify_product_rule(options),
        "cone" => verify_cone(options),
        "counterexample" => verify_counterexample(1000, options.budget_points),
        "isomorphisms" => verify_isomorphisms(options),
        "union-bound" => verify_union_bound(options),
        other => {
            return Err(crate::error::Error::InvalidInput(format!(
                "unknown suite '{other}'; expected one of fray, periods, valuations, norms, \
                 product-rule, cone, counterexample, isomorphisms, union-bound"
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites_pass() {
        let o = EngineOptions::default();
        for r in [
            verify_fray(300, 1),
            verify_periods(200, 2),
            verify_valuations(300, 3),
            verify_product_rule(&o),
            verify_isomorphisms(&o),
        ] {
            assert!(r.passed(), "{}: {:?}", r.name, r.failures);
        }
    }
}
