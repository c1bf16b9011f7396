//! End-to-end exact density computation: build the dimension polynomial for
//! a variant, certify one period per prime power of `m`, count non-divisible
//! points in each fundamental domain, and combine.
//!
//! Counting never forms the big product: a value is divisible by p^s exactly
//! when the per-form valuations sum past s plus the denominator's valuation,
//! so the kernel accumulates small-integer valuations with an early exit.
//!
//! Per-prime-power results combine as `1 - prod(1 - d_q)`. The prime-power
//! periods are powers of distinct primes, so the residues of a point modulo
//! the different periods are independent as it ranges over the composite
//! fundamental domain, and divisibility events for distinct prime powers are
//! independent. This product rule is an engine shortcut, not something the
//! density framework needs; it is validated against direct enumeration over
//! the composite period by the `product-rule` verification suite.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ivpoly::{period_prime_power, FactoredPolynomial, PeriodCertificate};
use crate::numeric::{factorize, val, Rational};
use crate::roots::{
    build_root_datum, center_order, group_sublattice, orthogonal_embedding, selfdual_embedding,
    weight_polynomial, AlgebraId, GroupId, VariantKind, VariantSpec,
};
use crate::ENGINE_VERSION;

/// Tunables for one engine run.
#[derive(Debug, Clone)]
pub struct EngineOptions {
    /// Worker threads; `None` uses the global pool. Results are identical
    /// for any worker count.
    pub workers: Option<usize>,
    /// Hard cap on points enumerated per fundamental domain.
    pub budget_points: u64,
    /// Directory for the line-oriented result cache; `None` disables caching.
    pub cache_dir: Option<PathBuf>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            workers: None,
            budget_points: 100_000_000,
            cache_dir: None,
        }
    }
}

/// A density query: which representation family, and which modulus.
#[derive(Debug, Clone)]
pub struct DensityRequest {
    pub variant: VariantSpec,
    pub m: u64,
    pub options: EngineOptions,
}

/// Per-prime-power slice of a computation.
#[derive(Debug, Clone)]
pub struct PrimePowerDensity {
    pub prime: u64,
    pub exponent: u32,
    pub modulus: u64,
    pub period: u64,
    pub points: u64,
    pub nondivisible: u64,
    pub density: Rational,
}

/// How the per-prime-power densities were combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombinationRule {
    /// m = 1: every degree is divisible, density 0.
    UnitModulus,
    /// Single prime power: the count is the answer.
    SingleFactor,
    /// 1 - prod(1 - d_q) over the prime powers of m.
    Product,
    /// Served from the cache; no enumeration performed.
    Cached,
}

/// An exact density with its provenance.
#[derive(Debug, Clone)]
pub struct ExactDensity {
    pub variant: String,
    pub m: u64,
    pub value: Rational,
    pub per_prime_power: Vec<PrimePowerDensity>,
    pub combination: CombinationRule,
    pub points_enumerated: u64,
    pub wall_ms: u128,
}

/// One line of the cache file; also the machine-readable output record.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CacheRecord {
    pub variant: String,
    pub m: u64,
    pub numerator: String,
    pub denominator: String,
    pub periods: Vec<u64>,
    pub points: u64,
    pub engine_version: String,
}

impl CacheRecord {
    pub fn from_density(d: &ExactDensity) -> Self {
        CacheRecord {
            variant: d.variant.clone(),
            m: d.m,
            numerator: d.value.numer().to_string(),
            denominator: d.value.denom().to_string(),
            periods: d.per_prime_power.iter().map(|p| p.period).collect(),
            points: d.points_enumerated,
            engine_version: ENGINE_VERSION.to_string(),
        }
    }

    pub fn value(&self) -> Result<Rational> {
        let n: BigInt = self
            .numerator
            .parse()
            .map_err(|_| Error::Cache("bad numerator".into()))?;
        let d: BigInt = self
            .denominator
            .parse()
            .map_err(|_| Error::Cache("bad denominator".into()))?;
        if d.is_zero() {
            return Err(Error::Cache("zero denominator".into()));
        }
        Ok(Rational::new(n, d))
    }
}

/// Count points of `{0, .., period-1}^rank` where the polynomial value is
/// NOT divisible by the certificate's modulus.
pub fn count_nondivisible(
    poly: &FactoredPolynomial,
    cert: &PeriodCertificate,
    budget: u64,
) -> Result<u64> {
    assert_eq!(
        cert.fingerprint,
        poly.fingerprint(),
        "certificate was issued for a different polynomial"
    );
    let k = poly.rank();
    let w = cert.period;
    let total = (w as u128).pow(k as u32);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: total,
            budget,
        });
    }
    let p = cert.prime;
    let vden = val(&BigInt::from(poly.denominator().clone()), p)
        .finite()
        .expect("denominator is nonzero");
    // divisible  <=>  sum of form valuations >= threshold
    let threshold = cert.exponent as u64 + vden;

    if k == 0 {
        let nondiv = match poly.eval_valuation(&[], p) {
            crate::numeric::Valuation::Finite(e) => e < cert.exponent as u64,
            crate::numeric::Valuation::Infinite => false,
        };
        return Ok(nondiv as u64);
    }

    // bound on |form value| over the fundamental domain, for the lookup table
    let mut max_abs: i128 = 0;
    for f in poly.forms() {
        let b: i128 = f
            .coeffs
            .iter()
            .map(|&c| (c.unsigned_abs() as i128) * ((w - 1) as i128))
            .sum::<i128>()
            + f.constant.unsigned_abs() as i128;
        max_abs = max_abs.max(b);
    }
    if max_abs > 16_000_000 {
        // fall back to per-point big-integer evaluation; never taken for the
        // ranks and periods this crate targets, but keeps huge inputs correct
        return count_nondivisible_slow(poly, cert);
    }
    let bound = max_abs as i64;
    // valuation lookup: table[v] = val_p(v) for 1 <= v <= bound
    let table: Vec<u8> = {
        let mut t = vec![0u8; (bound + 1) as usize];
        for v in 1..=bound as usize {
            if v % p as usize == 0 {
                t[v] = t[v / p as usize] + 1;
            }
        }
        t
    };

    let forms: Vec<(&[i64], i64)> = poly
        .forms()
        .iter()
        .map(|f| (f.coeffs.as_slice(), f.constant))
        .collect();
    let nf = forms.len();

    // split the first one or two coordinates across workers
    let tasks: Vec<(u64, Option<u64>)> = if k >= 2 {
        (0..w)
            .flat_map(|a| (0..w).map(move |b| (a, Some(b))))
            .collect()
    } else {
        (0..w).map(|a| (a, None)).collect()
    };

    let count = crate::par::map_reduce(
        tasks,
        |&(x0, x1)| {
            // running form values for the fixed prefix
            let mut vals: Vec<i64> = forms
                .iter()
                .map(|(c, k0)| {
                    let mut v = *k0 + c[0] * x0 as i64;
                    if let Some(x1) = x1 {
                        v += c[1] * x1 as i64;
                    }
                    v
                })
                .collect();
            let start = if x1.is_some() { 2 } else { 1 };
            let mut cnt = 0u64;
            count_rec(
                start,
                k,
                w,
                &forms,
                &mut vals,
                &table,
                threshold,
                &mut cnt,
            );
            debug_assert_eq!(vals.len(), nf);
            cnt
        },
        || 0,
        |a, b| a + b,
    );
    Ok(count)
}

/// Recursive odometer over coordinates `depth..k`, updating the running form
/// values incrementally; counts leaves whose total valuation stays below the
/// divisibility threshold.
#[allow(clippy::too_many_arguments)]
fn count_rec(
    depth: usize,
    k: usize,
    w: u64,
    forms: &[(&[i64], i64)],
    vals: &mut [i64],
    table: &[u8],
    threshold: u64,
    cnt: &mut u64,
) {
    if depth == k {
        let mut total = 0u64;
        for &v in vals.iter() {
            if v == 0 {
                return; // infinite valuation: divisible
            }
            total += table[v.unsigned_abs() as usize] as u64;
            if total >= threshold {
                return; // divisible
            }
        }
        *cnt += 1;
        return;
    }
    for _ in 0..w {
        count_rec(depth + 1, k, w, forms, vals, table, threshold, cnt);
        for (v, (c, _)) in vals.iter_mut().zip(forms) {
            *v += c[depth];
        }
    }
    // restore the running values for this branch
    for (v, (c, _)) in vals.iter_mut().zip(forms) {
        *v -= c[depth] * w as i64;
    }
}

fn count_nondivisible_slow(poly: &FactoredPolynomial, cert: &PeriodCertificate) -> Result<u64> {
    let k = poly.rank();
    let w = cert.period;
    let mut x = vec![0i64; k];
    let mut cnt = 0u64;
    loop {
        // eval_valuation is already denominator-corrected; compare to s
        if let crate::numeric::Valuation::Finite(e) = poly.eval_valuation(&x, cert.prime) {
            if e < cert.exponent as u64 {
                cnt += 1;
            }
        }
        let mut i = 0;
        loop {
            if i == k {
                return Ok(cnt);
            }
            x[i] += 1;
            if x[i] < w as i64 {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

/// Compute the exact density of representations (of the request's variant)
/// whose degree is not divisible by `m`.
pub fn density_for(request: &DensityRequest) -> Result<ExactDensity> {
    let started = crate::par::Stopwatch::start();
    let label = request.variant.label();
    let m = request.m;

    if let Some(dir) = &request.options.cache_dir {
        if let Some(hit) = cache_lookup(dir, &label, m)? {
            return Ok(ExactDensity {
                variant: label,
                m,
                value: hit.value()?,
                per_prime_power: Vec::new(),
                combination: CombinationRule::Cached,
                points_enumerated: 0,
                wall_ms: started.elapsed_ms(),
            });
        }
    }

    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    if m == 1 {
        return Ok(ExactDensity {
            variant: label,
            m,
            value: Rational::zero(),
            per_prime_power: Vec::new(),
            combination: CombinationRule::UnitModulus,
            points_enumerated: 0,
            wall_ms: started.elapsed_ms(),
        });
    }

    let datum = build_root_datum(request.variant.algebra)?;
    let poly = weight_polynomial(&datum, &request.variant.map, true);
    let k = poly.rank();
    let factorization = factorize(m)?;

    let result = crate::par::with_workers(request.options.workers, || -> Result<_> {
        let mut slices = Vec::new();
        for &(p, s) in factorization.factors() {
            let cert = period_prime_power(&poly, p, s);
            let nondiv = count_nondivisible(&poly, &cert, request.options.budget_points)?;
            let points_big = BigUint::from(cert.period).pow(k as u32);
            let points = points_big.to_u64().expect("within budget");
            slices.push(PrimePowerDensity {
                prime: p,
                exponent: s,
                modulus: cert.modulus(),
                period: cert.period,
                points,
                nondivisible: nondiv,
                density: Rational::new(BigInt::from(nondiv), BigInt::from(points)),
            });
        }
        Ok(slices)
    })?;

    let mut surviving = Rational::one();
    for s in &result {
        surviving *= Rational::one() - s.density.clone();
    }
    let value = Rational::one() - surviving;
    debug_assert!(value >= Rational::zero() && value <= Rational::one());
    let combination = if result.len() == 1 {
        CombinationRule::SingleFactor
    } else {
        CombinationRule::Product
    };
    let density = ExactDensity {
        variant: label,
        m,
        value,
        points_enumerated: result.iter().map(|s| s.points).sum(),
        per_prime_power: result,
        combination,
        wall_ms: started.elapsed_ms(),
    };

    if let Some(dir) = &request.options.cache_dir {
        cache_store(dir, &CacheRecord::from_density(&density))?;
    }
    Ok(density)
}

/// Density for an algebra with default options.
pub fn density_of_algebra(id: AlgebraId, m: u64, options: &EngineOptions) -> Result<ExactDensity> {
    density_for(&DensityRequest {
        variant: VariantSpec::algebra(id)?,
        m,
        options: options.clone(),
    })
}

/// Density over a group's representation lattice. Asserts the covering
/// bound `density(G) <= |center| * density(algebra)`.
pub fn density_group(group: GroupId, m: u64, options: &EngineOptions) -> Result<ExactDensity> {
    let variant = group_sublattice(group)?;
    let algebra = variant.algebra;
    let result = density_for(&DensityRequest {
        variant,
        m,
        options: options.clone(),
    })?;
    let alg = density_of_algebra(algebra, m, options)?;
    let center = Rational::new(BigInt::from(center_order(group)), BigInt::one());
    assert!(
        result.value <= center * alg.value,
        "group density exceeded |center| * algebra density"
    );
    Ok(result)
}

/// Density over the self-dual weights.
pub fn density_selfdual(id: AlgebraId, m: u64, options: &EngineOptions) -> Result<ExactDensity> {
    density_for(&DensityRequest {
        variant: selfdual_embedding(id)?,
        m,
        options: options.clone(),
    })
}

/// Density over the orthogonal weights. Asserts `orth <= 2 * selfdual`.
pub fn density_orthogonal(id: AlgebraId, m: u64, options: &EngineOptions) -> Result<ExactDensity> {
    let result = density_for(&DensityRequest {
        variant: orthogonal_embedding(id)?,
        m,
        options: options.clone(),
    })?;
    let sd = density_selfdual(id, m, options)?;
    let two = Rational::new(BigInt::from(2), BigInt::one());
    assert!(
        result.value <= two * sd.value,
        "orthogonal density exceeded twice the self-dual density"
    );
    Ok(result)
}

/// Compute a density for any variant kind (dispatch helper for front ends).
pub fn density_of_variant(variant: &VariantSpec, m: u64, options: &EngineOptions) -> Result<ExactDensity> {
    match variant.kind {
        VariantKind::Algebra => density_of_algebra(variant.algebra, m, options),
        VariantKind::Group(g) => density_group(g, m, options),
        VariantKind::SelfDual => density_selfdual(variant.algebra, m, options),
        VariantKind::Orthogonal => density_orthogonal(variant.algebra, m, options),
    }
}

static CACHE_WRITE_LOCK: Mutex<()> = Mutex::new(());

fn cache_file(dir: &Path) -> PathBuf {
    dir.join("densities.jsonl")
}

fn cache_lookup(dir: &Path, variant: &str, m: u64) -> Result<Option<CacheRecord>> {
    let path = cache_file(dir);
    let Ok(file) = std::fs::File::open(&path) else {
        return Ok(None);
    };
    let reader = std::io::BufReader::new(file);
    for line in reader.lines() {
        let line = line.map_err(|e| Error::Cache(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let Ok(rec) = serde_json::from_str::<CacheRecord>(&line) else {
            continue; // ignore unreadable lines
        };
        if rec.variant == variant && rec.m == m && rec.engine_version == ENGINE_VERSION {
            return Ok(Some(rec));
        }
    }
    Ok(None)
}

fn cache_store(dir: &Path, record: &CacheRecord) -> Result<()> {
    let _guard = CACHE_WRITE_LOCK.lock().expect("cache lock");
    std::fs::create_dir_all(dir).map_err(|e| Error::Cache(e.to_string()))?;
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(cache_file(dir))
        .map_err(|e| Error::Cache(e.to_string()))?;
    let line = serde_json::to_string(record).map_err(|e| Error::Cache(e.to_string()))?;
    writeln!(file, "{line}").map_err(|e| Error::Cache(e.to_string()))?;
    Ok(())
}
