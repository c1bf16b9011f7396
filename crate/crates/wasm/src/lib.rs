//! Browser bindings for the density engine. Three operations back the demo
//! page in `www/`: a single density query, table regeneration, and the
//! convergence / norm-dependence curves. Everything returns JSON strings so
//! the page needs no generated glue beyond wasm-bindgen's.

use num_traits::ToPrimitive;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use repdens::engine::{density_of_variant, EngineOptions};
use repdens::ivpoly::period_prime_power;
use repdens::lattice::{density_empirical, density_empirical_cone, Norm};
use repdens::numeric::Rational;
use repdens::roots::{build_root_datum, dimension_polynomial, AlgebraId, Family, VariantSpec};

// Single-threaded in the browser; the budget keeps the worst accepted
// request to a few seconds and turns anything larger into a clean error.
const WASM_BUDGET: u64 = 100_000_000;

fn options() -> EngineOptions {
    EngineOptions {
        workers: None,
        budget_points: WASM_BUDGET,
        cache_dir: None,
    }
}

#[derive(Serialize)]
struct DensityOut {
    variant: String,
    m: u64,
    numerator: String,
    denominator: String,
    decimal: f64,
    per_prime_power: Vec<PrimePowerOut>,
}

#[derive(Serialize)]
struct PrimePowerOut {
    modulus: u64,
    period: u64,
    points: u64,
    nondivisible: u64,
}

fn rational_decimal(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn density_out(variant: &VariantSpec, m: u64) -> Result<DensityOut, String> {
    let d = density_of_variant(variant, m, &options()).map_err(|e| e.to_string())?;
    Ok(DensityOut {
        variant: d.variant.clone(),
        m,
        numerator: d.value.numer().to_string(),
        denominator: d.value.denom().to_string(),
        decimal: rational_decimal(&d.value),
        per_prime_power: d
            .per_prime_power
            .iter()
            .map(|p| PrimePowerOut {
                modulus: p.modulus,
                period: p.period,
                points: p.points,
                nondivisible: p.nondivisible,
            })
            .collect(),
    })
}

fn density_json_impl(spec: &str, m: u64) -> Result<String, String> {
    let variant = VariantSpec::parse(spec).map_err(|e| e.to_string())?;
    let out = density_out(&variant, m)?;
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

fn table_json_impl(moduli: &str, nmax: usize) -> Result<String, String> {
    let mut ms = Vec::new();
    for part in moduli.split(',').filter(|s| !s.trim().is_empty()) {
        ms.push(
            part.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad modulus '{part}'"))?,
        );
    }
    if nmax == 0 || nmax > 8 {
        return Err("nmax must be between 1 and 8".into());
    }
    let mut rows = Vec::new();
    for m in ms {
        let mut row = Vec::new();
        for n in 1..=nmax {
            let id = AlgebraId::new(Family::Gl, n).map_err(|e| e.to_string())?;
            let variant = VariantSpec::algebra(id).map_err(|e| e.to_string())?;
            row.push(density_out(&variant, m)?);
        }
        rows.push(row);
    }
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct CurvePoint {
    radius: i64,
    value: f64,
    numerator: String,
    denominator: String,
}

#[derive(Serialize)]
struct Curve {
    label: String,
    limit: f64,
    points: Vec<CurvePoint>,
}

/// Empirical densities of the quadrant set {xy >= 0} under two norms, at a
/// ladder of radii: the non-periodic counterexample where the limit depends
/// on the norm (1/2 under sup, 1/4 under max(|x|, |x+y|)).
fn counterexample_curves_impl(rmax: i64, steps: usize) -> Result<String, String> {
    if rmax < 10 || !(2..=64).contains(&steps) {
        return Err("need rmax >= 10 and 2..=64 steps".into());
    }
    let pred = |x: &[i64]| x[0] * x[1] >= 0;
    let norms = [
        ("sup norm", Norm::Sup, 0.5),
        (
            "max(|x|, |x+y|)",
            Norm::ShearedSup(vec![vec![1, 0], vec![1, 1]]),
            0.25,
        ),
    ];
    let mut curves = Vec::new();
    for (label, norm, limit) in norms {
        let mut points = Vec::new();
        for i in 1..=steps {
            let r = (rmax * i as i64) / steps as i64;
            if r < 2 {
                continue;
            }
            let s = density_empirical(2, pred, &norm, r, WASM_BUDGET).map_err(|e| e.to_string())?;
            points.push(CurvePoint {
                radius: r,
                value: rational_decimal(&s.value),
                numerator: s.value.numer().to_string(),
                denominator: s.value.denom().to_string(),
            });
        }
        curves.push(Curve {
            label: label.to_string(),
            limit,
            points,
        });
    }
    serde_json::to_string(&curves).map_err(|e| e.to_string())
}

/// Dominant-cone empirical density of gl_n at a modulus, over a ladder of
/// radii, against the exact fundamental-domain value it converges to.
fn cone_curve_impl(n: usize, m: u64, rmax: i64, steps: usize) -> Result<String, String> {
    if !(2..=4).contains(&n) {
        return Err("cone demo supports gl_2 .. gl_4".into());
    }
    if rmax < 10 || !(2..=64).contains(&steps) {
        return Err("need rmax >= 10 and 2..=64 steps".into());
    }
    let id = AlgebraId::new(Family::Gl, n).map_err(|e| e.to_string())?;
    let variant = VariantSpec::algebra(id).map_err(|e| e.to_string())?;
    let exact = density_of_variant(&variant, m, &options()).map_err(|e| e.to_string())?;
    let datum = build_root_datum(id).map_err(|e| e.to_string())?;
    let poly = dimension_polynomial(&datum);
    let pred = {
        let poly = poly.clone();
        move |x: &[i64]| !poly.value_divisible_by(x, m).expect("integer-valued")
    };
    let dominance = {
        let datum = datum.clone();
        move |x: &[i64]| {
            let lam2: Vec<i64> = x.iter().map(|&v| 2 * v).collect();
            datum.is_dominant2(&lam2)
        }
    };
    let mut points = Vec::new();
    for i in 1..=steps {
        let r = (rmax * i as i64) / steps as i64;
        if r < 2 {
            continue;
        }
        let s = density_empirical_cone(n, &pred, &dominance, &Norm::Sup, r, WASM_BUDGET)
            .map_err(|e| e.to_string())?;
        points.push(CurvePoint {
            radius: r,
            value: rational_decimal(&s.value),
            numerator: s.value.numer().to_string(),
            denominator: s.value.denom().to_string(),
        });
    }
    let curve = Curve {
        label: format!(
            "gl{n}, m={m}: dominant-cone density (limit {}/{})",
            exact.value.numer(),
            exact.value.denom()
        ),
        limit: rational_decimal(&exact.value),
        points,
    };
    serde_json::to_string(&[curve]).map_err(|e| e.to_string())
}

/// Period data shown next to a density result.
fn periods_json_impl(spec: &str, m: u64) -> Result<String, String> {
    let variant = VariantSpec::parse(spec).map_err(|e| e.to_string())?;
    let datum = build_root_datum(variant.algebra).map_err(|e| e.to_string())?;
    let poly = repdens::roots::weight_polynomial(&datum, &variant.map, true);
    let f = repdens::numeric::factorize(m).map_err(|e| e.to_string())?;
    #[derive(Serialize)]
    struct P {
        modulus: u64,
        period: u64,
        degree: usize,
    }
    let out: Vec<P> = f
        .factors()
        .iter()
        .map(|&(p, s)| {
            let cert = period_prime_power(&poly, p, s);
            P {
                modulus: cert.modulus(),
                period: cert.period,
                degree: poly.deg_bullet(),
            }
        })
        .collect();
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn density_json(spec: &str, m: u32) -> Result<String, JsError> {
    density_json_impl(spec, m as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn table_json(moduli: &str, nmax: u32) -> Result<String, JsError> {
    table_json_impl(moduli, nmax as usize).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn counterexample_curves(rmax: u32, steps: u32) -> Result<String, JsError> {
    counterexample_curves_impl(rmax as i64, steps as usize).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn cone_curve(n: u32, m: u32, rmax: u32, steps: u32) -> Result<String, JsError> {
    cone_curve_impl(n as usize, m as u64, rmax as i64, steps as usize)
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn periods_json(spec: &str, m: u32) -> Result<String, JsError> {
    periods_json_impl(spec, m as u64).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_json_gl3() {
        let s = density_json_impl("gl:3", 2).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["numerator"], "3");
        assert_eq!(v["denominator"], "8");
        assert_eq!(v["per_prime_power"][0]["period"], 4);
    }

    #[test]
    fn density_json_rejects_bad_variant() {
        assert!(density_json_impl("so:4", 2).is_err());
    }

    #[test]
    fn table_json_shape() {
        let s = table_json_impl("2,3", 4).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 2);
        assert_eq!(v[0].as_array().unwrap().len(), 4);
        assert_eq!(v[1][2]["numerator"], "2");
        assert_eq!(v[1][2]["denominator"], "9");
    }

    #[test]
    fn counterexample_curves_split_by_norm() {
        let s = counterexample_curves_impl(200, 4).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        let last0 = v[0]["points"].as_array().unwrap().last().unwrap()["value"]
            .as_f64()
            .unwrap();
        let last1 = v[1]["points"].as_array().unwrap().last().unwrap()["value"]
            .as_f64()
            .unwrap();
        assert!((last0 - 0.5).abs() < 0.02);
        assert!((last1 - 0.25).abs() < 0.02);
    }

    #[test]
    fn cone_curve_approaches_exact() {
        let s = cone_curve_impl(3, 2, 200, 4).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v[0]["limit"], 0.375);
        let last = v[0]["points"].as_array().unwrap().last().unwrap()["value"]
            .as_f64()
            .unwrap();
        assert!((last - 0.375).abs() < 0.05);
    }

    #[test]
    fn periods_json_reports_certificates() {
        let s = periods_json_impl("gl:3", 6).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v[0]["modulus"], 2);
        assert_eq!(v[0]["period"], 4);
        assert_eq!(v[1]["modulus"], 3);
        assert_eq!(v[1]["period"], 3);
    }
}
