//! Cross-module property tests: randomized invariants that tie the fast
//! valuation path, the big-integer path, and the period machinery together.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use proptest::prelude::*;

use repdens::ivpoly::{eval_mod, period_prime_power, FactoredPolynomial, LinearForm};
use repdens::numeric::val;
use repdens::roots::{
    build_root_datum, dimension_polynomial, group_sublattice, orthogonal_embedding,
    selfdual_embedding, weight_polynomial, AlgebraId, Family, GroupId,
};
use repdens::verify;

prop_compose! {
    /// A random integer-valued polynomial: product of forms over denominator 1.
    fn small_poly(rank: usize)(
        forms in prop::collection::vec(
            (prop::collection::vec(-4i64..=4, rank), -6i64..=6),
            1..5,
        )
    ) -> FactoredPolynomial {
        FactoredPolynomial::new(
            rank,
            forms.into_iter().map(|(c, k)| LinearForm::new(c, k)).collect(),
            BigUint::one(),
        )
    }
}

proptest! {
    #[test]
    fn valuation_agrees_with_big_integer_route(
        poly in small_poly(3),
        x in prop::collection::vec(-60i64..=60, 3),
        pi in 0usize..3,
    ) {
        let p = [2u64, 3, 5][pi];
        let fast = poly.eval_valuation(&x, p);
        let slow = val(&poly.eval_exact(&x).unwrap(), p);
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn certified_periods_are_periods(
        poly in small_poly(2),
        x in prop::collection::vec(-40i64..=40, 2),
        j in 0usize..2,
        case in 0usize..4,
    ) {
        let (p, s) = [(2u64, 1u32), (3, 1), (2, 2), (5, 1)][case];
        let cert = period_prime_power(&poly, p, s);
        let q = cert.modulus();
        let mut y = x.clone();
        y[j] += cert.period as i64;
        prop_assert_eq!(eval_mod(&poly, &x, q).unwrap(), eval_mod(&poly, &y, q).unwrap());
    }

    #[test]
    fn integer_period_pullback(
        poly in small_poly(2),
        cols in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 2),
        x in prop::collection::vec(-20i64..=20, 2),
        j in 0usize..2,
    ) {
        // an m-period of f stays a period of f composed with any integer map
        let cert = period_prime_power(&poly, 2, 1);
        let pulled = poly.pullback(&cols, &[0, 0]);
        let mut y = x.clone();
        y[j] += cert.period as i64;
        prop_assert_eq!(
            eval_mod(&pulled, &x, 2).unwrap(),
            eval_mod(&pulled, &y, 2).unwrap()
        );
    }
}

/// Weyl polynomials are integer-valued on their whole enumeration lattice,
/// not just on dominant points, for every variant the engine can build.
#[test]
fn integrality_never_fails_on_lattice_points() {
    let mut maps = Vec::new();
    for n in 1..=5usize {
        let id = AlgebraId::new(Family::Gl, n).unwrap();
        maps.push((id, build_root_datum(id).unwrap().weight_basis.clone()));
    }
    for id in [
        AlgebraId::new(Family::Sl, 4).unwrap(),
        AlgebraId::new(Family::SoOdd, 3).unwrap(),
        AlgebraId::new(Family::Sp, 3).unwrap(),
        AlgebraId::new(Family::SoEven, 4).unwrap(),
    ] {
        maps.push((id, build_root_datum(id).unwrap().weight_basis.clone()));
    }
    for v in [
        selfdual_embedding(AlgebraId::new(Family::Sl, 4).unwrap()).unwrap(),
        selfdual_embedding(AlgebraId::new(Family::Sl, 5).unwrap()).unwrap(),
        selfdual_embedding(AlgebraId::new(Family::SoEven, 3).unwrap()).unwrap(),
        orthogonal_embedding(AlgebraId::new(Family::Sl, 6).unwrap()).unwrap(),
        group_sublattice(GroupId::ProjectiveGeneralLinear { n: 4 }).unwrap(),
        group_sublattice(GroupId::SpecialOrthogonal { size: 7 }).unwrap(),
    ] {
        maps.push((v.algebra, v.map.clone()));
    }

    let mut state = 42u64;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) % 41) as i64 - 20
    };
    for (id, map) in maps {
        let datum = build_root_datum(id).unwrap();
        let poly = weight_polynomial(&datum, &map, true);
        for _ in 0..500 {
            let x: Vec<i64> = (0..poly.rank()).map(|_| next()).collect();
            poly.eval_exact(&x)
                .unwrap_or_else(|e| panic!("integrality violated for {id}: {e}"));
        }
    }
}

/// Degrees of dominant weights are positive; the polynomial vanishes only
/// off the shifted-dominant region.
#[test]
fn dominant_degrees_are_positive() {
    for id in [
        AlgebraId::new(Family::Gl, 4).unwrap(),
        AlgebraId::new(Family::SoOdd, 2).unwrap(),
        AlgebraId::new(Family::Sp, 2).unwrap(),
        AlgebraId::new(Family::SoEven, 3).unwrap(),
    ] {
        let datum = build_root_datum(id).unwrap();
        let poly = dimension_polynomial(&datum);
        let k = poly.rank();
        let mut state = 7u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 33) % 6) as i64
        };
        let mut seen = 0;
        while seen < 200 {
            let x: Vec<i64> = (0..k).map(|_| next()).collect();
            let lam2 = datum.weight_basis.apply2(&x);
            if !datum.is_dominant2(&lam2) {
                continue;
            }
            seen += 1;
            let v = poly.eval_exact(&x).unwrap();
            assert!(v >= BigInt::one(), "{id}: degree {v} at dominant {x:?}");
        }
    }
}

/// Norm independence as a quantified suite (also exposed through `verify`).
#[test]
fn norm_independence_suite() {
    let report = verify::verify_norms(100_000_000);
    assert!(report.passed(), "{:?}", report.failures);
}
