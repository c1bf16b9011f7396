//! Densities of periodic subsets of lattices.
//!
//! The primary computation is [`density_fundamental`]: a periodic set's
//! density equals the fraction of members in one fundamental domain
//! `{0, .., period-1}^rank`, independent of norm, period and basis. The
//! empirical counters ([`density_empirical`], [`density_empirical_cone`])
//! enumerate actual norm balls and exist purely as verification oracles for
//! that theorem (and to exhibit its failure on non-periodic sets).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::par;

/// An injective affine map from an enumeration lattice Z^k into standard
/// weight coordinates. Standard coordinates are stored doubled so that the
/// half-integer spin weights of the B and D families stay integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeMap {
    target_dim: usize,
    /// Images of the source basis vectors, in doubled target coordinates.
    cols2: Vec<Vec<i64>>,
    /// Doubled target offset.
    offset2: Vec<i64>,
}

impl LatticeMap {
    pub fn new(target_dim: usize, cols2: Vec<Vec<i64>>, offset2: Vec<i64>) -> Self {
        assert_eq!(offset2.len(), target_dim);
        for c in &cols2 {
            assert_eq!(c.len(), target_dim);
        }
        LatticeMap {
            target_dim,
            cols2,
            offset2,
        }
    }

    /// The identity embedding of Z^n in doubled coordinates.
    pub fn identity(n: usize) -> Self {
        let cols2 = (0..n)
            .map(|i| {
                let mut c = vec![0i64; n];
                c[i] = 2;
                c
            })
            .collect();
        LatticeMap::new(n, cols2, vec![0; n])
    }

    pub fn source_rank(&self) -> usize {
        self.cols2.len()
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn cols2(&self) -> &[Vec<i64>] {
        &self.cols2
    }

    pub fn offset2(&self) -> &[i64] {
        &self.offset2
    }

    /// Image of `x`, in doubled target coordinates.
    pub fn apply2(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.source_rank());
        let mut out = self.offset2.clone();
        for (xi, col) in x.iter().zip(&self.cols2) {
            for (o, c) in out.iter_mut().zip(col) {
                *o += xi * c;
            }
        }
        out
    }

    /// Compose with an integer map into this map's source: the result sends
    /// `y` to `self(inner_cols * y + inner_offset)`.
    pub fn compose(&self, inner_cols: &[Vec<i64>], inner_offset: &[i64]) -> LatticeMap {
        let k = self.source_rank();
        assert_eq!(inner_offset.len(), k);
        for c in inner_cols {
            assert_eq!(c.len(), k);
        }
        let cols2 = inner_cols
            .iter()
            .map(|ic| {
                let mut col = vec![0i64; self.target_dim];
                for (w, c) in ic.iter().zip(&self.cols2) {
                    for (o, v) in col.iter_mut().zip(c) {
                        *o += w * v;
                    }
                }
                col
            })
            .collect();
        let offset2 = self.apply2(inner_offset);
        LatticeMap::new(self.target_dim, cols2, offset2)
    }

    /// Whether the columns are linearly independent over Q.
    pub fn is_injective(&self) -> bool {
        // rank via fraction-free elimination on the transposed column matrix
        let mut m: Vec<Vec<BigInt>> = self
            .cols2
            .iter()
            .map(|c| c.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let rows = m.len();
        let cols = self.target_dim;
        let mut rank = 0usize;
        let mut col = 0usize;
        while rank < rows && col < cols {
            if let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) {
                m.swap(rank, p);
                for i in (rank + 1)..rows {
                    if m[i][col].is_zero() {
                        continue;
                    }
                    let a = m[rank][col].clone();
                    let b = m[i][col].clone();
                    for j in col..cols {
                        let t = &m[i][j] * &a - &m[rank][j] * &b;
                        m[i][j] = t;
                    }
                }
                rank += 1;
            }
            col += 1;
        }
        rank == rows
    }
}

/// A periodic subset of Z^rank given by its membership predicate and a
/// period. The predicate must be pure; parallel enumeration calls it from
/// multiple workers.
pub struct PeriodicSetSpec<'a> {
    pub rank: usize,
    pub period: u64,
    pub predicate: Box<dyn Fn(&[i64]) -> bool + Sync + 'a>,
}

impl<'a> PeriodicSetSpec<'a> {
    pub fn new(
        rank: usize,
        period: u64,
        predicate: impl Fn(&[i64]) -> bool + Sync + 'a,
    ) -> Self {
        assert!(period >= 1);
        PeriodicSetSpec {
            rank,
            period,
            predicate: Box::new(predicate),
        }
    }

    /// Spot-verify the declared periodicity on pseudo-random points.
    pub fn spot_check_periodicity(&self, samples: usize) -> bool {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state
        };
        for _ in 0..samples {
            let x: Vec<i64> = (0..self.rank)
                .map(|_| (next() % 2001) as i64 - 1000)
                .collect();
            if self.rank == 0 {
                return true;
            }
            let j = (next() as usize) % self.rank;
            let mut y = x.clone();
            y[j] += self.period as i64;
            if (self.predicate)(&x) != (self.predicate)(&y) {
                return false;
            }
        }
        true
    }
}

/// A sup-type gauge on R^rank: either the plain sup norm or the sup norm
/// after an invertible integer change of coordinates. Balls for these norms
/// are boxes or sheared boxes and can be enumerated exactly; by
/// norm-independence of periodic densities nothing more general is needed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Norm {
    Sup,
    /// `v -> max_i |(T v)_i|` for a nonsingular integer matrix `T` (rows).
    ShearedSup(Vec<Vec<i64>>),
}

impl Norm {
    pub fn value(&self, v: &[i64]) -> i64 {
        match self {
            Norm::Sup => v.iter().map(|x| x.abs()).max().unwrap_or(0),
            Norm::ShearedSup(t) => t
                .iter()
                .map(|row| row.iter().zip(v).map(|(&a, &b)| a * b).sum::<i64>().abs())
                .max()
                .unwrap_or(0),
        }
    }

    /// Inversion data for enumerating the ball `N(v) < r` as the image of
    /// the plain box `|w_i| <= r-1` under `v = adj(T) w / det(T)`; identity
    /// for the sup norm.
    fn inversion(&self, rank: usize) -> Result<(Vec<Vec<i64>>, i64)> {
        match self {
            Norm::Sup => {
                let mut adj = vec![vec![0i64; rank]; rank];
                for (i, row) in adj.iter_mut().enumerate() {
                    row[i] = 1;
                }
                Ok((adj, 1))
            }
            Norm::ShearedSup(t) => {
                if t.len() != rank || t.iter().any(|row| row.len() != rank) {
                    return Err(Error::InvalidInput(
                        "sheared norm matrix must be square of the lattice rank".into(),
                    ));
                }
                let tb: Vec<Vec<BigInt>> = t
                    .iter()
                    .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
                    .collect();
                let det = bareiss_determinant(tb.clone());
                if det.is_zero() {
                    return Err(Error::SingularMatrix);
                }
                let det = det
                    .to_i64()
                    .ok_or_else(|| Error::InvalidInput("norm determinant overflows".into()))?;
                let mut adj = vec![vec![0i64; rank]; rank];
                for (i, row) in adj.iter_mut().enumerate() {
                    for (j, e) in row.iter_mut().enumerate() {
                        *e = cofactor(&tb, j, i)
                            .to_i64()
                            .ok_or_else(|| Error::InvalidInput("adjugate overflows".into()))?;
                    }
                }
                Ok((adj, det))
            }
        }
    }
}

fn cofactor(m: &[Vec<BigInt>], row: usize, col: usize) -> BigInt {
    let n = m.len();
    let minor: Vec<Vec<BigInt>> = (0..n)
        .filter(|&i| i != row)
        .map(|i| {
            (0..n)
                .filter(|&j| j != col)
                .map(|j| m[i][j].clone())
                .collect()
        })
        .collect();
    let sign = if (row + col).is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    sign * bareiss_determinant(minor)
}

/// Fraction-free determinant (Bareiss).
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    for row in &m {
        assert_eq!(row.len(), n, "determinant needs a square matrix");
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = t;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Smith normal form invariant factors a_1 | a_2 | ... | a_n (nonnegative)
/// of an integer matrix.
pub fn smith_invariant_factors(mat: &[Vec<i64>]) -> Vec<BigUint> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut m: Vec<Vec<BigInt>> = mat
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let n = rows.min(cols);
    let mut factors = Vec::with_capacity(n);

    for t in 0..n {
        // find a nonzero pivot of minimal absolute value in the trailing block
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero()
                        && best
                            .map(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                // trailing block is zero
                factors.push(BigUint::zero());
                break;
            };
            m.swap(t, bi);
            for row in m.iter_mut() {
                row.swap(t, bj);
            }
            // clear row and column t by Euclidean steps
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = div_round(&m[i][t], &m[t][t]);
                for j in t..cols {
                    let v = &m[i][j] - &q * &m[t][j];
                    m[i][j] = v;
                }
                if !m[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = div_round(&m[t][j], &m[t][t]);
                for row in m.iter_mut().take(rows).skip(t) {
                    let v = &row[j] - &q * &row[t];
                    row[j] = v;
                }
                if !m[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // enforce divisibility of the trailing block by the pivot
            let mut fixed = true;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&m[i][j] % &m[t][t]).is_zero() {
                        // fold row i into row t and restart the pivot step
                        for jj in t..cols {
                            let v = &m[t][jj] + &m[i][jj];
                            m[t][jj] = v;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                factors.push(m[t][t].abs().to_biguint().expect("nonnegative"));
                break;
            }
        }
    }
    factors
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // round-to-nearest quotient keeps remainders small
    let two = BigInt::from(2);
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if &r.abs() * &two > b.abs() {
        if (r.sign() == b.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Index of the sublattice spanned by the columns of a square integer
/// matrix: |determinant|, equal to the product of the invariant factors.
/// Also returns the invariant factors a_1 | ... | a_n.
pub fn sublattice_index(mat: &[Vec<i64>]) -> Result<(BigUint, Vec<BigUint>)> {
    let n = mat.len();
    if mat.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("sublattice matrix must be square".into()));
    }
    let factors = smith_invariant_factors(mat);
    if factors.iter().any(|f| f.is_zero()) {
        return Err(Error::SingularMatrix);
    }
    let det = bareiss_determinant(
        mat.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect(),
    );
    let index = det.abs().to_biguint().expect("nonnegative");
    debug_assert_eq!(
        index,
        factors.iter().fold(BigUint::one(), |a, b| a * b),
        "determinant must equal the product of invariant factors"
    );
    Ok((index, factors))
}

fn check_budget(points: u128, budget: u64) -> Result<()> {
    if points > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: points,
            budget,
        });
    }
    Ok(())
}

/// Exact density of a periodic set: members of `{0,..,period-1}^rank` over
/// `period^rank`, as a reduced fraction.
pub fn density_fundamental(set: &PeriodicSetSpec, budget: u64) -> Result<Rational> {
    let w = set.period;
    let total = (w as u128)
        .checked_pow(set.rank as u32)
        .ok_or(Error::BudgetExceeded {
            required: u128::MAX,
            budget,
        })?;
    check_budget(total, budget)?;
    if set.rank == 0 {
        let num = if (set.predicate)(&[]) { 1 } else { 0 };
        return Ok(Rational::new(BigInt::from(num), BigInt::one()));
    }
    let count: u64 = par::map_reduce(
        (0..w).collect::<Vec<_>>(),
        |&x0| {
            let mut x = vec![0i64; set.rank];
            x[0] = x0 as i64;
            let mut cnt = 0u64;
            for_each_tail(&mut x, 1, w, &mut |pt| {
                if (set.predicate)(pt) {
                    cnt += 1;
                }
            });
            cnt
        },
        || 0,
        |a, b| a + b,
    );
    Ok(Rational::new(BigInt::from(count), BigInt::from(total)))
}

/// Drive `f` over all points of the box with coordinates `depth..` ranging
/// in `0..w`, mutating `x` in place.
fn for_each_tail(x: &mut Vec<i64>, depth: usize, w: u64, f: &mut impl FnMut(&[i64])) {
    if depth == x.len() {
        f(x);
        return;
    }
    for v in 0..w {
        x[depth] = v as i64;
        for_each_tail(x, depth + 1, w, f);
    }
}

/// One empirical density measurement: counts within an actual norm ball.
#[derive(Debug, Clone)]
pub struct EmpiricalSample {
    pub value: Rational,
    pub members: u64,
    pub lattice_points: u64,
    pub radius: i64,
}

/// `#{a : pred(a), N(a) < r} / #{v in Z^rank : N(v) < r}` by direct
/// enumeration. Ball membership is strict (`N(v) < r`).
pub fn density_empirical(
    rank: usize,
    predicate: impl Fn(&[i64]) -> bool + Sync,
    norm: &Norm,
    radius: i64,
    budget: u64,
) -> Result<EmpiricalSample> {
    density_empirical_filtered(rank, predicate, |_| true, norm, radius, budget)
}

/// Cone variant: both counts restricted to a dominance predicate.
pub fn density_empirical_cone(
    rank: usize,
    predicate: impl Fn(&[i64]) -> bool + Sync,
    dominance: impl Fn(&[i64]) -> bool + Sync,
    norm: &Norm,
    radius: i64,
    budget: u64,
) -> Result<EmpiricalSample> {
    density_empirical_filtered(rank, predicate, dominance, norm, radius, budget)
}

fn density_empirical_filtered(
    rank: usize,
    predicate: impl Fn(&[i64]) -> bool + Sync,
    filter: impl Fn(&[i64]) -> bool + Sync,
    norm: &Norm,
    radius: i64,
    budget: u64,
) -> Result<EmpiricalSample> {
    if radius <= 0 {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    if rank == 0 {
        return Err(Error::InvalidInput("empirical density needs rank >= 1".into()));
    }
    // Lattice points v with N(v) < r correspond to integral solutions of
    // v = adj(T) w / det(T) as w ranges over the plain box |w_i| <= r-1,
    // which is enumerated exactly (no over-covering).
    let (adj, det) = norm.inversion(rank)?;
    let b = radius - 1;
    let points = ((2 * b + 1) as u128).pow(rank as u32);
    check_budget(points, budget)?;
    let (members, lattice_points) = par::map_reduce(
        (-b..=b).collect::<Vec<_>>(),
        |&w0| {
            let mut w = vec![0i64; rank];
            w[0] = w0;
            let mut v = vec![0i64; rank];
            let mut inside = 0u64;
            let mut hits = 0u64;
            let bounds = vec![b; rank];
            for_each_signed_tail(&mut w, 1, &bounds, &mut |pt| {
                // invert; skip w that are not images of lattice points
                for (vi, row) in v.iter_mut().zip(&adj) {
                    let s: i64 = row.iter().zip(pt).map(|(&a, &wj)| a * wj).sum();
                    if s % det != 0 {
                        return;
                    }
                    *vi = s / det;
                }
                if filter(&v) {
                    inside += 1;
                    if predicate(&v) {
                        hits += 1;
                    }
                }
            });
            (hits, inside)
        },
        || (0, 0),
        |a, b| (a.0 + b.0, a.1 + b.1),
    );
    if lattice_points == 0 {
        return Err(Error::InvalidInput(
            "no lattice points in the ball; increase the radius".into(),
        ));
    }
    Ok(EmpiricalSample {
        value: Rational::new(BigInt::from(members), BigInt::from(lattice_points)),
        members,
        lattice_points,
        radius,
    })
}

fn for_each_signed_tail(
    x: &mut Vec<i64>,
    depth: usize,
    bounds: &[i64],
    f: &mut impl FnMut(&[i64]),
) {
    if depth == x.len() {
        f(x);
        return;
    }
    for v in -bounds[depth]..=bounds[depth] {
        x[depth] = v;
        for_each_signed_tail(x, depth + 1, bounds, f);
    }
}

/// Exact density of `{x in L' : x in A}` inside the sublattice `L'` spanned
/// by integer columns `sub_cols`, computed by pulling the predicate back and
/// reusing the period (translation by `period * (L'-basis vector)` lies in
/// `period * L`, so periodicity is preserved).
///
/// When `sub_cols` is square (finite index), the inequality
/// `density <= index * density(A | L)` is asserted.
pub fn density_restricted(
    set: &PeriodicSetSpec,
    sub_cols: &[Vec<i64>],
    budget: u64,
) -> Result<Rational> {
    for c in sub_cols {
        if c.len() != set.rank {
            return Err(Error::InvalidInput(
                "sublattice columns must live in the ambient rank".into(),
            ));
        }
    }
    let sub_rank = sub_cols.len();
    let pred = &set.predicate;
    let pulled = PeriodicSetSpec::new(sub_rank, set.period, move |y: &[i64]| {
        let mut x = vec![0i64; set.rank];
        for (yi, col) in y.iter().zip(sub_cols) {
            for (xs, c) in x.iter_mut().zip(col) {
                *xs += yi * c;
            }
        }
        pred(&x)
    });
    let restricted = density_fundamental(&pulled, budget)?;
    if sub_rank == set.rank {
        let (index, _) = sublattice_index(sub_cols)?;
        let ambient = density_fundamental(set, budget)?;
        let bound = ambient * Rational::new(BigInt::from(index), BigInt::one());
        assert!(
            restricted <= bound,
            "sublattice density exceeded index * ambient density"
        );
    }
    Ok(restricted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;

    const BUDGET: u64 = 100_000_000;

    #[test]
    fn fundamental_examples() {
        // x1 != x2 mod m over period m -> (m-1)/m
        for m in 2u64..8 {
            let set = PeriodicSetSpec::new(2, m, move |x: &[i64]| {
                (x[0] - x[1]).rem_euclid(m as i64) != 0
            });
            assert_eq!(
                density_fundamental(&set, BUDGET).unwrap(),
                rational(m as i64 - 1, m as i64)
            );
        }

        // always-true predicate
        let all = PeriodicSetSpec::new(3, 5, |_: &[i64]| true);
        assert_eq!(density_fundamental(&all, BUDGET).unwrap(), rational(1, 1));

        // 2 does not divide f3 = (x1-x2)(x1-x3)(x2-x3)/2, period 4 -> 3/8
        let f3 = PeriodicSetSpec::new(3, 4, |x: &[i64]| {
            let v = (x[0] - x[1]) * (x[0] - x[2]) * (x[1] - x[2]);
            assert_eq!(v % 2, 0, "the Vandermonde product is even");
            (v / 2) % 2 != 0
        });
        assert_eq!(density_fundamental(&f3, BUDGET).unwrap(), rational(3, 8));
    }

    #[test]
    fn fundamental_translation_and_period_doubling() {
        let base = |x: &[i64]| (2 * x[0] + x[1]).rem_euclid(6) == 1;
        let set = PeriodicSetSpec::new(2, 6, base);
        let d = density_fundamental(&set, BUDGET).unwrap();
        // translate by arbitrary vectors: density unchanged
        for shift in [[1i64, 0], [0, 5], [3, 2], [-7, 11]] {
            let t = PeriodicSetSpec::new(2, 6, move |x: &[i64]| {
                base(&[x[0] + shift[0], x[1] + shift[1]])
            });
            assert_eq!(density_fundamental(&t, BUDGET).unwrap(), d);
        }
        // doubled period: same density
        let dd = PeriodicSetSpec::new(2, 12, base);
        assert_eq!(density_fundamental(&dd, BUDGET).unwrap(), d);
    }

    #[test]
    fn budget_is_enforced() {
        let set = PeriodicSetSpec::new(8, 100, |_: &[i64]| true);
        match density_fundamental(&set, 1000) {
            Err(Error::BudgetExceeded { required, budget }) => {
                assert_eq!(required, 100u128.pow(8));
                assert_eq!(budget, 1000);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn empirical_counterexample_norm_dependence() {
        // A = {xy >= 0}: density 1/2 under sup norm, 1/4 under max(|x|,|x+y|)
        let pred = |x: &[i64]| x[0] * x[1] >= 0;
        let n0 = Norm::Sup;
        let n1 = Norm::ShearedSup(vec![vec![1, 0], vec![1, 1]]);
        let s0 = density_empirical(2, pred, &n0, 200, BUDGET).unwrap();
        let s1 = density_empirical(2, pred, &n1, 200, BUDGET).unwrap();
        let gap0 = (s0.value - rational(1, 2)).abs();
        let gap1 = (s1.value - rational(1, 4)).abs();
        assert!(gap0 < rational(1, 100), "sup-norm density should approach 1/2");
        assert!(gap1 < rational(1, 100), "sheared density should approach 1/4");
    }

    #[test]
    fn empirical_always_true_is_exactly_one() {
        for norm in [
            Norm::Sup,
            Norm::ShearedSup(vec![vec![1, 0], vec![1, 1]]),
        ] {
            let s = density_empirical(2, |_: &[i64]| true, &norm, 30, BUDGET).unwrap();
            assert_eq!(s.value, rational(1, 1));
        }
    }

    #[test]
    fn cone_always_true_is_exactly_one() {
        let s = density_empirical_cone(
            2,
            |_: &[i64]| true,
            |x: &[i64]| x[0] >= x[1] && x[1] >= 0,
            &Norm::Sup,
            40,
            BUDGET,
        )
        .unwrap();
        assert_eq!(s.value, rational(1, 1));
    }

    #[test]
    fn sheared_norm_is_a_norm() {
        let n1 = Norm::ShearedSup(vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(n1.value(&[0, 0]), 0);
        for v in [[1i64, -3], [2, 5], [-4, 0]] {
            assert!(n1.value(&v) > 0);
            assert_eq!(n1.value(&v.map(|c| -3 * c)), 3 * n1.value(&v));
            for w in [[2i64, 1], [-1, -1]] {
                let sum = [v[0] + w[0], v[1] + w[1]];
                assert!(n1.value(&sum) <= n1.value(&v) + n1.value(&w));
            }
        }
    }

    #[test]
    fn smith_and_index_examples() {
        // identity
        let (idx, f) = sublattice_index(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(idx, BigUint::from(1u32));
        assert_eq!(f, vec![BigUint::from(1u32), BigUint::from(1u32)]);

        // 2I in rank 2
        let (idx, f) = sublattice_index(&[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(idx, BigUint::from(4u32));
        assert_eq!(f, vec![BigUint::from(2u32), BigUint::from(2u32)]);

        // root lattice of sl_3 in the weight lattice: Cartan matrix, index 3
        let (idx, f) = sublattice_index(&[vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(idx, BigUint::from(3u32));
        assert_eq!(f, vec![BigUint::from(1u32), BigUint::from(3u32)]);

        // singular matrix rejected
        assert!(matches!(
            sublattice_index(&[vec![1, 2], vec![2, 4]]),
            Err(Error::SingularMatrix)
        ));

        // divisibility chain on a denser example
        let f = smith_invariant_factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        for w in f.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "invariant factors must divide");
        }
    }

    #[test]
    fn restricted_density_examples() {
        // even integers inside 3Z: brute force over residues mod 6 gives 1/2
        let even = PeriodicSetSpec::new(1, 2, |x: &[i64]| x[0] % 2 == 0);
        let d = density_restricted(&even, &[vec![3]], BUDGET).unwrap();
        assert_eq!(d, rational(1, 2));

        // identity sublattice: equals density_fundamental
        let set = PeriodicSetSpec::new(2, 4, |x: &[i64]| (x[0] + 2 * x[1]).rem_euclid(4) == 0);
        let whole = density_fundamental(&set, BUDGET).unwrap();
        let same = density_restricted(&set, &[vec![1, 0], vec![0, 1]], BUDGET).unwrap();
        assert_eq!(whole, same);

        // sublattice itself as subset: density 1/index
        let sub = PeriodicSetSpec::new(2, 2, |x: &[i64]| x[0] % 2 == 0 && x[1] % 2 == 0);
        let d = density_fundamental(&sub, BUDGET).unwrap();
        assert_eq!(d, rational(1, 4));
    }

    #[test]
    fn lattice_map_roundtrip() {
        let id = LatticeMap::identity(3);
        assert_eq!(id.apply2(&[1, -2, 5]), vec![2, -4, 10]);
        assert!(id.is_injective());

        // spin-type basis for rank 2: e1 and (1/2, 1/2)
        let m = LatticeMap::new(2, vec![vec![2, 0], vec![1, 1]], vec![0, 0]);
        assert!(m.is_injective());
        assert_eq!(m.apply2(&[3, 1]), vec![7, 1]); // 3*e1 + (1/2,1/2) = (7/2, 1/2)

        // composition with an inner integer map
        let inner = vec![vec![1, 1]]; // y -> (y, y)
        let c = m.compose(&inner, &[0, 0]);
        assert_eq!(c.source_rank(), 1);
        assert_eq!(c.apply2(&[2]), m.apply2(&[2, 2]));

        let degenerate = LatticeMap::new(2, vec![vec![2, 2], vec![1, 1]], vec![0, 0]);
        assert!(!degenerate.is_injective());
    }

    #[test]
    fn spot_check_periodicity_works() {
        let good = PeriodicSetSpec::new(2, 3, |x: &[i64]| (x[0] + x[1]).rem_euclid(3) == 0);
        assert!(good.spot_check_periodicity(200));
        let bad = PeriodicSetSpec::new(1, 2, |x: &[i64]| x[0] >= 0);
        assert!(!bad.spot_check_periodicity(200));
    }
}
