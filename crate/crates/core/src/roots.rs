//! Concrete root data for the classical families gl_n, sl_n, so_{2n+1},
//! sp_{2n}, so_{2n}: positive coroots, rho, the longest Weyl element, weight
//! lattice bases, dominance, and construction of the factored dimension
//! polynomial in enumeration coordinates.
//!
//! Standard coordinates are stored doubled (as 2*lambda) so the half-integer
//! spin weights of the B and D families stay exact integers; coroot pairings
//! divide the 2 back out and always produce genuine integers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ivpoly::{FactoredPolynomial, LinearForm};
use crate::lattice::{bareiss_determinant, LatticeMap};

/// The five supported families, in the paper's matrix-size convention:
/// gl_n, sl_n, so_{2n+1}, sp_{2n}, so_{2n}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Gl,
    Sl,
    SoOdd,
    Sp,
    SoEven,
}

/// A classical Lie algebra: family plus the rank parameter `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgebraId {
    pub family: Family,
    pub n: usize,
}

impl AlgebraId {
    /// Validated constructor. so_2 (abelian) and so_4 (not simple) are
    /// rejected, as is sl_1 (trivial).
    pub fn new(family: Family, n: usize) -> Result<Self> {
        let ok = match family {
            Family::Gl => n >= 1,
            Family::Sl => n >= 2,
            Family::SoOdd => n >= 1,
            Family::Sp => n >= 1,
            Family::SoEven => n >= 3,
        };
        if !ok {
            return Err(Error::InvalidInput(format!(
                "unsupported rank {n} for family {family:?}"
            )));
        }
        Ok(AlgebraId { family, n })
    }

    /// Matrix size of the defining representation (the subscript in the
    /// algebra's name): n, n, 2n+1, 2n, 2n.
    pub fn matrix_size(&self) -> usize {
        match self.family {
            Family::Gl | Family::Sl => self.n,
            Family::SoOdd => 2 * self.n + 1,
            Family::Sp | Family::SoEven => 2 * self.n,
        }
    }

    /// Rank of the weight lattice used for enumeration.
    pub fn lattice_rank(&self) -> usize {
        match self.family {
            Family::Gl => self.n,
            Family::Sl => self.n - 1,
            Family::SoOdd | Family::Sp | Family::SoEven => self.n,
        }
    }

    /// Dimension of the Lie algebra.
    pub fn dim(&self) -> usize {
        let n = self.n;
        match self.family {
            Family::Gl => n * n,
            Family::Sl => n * n - 1,
            Family::SoOdd | Family::Sp => 2 * n * n + n,
            Family::SoEven => 2 * n * n - n,
        }
    }
}

impl std::fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let prefix = match self.family {
            Family::Gl => "gl",
            Family::Sl => "sl",
            Family::SoOdd | Family::SoEven => "so",
            Family::Sp => "sp",
        };
        write!(f, "{}{}", prefix, self.matrix_size())
    }
}

/// A signed permutation of standard coordinates:
/// `(w . v)_i = signs[i] * v[perm[i]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| s as i64 * v[p])
            .collect()
    }

    pub fn negation(n: usize) -> Self {
        SignedPermutation {
            perm: (0..n).collect(),
            signs: vec![-1; n],
        }
    }
}

/// Root datum of one algebra: everything the density engine needs.
#[derive(Debug, Clone)]
pub struct RootDatum {
    pub id: AlgebraId,
    /// Standard-coordinate dimension.
    pub dim: usize,
    /// Positive coroots, integral in standard coordinates.
    pub pos_coroots: Vec<Vec<i64>>,
    /// rho (half-sum convention of each family), doubled.
    pub rho2: Vec<i64>,
    /// 2 rho-check = sum of the positive coroots.
    pub two_rho_check: Vec<i64>,
    /// Longest Weyl group element, acting on standard coordinates.
    pub w0: SignedPermutation,
    /// Basis of the weight lattice as a map from Z^rank into (doubled)
    /// standard coordinates.
    pub weight_basis: LatticeMap,
}

impl RootDatum {
    /// Integer pairing of a (doubled) standard-coordinate vector against a
    /// coroot.
    pub fn pairing2(v2: &[i64], coroot: &[i64]) -> i64 {
        let dot: i64 = v2.iter().zip(coroot).map(|(&a, &b)| a * b).sum();
        debug_assert!(dot % 2 == 0, "pairing of a weight with a coroot is integral");
        dot / 2
    }

    /// Whether the (doubled) weight is dominant for this family.
    pub fn is_dominant2(&self, lam2: &[i64]) -> bool {
        let n = self.dim;
        let decreasing = (0..n.saturating_sub(1)).all(|i| lam2[i] >= lam2[i + 1]);
        match self.id.family {
            Family::Gl | Family::SoOdd | Family::Sp => decreasing && lam2[n - 1] >= 0,
            Family::Sl => decreasing,
            // lambda_1 >= .. >= lambda_{n-1} >= |lambda_n|
            Family::SoEven => {
                (0..n - 2).all(|i| lam2[i] >= lam2[i + 1]) && lam2[n - 2] >= lam2[n - 1].abs()
            }
        }
    }

    /// Parity (false = even, true = odd) of the pairing against 2 rho-check.
    pub fn orthogonal_parity_odd2(&self, lam2: &[i64]) -> bool {
        Self::pairing2(lam2, &self.two_rho_check).rem_euclid(2) == 1
    }
}

fn unit(dim: usize, i: usize, scale: i64) -> Vec<i64> {
    let mut v = vec![0i64; dim];
    v[i] = scale;
    v
}

/// Weight-lattice basis used by the B and D families: e_1, .., e_{n-1} plus
/// the spin vector (1/2, .., 1/2), in doubled coordinates.
fn spin_basis(n: usize) -> LatticeMap {
    let mut cols = Vec::with_capacity(n);
    for i in 0..n - 1 {
        cols.push(unit(n, i, 2));
    }
    cols.push(vec![1; n]);
    LatticeMap::new(n, cols, vec![0; n])
}

/// Build the root datum for an algebra.
pub fn build_root_datum(id: AlgebraId) -> Result<RootDatum> {
    AlgebraId::new(id.family, id.n)?; // re-validate
    let n = id.n;
    let mut coroots: Vec<Vec<i64>> = Vec::new();
    let (dim, rho2, w0, weight_basis) = match id.family {
        Family::Gl | Family::Sl => {
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut c = vec![0i64; n];
                    c[i] = 1;
                    c[j] = -1;
                    coroots.push(c);
                }
            }
            // rho = (n-1, n-2, .., 0)
            let rho2: Vec<i64> = (0..n).map(|i| 2 * (n - 1 - i) as i64).collect();
            let w0 = SignedPermutation {
                perm: (0..n).rev().collect(),
                signs: vec![1; n],
            };
            let basis = if id.family == Family::Gl {
                LatticeMap::identity(n)
            } else {
                // the section lambda_n = 0 of the quotient by the diagonal:
                // basis vectors e_1 + .. + e_i, i = 1 .. n-1, so that the
                // i-th coordinate is the pairing with the i-th simple coroot
                let cols = (1..n)
                    .map(|i| {
                        let mut c = vec![0i64; n];
                        for t in c.iter_mut().take(i) {
                            *t = 2;
                        }
                        c
                    })
                    .collect();
                LatticeMap::new(n, cols, vec![0; n])
            };
            (n, rho2, w0, basis)
        }
        Family::SoOdd => {
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut c = vec![0i64; n];
                    c[i] = 1;
                    c[j] = -1;
                    coroots.push(c.clone());
                    c[j] = 1;
                    coroots.push(c);
                }
            }
            for i in 0..n {
                coroots.push(unit(n, i, 2)); // (e_i)-check = 2 e_i
            }
            // rho = (n - 1/2, .., 1/2)
            let rho2: Vec<i64> = (0..n).map(|i| (2 * (n - i) - 1) as i64).collect();
            (n, rho2, SignedPermutation::negation(n), spin_basis(n))
        }
        Family::Sp => {
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut c = vec![0i64; n];
                    c[i] = 1;
                    c[j] = -1;
                    coroots.push(c.clone());
                    c[j] = 1;
                    coroots.push(c);
                }
            }
            for i in 0..n {
                coroots.push(unit(n, i, 1)); // (2 e_i)-check = e_i
            }
            // rho = (n, .., 1)
            let rho2: Vec<i64> = (0..n).map(|i| 2 * (n - i) as i64).collect();
            (n, rho2, SignedPermutation::negation(n), LatticeMap::identity(n))
        }
        Family::SoEven => {
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut c = vec![0i64; n];
                    c[i] = 1;
                    c[j] = -1;
                    coroots.push(c.clone());
                    c[j] = 1;
                    coroots.push(c);
                }
            }
            // rho = (n-1, .., 1, 0)
            let rho2: Vec<i64> = (0..n).map(|i| 2 * (n - 1 - i) as i64).collect();
            let w0 = if n.is_multiple_of(2) {
                SignedPermutation::negation(n)
            } else {
                let mut signs = vec![-1i8; n];
                signs[n - 1] = 1;
                SignedPermutation {
                    perm: (0..n).collect(),
                    signs,
                }
            };
            (n, rho2, w0, spin_basis(n))
        }
    };

    let mut two_rho_check = vec![0i64; dim];
    for c in &coroots {
        for (t, v) in two_rho_check.iter_mut().zip(c) {
            *t += v;
        }
    }

    let datum = RootDatum {
        id,
        dim,
        pos_coroots: coroots,
        rho2,
        two_rho_check,
        w0,
        weight_basis,
    };
    for c in &datum.pos_coroots {
        debug_assert!(
            RootDatum::pairing2(&datum.rho2, c) >= 1,
            "rho must pair positively with every positive coroot"
        );
    }
    Ok(datum)
}

/// The factored polynomial `x -> prod <map(x) + rho, a-check> / prod <rho, a-check>`
/// over the positive coroots, in the coordinates of `map`'s source. With
/// `include_rho = false` the forms evaluate `<map(x), a-check>` instead
/// (the rho-shifted polynomial of the density arguments).
pub fn weight_polynomial(
    datum: &RootDatum,
    map: &LatticeMap,
    include_rho: bool,
) -> FactoredPolynomial {
    assert_eq!(map.target_dim(), datum.dim);
    let rank = map.source_rank();
    let mut forms = Vec::with_capacity(datum.pos_coroots.len());
    let mut denominator = BigUint::one();
    for coroot in &datum.pos_coroots {
        let coeffs: Vec<i64> = map
            .cols2()
            .iter()
            .map(|col| RootDatum::pairing2(col, coroot))
            .collect();
        let mut constant = RootDatum::pairing2(map.offset2(), coroot);
        if include_rho {
            constant += RootDatum::pairing2(&datum.rho2, coroot);
        }
        forms.push(LinearForm::new(coeffs, constant));
        let rho_pairing = RootDatum::pairing2(&datum.rho2, coroot);
        assert!(rho_pairing >= 1);
        denominator *= BigUint::from(rho_pairing as u64);
    }
    FactoredPolynomial::new(rank, forms, denominator)
}

/// Weyl dimension polynomial in the weight-lattice enumeration basis:
/// evaluating at the coordinates of a dominant weight gives the degree of
/// the irreducible representation with that highest weight.
pub fn dimension_polynomial(datum: &RootDatum) -> FactoredPolynomial {
    weight_polynomial(datum, &datum.weight_basis, true)
}

/// The rho-shifted polynomial (value at lambda equals the dimension
/// polynomial at lambda - rho). Its forms evaluate bare coroot pairings, so
/// it vanishes whenever two standard coordinates of the argument collide.
pub fn shifted_polynomial(datum: &RootDatum) -> FactoredPolynomial {
    weight_polynomial(datum, &datum.weight_basis, false)
}

/// Groups whose representation lattices the engine understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupId {
    /// SO_size (size = 2n+1 or 2n >= 5, not 4).
    SpecialOrthogonal { size: usize },
    /// PGL_n, n >= 2.
    ProjectiveGeneralLinear { n: usize },
    /// The simply connected group of an algebra; its lattice is the full
    /// weight lattice.
    SimplyConnected(AlgebraId),
}

impl std::fmt::Display for GroupId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupId::SpecialOrthogonal { size } => write!(f, "SO{size}"),
            GroupId::ProjectiveGeneralLinear { n } => write!(f, "PGL{n}"),
            GroupId::SimplyConnected(id) => write!(f, "simply-connected({id})"),
        }
    }
}

/// Which family of representations a density request ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantKind {
    Algebra,
    Group(GroupId),
    SelfDual,
    Orthogonal,
}

/// A variant: an algebra together with the sublattice of weights to count
/// over, as an injective map into (doubled) standard coordinates.
#[derive(Debug, Clone)]
pub struct VariantSpec {
    pub algebra: AlgebraId,
    pub kind: VariantKind,
    pub map: LatticeMap,
    /// Index of the sublattice in the full weight lattice, when finite and
    /// both lattices have the same rank.
    pub index_in_weight_lattice: Option<BigUint>,
}

impl VariantSpec {
    /// Canonical text label, also the cache key component.
    pub fn label(&self) -> String {
        match self.kind {
            VariantKind::Algebra => self.algebra.to_string(),
            VariantKind::Group(g) => format!("group:{g}"),
            VariantKind::SelfDual => format!("sd:{}", self.algebra),
            VariantKind::Orthogonal => format!("orth:{}", self.algebra),
        }
    }

    /// The plain algebra variant: enumerate the whole weight lattice.
    pub fn algebra(id: AlgebraId) -> Result<Self> {
        let datum = build_root_datum(id)?;
        Ok(VariantSpec {
            algebra: id,
            kind: VariantKind::Algebra,
            map: datum.weight_basis.clone(),
            index_in_weight_lattice: Some(BigUint::one()),
        })
    }

    /// Parse a variant spec such as `gl:3`, `so:7`, `sp:6`, `so_even:8`,
    /// `group:pgl:4`, `group:so:7`, `group:sc:sp:4`, `sd:sl:6`, `orth:sl:6`.
    /// Sizes are matrix sizes (the algebra name's subscript).
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidInput(format!("variant '{spec}': {why}"));
        let algebra_from = |fam: &str, size: &str| -> Result<AlgebraId> {
            let size: usize = size.parse().map_err(|_| bad("rank is not a number"))?;
            match fam {
                "gl" => AlgebraId::new(Family::Gl, size),
                "sl" => AlgebraId::new(Family::Sl, size),
                "sp" if size.is_multiple_of(2) => AlgebraId::new(Family::Sp, size / 2),
                "sp" => Err(bad("symplectic size must be even")),
                "so" if size % 2 == 1 => AlgebraId::new(Family::SoOdd, size / 2),
                "so" => AlgebraId::new(Family::SoEven, size / 2),
                "so_odd" if size % 2 == 1 => AlgebraId::new(Family::SoOdd, size / 2),
                "so_odd" => Err(bad("so_odd size must be odd")),
                "so_even" if size.is_multiple_of(2) => AlgebraId::new(Family::SoEven, size / 2),
                "so_even" => Err(bad("so_even size must be even")),
                _ => Err(bad("unknown family")),
            }
        };
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            [fam, size] => VariantSpec::algebra(algebra_from(fam, size)?),
            ["sd", fam, size] => selfdual_embedding(algebra_from(fam, size)?),
            ["orth", fam, size] => orthogonal_embedding(algebra_from(fam, size)?),
            ["group", "pgl", n] => {
                let n = n.parse().map_err(|_| bad("rank is not a number"))?;
                group_sublattice(GroupId::ProjectiveGeneralLinear { n })
            }
            ["group", "so", size] => {
                let size = size.parse().map_err(|_| bad("size is not a number"))?;
                group_sublattice(GroupId::SpecialOrthogonal { size })
            }
            ["group", "sc", fam, size] => {
                group_sublattice(GroupId::SimplyConnected(algebra_from(fam, size)?))
            }
            _ => Err(bad("unrecognized shape (examples: gl:3, so:7, group:pgl:4, sd:sl:6)")),
        }
    }
}

/// Express the columns of `map` in the weight-basis coordinates of `datum`,
/// when `map`'s image lies inside the weight lattice. Used to compute
/// sublattice indices.
pub fn coords_in_weight_basis(datum: &RootDatum, map: &LatticeMap) -> Result<Vec<Vec<i64>>> {
    let basis = &datum.weight_basis;
    let k = basis.source_rank();
    let d = datum.dim;
    let mut out = Vec::with_capacity(map.cols2().len());
    for col in map.cols2() {
        // solve basis * y = col over the rationals, demand integrality
        let mut aug: Vec<Vec<BigInt>> = (0..d)
            .map(|r| {
                let mut row: Vec<BigInt> = basis.cols2().iter().map(|c| BigInt::from(c[r])).collect();
                row.push(BigInt::from(col[r]));
                row
            })
            .collect();
        // fraction-free forward elimination
        let mut piv_rows = Vec::new();
        let mut r = 0usize;
        for c in 0..k {
            let Some(p) = (r..d).find(|&i| !aug[i][c].is_zero()) else {
                continue;
            };
            aug.swap(r, p);
            for i in 0..d {
                if i == r || aug[i][c].is_zero() {
                    continue;
                }
                let a = aug[r][c].clone();
                let b = aug[i][c].clone();
                for j in 0..=k {
                    let t = &aug[i][j] * &a - &aug[r][j] * &b;
                    aug[i][j] = t;
                }
            }
            piv_rows.push((r, c));
            r += 1;
        }
        // consistency: rows beyond the pivots must be zero
        for row in aug.iter().skip(r) {
            if !row[k].is_zero() {
                return Err(Error::InvalidInput(
                    "sublattice map does not land in the weight lattice".into(),
                ));
            }
        }
        let mut y = vec![BigInt::zero(); k];
        for &(pr, pc) in &piv_rows {
            let (q, rem) = num_integer::Integer::div_rem(&aug[pr][k], &aug[pr][pc]);
            if !rem.is_zero() {
                return Err(Error::InvalidInput(
                    "sublattice map does not land in the weight lattice".into(),
                ));
            }
            y[pc] = q;
        }
        out.push(
            y.iter()
                .map(|v| v.to_i64().ok_or_else(|| Error::InvalidInput("coordinate overflow".into())))
                .collect::<Result<Vec<i64>>>()?,
        );
    }
    Ok(out)
}

fn index_from_map(datum: &RootDatum, map: &LatticeMap) -> Result<Option<BigUint>> {
    if map.source_rank() != datum.weight_basis.source_rank() {
        return Ok(None);
    }
    let coords = coords_in_weight_basis(datum, map)?;
    let det = bareiss_determinant(
        (0..coords.len())
            .map(|r| coords.iter().map(|c| BigInt::from(c[r])).collect())
            .collect(),
    );
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(Some(det.abs().to_biguint().expect("nonnegative")))
}

/// The sublattice of weights that lift to representations of the group:
/// the full weight lattice for a simply connected group, the integer lattice
/// for SO_n (index 2: spin weights excluded), the root lattice for PGL_n
/// (index n).
pub fn group_sublattice(group: GroupId) -> Result<VariantSpec> {
    match group {
        GroupId::SimplyConnected(id) => {
            let mut v = VariantSpec::algebra(id)?;
            v.kind = VariantKind::Group(group);
            Ok(v)
        }
        GroupId::SpecialOrthogonal { size } => {
            let id = if size % 2 == 1 {
                AlgebraId::new(Family::SoOdd, size / 2)?
            } else {
                AlgebraId::new(Family::SoEven, size / 2)?
            };
            let datum = build_root_datum(id)?;
            let map = LatticeMap::identity(datum.dim);
            let index = index_from_map(&datum, &map)?;
            debug_assert_eq!(index, Some(BigUint::from(2u32)));
            Ok(VariantSpec {
                algebra: id,
                kind: VariantKind::Group(group),
                map,
                index_in_weight_lattice: index,
            })
        }
        GroupId::ProjectiveGeneralLinear { n } => {
            let id = AlgebraId::new(Family::Sl, n)?;
            let datum = build_root_datum(id)?;
            // Root lattice. The enumeration coordinates of sl_n are the
            // pairings with the simple coroots, so the simple roots have the
            // Cartan matrix of A_{n-1} as their coordinate columns.
            let k = n - 1;
            let cartan: Vec<Vec<i64>> = (0..k)
                .map(|i| {
                    let mut c = vec![0i64; k];
                    c[i] = 2;
                    if i > 0 {
                        c[i - 1] = -1;
                    }
                    if i + 1 < k {
                        c[i + 1] = -1;
                    }
                    c
                })
                .collect();
            let map = datum.weight_basis.compose(&cartan, &vec![0; k]);
            let index = index_from_map(&datum, &map)?;
            debug_assert_eq!(index, Some(BigUint::from(n as u64)));
            Ok(VariantSpec {
                algebra: id,
                kind: VariantKind::Group(group),
                map,
                index_in_weight_lattice: index,
            })
        }
    }
}

/// The center order |C^G| for the supported groups.
pub fn center_order(group: GroupId) -> BigUint {
    match group {
        GroupId::SimplyConnected(_) => BigUint::one(),
        GroupId::SpecialOrthogonal { .. } => BigUint::from(2u32),
        GroupId::ProjectiveGeneralLinear { n } => BigUint::from(n as u64),
    }
}

/// Embedding of the self-dual weights {lambda : w0 lambda = -lambda}.
///
/// For families whose longest Weyl element is -1 (B, C, and D with even
/// rank) every weight is self-dual and the embedding is the whole weight
/// lattice. For so_{2n} with n odd the self-dual weights are the integer
/// vectors with last coordinate zero. For sl_n they are the weights fixed by
/// the reversal duality; on the zero-sum model these are the anti-palindromic
/// vectors (t_1, .., t_k, [0], -t_k, .., -t_1) with the t_i all integers or,
/// when n is even, also all half-integers.
pub fn selfdual_embedding(id: AlgebraId) -> Result<VariantSpec> {
    let datum = build_root_datum(id)?;
    let n = id.n;
    let map = match id.family {
        Family::Gl => {
            return Err(Error::UnsupportedVariant(
                "self-dual family is defined for semisimple algebras only".into(),
            ))
        }
        Family::SoOdd | Family::Sp => datum.weight_basis.clone(),
        Family::SoEven => {
            if n.is_multiple_of(2) {
                datum.weight_basis.clone()
            } else {
                let cols = (0..n - 1).map(|i| unit(n, i, 2)).collect();
                LatticeMap::new(n, cols, vec![0; n])
            }
        }
        Family::Sl => {
            let k = n / 2;
            let mut cols = Vec::with_capacity(k);
            if n.is_multiple_of(2) {
                for i in 0..k - 1 {
                    let mut c = vec![0i64; n];
                    c[i] = 2;
                    c[n - 1 - i] = -2;
                    cols.push(c);
                }
                // the half-integer direction (1/2, .., 1/2, -1/2, .., -1/2)
                let mut c = vec![1i64; n];
                for t in c.iter_mut().skip(k) {
                    *t = -1;
                }
                cols.push(c);
            } else {
                for i in 0..k {
                    let mut c = vec![0i64; n];
                    c[i] = 2;
                    c[n - 1 - i] = -2;
                    cols.push(c);
                }
            }
            LatticeMap::new(n, cols, vec![0; n])
        }
    };
    // every basis vector of the embedding satisfies w0 c = -c
    if !matches!(id.family, Family::SoOdd | Family::Sp)
        && !(id.family == Family::SoEven && n.is_multiple_of(2))
    {
        for c in map.cols2() {
            let img = datum.w0.apply(c);
            debug_assert!(
                img.iter().zip(c).all(|(a, b)| *a == -b),
                "self-dual basis vector not negated by w0"
            );
        }
    }
    Ok(VariantSpec {
        algebra: id,
        kind: VariantKind::SelfDual,
        map,
        index_in_weight_lattice: None,
    })
}

/// Embedding of the orthogonal weights: self-dual weights whose pairing with
/// 2 rho-check is even. Either equals the self-dual lattice or sits inside it
/// with index 2.
pub fn orthogonal_embedding(id: AlgebraId) -> Result<VariantSpec> {
    let datum = build_root_datum(id)?;
    let sd = selfdual_embedding(id)?;
    let k = sd.map.source_rank();
    let parity: Vec<i64> = sd
        .map
        .cols2()
        .iter()
        .map(|c| RootDatum::pairing2(c, &datum.two_rho_check).rem_euclid(2))
        .collect();
    let map = if parity.iter().all(|&p| p == 0) {
        sd.map.clone()
    } else {
        sd.map.compose(&even_sublattice_columns(&parity), &vec![0; k])
    };
    Ok(VariantSpec {
        algebra: id,
        kind: VariantKind::Orthogonal,
        map,
        index_in_weight_lattice: None,
    })
}

/// Basis of `{y : sum parity_i y_i is even}`, an index-2 sublattice of Z^k
/// when some parity coefficient is odd.
fn even_sublattice_columns(parity: &[i64]) -> Vec<Vec<i64>> {
    let k = parity.len();
    let j = parity.iter().position(|&p| p == 1).expect("some odd coefficient");
    (0..k)
        .map(|i| {
            let mut c = vec![0i64; k];
            if i == j {
                c[j] = 2;
            } else {
                c[i] = 1;
                if parity[i] == 1 {
                    c[j] = -1;
                }
            }
            c
        })
        .collect()
}
