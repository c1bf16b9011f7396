//! Exact natural densities of irreducible representation degrees.
//!
//! For a classical Lie algebra (or an associated group, or its self-dual /
//! orthogonal families of representations) and a positive integer `m`, this
//! crate computes the natural density of irreducible representations whose
//! degree is *not* divisible by `m`, as an exact rational number.
//!
//! The computation rests on three facts:
//!
//! 1. the Weyl dimension formula is an integer-valued polynomial on the
//!    weight lattice, factored into linear forms ([`ivpoly`]);
//! 2. integer-valued polynomials are periodic modulo prime powers, with an
//!    explicit period read off the per-variable degree ([`ivpoly::period_prime_power`]);
//! 3. the density of a periodic subset of a lattice equals its fraction in a
//!    fundamental domain, independent of the norm used to take the limit
//!    ([`lattice`]).
//!
//! [`engine::density_for`] ties these together: factor `m`, certify a period
//! per prime power, count non-divisible points in each fundamental domain,
//! and combine. [`bounds`] evaluates the closed-form lower/upper bounds the
//! densities provably satisfy, with the exponentials replaced by certified
//! rational enclosures so checks never rely on floating point.

pub mod bounds;
pub mod engine;
pub mod error;
pub mod ivpoly;
pub mod lattice;
pub mod numeric;
mod par;
pub mod roots;
pub mod verify;

pub use engine::{density_for, DensityRequest, EngineOptions, ExactDensity};
pub use error::Error;
pub use numeric::{factorize, PrimePowerFactorization, Rational, Valuation};
pub use roots::{AlgebraId, Family, RootDatum, VariantSpec};

/// Bumped whenever the enumeration or combination logic changes, so cached
/// records from older engines are never reused.
pub const ENGINE_VERSION: &str = "1";
