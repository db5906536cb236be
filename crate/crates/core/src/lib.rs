//! Exact verification of the computational claims behind a pointless del
//! Pezzo surface of degree 2 over `Q(√-7)` whose automorphism group is
//! `PSL₂(F₇) × Z/2`.
//!
//! The surface is `w² + x⁴ + y⁴ + z⁴ - (3/2)(1 - √-7)(x²y² + x²z² + y²z²) = 0`
//! in `P(2,1,1,1)`. The crate checks, with exact arithmetic and exhaustive
//! search:
//!
//! * 2-adic facts: the square criterion, `√-7 ∈ Q₂`, and the embedding
//!   `Q(√-7) → Q₂` sending the quartic's coefficient to `14 mod 64`
//!   ([`padic`]);
//! * absence of primitive solutions mod 64 and the weighted descent giving
//!   `Q₂`-insolubility ([`local_search`]);
//! * smoothness, symmetries, a bitangent and its two lifted lines
//!   ([`geometry`]);
//! * centralizer and class-size computations in `W(E₇) ≅ Z/2 × Sp₆(F₂)`
//!   ([`groups`]);
//!
//! and assembles per-claim certificates ([`report`]).

pub mod arith;
pub mod geometry;
pub mod groups;
pub mod local_search;
pub mod padic;
pub mod report;
pub mod surface;

use num_rational::BigRational;

/// Arbitrary-precision rationals.
pub type Rational = BigRational;
/// `a + b·√-7` with rational `a`, `b`.
pub type QuadExtElem = arith::QuadExt<Rational, -7>;
/// `u + v·i` with `u`, `v ∈ Q(√-7)`.
pub type TowerElem = arith::QuadExt<QuadExtElem, -1>;

/// Polynomial over the rationals.
pub type RationalForm = arith::Poly<Rational>;
/// Polynomial over `Q(√-7)`.
pub type QuadForm = arith::Poly<QuadExtElem>;
/// Polynomial over `Q(√-7, i)`.
pub type TowerForm = arith::Poly<TowerElem>;

/// Crate version recorded in every certificate.
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
