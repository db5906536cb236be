//! Truncated 2-adic numbers, the square criterion in `Q₂`, Hensel lifting of
//! square roots, and the two embeddings `Q(√-7) → Q₂`.
//!
//! A nonzero 2-adic number is stored as `2^v · u` with `u` odd and known
//! modulo `2^k`; `k` is the precision. Arithmetic is done in `u128` with
//! wrapping operations, which is exact modulo `2^128` and therefore modulo
//! every `2^k` with `k ≤ 128`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::{QuadExtElem, Rational};

/// Largest supported precision (bits of unit part).
///
/// Leaves headroom in `u128` for the extra bit Hensel lifting needs and for
/// carries in `embed_theta`.
pub const MAX_PRECISION: u32 = 120;

/// Working precision used when nothing else is requested.
pub const DEFAULT_PRECISION: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("zero is outside the square criterion, which is stated for units times powers of 2")]
    ZeroNotAllowed,
    #[error("precision {got} below the required minimum {min}")]
    PrecisionTooLow { min: u32, got: u32 },
    #[error("precision {got} above the supported maximum {max}")]
    PrecisionTooHigh { max: u32, got: u32 },
    #[error("{0} is not congruent to 1 mod 8")]
    NotOneModEight(BigInt),
    #[error("unit part must be odd")]
    EvenUnit,
    #[error("need {requested} bits but only {available} are determined")]
    InsufficientPrecision { requested: u32, available: u32 },
    #[error("value has negative valuation {0}; it has no residue mod 2^m")]
    NegativeValuation(i64),
}

/// 2-adic valuation; `Infinite` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

fn mask(k: u32) -> u128 {
    if k >= 128 {
        u128::MAX
    } else {
        (1u128 << k) - 1
    }
}

fn shl_mod(x: u128, s: u64, k: u32) -> u128 {
    if s >= u64::from(k) {
        0
    } else {
        (x << s) & mask(k)
    }
}

/// Inverse of an odd number modulo `2^128`.
fn inv_odd(u: u128) -> u128 {
    debug_assert!(u & 1 == 1);
    // u·u ≡ 1 mod 8, and each Newton step doubles the correct bits.
    let mut x = u;
    for _ in 0..6 {
        x = x.wrapping_mul(2u128.wrapping_sub(u.wrapping_mul(x)));
    }
    x
}

/// `n mod 2^128` as a `u128`.
fn bigint_mod_2_128(n: &BigInt) -> u128 {
    let modulus = BigInt::from(1u8) << 128;
    n.mod_floor(&modulus)
        .to_u128()
        .expect("reduced below 2^128")
}

fn trailing_zeros(n: &BigInt) -> u64 {
    n.trailing_zeros().unwrap_or(0)
}

/// `ord₂(numerator) - ord₂(denominator)`; infinite for zero.
pub fn val2(x: &Rational) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let vn = trailing_zeros(x.numer()) as i64;
    let vd = trailing_zeros(x.denom()) as i64;
    Valuation::Finite(vn - vd)
}

fn check_precision(k: u32, min: u32) -> Result<(), PadicError> {
    if k < min {
        return Err(PadicError::PrecisionTooLow { min, got: k });
    }
    if k > MAX_PRECISION {
        return Err(PadicError::PrecisionTooHigh {
            max: MAX_PRECISION,
            got: k,
        });
    }
    Ok(())
}

/// A 2-adic number `2^valuation · u` with `u ≡ unit mod 2^precision`.
///
/// The zero marker (`Valuation::Infinite`) is exact zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicApprox {
    valuation: Valuation,
    unit: u128,
    precision: u32,
}

impl PadicApprox {
    pub fn new(valuation: i64, unit: u128, precision: u32) -> Result<Self, PadicError> {
        check_precision(precision, 1)?;
        let unit = unit & mask(precision);
        if unit & 1 == 0 {
            return Err(PadicError::EvenUnit);
        }
        Ok(Self {
            valuation: Valuation::Finite(valuation),
            unit,
            precision,
        })
    }

    /// Exact zero.
    pub fn zero() -> Self {
        Self {
            valuation: Valuation::Infinite,
            unit: 0,
            precision: 0,
        }
    }

    /// `x` to `k` bits of unit precision.
    pub fn from_rational(x: &Rational, k: u32) -> Result<Self, PadicError> {
        check_precision(k, 1)?;
        let Valuation::Finite(v) = val2(x) else {
            return Ok(Self::zero());
        };
        let n = x.numer() >> trailing_zeros(x.numer());
        let d = x.denom() >> trailing_zeros(x.denom());
        let unit = bigint_mod_2_128(&n).wrapping_mul(inv_odd(bigint_mod_2_128(&d)));
        Self::new(v, unit, k)
    }

    pub fn from_int(n: i64, k: u32) -> Result<Self, PadicError> {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)), k)
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }

    /// Odd representative of the unit part, in `[0, 2^precision)`.
    pub fn unit(&self) -> u128 {
        self.unit
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.valuation == Valuation::Infinite
    }

    /// Keeps only `k` bits of the unit part.
    pub fn truncate(&self, k: u32) -> Self {
        if self.is_zero() || k >= self.precision {
            return *self;
        }
        Self {
            valuation: self.valuation,
            unit: self.unit & mask(k),
            precision: k,
        }
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return *self;
        }
        Self {
            valuation: self.valuation,
            unit: self.unit.wrapping_neg() & mask(self.precision),
            precision: self.precision,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self.valuation, other.valuation) {
            (Valuation::Finite(a), Valuation::Finite(b)) => {
                let k = self.precision.min(other.precision);
                Self {
                    valuation: Valuation::Finite(a + b),
                    unit: self.unit.wrapping_mul(other.unit) & mask(k),
                    precision: k,
                }
            }
            _ => Self::zero(),
        }
    }

    /// Sum, losing as many bits as cancel.
    ///
    /// Fails when every known bit cancels: the sum is then `0 mod 2^N` and
    /// its valuation is not determined.
    pub fn add(&self, other: &Self) -> Result<Self, PadicError> {
        let (lo, hi) = match (self.valuation, other.valuation) {
            (Valuation::Infinite, _) => return Ok(*other),
            (_, Valuation::Infinite) => return Ok(*self),
            (Valuation::Finite(a), Valuation::Finite(b)) if a <= b => (self, other),
            _ => (other, self),
        };
        let v_lo = lo.valuation.finite().expect("finite");
        let v_hi = hi.valuation.finite().expect("finite");
        let shift = (v_hi - v_lo) as u64;
        // lo.unit + 2^shift · hi.unit, known modulo 2^k relative to 2^v_lo
        let k = u64::from(lo.precision).min(shift + u64::from(hi.precision)) as u32;
        let s = lo.unit.wrapping_add(shl_mod(hi.unit, shift, k)) & mask(k);
        if s == 0 {
            return Err(PadicError::InsufficientPrecision {
                requested: 1,
                available: 0,
            });
        }
        let c = s.trailing_zeros();
        Ok(Self {
            valuation: Valuation::Finite(v_lo + i64::from(c)),
            unit: s >> c,
            precision: k - c,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PadicError> {
        self.add(&other.neg())
    }

    /// Number of known low-order bits of the value itself, `v + k`.
    pub fn absolute_precision(&self) -> Option<i64> {
        self.valuation
            .finite()
            .map(|v| v + i64::from(self.precision))
    }

    /// True iff the two approximations are consistent, i.e. agree modulo the
    /// coarser of their absolute precisions.
    pub fn agrees_with(&self, other: &Self) -> bool {
        match (self.valuation, other.valuation) {
            (Valuation::Infinite, Valuation::Infinite) => true,
            (Valuation::Infinite, _) | (_, Valuation::Infinite) => false,
            (Valuation::Finite(a), Valuation::Finite(b)) => {
                let abs = self
                    .absolute_precision()
                    .unwrap()
                    .min(other.absolute_precision().unwrap());
                let m = a.min(b);
                let bits = (abs - m) as u32;
                let x = shl_mod(self.unit, (a - m) as u64, bits);
                let y = shl_mod(other.unit, (b - m) as u64, bits);
                x.wrapping_sub(y) & mask(bits) == 0
            }
        }
    }

    /// The value as an integer residue modulo `2^m`.
    pub fn residue_mod_pow2(&self, m: u32) -> Result<u128, PadicError> {
        check_precision(m, 1)?;
        let Valuation::Finite(v) = self.valuation else {
            return Ok(0);
        };
        if v < 0 {
            return Err(PadicError::NegativeValuation(v));
        }
        let available = v + i64::from(self.precision);
        if available < i64::from(m) {
            return Err(PadicError::InsufficientPrecision {
                requested: m,
                available: available as u32,
            });
        }
        Ok(shl_mod(self.unit, v as u64, m))
    }
}

impl fmt::Display for PadicApprox {
    /// `2^n * (u mod 2^k)`, or `0` for exact zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation {
            Valuation::Infinite => f.write_str("0"),
            Valuation::Finite(v) => {
                write!(f, "2^{} * ({} mod 2^{})", v, self.unit, self.precision)
            }
        }
    }
}

impl Serialize for PadicApprox {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Square criterion in `Q₂*`: `2^n·u` is a square iff `n` is even and
/// `u ≡ 1 mod 8`.
pub fn is_square_q2(x: &PadicApprox) -> Result<bool, PadicError> {
    let Valuation::Finite(v) = x.valuation else {
        return Err(PadicError::ZeroNotAllowed);
    };
    if x.precision < 3 {
        return Err(PadicError::PrecisionTooLow {
            min: 3,
            got: x.precision,
        });
    }
    Ok(v.rem_euclid(2) == 0 && x.unit & 7 == 1)
}

/// The 2-adic square root of `a ≡ 1 mod 8` that is `≡ 1 mod 4`, truncated to
/// `k` bits.
///
/// The result `t` satisfies `t² ≡ a mod 2^(k+1)`. The other root is `-t`.
/// Bits are fixed one at a time: if `t² ≡ a mod 2^m` (`m ≥ 3`) then
/// exactly one of `t`, `t + 2^(m-1)` squares to `a` modulo `2^(m+1)`.
pub fn hensel_sqrt(a: &BigInt, k: u32) -> Result<u128, PadicError> {
    check_precision(k, 3)?;
    let modulus8 = BigInt::from(8);
    if a.mod_floor(&modulus8) != BigInt::from(1) {
        return Err(PadicError::NotOneModEight(a.clone()));
    }
    let a_res = bigint_mod_2_128(a);
    let mut t: u128 = 1;
    let mut m = 3;
    while m < k + 1 {
        let next = m + 1;
        if t.wrapping_mul(t).wrapping_sub(a_res) & mask(next) != 0 {
            t += 1u128 << (m - 1);
        }
        m = next;
    }
    Ok(t & mask(k))
}

/// Both square roots `{t, -t}` of `a` as 2-adic truncations to `k` bits,
/// in ascending order.
pub fn sqrt_pair(a: &BigInt, k: u32) -> Result<[u128; 2], PadicError> {
    let t = hensel_sqrt(a, k)?;
    let neg = t.wrapping_neg() & mask(k);
    Ok(if t <= neg { [t, neg] } else { [neg, t] })
}

/// Which of the two embeddings `Q(√-7) → Q₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EmbeddingLabel {
    /// `√-7 ↦` the root `≡ 1 mod 4` (`≡ 181 mod 128`).
    Theta1,
    /// `√-7 ↦` the other root, `-θ₁(√-7)`.
    Theta2,
}

/// An embedding `θ : Q(√-7) → Q₂`, fixed by the image of `√-7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingChoice {
    root_residue: u128,
    precision: u32,
    label: EmbeddingLabel,
}

impl EmbeddingChoice {
    pub fn new(label: EmbeddingLabel, precision: u32) -> Result<Self, PadicError> {
        let t = hensel_sqrt(&BigInt::from(-7), precision)?;
        let root_residue = match label {
            EmbeddingLabel::Theta1 => t,
            EmbeddingLabel::Theta2 => t.wrapping_neg() & mask(precision),
        };
        Ok(Self {
            root_residue,
            precision,
            label,
        })
    }

    pub fn theta1(precision: u32) -> Result<Self, PadicError> {
        Self::new(EmbeddingLabel::Theta1, precision)
    }

    pub fn theta2(precision: u32) -> Result<Self, PadicError> {
        Self::new(EmbeddingLabel::Theta2, precision)
    }

    pub fn root_residue(&self) -> u128 {
        self.root_residue
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn label(&self) -> EmbeddingLabel {
        self.label
    }

    pub fn root(&self) -> PadicApprox {
        PadicApprox::new(0, self.root_residue, self.precision).expect("root is an odd residue")
    }
}

/// `θ(a + b√-7) = a + b·θ(√-7)` to `k` bits of unit precision.
///
/// Cancellation between `a` and `b·θ(√-7)` consumes bits of the embedding's
/// precision; if fewer than `k` remain the call fails.
pub fn embed_theta(
    x: &QuadExtElem,
    choice: &EmbeddingChoice,
    k: u32,
) -> Result<PadicApprox, PadicError> {
    check_precision(k, 1)?;
    if k > choice.precision {
        return Err(PadicError::InsufficientPrecision {
            requested: k,
            available: choice.precision,
        });
    }
    let work = choice.precision;
    let a = PadicApprox::from_rational(&x.a, work)?;
    let b = PadicApprox::from_rational(&x.b, work)?;
    let value = a
        .add(&b.mul(&choice.root()))
        .map_err(|_| PadicError::InsufficientPrecision {
            requested: k,
            available: 0,
        })?;
    if !value.is_zero() && value.precision < k {
        return Err(PadicError::InsufficientPrecision {
            requested: k,
            available: value.precision,
        });
    }
    Ok(value.truncate(k))
}
