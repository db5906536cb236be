//! Quadratic extensions `F(√d)` with the discriminant fixed at the type level.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::ring::{Field, Ring};

/// The element `a + b·√D` of `F(√D)`.
///
/// `D` is a const parameter rather than a global, so `F(√-7)`, `F(√-1)` and
/// test fields such as `F(√2)` are distinct types and cannot be mixed by
/// accident. Towers are built by nesting: `QuadExt<QuadExt<Q, -7>, -1>` is
/// `Q(√-7, i)`.
///
/// `D` must not be a square in `F`; otherwise the "field" has zero divisors
/// and [`Field::inverse`] returns `None` for them.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt<F, const D: i64> {
    pub a: F,
    pub b: F,
}

impl<F: Ring, const D: i64> QuadExt<F, D> {
    pub fn new(a: F, b: F) -> Self {
        Self { a, b }
    }

    /// The embedding `F ↪ F(√D)`.
    pub fn from_base(a: F) -> Self {
        Self { a, b: F::zero() }
    }

    /// `√D` itself.
    pub fn generator() -> Self {
        Self {
            a: F::zero(),
            b: F::one(),
        }
    }

    pub fn discriminant() -> i64 {
        D
    }

    /// The Galois conjugate `a - b·√D`.
    pub fn conj(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// `a² - D·b²`, which lies in the base ring.
    pub fn norm(&self) -> F {
        self.a.clone() * self.a.clone() - F::from_i64(D) * self.b.clone() * self.b.clone()
    }

    pub fn trace(&self) -> F {
        self.a.clone() + self.a.clone()
    }

    /// True iff the element lies in the image of the base ring.
    pub fn is_base(&self) -> bool {
        self.b.is_zero()
    }

    pub fn scale(&self, k: &F) -> Self {
        Self {
            a: self.a.clone() * k.clone(),
            b: self.b.clone() * k.clone(),
        }
    }
}

impl<F: Ring, const D: i64> fmt::Debug for QuadExt<F, D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}·√{})", self.a, self.b, D)
    }
}

impl<F: Ring, const D: i64> Add for QuadExt<F, D> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

impl<F: Ring, const D: i64> Sub for QuadExt<F, D> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
        }
    }
}

impl<F: Ring, const D: i64> Mul for QuadExt<F, D> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // (a + b√d)(a' + b'√d) = (aa' + bb'd) + (ab' + a'b)√d
        let bb = self.b.clone() * rhs.b.clone();
        Self {
            a: self.a.clone() * rhs.a.clone() + F::from_i64(D) * bb,
            b: self.a * rhs.b + rhs.a * self.b,
        }
    }
}

impl<F: Ring, const D: i64> Neg for QuadExt<F, D> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl<F: Ring, const D: i64> Zero for QuadExt<F, D> {
    fn zero() -> Self {
        Self::from_base(F::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl<F: Ring, const D: i64> One for QuadExt<F, D> {
    fn one() -> Self {
        Self::from_base(F::one())
    }
}

impl<F: Ring, const D: i64> Ring for QuadExt<F, D> {
    fn from_i64(n: i64) -> Self {
        Self::from_base(F::from_i64(n))
    }
}

impl<F: Field, const D: i64> Field for QuadExt<F, D> {
    fn inverse(&self) -> Option<Self> {
        let n = self.norm().inverse()?;
        Some(self.conj().scale(&n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::rat;
    use num_rational::BigRational;

    type Q7 = QuadExt<BigRational, -7>;
    type T7 = QuadExt<Q7, -1>;

    fn q(a: (i64, i64), b: (i64, i64)) -> Q7 {
        Q7::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn generator_squares_to_discriminant() {
        let r = Q7::generator();
        assert_eq!(r.clone() * r, Q7::from_i64(-7));
        let i = T7::generator();
        assert_eq!(i.clone() * i, T7::from_i64(-1));
    }

    #[test]
    fn half_one_minus_root_to_the_fourth() {
        // ((1-√-7)/2)^4 = 1/2 + (3/2)√-7
        let beta = q((1, 2), (-1, 2));
        assert_eq!(beta.power(4), q((1, 2), (3, 2)));
        assert_eq!(beta.power(2), q((-3, 2), (-1, 2)));
    }

    #[test]
    fn inverse_roundtrip() {
        let x = q((3, 2), (-5, 7));
        let inv = x.inverse().unwrap();
        assert_eq!(x * inv, Q7::one());
        assert!(Q7::zero().inverse().is_none());

        let t = T7::new(q((1, 1), (2, 1)), q((0, 1), (-1, 3)));
        assert_eq!(t.clone() * t.inverse().unwrap(), T7::one());
    }

    #[test]
    fn split_discriminant_has_zero_divisors() {
        // D = 4 is a square, so 2 - √4 has norm zero.
        let z = QuadExt::<BigRational, 4>::new(rat(2, 1), rat(-1, 1));
        assert!(z.norm().is_zero());
        assert!(z.inverse().is_none());
    }
}
