//! The concrete forms the certificates are about.

use std::sync::Arc;

use num_traits::One;

use crate::arith::{rat, Poly, Ring, Vars};
use crate::geometry::{BitangentLift, Line};
use crate::{QuadExtElem, QuadForm, RationalForm, TowerElem};

/// `(w, x, y, z)` with weights `(2, 1, 1, 1)`.
pub fn weighted_vars() -> Arc<Vars> {
    Vars::new(&["w", "x", "y", "z"], &[2, 1, 1, 1]).expect("valid weights")
}

/// `(x, y, z)` with unit weights.
pub fn plane_vars() -> Arc<Vars> {
    Vars::plain(&["x", "y", "z"])
}

/// `-(3/2)(1 - √-7)`, the coefficient of `x²y² + x²z² + y²z²`.
pub fn cross_coefficient() -> QuadExtElem {
    QuadExtElem::new(rat(-3, 2), rat(3, 2))
}

/// `x⁴ + y⁴ + z⁴ + c·(x²y² + x²z² + y²z²)` over any ring.
pub fn ciani_quartic<C: Ring>(vars: &Arc<Vars>, c: C) -> Poly<C> {
    let n = vars.len();
    let (x, y, z) = (n - 3, n - 2, n - 1);
    let mono = |pairs: &[(usize, u32)]| {
        let mut e = vec![0; n];
        for &(i, k) in pairs {
            e[i] = k;
        }
        e
    };
    Poly::from_terms(
        vars,
        [
            (mono(&[(x, 4)]), C::one()),
            (mono(&[(y, 4)]), C::one()),
            (mono(&[(z, 4)]), C::one()),
            (mono(&[(x, 2), (y, 2)]), c.clone()),
            (mono(&[(x, 2), (z, 2)]), c.clone()),
            (mono(&[(y, 2), (z, 2)]), c),
        ],
    )
    .expect("exponent vectors match")
}

/// The branch quartic `C` in `P²`.
pub fn branch_quartic() -> QuadForm {
    ciani_quartic(&plane_vars(), cross_coefficient())
}

/// The surface `S : w² + C(x, y, z) = 0` in `P(2,1,1,1)`.
pub fn surface_form() -> QuadForm {
    let v = weighted_vars();
    let w2 = Poly::monomial(&v, vec![2, 0, 0, 0], QuadExtElem::one());
    w2 + ciani_quartic(&v, cross_coefficient())
}

/// `f = w² + x⁴ + y⁴ + z⁴ + 14(x²y² + x²z² + y²z²)`, the 2-adic model of `S`.
pub fn local_form() -> RationalForm {
    let v = weighted_vars();
    let w2 = Poly::monomial(&v, vec![2, 0, 0, 0], rat(1, 1));
    w2 + ciani_quartic(&v, rat(14, 1))
}

/// `β = (1 - √-7)/2`; the quartic's cross coefficient is `β⁴ - 2`.
pub fn beta() -> QuadExtElem {
    QuadExtElem::new(rat(1, 2), rat(-1, 2))
}

/// The line `x + y + z = 0`.
pub fn sum_line() -> Line {
    [1, 1, 1].map(QuadExtElem::from_i64)
}

/// `x² + xy + y²`, the quadratic whose square the quartic restricts to on
/// [`sum_line`].
pub fn sum_line_quadratic() -> QuadForm {
    let v = plane_vars();
    let one = QuadExtElem::one();
    Poly::from_terms(
        &v,
        [(vec![2, 0, 0], one.clone()), (vec![1, 1, 0], one.clone()), (vec![0, 2, 0], one)],
    )
    .expect("exponent vectors match")
}

/// `i·β²`.
pub fn lift_multiplier() -> TowerElem {
    TowerElem::new(QuadExtElem::from_i64(0), beta().power(2))
}

/// The two lines `{x + y + z = 0, w ± iβ²(x² + xy + y²) = 0}` on the surface.
pub fn sum_line_lift() -> BitangentLift {
    BitangentLift::new(sum_line(), lift_multiplier(), sum_line_quadratic()).expect("well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::CoeffText;

    #[test]
    fn local_form_at_all_ones() {
        let one = rat(1, 1);
        let v = local_form().eval(&[one.clone(), one.clone(), one.clone(), one]).unwrap();
        assert_eq!(v, rat(46, 1));
    }

    #[test]
    fn surface_at_x_point() {
        let p = [0, 1, 0, 0].map(QuadExtElem::from_i64);
        assert_eq!(surface_form().eval(&p).unwrap(), QuadExtElem::one());
        let origin = [0, 0, 0, 0].map(QuadExtElem::from_i64);
        assert_eq!(surface_form().eval(&origin).unwrap(), QuadExtElem::from_i64(0));
    }

    #[test]
    fn surface_is_weighted_quartic() {
        assert_eq!(surface_form().homogeneous_degree(), Some(4));
        assert_eq!(branch_quartic().homogeneous_degree(), Some(4));
        assert_eq!(local_form().homogeneous_degree(), Some(4));
    }

    #[test]
    fn beta_relations() {
        assert_eq!(beta().power(4) - QuadExtElem::from_i64(2), cross_coefficient());
        assert_eq!(beta().power(2), QuadExtElem::new(rat(-3, 2), rat(-1, 2)));
        let mu = lift_multiplier();
        assert_eq!(mu.clone() * mu, TowerElem::from_base(-beta().power(4)));
    }

    #[test]
    fn surface_text() {
        assert_eq!(
            surface_form().to_text(),
            "1 * w^2 + 1 * x^4 + (-3/2 + 3/2*rt) * x^2 y^2 + (-3/2 + 3/2*rt) * x^2 z^2 \
             + 1 * y^4 + (-3/2 + 3/2*rt) * y^2 z^2 + 1 * z^4"
        );
        assert_eq!(cross_coefficient().to_text(), "-3/2 + 3/2*rt");
    }
}
