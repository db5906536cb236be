//! Plain-text format for coefficients and polynomials.
//!
//! Coefficients:
//!
//! * rationals print as `p` or `p/q` (`q > 1`, sign on the numerator);
//! * an element of `F(√d)` prints as `a`, `b*g` or `a + b*g`, where `g` is
//!   `i` for `d = -1` and `rt` otherwise; parts that are themselves
//!   extension elements are parenthesized.
//!
//! Polynomials are ` + `-separated terms `coeff * x^a y^b`, in descending
//! exponent order, with `1` as the constant monomial and `0` for the zero
//! polynomial. A coefficient containing a space is parenthesized.
//! `print(parse(s)) == s` for every string produced by the printer.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Poly, Vars};
use super::quad::QuadExt;
use super::ring::Ring;
use super::ArithError;

/// Coefficient types with a canonical textual form.
pub trait CoeffText: Sized {
    /// True when the printed form may contain spaces or operators.
    const COMPOUND: bool;

    fn write_text(&self, out: &mut String);

    fn parse_text(s: &str) -> Result<Self, ArithError>;

    fn to_text(&self) -> String {
        let mut s = String::new();
        self.write_text(&mut s);
        s
    }
}

fn parse_err(msg: impl Into<String>) -> ArithError {
    ArithError::Parse(msg.into())
}

impl CoeffText for BigRational {
    const COMPOUND: bool = false;

    fn write_text(&self, out: &mut String) {
        if self.denom().is_one() {
            out.push_str(&self.numer().to_string());
        } else {
            out.push_str(&format!("{}/{}", self.numer(), self.denom()));
        }
    }

    fn parse_text(s: &str) -> Result<Self, ArithError> {
        let s = s.trim();
        let int = |t: &str| -> Result<BigInt, ArithError> {
            let ok = !t.is_empty()
                && t.strip_prefix('-')
                    .unwrap_or(t)
                    .chars()
                    .all(|c| c.is_ascii_digit())
                && t != "-";
            if !ok {
                return Err(parse_err(format!("bad integer `{t}`")));
            }
            t.parse::<BigInt>()
                .map_err(|e| parse_err(format!("bad integer `{t}`: {e}")))
        };
        match s.split_once('/') {
            None => Ok(BigRational::from_integer(int(s)?)),
            Some((n, d)) => {
                let d = int(d)?;
                if d.is_zero() {
                    return Err(parse_err("zero denominator"));
                }
                Ok(BigRational::new(int(n)?, d))
            }
        }
    }
}

/// Name printed for `√D`.
fn generator_name(d: i64) -> &'static str {
    if d == -1 {
        "i"
    } else {
        "rt"
    }
}

/// Strips one pair of parentheses enclosing the whole string.
fn strip_outer_parens(s: &str) -> &str {
    let s = s.trim();
    if !(s.starts_with('(') && s.ends_with(')')) {
        return s;
    }
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i != s.len() - 1 {
                    return s;
                }
            }
            _ => {}
        }
    }
    &s[1..s.len() - 1]
}

/// Splits on `sep` where it occurs outside parentheses.
fn split_top_level<'a>(s: &'a str, sep: &str) -> Vec<&'a str> {
    let bytes = s.as_bytes();
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && s[i..].starts_with(sep) {
            parts.push(&s[start..i]);
            i += sep.len();
            start = i;
            continue;
        }
        i += 1;
    }
    parts.push(&s[start..]);
    parts
}

impl<F: Ring + CoeffText, const D: i64> CoeffText for QuadExt<F, D> {
    const COMPOUND: bool = true;

    fn write_text(&self, out: &mut String) {
        let part = |x: &F, out: &mut String| {
            if F::COMPOUND {
                out.push('(');
                x.write_text(out);
                out.push(')');
            } else {
                x.write_text(out);
            }
        };
        let g = generator_name(D);
        if self.b.is_zero() {
            part(&self.a, out);
        } else if self.a.is_zero() {
            part(&self.b, out);
            out.push('*');
            out.push_str(g);
        } else {
            part(&self.a, out);
            out.push_str(" + ");
            part(&self.b, out);
            out.push('*');
            out.push_str(g);
        }
    }

    fn parse_text(s: &str) -> Result<Self, ArithError> {
        let g = generator_name(D);
        let suffix = format!("*{g}");
        let pieces = split_top_level(s.trim(), " + ");
        if pieces.len() > 2 {
            return Err(parse_err(format!("too many parts in `{s}`")));
        }
        let mut a = None;
        let mut b = None;
        for piece in pieces {
            let piece = piece.trim();
            let (slot, body) = match piece.strip_suffix(&suffix) {
                Some(body) => (&mut b, body),
                None => (&mut a, piece),
            };
            if slot.is_some() {
                return Err(parse_err(format!("repeated part in `{s}`")));
            }
            *slot = Some(F::parse_text(strip_outer_parens(body))?);
        }
        Ok(Self::new(
            a.unwrap_or_else(F::zero),
            b.unwrap_or_else(F::zero),
        ))
    }
}

impl<C: Ring + CoeffText> Poly<C> {
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let names = self.vars().names();
        let mut out = String::new();
        for (k, (e, c)) in self.terms().rev().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            let ct = c.to_text();
            if ct.contains(' ') {
                out.push('(');
                out.push_str(&ct);
                out.push(')');
            } else {
                out.push_str(&ct);
            }
            out.push_str(" * ");
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(&k, _)| k > 0)
                .map(|(k, n)| format!("{n}^{k}"))
                .collect();
            if mono.is_empty() {
                out.push('1');
            } else {
                out.push_str(&mono.join(" "));
            }
        }
        out
    }

    /// Parses the output of [`Poly::to_text`] over the given variables.
    ///
    /// Also accepts a bare coefficient as a constant term and repeated
    /// monomials (which are summed).
    pub fn parse(text: &str, vars: &Arc<Vars>) -> Result<Self, ArithError> {
        let text = text.trim();
        let mut p = Poly::zero(vars);
        if text == "0" {
            return Ok(p);
        }
        for term in split_top_level(text, " + ") {
            let term = term.trim();
            let parts = split_top_level(term, " * ");
            let (coeff_txt, mono_txt) = match parts.as_slice() {
                [c, m] => (*c, *m),
                [c] => (*c, "1"),
                _ => return Err(parse_err(format!("bad term `{term}`"))),
            };
            let c = C::parse_text(strip_outer_parens(coeff_txt))?;
            let mut exps = vec![0u32; vars.len()];
            if mono_txt.trim() != "1" {
                for factor in mono_txt.split_whitespace() {
                    let (name, k) = factor
                        .split_once('^')
                        .ok_or_else(|| parse_err(format!("bad factor `{factor}`")))?;
                    let i = vars
                        .index_of(name)
                        .ok_or_else(|| parse_err(format!("unknown variable `{name}`")))?;
                    let k: u32 = k
                        .parse()
                        .map_err(|_| parse_err(format!("bad exponent in `{factor}`")))?;
                    exps[i] += k;
                }
            }
            p.add_term(exps, c);
        }
        Ok(p)
    }
}

impl<C: Ring + CoeffText> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::rat;

    type Q7 = QuadExt<BigRational, -7>;
    type T7 = QuadExt<Q7, -1>;

    #[test]
    fn rational_text() {
        assert_eq!(rat(-3, 2).to_text(), "-3/2");
        assert_eq!(rat(4, 2).to_text(), "2");
        assert_eq!(BigRational::parse_text("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(BigRational::parse_text("6/4").unwrap(), rat(3, 2));
        assert!(BigRational::parse_text("1/0").is_err());
        assert!(BigRational::parse_text("--1").is_err());
        assert!(BigRational::parse_text("").is_err());
    }

    #[test]
    fn quad_text() {
        let c = Q7::new(rat(-3, 2), rat(3, 2));
        assert_eq!(c.to_text(), "-3/2 + 3/2*rt");
        assert_eq!(Q7::parse_text("-3/2 + 3/2*rt").unwrap(), c);
        assert_eq!(Q7::generator().to_text(), "1*rt");
        assert_eq!(Q7::zero().to_text(), "0");
        assert_eq!(Q7::parse_text("5").unwrap(), Q7::from_i64(5));
    }

    #[test]
    fn tower_text() {
        let t = T7::new(Q7::new(rat(1, 1), rat(2, 1)), Q7::new(rat(0, 1), rat(-1, 2)));
        let s = t.to_text();
        assert_eq!(s, "(1 + 2*rt) + (-1/2*rt)*i");
        assert_eq!(T7::parse_text(&s).unwrap(), t);
        let only_i = T7::new(Q7::zero(), Q7::one());
        assert_eq!(only_i.to_text(), "(1)*i");
        assert_eq!(T7::parse_text("(1)*i").unwrap(), only_i);
    }

    #[test]
    fn poly_text_roundtrip() {
        let v = Vars::new(&["w", "x", "y", "z"], &[2, 1, 1, 1]).unwrap();
        let s = "1 * w^2 + 1 * x^4 + (-3/2 + 3/2*rt) * x^2 y^2 + 7 * 1";
        let p = Poly::<Q7>::parse(s, &v).unwrap();
        let printed = p.to_text();
        assert_eq!(printed, "1 * w^2 + 1 * x^4 + (-3/2 + 3/2*rt) * x^2 y^2 + 7 * 1");
        assert_eq!(Poly::<Q7>::parse(&printed, &v).unwrap(), p);
    }

    #[test]
    fn poly_parse_errors() {
        let v = Vars::plain(&["x", "y"]);
        assert!(Poly::<BigRational>::parse("1 * q^2", &v).is_err());
        assert!(Poly::<BigRational>::parse("1 * x2", &v).is_err());
        assert!(Poly::<BigRational>::parse("a * x^2", &v).is_err());
        assert!(Poly::<BigRational>::parse("0", &v).unwrap().is_zero());
    }
}
