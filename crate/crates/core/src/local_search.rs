//! Exhaustive search for solutions of an integral form modulo `2^k`, and the
//! weighted descent that turns "no primitive solution mod 64" into "no
//! nonzero solution in `Q₂`".

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{rat, ArithError, CoeffText, Poly, Vars};
use crate::{Rational, RationalForm};

/// At most this many witnesses are kept per search.
pub const WITNESS_CAP: usize = 16;

/// Upper bound on `modulus^variables`.
pub const SEARCH_GUARD: u64 = 1 << 32;

pub const MAX_VARIABLES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("modulus exponent must be between 1 and 32, got {0}")]
    InvalidModulus(u32),
    #[error("coefficient {0} is not an integer")]
    NonIntegerCoefficient(String),
    #[error("{vars} variables exceed the limit of {MAX_VARIABLES}")]
    TooManyVariables { vars: usize },
    #[error("search space 2^{bits} exceeds the guard 2^32")]
    SearchSpaceTooLarge { bits: u64 },
    #[error("the parity classes need exactly the variables (w, x, y, z)")]
    ClassNeedsFourVariables,
    #[error("descent needs weights (2, 1, 1, 1), got {0:?}")]
    WrongWeights(Vec<u32>),
    #[error("form is not weighted-homogeneous of degree 4 (degree {0:?})")]
    NotHomogeneous(Option<u32>),
    #[error("descent identities do not hold for this form")]
    DescentFails,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Which residue tuples count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Primitivity {
    /// At least one coordinate is odd.
    #[serde(rename = "at-least-one-odd")]
    AtLeastOneOdd,
    /// Every tuple, including all-even ones.
    #[serde(rename = "none")]
    None,
}

impl Primitivity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Primitivity::AtLeastOneOdd => "at-least-one-odd",
            Primitivity::None => "none",
        }
    }
}

/// A form with integer coefficients to be searched modulo `2^k`.
#[derive(Debug, Clone)]
pub struct ResidueSearchSpec {
    form: RationalForm,
    exponent: u32,
    primitivity: Primitivity,
}

impl ResidueSearchSpec {
    pub fn new(form: RationalForm, exponent: u32, primitivity: Primitivity) -> Result<Self, SearchError> {
        if !(1..=32).contains(&exponent) {
            return Err(SearchError::InvalidModulus(exponent));
        }
        let n = form.vars().len();
        if n > MAX_VARIABLES {
            return Err(SearchError::TooManyVariables { vars: n });
        }
        let bits = u64::from(exponent) * n as u64;
        if bits > 32 {
            return Err(SearchError::SearchSpaceTooLarge { bits });
        }
        for (_, c) in form.terms() {
            if !c.is_integer() {
                return Err(SearchError::NonIntegerCoefficient(c.to_text()));
            }
        }
        Ok(Self {
            form,
            exponent,
            primitivity,
        })
    }

    pub fn form(&self) -> &RationalForm {
        &self.form
    }

    pub fn modulus(&self) -> u64 {
        1 << self.exponent
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn primitivity(&self) -> Primitivity {
        self.primitivity
    }
}

/// Outcome of [`enumerate_residue_solutions`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    /// Tuples that satisfied the primitivity predicate.
    pub tuples_enumerated: u64,
    /// Those among them with `f ≡ 0`.
    pub solutions: u64,
    /// The first solutions in lexicographic order, at most [`WITNESS_CAP`].
    pub witnesses: Vec<Vec<u64>>,
}

/// The form reduced mod `2^k`, with per-variable power tables.
struct Compiled {
    mask: u64,
    modulus: u64,
    nvars: usize,
    /// (coefficient mod 2^k, [(variable, exponent)])
    terms: Vec<(u64, Vec<(usize, usize)>)>,
    /// powers[var][exp][value] = value^exp mod 2^k
    powers: Vec<Vec<Vec<u64>>>,
}

impl Compiled {
    fn new(form: &RationalForm, exponent: u32) -> Self {
        let modulus = 1u64 << exponent;
        let mask = modulus - 1;
        let nvars = form.vars().len();
        let big_mod = BigInt::from(modulus);
        let terms = form
            .terms()
            .map(|(e, c)| {
                let r = c
                    .to_integer()
                    .mod_floor(&big_mod)
                    .to_u64()
                    .expect("reduced");
                let factors = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| (i, k as usize))
                    .collect();
                (r, factors)
            })
            .filter(|(r, _)| *r != 0)
            .collect();
        let powers = (0..nvars)
            .map(|i| {
                let top = form.degree_in(i) as usize;
                (0..=top)
                    .map(|k| {
                        (0..modulus)
                            .map(|x| {
                                let mut acc = 1u64;
                                for _ in 0..k {
                                    acc = acc.wrapping_mul(x) & mask;
                                }
                                acc
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            mask,
            modulus,
            nvars,
            terms,
            powers,
        }
    }

    #[inline]
    fn eval(&self, point: &[u64]) -> u64 {
        let mut total = 0u64;
        for (c, factors) in &self.terms {
            let mut t = *c;
            for &(i, k) in factors {
                t = t.wrapping_mul(self.powers[i][k][point[i] as usize]);
            }
            total = total.wrapping_add(t);
        }
        total & self.mask
    }

    /// Visits every tuple whose first coordinate is `first`, in lexicographic
    /// order.
    fn scan_slice<A>(&self, first: u64, init: A, mut visit: impl FnMut(&mut A, &[u64], u64)) -> A {
        let mut acc = init;
        let mut point = vec![0u64; self.nvars.max(1)];
        point[0] = first;
        if self.nvars == 0 {
            let v = self.eval(&[]);
            visit(&mut acc, &[], v);
            return acc;
        }
        loop {
            let v = self.eval(&point);
            visit(&mut acc, &point, v);
            // odometer over coordinates 1..n, last fastest
            let mut i = self.nvars - 1;
            loop {
                if i == 0 {
                    return acc;
                }
                point[i] += 1;
                if point[i] < self.modulus {
                    break;
                }
                point[i] = 0;
                i -= 1;
            }
        }
    }

    fn slices(&self) -> u64 {
        if self.nvars == 0 {
            1
        } else {
            self.modulus
        }
    }
}

fn is_primitive(point: &[u64]) -> bool {
    point.iter().any(|x| x & 1 == 1)
}

fn accepts(p: Primitivity, point: &[u64]) -> bool {
    match p {
        Primitivity::AtLeastOneOdd => is_primitive(point),
        Primitivity::None => true,
    }
}

fn search_slice(c: &Compiled, spec: &ResidueSearchSpec, first: u64) -> SearchResult {
    let init = SearchResult {
        tuples_enumerated: 0,
        solutions: 0,
        witnesses: Vec::new(),
    };
    c.scan_slice(first, init, |acc, point, value| {
        if !accepts(spec.primitivity, point) {
            return;
        }
        acc.tuples_enumerated += 1;
        if value == 0 {
            acc.solutions += 1;
            if acc.witnesses.len() < WITNESS_CAP {
                acc.witnesses.push(point.to_vec());
            }
        }
    })
}

fn merge(parts: Vec<SearchResult>) -> SearchResult {
    let mut out = SearchResult {
        tuples_enumerated: 0,
        solutions: 0,
        witnesses: Vec::new(),
    };
    for p in parts {
        out.tuples_enumerated += p.tuples_enumerated;
        out.solutions += p.solutions;
        for w in p.witnesses {
            if out.witnesses.len() < WITNESS_CAP {
                out.witnesses.push(w);
            }
        }
    }
    out
}

/// Counts tuples in `(Z/2^k)^n` with `f ≡ 0 mod 2^k` that satisfy the
/// primitivity predicate.
///
/// The search is split by the value of the first coordinate and run on the
/// current rayon pool; partial results are merged in slice order, so the
/// outcome does not depend on the number of threads.
pub fn enumerate_residue_solutions(spec: &ResidueSearchSpec) -> SearchResult {
    let c = Compiled::new(&spec.form, spec.exponent);
    let parts: Vec<SearchResult> = (0..c.slices())
        .into_par_iter()
        .map(|first| search_slice(&c, spec, first))
        .collect();
    merge(parts)
}

/// Single-threaded [`enumerate_residue_solutions`].
pub fn enumerate_residue_solutions_serial(spec: &ResidueSearchSpec) -> SearchResult {
    let c = Compiled::new(&spec.form, spec.exponent);
    let parts = (0..c.slices()).map(|first| search_slice(&c, spec, first)).collect();
    merge(parts)
}

/// `residue ≡ value mod 2^bits` on one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Congruence {
    pub var: usize,
    pub bits: u32,
    pub residue: u64,
}

/// Subsets of tuples over `(w, x, y, z)` used to profile the values of `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TupleClass {
    /// Every tuple.
    All,
    /// At least one odd coordinate.
    Primitive,
    /// `w, x, y, z` all odd.
    AllOdd,
    /// `w` odd and exactly one of `x, y, z` odd.
    WOddOneOdd,
    /// `w` even and exactly one of `x, y, z` even.
    WEvenOneEven,
    /// An odd number of odd coordinates (then `f` itself is odd).
    OddCount,
    /// Conjunction of congruences on individual coordinates.
    Custom(Vec<Congruence>),
}

impl TupleClass {
    /// The four classes that partition the primitive tuples.
    pub fn primitive_partition() -> [TupleClass; 4] {
        [
            TupleClass::AllOdd,
            TupleClass::WOddOneOdd,
            TupleClass::WEvenOneEven,
            TupleClass::OddCount,
        ]
    }

    /// Inverse of [`TupleClass::name`] for the named classes.
    pub fn from_name(name: &str) -> Option<TupleClass> {
        Some(match name {
            "all" => TupleClass::All,
            "primitive" => TupleClass::Primitive,
            "all-odd" => TupleClass::AllOdd,
            "w-odd-one-odd" => TupleClass::WOddOneOdd,
            "w-even-one-even" => TupleClass::WEvenOneEven,
            "odd-count" => TupleClass::OddCount,
            _ => return None,
        })
    }

    pub fn name(&self) -> String {
        match self {
            TupleClass::All => "all".into(),
            TupleClass::Primitive => "primitive".into(),
            TupleClass::AllOdd => "all-odd".into(),
            TupleClass::WOddOneOdd => "w-odd-one-odd".into(),
            TupleClass::WEvenOneEven => "w-even-one-even".into(),
            TupleClass::OddCount => "odd-count".into(),
            TupleClass::Custom(cs) => {
                let parts: Vec<String> = cs
                    .iter()
                    .map(|c| format!("v{}={}mod{}", c.var, c.residue, 1u64 << c.bits))
                    .collect();
                format!("custom({})", parts.join(","))
            }
        }
    }

    fn needs_four_vars(&self) -> bool {
        matches!(
            self,
            TupleClass::AllOdd | TupleClass::WOddOneOdd | TupleClass::WEvenOneEven
        )
    }

    fn contains(&self, p: &[u64]) -> bool {
        let odd = |i: usize| p[i] & 1 == 1;
        match self {
            TupleClass::All => true,
            TupleClass::Primitive => is_primitive(p),
            TupleClass::AllOdd => p.iter().all(|x| x & 1 == 1),
            TupleClass::WOddOneOdd => odd(0) && (1..4).filter(|&i| odd(i)).count() == 1,
            TupleClass::WEvenOneEven => !odd(0) && (1..4).filter(|&i| !odd(i)).count() == 1,
            TupleClass::OddCount => p.iter().filter(|x| *x & 1 == 1).count() % 2 == 1,
            TupleClass::Custom(cs) => cs
                .iter()
                .all(|c| p[c.var] & ((1u64 << c.bits) - 1) == c.residue),
        }
    }
}

/// Multiset of values `f mod 2^k` over the tuples in `class`, as
/// `residue -> count`.
pub fn residue_profile(
    form: &RationalForm,
    exponent: u32,
    class: &TupleClass,
) -> Result<BTreeMap<u64, u64>, SearchError> {
    let spec = ResidueSearchSpec::new(form.clone(), exponent, Primitivity::None)?;
    if class.needs_four_vars() && form.vars().len() != 4 {
        return Err(SearchError::ClassNeedsFourVariables);
    }
    if let TupleClass::Custom(cs) = class {
        if cs.iter().any(|c| c.var >= form.vars().len() || c.bits > 32) {
            return Err(SearchError::ClassNeedsFourVariables);
        }
    }
    let c = Compiled::new(&spec.form, spec.exponent);
    let parts: Vec<BTreeMap<u64, u64>> = (0..c.slices())
        .into_par_iter()
        .map(|first| {
            c.scan_slice(first, BTreeMap::new(), |acc, point, value| {
                if class.contains(point) {
                    *acc.entry(value).or_insert(0) += 1;
                }
            })
        })
        .collect();
    let mut out = BTreeMap::new();
    for p in parts {
        for (r, n) in p {
            *out.entry(r).or_insert(0) += n;
        }
    }
    Ok(out)
}

/// Result of [`descent_reduction_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentCheck {
    pub holds: bool,
    pub trace: Vec<String>,
}

/// Symbolically checks the two identities behind the 2-adic descent for a
/// form `f(w, x, y, z)` of weights `(2, 1, 1, 1)` and degree 4:
///
/// (a) `f(2w, 2x, 2y, 2z) = 4·(a·w² + 4·h(x, y, z))` with `a` odd, where
///     `a·w²` is the `w`-part of `f` and `h` the rest; so a solution with all
///     coordinates even has `4 | w²`;
/// (b) `f(λ²w, λx, λy, λz) = λ⁴·f(w, x, y, z)`, both for a formal `λ` and
///     for `λ = 2`.
pub fn descent_reduction_check(form: &RationalForm) -> Result<DescentCheck, SearchError> {
    let vars = form.vars();
    if vars.weights() != [2, 1, 1, 1] {
        return Err(SearchError::WrongWeights(vars.weights().to_vec()));
    }
    if !form.is_homogeneous_of(4) || form.is_zero() {
        return Err(SearchError::NotHomogeneous(form.homogeneous_degree()));
    }
    for (_, c) in form.terms() {
        if !c.is_integer() {
            return Err(SearchError::NonIntegerCoefficient(c.to_text()));
        }
    }

    let mut trace = vec![format!("f = {}", form.to_text())];

    // (a)
    let w2 = vec![2, 0, 0, 0];
    let a = form.coeff_or_zero(&w2);
    let w_part = Poly::monomial(vars, w2.clone(), a.clone());
    let rest = form.try_sub(&w_part)?;
    let two = rat(2, 1);
    let doubled = form.scale_vars(&[two.clone(), two.clone(), two.clone(), two.clone()])?;
    let claimed = w_part.scale(&rat(4, 1)).try_add(&rest.scale(&rat(16, 1)))?;
    let identity_a = doubled == claimed;
    let a_odd = a.is_integer() && a.to_integer().is_odd();
    trace.push(format!("f(2w,2x,2y,2z) = {}", doubled.to_text()));
    trace.push(format!(
        "4*({} + 4*({})) = {}",
        w_part.to_text(),
        rest.to_text(),
        claimed.to_text()
    ));
    trace.push(format!(
        "(a) f(2w,2x,2y,2z) = 4*(a*w^2 + 4*h): {}; a = {} is odd: {}",
        identity_a,
        a.to_text(),
        a_odd
    ));

    // (b) with a formal lambda
    let ext = Vars::new(&["w", "x", "y", "z", "lambda"], &[2, 1, 1, 1, 1])?;
    let lifted = Poly::from_terms(
        &ext,
        form.terms().map(|(e, c)| {
            let mut e = e.clone();
            e.push(0);
            (e, c.clone())
        }),
    )?;
    let lam = Poly::<Rational>::var(&ext, 4);
    let subst = [
        Poly::var(&ext, 0).try_mul(&lam.power(2))?,
        Poly::var(&ext, 1).try_mul(&lam)?,
        Poly::var(&ext, 2).try_mul(&lam)?,
        Poly::var(&ext, 3).try_mul(&lam)?,
        lam.clone(),
    ];
    let scaled = lifted.substitute(&subst)?;
    let identity_b = scaled == lifted.try_mul(&lam.power(4))?;
    trace.push(format!(
        "(b) f(lambda^2 w, lambda x, lambda y, lambda z) = lambda^4 f symbolically: {identity_b}"
    ));

    let four = rat(4, 1);
    let at_two = form.scale_vars(&[four, two.clone(), two.clone(), two])?;
    let identity_b2 = at_two == form.scale(&rat(16, 1));
    trace.push(format!(
        "(b) f(4w, 2x, 2y, 2z) = 16 f(w, x, y, z): {identity_b2}"
    ));

    Ok(DescentCheck {
        holds: identity_a && a_odd && identity_b && identity_b2,
        trace,
    })
}

/// Verdict of a `Q₂`-insolubility attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InsolubilityVerdict {
    #[serde(rename = "no nonzero Q2 solution")]
    NoNonzeroQ2Solution,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

/// Certificate that a weighted quartic has no nonzero `Q₂`-point.
#[derive(Debug, Clone, Serialize)]
pub struct InsolubilityCertificate {
    pub form: String,
    pub modulus: u64,
    pub predicate: Primitivity,
    pub tuples_enumerated: u64,
    pub solutions_found: u64,
    pub witnesses: Vec<Vec<u64>>,
    pub descent_trace: Vec<String>,
    pub reduction_trace: Vec<String>,
    pub verdict: InsolubilityVerdict,
    pub wall_time_ms: u64,
}

/// Exponent of the modulus searched by [`q2_insolubility_certificate`].
pub const INSOLUBILITY_EXPONENT: u32 = 6;

/// Descent check followed by the primitive search modulo 64.
pub fn q2_insolubility_certificate(
    form: &RationalForm,
) -> Result<InsolubilityCertificate, SearchError> {
    let start = Instant::now();
    let descent = descent_reduction_check(form)?;
    if !descent.holds {
        return Err(SearchError::DescentFails);
    }
    let spec = ResidueSearchSpec::new(form.clone(), INSOLUBILITY_EXPONENT, Primitivity::AtLeastOneOdd)?;
    let result = enumerate_residue_solutions(&spec);
    let modulus = spec.modulus();
    let verdict = if result.solutions == 0 {
        InsolubilityVerdict::NoNonzeroQ2Solution
    } else {
        InsolubilityVerdict::Inconclusive
    };

    let mut chain = vec![
        "suppose f(P) = 0 for some nonzero P = (w, x, y, z) in Q2^4".to_string(),
        "scale P by (lambda^2 w, lambda x, lambda y, lambda z) with lambda a power of 2; \
         f is multiplied by lambda^4 (identity b), so P may be taken in Z2^4"
            .to_string(),
        "while x, y, z and w are all even: identity (a) gives 4 | w^2, so w = 2*w1 with w1 even, \
         and P = (4*w2, 2*x1, 2*y1, 2*z1) is the lambda = 2 scaling of (w2, x1, y1, z1), \
         again a solution by identity (b); the total 2-adic valuation of the nonzero \
         coordinates drops, so this ends with a solution having an odd coordinate"
            .to_string(),
        format!(
            "reducing that solution mod {modulus} gives a tuple with an odd coordinate and f = 0 mod {modulus}"
        ),
        format!(
            "exhaustive search: {} of {} such tuples satisfy f = 0 mod {modulus}",
            result.solutions, result.tuples_enumerated
        ),
    ];
    chain.push(match verdict {
        InsolubilityVerdict::NoNonzeroQ2Solution => {
            "contradiction: f has no nonzero solution in Q2".to_string()
        }
        InsolubilityVerdict::Inconclusive => {
            "primitive residue solutions exist; the search does not decide Q2-solubility".to_string()
        }
    });

    Ok(InsolubilityCertificate {
        form: form.to_text(),
        modulus,
        predicate: spec.primitivity,
        tuples_enumerated: result.tuples_enumerated,
        solutions_found: result.solutions,
        witnesses: result.witnesses,
        descent_trace: descent.trace,
        reduction_trace: chain,
        verdict,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

/// Whether `point` solves `f ≡ 0 mod 2^exponent`, computed with big integers.
pub fn is_residue_solution(form: &RationalForm, exponent: u32, point: &[i64]) -> Result<bool, SearchError> {
    let pt: Vec<Rational> = point.iter().map(|&x| rat(x, 1)).collect();
    let v = form.eval(&pt)?;
    if !v.denom().is_one() {
        return Err(SearchError::NonIntegerCoefficient(v.to_text()));
    }
    let m = BigInt::from(1u64) << exponent;
    Ok(v.numer().mod_floor(&m) == BigInt::from(0))
}
