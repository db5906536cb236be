//! Sparse multivariate polynomials with per-variable weights.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::ring::Ring;
use super::ArithError;

/// Exponent vector, one entry per variable.
pub type Exponents = Vec<u32>;

/// Variable names and weights shared by a family of polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vars {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S], weights: &[u32]) -> Result<Arc<Self>, ArithError> {
        if names.len() != weights.len() {
            return Err(ArithError::DimensionMismatch {
                expected: names.len(),
                got: weights.len(),
            });
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(ArithError::InvalidWeight);
        }
        Ok(Arc::new(Self {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            weights: weights.to_vec(),
        }))
    }

    /// Unit weights.
    pub fn plain<S: AsRef<str>>(names: &[S]) -> Arc<Self> {
        Self::new(names, &vec![1; names.len()]).expect("unit weights are valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn weighted_degree(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }
}

/// A polynomial `Σ c_e · x^e` over the ring `C`.
///
/// Terms live in a `BTreeMap` keyed by exponent vector and zero coefficients
/// are never stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C> {
    vars: Arc<Vars>,
    terms: BTreeMap<Exponents, C>,
}

impl<C: Ring> Poly<C> {
    pub fn zero(vars: &Arc<Vars>) -> Self {
        Self {
            vars: Arc::clone(vars),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<Vars>, c: C) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    /// The `i`-th variable as a polynomial.
    pub fn var(vars: &Arc<Vars>, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, C::one())
    }

    pub fn monomial(vars: &Arc<Vars>, exps: Exponents, c: C) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        p.add_term(exps, c);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(vars: &Arc<Vars>, terms: I) -> Result<Self, ArithError>
    where
        I: IntoIterator<Item = (Exponents, C)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(ArithError::DimensionMismatch {
                    expected: vars.len(),
                    got: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn add_term(&mut self, exps: Exponents, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exps) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(exps, sum);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn vars(&self) -> &Arc<Vars> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Option<&C> {
        self.terms.get(exps)
    }

    /// Coefficient of `exps`, zero when absent.
    pub fn coeff_or_zero(&self, exps: &[u32]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero)
    }

    /// Largest exponent of variable `i` (0 for the zero polynomial).
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// `Some(D)` if every term has weighted degree `D`; `None` for the zero
    /// polynomial or a mixed one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| self.vars.weighted_degree(e));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, degree: u32) -> bool {
        self.terms
            .keys()
            .all(|e| self.vars.weighted_degree(e) == degree)
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn map_coeffs<D: Ring>(&self, mut f: impl FnMut(&C) -> D) -> Poly<D> {
        let mut out = Poly::zero(&self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Same terms, reinterpreted over another variable set of equal length.
    pub fn with_vars(&self, vars: &Arc<Vars>) -> Result<Self, ArithError> {
        if vars.len() != self.vars.len() {
            return Err(ArithError::DimensionMismatch {
                expected: self.vars.len(),
                got: vars.len(),
            });
        }
        Ok(Self {
            vars: Arc::clone(vars),
            terms: self.terms.clone(),
        })
    }

    fn check_same_vars(&self, other: &Self) -> Result<(), ArithError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(ArithError::VariableMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check_same_vars(other)?;
        let mut out = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn power(&self, exp: u32) -> Self {
        let mut acc = Self::constant(&self.vars, C::one());
        for _ in 0..exp {
            acc = acc.try_mul(self).expect("same variables");
        }
        acc
    }

    /// Exact value at `point`.
    pub fn eval(&self, point: &[C]) -> Result<C, ArithError> {
        if point.len() != self.vars.len() {
            return Err(ArithError::DimensionMismatch {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        let mut total = C::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = t * x.power(k);
                }
            }
            total = total + t;
        }
        Ok(total)
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Result<Self, ArithError> {
        if i >= self.vars.len() {
            return Err(ArithError::VariableOutOfRange(i));
        }
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c.clone() * C::from_i64(i64::from(e[i])));
        }
        Ok(out)
    }

    /// Replaces variable `i` by `assignments[i]` and expands.
    ///
    /// The result lives in the variable set of the assignments, which must all
    /// agree.
    pub fn substitute(&self, assignments: &[Poly<C>]) -> Result<Poly<C>, ArithError> {
        if assignments.len() != self.vars.len() {
            return Err(ArithError::DimensionMismatch {
                expected: self.vars.len(),
                got: assignments.len(),
            });
        }
        let target = match assignments.first() {
            Some(p) => Arc::clone(&p.vars),
            None => Arc::clone(&self.vars),
        };
        if assignments.iter().any(|p| p.vars != target) {
            return Err(ArithError::VariableMismatch);
        }

        // powers[i][k] = assignments[i]^k, built on demand up to the max exponent
        let mut powers: Vec<Vec<Poly<C>>> = Vec::with_capacity(assignments.len());
        for (i, a) in assignments.iter().enumerate() {
            let top = self.degree_in(i);
            let mut row = vec![Poly::constant(&target, C::one())];
            for k in 1..=top as usize {
                let next = row[k - 1].try_mul(a)?;
                row.push(next);
            }
            powers.push(row);
        }

        let mut out = Poly::constant(&target, C::zero());
        for (e, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.try_mul(&powers[i][k as usize])?;
                }
            }
            out = out.try_add(&t)?;
        }
        Ok(out)
    }

    /// Substitution that sends each variable to a constant multiple of itself.
    pub fn scale_vars(&self, factors: &[C]) -> Result<Self, ArithError> {
        if factors.len() != self.vars.len() {
            return Err(ArithError::DimensionMismatch {
                expected: self.vars.len(),
                got: factors.len(),
            });
        }
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (f, &k) in factors.iter().zip(e) {
                t = t * f.power(k);
            }
            out.add_term(e.clone(), t);
        }
        Ok(out)
    }
}

impl<C: Ring> Add for Poly<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("polynomials over different variables")
    }
}

impl<C: Ring> Sub for Poly<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("polynomials over different variables")
    }
}

impl<C: Ring> Mul for Poly<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("polynomials over different variables")
    }
}

impl<C: Ring> Neg for Poly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(&-C::one())
    }
}
