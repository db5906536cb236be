//! Geometry of the branch quartic and the double cover.
//!
//! Quartics are [`QuadForm`]s in three unit-weight variables; surfaces are
//! [`QuadForm`]s in `(w, x, y, z)` with weights `(2, 1, 1, 1)` of the shape
//! `w² + C(x, y, z)`. Lines on the surface live over `Q(√-7, i)`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{ArithError, Field, Poly, Ring, Vars};
use crate::{QuadExtElem, QuadForm, Rational, TowerElem, TowerForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("expected a homogeneous quartic in three unit-weight variables")]
    NotTernaryQuartic,
    #[error("expected a surface w^2 + C(x, y, z) with weights (2, 1, 1, 1)")]
    NotDoubleCover,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{s}^2 is not -7 mod {p}")]
    BadSquareRoot { p: u64, s: u64 },
    #[error("the quartic involves √-7, so a square root of -7 mod {p} is required")]
    MissingSquareRoot { p: u64 },
    #[error("{p} divides a coefficient denominator")]
    BadReduction { p: u64 },
    #[error("line has all coefficients zero")]
    ZeroLine,
    #[error("malformed lift: {0}")]
    MalformedLift(String),
    #[error("lift does not lie on the surface")]
    UnverifiedLift,
    #[error("matrix is not invertible")]
    SingularMatrix,
    #[error("matrix must be {expected}x{expected}")]
    MatrixShape { expected: usize },
    #[error("matrix mixes variables of different weights")]
    WeightViolation,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Checks that `q` is a ternary quartic.
pub fn check_ternary_quartic(q: &QuadForm) -> Result<(), GeometryError> {
    let v = q.vars();
    if v.len() != 3 || v.weights().iter().any(|&w| w != 1) || !q.is_homogeneous_of(4) {
        return Err(GeometryError::NotTernaryQuartic);
    }
    Ok(())
}

/// Checks the surface shape and returns its branch quartic in `(x, y, z)`.
pub fn branch_of_surface(s: &QuadForm) -> Result<QuadForm, GeometryError> {
    let v = s.vars();
    if v.len() != 4 || v.weights() != [2, 1, 1, 1] || !s.is_homogeneous_of(4) {
        return Err(GeometryError::NotDoubleCover);
    }
    if s.coeff(&[2, 0, 0, 0]) != Some(&QuadExtElem::one()) {
        return Err(GeometryError::NotDoubleCover);
    }
    let plane = Vars::new(&v.names()[1..], &[1, 1, 1])?;
    let mut c = Poly::zero(&plane);
    for (e, coeff) in s.terms() {
        match e[0] {
            0 => c.add_term(e[1..].to_vec(), coeff.clone()),
            2 => {}
            _ => return Err(GeometryError::NotDoubleCover),
        }
    }
    Ok(c)
}

// ---------------------------------------------------------------------------
// Smoothness by reduction mod p

fn is_odd_prime(p: u64) -> bool {
    p >= 3 && p % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(p)) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

fn rational_mod(x: &Rational, p: u64) -> Result<u64, GeometryError> {
    let pb = BigInt::from(p);
    let d = x.denom().mod_floor(&pb).to_u64().expect("reduced mod p");
    if d == 0 {
        return Err(GeometryError::BadReduction { p });
    }
    let n = x.numer().mod_floor(&pb).to_u64().expect("reduced mod p");
    Ok(mul_mod(n, pow_mod(d, p - 2, p), p))
}

/// A ternary form over `F_p` as `(exponents, coefficient)` pairs.
type ModForm = Vec<([u32; 3], u64)>;

fn reduce_quartic(q: &QuadForm, p: u64, root: u64) -> Result<ModForm, GeometryError> {
    let mut out = Vec::new();
    for (e, c) in q.terms() {
        let a = rational_mod(&c.a, p)?;
        let b = rational_mod(&c.b, p)?;
        let v = (a + mul_mod(b, root, p)) % p;
        if v != 0 {
            out.push(([e[0], e[1], e[2]], v));
        }
    }
    Ok(out)
}

fn partial_mod(f: &ModForm, i: usize, p: u64) -> ModForm {
    f.iter()
        .filter(|(e, _)| e[i] > 0)
        .filter_map(|(e, c)| {
            let mut d = *e;
            d[i] -= 1;
            let v = mul_mod(*c, u64::from(e[i]) % p, p);
            (v != 0).then_some((d, v))
        })
        .collect()
}

fn eval_mod(f: &ModForm, pt: [u64; 3], p: u64) -> u64 {
    f.iter().fold(0, |acc, (e, c)| {
        let mut t = *c;
        for k in 0..3 {
            t = mul_mod(t, pow_mod(pt[k], u64::from(e[k]), p), p);
        }
        (acc + t) % p
    })
}

/// Normalized representatives of `P²(F_p)`, in scan order.
fn projective_point(p: u64, idx: u64) -> [u64; 3] {
    let affine = p * p;
    if idx < affine {
        [1, idx / p, idx % p]
    } else if idx < affine + p {
        [0, 1, idx - affine]
    } else {
        [0, 0, 1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionVerdict {
    Smooth,
    /// First point in scan order where the form and all partials vanish.
    Singular { point: [u64; 3] },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootScan {
    /// The residue used for `√-7`.
    pub root: u64,
    pub points_scanned: u64,
    pub verdict: ReductionVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothnessReport {
    pub prime: u64,
    pub scans: Vec<RootScan>,
}

impl SmoothnessReport {
    /// Smooth if the reduction at some prime above `p` is smooth.
    pub fn is_smooth(&self) -> bool {
        self.scans.iter().any(|s| s.verdict == ReductionVerdict::Smooth)
    }
}

/// Scans `P²(F_p)` for singular points of the reduction of `quartic`, for
/// both `√-7 ↦ s` and `√-7 ↦ -s`.
///
/// `s` may be omitted when every coefficient is rational; the single scan is
/// then recorded with root 0.
///
/// A smooth reduction at a prime of good reduction implies the curve is
/// smooth over `Q(√-7)`, since the singular locus is closed and would
/// specialize.
pub fn smooth_via_good_reduction(
    quartic: &QuadForm,
    p: u64,
    s: Option<u64>,
) -> Result<SmoothnessReport, GeometryError> {
    check_ternary_quartic(quartic)?;
    if !is_odd_prime(p) || p >= 1 << 31 {
        return Err(GeometryError::NotOddPrime(p));
    }
    let roots: BTreeSet<u64> = match s {
        Some(s) => {
            let s = s % p;
            if (mul_mod(s, s, p) + 7) % p != 0 {
                return Err(GeometryError::BadSquareRoot { p, s });
            }
            [s, (p - s) % p].into_iter().collect()
        }
        None if quartic.terms().all(|(_, c)| c.is_base()) => [0].into_iter().collect(),
        None => return Err(GeometryError::MissingSquareRoot { p }),
    };
    let total = p * p + p + 1;
    let mut scans = Vec::new();
    for root in roots {
        let f = reduce_quartic(quartic, p, root)?;
        let grads: Vec<ModForm> = (0..3).map(|i| partial_mod(&f, i, p)).collect();
        let singular = (0..total).into_par_iter().find_first(|&idx| {
            let pt = projective_point(p, idx);
            eval_mod(&f, pt, p) == 0 && grads.iter().all(|g| eval_mod(g, pt, p) == 0)
        });
        let verdict = match singular {
            None => ReductionVerdict::Smooth,
            Some(idx) => ReductionVerdict::Singular { point: projective_point(p, idx) },
        };
        scans.push(RootScan { root, points_scanned: total, verdict });
    }
    Ok(SmoothnessReport { prime: p, scans })
}

/// Some `s` with `s² ≡ -7 mod p`, by search.
pub fn sqrt_minus7_mod(p: u64) -> Option<u64> {
    if !is_odd_prime(p) {
        return None;
    }
    let target = (p - 7 % p) % p;
    (0..p).find(|&s| mul_mod(s, s, p) == target)
}

/// Points with coordinates in `{0, ±1}` (one per `±` pair) where the form and
/// all three partials vanish exactly.
pub fn small_common_zeros(quartic: &QuadForm) -> Result<Vec<[i64; 3]>, GeometryError> {
    check_ternary_quartic(quartic)?;
    let grads: Vec<QuadForm> = (0..3).map(|i| quartic.partial(i)).collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for a in -1..=1i64 {
        for b in -1..=1i64 {
            for c in -1..=1i64 {
                let pt = [a, b, c];
                let lead = pt.iter().copied().find(|&t| t != 0);
                if lead != Some(1) {
                    continue;
                }
                let v = pt.map(QuadExtElem::from_i64);
                if quartic.eval(&v)?.is_zero()
                    && grads.iter().all(|g| g.eval(&v).map(|x| x.is_zero()).unwrap_or(false))
                {
                    out.push(pt);
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Lines and bitangents

/// The linear form `l₀x + l₁y + l₂z`.
pub type Line = [QuadExtElem; 3];

fn eliminated_index(line: &Line) -> Result<usize, GeometryError> {
    (0..3).rev().find(|&j| !line[j].is_zero()).ok_or(GeometryError::ZeroLine)
}

/// Assignments sending `x_j ↦ -(Σ_{i≠j} lᵢxᵢ)/l_j` and fixing the others,
/// written in `target` where plane variable `i` is `target` variable
/// `i + offset`.
fn line_assignments<C: Ring>(
    line: &Line,
    target: &Arc<Vars>,
    offset: usize,
    lift: impl Fn(&QuadExtElem) -> C,
) -> Result<(usize, Vec<Poly<C>>), GeometryError> {
    let j = eliminated_index(line)?;
    let inv = line[j].inverse().expect("nonzero");
    let mut solved = Poly::zero(target);
    for i in (0..3).filter(|&i| i != j) {
        let k = -(line[i].clone() * inv.clone());
        solved = solved + Poly::var(target, i + offset).scale(&lift(&k));
    }
    let assign = (0..3)
        .map(|i| if i == j { solved.clone() } else { Poly::var(target, i + offset) })
        .collect();
    Ok((j, assign))
}

/// Restricts a ternary form to a line, as a binary form in the two variables
/// other than the eliminated one.
pub fn restrict_to_line(form: &QuadForm, line: &Line) -> Result<(usize, QuadForm), GeometryError> {
    if form.vars().len() != 3 {
        return Err(GeometryError::NotTernaryQuartic);
    }
    let (j, assign) = line_assignments(line, form.vars(), 0, Clone::clone)?;
    let on_line = form.substitute(&assign)?;
    let keep: Vec<usize> = (0..3).filter(|&i| i != j).collect();
    let names: Vec<&str> = keep.iter().map(|&i| form.vars().names()[i].as_str()).collect();
    let bin = Vars::plain(&names);
    let to_bin: Vec<QuadForm> = (0..3)
        .map(|i| match keep.iter().position(|&k| k == i) {
            Some(pos) => Poly::var(&bin, pos),
            None => Poly::zero(&bin),
        })
        .collect();
    Ok((j, on_line.substitute(&to_bin)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangencyKind {
    /// Restriction is `α·q²` with `q` of distinct roots.
    Bitangent,
    /// Restriction is `α·ℓ⁴`: one point of contact of order four.
    Hyperflex,
    NotBitangent,
    /// The restriction vanishes identically.
    LineInCurve,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BitangentReport {
    pub kind: TangencyKind,
    /// Index of the variable solved for.
    pub eliminated: usize,
    /// The binary quartic `b` obtained on the line.
    pub restriction: QuadForm,
    /// `q` and `α` with `b = α·q²`, when the restriction is a square.
    pub square_root: Option<(QuadForm, QuadExtElem)>,
}

impl BitangentReport {
    pub fn is_bitangent(&self) -> bool {
        self.kind == TangencyKind::Bitangent
    }
}

/// Writes a binary quartic as `α·q²`, with `q` monic in the first variable
/// when possible.
fn binary_square_root(b: &QuadForm) -> Option<(QuadForm, QuadExtElem)> {
    let vars = b.vars();
    let c = |k: u32| b.coeff_or_zero(&[4 - k, k]);
    let quad = |q0: QuadExtElem, q1: QuadExtElem, q2: QuadExtElem| {
        Poly::from_terms(vars, [(vec![2, 0], q0), (vec![1, 1], q1), (vec![0, 2], q2)])
            .expect("binary exponents")
    };
    let half = QuadExtElem::from_i64(2).inverse().expect("2 is invertible");
    let monic = |lead: &QuadExtElem, cs: [QuadExtElem; 4]| -> Option<(QuadExtElem, QuadExtElem)> {
        let inv = lead.inverse()?;
        let [c1, c2, c3, c4] = cs.map(|x| x * inv.clone());
        // (u² + s·uv + r·v²)² = u⁴ + 2s u³v + (s² + 2r) u²v² + 2sr uv³ + r² v⁴
        let s = c1 * half.clone();
        let r = (c2 - s.clone() * s.clone()) * half.clone();
        let ok = QuadExtElem::from_i64(2) * s.clone() * r.clone() == c3 && r.clone() * r.clone() == c4;
        ok.then_some((s, r))
    };
    let [b0, b1, b2, b3, b4] = [c(0), c(1), c(2), c(3), c(4)];
    let zero = QuadExtElem::zero;
    if !b0.is_zero() {
        let (s, r) = monic(&b0, [b1, b2, b3, b4])?;
        Some((quad(QuadExtElem::one(), s, r), b0))
    } else if !b4.is_zero() {
        let (s, r) = monic(&b4, [b3, b2, b1, b0])?;
        Some((quad(r, s, QuadExtElem::one()), b4))
    } else if b1.is_zero() && b3.is_zero() && !b2.is_zero() {
        Some((quad(zero(), QuadExtElem::one(), zero()), b2))
    } else {
        None
    }
}

fn binary_quadratic_discriminant(q: &QuadForm) -> QuadExtElem {
    let q0 = q.coeff_or_zero(&[2, 0]);
    let q1 = q.coeff_or_zero(&[1, 1]);
    let q2 = q.coeff_or_zero(&[0, 2]);
    q1.clone() * q1 - QuadExtElem::from_i64(4) * q0 * q2
}

/// Decides whether `line` is a bitangent of `quartic`.
pub fn is_bitangent(line: &Line, quartic: &QuadForm) -> Result<BitangentReport, GeometryError> {
    check_ternary_quartic(quartic)?;
    let (eliminated, restriction) = restrict_to_line(quartic, line)?;
    if restriction.is_zero() {
        return Ok(BitangentReport {
            kind: TangencyKind::LineInCurve,
            eliminated,
            restriction,
            square_root: None,
        });
    }
    let square_root = binary_square_root(&restriction);
    let kind = match &square_root {
        None => TangencyKind::NotBitangent,
        Some((q, _)) if binary_quadratic_discriminant(q).is_zero() => TangencyKind::Hyperflex,
        Some(_) => TangencyKind::Bitangent,
    };
    Ok(BitangentReport { kind, eliminated, restriction, square_root })
}

/// `l · M`: the line whose zero set is the preimage of `l = 0` under `x ↦ Mx`.
pub fn pull_back_line(line: &Line, m: &ProjectiveAutomorphism) -> Result<Line, GeometryError> {
    if m.dim() != 3 {
        return Err(GeometryError::MatrixShape { expected: 3 });
    }
    Ok(std::array::from_fn(|j| {
        (0..3).fold(QuadExtElem::zero(), |acc, i| acc + line[i].clone() * m.matrix[i][j].clone())
    }))
}

// ---------------------------------------------------------------------------
// Lines on the surface

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftSign {
    Plus,
    Minus,
}

impl LiftSign {
    pub fn flip(self) -> Self {
        match self {
            LiftSign::Plus => LiftSign::Minus,
            LiftSign::Minus => LiftSign::Plus,
        }
    }

    fn factor(self) -> i64 {
        match self {
            LiftSign::Plus => 1,
            LiftSign::Minus => -1,
        }
    }
}

/// The pair of lines `{l = 0, w ± μ·q = 0}` over a line `l` in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct BitangentLift {
    line: Line,
    mu: TowerElem,
    q: QuadForm,
}

impl BitangentLift {
    /// `q` is a quadratic form in the plane variables `(x, y, z)`.
    pub fn new(line: Line, mu: TowerElem, q: QuadForm) -> Result<Self, GeometryError> {
        eliminated_index(&line)?;
        if q.vars().len() != 3 || !q.is_homogeneous_of(2) || q.vars().weights() != [1, 1, 1] {
            return Err(GeometryError::MalformedLift("q must be a ternary quadratic form".into()));
        }
        if mu.is_zero() {
            return Err(GeometryError::MalformedLift("μ must be nonzero".into()));
        }
        Ok(Self { line, mu, q })
    }

    pub fn line(&self) -> &Line {
        &self.line
    }

    pub fn mu(&self) -> &TowerElem {
        &self.mu
    }

    pub fn q(&self) -> &QuadForm {
        &self.q
    }

    /// `w + sign·μ·q` in the surface variables, with `q` reduced modulo the
    /// line.
    pub fn equation(&self, sign: LiftSign, surface_vars: &Arc<Vars>) -> Result<TowerForm, GeometryError> {
        if surface_vars.len() != 4 || surface_vars.weights() != [2, 1, 1, 1] {
            return Err(GeometryError::NotDoubleCover);
        }
        let (_, assign) = line_assignments(&self.line, surface_vars, 1, Clone::clone)?;
        let q = self.q.substitute(&assign)?.map_coeffs(|c| TowerElem::from_base(c.clone()));
        let k = self.mu.clone() * TowerElem::from_i64(sign.factor());
        Ok(Poly::var(surface_vars, 0) + q.scale(&k))
    }
}

/// True iff the line `{l = 0, w + sign·μ·q = 0}` lies on the surface.
pub fn verify_lift_sign(
    lift: &BitangentLift,
    sign: LiftSign,
    surface: &QuadForm,
) -> Result<bool, GeometryError> {
    branch_of_surface(surface)?;
    let vars = surface.vars();
    let (_, mut assign) = line_assignments(&lift.line, vars, 1, |c| TowerElem::from_base(c.clone()))?;
    let eq = lift.equation(sign, vars)?;
    // w = w - eq = -sign·μ·q on the line
    let w = Poly::var(vars, 0) - eq;
    assign.insert(0, w);
    let s = surface.map_coeffs(|c| TowerElem::from_base(c.clone()));
    Ok(s.substitute(&assign)?.is_zero())
}

/// True iff both lines of the pair lie on the surface.
pub fn verify_line_on_surface(lift: &BitangentLift, surface: &QuadForm) -> Result<bool, GeometryError> {
    Ok(verify_lift_sign(lift, LiftSign::Plus, surface)?
        && verify_lift_sign(lift, LiftSign::Minus, surface)?)
}

/// Applies the Geiser involution `w ↦ -w` to an equation.
pub fn geiser_image(eq: &TowerForm) -> Result<TowerForm, GeometryError> {
    let vars = eq.vars();
    let mut assign: Vec<TowerForm> = (0..vars.len()).map(|i| Poly::var(vars, i)).collect();
    assign[0] = -Poly::var(vars, 0);
    Ok(eq.substitute(&assign)?)
}

/// Rescales an equation so its first nonzero coefficient in the `w` direction
/// (or overall, if `w` is absent) is 1.
pub fn normalize_equation(eq: &TowerForm) -> Option<TowerForm> {
    let w_lead = eq.terms().rev().find(|(e, _)| e[0] > 0).map(|(_, c)| c.clone());
    let lead = w_lead.or_else(|| eq.terms().next_back().map(|(_, c)| c.clone()))?;
    Some(eq.scale(&lead.inverse()?))
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldOfDefinition {
    /// Every normalized coefficient lies in `Q(√-7)`.
    BaseField,
    /// Some normalized coefficient has a nonzero `i`-part; the first such
    /// coefficient is recorded.
    NeedsI { witness: TowerElem },
}

/// Field of definition of the linear-in-`w` equation `eq`, after normalizing
/// the `w` coefficient to 1.
///
/// With that coefficient fixed, any further rescaling must be by an element
/// of `Q(√-7)`, so the check reduces to inspecting the `i`-parts.
pub fn equation_field_of_definition(eq: &TowerForm) -> Result<FieldOfDefinition, GeometryError> {
    let n = normalize_equation(eq).ok_or_else(|| GeometryError::MalformedLift("zero equation".into()))?;
    let witness = n.terms().rev().find(|(_, c)| !c.b.is_zero()).map(|(_, c)| c.clone());
    Ok(match witness {
        Some(witness) => FieldOfDefinition::NeedsI { witness },
        None => FieldOfDefinition::BaseField,
    })
}

/// Field of definition of the `+` line of a lift verified on `surface`.
pub fn field_of_definition_check(
    lift: &BitangentLift,
    surface: &QuadForm,
) -> Result<FieldOfDefinition, GeometryError> {
    if !verify_line_on_surface(lift, surface)? {
        return Err(GeometryError::UnverifiedLift);
    }
    equation_field_of_definition(&lift.equation(LiftSign::Plus, surface.vars())?)
}

// ---------------------------------------------------------------------------
// Automorphisms

/// A linear substitution `x ↦ Mx` acting on forms by `f ↦ f ∘ M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectiveAutomorphism {
    matrix: Vec<Vec<QuadExtElem>>,
}

fn determinant(m: &[Vec<QuadExtElem>]) -> QuadExtElem {
    let n = m.len();
    let mut a: Vec<Vec<QuadExtElem>> = m.to_vec();
    let mut det = QuadExtElem::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return QuadExtElem::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let inv = a[col][col].inverse().expect("nonzero pivot");
        det = det * a[col][col].clone();
        for r in col + 1..n {
            let f = a[r][col].clone() * inv.clone();
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let t = a[col][c].clone() * f.clone();
                a[r][c] = a[r][c].clone() - t;
            }
        }
    }
    det
}

impl ProjectiveAutomorphism {
    pub fn new(matrix: Vec<Vec<QuadExtElem>>) -> Result<Self, GeometryError> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|r| r.len() != n) {
            return Err(GeometryError::MatrixShape { expected: n.max(1) });
        }
        if determinant(&matrix).is_zero() {
            return Err(GeometryError::SingularMatrix);
        }
        Ok(Self { matrix })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, GeometryError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| QuadExtElem::from_i64(x)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| QuadExtElem::from_i64(i64::from(i == j))).collect())
            .collect();
        Self { matrix }
    }

    /// `x_i ↦ signs[i]·x_{perm[i]}`.
    pub fn signed_permutation(perm: [usize; 3], signs: [i64; 3]) -> Self {
        let matrix = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| QuadExtElem::from_i64(if perm[i] == j { signs[i] } else { 0 }))
                    .collect()
            })
            .collect();
        Self { matrix }
    }

    /// `(w, x, y, z) ↦ (-w, x, y, z)`.
    pub fn geiser() -> Self {
        let mut g = Self::identity(4);
        g.matrix[0][0] = QuadExtElem::from_i64(-1);
        g
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<QuadExtElem>] {
        &self.matrix
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.dim();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(QuadExtElem::zero(), |acc, k| {
                            acc + self.matrix[i][k].clone() * other.matrix[k][j].clone()
                        })
                    })
                    .collect()
            })
            .collect();
        Self { matrix }
    }

    pub fn scale(&self, k: &QuadExtElem) -> Self {
        let matrix = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| x.clone() * k.clone()).collect())
            .collect();
        Self { matrix }
    }

    /// `f ∘ M`. Variables of different weights may not be mixed.
    pub fn apply(&self, f: &QuadForm) -> Result<QuadForm, GeometryError> {
        let vars = f.vars();
        if vars.len() != self.dim() {
            return Err(GeometryError::MatrixShape { expected: vars.len() });
        }
        let w = vars.weights();
        let mut assign = Vec::with_capacity(self.dim());
        for (i, row) in self.matrix.iter().enumerate() {
            let mut image = Poly::zero(vars);
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if w[i] != w[j] {
                    return Err(GeometryError::WeightViolation);
                }
                image = image + Poly::var(vars, j).scale(c);
            }
            assign.push(image);
        }
        Ok(f.substitute(&assign)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutomorphismCheck {
    pub holds: bool,
    /// `c` with `f ∘ M = c·f`, when it exists.
    pub scalar: Option<QuadExtElem>,
}

/// Checks `form ∘ M = c·form` for some nonzero `c`.
pub fn verify_automorphism(
    aut: &ProjectiveAutomorphism,
    form: &QuadForm,
) -> Result<AutomorphismCheck, GeometryError> {
    let image = aut.apply(form)?;
    let none = AutomorphismCheck { holds: false, scalar: None };
    let Some((e, c0)) = form.terms().next_back() else {
        return Ok(AutomorphismCheck { holds: image.is_zero(), scalar: None });
    };
    let c = image.coeff_or_zero(e).div(c0).expect("nonzero coefficient");
    if c.is_zero() || image != form.scale(&c) {
        return Ok(none);
    }
    Ok(AutomorphismCheck { holds: true, scalar: Some(c) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryGroup {
    /// Signed permutations `M` with `f ∘ M = c·f`.
    pub linear: Vec<ProjectiveAutomorphism>,
    /// One representative per `±M` pair: the one whose first nonzero entry in
    /// row 0 is positive.
    pub projective: Vec<ProjectiveAutomorphism>,
    pub closed: bool,
}

impl SymmetryGroup {
    pub fn projective_order(&self) -> usize {
        self.projective.len()
    }
}

fn canonical_sign(m: &ProjectiveAutomorphism) -> ProjectiveAutomorphism {
    let lead = m.matrix[0].iter().find(|x| !x.is_zero()).expect("invertible");
    if lead.a.is_negative() {
        m.scale(&QuadExtElem::from_i64(-1))
    } else {
        m.clone()
    }
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// The signed-permutation symmetries of a ternary quartic, modulo `±1`.
pub fn visible_symmetry_group(quartic: &QuadForm) -> Result<SymmetryGroup, GeometryError> {
    check_ternary_quartic(quartic)?;
    let mut linear = Vec::new();
    for perm in PERMUTATIONS {
        for bits in 0..8u32 {
            let signs = [0, 1, 2].map(|k| if bits >> k & 1 == 1 { -1 } else { 1 });
            let m = ProjectiveAutomorphism::signed_permutation(perm, signs);
            if verify_automorphism(&m, quartic)?.holds {
                linear.push(m);
            }
        }
    }
    let mut projective: Vec<ProjectiveAutomorphism> = Vec::new();
    for m in &linear {
        let c = canonical_sign(m);
        if !projective.contains(&c) {
            projective.push(c);
        }
    }
    let closed = projective
        .iter()
        .all(|a| projective.iter().all(|b| projective.contains(&canonical_sign(&a.compose(b)))));
    Ok(SymmetryGroup { linear, projective, closed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::surface::{branch_quartic, plane_vars, surface_form, weighted_vars};

    fn q(a: i64, b: i64) -> QuadExtElem {
        QuadExtElem::new(rat(a, 1), rat(b, 1))
    }

    fn plane(text: &str) -> QuadForm {
        QuadForm::parse(text, &plane_vars()).unwrap()
    }

    fn beta_squared() -> QuadExtElem {
        QuadExtElem::new(rat(-3, 2), rat(-1, 2))
    }

    fn standard_lift() -> BitangentLift {
        let mu = TowerElem::new(QuadExtElem::zero(), beta_squared());
        BitangentLift::new([q(1, 0), q(1, 0), q(1, 0)], mu, plane("1 * x^2 + 1 * x^1 y^1 + 1 * y^2")).unwrap()
    }

    #[test]
    fn smooth_mod_eleven() {
        let r = smooth_via_good_reduction(&branch_quartic(), 11, Some(2)).unwrap();
        assert_eq!(r.scans.len(), 2);
        assert_eq!(r.scans.iter().map(|s| s.root).collect::<Vec<_>>(), vec![2, 9]);
        assert!(r.scans.iter().all(|s| s.points_scanned == 133));
        assert!(r.is_smooth());
    }

    #[test]
    fn fermat_and_degenerate() {
        let fermat = plane("1 * x^4 + 1 * y^4 + 1 * z^4");
        assert!(smooth_via_good_reduction(&fermat, 3, None).unwrap().is_smooth());
        let x4 = plane("1 * x^4");
        let r = smooth_via_good_reduction(&x4, 11, Some(2)).unwrap();
        assert!(!r.is_smooth());
        assert_eq!(r.scans[0].verdict, ReductionVerdict::Singular { point: [0, 1, 0] });
    }

    #[test]
    fn smoothness_errors() {
        let c = branch_quartic();
        assert_eq!(smooth_via_good_reduction(&c, 2, Some(1)), Err(GeometryError::NotOddPrime(2)));
        assert_eq!(smooth_via_good_reduction(&c, 15, Some(1)), Err(GeometryError::NotOddPrime(15)));
        assert_eq!(
            smooth_via_good_reduction(&c, 11, Some(3)),
            Err(GeometryError::BadSquareRoot { p: 11, s: 3 })
        );
        assert_eq!(smooth_via_good_reduction(&c, 11, None), Err(GeometryError::MissingSquareRoot { p: 11 }));
        let bad = plane("1/11 * x^4 + 1 * y^4 + 1 * z^4");
        assert_eq!(smooth_via_good_reduction(&bad, 11, Some(2)), Err(GeometryError::BadReduction { p: 11 }));
    }

    #[test]
    fn roots_of_minus_seven() {
        for p in [11, 23, 29, 37, 43] {
            let s = sqrt_minus7_mod(p).unwrap();
            assert_eq!((s * s + 7) % p, 0);
        }
        assert_eq!(sqrt_minus7_mod(5), None);
    }

    #[test]
    fn no_small_singular_points() {
        assert!(small_common_zeros(&branch_quartic()).unwrap().is_empty());
        let cusp = plane("1 * x^4 + 1 * y^2 z^2");
        assert!(small_common_zeros(&cusp).unwrap().contains(&[0, 0, 1]));
    }

    #[test]
    fn sum_line_is_bitangent() {
        let r = is_bitangent(&[q(1, 0), q(1, 0), q(1, 0)], &branch_quartic()).unwrap();
        assert_eq!(r.kind, TangencyKind::Bitangent);
        assert_eq!(r.eliminated, 2);
        let (qq, alpha) = r.square_root.unwrap();
        assert_eq!(qq.to_text(), "1 * x^2 + 1 * x^1 y^1 + 1 * y^2");
        assert_eq!(alpha, beta_squared().power(2));
        assert_eq!(alpha, QuadExtElem::new(rat(1, 2), rat(3, 2)));
    }

    #[test]
    fn coordinate_line_is_not_bitangent() {
        let r = is_bitangent(&[q(1, 0), q(0, 0), q(0, 0)], &branch_quartic()).unwrap();
        assert_eq!(r.kind, TangencyKind::NotBitangent);
        assert_eq!(r.eliminated, 0);
    }

    #[test]
    fn double_conic_and_degenerate_lines() {
        let conic_sq = plane("1 * x^2 + 1 * y^2 + 1 * z^2").power(2);
        for line in [[q(1, 0), q(2, 0), q(3, 0)], [q(1, 0), q(0, 0), q(0, 0)], [q(0, 0), q(0, 0), q(1, 0)]] {
            assert_eq!(is_bitangent(&line, &conic_sq).unwrap().kind, TangencyKind::Bitangent);
        }
        let x4 = plane("1 * x^4 + 1 * y^4");
        assert_eq!(is_bitangent(&[q(0, 0), q(1, 0), q(0, 0)], &x4).unwrap().kind, TangencyKind::Hyperflex);
        let reducible = plane("1 * x^1 y^3");
        assert_eq!(is_bitangent(&[q(1, 0), q(0, 0), q(0, 0)], &reducible).unwrap().kind, TangencyKind::LineInCurve);
        let zero = [q(0, 0), q(0, 0), q(0, 0)];
        assert_eq!(is_bitangent(&zero, &branch_quartic()), Err(GeometryError::ZeroLine));
        // both ends of the binary form vanish: b = u²v²
        let mid = plane("1 * x^2 y^2 + 1 * z^4");
        let r = is_bitangent(&[q(0, 0), q(0, 0), q(1, 0)], &mid).unwrap();
        assert_eq!(r.kind, TangencyKind::Bitangent);
    }

    #[test]
    fn lifts_lie_on_surface() {
        let s = surface_form();
        let lift = standard_lift();
        assert!(verify_lift_sign(&lift, LiftSign::Plus, &s).unwrap());
        assert!(verify_lift_sign(&lift, LiftSign::Minus, &s).unwrap());
        assert!(verify_line_on_surface(&lift, &s).unwrap());
        let doubled = BitangentLift::new(
            lift.line().clone(),
            lift.mu().clone() * TowerElem::from_i64(2),
            lift.q().clone(),
        )
        .unwrap();
        assert!(!verify_line_on_surface(&doubled, &s).unwrap());
    }

    #[test]
    fn geiser_swaps_lifts() {
        let v = weighted_vars();
        let lift = standard_lift();
        let plus = lift.equation(LiftSign::Plus, &v).unwrap();
        let minus = lift.equation(LiftSign::Minus, &v).unwrap();
        let image = normalize_equation(&geiser_image(&plus).unwrap()).unwrap();
        assert_eq!(image, minus);
        assert_ne!(plus, minus);
    }

    #[test]
    fn lift_needs_i() {
        let s = surface_form();
        let lift = standard_lift();
        assert!(matches!(
            field_of_definition_check(&lift, &s).unwrap(),
            FieldOfDefinition::NeedsI { .. }
        ));
        let times_i = lift.equation(LiftSign::Plus, s.vars()).unwrap().scale(&TowerElem::generator());
        assert!(matches!(
            equation_field_of_definition(&times_i).unwrap(),
            FieldOfDefinition::NeedsI { .. }
        ));
        // a surface on which μ = β² itself works
        let v = weighted_vars();
        let other = QuadForm::parse("1 * w^2", &v).unwrap() - lift_surface_for_mu(&v);
        let base = BitangentLift::new(lift.line().clone(), TowerElem::from_base(beta_squared()), lift.q().clone()).unwrap();
        assert_eq!(field_of_definition_check(&base, &other).unwrap(), FieldOfDefinition::BaseField);
        assert_eq!(field_of_definition_check(&base, &s), Err(GeometryError::UnverifiedLift));
    }

    /// `β⁴(x² + xy + y²)²`, so `w² - β⁴q²` contains `w = ±β²q` over every line.
    fn lift_surface_for_mu(v: &Arc<Vars>) -> QuadForm {
        let qq = QuadForm::parse("1 * x^2 + 1 * x^1 y^1 + 1 * y^2", v).unwrap();
        qq.power(2).scale(&beta_squared().power(2))
    }

    #[test]
    fn automorphism_examples() {
        let s = surface_form();
        let c = branch_quartic();
        let g = verify_automorphism(&ProjectiveAutomorphism::geiser(), &s).unwrap();
        assert_eq!(g, AutomorphismCheck { holds: true, scalar: Some(QuadExtElem::one()) });
        let cyc = ProjectiveAutomorphism::signed_permutation([1, 2, 0], [1, 1, 1]);
        assert_eq!(verify_automorphism(&cyc, &c).unwrap().scalar, Some(QuadExtElem::one()));
        let neg = ProjectiveAutomorphism::signed_permutation([0, 1, 2], [-1, 1, 1]);
        assert!(verify_automorphism(&neg, &c).unwrap().holds);
        let shear = ProjectiveAutomorphism::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert!(!verify_automorphism(&shear, &c).unwrap().holds);
        let scaled = ProjectiveAutomorphism::identity(3).scale(&q(0, 1));
        assert_eq!(verify_automorphism(&scaled, &c).unwrap().scalar, Some(q(49, 0)));
    }

    #[test]
    fn automorphism_errors() {
        assert_eq!(
            ProjectiveAutomorphism::from_i64(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 1]]),
            Err(GeometryError::SingularMatrix)
        );
        let mix = ProjectiveAutomorphism::from_i64(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])
            .unwrap();
        assert_eq!(verify_automorphism(&mix, &surface_form()), Err(GeometryError::WeightViolation));
        let three = ProjectiveAutomorphism::identity(3);
        assert!(matches!(verify_automorphism(&three, &surface_form()), Err(GeometryError::MatrixShape { .. })));
    }

    #[test]
    fn symmetry_orders() {
        let g = visible_symmetry_group(&branch_quartic()).unwrap();
        assert_eq!(g.linear.len(), 48);
        assert_eq!(g.projective_order(), 24);
        assert!(g.closed);
        let fermat = visible_symmetry_group(&plane("1 * x^4 + 1 * y^4 + 1 * z^4")).unwrap();
        assert_eq!(fermat.projective_order(), 24);
        let generic = plane("1 * x^4 + 2 * y^4 + 3 * z^4 + 5 * x^3 y^1 + 7 * y^1 z^3 + 11 * x^1 y^1 z^2");
        assert_eq!(visible_symmetry_group(&generic).unwrap().projective_order(), 1);
    }

    #[test]
    fn branch_of_surface_recovers_quartic() {
        assert_eq!(branch_of_surface(&surface_form()).unwrap(), branch_quartic());
        assert_eq!(branch_of_surface(&branch_quartic()), Err(GeometryError::NotDoubleCover));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_quad() -> impl Strategy<Value = QuadExtElem> {
            (-5i64..=5, 1i64..=4, -5i64..=5, 1i64..=4)
                .prop_map(|(a, da, b, db)| QuadExtElem::new(rat(a, da), rat(b, db)))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn symmetries_compose(i in 0usize..48, j in 0usize..48) {
                let c = branch_quartic();
                let g = visible_symmetry_group(&c).unwrap();
                let (a, b) = (&g.linear[i], &g.linear[j]);
                let ca = verify_automorphism(a, &c).unwrap().scalar.unwrap();
                let cb = verify_automorphism(b, &c).unwrap().scalar.unwrap();
                let ab = verify_automorphism(&a.compose(b), &c).unwrap();
                prop_assert!(ab.holds);
                prop_assert_eq!(ab.scalar.unwrap(), ca * cb);
            }

            #[test]
            fn tangency_ignores_line_scaling(
                l in proptest::array::uniform3(small_quad()),
                k in small_quad(),
            ) {
                prop_assume!(!k.is_zero() && l.iter().any(|x| !x.is_zero()));
                let c = branch_quartic();
                let scaled = l.clone().map(|x| x * k.clone());
                prop_assert_eq!(is_bitangent(&l, &c).unwrap().kind, is_bitangent(&scaled, &c).unwrap().kind);
            }

            #[test]
            fn bitangent_scaling(k in small_quad()) {
                prop_assume!(!k.is_zero());
                let line = [k.clone(), k.clone(), k];
                prop_assert!(is_bitangent(&line, &branch_quartic()).unwrap().is_bitangent());
            }
        }

        #[test]
        fn symmetry_images_are_bitangents() {
            let c = branch_quartic();
            let line = [q(1, 0), q(1, 0), q(1, 0)];
            for m in visible_symmetry_group(&c).unwrap().linear {
                let image = pull_back_line(&line, &m).unwrap();
                assert!(is_bitangent(&image, &c).unwrap().is_bitangent(), "{image:?}");
            }
        }

        #[test]
        fn geiser_equivalence_of_signs() {
            let s = surface_form();
            let lift = standard_lift();
            let bad = BitangentLift::new(lift.line().clone(), lift.mu().clone() * TowerElem::from_i64(3), lift.q().clone())
                .unwrap();
            for l in [lift, bad] {
                assert_eq!(
                    verify_lift_sign(&l, LiftSign::Plus, &s).unwrap(),
                    verify_lift_sign(&l, LiftSign::Minus, &s).unwrap()
                );
            }
        }

        #[test]
        fn verdicts_consistent_across_primes() {
            let c = branch_quartic();
            for p in [11, 23, 29, 37, 43] {
                let r = smooth_via_good_reduction(&c, p, sqrt_minus7_mod(p)).unwrap();
                assert!(r.is_smooth(), "p = {p}: {r:?}");
            }
            assert!(small_common_zeros(&c).unwrap().is_empty());
        }
    }
}
