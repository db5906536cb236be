//! Finite matrix groups over `F₂`: `Sp₆(F₂)`, the model
//! `W(E₇) ≅ Z/2 × Sp₆(F₂)`, and the embedded `PSL₃(F₂)`.

use std::collections::HashSet;
use std::fmt;
use std::hash::{BuildHasherDefault, Hash, Hasher};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

pub mod cache;

/// Upper bound on the order of any enumerated group.
pub const ENUMERATION_GUARD: usize = 4_000_000;
/// Upper bound on the order accepted by [`is_simple`].
pub const SIMPLICITY_GUARD: usize = 100_000;

/// `|Sp₆(F₂)| = 2⁹ (2² - 1)(2⁴ - 1)(2⁶ - 1)`.
pub const SP6_ORDER: usize = 1_451_520;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("no generators given")]
    NoGenerators,
    #[error("group order exceeds the guard of {guard}")]
    GuardExceeded { guard: usize },
    #[error("group has not been enumerated")]
    NotEnumerated,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("cache: {0}")]
    Cache(String),
}

/// FxHash-style mixing for packed `u64` keys.
#[derive(Default)]
pub struct PackedHasher(u64);

impl Hasher for PackedHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(u64::from(b));
        }
    }

    fn write_u64(&mut self, x: u64) {
        self.0 = (self.0.rotate_left(5) ^ x).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }
}

type PackedSet<E> = HashSet<E, BuildHasherDefault<PackedHasher>>;

// ---------------------------------------------------------------------------
// Matrices

/// A square matrix over `F₂` of dimension at most 7.
///
/// Row `i` occupies byte `i` (bit `j` is the entry in column `j`); the top
/// byte holds the dimension.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GF2Mat(u64);

impl GF2Mat {
    pub const MAX_DIM: usize = 7;

    fn pack(dim: usize, rows: impl IntoIterator<Item = u8>) -> Self {
        let mut bits = (dim as u64) << 56;
        for (i, r) in rows.into_iter().enumerate() {
            bits |= u64::from(r) << (8 * i);
        }
        Self(bits)
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim <= Self::MAX_DIM);
        Self::pack(dim, (0..dim).map(|i| 1u8 << i))
    }

    /// Rows given as bit masks (bit `j` of `rows[i]` is entry `(i, j)`).
    pub fn from_rows(rows: &[u8]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 || n > Self::MAX_DIM {
            return Err(GroupError::InvalidMatrix(format!("dimension {n}")));
        }
        if rows.iter().any(|&r| u32::from(r) >> n != 0) {
            return Err(GroupError::InvalidMatrix("entry outside the matrix".into()));
        }
        Ok(Self::pack(n, rows.iter().copied()))
    }

    /// Rows given as 0/1 entries.
    pub fn from_entries(rows: &[&[u8]]) -> Result<Self, GroupError> {
        let masks: Vec<u8> = rows
            .iter()
            .map(|r| {
                if r.len() != rows.len() || r.iter().any(|&x| x > 1) {
                    return Err(GroupError::InvalidMatrix("expected a square 0/1 matrix".into()));
                }
                Ok(r.iter().enumerate().fold(0u8, |m, (j, &x)| m | (x << j)))
            })
            .collect::<Result<_, _>>()?;
        Self::from_rows(&masks)
    }

    /// Restores a matrix from [`GF2Mat::packed`].
    pub fn from_packed(bits: u64) -> Result<Self, GroupError> {
        let dim = (bits >> 56) as usize;
        let rows: Vec<u8> = (0..dim.min(7)).map(|i| (bits >> (8 * i)) as u8).collect();
        let m = Self::from_rows(&rows)?;
        if m.0 != bits {
            return Err(GroupError::InvalidMatrix(format!("bad packing {bits:#x}")));
        }
        Ok(m)
    }

    pub fn packed(self) -> u64 {
        self.0
    }

    pub fn dim(self) -> usize {
        (self.0 >> 56) as usize
    }

    pub fn row(self, i: usize) -> u8 {
        (self.0 >> (8 * i)) as u8
    }

    pub fn get(self, i: usize, j: usize) -> bool {
        self.row(i) >> j & 1 == 1
    }

    pub fn mul(self, other: Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        let n = self.dim();
        let rows = (0..n).map(|i| {
            let mut a = self.row(i);
            let mut acc = 0u8;
            while a != 0 {
                let j = a.trailing_zeros() as usize;
                acc ^= other.row(j);
                a &= a - 1;
            }
            acc
        });
        Self::pack(n, rows)
    }

    pub fn transpose(self) -> Self {
        let n = self.dim();
        Self::pack(n, (0..n).map(|j| (0..n).fold(0u8, |m, i| m | (u8::from(self.get(i, j)) << i))))
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(self) -> Option<Self> {
        let n = self.dim();
        let mut a: Vec<u8> = (0..n).map(|i| self.row(i)).collect();
        let mut b: Vec<u8> = (0..n).map(|i| 1u8 << i).collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r] >> col & 1 == 1)?;
            a.swap(col, piv);
            b.swap(col, piv);
            for r in 0..n {
                if r != col && a[r] >> col & 1 == 1 {
                    a[r] ^= a[col];
                    b[r] ^= b[col];
                }
            }
        }
        Some(Self::pack(n, b))
    }

    pub fn is_invertible(self) -> bool {
        self.inverse().is_some()
    }

    /// `diag(a, b)`.
    pub fn block_diag(a: Self, b: Self) -> Result<Self, GroupError> {
        let (m, n) = (a.dim(), b.dim());
        if m + n > Self::MAX_DIM {
            return Err(GroupError::InvalidMatrix(format!("dimension {}", m + n)));
        }
        let rows = (0..m).map(|i| a.row(i)).chain((0..n).map(|i| b.row(i) << m));
        Ok(Self::pack(m + n, rows))
    }

    /// `[[0, I], [I, 0]]` in dimension 6.
    pub fn symplectic_form() -> Self {
        Self::pack(6, [8, 16, 32, 1, 2, 4])
    }

    /// `Mᵀ J M = J`.
    pub fn is_symplectic(self) -> bool {
        let j = Self::symplectic_form();
        self.dim() == 6 && self.transpose().mul(j).mul(self) == j
    }
}

impl fmt::Debug for GF2Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| if self.get(i, j) { '1' } else { '0' }).collect())
            .collect();
        write!(f, "[{}]", rows.join(" "))
    }
}

/// Symplectic form of vectors in `F₂⁶` (bit `i` pairs with bit `i + 3`).
pub fn symplectic_pairing(u: u8, v: u8) -> bool {
    let swapped = (v >> 3 | v << 3) & 0x3f;
    (u & swapped).count_ones() % 2 == 1
}

/// The transvection `x ↦ x + ω(x, v)·v`.
pub fn transvection(v: u8) -> GF2Mat {
    let jv = (v >> 3 | v << 3) & 0x3f;
    GF2Mat::pack(6, (0..6).map(|i| (1u8 << i) ^ if v >> i & 1 == 1 { jv } else { 0 }))
}

/// Vectors whose pairwise pairings form the `E₇` Dynkin diagram
/// (chain `1-3-4-5-6-7`, node 2 on node 4), listed by node.
pub const SP6_TRANSVECTION_VECTORS: [u8; 7] = [0b000001, 0b010000, 0b001000, 0b000011, 0b010100, 0b100000, 0b000100];

/// Transvections along [`SP6_TRANSVECTION_VECTORS`]: the images of the
/// simple reflections of `W(E₇)`.
pub fn sp6_generators() -> Vec<GF2Mat> {
    SP6_TRANSVECTION_VECTORS.iter().map(|&v| transvection(v)).collect()
}

/// `diag(M, (M⁻¹)ᵀ)`.
pub fn embed_psl32(m: GF2Mat) -> Result<GF2Mat, GroupError> {
    if m.dim() != 3 {
        return Err(GroupError::DimensionMismatch(m.dim(), 3));
    }
    let inv = m.inverse().ok_or(GroupError::SingularMatrix)?;
    GF2Mat::block_diag(m, inv.transpose())
}

/// Companion matrix of `x³ + x + 1`.
pub fn companion_x3_x_1() -> GF2Mat {
    GF2Mat::from_entries(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]).expect("valid")
}

/// Generators of `GL₃(F₂) = PSL₃(F₂)`: the companion matrix of `x³ + x + 1`
/// and the elementary matrix `I + E₁₂`.
pub fn psl32_generators() -> Vec<GF2Mat> {
    vec![companion_x3_x_1(), GF2Mat::from_entries(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]).expect("valid")]
}

// ---------------------------------------------------------------------------
// Group elements

pub trait GroupElement: Copy + Eq + Hash + Ord + Send + Sync + fmt::Debug {
    fn op(&self, other: &Self) -> Self;

    fn inv(&self) -> Self;

    /// The identity of the group containing `self`.
    fn identity_like(&self) -> Self;

    fn is_identity(&self) -> bool {
        *self == self.identity_like()
    }
}

/// Only meaningful for invertible matrices; `inv` panics otherwise.
impl GroupElement for GF2Mat {
    fn op(&self, other: &Self) -> Self {
        self.mul(*other)
    }

    fn inv(&self) -> Self {
        self.inverse().expect("group elements are invertible")
    }

    fn identity_like(&self) -> Self {
        GF2Mat::identity(self.dim())
    }
}

/// `(±1, M)` in `Z/2 × Sp₆(F₂)`. The sign is bit 63.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElem(u64);

const SIGN_BIT: u64 = 1 << 63;

impl WeylElem {
    pub fn new(negative: bool, m: GF2Mat) -> Self {
        Self(m.packed() | if negative { SIGN_BIT } else { 0 })
    }

    pub fn positive(m: GF2Mat) -> Self {
        Self::new(false, m)
    }

    /// The central element `(-1, I)`.
    pub fn minus_identity() -> Self {
        Self::new(true, GF2Mat::identity(6))
    }

    pub fn is_negative(self) -> bool {
        self.0 & SIGN_BIT != 0
    }

    pub fn sp(self) -> GF2Mat {
        GF2Mat(self.0 & !SIGN_BIT)
    }
}

impl fmt::Debug for WeylElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?})", if self.is_negative() { "-1" } else { "+1" }, self.sp())
    }
}

impl GroupElement for WeylElem {
    fn op(&self, other: &Self) -> Self {
        Self::new(self.is_negative() ^ other.is_negative(), self.sp().mul(other.sp()))
    }

    fn inv(&self) -> Self {
        Self::new(self.is_negative(), self.sp().inv())
    }

    fn identity_like(&self) -> Self {
        Self::new(false, self.sp().identity_like())
    }
}

/// Generators of the `W(E₇)` model: `(+1, t)` for the `Sp₆` generators and
/// `(-1, I)`.
pub fn weyl_generators() -> Vec<WeylElem> {
    let mut g: Vec<WeylElem> = sp6_generators().into_iter().map(WeylElem::positive).collect();
    g.push(WeylElem::minus_identity());
    g
}

// ---------------------------------------------------------------------------
// Subgroups

/// Generators plus, once enumerated, the sorted element list.
#[derive(Debug, Clone)]
pub struct SubgroupHandle<E> {
    generators: Vec<E>,
    elements: Option<Arc<Vec<E>>>,
}

impl<E: GroupElement> SubgroupHandle<E> {
    pub fn from_generators(generators: Vec<E>) -> Self {
        Self { generators, elements: None }
    }

    /// Wraps an element list; it is sorted here but not checked for closure.
    pub fn from_elements(generators: Vec<E>, mut elements: Vec<E>) -> Self {
        elements.par_sort_unstable();
        elements.dedup();
        Self { generators, elements: Some(Arc::new(elements)) }
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    pub fn elements(&self) -> Option<&[E]> {
        self.elements.as_deref().map(Vec::as_slice)
    }

    pub fn order(&self) -> Option<usize> {
        self.elements.as_ref().map(|e| e.len())
    }

    pub fn contains(&self, g: &E) -> Option<bool> {
        self.elements().map(|e| e.binary_search(g).is_ok())
    }

    fn enumerated(&self) -> Result<&[E], GroupError> {
        self.elements().ok_or(GroupError::NotEnumerated)
    }
}

/// Breadth-first closure of `generators` under right multiplication.
///
/// Each frontier is expanded in parallel; the element list is sorted, so the
/// result does not depend on the thread count.
pub fn generate_group<E: GroupElement>(generators: &[E], guard: usize) -> Result<SubgroupHandle<E>, GroupError> {
    let first = generators.first().ok_or(GroupError::NoGenerators)?;
    let id = first.identity_like();
    let mut seen: PackedSet<E> = PackedSet::default();
    seen.insert(id);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let candidates: Vec<E> = frontier
            .par_iter()
            .flat_map_iter(|g| generators.iter().map(move |s| g.op(s)))
            .collect();
        let mut next = Vec::new();
        for c in candidates {
            if seen.insert(c) {
                if seen.len() > guard {
                    return Err(GroupError::GuardExceeded { guard });
                }
                next.push(c);
            }
        }
        frontier = next;
    }
    Ok(SubgroupHandle::from_elements(generators.to_vec(), seen.into_iter().collect()))
}

/// `{g ∈ ambient : g·s = s·g for every s in sub}`.
pub fn centralizer<E: GroupElement>(sub: &[E], ambient: &SubgroupHandle<E>) -> Result<SubgroupHandle<E>, GroupError> {
    let all = ambient.enumerated()?;
    let elements: Vec<E> = all
        .par_iter()
        .copied()
        .filter(|g| sub.iter().all(|s| g.op(s) == s.op(g)))
        .collect();
    let generators = if elements.len() == all.len() {
        ambient.generators.clone()
    } else {
        elements.clone()
    };
    Ok(SubgroupHandle { generators, elements: Some(Arc::new(elements)) })
}

/// Orbit of `g` under conjugation by the group generated by `generators`.
pub fn conjugation_orbit<E: GroupElement>(g: E, generators: &[E], guard: usize) -> Result<Vec<E>, GroupError> {
    let pairs: Vec<(E, E)> = generators.iter().map(|s| (*s, s.inv())).collect();
    let mut seen: PackedSet<E> = PackedSet::default();
    seen.insert(g);
    let mut frontier = vec![g];
    while !frontier.is_empty() {
        let candidates: Vec<E> = frontier
            .par_iter()
            .flat_map_iter(|h| pairs.iter().map(move |(s, si)| s.op(h).op(si)))
            .collect();
        let mut next = Vec::new();
        for c in candidates {
            if seen.insert(c) {
                if seen.len() > guard {
                    return Err(GroupError::GuardExceeded { guard });
                }
                next.push(c);
            }
        }
        frontier = next;
    }
    let mut orbit: Vec<E> = seen.into_iter().collect();
    orbit.par_sort_unstable();
    Ok(orbit)
}

/// Size of the conjugacy class of `g` in `ambient`.
pub fn conjugacy_class_size<E: GroupElement>(g: E, ambient: &SubgroupHandle<E>) -> Result<usize, GroupError> {
    let n = ambient.enumerated()?.len();
    Ok(conjugation_orbit(g, &ambient.generators, n)?.len())
}

/// Least `n ≥ 1` with `gⁿ = 1`.
pub fn element_order<E: GroupElement>(g: E) -> usize {
    let mut n = 1;
    let mut p = g;
    while !p.is_identity() {
        p = p.op(&g);
        n += 1;
    }
    n
}

/// True iff the normal closure of every non-identity class is the whole
/// group.
pub fn is_simple<E: GroupElement>(group: &SubgroupHandle<E>) -> Result<bool, GroupError> {
    let all = group.enumerated()?;
    if all.len() > SIMPLICITY_GUARD {
        return Err(GroupError::GuardExceeded { guard: SIMPLICITY_GUARD });
    }
    if all.len() <= 1 {
        return Ok(false);
    }
    let mut classified: PackedSet<E> = PackedSet::default();
    for &g in all {
        if g.is_identity() || classified.contains(&g) {
            continue;
        }
        let class = conjugation_orbit(g, &group.generators, all.len())?;
        let closure = generate_group(&class, all.len())?;
        if closure.order() != Some(all.len()) {
            return Ok(false);
        }
        classified.extend(class);
    }
    Ok(true)
}

/// The `W(E₇)` model as `{±1} × Sp₆(F₂)` from an enumerated `Sp₆(F₂)`.
pub fn weyl_from_sp6(sp6: &SubgroupHandle<GF2Mat>) -> Result<SubgroupHandle<WeylElem>, GroupError> {
    let sp = sp6.enumerated()?;
    // the sign is the top bit, so the + half sorts before the - half
    let elements: Vec<WeylElem> = [false, true]
        .into_iter()
        .flat_map(|neg| sp.iter().map(move |&m| WeylElem::new(neg, m)))
        .collect();
    let mut generators: Vec<WeylElem> = sp6.generators.iter().map(|&m| WeylElem::positive(m)).collect();
    generators.push(WeylElem::minus_identity());
    Ok(SubgroupHandle { generators, elements: Some(Arc::new(elements)) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn permutation_matrix(perm: &[usize]) -> GF2Mat {
        let rows: Vec<u8> = perm.iter().map(|&j| 1u8 << j).collect();
        GF2Mat::from_rows(&rows).unwrap()
    }

    #[test]
    fn packing_roundtrip() {
        let m = companion_x3_x_1();
        assert_eq!(m.dim(), 3);
        assert!(m.get(1, 0) && m.get(0, 2) && !m.get(0, 0));
        assert_eq!(GF2Mat::from_packed(m.packed()).unwrap(), m);
        assert!(GF2Mat::from_packed(m.packed() | 1 << 40).is_err());
        assert!(GF2Mat::from_rows(&[4, 1]).is_err());
        assert_eq!(format!("{m:?}"), "[001 101 010]");
    }

    #[test]
    fn inverse_and_transpose() {
        let m = companion_x3_x_1();
        assert_eq!(m.mul(m.inverse().unwrap()), GF2Mat::identity(3));
        assert_eq!(m.transpose().transpose(), m);
        let singular = GF2Mat::from_entries(&[&[1, 1], &[1, 1]]).unwrap();
        assert_eq!(singular.inverse(), None);
    }

    #[test]
    fn generators_pair_like_e7() {
        let edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)];
        let v = SP6_TRANSVECTION_VECTORS;
        for a in 1..=7 {
            for b in a + 1..=7 {
                let adjacent = edges.contains(&(a, b)) || edges.contains(&(b, a));
                assert_eq!(symplectic_pairing(v[a - 1], v[b - 1]), adjacent, "nodes {a}, {b}");
            }
        }
        for t in sp6_generators() {
            assert!(t.is_symplectic());
            assert_eq!(element_order(t), 2);
        }
    }

    #[test]
    fn embedding_is_symplectic() {
        assert_eq!(embed_psl32(GF2Mat::identity(3)).unwrap(), GF2Mat::identity(6));
        for g in psl32_generators() {
            assert!(embed_psl32(g).unwrap().is_symplectic());
        }
        let singular = GF2Mat::from_entries(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(embed_psl32(singular), Err(GroupError::SingularMatrix));
        assert!(matches!(embed_psl32(GF2Mat::identity(2)), Err(GroupError::DimensionMismatch(2, 3))));
    }

    #[test]
    fn psl32_order_and_simplicity() {
        let g = generate_group(&psl32_generators(), ENUMERATION_GUARD).unwrap();
        assert_eq!(g.order(), Some(168));
        // every invertible 3x3 matrix
        let brute = (0..1u32 << 9)
            .filter_map(|bits| {
                let rows = [bits as u8 & 7, (bits >> 3) as u8 & 7, (bits >> 6) as u8 & 7];
                GF2Mat::from_rows(&rows).ok().filter(|m| m.is_invertible())
            })
            .count();
        assert_eq!(brute, 168);
        let embedded: Vec<GF2Mat> = psl32_generators().into_iter().map(|m| embed_psl32(m).unwrap()).collect();
        let e = generate_group(&embedded, ENUMERATION_GUARD).unwrap();
        assert_eq!(e.order(), Some(168));
        assert!(e.elements().unwrap().iter().all(|m| m.is_symplectic()));
        assert!(is_simple(&e).unwrap());
    }

    #[test]
    fn small_groups() {
        let id = generate_group(&[GF2Mat::identity(6)], 10).unwrap();
        assert_eq!(id.order(), Some(1));
        assert!(!is_simple(&id).unwrap());
        let z4 = generate_group(&[permutation_matrix(&[1, 2, 3, 0])], 10).unwrap();
        assert_eq!(z4.order(), Some(4));
        assert!(!is_simple(&z4).unwrap());
        let a5 = generate_group(&[permutation_matrix(&[1, 2, 0, 3, 4]), permutation_matrix(&[1, 2, 3, 4, 0])], 1000)
            .unwrap();
        assert_eq!(a5.order(), Some(60));
        assert!(is_simple(&a5).unwrap());
        let s5 = generate_group(&[permutation_matrix(&[1, 0, 2, 3, 4]), permutation_matrix(&[1, 2, 3, 4, 0])], 1000)
            .unwrap();
        assert_eq!(s5.order(), Some(120));
        assert!(!is_simple(&s5).unwrap());
        assert_eq!(generate_group::<GF2Mat>(&[], 10).unwrap_err(), GroupError::NoGenerators);
        assert_eq!(
            generate_group(&[permutation_matrix(&[1, 2, 3, 4, 0])], 3).unwrap_err(),
            GroupError::GuardExceeded { guard: 3 }
        );
    }

    #[test]
    fn orders() {
        assert_eq!(element_order(GF2Mat::identity(6)), 1);
        assert_eq!(element_order(embed_psl32(companion_x3_x_1()).unwrap()), 7);
        assert_eq!(element_order(WeylElem::minus_identity()), 2);
        let w = WeylElem::new(true, embed_psl32(companion_x3_x_1()).unwrap());
        assert_eq!(element_order(w), 14);
    }

    #[test]
    fn weyl_elements() {
        let m = embed_psl32(companion_x3_x_1()).unwrap();
        let w = WeylElem::new(true, m);
        assert!(w.is_negative());
        assert_eq!(w.sp(), m);
        assert_eq!(w.op(&w.inv()), WeylElem::positive(GF2Mat::identity(6)));
        assert!(WeylElem::positive(m) < WeylElem::new(true, GF2Mat::identity(6)));
    }

    #[test]
    fn centralizer_needs_enumeration() {
        let h = SubgroupHandle::from_generators(psl32_generators());
        assert_eq!(centralizer(&psl32_generators(), &h).unwrap_err(), GroupError::NotEnumerated);
        assert_eq!(conjugacy_class_size(companion_x3_x_1(), &h).unwrap_err(), GroupError::NotEnumerated);
        assert_eq!(is_simple(&h).unwrap_err(), GroupError::NotEnumerated);
    }

    #[test]
    fn classes_in_gl3() {
        let g = generate_group(&psl32_generators(), 1000).unwrap();
        let c = companion_x3_x_1();
        // two classes of elements of order 7, 24 each
        assert_eq!(conjugacy_class_size(c, &g).unwrap(), 24);
        assert_eq!(centralizer(&[c], &g).unwrap().order(), Some(7));
        assert_eq!(conjugacy_class_size(GF2Mat::identity(3), &g).unwrap(), 1);
        assert_eq!(centralizer(&[], &g).unwrap().order(), Some(168));
    }
}
