//! Clifford algebras of quadratic forms in characteristic 2 and the involution
//! induced by an orthogonal involution of the underlying space.
//!
//! The basis is indexed by bitmasks: bit `i` of a mask selects generator `eᵢ`,
//! and a mask stands for the product of its generators in increasing order.

mod invariants;
mod matrix_iso;
mod tensor;

pub use invariants::{
    alternating_generators_check, involution_type, pfister_invariant, phi_subalgebra, transpose_iso_criterion,
    AlternatingGenerators, CriterionReport, InvolutionType, PfisterDescriptor, PhiAlgebra, PhiChecks,
};
pub use matrix_iso::{explicit_matrix_iso, square_scalar_check, MatrixIso};
pub use tensor::{
    goldman_element, goldman_plane_element, tensor_decomposition_witness, FactorKind, GoldmanElement,
    TensorFactor, TensorWitness,
};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::isometry::Isometry;
use crate::linalg::{zero_vector, Matrix, Vector};
use crate::quadspace::{QuadraticForm, QuadraticSpace};

/// Largest supported number of generators.
pub const MAX_GENERATORS: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffordError {
    #[error("the field does not have characteristic 2")]
    CharacteristicNot2,
    #[error("{0} generators exceed the supported maximum")]
    TooLarge(usize),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("τ² ≠ id")]
    NotInvolution,
    #[error("r(τ) ≠ k(τ)")]
    ResidualNotFixed,
    #[error("vectors are not an orthogonal basis of r(τ) for the wall form")]
    NotOrthogonalBasis,
    #[error("a basis vector has ω(u,u) = 0")]
    ZeroSquare,
    #[error("the transpose criterion fails")]
    CriterionFails,
    #[error("explicit matrix isomorphisms need a finite field")]
    UnsupportedField,
    #[error("isometry is not an interchange isometry")]
    NotInterchange,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix square is not scalar")]
    NotScalarSquare,
    #[error("internal check failed: {0}")]
    TheoremViolated(String),
}

type Sparse = Vec<(u32, FieldElement)>;

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(0);

pub struct CliffordAlgebra {
    id: u64,
    form: QuadraticForm,
    /// `table[s][t]` is `e_s · e_t` in the monomial basis.
    table: Vec<Vec<Sparse>>,
}

impl fmt::Debug for CliffordAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C({:?})", self.form.qmat())
    }
}

fn accumulate(acc: &mut BTreeMap<u32, FieldElement>, mask: u32, c: FieldElement) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(mask).or_insert_with(|| c.field().zero());
    *e = *e + c;
    if e.is_zero() {
        acc.remove(&mask);
    }
}

impl CliffordAlgebra {
    /// Builds `C(q)` for a possibly degenerate form over a field of characteristic 2.
    pub fn new(form: &QuadraticForm) -> Result<Arc<CliffordAlgebra>, CliffordError> {
        let field = form.field();
        if field.characteristic() != 2 {
            return Err(CliffordError::CharacteristicNot2);
        }
        let n = form.dim();
        if n > MAX_GENERATORS {
            return Err(CliffordError::TooLarge(n));
        }
        let q = form.qmat();
        let size = 1usize << n;
        let one = field.one();
        // gen[s][j] = e_s · e_j
        let mut gen: Vec<Vec<Sparse>> = Vec::with_capacity(size);
        for s in 0..size as u32 {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let prod: Sparse = if s == 0 {
                    vec![(1 << j, one)]
                } else {
                    let top = 31 - s.leading_zeros() as usize;
                    let rest = s & !(1 << top);
                    if j > top {
                        vec![(s | 1 << j, one)]
                    } else if j == top {
                        if q[(j, j)].is_zero() {
                            vec![]
                        } else {
                            vec![(rest, q[(j, j)])]
                        }
                    } else {
                        // e_rest e_top e_j = (e_rest e_j) e_top + B[j][top] e_rest
                        let mut acc = BTreeMap::new();
                        for &(m, c) in &gen[rest as usize][j] {
                            accumulate(&mut acc, m | 1 << top, c);
                        }
                        accumulate(&mut acc, rest, q[(j, top)]);
                        acc.into_iter().collect()
                    }
                };
                row.push(prod);
            }
            gen.push(row);
        }
        let mut table = Vec::with_capacity(size);
        for s in 0..size as u32 {
            let mut row = Vec::with_capacity(size);
            for t in 0..size as u32 {
                let mut cur: Sparse = vec![(s, one)];
                for j in (0..n).filter(|j| t >> j & 1 == 1) {
                    let mut acc = BTreeMap::new();
                    for &(m, c) in &cur {
                        for &(m2, c2) in &gen[m as usize][j] {
                            accumulate(&mut acc, m2, c * c2);
                        }
                    }
                    cur = acc.into_iter().collect();
                }
                row.push(cur);
            }
            table.push(row);
        }
        let id = NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed);
        Ok(Arc::new(CliffordAlgebra { id, form: form.clone(), table }))
    }

    pub fn of_space(space: &QuadraticSpace) -> Result<Arc<CliffordAlgebra>, CliffordError> {
        CliffordAlgebra::new(space.form())
    }

    pub fn field(&self) -> Field {
        self.form.field()
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        self.form.dim()
    }

    /// `2ⁿ`.
    pub fn dim(&self) -> usize {
        1 << self.rank()
    }

    pub fn monomial_product(&self, s: u32, t: u32) -> &[(u32, FieldElement)] {
        &self.table[s as usize][t as usize]
    }

    pub fn zero(self: &Arc<Self>) -> CliffordElement {
        CliffordElement { algebra: self.clone(), coeffs: BTreeMap::new() }
    }

    pub fn scalar(self: &Arc<Self>, c: FieldElement) -> CliffordElement {
        self.monomial(0, c)
    }

    pub fn one(self: &Arc<Self>) -> CliffordElement {
        self.scalar(self.field().one())
    }

    pub fn monomial(self: &Arc<Self>, mask: u32, c: FieldElement) -> CliffordElement {
        let mut coeffs = BTreeMap::new();
        accumulate(&mut coeffs, mask, c);
        CliffordElement { algebra: self.clone(), coeffs }
    }

    pub fn basis_element(self: &Arc<Self>, mask: u32) -> CliffordElement {
        self.monomial(mask, self.field().one())
    }

    pub fn generator(self: &Arc<Self>, i: usize) -> CliffordElement {
        self.basis_element(1 << i)
    }

    /// The image of `v ∈ V` in `C(q)`.
    pub fn vector(self: &Arc<Self>, v: &[FieldElement]) -> CliffordElement {
        assert_eq!(v.len(), self.rank(), "vector length differs from the number of generators");
        let mut coeffs = BTreeMap::new();
        for (i, c) in v.iter().enumerate() {
            accumulate(&mut coeffs, 1 << i, *c);
        }
        CliffordElement { algebra: self.clone(), coeffs }
    }

    /// Product `v₁ v₂ ⋯ v_k` of vectors.
    pub fn vector_product(self: &Arc<Self>, vs: &[Vector]) -> CliffordElement {
        vs.iter().fold(self.one(), |acc, v| acc.mul(&self.vector(v)))
    }

    pub fn from_dense(self: &Arc<Self>, v: &[FieldElement]) -> CliffordElement {
        assert_eq!(v.len(), self.dim());
        let mut coeffs = BTreeMap::new();
        for (m, c) in v.iter().enumerate() {
            accumulate(&mut coeffs, m as u32, *c);
        }
        CliffordElement { algebra: self.clone(), coeffs }
    }

    pub fn basis(self: &Arc<Self>) -> Vec<CliffordElement> {
        (0..self.dim() as u32).map(|m| self.basis_element(m)).collect()
    }

    /// Matrix of `x ↦ a·x` on the monomial basis.
    pub fn left_mult_matrix(self: &Arc<Self>, a: &CliffordElement) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim() as u32).map(|m| a.mul(&self.basis_element(m)).to_dense()).collect();
        Matrix::from_columns(self.field(), self.dim(), &cols)
    }

    /// Matrix of `x ↦ x·a` on the monomial basis.
    pub fn right_mult_matrix(self: &Arc<Self>, a: &CliffordElement) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim() as u32).map(|m| self.basis_element(m).mul(a).to_dense()).collect();
        Matrix::from_columns(self.field(), self.dim(), &cols)
    }

    /// Basis of `{x : x·aᵢ = aᵢ·x for all i}`.
    pub fn centralizer(self: &Arc<Self>, elems: &[CliffordElement]) -> Vec<CliffordElement> {
        let d = self.dim();
        let mut rows = Vec::new();
        for a in elems {
            let m = self.right_mult_matrix(a).sub(&self.left_mult_matrix(a));
            rows.extend(m.row_vectors());
        }
        if rows.is_empty() {
            return self.basis();
        }
        let m = Matrix::from_rows(self.field(), d, &rows);
        m.kernel().iter().map(|v| self.from_dense(v)).collect()
    }

    /// Dimension of the center; 1 for a central algebra.
    pub fn center_dim(self: &Arc<Self>) -> usize {
        let gens: Vec<CliffordElement> = (0..self.rank()).map(|i| self.generator(i)).collect();
        self.centralizer(&gens).len()
    }

    /// Inverse by a linear solve, if `a` is a unit.
    pub fn inverse(self: &Arc<Self>, a: &CliffordElement) -> Option<CliffordElement> {
        let l = self.left_mult_matrix(a);
        let x = l.solve(&self.one().to_dense())?;
        let x = self.from_dense(&x);
        if x.mul(a).is_one() {
            Some(x)
        } else {
            None
        }
    }

    /// Dimension of the span of the given elements.
    pub fn span_dim(self: &Arc<Self>, elems: &[CliffordElement]) -> usize {
        if elems.is_empty() {
            return 0;
        }
        let rows: Vec<Vector> = elems.iter().map(|e| e.to_dense()).collect();
        Matrix::from_rows(self.field(), self.dim(), &rows).rank()
    }
}

#[derive(Clone)]
pub struct CliffordElement {
    algebra: Arc<CliffordAlgebra>,
    coeffs: BTreeMap<u32, FieldElement>,
}

impl PartialEq for CliffordElement {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.id == other.algebra.id && self.coeffs == other.coeffs
    }
}

impl Eq for CliffordElement {}

impl CliffordElement {
    pub fn algebra(&self) -> &Arc<CliffordAlgebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, FieldElement> {
        &self.coeffs
    }

    pub fn coeff(&self, mask: u32) -> FieldElement {
        self.coeffs.get(&mask).copied().unwrap_or_else(|| self.algebra.field().zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_scalar(&self) -> bool {
        self.coeffs.keys().all(|&m| m == 0)
    }

    pub fn is_one(&self) -> bool {
        self.is_scalar() && self.coeff(0).is_one()
    }

    pub fn to_dense(&self) -> Vector {
        let mut v = zero_vector(self.algebra.field(), self.algebra.dim());
        for (&m, &c) in &self.coeffs {
            v[m as usize] = c;
        }
        v
    }

    fn same_algebra(&self, other: &CliffordElement) -> Result<(), CliffordError> {
        if self.algebra.id == other.algebra.id {
            Ok(())
        } else {
            Err(CliffordError::AlgebraMismatch)
        }
    }

    pub fn checked_mul(&self, other: &CliffordElement) -> Result<CliffordElement, CliffordError> {
        self.same_algebra(other)?;
        let mut acc = BTreeMap::new();
        for (&s, &a) in &self.coeffs {
            for (&t, &b) in &other.coeffs {
                let ab = a * b;
                for &(m, c) in self.algebra.monomial_product(s, t) {
                    accumulate(&mut acc, m, ab * c);
                }
            }
        }
        Ok(CliffordElement { algebra: self.algebra.clone(), coeffs: acc })
    }

    pub fn checked_add(&self, other: &CliffordElement) -> Result<CliffordElement, CliffordError> {
        self.same_algebra(other)?;
        let mut acc = self.coeffs.clone();
        for (&m, &c) in &other.coeffs {
            accumulate(&mut acc, m, c);
        }
        Ok(CliffordElement { algebra: self.algebra.clone(), coeffs: acc })
    }

    /// Panics if the elements belong to different algebras.
    pub fn mul(&self, other: &CliffordElement) -> CliffordElement {
        self.checked_mul(other).expect("Clifford elements from different algebras")
    }

    /// Panics if the elements belong to different algebras.
    pub fn add(&self, other: &CliffordElement) -> CliffordElement {
        self.checked_add(other).expect("Clifford elements from different algebras")
    }

    pub fn scale(&self, c: FieldElement) -> CliffordElement {
        let mut acc = BTreeMap::new();
        for (&m, &a) in &self.coeffs {
            accumulate(&mut acc, m, c * a);
        }
        CliffordElement { algebra: self.algebra.clone(), coeffs: acc }
    }

    pub fn commutes_with(&self, other: &CliffordElement) -> bool {
        self.mul(other) == other.mul(self)
    }
}

/// `cl_mul` with the algebra check.
pub fn cl_mul(a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement, CliffordError> {
    a.checked_mul(b)
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&m, &c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = (0..self.algebra.rank()).filter(|i| m >> i & 1 == 1).map(|i| format!("e{}", i + 1)).collect();
            match (mono.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", mono.join(""))?,
                (false, false) => write!(f, "({c}){}", mono.join(""))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A linear anti-automorphism `J` of `C(q)`, stored as its matrix on the monomial basis.
#[derive(Clone, Debug)]
pub struct AlgebraInvolution {
    algebra: Arc<CliffordAlgebra>,
    mat: Matrix,
}

impl AlgebraInvolution {
    /// `J_τ(e_{i₁}⋯e_{i_l}) = τ(e_{i_l})⋯τ(e_{i₁})`.
    pub fn natural(algebra: &Arc<CliffordAlgebra>, tau: &Isometry) -> Result<AlgebraInvolution, CliffordError> {
        let n = algebra.rank();
        if tau.dim() != n || tau.space().field() != algebra.field() {
            return Err(CliffordError::DimensionMismatch);
        }
        if !tau.is_involution() {
            return Err(CliffordError::NotInvolution);
        }
        let images: Vec<Vector> = (0..n).map(|i| tau.matrix().column(i)).collect();
        let cols: Vec<Vector> = (0..algebra.dim() as u32)
            .map(|m| {
                let rev: Vec<Vector> = (0..n).rev().filter(|i| m >> i & 1 == 1).map(|i| images[i].clone()).collect();
                algebra.vector_product(&rev).to_dense()
            })
            .collect();
        let mat = Matrix::from_columns(algebra.field(), algebra.dim(), &cols);
        Ok(AlgebraInvolution { algebra: algebra.clone(), mat })
    }

    pub fn algebra(&self) -> &Arc<CliffordAlgebra> {
        &self.algebra
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn apply(&self, a: &CliffordElement) -> CliffordElement {
        self.algebra.from_dense(&self.mat.mul_vec(&a.to_dense()))
    }

    /// `J² = id`.
    pub fn is_involutive(&self) -> bool {
        self.mat.mul(&self.mat) == Matrix::identity(self.algebra.field(), self.algebra.dim())
    }

    /// `J(ab) = J(b)J(a)` on every pair of basis monomials.
    pub fn is_anti_multiplicative(&self) -> bool {
        let basis = self.algebra.basis();
        let images: Vec<CliffordElement> = basis.iter().map(|b| self.apply(b)).collect();
        basis.iter().enumerate().all(|(i, a)| {
            basis.iter().enumerate().all(|(j, b)| self.apply(&a.mul(b)) == images[j].mul(&images[i]))
        })
    }

    /// `id + J`, whose image is `Alt` and kernel is `Sym` in characteristic 2.
    pub fn alt_map(&self) -> Matrix {
        self.mat.add(&Matrix::identity(self.algebra.field(), self.algebra.dim()))
    }

    /// Some `v` with `a = v + J(v)`, if `a ∈ Alt`.
    pub fn alt_witness(&self, a: &CliffordElement) -> Option<CliffordElement> {
        self.alt_map().solve(&a.to_dense()).map(|v| self.algebra.from_dense(&v))
    }

    pub fn is_alt(&self, a: &CliffordElement) -> bool {
        self.alt_witness(a).is_some()
    }

    pub fn is_sym(&self, a: &CliffordElement) -> bool {
        self.apply(a) == *a
    }

    pub fn alt_dim(&self) -> usize {
        self.alt_map().rank()
    }

    pub fn sym_dim(&self) -> usize {
        self.alt_map().kernel().len()
    }
}

/// `J_τ` on `C(q)` for the space of `τ`.
pub fn natural_involution(tau: &Isometry) -> Result<AlgebraInvolution, CliffordError> {
    let algebra = CliffordAlgebra::of_space(tau.space())?;
    AlgebraInvolution::natural(&algebra, tau)
}
