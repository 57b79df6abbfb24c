//! Elements of the orthogonal group `O(V, q)`.
//!
//! Matrices act on column vectors: column `j` of the matrix is the image of the
//! `j`-th basis vector.

use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldElement, SquareClass};
use crate::linalg::{vec_add, vec_scale, vec_sub, Matrix, Vector};
use crate::quadspace::{QuadraticSpace, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsometryError {
    #[error("matrix does not preserve q: q(Mx) ≠ q(x) for x = {witness:?}")]
    NotAnIsometry { witness: Vector },
    #[error("matrix has shape {rows}×{cols}, expected {n}×{n}")]
    Shape { rows: usize, cols: usize, n: usize },
    #[error("vector is isotropic")]
    IsotropicVector,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("subspace is not invariant under the isometry")]
    NotInvariant,
    #[error("subspace is not regular")]
    NotRegular,
    #[error("isometries act on different spaces")]
    SpaceMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    space: Arc<QuadraticSpace>,
    mat: Matrix,
}

impl Isometry {
    /// Validates `q(Mx) = q(x)` through `N = MᵀQM − Q`: `N + Nᵀ = 0` and `diag(N) = 0`.
    pub fn new(space: Arc<QuadraticSpace>, mat: Matrix) -> Result<Isometry, IsometryError> {
        let n = space.dim();
        if mat.rows() != n || mat.cols() != n || mat.field() != space.field() {
            return Err(IsometryError::Shape { rows: mat.rows(), cols: mat.cols(), n });
        }
        let q = space.qmat();
        let diff = mat.transpose().mul(q).mul(&mat).sub(q);
        let f = space.field();
        for i in 0..n {
            if !diff[(i, i)].is_zero() {
                return Err(IsometryError::NotAnIsometry { witness: space.unit(i) });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if !(diff[(i, j)] + diff[(j, i)]).is_zero() {
                    let mut w = space.unit(i);
                    w[j] = f.one();
                    return Err(IsometryError::NotAnIsometry { witness: w });
                }
            }
        }
        Ok(Isometry { space, mat })
    }

    pub(crate) fn new_unchecked(space: Arc<QuadraticSpace>, mat: Matrix) -> Isometry {
        debug_assert!(Isometry::new(space.clone(), mat.clone()).is_ok());
        Isometry { space, mat }
    }

    pub fn identity(space: Arc<QuadraticSpace>) -> Isometry {
        let mat = Matrix::identity(space.field(), space.dim());
        Isometry { space, mat }
    }

    /// `τ_u(x) = x − (b(u,x)/q(u))·u`.
    pub fn reflection(space: Arc<QuadraticSpace>, u: &[FieldElement]) -> Result<Isometry, IsometryError> {
        if u.len() != space.dim() {
            return Err(IsometryError::Shape { rows: u.len(), cols: 1, n: space.dim() });
        }
        let qu = space.q(u);
        let inv = qu.inv().ok_or(IsometryError::IsotropicVector)?;
        let n = space.dim();
        let cols: Vec<Vector> = (0..n)
            .map(|j| {
                let e = space.unit(j);
                vec_sub(&e, &vec_scale(space.b(u, &e) * inv, u))
            })
            .collect();
        let mat = Matrix::from_columns(space.field(), n, &cols);
        Ok(Isometry::new_unchecked(space, mat))
    }

    /// Eichler transformation `E(v) = v + b(v,x)w − b(v,w)x − q(w)b(v,x)x` for
    /// isotropic `x` and `w ⊥ x`.
    pub fn eichler(
        space: Arc<QuadraticSpace>,
        x: &[FieldElement],
        w: &[FieldElement],
    ) -> Result<Isometry, IsometryError> {
        let n = space.dim();
        if x.len() != n || w.len() != n {
            return Err(IsometryError::Shape { rows: x.len(), cols: 1, n });
        }
        if !space.q(x).is_zero() {
            return Err(IsometryError::PreconditionViolated("x is not isotropic".into()));
        }
        if !space.b(x, w).is_zero() {
            return Err(IsometryError::PreconditionViolated("w is not orthogonal to x".into()));
        }
        let qw = space.q(w);
        let cols: Vec<Vector> = (0..n)
            .map(|j| {
                let v = space.unit(j);
                let bx = space.b(&v, x);
                let bw = space.b(&v, w);
                let v = vec_add(&v, &vec_scale(bx, w));
                vec_sub(&v, &vec_scale(bw + qw * bx, x))
            })
            .collect();
        let mat = Matrix::from_columns(space.field(), n, &cols);
        Ok(Isometry::new_unchecked(space, mat))
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn space_arc(&self) -> &Arc<QuadraticSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn apply(&self, v: &[FieldElement]) -> Vector {
        self.mat.mul_vec(v)
    }

    /// `τ − id`.
    pub fn minus_identity(&self) -> Matrix {
        self.mat.sub(&Matrix::identity(self.space.field(), self.dim()))
    }

    pub fn is_identity(&self) -> bool {
        self.minus_identity().is_zero()
    }

    /// `k(τ) = ker(τ − id)`.
    pub fn fixed_space(&self) -> Subspace {
        Subspace::span(self.space.field(), self.dim(), &self.minus_identity().kernel())
    }

    /// `r(τ) = im(τ − id)`.
    pub fn residual_space(&self) -> Subspace {
        Subspace::span(self.space.field(), self.dim(), &self.minus_identity().column_vectors())
    }

    /// Least `k` with `(τ − id)^k = 0`; 0 for the identity, `None` if not unipotent.
    pub fn unipotency_index(&self) -> Option<u32> {
        if self.is_identity() {
            return Some(0);
        }
        let d = self.minus_identity();
        let mut p = d.clone();
        for k in 1..=self.dim() as u32 {
            if p.is_zero() {
                return Some(k);
            }
            p = p.mul(&d);
        }
        None
    }

    pub fn is_involution(&self) -> bool {
        self.mat.mul(&self.mat) == Matrix::identity(self.space.field(), self.dim())
    }

    /// `(τ − id)² = 0`.
    pub fn is_unipotent2(&self) -> bool {
        let d = self.minus_identity();
        d.mul(&d).is_zero()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry, IsometryError> {
        if self.space != other.space {
            return Err(IsometryError::SpaceMismatch);
        }
        Ok(Isometry { space: self.space.clone(), mat: self.mat.mul(&other.mat) })
    }

    pub fn inverse(&self) -> Isometry {
        let mat = self.mat.inverse().expect("isometries of a regular space are invertible");
        Isometry { space: self.space.clone(), mat }
    }

    /// Restriction to a τ-invariant regular subspace, expressed in the echelon
    /// basis of that subspace.
    pub fn restrict(&self, s: &Subspace) -> Result<Isometry, IsometryError> {
        if !self.space.is_regular(s) {
            return Err(IsometryError::NotRegular);
        }
        self.restrict_to_basis(&s.basis_vectors())
    }

    /// Restriction to the span of the given basis (which must be τ-invariant
    /// and regular), in that basis.
    pub fn restrict_to_basis(&self, basis: &[Vector]) -> Result<Isometry, IsometryError> {
        let field = self.space.field();
        let n = self.dim();
        let form = self.space.restrict_form(basis);
        let sub = QuadraticSpace::from_form(form).map_err(|_| IsometryError::NotRegular)?;
        let bmat = Matrix::from_columns(field, n, basis);
        let cols: Vec<Vector> = basis
            .iter()
            .map(|v| bmat.solve(&self.apply(v)).ok_or(IsometryError::NotInvariant))
            .collect::<Result<_, _>>()?;
        let mat = Matrix::from_columns(field, basis.len(), &cols);
        Isometry::new(Arc::new(sub), mat)
    }

    /// 4-dimensional with `k(τ)` a 2-dimensional totally isotropic subspace.
    pub fn is_interchange(&self) -> bool {
        if self.dim() != 4 {
            return false;
        }
        let k = self.fixed_space();
        k.dim() == 2 && self.space.is_totally_isotropic(&k)
    }
}

/// A product `τ_{u₁} ∘ ⋯ ∘ τ_{u_m}` of reflections.
#[derive(Clone, Debug)]
pub struct ReflectionWord {
    space: Arc<QuadraticSpace>,
    factors: Vec<Vector>,
}

impl ReflectionWord {
    pub fn new(space: Arc<QuadraticSpace>, factors: Vec<Vector>) -> Result<ReflectionWord, IsometryError> {
        for u in &factors {
            if u.len() != space.dim() {
                return Err(IsometryError::Shape { rows: u.len(), cols: 1, n: space.dim() });
            }
            if space.q(u).is_zero() {
                return Err(IsometryError::IsotropicVector);
            }
        }
        Ok(ReflectionWord { space, factors })
    }

    pub fn factors(&self) -> &[Vector] {
        &self.factors
    }

    /// Square class of `∏ q(uᵢ)`.
    pub fn spinor_norm(&self) -> SquareClass {
        let f = self.space.field();
        SquareClass::of(self.factors.iter().fold(f.one(), |acc, u| acc * self.space.q(u)))
    }

    pub fn to_isometry(&self) -> Isometry {
        self.factors.iter().fold(Isometry::identity(self.space.clone()), |acc, u| {
            let r = Isometry::reflection(self.space.clone(), u).expect("factors are anisotropic");
            acc.compose(&r).unwrap()
        })
    }
}
