//! Explicit isomorphisms `(C(q), J_τ) → (M_d(F), transpose)` over finite fields.
//!
//! A rank-one element `a₀` is assembled from one rank-one element per plane of
//! a symplectic splitting of `V`. On the left ideal `L = C(q)·a₀` the rule
//! `J(x)·y = h(x, y)·c` defines a symmetric form `h` whose adjoint involution is
//! `J`, so left multiplication in an `h`-orthonormal basis of `L` carries `J`
//! to the transpose.

use std::sync::Arc;

use crate::field::FieldElement;
use crate::isometry::Isometry;
use crate::linalg::{vec_scale, Matrix, Vector};
use crate::quadspace::{BilinearForm, Subspace};

use super::invariants::{require_residual_fixed, transpose_iso_criterion};
use super::{natural_involution, AlgebraInvolution, CliffordAlgebra, CliffordElement, CliffordError};

#[derive(Clone, Debug)]
pub struct MatrixIso {
    pub degree: usize,
    /// `images[m]` is the matrix of the monomial with bitmask `m`.
    pub images: Vec<Matrix>,
    pub multiplicative: bool,
    pub bijective: bool,
    pub transpose_compatible: bool,
}

impl MatrixIso {
    pub fn verified(&self) -> bool {
        self.multiplicative && self.bijective && self.transpose_compatible
    }

    pub fn apply(&self, a: &CliffordElement) -> Matrix {
        let f = a.algebra().field();
        a.coeffs()
            .iter()
            .fold(Matrix::zeros(f, self.degree, self.degree), |acc, (&m, &c)| acc.add(&self.images[m as usize].scale(c)))
    }
}

/// A rank-one element of the quaternion algebra generated by the plane `(p, r)`
/// with `b(p, r) = 1`, searched over isotropic vectors, then `z + p` and `z + r`
/// with `z ∈ span(1, pr)`.
fn plane_rank_one(algebra: &Arc<CliffordAlgebra>, p: &Vector, r: &Vector) -> Option<CliffordElement> {
    let f = algebra.field();
    let elems = f.elements()?;
    let (pe, re) = (algebra.vector(p), algebra.vector(r));
    let pr = pe.mul(&re);
    let basis = [algebra.one(), pe.clone(), re.clone(), pr.clone()];
    let is_rank_one = |x: &CliffordElement| {
        if x.is_zero() {
            return false;
        }
        let ideal: Vec<CliffordElement> = basis.iter().map(|b| b.mul(x)).collect();
        algebra.span_dim(&ideal) == 2
    };
    for &a in &elems {
        for &b in &elems {
            let v = pe.scale(a).add(&re.scale(b));
            if !v.is_zero() && v.mul(&v).is_zero() {
                return Some(v);
            }
        }
    }
    for tail in [&pe, &re] {
        for &a in &elems {
            for &d in &elems {
                let x = algebra.scalar(a).add(&pr.scale(d)).add(tail);
                if is_rank_one(&x) {
                    return Some(x);
                }
            }
        }
    }
    None
}

fn fail(what: &str) -> CliffordError {
    CliffordError::TheoremViolated(what.to_string())
}

pub fn explicit_matrix_iso(tau: &Isometry) -> Result<MatrixIso, CliffordError> {
    require_residual_fixed(tau)?;
    if !transpose_iso_criterion(tau)?.holds() {
        return Err(CliffordError::CriterionFails);
    }
    let field = tau.space().field();
    if !field.is_finite() {
        return Err(CliffordError::UnsupportedField);
    }
    let j = natural_involution(tau)?;
    build(&j)
}

fn build(j: &AlgebraInvolution) -> Result<MatrixIso, CliffordError> {
    let algebra = j.algebra().clone();
    let field = algebra.field();
    let big = algebra.dim();
    let gram = algebra.form().polar_gram();
    let pairs = BilinearForm::new(gram).hyperbolic_basis_alternating().map_err(|e| fail(&e.to_string()))?;
    let degree = 1usize << pairs.len();

    let mut a0 = algebra.one();
    for (p, r) in &pairs {
        let x = plane_rank_one(&algebra, p, r).ok_or_else(|| fail("no rank-one element in a plane factor"))?;
        a0 = a0.mul(&x);
    }
    let basis = algebra.basis();
    let ideal: Vec<Vector> = basis.iter().map(|b| b.mul(&a0).to_dense()).collect();
    let l = Subspace::span(field, big, &ideal);
    if l.dim() != degree {
        return Err(fail("left ideal has the wrong dimension"));
    }
    let ja0 = j.apply(&a0);
    let corner: Vec<Vector> = basis.iter().map(|b| ja0.mul(b).mul(&a0).to_dense()).collect();
    let corner = Subspace::span(field, big, &corner);
    if corner.dim() != 1 {
        return Err(fail("J(a₀)·C·a₀ is not a line"));
    }
    let c = corner.basis_vectors().remove(0);
    let pivot = c.iter().position(|x| !x.is_zero()).unwrap();

    let lvecs: Vec<CliffordElement> = l.basis_vectors().iter().map(|v| algebra.from_dense(v)).collect();
    let h = |x: &CliffordElement, y: &CliffordElement| -> Result<FieldElement, CliffordError> {
        let v = j.apply(x).mul(y).to_dense();
        let val = v[pivot] / c[pivot];
        if v != vec_scale(val, &c) {
            return Err(fail("J(x)·y leaves the corner line"));
        }
        Ok(val)
    };
    let mut hgram = Matrix::zeros(field, degree, degree);
    for (a, x) in lvecs.iter().enumerate() {
        for (b, y) in lvecs.iter().enumerate() {
            hgram[(a, b)] = h(x, y)?;
        }
    }
    let hform = BilinearForm::new(hgram);
    let ortho = hform.orthogonal_basis().map_err(|e| fail(&format!("adjoint form: {e}")))?;
    let mut onb: Vec<Vector> = Vec::with_capacity(degree);
    for coords in &ortho {
        let norm = hform.eval(coords, coords);
        let root = norm.sqrt().map_err(|_| fail("adjoint form has a non-square diagonal"))?;
        let scaled = vec_scale(root.inv().unwrap(), coords);
        let lifted = scaled
            .iter()
            .zip(&lvecs)
            .fold(algebra.zero(), |acc, (s, v)| acc.add(&v.scale(*s)));
        onb.push(lifted.to_dense());
    }
    let bmat = Matrix::from_columns(field, big, &onb);
    let image = |a: &CliffordElement| -> Result<Matrix, CliffordError> {
        let cols: Vec<Vector> = onb
            .iter()
            .map(|v| bmat.solve(&a.mul(&algebra.from_dense(v)).to_dense()).ok_or_else(|| fail("ideal not stable")))
            .collect::<Result<_, _>>()?;
        Ok(Matrix::from_columns(field, degree, &cols))
    };
    let images: Vec<Matrix> = basis.iter().map(&image).collect::<Result<_, _>>()?;
    let mut iso = MatrixIso { degree, images, multiplicative: true, bijective: false, transpose_compatible: true };

    'outer: for s in 0..big as u32 {
        for t in 0..big as u32 {
            let expect = algebra
                .monomial_product(s, t)
                .iter()
                .fold(Matrix::zeros(field, degree, degree), |acc, &(m, c)| acc.add(&iso.images[m as usize].scale(c)));
            if iso.images[s as usize].mul(&iso.images[t as usize]) != expect {
                iso.multiplicative = false;
                break 'outer;
            }
        }
    }
    let flat: Vec<Vector> = iso.images.iter().map(|m| m.row_vectors().concat()).collect();
    iso.bijective = degree * degree == big && Matrix::from_rows(field, degree * degree, &flat).rank() == big;
    iso.transpose_compatible = basis.iter().zip(&iso.images).all(|(b, m)| iso.apply(&j.apply(b)) == m.transpose());
    Ok(iso)
}

/// For symmetric `X` over a field of characteristic 2 with `X² = c·I`, whether
/// `c` is a square.
pub fn square_scalar_check(x: &Matrix) -> Result<bool, CliffordError> {
    if x.field().characteristic() != 2 {
        return Err(CliffordError::CharacteristicNot2);
    }
    if !x.is_symmetric() {
        return Err(CliffordError::NotSymmetric);
    }
    let sq = x.mul(x);
    let n = x.rows();
    let c = if n == 0 { x.field().one() } else { sq[(0, 0)] };
    if sq != Matrix::identity(x.field(), n).scale(c) {
        return Err(CliffordError::NotScalarSquare);
    }
    Ok(c.is_square())
}
