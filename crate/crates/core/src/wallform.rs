//! The Wall form `ω(τx − x, τy − y) = b(τx − x, y)` of an isometry on its residual space.

use thiserror::Error;

use crate::field::FieldElement;
use crate::isometry::Isometry;
use crate::linalg::{Matrix, Vector};
use crate::quadspace::{BilinearForm, QuadraticForm, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WallFormError {
    #[error("vector is not in the residual space")]
    NotInResidual,
    #[error("preimage {0} does not map onto its residual basis vector")]
    BadPreimage(usize),
    #[error("wall form is not symmetric")]
    NotSymmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub symmetric: bool,
    pub antisymmetric: bool,
    pub alternating: bool,
}

#[derive(Clone, Debug)]
pub struct WallForm {
    tau: Isometry,
    residual: Subspace,
    residual_basis: Vec<Vector>,
    preimages: Vec<Vector>,
    gram: Matrix,
}

impl WallForm {
    /// Residual basis is the echelon basis of `im(τ − id)`; each preimage is
    /// the solution of `(τ − id)y = u` with free variables zero.
    pub fn new(tau: &Isometry) -> WallForm {
        let d = tau.minus_identity();
        let residual = tau.residual_space();
        let residual_basis = residual.basis_vectors();
        let preimages = residual_basis
            .iter()
            .map(|u| d.solve(u).expect("residual vectors lie in the image of τ − id"))
            .collect();
        WallForm::assemble(tau.clone(), residual, residual_basis, preimages)
    }

    /// The same form computed from caller-supplied preimages.
    pub fn with_preimages(tau: &Isometry, preimages: Vec<Vector>) -> Result<WallForm, WallFormError> {
        let residual = tau.residual_space();
        let residual_basis = residual.basis_vectors();
        if preimages.len() != residual_basis.len() {
            return Err(WallFormError::BadPreimage(preimages.len().min(residual_basis.len())));
        }
        let d = tau.minus_identity();
        for (j, (y, u)) in preimages.iter().zip(&residual_basis).enumerate() {
            if y.len() != tau.dim() || d.mul_vec(y) != *u {
                return Err(WallFormError::BadPreimage(j));
            }
        }
        Ok(WallForm::assemble(tau.clone(), residual, residual_basis, preimages))
    }

    fn assemble(tau: Isometry, residual: Subspace, residual_basis: Vec<Vector>, preimages: Vec<Vector>) -> WallForm {
        let space = tau.space();
        let s = residual_basis.len();
        let mut gram = Matrix::zeros(space.field(), s, s);
        for i in 0..s {
            for j in 0..s {
                gram[(i, j)] = space.b(&residual_basis[i], &preimages[j]);
            }
        }
        WallForm { tau, residual, residual_basis, preimages, gram }
    }

    pub fn tau(&self) -> &Isometry {
        &self.tau
    }

    pub fn residual(&self) -> &Subspace {
        &self.residual
    }

    pub fn residual_basis(&self) -> &[Vector] {
        &self.residual_basis
    }

    pub fn preimages(&self) -> &[Vector] {
        &self.preimages
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.residual_basis.len()
    }

    pub fn bilinear(&self) -> BilinearForm {
        BilinearForm::new(self.gram.clone())
    }

    /// Coordinates of a residual vector in the residual basis.
    pub fn coordinates(&self, v: &[FieldElement]) -> Result<Vector, WallFormError> {
        self.residual.coordinates(v).ok_or(WallFormError::NotInResidual)
    }

    /// `ω(u, v)` for ambient vectors `u, v ∈ r(τ)`.
    pub fn eval(&self, u: &[FieldElement], v: &[FieldElement]) -> Result<FieldElement, WallFormError> {
        let cu = self.coordinates(u)?;
        let cv = self.coordinates(v)?;
        Ok(self.bilinear().eval(&cu, &cv))
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.is_invertible()
    }

    pub fn classify(&self) -> Classification {
        let g = &self.gram;
        let gt = g.transpose();
        let antisymmetric = g.add(&gt).is_zero();
        let zero_diagonal = (0..self.dim()).all(|i| g[(i, i)].is_zero());
        Classification { symmetric: *g == gt, antisymmetric, alternating: antisymmetric && zero_diagonal }
    }

    /// `φ(v) = ω(v, v)` as a quadratic form in residual coordinates.
    pub fn assoc_quadratic(&self) -> Result<QuadraticForm, WallFormError> {
        if !self.classify().symmetric {
            return Err(WallFormError::NotSymmetric);
        }
        let s = self.dim();
        let mut q = Matrix::zeros(self.gram.field(), s, s);
        for i in 0..s {
            q[(i, i)] = self.gram[(i, i)];
            for j in i + 1..s {
                q[(i, j)] = self.gram[(i, j)] + self.gram[(j, i)];
            }
        }
        Ok(QuadraticForm::new(&q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::vec_add;
    use std::sync::Arc;

    fn gram_strings(w: &WallForm) -> Vec<Vec<String>> {
        w.gram().to_strings()
    }

    #[test]
    fn identity_gives_empty_form() {
        let id = Isometry::identity(Arc::new(fixtures::h4f2_space()));
        let w = WallForm::new(&id);
        assert_eq!(w.dim(), 0);
        assert!(w.is_nondegenerate());
        let c = w.classify();
        assert!(c.symmetric && c.antisymmetric && c.alternating);
    }

    #[test]
    fn interchange_form() {
        let tau = fixtures::h4f2_tau();
        let w = WallForm::new(&tau);
        let s = tau.space();
        assert_eq!(w.residual_basis(), &[s.unit(0), s.unit(2)]);
        assert_eq!(gram_strings(&w), vec![vec!["0", "1"], vec!["1", "0"]]);
        assert!(w.eval(&s.unit(0), &s.unit(2)).unwrap().is_one());
        assert!(w.eval(&s.unit(0), &s.unit(0)).unwrap().is_zero());
        assert_eq!(w.eval(&s.unit(1), &s.unit(0)), Err(WallFormError::NotInResidual));
        let c = w.classify();
        assert!(c.symmetric && c.antisymmetric && c.alternating);
        let phi = w.assoc_quadratic().unwrap();
        assert!(phi.qmat().is_zero());
    }

    #[test]
    fn reflection_form_is_t() {
        let w = WallForm::new(&fixtures::r2t_tau());
        assert_eq!(gram_strings(&w), vec![vec!["t"]]);
        let c = w.classify();
        assert!(c.symmetric && c.antisymmetric && !c.alternating);
        let phi = w.assoc_quadratic().unwrap();
        assert_eq!(phi.qmat().to_strings(), vec![vec!["t"]]);
    }

    #[test]
    fn r4t_associated_form() {
        let w = WallForm::new(&fixtures::r4t_tau());
        let phi = w.assoc_quadratic().unwrap();
        assert_eq!(phi.qmat().to_strings(), vec![vec!["t", "0"], vec!["0", "t"]]);
        assert!(phi.is_totally_singular());
    }

    #[test]
    fn gf7_eichler_with_anisotropic_w_is_neither() {
        // (E − id)²w = −2q(w)x, so the index is 3 and ω has no symmetry.
        let tau = fixtures::gf7_eichler();
        assert_eq!(tau.unipotency_index(), Some(3));
        let w = WallForm::new(&tau);
        assert_eq!(w.dim(), 2);
        let c = w.classify();
        assert!(!c.antisymmetric && !c.symmetric && !c.alternating);
        assert!(w.is_nondegenerate());
        assert_eq!(w.assoc_quadratic(), Err(WallFormError::NotSymmetric));
    }

    #[test]
    fn gf7_eichler_with_isotropic_w_is_antisymmetric_only() {
        let tau = fixtures::gf7_eichler_isotropic();
        assert_eq!(tau.unipotency_index(), Some(2));
        let w = WallForm::new(&tau);
        let c = w.classify();
        assert!(c.antisymmetric && !c.symmetric && c.alternating);
        assert!(w.is_nondegenerate());
    }

    #[test]
    fn diagonal_is_minus_q() {
        for tau in [fixtures::gf7_eichler(), fixtures::r4t_tau(), fixtures::h4f2_tau()] {
            let w = WallForm::new(&tau);
            for (i, u) in w.residual_basis().iter().enumerate() {
                assert_eq!(w.gram()[(i, i)], -tau.space().q(u));
            }
        }
    }

    #[test]
    fn preimages_shifted_by_fixed_vectors() {
        let tau = fixtures::h4f2_plus_plane_tau();
        let w = WallForm::new(&tau);
        let k = tau.fixed_space().basis_vectors();
        let shifted: Vec<Vector> = w.preimages().iter().zip(k.iter().cycle()).map(|(y, z)| vec_add(y, z)).collect();
        let w2 = WallForm::with_preimages(&tau, shifted).unwrap();
        assert_eq!(w.gram(), w2.gram());
        let bad = vec![tau.space().unit(0); w.dim()];
        assert!(matches!(WallForm::with_preimages(&tau, bad), Err(WallFormError::BadPreimage(_))));
    }
}
