//! Orthogonal decomposition of isometries with `(τ − id)² = 0` into a fixed
//! part, interchange blocks and reflection planes.

use std::sync::Arc;

use thiserror::Error;

use crate::field::FieldElement;
use crate::isometry::{Isometry, IsometryError};
use crate::linalg::{linear_combination, vec_add, vec_scale, vec_sub, Matrix, Vector};
use crate::quadspace::{QuadError, QuadraticSpace, Subspace};
use crate::wallform::WallForm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("(τ − id)² ≠ 0")]
    NotUnipotent2,
    #[error("ω(u,u) = 0")]
    ZeroDiagonal,
    #[error("vector is not in the residual space")]
    NotInResidual,
    #[error("pair is not a hyperbolic pair for the wall form")]
    NotHyperbolicPair,
    #[error("no preimage under τ − id inside the current complement")]
    PreimageUnsolvable,
    #[error("isometry is not an interchange isometry")]
    NotInterchange,
    #[error("reflection blocks need characteristic 2")]
    CharacteristicNot2,
    #[error("decomposition check failed: {0}")]
    ValidationFailed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    /// `τ` restricted to `span(u, v)` is the reflection along `u`; `τ(v) − v = u`.
    Reflection { u: Vector, v: Vector, plane: Subspace },
    /// Hyperbolic basis with `τx = x`, `τw = w`, `τy = y + w`, `τz = z − x`.
    Interchange { x: Vector, y: Vector, w: Vector, z: Vector, space4: Subspace },
}

impl Block {
    pub fn kind(&self) -> &'static str {
        match self {
            Block::Reflection { .. } => "reflection",
            Block::Interchange { .. } => "interchange",
        }
    }

    pub fn vectors(&self) -> Vec<Vector> {
        match self {
            Block::Reflection { u, v, .. } => vec![u.clone(), v.clone()],
            Block::Interchange { x, y, w, z, .. } => vec![x.clone(), y.clone(), w.clone(), z.clone()],
        }
    }

    pub fn summand(&self) -> &Subspace {
        match self {
            Block::Reflection { plane, .. } => plane,
            Block::Interchange { space4, .. } => space4,
        }
    }

    /// Matrix of `τ` on [`Block::vectors`].
    fn local_matrix(&self, one: FieldElement) -> Matrix {
        let f = one.field();
        match self {
            Block::Reflection { .. } => {
                let mut m = Matrix::identity(f, 2);
                m[(0, 1)] = one;
                m
            }
            Block::Interchange { .. } => {
                let mut m = Matrix::identity(f, 4);
                m[(2, 1)] = one;
                m[(0, 3)] = -one;
                m
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub tau: Isometry,
    pub w: Subspace,
    pub blocks: Vec<Block>,
    /// `dim r(τ)`.
    pub s: usize,
    pub alternating: bool,
}

impl Decomposition {
    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    /// Rebuilds `τ` from the pieces: identity on `W`, the normal form on each block.
    pub fn reassemble(&self) -> Matrix {
        let field = self.tau.space().field();
        let n = self.tau.dim();
        let mut basis = self.w.basis_vectors();
        let mut local = Matrix::identity(field, n);
        let mut offset = basis.len();
        for b in &self.blocks {
            let vs = b.vectors();
            let lm = b.local_matrix(field.one());
            for i in 0..vs.len() {
                for j in 0..vs.len() {
                    local[(offset + i, offset + j)] = lm[(i, j)];
                }
            }
            offset += vs.len();
            basis.extend(vs);
        }
        let bm = Matrix::from_columns(field, n, &basis);
        match bm.inverse() {
            Some(inv) => bm.mul(&local).mul(&inv),
            None => Matrix::zeros(field, n, n),
        }
    }

    /// Checks every structural claim of the decomposition.
    pub fn validate(&self) -> Result<(), DecomposeError> {
        let fail = |s: &str| Err(DecomposeError::ValidationFailed(s.to_string()));
        let tau = &self.tau;
        let space = tau.space();
        let mut summands = vec![self.w.clone()];
        summands.extend(self.blocks.iter().map(|b| b.summand().clone()));
        let total: usize = summands.iter().map(|s| s.dim()).sum();
        if total != space.dim() {
            return fail("summand dimensions do not add up");
        }
        for (i, a) in summands.iter().enumerate() {
            if !space.is_regular(a) {
                return fail("summand is not regular");
            }
            if !a.contains_subspace(&map_subspace(tau.matrix(), a)) {
                return fail("summand is not τ-invariant");
            }
            for b in &summands[i + 1..] {
                if !space.gram_of_pair(a, b).is_zero() {
                    return fail("summands are not orthogonal");
                }
            }
        }
        for v in self.w.basis_vectors() {
            if tau.apply(&v) != v {
                return fail("τ moves a vector of W");
            }
        }
        for b in &self.blocks {
            match b {
                Block::Reflection { u, v, .. } => {
                    if space.q(u).is_zero() {
                        return fail("reflection vector is isotropic");
                    }
                    let r = Isometry::reflection(tau.space_arc().clone(), u).unwrap();
                    if tau.apply(u) != r.apply(u) || tau.apply(v) != r.apply(v) {
                        return fail("τ differs from the reflection on its plane");
                    }
                }
                Block::Interchange { x, y, w, z, .. } => {
                    if !space.is_hyperbolic_quadruple(&[x.clone(), y.clone(), w.clone(), z.clone()]) {
                        return fail("interchange basis is not hyperbolic");
                    }
                    if tau.apply(x) != *x
                        || tau.apply(w) != *w
                        || tau.apply(y) != vec_add(y, w)
                        || tau.apply(z) != vec_sub(z, x)
                    {
                        return fail("interchange relations do not hold");
                    }
                }
            }
        }
        let expect = if self.alternating { self.s / 2 } else { self.s };
        if self.m() != expect {
            return fail("block count does not match the wall form");
        }
        let kinds_ok = self.blocks.iter().all(|b| matches!(b, Block::Interchange { .. }) == self.alternating);
        if !kinds_ok {
            return fail("block kinds do not match the wall form");
        }
        if self.reassemble() != *tau.matrix() {
            return fail("reassembled matrix differs from τ");
        }
        Ok(())
    }
}

fn map_subspace(m: &Matrix, s: &Subspace) -> Subspace {
    let imgs: Vec<Vector> = s.basis_vectors().iter().map(|v| m.mul_vec(v)).collect();
    Subspace::span(m.field(), m.rows(), &imgs)
}

trait PairGram {
    fn gram_of_pair(&self, a: &Subspace, b: &Subspace) -> Matrix;
}

impl PairGram for QuadraticSpace {
    fn gram_of_pair(&self, a: &Subspace, b: &Subspace) -> Matrix {
        let a = a.basis();
        let b = b.basis();
        a.mul(self.gram()).mul(&b.transpose())
    }
}

fn require_unipotent2(tau: &Isometry) -> Result<(), DecomposeError> {
    if tau.is_unipotent2() {
        Ok(())
    } else {
        Err(DecomposeError::NotUnipotent2)
    }
}

/// A complement `W` of `r(τ)` in `k(τ)`; `τ` is the identity on it.
pub fn complement_w(tau: &Isometry) -> Result<Subspace, DecomposeError> {
    require_unipotent2(tau)?;
    let r = tau.residual_space();
    let k = tau.fixed_space();
    r.complement_in(&k).map_err(|_| DecomposeError::NotUnipotent2)
}

/// The laws satisfied by the complement `W` of `r(τ)` in `k(τ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplementLaws {
    pub w_regular: bool,
    pub perp_dim_is_twice_residual: bool,
    pub restricted_fixed_equals_residual: bool,
}

impl ComplementLaws {
    pub fn all(&self) -> bool {
        self.w_regular && self.perp_dim_is_twice_residual && self.restricted_fixed_equals_residual
    }
}

pub fn complement_laws(tau: &Isometry) -> Result<ComplementLaws, DecomposeError> {
    let w = complement_w(tau)?;
    let space = tau.space();
    let perp = space.orthogonal_complement(&w);
    let r = tau.residual_space();
    let r_perp = map_subspace(&tau.minus_identity(), &perp);
    let k_perp = tau.fixed_space().intersection(&perp);
    Ok(ComplementLaws {
        w_regular: space.is_regular(&w),
        perp_dim_is_twice_residual: perp.dim() == 2 * r.dim(),
        restricted_fixed_equals_residual: k_perp == r && r_perp == r,
    })
}

/// Solves `(τ − id)y = target` with `y` in the span of `container`.
fn preimage_in(tau: &Isometry, target: &[FieldElement], container: &[Vector]) -> Result<Vector, DecomposeError> {
    let field = tau.space().field();
    let n = tau.dim();
    if container.is_empty() {
        return Err(DecomposeError::PreimageUnsolvable);
    }
    let d = tau.minus_identity();
    let images: Vec<Vector> = container.iter().map(|c| d.mul_vec(c)).collect();
    let a = Matrix::from_columns(field, n, &images);
    let coeffs = a.solve(target).ok_or(DecomposeError::PreimageUnsolvable)?;
    Ok(linear_combination(field, n, &coeffs, container))
}

fn reflection_block_in(tau: &Isometry, u: &[FieldElement], container: &[Vector]) -> Result<Block, DecomposeError> {
    let space = tau.space();
    if space.field().characteristic() != 2 {
        return Err(DecomposeError::CharacteristicNot2);
    }
    if !tau.residual_space().contains(u) {
        return Err(DecomposeError::NotInResidual);
    }
    if space.q(u).is_zero() {
        return Err(DecomposeError::ZeroDiagonal);
    }
    let v = preimage_in(tau, u, container)?;
    let plane = Subspace::span(space.field(), tau.dim(), &[u.to_vec(), v.clone()]);
    Ok(Block::Reflection { u: u.to_vec(), v, plane })
}

/// Plane `span(u, v)` with `τ(v) − v = u`, on which `τ` is the reflection along `u`.
pub fn reflection_block(tau: &Isometry, u: &[FieldElement]) -> Result<Block, DecomposeError> {
    reflection_block_in(tau, u, &tau.space().whole().basis_vectors())
}

fn interchange_block_in(
    tau: &Isometry,
    x: &[FieldElement],
    w: &[FieldElement],
    container: &[Vector],
) -> Result<Block, DecomposeError> {
    require_unipotent2(tau)?;
    let wf = WallForm::new(tau);
    let (Ok(xx), Ok(ww), Ok(xw), Ok(wx)) = (wf.eval(x, x), wf.eval(w, w), wf.eval(x, w), wf.eval(w, x)) else {
        return Err(DecomposeError::NotInResidual);
    };
    if !xx.is_zero() || !ww.is_zero() || !xw.is_one() || !(wx + xw).is_zero() {
        return Err(DecomposeError::NotHyperbolicPair);
    }
    let space = tau.space();
    let y = preimage_in(tau, w, container)?;
    let z = preimage_in(tau, &vec_scale(-space.field().one(), x), container)?;
    let y = vec_sub(&y, &vec_scale(space.q(&y), x));
    let byz = space.b(&y, &z);
    let qz = space.q(&z);
    let z = vec_sub(&vec_sub(&z, &vec_scale(byz, x)), &vec_scale(qz, w));
    let space4 = Subspace::span(space.field(), tau.dim(), &[x.to_vec(), y.clone(), w.to_vec(), z.clone()]);
    Ok(Block::Interchange { x: x.to_vec(), y, w: w.to_vec(), z, space4 })
}

/// Four-dimensional `τ`-invariant regular subspace on which `τ` is an
/// interchange isometry with residual space `span(x, w)`.
pub fn interchange_block(tau: &Isometry, x: &[FieldElement], w: &[FieldElement]) -> Result<Block, DecomposeError> {
    interchange_block_in(tau, x, w, &tau.space().whole().basis_vectors())
}

pub fn decompose(tau: &Isometry) -> Result<Decomposition, DecomposeError> {
    require_unipotent2(tau)?;
    let space = tau.space();
    let field = space.field();
    let n = tau.dim();
    let w = complement_w(tau)?;
    let wf = WallForm::new(tau);
    let residual = wf.residual_basis().to_vec();
    let lift = |c: &Vector| linear_combination(field, n, c, &residual);
    let alternating = wf.classify().alternating;
    let mut container = space.orthogonal_complement(&w);
    let mut blocks = Vec::new();
    if alternating {
        let pairs = wf.bilinear().hyperbolic_basis_alternating().map_err(internal)?;
        for (cx, cw) in &pairs {
            let (x, wv) = (lift(cx), lift(cw));
            assert!(container.contains(&x) && container.contains(&wv), "remaining residual vectors leave the complement");
            let b = interchange_block_in(tau, &x, &wv, &container.basis_vectors())?;
            container = container.intersection(&space.orthogonal_complement(b.summand()));
            blocks.push(b);
        }
    } else {
        let basis = wf.bilinear().orthogonal_basis().map_err(internal)?;
        for c in &basis {
            let u = lift(c);
            assert!(container.contains(&u), "remaining residual vectors leave the complement");
            let b = reflection_block_in(tau, &u, &container.basis_vectors())?;
            container = container.intersection(&space.orthogonal_complement(b.summand()));
            blocks.push(b);
        }
    }
    Ok(Decomposition { tau: tau.clone(), w, blocks, s: residual.len(), alternating })
}

fn internal(e: QuadError) -> DecomposeError {
    DecomposeError::ValidationFailed(e.to_string())
}

/// The wall form of `τ` is alternating.
pub fn is_interchanging_kind(tau: &Isometry) -> Result<bool, DecomposeError> {
    require_unipotent2(tau)?;
    Ok(WallForm::new(tau).classify().alternating)
}

/// Hyperbolic basis `(x, y, w, z)` of an interchange isometry with `τ = E_{x,w}`.
pub fn interchange_normal_basis(tau: &Isometry) -> Result<[Vector; 4], DecomposeError> {
    if !tau.is_interchange() {
        return Err(DecomposeError::NotInterchange);
    }
    let d = decompose(tau)?;
    match d.blocks.as_slice() {
        [Block::Interchange { x, y, w, z, .. }] => Ok([x.clone(), y.clone(), w.clone(), z.clone()]),
        _ => Err(DecomposeError::ValidationFailed("interchange isometry did not give one block".into())),
    }
}

/// `τ` rebuilt as `E_{x,w}` from a normal basis.
pub fn eichler_from_normal_basis(space: Arc<QuadraticSpace>, basis: &[Vector; 4]) -> Result<Isometry, IsometryError> {
    Isometry::eichler(space, &basis[0], &basis[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::vec_add;

    #[test]
    fn complement_examples() {
        let id = Isometry::identity(Arc::new(fixtures::h4f2_space()));
        assert_eq!(complement_w(&id).unwrap(), id.space().whole());
        assert_eq!(complement_w(&fixtures::h4f2_tau()).unwrap().dim(), 0);
        let t6 = fixtures::h4f2_plus_plane_tau();
        let w = complement_w(&t6).unwrap();
        let s = t6.space();
        assert_eq!(w, Subspace::span(s.field(), 6, &[s.unit(4), s.unit(5)]));
        assert!(complement_laws(&t6).unwrap().all());
        assert_eq!(complement_w(&fixtures::gf7_eichler()), Err(DecomposeError::NotUnipotent2));
    }

    #[test]
    fn reflection_blocks() {
        let tau = fixtures::r2t_tau();
        let s = tau.space();
        let b = reflection_block(&tau, &s.unit(0)).unwrap();
        assert_eq!(b.summand(), &s.whole());
        let r4 = fixtures::r4t_tau();
        let s4 = r4.space();
        let b = reflection_block(&r4, &s4.unit(0)).unwrap();
        let other = Subspace::span(s4.field(), 4, &[s4.unit(2), s4.unit(3)]);
        assert_eq!(b.summand().dim(), 2);
        assert!(b.summand().contains(&s4.unit(0)));
        assert!(s4.gram_of_pair(b.summand(), &other).is_zero());
        let h = fixtures::h4f2_tau();
        assert_eq!(reflection_block(&h, &h.space().unit(0)), Err(DecomposeError::ZeroDiagonal));
        assert_eq!(reflection_block(&h, &h.space().unit(1)), Err(DecomposeError::NotInResidual));
    }

    #[test]
    fn interchange_blocks() {
        let tau = fixtures::h4f2_tau();
        let s = tau.space();
        let b = interchange_block(&tau, &s.unit(0), &s.unit(2)).unwrap();
        assert_eq!(b.vectors(), vec![s.unit(0), s.unit(1), s.unit(2), s.unit(3)]);
        let w2 = vec_add(&s.unit(0), &s.unit(2));
        let b2 = interchange_block(&tau, &s.unit(0), &w2).unwrap();
        assert_ne!(b2.vectors(), b.vectors());
        let d = Decomposition { tau: tau.clone(), w: s.zero_subspace(), blocks: vec![b2], s: 2, alternating: true };
        d.validate().unwrap();
        assert_eq!(interchange_block(&tau, &s.unit(0), &s.unit(0)), Err(DecomposeError::NotHyperbolicPair));
    }

    #[test]
    fn decompositions() {
        let id = Isometry::identity(Arc::new(fixtures::h4f2_space()));
        let d = decompose(&id).unwrap();
        assert_eq!((d.m(), d.w.dim()), (0, 4));
        d.validate().unwrap();

        let d = decompose(&fixtures::h4f2_tau()).unwrap();
        assert_eq!((d.m(), d.w.dim()), (1, 0));
        assert_eq!(d.blocks[0].kind(), "interchange");
        d.validate().unwrap();

        let tau = fixtures::r4t_tau();
        let d = decompose(&tau).unwrap();
        assert_eq!((d.m(), d.w.dim()), (2, 0));
        assert!(d.blocks.iter().all(|b| b.kind() == "reflection"));
        let s = tau.space();
        match (&d.blocks[0], &d.blocks[1]) {
            (Block::Reflection { u: a, .. }, Block::Reflection { u: b, .. }) => {
                assert_eq!((a, b), (&s.unit(0), &s.unit(2)));
            }
            _ => unreachable!(),
        }
        d.validate().unwrap();

        let d = decompose(&fixtures::h4f2_plus_plane_tau()).unwrap();
        assert_eq!((d.m(), d.w.dim()), (1, 2));
        d.validate().unwrap();

        let d = decompose(&fixtures::gf7_eichler_isotropic()).unwrap();
        assert_eq!(d.m(), 1);
        d.validate().unwrap();
    }

    #[test]
    fn interchanging_kind() {
        assert!(is_interchanging_kind(&fixtures::h4f2_tau()).unwrap());
        assert!(!is_interchanging_kind(&fixtures::r2t_tau()).unwrap());
        let id = Isometry::identity(Arc::new(fixtures::h4f2_space()));
        assert!(is_interchanging_kind(&id).unwrap());
    }

    #[test]
    fn normal_basis_round_trip() {
        let tau = fixtures::h4f2_tau();
        let s = tau.space();
        let nb = interchange_normal_basis(&tau).unwrap();
        assert_eq!(nb, [s.unit(0), s.unit(1), s.unit(2), s.unit(3)]);
        assert_eq!(eichler_from_normal_basis(tau.space_arc().clone(), &nb).unwrap(), tau);
        assert_eq!(interchange_normal_basis(&fixtures::r2t_tau()), Err(DecomposeError::NotInterchange));
    }

    #[test]
    fn normal_basis_of_conjugate() {
        let tau = fixtures::h4f2_tau();
        let s = tau.space_arc().clone();
        // g swaps the two hyperbolic planes
        let g_cols = vec![s.unit(2), s.unit(3), s.unit(0), s.unit(1)];
        let g = Isometry::new(s.clone(), Matrix::from_columns(s.field(), 4, &g_cols)).unwrap();
        let conj = g.compose(&tau).unwrap().compose(&g.inverse()).unwrap();
        let nb = interchange_normal_basis(&conj).unwrap();
        assert!(s.is_hyperbolic_quadruple(&nb));
        assert_eq!(eichler_from_normal_basis(s, &nb).unwrap(), conj);
    }
}
