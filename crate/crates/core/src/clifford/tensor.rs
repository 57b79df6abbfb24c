//! Goldman elements of interchange isometries and tensor decompositions of
//! `(C(q), J_τ)` along an orthogonal splitting of `V`.

use std::sync::Arc;

use crate::decompose::{decompose, interchange_normal_basis, Block};
use crate::isometry::Isometry;
use crate::linalg::{linear_combination, vec_add, Vector};
use crate::quadspace::BilinearForm;

use super::{natural_involution, AlgebraInvolution, CliffordAlgebra, CliffordElement, CliffordError};

#[derive(Clone, Debug)]
pub struct GoldmanElement {
    pub element: CliffordElement,
    pub inverse: CliffordElement,
    /// `g·v·g⁻¹ = τ(v)` on every basis vector of `V`.
    pub conjugation_ok: bool,
}

fn require_interchange(tau: &Isometry) -> Result<Arc<CliffordAlgebra>, CliffordError> {
    let algebra = CliffordAlgebra::of_space(tau.space())?;
    if !tau.is_interchange() {
        return Err(CliffordError::NotInterchange);
    }
    Ok(algebra)
}

fn finish(algebra: &Arc<CliffordAlgebra>, tau: &Isometry, g: CliffordElement) -> Result<GoldmanElement, CliffordError> {
    let inverse = algebra.inverse(&g).ok_or_else(|| CliffordError::TheoremViolated("goldman element is not a unit".into()))?;
    let space = tau.space();
    let conjugation_ok = (0..space.dim()).all(|i| {
        let e = space.unit(i);
        g.mul(&algebra.vector(&e)).mul(&inverse) == algebra.vector(&tau.apply(&e))
    });
    Ok(GoldmanElement { element: g, inverse, conjugation_ok })
}

/// `g = 1 + w·x` for the normal basis `(x, y, w, z)` of `τ`.
pub fn goldman_element(tau: &Isometry) -> Result<GoldmanElement, CliffordError> {
    let algebra = require_interchange(tau)?;
    let [x, _, w, _] = interchange_normal_basis(tau).map_err(|e| CliffordError::TheoremViolated(e.to_string()))?;
    let g = algebra.one().add(&algebra.vector(&w).mul(&algebra.vector(&x)));
    finish(&algebra, tau, g)
}

/// `g = 1 + (u₁ + τu₁)(v₁ + τv₁)` for a plane `V₁ = span(u₁, v₁)` with
/// `b(u₁, v₁) = 1`, `V₁ ⊥ τV₁` and `V₁ + τV₁ = V`. The plane is the first one
/// found among 0/1 combinations of the normal basis. Returns the element and `(u₁, v₁)`.
pub fn goldman_plane_element(tau: &Isometry) -> Result<(GoldmanElement, [Vector; 2]), CliffordError> {
    let algebra = require_interchange(tau)?;
    let normal = interchange_normal_basis(tau).map_err(|e| CliffordError::TheoremViolated(e.to_string()))?;
    let space = tau.space();
    let f = space.field();
    let combos: Vec<Vector> = (1..16u32)
        .map(|m| {
            let coeffs: Vec<_> = (0..4).map(|i| if m >> i & 1 == 1 { f.one() } else { f.zero() }).collect();
            linear_combination(f, 4, &coeffs, &normal)
        })
        .collect();
    for u in &combos {
        let tu = tau.apply(u);
        for v in &combos {
            if !space.b(u, v).is_one() {
                continue;
            }
            let tv = tau.apply(v);
            let perp = [&tu, &tv].iter().all(|t| space.b(u, t).is_zero() && space.b(v, t).is_zero());
            let spans = crate::quadspace::Subspace::span(f, 4, &[u.clone(), v.clone(), tu.clone(), tv.clone()]).dim() == 4;
            if perp && spans {
                let a = algebra.vector(&vec_add(u, &tu));
                let b = algebra.vector(&vec_add(v, &tv));
                let g = algebra.one().add(&a.mul(&b));
                return Ok((finish(&algebra, tau, g)?, [u.clone(), v.clone()]));
            }
        }
    }
    Err(CliffordError::TheoremViolated("no plane V₁ with V = V₁ ⊥ τV₁".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Interchange,
    Reflection,
    Fixed,
}

impl FactorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FactorKind::Interchange => "interchange",
            FactorKind::Reflection => "reflection",
            FactorKind::Fixed => "fixed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TensorFactor {
    pub kind: FactorKind,
    pub basis: Vec<Vector>,
}

#[derive(Clone, Debug)]
pub struct TensorWitness {
    pub factors: Vec<TensorFactor>,
    pub factor_maps_multiplicative: bool,
    pub factors_commute: bool,
    pub bijective: bool,
    pub involution_compatible: bool,
}

impl TensorWitness {
    pub fn verified(&self) -> bool {
        self.factor_maps_multiplicative && self.factors_commute && self.bijective && self.involution_compatible
    }
}

fn factor_image(algebra: &Arc<CliffordAlgebra>, basis: &[Vector], mask: u32) -> CliffordElement {
    let vs: Vec<Vector> = (0..basis.len()).filter(|i| mask >> i & 1 == 1).map(|i| basis[i].clone()).collect();
    algebra.vector_product(&vs)
}

fn push_image(acc: &CliffordElement, algebra: &Arc<CliffordAlgebra>, basis: &[Vector], a: &CliffordElement) -> CliffordElement {
    a.coeffs().iter().fold(acc.clone(), |acc, (&m, &c)| acc.add(&factor_image(algebra, basis, m).scale(c)))
}

/// Splits `V` as `W₁ ⊥ ⋯ ⊥ W_k ⊥ V₁ ⊥ ⋯ ⊥ V_m` (planes of the fixed part, then the
/// blocks of the decomposition) and checks that the induced map from the tensor
/// product of the factor algebras to `C(q)` is an isomorphism of algebras with involution.
pub fn tensor_decomposition_witness(tau: &Isometry) -> Result<TensorWitness, CliffordError> {
    let j = natural_involution(tau)?;
    let algebra = j.algebra().clone();
    let space = tau.space();
    let f = space.field();
    let d = decompose(tau).map_err(|e| CliffordError::TheoremViolated(e.to_string()))?;

    let mut factors = Vec::new();
    let wb = d.w.basis_vectors();
    if !wb.is_empty() {
        let pairs = BilinearForm::new(space.gram_of(&wb))
            .hyperbolic_basis_alternating()
            .map_err(|e| CliffordError::TheoremViolated(e.to_string()))?;
        for (p, r) in pairs {
            let lift = |c: &Vector| linear_combination(f, space.dim(), c, &wb);
            factors.push(TensorFactor { kind: FactorKind::Fixed, basis: vec![lift(&p), lift(&r)] });
        }
    }
    for b in &d.blocks {
        let kind = match b {
            Block::Interchange { .. } => FactorKind::Interchange,
            Block::Reflection { .. } => FactorKind::Reflection,
        };
        factors.push(TensorFactor { kind, basis: b.vectors() });
    }

    let mut factor_maps_multiplicative = true;
    let mut involution_compatible = true;
    for fac in &factors {
        let sub = CliffordAlgebra::new(&space.restrict_form(&fac.basis))?;
        let local = tau.restrict_to_basis(&fac.basis).map_err(|e| CliffordError::TheoremViolated(e.to_string()))?;
        let jl = AlgebraInvolution::natural(&sub, &local)?;
        for a in 0..sub.dim() as u32 {
            let ia = factor_image(&algebra, &fac.basis, a);
            let jla = jl.apply(&sub.basis_element(a));
            if j.apply(&ia) != push_image(&algebra.zero(), &algebra, &fac.basis, &jla) {
                involution_compatible = false;
            }
            for b in 0..sub.dim() as u32 {
                let ab = sub.basis_element(a).mul(&sub.basis_element(b));
                let lhs = push_image(&algebra.zero(), &algebra, &fac.basis, &ab);
                if lhs != ia.mul(&factor_image(&algebra, &fac.basis, b)) {
                    factor_maps_multiplicative = false;
                }
            }
        }
    }
    let mut factors_commute = true;
    for (i, a) in factors.iter().enumerate() {
        for b in &factors[i + 1..] {
            for x in &a.basis {
                for y in &b.basis {
                    if !algebra.vector(x).commutes_with(&algebra.vector(y)) {
                        factors_commute = false;
                    }
                }
            }
        }
    }
    let all: Vec<Vector> = factors.iter().flat_map(|fac| fac.basis.clone()).collect();
    let products: Vec<CliffordElement> = (0..algebra.dim() as u32).map(|m| factor_image(&algebra, &all, m)).collect();
    let bijective = all.len() == space.dim() && algebra.span_dim(&products) == algebra.dim();
    Ok(TensorWitness { factors, factor_maps_multiplicative, factors_commute, bijective, involution_compatible })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn goldman_wx() {
        let tau = fixtures::h4f2_tau();
        let g = goldman_element(&tau).unwrap();
        let c = g.element.algebra().clone();
        // 1 + e3·e1 = 1 + e1e3
        assert_eq!(g.element, c.one().add(&c.basis_element(0b101)));
        assert!(g.conjugation_ok);
        let id = Isometry::identity(tau.space_arc().clone());
        assert_eq!(goldman_element(&id).unwrap_err(), CliffordError::NotInterchange);
    }

    #[test]
    fn goldman_from_plane() {
        let tau = fixtures::h4f2_tau();
        let (g, [u, v]) = goldman_plane_element(&tau).unwrap();
        assert!(tau.space().b(&u, &v).is_one());
        assert!(g.conjugation_ok);
    }

    #[test]
    fn tensor_witnesses() {
        let w = tensor_decomposition_witness(&fixtures::h4f2_plus_plane_tau()).unwrap();
        assert!(w.verified(), "{w:?}");
        let kinds: Vec<_> = w.factors.iter().map(|f| f.kind).collect();
        assert_eq!(kinds, [FactorKind::Fixed, FactorKind::Interchange]);

        let w = tensor_decomposition_witness(&fixtures::r4t_tau()).unwrap();
        assert!(w.verified());
        assert_eq!(w.factors.len(), 2);
        assert!(w.factors.iter().all(|f| f.kind == FactorKind::Reflection));

        let plane = std::sync::Arc::new(fixtures::hyperbolic_space(crate::field::Field::gf2(), 1));
        let w = tensor_decomposition_witness(&Isometry::identity(plane)).unwrap();
        assert!(w.verified());
        assert_eq!(w.factors.len(), 1);
        assert_eq!(w.factors[0].kind, FactorKind::Fixed);
    }
}
