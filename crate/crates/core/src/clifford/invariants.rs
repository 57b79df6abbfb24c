//! Involution type, the Φ-subalgebra, alternating generators, the Pfister
//! invariant and the transpose criterion for `(C(q), J_τ)`.

use std::sync::Arc;

use crate::decompose::{decompose, Block};
use crate::field::{FieldElement, SquareClass};
use crate::isometry::Isometry;
use crate::linalg::{Matrix, Vector};

use super::{natural_involution, AlgebraInvolution, CliffordAlgebra, CliffordElement, CliffordError};
use crate::wallform::WallForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvolutionType {
    Orthogonal,
    Symplectic,
}

impl InvolutionType {
    pub fn as_str(self) -> &'static str {
        match self {
            InvolutionType::Orthogonal => "orthogonal",
            InvolutionType::Symplectic => "symplectic",
        }
    }
}

/// Symplectic iff `1 ∈ Alt = im(id + J)`.
pub fn involution_type(j: &AlgebraInvolution) -> InvolutionType {
    if j.is_alt(&j.algebra().one()) {
        InvolutionType::Symplectic
    } else {
        InvolutionType::Orthogonal
    }
}

/// Characteristic 2, `τ² = id` and `r(τ) = k(τ)`.
pub(crate) fn require_residual_fixed(tau: &Isometry) -> Result<(), CliffordError> {
    if tau.space().field().characteristic() != 2 {
        return Err(CliffordError::CharacteristicNot2);
    }
    if !tau.is_involution() {
        return Err(CliffordError::NotInvolution);
    }
    if tau.residual_space() != tau.fixed_space() {
        return Err(CliffordError::ResidualNotFixed);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhiChecks {
    pub dimension: bool,
    pub commutative: bool,
    pub symmetric: bool,
    pub square_central: bool,
    pub self_centralizing: bool,
    pub isomorphic_to_residual_clifford: bool,
}

impl PhiChecks {
    pub fn all(&self) -> bool {
        self.dimension
            && self.commutative
            && self.symmetric
            && self.square_central
            && self.self_centralizing
            && self.isomorphic_to_residual_clifford
    }
}

/// The subalgebra of `C(q)` generated by `r(τ)`.
#[derive(Clone, Debug)]
pub struct PhiAlgebra {
    pub algebra: Arc<CliffordAlgebra>,
    pub generators: Vec<Vector>,
    /// Monomials in the generators, indexed by bitmask.
    pub basis: Vec<CliffordElement>,
    pub generator_squares: Vec<FieldElement>,
    pub checks: PhiChecks,
}

impl PhiAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn monomials(algebra: &Arc<CliffordAlgebra>, gens: &[CliffordElement]) -> Vec<CliffordElement> {
    (0..1u32 << gens.len())
        .map(|m| {
            (0..gens.len()).filter(|i| m >> i & 1 == 1).fold(algebra.one(), |acc, i| acc.mul(&gens[i]))
        })
        .collect()
}

pub fn phi_subalgebra(tau: &Isometry) -> Result<PhiAlgebra, CliffordError> {
    require_residual_fixed(tau)?;
    let j = natural_involution(tau)?;
    let algebra = j.algebra().clone();
    let space = tau.space();
    let generators = tau.residual_space().basis_vectors();
    let s = generators.len();
    let gens: Vec<CliffordElement> = generators.iter().map(|u| algebra.vector(u)).collect();
    let basis = monomials(&algebra, &gens);
    let size = 1usize << s;

    let dimension = 2 * s == space.dim() && algebra.span_dim(&basis) == size;
    let commutative = gens.iter().all(|a| gens.iter().all(|b| a.commutes_with(b)));
    let symmetric = basis.iter().all(|m| j.is_sym(m));
    // Φ is commutative of characteristic 2, so (Σ aₘ m)² = Σ aₘ² m² and monomials suffice.
    let square_central = basis.iter().all(|m| m.mul(m).is_scalar());
    let self_centralizing = algebra.centralizer(&gens).len() == size;

    let sub = CliffordAlgebra::new(&space.restrict_form(&generators))?;
    let image = |m: u32| basis[m as usize].clone();
    let mut multiplicative = true;
    'outer: for a in 0..size as u32 {
        for b in 0..size as u32 {
            let prod = sub.monomial_product(a, b);
            let lhs = prod.iter().fold(algebra.zero(), |acc, &(m, c)| acc.add(&image(m).scale(c)));
            if lhs != image(a).mul(&image(b)) {
                multiplicative = false;
                break 'outer;
            }
        }
    }
    let checks = PhiChecks {
        dimension,
        commutative,
        symmetric,
        square_central,
        self_centralizing,
        isomorphic_to_residual_clifford: multiplicative && algebra.span_dim(&basis) == size,
    };
    let generator_squares = generators.iter().map(|u| space.q(u)).collect();
    Ok(PhiAlgebra { algebra, generators, basis, generator_squares, checks })
}

#[derive(Clone, Debug)]
pub struct AlternatingGenerators {
    pub involution: AlgebraInvolution,
    pub commute: bool,
    pub squares_central_units: bool,
    /// For every nonempty product (by bitmask) some `v` with `v + J(v)` equal to it.
    pub witnesses: Vec<(u32, Option<CliffordElement>)>,
}

impl AlternatingGenerators {
    pub fn passed(&self) -> bool {
        self.commute && self.squares_central_units && self.witnesses.iter().all(|(_, w)| w.is_some())
    }
}

pub fn alternating_generators_check(tau: &Isometry, basis: &[Vector]) -> Result<AlternatingGenerators, CliffordError> {
    require_residual_fixed(tau)?;
    let wf = WallForm::new(tau);
    let space = tau.space();
    if basis.len() != wf.dim() || basis.iter().any(|u| u.len() != space.dim()) {
        return Err(CliffordError::NotOrthogonalBasis);
    }
    let mut gram = Matrix::zeros(space.field(), basis.len(), basis.len());
    for (i, u) in basis.iter().enumerate() {
        for (k, v) in basis.iter().enumerate() {
            gram[(i, k)] = wf.eval(u, v).map_err(|_| CliffordError::NotOrthogonalBasis)?;
        }
    }
    if (0..basis.len()).any(|i| gram[(i, i)].is_zero()) {
        return Err(CliffordError::ZeroSquare);
    }
    let off_diagonal_zero = (0..basis.len()).all(|i| (0..basis.len()).all(|k| i == k || gram[(i, k)].is_zero()));
    if !off_diagonal_zero || !gram.is_invertible() {
        return Err(CliffordError::NotOrthogonalBasis);
    }
    let j = natural_involution(tau)?;
    let algebra = j.algebra().clone();
    let gens: Vec<CliffordElement> = basis.iter().map(|u| algebra.vector(u)).collect();
    let commute = gens.iter().all(|a| gens.iter().all(|b| a.commutes_with(b)));
    let squares_central_units = gens.iter().zip(basis).all(|(g, u)| {
        let sq = g.mul(g);
        sq.is_scalar() && !sq.is_zero() && sq.coeff(0) == space.q(u)
    });
    let mons = monomials(&algebra, &gens);
    let witnesses = (1..mons.len() as u32).map(|m| (m, j.alt_witness(&mons[m as usize]))).collect();
    Ok(AlternatingGenerators { involution: j, commute, squares_central_units, witnesses })
}

/// `⟨⟨α₁, …, α_s⟩⟩`, stored as its generator list.
#[derive(Clone, Debug)]
pub struct PfisterDescriptor {
    pub generators: Vec<FieldElement>,
    pub alternating: bool,
    /// Norms of the 2-dimensional factors read off the decomposition of `τ`:
    /// `q(u)` for a reflection block and `1, 1` for an interchange block.
    pub block_norms: Vec<FieldElement>,
}

impl PfisterDescriptor {
    pub fn generator_strings(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.to_string()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|g| g.is_square())
    }

    /// Multiset equality of generator square classes. Sufficient, not
    /// necessary, for isometry of the Pfister forms.
    pub fn structurally_equal(&self, other: &[FieldElement]) -> bool {
        square_class_multiset_eq(&self.generators, other)
    }

    /// The wall-form generators agree with the block norms.
    pub fn cross_check(&self) -> bool {
        self.structurally_equal(&self.block_norms)
    }
}

pub(crate) fn square_class_multiset_eq(a: &[FieldElement], b: &[FieldElement]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        let cx = SquareClass::of(*x);
        match (0..b.len()).find(|&k| !used[k] && SquareClass::of(b[k]) == cx) {
            Some(k) => {
                used[k] = true;
                true
            }
            None => false,
        }
    })
}

pub fn pfister_invariant(tau: &Isometry) -> Result<PfisterDescriptor, CliffordError> {
    require_residual_fixed(tau)?;
    let wf = WallForm::new(tau);
    let f = tau.space().field();
    let alternating = wf.classify().alternating;
    let generators = if alternating {
        vec![f.one(); wf.dim()]
    } else {
        let basis = wf.bilinear().orthogonal_basis().map_err(|e| CliffordError::TheoremViolated(e.to_string()))?;
        basis.iter().map(|c| wf.bilinear().eval(c, c)).collect()
    };
    let d = decompose(tau).map_err(|e| CliffordError::TheoremViolated(e.to_string()))?;
    let mut block_norms = Vec::new();
    for b in &d.blocks {
        match b {
            Block::Reflection { u, .. } => block_norms.push(tau.space().q(u)),
            Block::Interchange { .. } => block_norms.extend([f.one(), f.one()]),
        }
    }
    Ok(PfisterDescriptor { generators, alternating, block_norms })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    /// `q(x)` is a square for every `x ∈ r(τ)`.
    pub q_values_square: bool,
    /// `ω(x, x)` is a square for every `x ∈ r(τ)`.
    pub wall_diagonal_square: bool,
    /// `ω` is alternating or diagonalizes with square entries.
    pub wall_form_shape: bool,
}

impl CriterionReport {
    pub fn holds(&self) -> bool {
        self.q_values_square
    }
}

/// On the totally singular `r(τ)` both `q` and `x ↦ ω(x,x)` are additive and
/// scale by squares, so checking a basis suffices.
pub fn transpose_iso_criterion(tau: &Isometry) -> Result<CriterionReport, CliffordError> {
    require_residual_fixed(tau)?;
    let space = tau.space();
    let wf = WallForm::new(tau);
    let q_values_square = wf.residual_basis().iter().all(|u| space.q(u).is_square());
    let wall_diagonal_square = (0..wf.dim()).all(|i| wf.gram()[(i, i)].is_square());
    let wall_form_shape = wf.classify().alternating || {
        let form = wf.bilinear();
        let basis = form.orthogonal_basis().map_err(|e| CliffordError::TheoremViolated(e.to_string()))?;
        basis.iter().all(|c| form.eval(c, c).is_square())
    };
    let report = CriterionReport { q_values_square, wall_diagonal_square, wall_form_shape };
    if q_values_square != wall_diagonal_square || q_values_square != wall_form_shape {
        return Err(CliffordError::TheoremViolated(format!("criterion conditions disagree: {report:?}")));
    }
    Ok(report)
}
