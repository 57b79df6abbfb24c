//! Per-element invariant suites, one per structural result.

use std::fmt;
use std::str::FromStr;

use crate::clifford::{
    alternating_generators_check, explicit_matrix_iso, goldman_element, goldman_plane_element, involution_type,
    natural_involution, pfister_invariant, phi_subalgebra, square_scalar_check, tensor_decomposition_witness,
    transpose_iso_criterion, CliffordError, InvolutionType,
};
use crate::decompose::{complement_laws, decompose, eichler_from_normal_basis, interchange_normal_basis};
use crate::field::{Field, FieldElement};
use crate::isometry::Isometry;
use crate::linalg::{linear_combination, vec_add, Matrix, Vector};
use crate::quadspace::Subspace;
use crate::wallform::WallForm;

use super::brute::{all_subspaces, all_vectors, has_normal_basis_brute, invariant_regular_proper_subspace};
use super::OracleError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// `(τ − id)² = 0` ⟺ `r ⊆ k` ⟺ the polar form vanishes on `r`, and `r = k^⊥`.
    Tauid,
    /// Wall form nondegenerate, `ω(u, u) = −q(u)`, independent of preimages.
    Wall,
    /// Symmetric ⟺ involution, antisymmetric ⟺ unipotent of index 2.
    Classify,
    /// Laws of the complement `W` of `r(τ)` in `k(τ)`.
    Vprime,
    /// Interchange ⟺ normal basis exists ⟺ unipotent index 2 and indecomposable (dimension 4).
    Defint,
    /// Decomposition into interchange or reflection blocks.
    Char,
    /// `J_τ` orthogonal ⟺ `r(τ) = k(τ)`.
    Res,
    /// `Φ(C(q), J_τ) ≅ C(q|_r)`.
    Cliff,
    /// Pfister invariant and alternating generators.
    Clif,
    /// `(C(q), J_τ) ≅ (M₄(F), t)` for interchange `τ`.
    Cint,
    /// Goldman elements conjugate `V` by `τ`.
    G,
    /// Tensor decomposition of `(C(q), J_τ)`.
    Tota,
    /// Transpose criterion and the explicit isomorphism.
    Final,
    /// Symmetric matrices with scalar square have square scalar.
    Totimes,
}

pub const ALL_THEOREMS: [Theorem; 14] = [
    Theorem::Tauid,
    Theorem::Wall,
    Theorem::Classify,
    Theorem::Vprime,
    Theorem::Defint,
    Theorem::Char,
    Theorem::Res,
    Theorem::Cliff,
    Theorem::Clif,
    Theorem::Cint,
    Theorem::G,
    Theorem::Tota,
    Theorem::Final,
    Theorem::Totimes,
];

impl Theorem {
    pub fn id(self) -> &'static str {
        match self {
            Theorem::Tauid => "tauid",
            Theorem::Wall => "wall",
            Theorem::Classify => "classify",
            Theorem::Vprime => "vprime",
            Theorem::Defint => "defint",
            Theorem::Char => "char",
            Theorem::Res => "res",
            Theorem::Cliff => "cliff",
            Theorem::Clif => "clif",
            Theorem::Cint => "cint",
            Theorem::G => "g",
            Theorem::Tota => "tota",
            Theorem::Final => "final",
            Theorem::Totimes => "totimes",
        }
    }
}

impl FromStr for Theorem {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Theorem, OracleError> {
        ALL_THEOREMS.iter().copied().find(|t| t.id() == s).ok_or_else(|| OracleError::UnknownTheorem(s.to_string()))
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    NotApplicable,
    Pass,
    Fail(String),
}

impl Outcome {
    fn from_checks(checks: &[(&str, bool)]) -> Outcome {
        let bad: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
        if bad.is_empty() {
            Outcome::Pass
        } else {
            Outcome::Fail(bad.join(", "))
        }
    }
}

/// Data shared by all elements of one run.
#[derive(Clone, Debug, Default)]
pub struct Context {
    regular_subspaces: Vec<Subspace>,
    vectors: Vec<Vector>,
}

impl Context {
    pub fn for_elements(theorem: Theorem, elements: &[Isometry]) -> Context {
        let Some(first) = elements.first() else {
            return Context::default();
        };
        let space = first.space();
        let field = space.field();
        if theorem != Theorem::Defint || space.dim() != 4 || !field.is_finite() {
            return Context::default();
        }
        let regular_subspaces = (1..4)
            .flat_map(|k| all_subspaces(field, 4, k))
            .filter(|s| space.is_regular(s))
            .collect();
        Context { regular_subspaces, vectors: all_vectors(field, 4) }
    }
}

fn is_char2_involution(tau: &Isometry) -> bool {
    tau.space().field().characteristic() == 2 && tau.is_involution()
}

fn residual_is_fixed(tau: &Isometry) -> bool {
    is_char2_involution(tau) && tau.residual_space() == tau.fixed_space()
}

fn fail<E: fmt::Display>(what: &str) -> impl Fn(E) -> Outcome + '_ {
    move |e| Outcome::Fail(format!("{what}: {e}"))
}

pub fn check_element(theorem: Theorem, tau: &Isometry, ctx: &Context) -> Outcome {
    let run = match theorem {
        Theorem::Tauid => check_tauid(tau),
        Theorem::Wall => check_wall(tau),
        Theorem::Classify => check_classify(tau),
        Theorem::Vprime => check_vprime(tau),
        Theorem::Defint => check_defint(tau, ctx),
        Theorem::Char => check_char(tau),
        Theorem::Res => check_res(tau),
        Theorem::Cliff => check_cliff(tau),
        Theorem::Clif => check_clif(tau),
        Theorem::Cint => check_cint(tau),
        Theorem::G => check_g(tau),
        Theorem::Tota => check_tota(tau),
        Theorem::Final => check_final(tau),
        Theorem::Totimes => check_totimes(tau),
    };
    run.unwrap_or_else(|o| o)
}

type Check = Result<Outcome, Outcome>;

fn check_tauid(tau: &Isometry) -> Check {
    let space = tau.space();
    let r = tau.residual_space();
    let k = tau.fixed_space();
    let sq_zero = tau.minus_identity().pow(2).is_zero();
    let inside = k.contains_subspace(&r);
    let singular = space.is_totally_singular(&r);
    Ok(Outcome::from_checks(&[
        ("(τ−1)²=0 ⟺ r⊆k", sq_zero == inside),
        ("r⊆k ⟺ polar form vanishes on r", inside == singular),
        ("r = k^⊥", r == space.orthogonal_complement(&k)),
        ("k = r^⊥", k == space.orthogonal_complement(&r)),
    ]))
}

fn check_wall(tau: &Isometry) -> Check {
    let space = tau.space();
    let wf = WallForm::new(tau);
    let basis = wf.residual_basis();
    let mut probes: Vec<Vector> = basis.to_vec();
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            probes.push(vec_add(a, b));
        }
    }
    let mut diag_ok = true;
    for u in &probes {
        let w = wf.eval(u, u).map_err(fail("wall form"))?;
        diag_ok &= w == -space.q(u);
    }
    let fixed = tau.fixed_space().basis_vectors();
    let mut shift_ok = true;
    for kv in &fixed {
        let shifted: Vec<Vector> = wf.preimages().iter().map(|y| vec_add(y, kv)).collect();
        let other = WallForm::with_preimages(tau, shifted).map_err(fail("shifted preimages"))?;
        shift_ok &= other.gram() == wf.gram();
    }
    Ok(Outcome::from_checks(&[
        ("nondegenerate", wf.is_nondegenerate()),
        ("ω(u,u) = −q(u)", diag_ok),
        ("preimage independence", shift_ok),
    ]))
}

fn check_classify(tau: &Isometry) -> Check {
    let c = WallForm::new(tau).classify();
    Ok(Outcome::from_checks(&[
        ("symmetric ⟺ τ²=1", c.symmetric == tau.is_involution()),
        ("antisymmetric ⟺ (τ−1)²=0", c.antisymmetric == tau.is_unipotent2()),
    ]))
}

fn check_vprime(tau: &Isometry) -> Check {
    if !tau.is_unipotent2() {
        return Ok(Outcome::NotApplicable);
    }
    let laws = complement_laws(tau).map_err(fail("complement"))?;
    Ok(Outcome::from_checks(&[
        ("W regular", laws.w_regular),
        ("dim W^⊥ = 2 dim r", laws.perp_dim_is_twice_residual),
        ("k(τ') = r(τ')", laws.restricted_fixed_equals_residual),
    ]))
}

fn check_defint(tau: &Isometry, ctx: &Context) -> Check {
    if tau.dim() != 4 || ctx.vectors.is_empty() {
        return Ok(Outcome::NotApplicable);
    }
    let interchange = tau.is_interchange();
    let indecomposable_unipotent =
        tau.is_unipotent2() && invariant_regular_proper_subspace(tau, &ctx.regular_subspaces).is_none();
    let brute_basis = has_normal_basis_brute(tau, &ctx.vectors);
    let library_basis = interchange_normal_basis(tau)
        .ok()
        .filter(|b| tau.space().is_hyperbolic_quadruple(b))
        .and_then(|b| eichler_from_normal_basis(tau.space_arc().clone(), &b).ok())
        .is_some_and(|e| e.matrix() == tau.matrix());
    Ok(Outcome::from_checks(&[
        ("interchange ⟺ indecomposable unipotent", interchange == indecomposable_unipotent),
        ("interchange ⟺ normal basis (search)", interchange == brute_basis),
        ("interchange ⟺ normal basis (construction)", interchange == library_basis),
    ]))
}

fn check_char(tau: &Isometry) -> Check {
    if !tau.is_unipotent2() {
        return Ok(Outcome::NotApplicable);
    }
    let d = decompose(tau).map_err(fail("decompose"))?;
    let expected_m = if d.alternating { d.s / 2 } else { d.s };
    Ok(Outcome::from_checks(&[
        ("validates", d.validate().is_ok()),
        ("reassembles", d.reassemble() == *tau.matrix()),
        ("block count", d.m() == expected_m),
    ]))
}

fn check_res(tau: &Isometry) -> Check {
    if !is_char2_involution(tau) {
        return Ok(Outcome::NotApplicable);
    }
    let j = natural_involution(tau).map_err(fail("involution"))?;
    let orthogonal = involution_type(&j) == InvolutionType::Orthogonal;
    let r_eq_k = tau.residual_space() == tau.fixed_space();
    Ok(Outcome::from_checks(&[
        ("J is an involution", j.is_involutive() && j.is_anti_multiplicative()),
        ("orthogonal ⟺ r = k", orthogonal == r_eq_k),
    ]))
}

fn check_cliff(tau: &Isometry) -> Check {
    if !residual_is_fixed(tau) {
        return Ok(Outcome::NotApplicable);
    }
    let phi = phi_subalgebra(tau).map_err(fail("Φ"))?;
    let c = phi.checks;
    Ok(Outcome::from_checks(&[
        ("dimension", c.dimension),
        ("commutative", c.commutative),
        ("symmetric", c.symmetric),
        ("square-central", c.square_central),
        ("self-centralizing", c.self_centralizing),
        ("≅ C(q|r)", c.isomorphic_to_residual_clifford),
    ]))
}

/// An ω-orthogonal basis of `r(τ)`, as vectors of `V`.
fn wall_orthogonal_basis(wf: &WallForm) -> Result<Vec<Vector>, Outcome> {
    let coords = wf.bilinear().orthogonal_basis().map_err(fail("orthogonal basis"))?;
    let f = wf.tau().space().field();
    let n = wf.tau().dim();
    Ok(coords.iter().map(|c| linear_combination(f, n, c, wf.residual_basis())).collect())
}

fn check_clif(tau: &Isometry) -> Check {
    if !residual_is_fixed(tau) {
        return Ok(Outcome::NotApplicable);
    }
    let space = tau.space();
    let wf = WallForm::new(tau);
    let pf = pfister_invariant(tau).map_err(fail("pfister"))?;
    if pf.alternating {
        let iso_ok = if space.field().is_finite() {
            explicit_matrix_iso(tau).map_err(fail("matrix iso"))?.verified()
        } else {
            true
        };
        return Ok(Outcome::from_checks(&[
            ("Pfister trivial", pf.is_trivial()),
            ("cross-check", pf.cross_check()),
            ("split with transpose", iso_ok),
        ]));
    }
    let basis = wall_orthogonal_basis(&wf)?;
    let alt = alternating_generators_check(tau, &basis).map_err(fail("alternating generators"))?;
    let mut reversed = basis.clone();
    reversed.reverse();
    let alt_rev = alternating_generators_check(tau, &reversed).map_err(fail("alternating generators"))?;
    let qs: Vec<FieldElement> = basis.iter().map(|u| space.q(u)).collect();
    Ok(Outcome::from_checks(&[
        ("alternating generators", alt.passed()),
        ("permuted basis", alt_rev.passed()),
        ("Pfister generators", pf.structurally_equal(&qs)),
        ("cross-check", pf.cross_check()),
    ]))
}

fn check_cint(tau: &Isometry) -> Check {
    if !tau.is_interchange() || tau.space().field().characteristic() != 2 {
        return Ok(Outcome::NotApplicable);
    }
    let iso = explicit_matrix_iso(tau).map_err(fail("matrix iso"))?;
    Ok(Outcome::from_checks(&[
        ("degree 4", iso.degree == 4),
        ("multiplicative", iso.multiplicative),
        ("bijective", iso.bijective),
        ("J ↦ transpose", iso.transpose_compatible),
    ]))
}

fn check_g(tau: &Isometry) -> Check {
    if !tau.is_interchange() || tau.space().field().characteristic() != 2 {
        return Ok(Outcome::NotApplicable);
    }
    let g1 = goldman_element(tau).map_err(fail("1 + wx"))?;
    let (g2, _) = goldman_plane_element(tau).map_err(fail("plane element"))?;
    Ok(Outcome::from_checks(&[("1 + wx", g1.conjugation_ok), ("plane element", g2.conjugation_ok)]))
}

fn check_tota(tau: &Isometry) -> Check {
    if !is_char2_involution(tau) {
        return Ok(Outcome::NotApplicable);
    }
    let w = tensor_decomposition_witness(tau).map_err(fail("tensor witness"))?;
    Ok(Outcome::from_checks(&[
        ("factor maps multiplicative", w.factor_maps_multiplicative),
        ("factors commute", w.factors_commute),
        ("bijective", w.bijective),
        ("involution compatible", w.involution_compatible),
    ]))
}

/// `f(x)` for every `x` in a basis of `r(τ)` is symmetric with square scalar square.
fn residual_images_ok(tau: &Isometry) -> Result<bool, Outcome> {
    let iso = explicit_matrix_iso(tau).map_err(fail("matrix iso"))?;
    let j = natural_involution(tau).map_err(fail("involution"))?;
    let alg = j.algebra();
    for u in tau.residual_space().basis_vectors() {
        let fx = iso.apply(&alg.vector(&u));
        if !square_scalar_check(&fx).map_err(fail("f(x)"))? {
            return Ok(false);
        }
    }
    Ok(iso.verified())
}

fn check_final(tau: &Isometry) -> Check {
    if !residual_is_fixed(tau) {
        return Ok(Outcome::NotApplicable);
    }
    let report = transpose_iso_criterion(tau).map_err(fail("criterion"))?;
    if !tau.space().field().is_finite() {
        return Ok(Outcome::Pass);
    }
    if report.holds() {
        Ok(Outcome::from_checks(&[("explicit iso", residual_images_ok(tau)?)]))
    } else {
        let refused = explicit_matrix_iso(tau).err() == Some(CliffordError::CriterionFails);
        Ok(Outcome::from_checks(&[("iso refused when criterion fails", refused)]))
    }
}

fn check_totimes(tau: &Isometry) -> Check {
    if !residual_is_fixed(tau) || !tau.space().field().is_finite() {
        return Ok(Outcome::NotApplicable);
    }
    if !transpose_iso_criterion(tau).map_err(fail("criterion"))?.holds() {
        return Ok(Outcome::NotApplicable);
    }
    Ok(Outcome::from_checks(&[("f(x)² square scalar", residual_images_ok(tau)?)]))
}

/// Scans every symmetric `k×k` matrix over a finite field of characteristic 2.
/// Returns how many have a scalar square and those whose scalar is not a square.
pub fn symmetric_square_scan(field: Field, k: usize) -> Option<(usize, Vec<Matrix>)> {
    if field.characteristic() != 2 {
        return None;
    }
    let elems = field.elements()?;
    let slots: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let total = (elems.len() as u64).checked_pow(slots.len() as u32)?;
    if total > super::EXHAUSTIVE_LIMIT {
        return None;
    }
    let mut checked = 0;
    let mut bad = Vec::new();
    for mut code in 0..total {
        let mut x = Matrix::zeros(field, k, k);
        for &(i, j) in &slots {
            let e = elems[(code % elems.len() as u64) as usize];
            code /= elems.len() as u64;
            x[(i, j)] = e;
            x[(j, i)] = e;
        }
        match square_scalar_check(&x) {
            Ok(true) => checked += 1,
            Ok(false) => {
                checked += 1;
                bad.push(x);
            }
            Err(_) => {}
        }
    }
    Some((checked, bad))
}
