//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL line
//! for each and exits nonzero if any fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use wallform::clifford::{alternating_generators_check, explicit_matrix_iso, pfister_invariant, CliffordError};
use wallform::field::{Field, FieldElement};
use wallform::fixtures;
use wallform::linalg::{vec_sub, Matrix, Vector};
use wallform::oracle::{
    closure, enumerate_orthogonal_group, symmetric_square_scan, verify_elements, GroupEnumeration, Method, Packed,
    Theorem,
};
use wallform::quadspace::QuadraticSpace;
use wallform::{Isometry, WallForm};

type Outcome = Result<String, String>;
/// Name, time limit in seconds, body.
type Criterion = (&'static str, u64, fn() -> Outcome);

/// `x₁x₂ + x₃² + x₃x₄ + a·x₄²` with `X² + X + a` irreducible.
fn elliptic4(field: Field, a: FieldElement) -> QuadraticSpace {
    let mut q = Matrix::zeros(field, 4, 4);
    q[(0, 1)] = field.one();
    q[(2, 2)] = field.one();
    q[(2, 3)] = field.one();
    q[(3, 3)] = a;
    QuadraticSpace::new(&q).unwrap()
}

fn gf4_omega() -> FieldElement {
    Field::gf4().generator().unwrap()
}

fn group(space: &QuadraticSpace) -> Result<GroupEnumeration, String> {
    enumerate_orthogonal_group(space).map_err(|e| e.to_string())
}

fn elements(space: &QuadraticSpace) -> Result<Vec<Isometry>, String> {
    Ok(group(space)?.isometries())
}

fn unipotent2(space: &QuadraticSpace) -> Result<Vec<Isometry>, String> {
    Ok(elements(space)?.into_iter().filter(|t| t.is_unipotent2()).collect())
}

/// Runs a theorem over a set of elements; returns the number of applicable elements.
fn verify(theorem: Theorem, label: &str, elems: &[Isometry]) -> Result<usize, String> {
    let (checked, failed, examples) = verify_elements(theorem, elems);
    if failed > 0 {
        return Err(format!("{theorem} on {label}: {failed} failures, e.g. {}", examples.join("; ")));
    }
    Ok(checked)
}

fn random_vector(rng: &mut StdRng, elems: &[FieldElement], n: usize) -> Vector {
    (0..n).map(|_| elems[rng.gen_range(0..elems.len())]).collect()
}

/// Small polynomials in `t` over GF(2), degree at most 2.
fn random_poly(rng: &mut StdRng) -> FieldElement {
    let f = Field::rational_function();
    let t = f.generator().unwrap();
    (0..3).filter(|_| rng.gen_bool(0.5)).fold(f.zero(), |acc, i| acc + t.pow(i))
}

/// Products of one to four reflections along random anisotropic vectors.
fn random_function_field_isometries(rng: &mut StdRng, space: &Arc<QuadraticSpace>, count: usize) -> Vec<Isometry> {
    let n = space.dim();
    let mut out = Vec::new();
    while out.len() < count {
        let mut tau = Isometry::identity(space.clone());
        for _ in 0..rng.gen_range(1..=4) {
            let u: Vector = (0..n).map(|_| random_poly(rng)).collect();
            if let Ok(r) = Isometry::reflection(space.clone(), &u) {
                tau = tau.compose(&r).unwrap();
            }
        }
        out.push(tau);
    }
    out
}

fn criterion_1() -> Outcome {
    let gf7 = Field::prime(7).unwrap();
    let mut pools: Vec<(&str, Vec<Isometry>)> = vec![
        ("O(H4F2)", elements(&fixtures::h4f2_space())?),
        ("O(H4F4)", elements(&fixtures::hyperbolic_space(Field::gf4(), 2))?),
        ("O(GF(7)<1,1>)", elements(&fixtures::diagonal_space(gf7, &[1, 1]))?),
        ("O(GF(7)<1,-1>)", elements(&fixtures::diagonal_space(gf7, &[1, -1]))?),
        ("O(GF(7)<1,1,1>)", elements(&fixtures::diagonal_space(gf7, &[1, 1, 1]))?),
    ];
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut ff = vec![fixtures::r2t_tau(), fixtures::r2t_unit_tau(), fixtures::r4t_tau()];
    ff.extend(random_function_field_isometries(&mut rng, &Arc::new(fixtures::r4t_space()), 40));
    pools.push(("GF(2)(t) fixtures", ff));

    let mut total = 0;
    for (label, elems) in &pools {
        total += verify(Theorem::Wall, label, elems)?;
    }

    // Random probes: ω(τu − u, τv − v) = b(τu − u, v) for arbitrary preimage v,
    // and ω(x, x) = −q(x).
    let mut probes = 0;
    for (label, elems) in &pools {
        let field = elems[0].space().field();
        let per_pool = if field.is_finite() { 2500 } else { 500 };
        let fe = field.elements();
        for _ in 0..per_pool {
            let tau = &elems[rng.gen_range(0..elems.len())];
            let space = tau.space();
            let n = tau.dim();
            let draw = |rng: &mut StdRng| match &fe {
                Some(e) => random_vector(rng, e, n),
                None => (0..n).map(|_| random_poly(rng)).collect(),
            };
            let (u, v) = (draw(&mut rng), draw(&mut rng));
            let x = vec_sub(&tau.apply(&u), &u);
            let y = vec_sub(&tau.apply(&v), &v);
            let wf = WallForm::new(tau);
            let lhs = wf.eval(&x, &y).map_err(|e| format!("{label}: {e}"))?;
            if lhs != space.b(&x, &v) {
                return Err(format!("{label}: preimage dependence at τ = {:?}", tau.matrix()));
            }
            if wf.eval(&x, &x).unwrap() != -space.q(&x) {
                return Err(format!("{label}: ω(x,x) ≠ −q(x) at τ = {:?}", tau.matrix()));
            }
            probes += 1;
        }
    }
    Ok(format!("{total} isometries, {probes} random probes"))
}

fn criterion_2() -> Outcome {
    let gf7 = Field::prime(7).unwrap();
    let spaces = [
        ("O(H4F2)", fixtures::h4f2_space()),
        ("O(GF(7)<1,1>)", fixtures::diagonal_space(gf7, &[1, 1])),
        ("O(GF(7)<1,-1>)", fixtures::diagonal_space(gf7, &[1, -1])),
        ("O(GF(7)<1,3>)", fixtures::diagonal_space(gf7, &[1, 3])),
    ];
    let mut total = 0;
    for (label, s) in &spaces {
        let g = group(s)?;
        if *label == "O(H4F2)" && g.order() != 72 {
            return Err(format!("|O(H4F2)| = {}", g.order()));
        }
        total += verify(Theorem::Classify, label, &g.isometries())?;
    }
    Ok(format!("{total} isometries"))
}

fn criterion_3() -> Outcome {
    let gf4 = Field::gf4();
    let spaces = [
        ("O(H4F2)", fixtures::h4f2_space()),
        ("O−(4,2)", elliptic4(Field::gf2(), Field::gf2().one())),
        ("O(H4F4)", fixtures::hyperbolic_space(gf4, 2)),
        ("O−(4,4)", elliptic4(gf4, gf4_omega())),
    ];
    let mut total = 0;
    let mut interchange = 0;
    for (label, s) in &spaces {
        let g = group(s)?;
        let elems = g.isometries();
        interchange += elems.iter().filter(|t| t.is_interchange()).count();
        total += verify(Theorem::Defint, label, &elems)?;
    }
    if interchange == 0 {
        return Err("no interchange isometries found".into());
    }
    Ok(format!("{total} isometries, {interchange} interchange"))
}

fn char_sets() -> Result<Vec<(&'static str, Vec<Isometry>)>, String> {
    let gf2 = Field::gf2();
    let h4 = fixtures::h4f2_space();
    let by_closure = closure(&h4, Packed::new(gf2).unwrap()).map_err(|e| e.to_string())?;
    let scanned = group(&h4)?;
    if by_closure.order() != scanned.order() {
        return Err(format!("closure {} ≠ scan {}", by_closure.order(), scanned.order()));
    }
    let h6 = fixtures::hyperbolic_space(gf2, 3);
    let g6 = group(&h6)?;
    if g6.method() != Method::GeneratorClosure {
        return Err("dimension 6 should use closure".into());
    }
    let gf7 = Field::prime(7).unwrap();
    Ok(vec![
        ("O(H4F2)", by_closure.isometries().into_iter().filter(|t| t.is_unipotent2()).collect()),
        ("O(H6F2)", g6.isometries().into_iter().filter(|t| t.is_unipotent2()).collect()),
        ("O(H4F7)", unipotent2(&fixtures::hyperbolic_space(gf7, 2))?),
    ])
}

fn criterion_4() -> Outcome {
    let mut parts = Vec::new();
    for (label, elems) in char_sets()? {
        let n = verify(Theorem::Char, label, &elems)?;
        parts.push(format!("{label}: {n}"));
    }
    Ok(format!("unipotent index ≤ 2 elements {}", parts.join(", ")))
}

fn criterion_5() -> Outcome {
    let mut total = 0;
    for (label, elems) in char_sets()? {
        total += verify(Theorem::Vprime, label, &elems)?;
    }
    Ok(format!("{total} elements"))
}

fn dim4_char2_groups() -> Result<Vec<(&'static str, Vec<Isometry>)>, String> {
    let gf4 = Field::gf4();
    Ok(vec![
        ("O(H4F2)", elements(&fixtures::h4f2_space())?),
        ("O−(4,2)", elements(&elliptic4(Field::gf2(), Field::gf2().one()))?),
        ("O(H4F4)", elements(&fixtures::hyperbolic_space(gf4, 2))?),
        ("O−(4,4)", elements(&elliptic4(gf4, gf4_omega()))?),
    ])
}

fn criterion_6() -> Outcome {
    let mut counts = [0usize; 3];
    for (label, elems) in dim4_char2_groups()? {
        let involutions: Vec<Isometry> = elems.into_iter().filter(|t| t.is_involution()).collect();
        counts[0] += verify(Theorem::Res, label, &involutions)?;
        counts[1] += verify(Theorem::Cint, label, &involutions)?;
        counts[2] += verify(Theorem::G, label, &involutions)?;
    }
    if counts[1] == 0 {
        return Err("no interchange isometries reached".into());
    }
    Ok(format!("res {} involutions, cint {} and g {} interchange isometries", counts[0], counts[1], counts[2]))
}

fn criterion_7() -> Outcome {
    let t = Field::rational_function().generator().unwrap();
    let r2 = pfister_invariant(&fixtures::r2t_tau()).map_err(|e| e.to_string())?;
    if r2.generator_strings() != ["t"] || t.is_square() || r2.is_trivial() {
        return Err(format!("R2T Pfister generators {:?}", r2.generator_strings()));
    }
    let r4 = pfister_invariant(&fixtures::r4t_tau()).map_err(|e| e.to_string())?;
    if r4.generator_strings() != ["t", "t"] {
        return Err(format!("R4T Pfister generators {:?}", r4.generator_strings()));
    }
    let mut witnesses = 0;
    for tau in [fixtures::r2t_tau(), fixtures::r4t_tau()] {
        let wf = WallForm::new(&tau);
        let coords = wf.bilinear().orthogonal_basis().map_err(|e| e.to_string())?;
        let basis: Vec<Vector> = coords
            .iter()
            .map(|c| wallform::linalg::linear_combination(wf.tau().space().field(), tau.dim(), c, wf.residual_basis()))
            .collect();
        let check = alternating_generators_check(&tau, &basis).map_err(|e| e.to_string())?;
        if !check.passed() {
            return Err(format!("alternating generators fail: {check:?}"));
        }
        for (mask, w) in &check.witnesses {
            let w = w.as_ref().unwrap();
            let product = basis
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(w.algebra().one(), |acc, (_, u)| acc.mul(&w.algebra().vector(u)));
            if w.add(&check.involution.apply(w)) != product {
                return Err(format!("witness for product {mask:b} is wrong"));
            }
            witnesses += 1;
        }
        verify(Theorem::Clif, "GF(2)(t)", std::slice::from_ref(&tau))?;
    }
    Ok(format!("R2T [t], R4T [t, t], {witnesses} Alt witnesses"))
}

fn criterion_8() -> Outcome {
    let mut total = 0;
    for (label, elems) in dim4_char2_groups()? {
        total += verify(Theorem::Final, label, &elems)?;
    }
    let planes: Vec<(&str, Vec<Isometry>)> = vec![
        ("GF(2) reflection plane", elements(&fixtures::reflection_plane(Field::gf2().one()))?),
        ("GF(4) reflection plane", elements(&fixtures::reflection_plane(gf4_omega()))?),
    ];
    for (label, elems) in &planes {
        total += verify(Theorem::Final, label, elems)?;
    }
    let ff = [fixtures::r2t_tau(), fixtures::r2t_unit_tau(), fixtures::r4t_tau()];
    total += verify(Theorem::Final, "GF(2)(t)", &ff)?;
    if explicit_matrix_iso(&fixtures::r2t_tau()).err() != Some(CliffordError::CriterionFails) {
        return Err("R2T should fail the criterion".into());
    }
    Ok(format!("{total} involutions with r = k; R2T fails the criterion"))
}

fn criterion_9() -> Outcome {
    let mut total = 0;
    for (field, k) in [(Field::gf2(), 2), (Field::gf2(), 3), (Field::gf4(), 2)] {
        let (checked, bad) = symmetric_square_scan(field, k).ok_or("scan refused")?;
        if !bad.is_empty() {
            return Err(format!("{} counterexamples over {field}", bad.len()));
        }
        total += checked;
    }
    let mut images = 0;
    for (label, elems) in dim4_char2_groups()? {
        images += verify(Theorem::Totimes, label, &elems)?;
    }
    Ok(format!("{total} symmetric matrices with scalar square, f(x) images from {images} involutions"))
}

fn criterion_10() -> Outcome {
    let a = group(&fixtures::h4f2_space())?;
    let b = group(&fixtures::h4f2_space())?;
    if a.method() != Method::ExhaustiveMatrixScan {
        return Err("expected exhaustive scan".into());
    }
    if a.order() != 72 || b.order() != 72 {
        return Err(format!("orders {} and {}", a.order(), b.order()));
    }
    if (0..72).any(|i| a.matrix(i) != b.matrix(i)) || !a.is_group() {
        return Err("enumeration not stable".into());
    }
    Ok("|O(H4F2)| = 72 on two runs".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("wall-form axioms", 10, criterion_1),
        ("classification biconditionals", 5, criterion_2),
        ("interchange three-way equivalence", 60, criterion_3),
        ("decomposition into blocks", 60, criterion_4),
        ("complement laws", 60, criterion_5),
        ("orthogonality, matrix iso, Goldman elements", 60, criterion_6),
        ("Pfister invariant over GF(2)(t)", 5, criterion_7),
        ("transpose criterion", 10, criterion_8),
        ("symmetric matrices with scalar square", 10, criterion_9),
        ("group order regression", 5, criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(*limit);
        let detail = match (&result, in_time) {
            (Ok(msg), true) => msg.clone(),
            (Ok(msg), false) => format!("{msg}; over the {limit} s limit"),
            (Err(e), _) => e.clone(),
        };
        let ok = result.is_ok() && in_time;
        if !ok {
            failures += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {detail} [{:.2} s / {limit} s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
