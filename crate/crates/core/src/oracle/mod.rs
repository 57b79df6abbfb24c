//! Brute-force enumeration of small orthogonal groups and exhaustive
//! verification of the structural results over every enumerated element.
//!
//! Matrices are packed as row-major byte strings of field-element indices so
//! that enumeration and closure can run on lookup tables.

mod brute;
mod checks;

pub use brute::{all_subspaces, all_vectors, has_normal_basis_brute, invariant_regular_proper_subspace};
pub use checks::{check_element, symmetric_square_scan, Outcome, Theorem, ALL_THEOREMS};

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::isometry::Isometry;
use crate::linalg::{Matrix, Vector};
use crate::quadspace::QuadraticSpace;

/// Exhaustive scans are used up to this many candidate matrices.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 24;
/// Generator closure stops with an error beyond this many elements.
pub const CLOSURE_LIMIT: usize = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("unknown theorem id {0:?}")]
    UnknownTheorem(String),
    #[error("group too large to enumerate: {0}")]
    TooLarge(String),
}

/// Lookup tables for a finite field, indexed by element index.
#[derive(Clone, Debug)]
pub struct Packed {
    field: Field,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    elems: Vec<FieldElement>,
}

impl Packed {
    pub fn new(field: Field) -> Option<Packed> {
        let elems = field.elements()?;
        let q = elems.len();
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                add[i * q + j] = (*a + *b).index().unwrap() as u8;
                mul[i * q + j] = (*a * *b).index().unwrap() as u8;
            }
        }
        Some(Packed { field, q, add, mul, elems })
    }

    #[inline]
    fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn pack(&self, m: &Matrix) -> Vec<u8> {
        (0..m.rows()).flat_map(|i| (0..m.cols()).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].index().unwrap() as u8).collect()
    }

    pub fn unpack(&self, data: &[u8], n: usize) -> Matrix {
        let rows: Vec<Vector> = data.chunks(n).map(|r| r.iter().map(|&x| self.elems[x as usize]).collect()).collect();
        Matrix::from_rows(self.field, n, &rows)
    }

    fn matmul(&self, a: &[u8], b: &[u8], n: usize) -> Vec<u8> {
        let mut out = vec![0u8; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let p = self.mul(x, b[k * n + j]);
                    out[i * n + j] = self.add(out[i * n + j], p);
                }
            }
        }
        out
    }
}

/// Packed isometry test: `q(Meⱼ) = q(eⱼ)` and `b(Meᵢ, Meⱼ) = b(eᵢ, eⱼ)`.
struct PackedForm {
    n: usize,
    qmat: Vec<u8>,
    gram: Vec<u8>,
}

impl PackedForm {
    fn new(p: &Packed, space: &QuadraticSpace) -> PackedForm {
        PackedForm { n: space.dim(), qmat: p.pack(space.qmat()), gram: p.pack(space.gram()) }
    }

    fn column(&self, m: &[u8], j: usize) -> Vec<u8> {
        (0..self.n).map(|i| m[i * self.n + j]).collect()
    }

    fn q(&self, p: &Packed, c: &[u8]) -> u8 {
        let n = self.n;
        let mut acc = 0u8;
        for i in 0..n {
            if c[i] == 0 {
                continue;
            }
            for k in i..n {
                let t = p.mul(p.mul(c[i], self.qmat[i * n + k]), c[k]);
                acc = p.add(acc, t);
            }
        }
        acc
    }

    fn b(&self, p: &Packed, x: &[u8], y: &[u8]) -> u8 {
        let n = self.n;
        let mut acc = 0u8;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for k in 0..n {
                let t = p.mul(p.mul(x[i], self.gram[i * n + k]), y[k]);
                acc = p.add(acc, t);
            }
        }
        acc
    }

    fn is_isometry(&self, p: &Packed, m: &[u8]) -> bool {
        let n = self.n;
        let cols: Vec<Vec<u8>> = (0..n).map(|j| self.column(m, j)).collect();
        for j in 0..n {
            if self.q(p, &cols[j]) != self.qmat[j * n + j] {
                return false;
            }
            for i in 0..j {
                if self.b(p, &cols[i], &cols[j]) != self.gram[i * n + j] {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExhaustiveMatrixScan,
    GeneratorClosure,
}

/// All elements of `O(V, q)` (or of the subgroup generated by the closure generators).
#[derive(Clone, Debug)]
pub struct GroupEnumeration {
    space: Arc<QuadraticSpace>,
    packed: Packed,
    elements: Vec<Vec<u8>>,
    method: Method,
}

impl GroupEnumeration {
    pub fn space(&self) -> &Arc<QuadraticSpace> {
        &self.space
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn matrix(&self, i: usize) -> Matrix {
        self.packed.unpack(&self.elements[i], self.space.dim())
    }

    pub fn isometry(&self, i: usize) -> Isometry {
        Isometry::new_unchecked(self.space.clone(), self.matrix(i))
    }

    pub fn isometries(&self) -> Vec<Isometry> {
        (0..self.order()).into_par_iter().map(|i| self.isometry(i)).collect()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.elements.binary_search(&self.packed.pack(m)).is_ok()
    }

    /// Contains the identity and is closed under products and inverses.
    pub fn is_group(&self) -> bool {
        let n = self.space.dim();
        let id = self.packed.pack(&Matrix::identity(self.space.field(), n));
        let set: HashSet<&Vec<u8>> = self.elements.iter().collect();
        set.contains(&id)
            && self.elements.par_iter().all(|a| {
                let inv = self.packed.unpack(a, n).inverse().map(|m| self.packed.pack(&m));
                inv.is_some_and(|i| set.contains(&i))
                    && self.elements.iter().take(64).all(|b| set.contains(&self.packed.matmul(a, b, n)))
            })
    }
}

fn scan_count(q: usize, n: usize) -> Option<u64> {
    (q as u64).checked_pow((n * n) as u32)
}

/// Exhaustive scan when `|F|^(n²) ≤ 2²⁴`, generator closure otherwise.
pub fn enumerate_orthogonal_group(space: &QuadraticSpace) -> Result<GroupEnumeration, OracleError> {
    let packed = Packed::new(space.field())
        .ok_or_else(|| OracleError::TooLarge(format!("{} is infinite", space.field())))?;
    match scan_count(packed.q, space.dim()) {
        Some(c) if c <= EXHAUSTIVE_LIMIT => Ok(exhaustive_scan(space, packed)),
        _ => closure(space, packed),
    }
}

/// Every matrix over the field, tested in parallel.
pub fn exhaustive_scan(space: &QuadraticSpace, packed: Packed) -> GroupEnumeration {
    let n = space.dim();
    let q = packed.q as u64;
    let total = scan_count(packed.q, n).expect("scan size checked by caller");
    let form = PackedForm::new(&packed, space);
    let mut elements: Vec<Vec<u8>> = (0..total)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut m = vec![0u8; n * n];
            for x in m.iter_mut() {
                *x = (code % q) as u8;
                code /= q;
            }
            form.is_isometry(&packed, &m).then_some(m)
        })
        .collect();
    elements.sort();
    GroupEnumeration { space: Arc::new(space.clone()), packed, elements, method: Method::ExhaustiveMatrixScan }
}

/// Coefficients used for generator vectors: the whole field when `|F| ≤ 4`,
/// otherwise `{0, 1, −1}`.
fn generator_coefficients(field: Field) -> Vec<FieldElement> {
    let elems = field.elements().unwrap();
    if elems.len() <= 4 {
        elems
    } else {
        let mut v = vec![field.zero(), field.one(), -field.one()];
        v.dedup();
        v
    }
}

/// Reflections along anisotropic vectors with generator coefficients (one per
/// line) and Eichler transformations `E_{eᵢ, eⱼ}` wherever defined.
pub fn closure_generators(space: &Arc<QuadraticSpace>) -> Vec<Isometry> {
    let f = space.field();
    let n = space.dim();
    let coeffs = generator_coefficients(f);
    let mut gens = Vec::new();
    let mut seen_lines: Vec<Vector> = Vec::new();
    let mut digits = vec![0usize; n];
    loop {
        let v: Vector = digits.iter().map(|&d| coeffs[d]).collect();
        if let Some(lead) = v.iter().find(|x| !x.is_zero()).copied() {
            let normal: Vector = v.iter().map(|x| *x / lead).collect();
            if !seen_lines.contains(&normal) && !space.q(&normal).is_zero() {
                gens.push(Isometry::reflection(space.clone(), &normal).unwrap());
                seen_lines.push(normal);
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                break;
            }
            digits[i] += 1;
            if digits[i] < coeffs.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                if let Ok(e) = Isometry::eichler(space.clone(), &space.unit(i), &space.unit(j)) {
                    gens.push(e);
                }
            }
        }
    }
    gens
}

/// Worklist closure of the generators under left multiplication.
pub fn closure(space: &QuadraticSpace, packed: Packed) -> Result<GroupEnumeration, OracleError> {
    let n = space.dim();
    let arc = Arc::new(space.clone());
    let gens: Vec<Vec<u8>> = closure_generators(&arc).iter().map(|g| packed.pack(g.matrix())).collect();
    let id = packed.pack(&Matrix::identity(space.field(), n));
    let mut seen: HashSet<Vec<u8>> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let products: Vec<Vec<u8>> = frontier
            .par_iter()
            .flat_map_iter(|h| gens.iter().map(|g| packed.matmul(g, h, n)))
            .collect();
        frontier = Vec::new();
        for p in products {
            if !seen.contains(&p) {
                seen.insert(p.clone());
                frontier.push(p);
            }
        }
        if seen.len() > CLOSURE_LIMIT {
            return Err(OracleError::TooLarge(format!("closure exceeded {CLOSURE_LIMIT} elements")));
        }
    }
    let mut elements: Vec<Vec<u8>> = seen.into_iter().collect();
    elements.sort();
    Ok(GroupEnumeration { space: arc, packed, elements, method: Method::GeneratorClosure })
}

/// All `τ` with `(τ − id)² = 0`, in enumeration order.
pub fn enumerate_unipotent2(space: &QuadraticSpace) -> Result<Vec<Isometry>, OracleError> {
    let g = enumerate_orthogonal_group(space)?;
    Ok(g.isometries().into_iter().filter(|t| t.is_unipotent2()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub theorem: String,
    pub method: Method,
    pub group_order: usize,
    pub checked: usize,
    pub failed: usize,
    /// Up to five counterexamples, in enumeration order.
    pub examples: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

const MAX_EXAMPLES: usize = 5;

/// Runs the checks of one theorem over the given elements and merges the
/// outcomes in input order.
pub fn verify_elements(theorem: Theorem, elements: &[Isometry]) -> (usize, usize, Vec<String>) {
    let ctx = checks::Context::for_elements(theorem, elements);
    let outcomes: Vec<Outcome> = elements.par_iter().map(|t| check_element(theorem, t, &ctx)).collect();
    let mut checked = 0;
    let mut failed = 0;
    let mut examples = Vec::new();
    for (o, t) in outcomes.into_iter().zip(elements) {
        match o {
            Outcome::NotApplicable => {}
            Outcome::Pass => checked += 1,
            Outcome::Fail(why) => {
                checked += 1;
                failed += 1;
                if examples.len() < MAX_EXAMPLES {
                    examples.push(format!("{why}: tau = {:?}", t.matrix()));
                }
            }
        }
    }
    (checked, failed, examples)
}

/// Runs the named theorem's checks over every element of `O(V, q)`.
pub fn exhaustive_verify(theorem_id: &str, space: &QuadraticSpace) -> Result<Report, OracleError> {
    let theorem: Theorem = theorem_id.parse()?;
    let group = enumerate_orthogonal_group(space)?;
    let elements = group.isometries();
    let (mut checked, mut failed, mut examples) = verify_elements(theorem, &elements);
    if theorem == Theorem::Totimes && space.field().characteristic() == 2 {
        for k in [2, 3] {
            if let Some((c, bad)) = symmetric_square_scan(space.field(), k) {
                checked += c;
                failed += bad.len();
                for m in bad {
                    if examples.len() < MAX_EXAMPLES {
                        examples.push(format!("symmetric matrix with non-square scalar square: {m:?}"));
                    }
                }
            }
        }
    }
    Ok(Report { theorem: theorem.id().to_string(), method: group.method(), group_order: group.order(), checked, failed, examples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn h4f2_group_order() {
        let g = enumerate_orthogonal_group(&fixtures::h4f2_space()).unwrap();
        assert_eq!(g.method(), Method::ExhaustiveMatrixScan);
        assert_eq!(g.order(), 72);
        assert!(g.contains(fixtures::h4f2_tau().matrix()));
        assert!(g.is_group());
        assert!(g.isometries().iter().all(|t| Isometry::new(t.space_arc().clone(), t.matrix().clone()).is_ok()));
    }

    #[test]
    fn gf2_plane_group() {
        let g = enumerate_orthogonal_group(&fixtures::hyperbolic_space(Field::gf2(), 1)).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn closure_matches_scan_on_h4f2() {
        let s = fixtures::h4f2_space();
        let c = closure(&s, Packed::new(Field::gf2()).unwrap()).unwrap();
        assert_eq!(c.order(), 72);
    }

    #[test]
    fn unipotent2_filter() {
        let u = enumerate_unipotent2(&fixtures::h4f2_space()).unwrap();
        assert!(u.iter().any(|t| t.is_identity()));
        assert!(u.iter().any(|t| *t == fixtures::h4f2_tau()));
        let gf7 = Field::prime(7).unwrap();
        let u = enumerate_unipotent2(&fixtures::diagonal_space(gf7, &[1, -1])).unwrap();
        assert!(u.iter().any(|t| t.is_identity()));
    }

    #[test]
    fn unknown_theorem() {
        assert_eq!(
            exhaustive_verify("nope", &fixtures::h4f2_space()),
            Err(OracleError::UnknownTheorem("nope".into()))
        );
    }
}
