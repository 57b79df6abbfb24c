//! Quadratic forms, regular quadratic spaces, subspaces and basis constructions
//! for symmetric and alternating bilinear forms.

use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::linalg::{is_zero_vector, unit_vector, vec_add, vec_scale, vec_sub, zero_vector, Matrix, Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the polar form is degenerate")]
    Degenerate,
    #[error("inner subspace is not contained in the outer one")]
    NotNested,
    #[error("the form is alternating and has no orthogonal basis")]
    AlternatingForm,
    #[error("the form is not alternating")]
    NotAlternating,
    #[error("the form is not symmetric")]
    NotSymmetric,
    #[error("cannot extend to a hyperbolic basis: {0}")]
    NotExtendable(String),
}

/// `q(x) = xᵀ·Q·x` with `Q` upper triangular. May be degenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    qmat: Matrix,
}

/// True iff `a` and `b` define the same quadratic form: `N = a − b` has
/// `N + Nᵀ = 0` and zero diagonal.
pub fn same_quadratic_form(a: &Matrix, b: &Matrix) -> bool {
    let n = a.sub(b);
    (0..n.rows()).all(|i| n[(i, i)].is_zero()) && n.add(&n.transpose()).is_zero()
}

impl QuadraticForm {
    /// Folds the strictly lower part into the upper triangle.
    pub fn new(qmat: &Matrix) -> QuadraticForm {
        assert!(qmat.is_square(), "quadratic form matrix must be square");
        let n = qmat.rows();
        let mut up = Matrix::zeros(qmat.field(), n, n);
        for i in 0..n {
            for j in i..n {
                up[(i, j)] = if i == j { qmat[(i, i)] } else { qmat[(i, j)] + qmat[(j, i)] };
            }
        }
        QuadraticForm { qmat: up }
    }

    /// Diagonal form `Σ aᵢ xᵢ²`.
    pub fn diagonal(field: Field, entries: &[FieldElement]) -> QuadraticForm {
        let mut m = Matrix::zeros(field, entries.len(), entries.len());
        for (i, a) in entries.iter().enumerate() {
            m[(i, i)] = *a;
        }
        QuadraticForm { qmat: m }
    }

    pub fn field(&self) -> Field {
        self.qmat.field()
    }

    pub fn dim(&self) -> usize {
        self.qmat.rows()
    }

    pub fn qmat(&self) -> &Matrix {
        &self.qmat
    }

    /// Polar Gram matrix `Q + Qᵀ`.
    pub fn polar_gram(&self) -> Matrix {
        self.qmat.add(&self.qmat.transpose())
    }

    pub fn eval(&self, x: &[FieldElement]) -> FieldElement {
        let n = self.dim();
        let mut acc = self.field().zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in i..n {
                acc = acc + x[i] * self.qmat[(i, j)] * x[j];
            }
        }
        acc
    }

    /// True iff the polar form vanishes.
    pub fn is_totally_singular(&self) -> bool {
        self.polar_gram().is_zero()
    }
}

/// A regular quadratic space `(Fⁿ, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpace {
    form: QuadraticForm,
    gram: Matrix,
}

impl QuadraticSpace {
    pub fn new(qmat: &Matrix) -> Result<QuadraticSpace, QuadError> {
        QuadraticSpace::from_form(QuadraticForm::new(qmat))
    }

    pub fn from_form(form: QuadraticForm) -> Result<QuadraticSpace, QuadError> {
        let gram = form.polar_gram();
        if !gram.is_invertible() {
            return Err(QuadError::Degenerate);
        }
        Ok(QuadraticSpace { form, gram })
    }

    /// Orthogonal sum.
    pub fn direct_sum(&self, other: &QuadraticSpace) -> QuadraticSpace {
        let (a, b) = (self.dim(), other.dim());
        let mut m = Matrix::zeros(self.field(), a + b, a + b);
        for i in 0..a {
            for j in 0..a {
                m[(i, j)] = self.qmat()[(i, j)];
            }
        }
        for i in 0..b {
            for j in 0..b {
                m[(a + i, a + j)] = other.qmat()[(i, j)];
            }
        }
        QuadraticSpace::new(&m).expect("orthogonal sum of regular spaces is regular")
    }

    pub fn field(&self) -> Field {
        self.form.field()
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn qmat(&self) -> &Matrix {
        self.form.qmat()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    fn check_len(&self, x: &[FieldElement]) -> Result<(), QuadError> {
        if x.len() != self.dim() {
            return Err(QuadError::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }

    pub fn eval_q(&self, x: &[FieldElement]) -> Result<FieldElement, QuadError> {
        self.check_len(x)?;
        Ok(self.q(x))
    }

    pub fn eval_b(&self, x: &[FieldElement], y: &[FieldElement]) -> Result<FieldElement, QuadError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.b(x, y))
    }

    /// `q(x)`; panics on a length mismatch.
    pub fn q(&self, x: &[FieldElement]) -> FieldElement {
        self.form.eval(x)
    }

    /// `b_q(x, y)`; panics on a length mismatch.
    pub fn b(&self, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        let gy = self.gram.mul_vec(y);
        let mut acc = self.field().zero();
        for (a, c) in x.iter().zip(&gy) {
            acc = acc + *a * *c;
        }
        acc
    }

    pub fn unit(&self, i: usize) -> Vector {
        unit_vector(self.field(), self.dim(), i)
    }

    pub fn whole(&self) -> Subspace {
        Subspace::whole(self.field(), self.dim())
    }

    pub fn zero_subspace(&self) -> Subspace {
        Subspace::zero(self.field(), self.dim())
    }

    /// `s^⊥` with respect to the polar form.
    pub fn orthogonal_complement(&self, s: &Subspace) -> Subspace {
        if s.dim() == 0 {
            return self.whole();
        }
        let rows: Vec<Vector> = s.basis_vectors().iter().map(|v| self.gram.mul_vec(v)).collect();
        let m = Matrix::from_rows(self.field(), self.dim(), &rows);
        Subspace::span(self.field(), self.dim(), &m.kernel())
    }

    /// Gram matrix of the polar form on the given vectors.
    pub fn gram_of(&self, vectors: &[Vector]) -> Matrix {
        let k = vectors.len();
        let mut g = Matrix::zeros(self.field(), k, k);
        for i in 0..k {
            for j in 0..k {
                g[(i, j)] = self.b(&vectors[i], &vectors[j]);
            }
        }
        g
    }

    /// `s ∩ s^⊥ = 0`.
    pub fn is_regular(&self, s: &Subspace) -> bool {
        self.gram_of(&s.basis_vectors()).is_invertible()
    }

    /// `q` vanishes on `s`.
    pub fn is_totally_isotropic(&self, s: &Subspace) -> bool {
        let basis = s.basis_vectors();
        basis.iter().all(|v| self.q(v).is_zero()) && self.gram_of(&basis).is_zero()
    }

    /// The polar form vanishes on `s`.
    pub fn is_totally_singular(&self, s: &Subspace) -> bool {
        self.gram_of(&s.basis_vectors()).is_zero()
    }

    /// The form `q` pulled back along the given vectors.
    pub fn restrict_form(&self, vectors: &[Vector]) -> QuadraticForm {
        let k = vectors.len();
        let mut m = Matrix::zeros(self.field(), k, k);
        for i in 0..k {
            m[(i, i)] = self.q(&vectors[i]);
            for j in i + 1..k {
                m[(i, j)] = self.b(&vectors[i], &vectors[j]);
            }
        }
        QuadraticForm { qmat: m }
    }

    /// Extends a totally isotropic pair `(x, w)` to a hyperbolic quadruple
    /// `(x, y, w, z)`: all four isotropic, `b(x,y) = b(w,z) = 1`, other pairings zero.
    /// In dimension 4 the result is a hyperbolic basis.
    pub fn extend_to_hyperbolic_basis(
        &self,
        x: &[FieldElement],
        w: &[FieldElement],
    ) -> Result<[Vector; 4], QuadError> {
        self.check_len(x)?;
        self.check_len(w)?;
        let fail = |why: &str| QuadError::NotExtendable(why.to_string());
        if self.dim() < 4 {
            return Err(fail("space has dimension < 4"));
        }
        if !self.q(x).is_zero() || !self.q(w).is_zero() || !self.b(x, w).is_zero() {
            return Err(fail("pair is not totally isotropic"));
        }
        let f = self.field();
        let (one, zero) = (f.one(), f.zero());
        let gx = self.gram.mul_vec(x);
        let gw = self.gram.mul_vec(w);
        let sys = Matrix::from_rows(f, self.dim(), &[gx.clone(), gw.clone()]);
        let y0 = sys.solve(&[one, zero]).ok_or_else(|| fail("pair is linearly dependent"))?;
        let y = vec_sub(&y0, &vec_scale(self.q(&y0), x));
        let gy = self.gram.mul_vec(&y);
        let sys = Matrix::from_rows(f, self.dim(), &[gw, gx, gy]);
        let z0 = sys.solve(&[one, zero, zero]).ok_or_else(|| fail("no partner for w"))?;
        let z = vec_sub(&z0, &vec_scale(self.q(&z0), w));
        let out = [x.to_vec(), y, w.to_vec(), z];
        if !self.is_hyperbolic_quadruple(&out) {
            return Err(fail("construction did not yield a hyperbolic quadruple"));
        }
        Ok(out)
    }

    /// `(x, y, w, z)` isotropic with `b(x,y) = b(w,z) = 1` and all other pairings zero.
    pub fn is_hyperbolic_quadruple(&self, v: &[Vector; 4]) -> bool {
        let target = hyperbolic_block_gram(self.field(), 2, false);
        v.iter().all(|x| self.q(x).is_zero()) && self.gram_of(v) == target
    }
}

/// Block-diagonal Gram matrix of `k` hyperbolic planes: `[[0,1],[λ,0]]` blocks with
/// `λ = −1` when `antisymmetric`, else `λ = 1`.
pub fn hyperbolic_block_gram(field: Field, k: usize, antisymmetric: bool) -> Matrix {
    let mut g = Matrix::zeros(field, 2 * k, 2 * k);
    for i in 0..k {
        g[(2 * i, 2 * i + 1)] = field.one();
        g[(2 * i + 1, 2 * i)] = if antisymmetric { -field.one() } else { field.one() };
    }
    g
}

/// A subspace of `Fⁿ`, stored by its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    pub fn span(field: Field, n: usize, vectors: &[Vector]) -> Subspace {
        if vectors.is_empty() {
            return Subspace::zero(field, n);
        }
        let (r, pivots) = Matrix::from_rows(field, n, vectors).rref();
        let rows: Vec<Vector> = (0..pivots.len()).map(|i| r.row(i)).collect();
        Subspace { basis: Matrix::from_rows(field, n, &rows) }
    }

    pub fn zero(field: Field, n: usize) -> Subspace {
        Subspace { basis: Matrix::zeros(field, 0, n) }
    }

    pub fn whole(field: Field, n: usize) -> Subspace {
        Subspace { basis: Matrix::identity(field, n) }
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Echelon basis as an `r × n` matrix.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[FieldElement]) -> Option<Vector> {
        if self.dim() == 0 {
            return is_zero_vector(v).then(Vec::new);
        }
        self.basis.transpose().solve(v)
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Subspace::span(self.field(), self.ambient_dim(), &vs)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // x = Σ aᵢ sᵢ = Σ bⱼ tⱼ  ⇔  [S; T]ᵀ (a, −b) = 0
        let (s, t) = (self.basis_vectors(), other.basis_vectors());
        let mut cols = s.clone();
        cols.extend(t.iter().cloned());
        if cols.is_empty() {
            return Subspace::zero(self.field(), self.ambient_dim());
        }
        let m = Matrix::from_columns(self.field(), self.ambient_dim(), &cols);
        let vs: Vec<Vector> = m
            .kernel()
            .iter()
            .map(|k| crate::linalg::linear_combination(self.field(), self.ambient_dim(), &k[..s.len()], &s))
            .collect();
        Subspace::span(self.field(), self.ambient_dim(), &vs)
    }

    /// A complement of `self` inside `outer`: extends the echelon basis of
    /// `self` greedily by basis vectors of `outer`.
    pub fn complement_in(&self, outer: &Subspace) -> Result<Subspace, QuadError> {
        if !outer.contains_subspace(self) {
            return Err(QuadError::NotNested);
        }
        let mut current = self.clone();
        let mut added = Vec::new();
        for v in outer.basis_vectors() {
            if !current.contains(&v) {
                current = current.sum(&Subspace::span(self.field(), self.ambient_dim(), std::slice::from_ref(&v)));
                added.push(v);
            }
        }
        Ok(Subspace::span(self.field(), self.ambient_dim(), &added))
    }
}

/// A bilinear form given by its Gram matrix on some carrier basis; vectors are
/// coordinate vectors with respect to that basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    gram: Matrix,
}

impl BilinearForm {
    pub fn new(gram: Matrix) -> BilinearForm {
        assert!(gram.is_square());
        BilinearForm { gram }
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn field(&self) -> Field {
        self.gram.field()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn eval(&self, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).fold(self.field().zero(), |acc, (a, b)| acc + *a * *b)
    }

    pub fn is_symmetric(&self) -> bool {
        self.gram.is_symmetric()
    }

    /// `f(v, v) = 0` for all `v`.
    pub fn is_alternating(&self) -> bool {
        (0..self.dim()).all(|i| self.gram[(i, i)].is_zero()) && self.gram.add(&self.gram.transpose()).is_zero()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.is_invertible()
    }

    /// Gram matrix on the given coordinate vectors.
    pub fn gram_of(&self, vectors: &[Vector]) -> Matrix {
        let k = vectors.len();
        let mut g = Matrix::zeros(self.field(), k, k);
        for i in 0..k {
            for j in 0..k {
                g[(i, j)] = self.eval(&vectors[i], &vectors[j]);
            }
        }
        g
    }

    /// Orthogonal basis of a nondegenerate nonalternating symmetric form.
    ///
    /// Greedy splitting; in characteristic 2 an alternating remainder is absorbed
    /// by trading the last split vector `v` (with `f(v,v) = a`) and a hyperbolic
    /// pair `(e, f)` for `v+e, v+af, e+v+af`, each of norm `a`.
    pub fn orthogonal_basis(&self) -> Result<Vec<Vector>, QuadError> {
        if !self.is_symmetric() {
            return Err(QuadError::NotSymmetric);
        }
        if !self.is_nondegenerate() {
            return Err(QuadError::Degenerate);
        }
        if self.dim() > 0 && self.is_alternating() {
            return Err(QuadError::AlternatingForm);
        }
        let f = self.field();
        let n = self.dim();
        let char2 = f.characteristic() == 2;
        let mut work: Vec<Vector> = (0..n).map(|i| unit_vector(f, n, i)).collect();
        let mut done: Vec<Vector> = Vec::new();

        while !work.is_empty() {
            let pick = work.iter().position(|v| !self.eval(v, v).is_zero());
            let pick = match pick {
                Some(i) => Some(i),
                None if !char2 => {
                    let mut found = None;
                    'outer: for i in 0..work.len() {
                        for j in i + 1..work.len() {
                            if !self.eval(&work[i], &work[j]).is_zero() {
                                found = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    let (i, j) = found.ok_or(QuadError::Degenerate)?;
                    work[i] = vec_add(&work[i], &work[j]);
                    Some(i)
                }
                None => None,
            };
            match pick {
                Some(i) => {
                    let v = work.remove(i);
                    let fv = self.eval(&v, &v);
                    work = work
                        .into_iter()
                        .map(|w| vec_sub(&w, &vec_scale(self.eval(&w, &v) / fv, &v)))
                        .collect();
                    done.push(v);
                }
                None => {
                    let d = done.pop().ok_or(QuadError::AlternatingForm)?;
                    let a = self.eval(&d, &d);
                    let e = work.remove(0);
                    let gi = work
                        .iter()
                        .position(|g| !self.eval(&e, g).is_zero())
                        .ok_or(QuadError::Degenerate)?;
                    let g = work.remove(gi);
                    let fe = vec_scale(self.eval(&e, &g).inv().unwrap(), &g);
                    work = work
                        .into_iter()
                        .map(|w| {
                            let alpha = -self.eval(&w, &fe);
                            let beta = self.eval(&w, &e);
                            vec_add(&vec_add(&w, &vec_scale(alpha, &e)), &vec_scale(beta, &fe))
                        })
                        .collect();
                    let afe = vec_scale(a, &fe);
                    done.push(vec_add(&d, &e));
                    done.push(vec_add(&d, &afe));
                    done.push(vec_add(&vec_add(&e, &d), &afe));
                }
            }
        }
        let g = self.gram_of(&done);
        debug_assert!((0..n).all(|i| (0..n).all(|j| (i == j) != g[(i, j)].is_zero())));
        Ok(done)
    }

    /// Hyperbolic basis `(u₁,v₁,…)` of a nondegenerate alternating form with
    /// `f(uᵢ,vᵢ) = 1`, `f(vᵢ,uᵢ) = −1`, other pairings zero.
    pub fn hyperbolic_basis_alternating(&self) -> Result<Vec<(Vector, Vector)>, QuadError> {
        if !self.is_alternating() {
            return Err(QuadError::NotAlternating);
        }
        if !self.is_nondegenerate() {
            return Err(QuadError::Degenerate);
        }
        let f = self.field();
        let n = self.dim();
        let mut work: Vec<Vector> = (0..n).map(|i| unit_vector(f, n, i)).collect();
        let mut pairs = Vec::new();
        while !work.is_empty() {
            let e = work.remove(0);
            let gi = work.iter().position(|g| !self.eval(&e, g).is_zero()).ok_or(QuadError::Degenerate)?;
            let g = work.remove(gi);
            let v = vec_scale(self.eval(&e, &g).inv().unwrap(), &g);
            work = work
                .into_iter()
                .map(|w| {
                    let alpha = -self.eval(&w, &v);
                    let beta = self.eval(&w, &e);
                    vec_add(&vec_add(&w, &vec_scale(alpha, &e)), &vec_scale(beta, &v))
                })
                .collect();
            pairs.push((e, v));
        }
        Ok(pairs)
    }
}

/// A zero vector of the space's length.
pub fn zero_in(space: &QuadraticSpace) -> Vector {
    zero_vector(space.field(), space.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn h4f2_evaluations() {
        let s = fixtures::h4f2_space();
        let f = s.field();
        for i in 0..4 {
            assert_eq!(s.eval_q(&s.unit(i)).unwrap(), f.zero());
        }
        assert_eq!(s.eval_b(&s.unit(0), &s.unit(1)).unwrap(), f.one());
        assert_eq!(s.eval_q(&zero_in(&s)).unwrap(), f.zero());
        assert!(matches!(s.eval_q(&[f.one()]), Err(QuadError::DimensionMismatch { .. })));
    }

    #[test]
    fn r2t_evaluations() {
        let s = fixtures::r2t_space();
        let t = s.field().generator().unwrap();
        assert_eq!(s.q(&s.unit(0)), t);
        assert_eq!(s.b(&s.unit(0), &s.unit(1)), s.field().one());
        assert!(s.is_regular(&s.whole()));
    }

    #[test]
    fn complements() {
        let s = fixtures::h4f2_space();
        let f = s.field();
        assert_eq!(s.orthogonal_complement(&s.whole()).dim(), 0);
        assert_eq!(s.orthogonal_complement(&s.zero_subspace()), s.whole());
        let plane = Subspace::span(f, 4, &[s.unit(0), s.unit(2)]);
        assert_eq!(s.orthogonal_complement(&plane), plane);
        assert!(!s.is_regular(&plane));
        assert!(s.is_totally_isotropic(&plane));
        assert!(s.is_regular(&s.zero_subspace()));
        assert_eq!(plane.complement_in(&plane).unwrap().dim(), 0);
        assert_eq!(s.zero_subspace().complement_in(&plane).unwrap(), plane);
        let line = Subspace::span(f, 4, &[s.unit(1)]);
        assert_eq!(line.complement_in(&plane), Err(QuadError::NotNested));
    }

    #[test]
    fn orthogonal_basis_char2_fixup() {
        let f = Field::gf2();
        let g = Matrix::from_rows(
            f,
            3,
            &[
                vec![f.one(), f.zero(), f.zero()],
                vec![f.zero(), f.zero(), f.one()],
                vec![f.zero(), f.one(), f.zero()],
            ],
        );
        let form = BilinearForm::new(g);
        let basis = form.orthogonal_basis().unwrap();
        assert_eq!(form.gram_of(&basis), Matrix::identity(f, 3));
        assert_eq!(Matrix::from_rows(f, 3, &basis).rank(), 3);
    }

    #[test]
    fn orthogonal_basis_trivial_cases() {
        let f = Field::rational_function();
        let t = f.generator().unwrap();
        let mut g = Matrix::zeros(f, 2, 2);
        g[(0, 0)] = t;
        g[(1, 1)] = t;
        let form = BilinearForm::new(g.clone());
        let basis = form.orthogonal_basis().unwrap();
        assert_eq!(basis, vec![unit_vector(f, 2, 0), unit_vector(f, 2, 1)]);
        let one = BilinearForm::new(Matrix::identity(f, 1));
        assert_eq!(one.orthogonal_basis().unwrap(), vec![vec![f.one()]]);
        let h = BilinearForm::new(hyperbolic_block_gram(f, 1, false));
        assert_eq!(h.orthogonal_basis(), Err(QuadError::AlternatingForm));
    }

    #[test]
    fn hyperbolic_basis_examples() {
        let f = Field::gf2();
        let h = BilinearForm::new(hyperbolic_block_gram(f, 1, true));
        let pairs = h.hyperbolic_basis_alternating().unwrap();
        assert_eq!(pairs, vec![(unit_vector(f, 2, 0), unit_vector(f, 2, 1))]);
        let empty = BilinearForm::new(Matrix::zeros(f, 0, 0));
        assert!(empty.hyperbolic_basis_alternating().unwrap().is_empty());
        assert_eq!(
            BilinearForm::new(Matrix::identity(f, 2)).hyperbolic_basis_alternating(),
            Err(QuadError::NotAlternating)
        );
    }

    #[test]
    fn hyperbolic_basis_gf7_random_antisymmetric() {
        let f = Field::prime(7).unwrap();
        let e = |x: i64| f.from_int(x);
        // invertible antisymmetric 4×4
        let g = Matrix::from_rows(
            f,
            4,
            &[
                vec![e(0), e(2), e(5), e(1)],
                vec![e(-2), e(0), e(3), e(4)],
                vec![e(-5), e(-3), e(0), e(6)],
                vec![e(-1), e(-4), e(-6), e(0)],
            ],
        );
        assert!(g.is_invertible());
        let form = BilinearForm::new(g);
        let pairs = form.hyperbolic_basis_alternating().unwrap();
        assert_eq!(pairs.len(), 2);
        let flat: Vec<Vector> = pairs.iter().flat_map(|(u, v)| [u.clone(), v.clone()]).collect();
        assert_eq!(form.gram_of(&flat), hyperbolic_block_gram(f, 2, true));
    }

    #[test]
    fn extend_pair_to_hyperbolic_basis() {
        let s = fixtures::h4f2_space();
        let b = s.extend_to_hyperbolic_basis(&s.unit(0), &s.unit(2)).unwrap();
        assert_eq!(b, [s.unit(0), s.unit(1), s.unit(2), s.unit(3)]);
        let swapped = s.extend_to_hyperbolic_basis(&s.unit(2), &s.unit(0)).unwrap();
        assert!(s.is_hyperbolic_quadruple(&swapped));
        assert!(matches!(
            s.extend_to_hyperbolic_basis(&s.unit(0), &s.unit(1)),
            Err(QuadError::NotExtendable(_))
        ));
    }

    #[test]
    fn same_form_detects_polar_equivalence() {
        let f = Field::gf2();
        let a = fixtures::h4f2_space().qmat().clone();
        let mut b = a.clone();
        b[(0, 1)] = f.zero();
        b[(1, 0)] = f.one();
        assert!(same_quadratic_form(&a, &b));
        b[(0, 0)] = f.one();
        assert!(!same_quadratic_form(&a, &b));
    }
}
