//! Small named spaces and isometries shared by tests, examples and the CLI.
//!
//! * `h4f2`: GF(2), dim 4, all basis vectors isotropic, `b(e1,e2) = b(e3,e4) = 1`,
//!   with the interchange isometry `e1↦e1, e2↦e2+e3, e3↦e3, e4↦e4+e1`.
//! * `r2t`: GF(2)(t), dim 2, `q(u) = t`, `q(v) = 0`, `b(u,v) = 1`, with the
//!   reflection along `u`.
//! * `r4t`: two orthogonal copies of `r2t`, with the product of both reflections.

use std::sync::Arc;

use crate::field::{Field, FieldElement};
use crate::isometry::Isometry;
use crate::linalg::{vec_add, Matrix};
use crate::quadspace::QuadraticSpace;

/// Orthogonal sum of `k` hyperbolic planes, `q = x₁x₂ + x₃x₄ + ⋯`.
pub fn hyperbolic_space(field: Field, k: usize) -> QuadraticSpace {
    let mut q = Matrix::zeros(field, 2 * k, 2 * k);
    for i in 0..k {
        q[(2 * i, 2 * i + 1)] = field.one();
    }
    QuadraticSpace::new(&q).expect("hyperbolic space is regular")
}

/// `⟨a₁, …, a_n⟩` in odd characteristic.
pub fn diagonal_space(field: Field, entries: &[i64]) -> QuadraticSpace {
    let n = entries.len();
    let mut q = Matrix::zeros(field, n, n);
    for (i, &a) in entries.iter().enumerate() {
        q[(i, i)] = field.from_int(a);
    }
    QuadraticSpace::new(&q).expect("diagonal entries must be nonzero in odd characteristic")
}

/// A char-2 plane with `q(u) = a`, `q(v) = 0`, `b(u,v) = 1`.
pub fn reflection_plane(a: FieldElement) -> QuadraticSpace {
    let f = a.field();
    let mut q = Matrix::zeros(f, 2, 2);
    q[(0, 0)] = a;
    q[(0, 1)] = f.one();
    QuadraticSpace::new(&q).expect("plane with b(u,v) = 1 is regular")
}

pub fn h4f2_space() -> QuadraticSpace {
    hyperbolic_space(Field::gf2(), 2)
}

pub fn h4f2_tau() -> Isometry {
    let s = Arc::new(h4f2_space());
    let e = |i| s.unit(i);
    let cols = vec![e(0), vec_add(&e(1), &e(2)), e(2), vec_add(&e(3), &e(0))];
    let m = Matrix::from_columns(s.field(), 4, &cols);
    Isometry::new(s, m).expect("interchange fixture is an isometry")
}

pub fn r2t_space() -> QuadraticSpace {
    let f = Field::rational_function();
    reflection_plane(f.generator().unwrap())
}

pub fn r2t_tau() -> Isometry {
    let s = Arc::new(r2t_space());
    let u = s.unit(0);
    Isometry::reflection(s, &u).unwrap()
}

/// The `r2t` shape with `q(u) = 1`, whose reflection has trivial spinor norm.
pub fn r2t_unit_tau() -> Isometry {
    let s = Arc::new(reflection_plane(Field::rational_function().one()));
    let u = s.unit(0);
    Isometry::reflection(s, &u).unwrap()
}

pub fn r4t_space() -> QuadraticSpace {
    let p = r2t_space();
    p.direct_sum(&p)
}

pub fn r4t_tau() -> Isometry {
    let s = Arc::new(r4t_space());
    let a = Isometry::reflection(s.clone(), &s.unit(0)).unwrap();
    let b = Isometry::reflection(s.clone(), &s.unit(2)).unwrap();
    a.compose(&b).unwrap()
}

/// GF(4) plane with `q(u) = 1` and its reflection along `u`.
pub fn gf4_unit_tau() -> Isometry {
    let s = Arc::new(reflection_plane(Field::gf4().one()));
    let u = s.unit(0);
    Isometry::reflection(s, &u).unwrap()
}

/// `h4f2` ⊥ a hyperbolic plane, with the interchange isometry on the first
/// summand and the identity on the second.
pub fn h4f2_plus_plane_tau() -> Isometry {
    let f = Field::gf2();
    let s = Arc::new(h4f2_space().direct_sum(&hyperbolic_space(f, 1)));
    let t = h4f2_tau();
    let mut m = Matrix::identity(f, 6);
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = t.matrix()[(i, j)];
        }
    }
    Isometry::new(s, m).unwrap()
}

/// GF(7), two hyperbolic planes, `E_{x,w}` with `x = e1`, `w = e3 + e4` (`q(w) = 1`).
pub fn gf7_eichler() -> Isometry {
    let s = Arc::new(hyperbolic_space(Field::prime(7).unwrap(), 2));
    let w = vec_add(&s.unit(2), &s.unit(3));
    Isometry::eichler(s.clone(), &s.unit(0), &w).unwrap()
}

/// GF(7), two hyperbolic planes, `E_{x,w}` with `x = e1`, `w = e3` (`q(w) = 0`).
pub fn gf7_eichler_isotropic() -> Isometry {
    let s = Arc::new(hyperbolic_space(Field::prime(7).unwrap(), 2));
    Isometry::eichler(s.clone(), &s.unit(0), &s.unit(2)).unwrap()
}
