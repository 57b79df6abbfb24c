//! Brute-force searches over all vectors and all subspaces of a small space.

use crate::field::{Field, FieldElement};
use crate::isometry::Isometry;
use crate::linalg::{vec_sub, Matrix, Vector};
use crate::quadspace::Subspace;

/// Every vector of `Fⁿ` for a finite field, in index order.
pub fn all_vectors(field: Field, n: usize) -> Vec<Vector> {
    let elems = field.elements().expect("finite field");
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<FieldElement>| {
                elems.iter().map(move |e| {
                    let mut w = v.clone();
                    w.push(*e);
                    w
                })
            })
            .collect();
    }
    out
}

fn pivot_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for mut rest in pivot_sets(n, k - 1) {
            if rest.first().is_none_or(|&r| r > first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
    }
    out
}

/// Every `k`-dimensional subspace of `Fⁿ`, one per reduced echelon basis.
pub fn all_subspaces(field: Field, n: usize, k: usize) -> Vec<Subspace> {
    let elems = field.elements().expect("finite field");
    let mut out = Vec::new();
    for pivots in pivot_sets(n, k) {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| (pivots[r] + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let mut digits = vec![0usize; free.len()];
        loop {
            let mut m = Matrix::zeros(field, k, n);
            for (r, &p) in pivots.iter().enumerate() {
                m[(r, p)] = field.one();
            }
            for (&(r, c), &d) in free.iter().zip(&digits) {
                m[(r, c)] = elems[d];
            }
            out.push(Subspace::span(field, n, &m.row_vectors()));
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < elems.len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
    }
    out
}

/// A `τ`-invariant subspace among the candidates (which the caller has
/// restricted to regular proper nonzero subspaces), if any.
pub fn invariant_regular_proper_subspace(tau: &Isometry, candidates: &[Subspace]) -> Option<Subspace> {
    candidates
        .iter()
        .find(|s| s.basis_vectors().iter().all(|v| s.contains(&tau.apply(v))))
        .cloned()
}

/// Whether some hyperbolic basis `(x, y, w, z)` has `τx = x`, `τw = w`,
/// `τy = y + w`, `τz = z − x`. Searches all `y` and `z`, setting
/// `w = τy − y` and `x = z − τz`.
///
/// In such a basis `τ − id` has rank 2 and squares to zero, so other `τ` are
/// rejected before the search.
pub fn has_normal_basis_brute(tau: &Isometry, vectors: &[Vector]) -> bool {
    let space = tau.space();
    if space.dim() != 4 || tau.fixed_space().dim() != 2 || !tau.is_unipotent2() {
        return false;
    }
    let ys: Vec<(Vector, Vector)> = vectors
        .iter()
        .filter(|y| space.q(y).is_zero())
        .map(|y| (y.clone(), vec_sub(&tau.apply(y), y)))
        .filter(|(y, w)| space.q(w).is_zero() && space.b(y, w).is_zero() && tau.apply(w) == *w)
        .collect();
    let zs: Vec<(Vector, Vector)> = vectors
        .iter()
        .filter(|z| space.q(z).is_zero())
        .map(|z| (z.clone(), vec_sub(z, &tau.apply(z))))
        .filter(|(z, x)| space.q(x).is_zero() && space.b(z, x).is_zero() && tau.apply(x) == *x)
        .collect();
    ys.iter().any(|(y, w)| {
        zs.iter().any(|(z, x)| space.is_hyperbolic_quadruple(&[x.clone(), y.clone(), w.clone(), z.clone()]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn subspace_counts() {
        // Gaussian binomials: [4 choose 2]_2 = 35, [4 choose 1]_4 = 85
        assert_eq!(all_subspaces(Field::gf2(), 4, 2).len(), 35);
        assert_eq!(all_subspaces(Field::gf4(), 4, 1).len(), 85);
        assert_eq!(all_subspaces(Field::gf4(), 4, 2).len(), 357);
        assert_eq!(all_vectors(Field::gf2(), 3).len(), 8);
    }

    #[test]
    fn brute_normal_basis() {
        let tau = fixtures::h4f2_tau();
        let vs = all_vectors(Field::gf2(), 4);
        assert!(has_normal_basis_brute(&tau, &vs));
        let id = Isometry::identity(tau.space_arc().clone());
        assert!(!has_normal_basis_brute(&id, &vs));
    }
}
