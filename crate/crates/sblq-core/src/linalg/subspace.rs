use alloc::vec::Vec;

use super::{image_basis, kernel_basis, rank, rref, Matrix};
use crate::Error;

/// A subspace of ℚ^ambient given by a full-column-rank basis matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Span of the columns of `m`, reduced to a basis.
    pub fn span(m: &Matrix) -> Self {
        image_basis(m)
    }

    pub(crate) fn from_basis_unchecked(basis: Matrix) -> Self {
        Subspace { basis }
    }

    /// Accept `basis` as is, checking full column rank.
    pub fn from_basis(basis: Matrix) -> Result<Self, Error> {
        if rank(&basis) != basis.cols() {
            return Err(Error::Shape("subspace basis must have full column rank".into()));
        }
        Ok(Subspace { basis })
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { basis: Matrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { basis: Matrix::identity(ambient) }
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient(), other.ambient());
        rank(&self.basis.hstack(&other.basis)) == self.dim()
    }

    pub fn same_span(&self, other: &Subspace) -> bool {
        self.ambient() == other.ambient() && self.dim() == other.dim() && self.contains(other)
    }

    /// Rows spanning the annihilator `{y : yᵀv = 0 for v in self}`.
    pub fn annihilator(&self) -> Matrix {
        kernel_basis(&self.basis.transpose()).basis().transpose()
    }

    /// Image under a linear map given by `map` (ambient' × ambient).
    pub fn image_under(&self, map: &Matrix) -> Subspace {
        Subspace::span(&map.mul(&self.basis))
    }

    /// Columns of `cands` that extend the basis of `self` to a basis of `self + span(cands)`,
    /// chosen greedily left to right.
    pub fn extension_from(&self, cands: &Matrix) -> Matrix {
        let k = self.dim();
        let r = rref(&self.basis.hstack(cands));
        let cols: Vec<usize> = r.pivots.iter().filter(|&&c| c >= k).map(|c| c - k).collect();
        cands.select_cols(&cols)
    }

    /// Standard basis vectors completing `self` to the whole space.
    pub fn complement_basis(&self) -> Matrix {
        self.extension_from(&Matrix::identity(self.ambient()))
    }

    /// Coordinates of the columns of `v` in this basis, if they lie in the span.
    pub fn coordinates(&self, v: &Matrix) -> Option<Matrix> {
        super::solve_right(&self.basis, v)
    }

    /// Canonical representative: the RREF of the transposed basis. Equal spans give equal keys.
    pub fn canonical(&self) -> Matrix {
        let r = rref(&self.basis.transpose());
        r.matrix.select_rows(&(0..r.pivots.len()).collect::<Vec<_>>())
    }
}

fn check_ambient(u: &Subspace, v: &Subspace) -> Result<(), Error> {
    if u.ambient() != v.ambient() {
        return Err(Error::AmbientMismatch { left: u.ambient(), right: v.ambient() });
    }
    Ok(())
}

/// `u ∩ v` from the null space of `[B_u | −B_v]`.
pub fn subspace_intersect(u: &Subspace, v: &Subspace) -> Result<Subspace, Error> {
    check_ambient(u, v)?;
    let k = kernel_basis(&u.basis.hstack(&v.basis.neg()));
    let coeffs = k.basis().submatrix(0, 0, u.dim(), k.dim());
    Ok(Subspace::span(&u.basis.mul(&coeffs)))
}

pub fn subspace_sum(u: &Subspace, v: &Subspace) -> Result<Subspace, Error> {
    check_ambient(u, v)?;
    Ok(Subspace::span(&u.basis.hstack(&v.basis)))
}

/// True iff `u ⊕ v` is the whole ambient space.
pub fn is_direct_complement(u: &Subspace, v: &Subspace) -> bool {
    u.ambient() == v.ambient()
        && u.dim() + v.dim() == u.ambient()
        && rank(&u.basis.hstack(&v.basis)) == u.ambient()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(rows: &[&[i64]]) -> Subspace {
        Subspace::span(&Matrix::from_i64(rows))
    }

    #[test]
    fn intersect_examples() {
        let e1 = span(&[&[1], &[0]]);
        let e2 = span(&[&[0], &[1]]);
        assert_eq!(subspace_intersect(&e1, &e2).unwrap().dim(), 0);
        assert!(subspace_intersect(&e1, &e1).unwrap().same_span(&e1));
        let plane = Subspace::full(2);
        let diag = span(&[&[1], &[1]]);
        assert!(subspace_intersect(&plane, &diag).unwrap().same_span(&diag));
        assert!(subspace_intersect(&e1, &Subspace::full(3)).is_err());
    }

    #[test]
    fn sum_examples() {
        let e1 = span(&[&[1], &[0]]);
        let e2 = span(&[&[0], &[1]]);
        assert_eq!(subspace_sum(&e1, &e2).unwrap().dim(), 2);
        assert!(subspace_sum(&e1, &e1).unwrap().same_span(&e1));
        let diag = span(&[&[1], &[1]]);
        assert!(subspace_sum(&Subspace::full(2), &diag).unwrap().same_span(&Subspace::full(2)));
    }

    #[test]
    fn complement_examples() {
        let e1 = span(&[&[1], &[0]]);
        let e2 = span(&[&[0], &[1]]);
        assert!(is_direct_complement(&e1, &e2));
        assert!(!is_direct_complement(&e1, &e1));
        assert!(is_direct_complement(&Subspace::full(2), &Subspace::zero(2)));
    }

    #[test]
    fn annihilator_kills_span() {
        let u = span(&[&[1, 0], &[2, 1], &[0, 3]]);
        let a = u.annihilator();
        assert_eq!(a.rows(), 1);
        assert!(a.mul(u.basis()).is_zero());
    }
}
