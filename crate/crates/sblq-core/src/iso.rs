//! Certificate-based isomorphism search between four-subspace modules.
//!
//! `Hom(A, B) = {ψ : ψ(A_i) ⊆ B_i}` is cut out by the linear equations
//! `N_i ψ A_i = 0`, where the rows of `N_i` span the annihilator of `B_i`.
//! Random integer combinations of a basis of that space are tried for
//! invertibility; a hit is verified exactly and returned as the certificate.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::linalg::{kernel_basis, rank, rat, Matrix};
use crate::module::FourModule;
use crate::rng::Stream;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    /// `ψ` is invertible and `ψ(A_i) = B_i` for every slot (checked exactly).
    Isomorphic(Matrix),
    /// A definite obstruction was found.
    NotIsomorphic(String),
    /// No certificate within the trial budget and no obstruction found either.
    Inconclusive { trials: usize },
}

impl IsoOutcome {
    pub fn certificate(&self) -> Option<&Matrix> {
        match self {
            IsoOutcome::Isomorphic(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }
}

/// Basis of `Hom(a, b)` as `b.dim × a.dim` matrices.
pub fn hom_space(a: &FourModule, b: &FourModule) -> Vec<Matrix> {
    let (ma, mb) = (a.dim, b.dim);
    let unknowns = ma * mb;
    let mut eqs: Vec<Vec<crate::Rational>> = Vec::new();
    for i in 0..4 {
        let n = b.sub[i].annihilator();
        let bi = a.sub[i].basis();
        for p in 0..n.rows() {
            for q in 0..bi.cols() {
                let mut row = alloc::vec![crate::Rational::zero(); unknowns];
                let mut any = false;
                for r in 0..mb {
                    let nr = &n[(p, r)];
                    if nr.is_zero() {
                        continue;
                    }
                    for c in 0..ma {
                        let bc = &bi[(c, q)];
                        if !bc.is_zero() {
                            row[r * ma + c] = nr * bc;
                            any = true;
                        }
                    }
                }
                if any {
                    eqs.push(row);
                }
            }
        }
    }
    let system = Matrix::from_rows(eqs, unknowns);
    let k = kernel_basis(&system);
    (0..k.dim())
        .map(|j| {
            let v = k.basis().col(j);
            Matrix::new(mb, ma, v)
        })
        .collect()
}

/// Exact check that `ψ` is an isomorphism `a → b`.
pub fn verify_isomorphism(a: &FourModule, b: &FourModule, psi: &Matrix) -> bool {
    a.dim == b.dim
        && psi.rows() == b.dim
        && psi.cols() == a.dim
        && rank(psi) == a.dim
        && (0..4).all(|i| a.sub[i].image_under(psi).same_span(&b.sub[i]))
}

pub fn module_isomorphic(a: &FourModule, b: &FourModule, trials: usize, seed: u64) -> IsoOutcome {
    if a.dim_vector() != b.dim_vector() {
        return IsoOutcome::NotIsomorphic(alloc::format!(
            "dimension vectors differ: {} vs {}",
            a.dim_vector(),
            b.dim_vector()
        ));
    }
    if a.same_spans(b) {
        return IsoOutcome::Isomorphic(Matrix::identity(a.dim));
    }
    if a.lattice_invariants() != b.lattice_invariants() {
        return IsoOutcome::NotIsomorphic("subspace-lattice dimensions differ".into());
    }
    let hom = hom_space(a, b);
    if hom.is_empty() {
        return IsoOutcome::NotIsomorphic("Hom(a, b) = 0".into());
    }
    for t in 0..trials {
        let mut s = Stream::new(seed, t as u64);
        let mut psi = Matrix::zeros(b.dim, a.dim);
        for h in &hom {
            let c = s.int_in(-50, 50);
            if c != 0 {
                psi = psi.add(&h.scale(&rat(c)));
            }
        }
        if verify_isomorphism(a, b, &psi) {
            return IsoOutcome::Isomorphic(psi);
        }
    }
    // isomorphic modules have dim Hom(a,b) = dim End(a) = dim End(b)
    let ea = hom_space(a, a).len();
    let eb = hom_space(b, b).len();
    if ea != hom.len() || eb != hom.len() {
        return IsoOutcome::NotIsomorphic(alloc::format!(
            "dim Hom(a,b) = {}, dim End(a) = {ea}, dim End(b) = {eb}",
            hom.len()
        ));
    }
    IsoOutcome::Inconclusive { trials }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Subspace;

    #[test]
    fn hom_of_line_modules() {
        // M = ℚ², M₀ = e₁, M₁ = e₂, M₂ = e₁+e₂, M₃ = 0; End is the scalars.
        let col = |a, b| Matrix::from_i64(&[&[a], &[b]]);
        let m = FourModule::from_spans(2, [col(1, 0), col(0, 1), col(1, 1), Matrix::zeros(2, 0)]).unwrap();
        assert_eq!(hom_space(&m, &m).len(), 1);
        let full = FourModule { dim: 2, sub: core::array::from_fn(|_| Subspace::full(2)) };
        assert_eq!(hom_space(&full, &full).len(), 4);
    }

    #[test]
    fn swapped_basis_is_isomorphic() {
        let col = |a, b| Matrix::from_i64(&[&[a], &[b]]);
        let a = FourModule::from_spans(2, [col(1, 0), col(0, 1), col(1, 1), col(1, 2)]).unwrap();
        let swap = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        let b = a.transform(&swap);
        let out = module_isomorphic(&a, &b, 32, 0);
        assert!(verify_isomorphism(&a, &b, out.certificate().unwrap()));
    }

    #[test]
    fn different_cross_ratio_not_isomorphic() {
        let col = |a, b| Matrix::from_i64(&[&[a], &[b]]);
        let a = FourModule::from_spans(2, [col(1, 0), col(0, 1), col(1, 1), col(1, 2)]).unwrap();
        let b = FourModule::from_spans(2, [col(1, 0), col(0, 1), col(1, 1), col(1, 3)]).unwrap();
        assert!(matches!(module_isomorphic(&a, &b, 8, 0), IsoOutcome::NotIsomorphic(_)));
    }
}
