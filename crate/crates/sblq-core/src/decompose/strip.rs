//! Functorial splittings: the `C₀` part, and the Hölder core of a module.

use crate::linalg::{subspace_intersect, subspace_sum, Matrix, Subspace};
use crate::module::FourModule;

fn sum(a: &Subspace, b: &Subspace) -> Subspace {
    subspace_sum(a, b).expect("same ambient")
}

fn cap(a: &Subspace, b: &Subspace) -> Subspace {
    subspace_intersect(a, b).expect("same ambient")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C0Split {
    pub rest: FourModule,
    pub k: usize,
    /// `ψ` mapping `C₀^{⊕k} ⊕ rest` (in that order) onto the input module.
    pub certificate: Matrix,
}

/// Restrict to a subspace `f` holding every `M_i ∩ f`, in coordinates of `f`'s basis.
pub fn restrict(m: &FourModule, f: &Subspace) -> FourModule {
    let sub = core::array::from_fn(|i| {
        let x = cap(&m.sub[i], f);
        let c = f.coordinates(x.basis()).expect("intersection lies in f");
        Subspace::from_basis(c).expect("coordinates of a basis are independent")
    });
    FourModule { dim: f.dim(), sub }
}

/// Quotient by a subspace `g`: slots `(M_i + g)/g` in `ℚ^{m − dim g}`.
pub fn quotient(m: &FourModule, g: &Subspace) -> FourModule {
    let q = g.annihilator();
    FourModule { dim: q.rows(), sub: core::array::from_fn(|i| m.sub[i].image_under(&q)) }
}

/// Split `M = C₀^{⊕k} ⊕ M'` with `k = dim(M₀ + S) − dim S`, `S = M₁ + M₂ + M₃`.
///
/// `U ⊆ M₀` completes `M₀ ∩ S` inside `M₀`; `W = S ⊕ C` with `C` completing `M₀ + S`
/// in `M`. Then `M = U ⊕ W`, `M₀ = U ⊕ (M₀ ∩ W)` and `M_i ⊆ W` for `i ≥ 1`, so
/// `U` carries `k` copies of `C₀`. When `M₀ + S = M` this is `k = dim M − dim S`.
pub fn strip_c0(m: &FourModule) -> C0Split {
    let s = sum(&sum(&m.sub[1], &m.sub[2]), &m.sub[3]);
    let t = sum(&m.sub[0], &s);
    let k = t.dim() - s.dim();
    if k == 0 {
        return C0Split { rest: m.clone(), k: 0, certificate: Matrix::identity(m.dim) };
    }
    let u = cap(&m.sub[0], &s).extension_from(m.sub[0].basis());
    debug_assert_eq!(u.cols(), k);
    let w = Subspace::from_basis(s.basis().hstack(&t.complement_basis())).expect("S ⊕ C is direct");
    let rest = restrict(m, &w);
    C0Split { rest, k, certificate: u.hstack(w.basis()) }
}

/// The functorial subquotient obtained by alternately restricting to
/// `∩_i (M₀ + M_i)` and dividing out `Σ_i (M₀ ∩ M_i)` until both are trivial.
///
/// Both operations fix every summand of Hölder type (where `M₀ ⊕ M_i = M`) and
/// commute with direct sums. On `Y`, `P⁽ⁱ⁾` they return zero and on `Z`, `K⁽ⁱ⁾`,
/// `L`, `B` copies of `C₀`, so after a final `strip_c0` the result is isomorphic to
/// the Hölder part of a direct sum of Hölder-type and non-Hölder modules.
pub fn holder_core(m: &FourModule) -> FourModule {
    let mut cur = m.clone();
    loop {
        let f = (1..4).map(|i| sum(&cur.sub[0], &cur.sub[i])).reduce(|a, b| cap(&a, &b)).expect("three slots");
        let mut changed = false;
        if f.dim() < cur.dim {
            cur = restrict(&cur, &f);
            changed = true;
        }
        let g = (1..4).map(|i| cap(&cur.sub[0], &cur.sub[i])).reduce(|a, b| sum(&a, &b)).expect("three slots");
        if g.dim() > 0 {
            cur = quotient(&cur, &g);
            changed = true;
        }
        if !changed {
            return cur;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::verify_isomorphism;
    use crate::linalg::Poly;
    use crate::module::direct_sum;
    use crate::tables::{build, Family, FamilyTag};

    fn c0() -> FourModule {
        build(&FamilyTag::new(Family::C, 0)).unwrap()
    }

    fn n1() -> FourModule {
        build(&FamilyTag::regular(Family::N, Poly::from_i64(&[-3, 1]))).unwrap()
    }

    #[test]
    fn c0_alone() {
        let s = strip_c0(&c0());
        assert_eq!((s.k, s.rest.dim), (1, 0));
    }

    #[test]
    fn n1_unchanged() {
        let s = strip_c0(&n1());
        assert_eq!(s.k, 0);
        assert!(s.rest.same_spans(&n1()));
    }

    #[test]
    fn c0_plus_n1_certified() {
        let m = direct_sum(&c0(), &n1());
        let s = strip_c0(&m);
        assert_eq!(s.k, 1);
        let rebuilt = direct_sum(&c0(), &s.rest);
        assert!(verify_isomorphism(&rebuilt, &m, &s.certificate));
    }

    #[test]
    fn core_of_nonholder_modules_is_c0_or_zero() {
        for f in [Family::Y, Family::Z, Family::L, Family::B, Family::P2, Family::K1] {
            let core = holder_core(&build(&FamilyTag::fixed(f)).unwrap());
            let s = strip_c0(&core);
            assert_eq!(s.rest.dim, 0, "{f:?}");
        }
    }

    #[test]
    fn core_keeps_holder_part() {
        let t = build(&FamilyTag::new(Family::T, 1)).unwrap();
        let y = build(&FamilyTag::fixed(Family::Y)).unwrap();
        let core = holder_core(&direct_sum(&y, &t));
        assert_eq!(core.dim_vector(), t.dim_vector());
    }
}
