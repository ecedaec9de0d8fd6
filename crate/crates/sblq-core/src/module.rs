//! Singular Brascamp–Lieb data, four-subspace modules and the transpose duality between them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::linalg::{inverse, rank, subspace_intersect, subspace_sum, Matrix, Subspace};
use crate::Error;

/// `(H; H₀..H₃; Π₀..Π₃)` with `pi[i]` the `h_i × dim_h` matrix of `Π_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Datum {
    pub dim_h: usize,
    pub dims: [usize; 4],
    pub pi: [Matrix; 4],
}

/// `(M; M₀..M₃)` with each subspace held by a full-column-rank basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourModule {
    pub dim: usize,
    pub sub: [Subspace; 4],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector {
    pub m: usize,
    pub n: [usize; 4],
}

/// `φ : H → H'` and `φ_i : H_i → H_i'` with `Π_i' φ = φ_i Π_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceMap {
    pub phi: Matrix,
    pub phi_i: [Matrix; 4],
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// `(index, rank)` for every `Π_i` whose rank falls short of `h_i`.
    pub surjectivity_failures: Vec<(usize, usize)>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.surjectivity_failures.is_empty()
    }
}

impl DimVector {
    pub fn add(&self, o: &DimVector) -> DimVector {
        let mut n = self.n;
        for (a, b) in n.iter_mut().zip(o.n) {
            *a += b;
        }
        DimVector { m: self.m + o.m, n }
    }

    pub fn scale(&self, k: usize) -> DimVector {
        DimVector { m: self.m * k, n: self.n.map(|x| x * k) }
    }

    pub fn zero() -> DimVector {
        DimVector { m: 0, n: [0; 4] }
    }
}

impl core::fmt::Display for DimVector {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({};{},{},{},{})", self.m, self.n[0], self.n[1], self.n[2], self.n[3])
    }
}

impl Datum {
    /// Shape-checked constructor.
    pub fn new(dim_h: usize, dims: [usize; 4], pi: [Matrix; 4]) -> Result<Self, Error> {
        for (i, p) in pi.iter().enumerate() {
            if p.rows() != dims[i] || p.cols() != dim_h {
                return Err(Error::Shape(format!(
                    "pi[{i}] is {}x{}, expected {}x{}",
                    p.rows(),
                    p.cols(),
                    dims[i],
                    dim_h
                )));
            }
        }
        Ok(Datum { dim_h, dims, pi })
    }

    pub fn direct_sum(&self, o: &Datum) -> Datum {
        let pi = core::array::from_fn(|i| self.pi[i].block_diag(&o.pi[i]));
        let dims = core::array::from_fn(|i| self.dims[i] + o.dims[i]);
        Datum { dim_h: self.dim_h + o.dim_h, dims, pi }
    }
}

/// Surjectivity per index, plus warnings for vanishing `H_1..H_3`.
pub fn validate_datum(d: &Datum) -> ValidationReport {
    let mut rep = ValidationReport::default();
    for i in 0..4 {
        let r = rank(&d.pi[i]);
        if r != d.dims[i] {
            rep.surjectivity_failures.push((i, r));
        }
    }
    for i in 1..4 {
        if d.dims[i] == 0 {
            rep.warnings.push(format!("H_{i} = {{0}}: outside the hypotheses of the classification"));
        }
    }
    rep
}

impl FourModule {
    /// Build from four spanning matrices (reduced to bases).
    pub fn from_spans(dim: usize, spans: [Matrix; 4]) -> Result<Self, Error> {
        for s in &spans {
            if s.rows() != dim {
                return Err(Error::AmbientMismatch { left: dim, right: s.rows() });
            }
        }
        Ok(FourModule { dim, sub: spans.map(|s| Subspace::span(&s)) })
    }

    /// Build from four bases, checking full column rank.
    pub fn from_bases(dim: usize, bases: [Matrix; 4]) -> Result<Self, Error> {
        let mut subs = Vec::with_capacity(4);
        for b in bases {
            if b.rows() != dim {
                return Err(Error::AmbientMismatch { left: dim, right: b.rows() });
            }
            subs.push(Subspace::from_basis(b)?);
        }
        let sub: [Subspace; 4] = subs.try_into().expect("four subspaces");
        Ok(FourModule { dim, sub })
    }

    pub fn zero() -> Self {
        FourModule { dim: 0, sub: core::array::from_fn(|_| Subspace::zero(0)) }
    }

    pub fn dim_vector(&self) -> DimVector {
        DimVector { m: self.dim, n: core::array::from_fn(|i| self.sub[i].dim()) }
    }

    /// Image under an invertible `ψ` (the module `ψ M`).
    pub fn transform(&self, psi: &Matrix) -> FourModule {
        FourModule { dim: self.dim, sub: core::array::from_fn(|i| self.sub[i].image_under(psi)) }
    }

    /// Same spans slot by slot.
    pub fn same_spans(&self, o: &FourModule) -> bool {
        self.dim == o.dim && (0..4).all(|i| self.sub[i].same_span(&o.sub[i]))
    }

    /// Reorder slots: slot `i` of the result is slot `perm[i]` of `self`.
    pub fn permute(&self, perm: [usize; 4]) -> FourModule {
        FourModule { dim: self.dim, sub: core::array::from_fn(|i| self.sub[perm[i]].clone()) }
    }

    /// Dimensions of sums and intersections in a fixed list of lattice words.
    /// Every entry is additive under direct sums and invariant under isomorphism.
    pub fn lattice_invariants(&self) -> Vec<usize> {
        let s = &self.sub;
        let sum = |a: &Subspace, b: &Subspace| subspace_sum(a, b).expect("same ambient");
        let cap = |a: &Subspace, b: &Subspace| subspace_intersect(a, b).expect("same ambient");
        let mut out = Vec::new();
        let subsets: Vec<Vec<usize>> = (1u8..16)
            .filter(|m| m.count_ones() >= 2)
            .map(|m| (0..4).filter(|i| m & (1 << i) != 0).collect())
            .collect();
        for set in &subsets {
            let mut acc_sum = s[set[0]].clone();
            let mut acc_cap = s[set[0]].clone();
            for &i in &set[1..] {
                acc_sum = sum(&acc_sum, &s[i]);
                acc_cap = cap(&acc_cap, &s[i]);
            }
            out.push(acc_sum.dim());
            out.push(acc_cap.dim());
        }
        for i in 0..4 {
            for j in 0..4 {
                for k in j + 1..4 {
                    if i != j && i != k {
                        out.push(cap(&s[i], &sum(&s[j], &s[k])).dim());
                        out.push(sum(&s[i], &cap(&s[j], &s[k])).dim());
                    }
                }
            }
        }
        for (a, b, c, d) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
            out.push(cap(&sum(&s[a], &s[b]), &sum(&s[c], &s[d])).dim());
            out.push(sum(&cap(&s[a], &s[b]), &cap(&s[c], &s[d])).dim());
        }
        out
    }
}

/// `M_H`: `M = ℚ^{dim H}`, `M_i` the column span of `Π_iᵀ`.
pub fn datum_to_module(d: &Datum) -> FourModule {
    FourModule { dim: d.dim_h, sub: core::array::from_fn(|i| Subspace::span(&d.pi[i].transpose())) }
}

/// `H_M`: `Π_i = B_iᵀ` for the stored basis `B_i` of `M_i`.
pub fn module_to_datum(m: &FourModule) -> Datum {
    Datum {
        dim_h: m.dim,
        dims: core::array::from_fn(|i| m.sub[i].dim()),
        pi: core::array::from_fn(|i| m.sub[i].basis().transpose()),
    }
}

/// `Π_i' = φ_i Π_i φ⁻¹`.
pub fn apply_equivalence(d: &Datum, e: &EquivalenceMap) -> Result<Datum, Error> {
    if !e.phi.is_square() || e.phi.rows() != d.dim_h {
        return Err(Error::Shape("phi must be square of size dim_H".into()));
    }
    let phi_inv = inverse(&e.phi).ok_or(Error::Singular("phi"))?;
    let mut pi = Vec::with_capacity(4);
    for i in 0..4 {
        let f = &e.phi_i[i];
        if !f.is_square() || f.rows() != d.dims[i] {
            return Err(Error::Shape(format!("phi_{i} must be square of size h_{i}")));
        }
        if inverse(f).is_none() {
            return Err(Error::Singular("phi_i"));
        }
        pi.push(f.mul(&d.pi[i]).mul(&phi_inv));
    }
    Ok(Datum { dim_h: d.dim_h, dims: d.dims, pi: pi.try_into().expect("four maps") })
}

/// The module isomorphism induced by an equivalence: `M_{H'} = φ⁻ᵀ M_H`.
pub fn equivalence_certificate(e: &EquivalenceMap) -> Option<Matrix> {
    inverse(&e.phi).map(|m| m.transpose())
}

pub fn direct_sum(a: &FourModule, b: &FourModule) -> FourModule {
    FourModule {
        dim: a.dim + b.dim,
        sub: core::array::from_fn(|i| {
            Subspace::from_basis(a.sub[i].basis().block_diag(b.sub[i].basis()))
                .expect("block diagonal of bases has full column rank")
        }),
    }
}

pub fn direct_sum_all<'a>(parts: impl IntoIterator<Item = &'a FourModule>) -> FourModule {
    parts.into_iter().fold(FourModule::zero(), |acc, m| direct_sum(&acc, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn bht(alpha: i64) -> Datum {
        Datum::new(
            2,
            [1, 1, 1, 1],
            [
                Matrix::from_i64(&[&[0, 1]]),
                Matrix::from_i64(&[&[1, 0]]),
                Matrix::from_i64(&[&[1, 1]]),
                Matrix::from_i64(&[&[1, alpha]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        assert!(validate_datum(&bht(3)).is_valid());
        let mut d = bht(3);
        d.pi[2] = Matrix::zeros(1, 2);
        assert_eq!(validate_datum(&d).surjectivity_failures, alloc::vec![(2, 0)]);
        let mut d = bht(3);
        d.dims[3] = 0;
        d.pi[3] = Matrix::zeros(0, 2);
        let rep = validate_datum(&d);
        assert!(rep.is_valid() && rep.warnings.len() == 1);
    }

    #[test]
    fn bht_module_spans() {
        let m = datum_to_module(&bht(3));
        let col = |a, b| Subspace::span(&Matrix::from_i64(&[&[a], &[b]]));
        assert!(m.sub[0].same_span(&col(0, 1)));
        assert!(m.sub[1].same_span(&col(1, 0)));
        assert!(m.sub[2].same_span(&col(1, 1)));
        assert!(m.sub[3].same_span(&col(1, 3)));
    }

    #[test]
    fn identity_datum() {
        let d = Datum::new(
            2,
            [2, 0, 0, 0],
            [Matrix::identity(2), Matrix::zeros(0, 2), Matrix::zeros(0, 2), Matrix::zeros(0, 2)],
        )
        .unwrap();
        let m = datum_to_module(&d);
        assert_eq!(m.dim_vector(), DimVector { m: 2, n: [2, 0, 0, 0] });
    }

    #[test]
    fn roundtrip_spans() {
        let m = datum_to_module(&bht(5));
        assert!(datum_to_module(&module_to_datum(&m)).same_spans(&m));
    }

    #[test]
    fn zero_subspace_gives_empty_matrix() {
        let d = module_to_datum(&FourModule::from_spans(1, core::array::from_fn(|_| Matrix::zeros(1, 0))).unwrap());
        assert_eq!((d.pi[2].rows(), d.pi[2].cols()), (0, 1));
    }

    #[test]
    fn identity_equivalence_is_noop() {
        let d = bht(2);
        let e = EquivalenceMap { phi: Matrix::identity(2), phi_i: core::array::from_fn(|_| Matrix::identity(1)) };
        assert_eq!(apply_equivalence(&d, &e).unwrap(), d);
    }

    #[test]
    fn scaling_equivalence_keeps_spans() {
        let d = bht(2);
        let e = EquivalenceMap { phi: Matrix::identity(2).scale(&rat(2)), phi_i: core::array::from_fn(|_| Matrix::identity(1)) };
        let d2 = apply_equivalence(&d, &e).unwrap();
        assert_eq!(d2.pi[1], Matrix::new(1, 2, alloc::vec![crate::linalg::ratio(1, 2), rat(0)]));
        assert!(datum_to_module(&d2).same_spans(&datum_to_module(&d)));
    }

    #[test]
    fn singular_equivalence_rejected() {
        let e = EquivalenceMap { phi: Matrix::zeros(2, 2), phi_i: core::array::from_fn(|_| Matrix::identity(1)) };
        assert_eq!(apply_equivalence(&bht(2), &e), Err(Error::Singular("phi")));
    }

    #[test]
    fn direct_sum_dims() {
        let m = datum_to_module(&bht(3));
        assert_eq!(direct_sum(&m, &m).dim_vector(), DimVector { m: 4, n: [2, 2, 2, 2] });
        assert!(direct_sum(&m, &FourModule::zero()).same_spans(&m));
    }
}
