//! Hölder normal form and the Kronecker structure of the resulting pencil.
//!
//! A module with `M = M₀ ⊕ M_i` for `i = 1, 2, 3` is, in the basis `[B₀ | B₁]`,
//! `M₀ = [I; 0]`, `M₁ = [0; I]`, `M_i = [A_i; I]` (`i = 2, 3`) with `A_i` of size
//! `a × b`. Simultaneous equivalence `(P A₂ Q, P A₃ Q)` is module isomorphism, so the
//! summands are read off the Kronecker form of the pencil `A₃ − λA₂`:
//!
//! | pencil block                       | summand   |
//! |------------------------------------|-----------|
//! | tall `(n+1) × n`, no finite/∞ eigenvalues | `C_n`   |
//! | wide `n × (n+1)`                   | `T_n`     |
//! | Jordan block at 0 / 1 / ∞          | `J⁽²⁾ / J⁽¹⁾ / J⁽³⁾` |
//! | regular part, other eigenvalues    | `N` (one per invariant factor) |

use alloc::vec::Vec;

use num_traits::Zero;

use crate::linalg::{
    invariant_factors, inverse, kernel_basis, rank, rank_power_sequence, rat, Matrix, Poly, Rational, Subspace,
};
use crate::linalg::{det, is_direct_complement};
use crate::module::{datum_to_module, Datum, FourModule};
use crate::tables::{Family, FamilyTag};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilForm {
    /// `dim M₀ = dim H₀`.
    pub a: usize,
    /// `dim M₁ = dim ker Π₀`.
    pub b: usize,
    pub a2: Matrix,
    pub a3: Matrix,
    /// `ψ` with `ψ M = pencil_module(a, b, A₂, A₃)` slot by slot.
    pub base_change: Matrix,
}

/// `M₀ = [I; 0]`, `M₁ = [0; I]`, `M₂ = [A₂; I]`, `M₃ = [A₃; I]` in `ℚ^{a+b}`.
pub fn pencil_module(a: usize, b: usize, a2: &Matrix, a3: &Matrix) -> FourModule {
    let top = Matrix::identity(a).vstack(&Matrix::zeros(b, a));
    let bot = Matrix::zeros(a, b).vstack(&Matrix::identity(b));
    let m2 = a2.vstack(&Matrix::identity(b));
    let m3 = a3.vstack(&Matrix::identity(b));
    FourModule::from_bases(a + b, [top, bot, m2, m3]).expect("normal form bases have full rank")
}

/// The pencil of a module of Hölder type, `None` if some `M₀ ⊕ M_i ≠ M`.
pub fn holder_normal_form_module(m: &FourModule) -> Option<PencilForm> {
    let a = m.sub[0].dim();
    let b = m.dim - a;
    if (1..4).any(|i| !is_direct_complement(&m.sub[0], &m.sub[i])) {
        return None;
    }
    let frame = m.sub[0].basis().hstack(m.sub[1].basis());
    let psi = inverse(&frame).expect("M₀ ⊕ M₁ = M");
    let pencil_of = |i: usize| {
        let c = psi.mul(m.sub[i].basis());
        let x = c.submatrix(0, 0, a, b);
        let y = c.submatrix(a, 0, b, b);
        x.mul(&inverse(&y).expect("M₀ ⊕ M_i = M makes the lower block invertible"))
    };
    let (a2, a3) = (pencil_of(2), pencil_of(3));
    let form = PencilForm { a, b, a2, a3, base_change: psi };
    debug_assert!(reconstructs(m, &form));
    Some(form)
}

/// Datum-side entry point: the pencil of `M_H`.
pub fn holder_normal_form(d: &Datum) -> Option<PencilForm> {
    holder_normal_form_module(&datum_to_module(d))
}

/// The reconstruction invariant: `ψ M` equals the normal-form module span by span.
pub fn reconstructs(m: &FourModule, p: &PencilForm) -> bool {
    m.transform(&p.base_change).same_spans(&pencil_module(p.a, p.b, &p.a2, &p.a3))
}

/// Kronecker blocks. Index names follow the datum-side (transposed) pencil.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PencilBlock {
    /// `(n+1) × n` block, summand `C_n`.
    MinimalColumnIndex(usize),
    /// `n × (n+1)` block, summand `T_n`.
    MinimalRowIndex(usize),
    JordanAt0(usize),
    JordanAt1(usize),
    JordanAtInfinity(usize),
    /// Regular block with `X` the companion matrix of this (monic) invariant factor.
    Regular(Poly),
}

impl PencilBlock {
    /// `(rows, cols)` of the block.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            PencilBlock::MinimalColumnIndex(n) => (n + 1, *n),
            PencilBlock::MinimalRowIndex(n) => (*n, n + 1),
            PencilBlock::JordanAt0(n) | PencilBlock::JordanAt1(n) | PencilBlock::JordanAtInfinity(n) => (*n, *n),
            PencilBlock::Regular(p) => {
                let d = p.degree().unwrap_or(0);
                (d, d)
            }
        }
    }

    pub fn tag(&self) -> FamilyTag {
        match self {
            PencilBlock::MinimalColumnIndex(n) => FamilyTag::new(Family::C, *n),
            PencilBlock::MinimalRowIndex(n) => FamilyTag::new(Family::T, *n),
            PencilBlock::JordanAt0(n) => FamilyTag::new(Family::J2, *n),
            PencilBlock::JordanAt1(n) => FamilyTag::new(Family::J1, *n),
            PencilBlock::JordanAtInfinity(n) => FamilyTag::new(Family::J3, *n),
            PencilBlock::Regular(p) => FamilyTag::regular(Family::N, p.clone()),
        }
    }
}

fn shifted(a2: &Matrix, a3: &Matrix, lambda: i64) -> Matrix {
    a3.sub(&a2.scale(&rat(lambda)))
}

/// Rank of `A₃ − λA₂` over ℚ(λ): the pencil drops rank at no more than `min(a, b)`
/// points, so the maximum over `min(a, b) + 1` integers is the generic rank.
pub fn normal_rank(a2: &Matrix, a3: &Matrix) -> usize {
    let k = a2.rows().min(a2.cols()) as i64;
    (0..=k).map(|l| rank(&shifted(a2, a3, l))).max().unwrap_or(0)
}

/// `W_k`: block rows `0..=k+1`, block columns `0..=k`, `A₃` on the diagonal and `−A₂`
/// below it. Its null vectors are the coefficient stacks of polynomial null vectors
/// of degree ≤ k.
fn toeplitz_w(a2: &Matrix, a3: &Matrix, k: usize) -> Matrix {
    let (a, b) = (a2.rows(), a2.cols());
    let mut w = Matrix::zeros((k + 2) * a, (k + 1) * b);
    let neg = a2.neg();
    for j in 0..=k {
        w.set_block(j * a, j * b, a3);
        w.set_block((j + 1) * a, j * b, &neg);
    }
    w
}

/// Minimal degrees of a polynomial basis of the right null space, ascending.
/// `z_k = dim null W_k` satisfies `z_k − 2z_{k−1} + z_{k−2} = #{indices = k}`.
pub fn right_minimal_indices(a2: &Matrix, a3: &Matrix) -> Vec<usize> {
    let b = a2.cols();
    let total = b - normal_rank(a2, a3);
    let mut out = Vec::with_capacity(total);
    let (mut prev_z, mut prev_dz) = (0usize, 0usize);
    let mut k = 0;
    while out.len() < total {
        assert!(k <= b, "minimal indices are bounded by the number of columns");
        let w = toeplitz_w(a2, a3, k);
        let z = w.cols() - rank(&w);
        let dz = z - prev_z;
        for _ in 0..dz - prev_dz {
            out.push(k);
        }
        prev_z = z;
        prev_dz = dz;
        k += 1;
    }
    out
}

/// Quotient of the pencil by the sub-pencil carried by the right null vectors:
/// `R` = coefficient span of null vectors up to degree `kmax`, `S = A₂R + A₃R`,
/// induced maps `Φ A_i Z` with `Z` completing `R` and `Φ` annihilating `S`.
fn deflate_right(a2: &Matrix, a3: &Matrix, indices: &[usize]) -> (Matrix, Matrix) {
    if indices.is_empty() {
        return (a2.clone(), a3.clone());
    }
    let (a, b) = (a2.rows(), a2.cols());
    let kmax = *indices.iter().max().expect("nonempty");
    let null = kernel_basis(&toeplitz_w(a2, a3, kmax));
    let nb = null.basis();
    let mut coeffs = Matrix::zeros(b, 0);
    for j in 0..=kmax {
        coeffs = coeffs.hstack(&nb.submatrix(j * b, 0, b, nb.cols()));
    }
    let r = Subspace::span(&coeffs);
    let s = Subspace::span(&a2.mul(r.basis()).hstack(&a3.mul(r.basis())));
    let expect_r: usize = indices.iter().map(|e| e + 1).sum();
    let expect_s: usize = indices.iter().sum();
    assert_eq!((r.dim(), s.dim()), (expect_r, expect_s), "singular part has the wrong size");
    let z = r.complement_basis();
    let phi = s.annihilator();
    debug_assert_eq!(phi.rows(), a - s.dim());
    (phi.mul(a2).mul(&z), phi.mul(a3).mul(&z))
}

fn primes() -> impl Iterator<Item = i64> {
    (2i64..).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Jordan block sizes of `x` at `kappa`, ascending, from the rank staircase.
fn jordan_sizes(x: &Matrix, kappa: &Rational) -> Vec<usize> {
    let n = x.rows();
    let r = rank_power_sequence(x, kappa, n + 1);
    let mut out = Vec::new();
    for s in 1..=n {
        let count = r[s - 1] + r[s + 1] - 2 * r[s];
        out.extend(core::iter::repeat(s).take(count));
    }
    out
}

/// `h(λ) ∝ (λ+μ)^d g(1/(λ+μ))`: the roots `κ` of `g` move to `1/κ − μ`.
fn mobius_back(g: &Poly, mu: &Rational) -> Poly {
    let d = g.degree().expect("nonzero");
    let shift = Poly::new(alloc::vec![mu.clone(), rat(1)]);
    let mut h = Poly::zero();
    for (k, gk) in g.coeffs().iter().enumerate() {
        if !gk.is_zero() {
            h = h.add(&shift.pow(d - k).scale(gk));
        }
    }
    h.monic()
}

/// Exact Kronecker structure of `A₃ − λA₂`, block shapes summing to `(a, b)`.
pub fn kronecker_decompose(p: &PencilForm) -> Vec<PencilBlock> {
    let mut blocks = Vec::new();
    // wide blocks from right null vectors
    let right = right_minimal_indices(&p.a2, &p.a3);
    blocks.extend(right.iter().map(|&e| PencilBlock::MinimalRowIndex(e)));
    let (q2, q3) = deflate_right(&p.a2, &p.a3, &right);
    // tall blocks from left null vectors
    let (t2, t3) = (q2.transpose(), q3.transpose());
    let left = right_minimal_indices(&t2, &t3);
    blocks.extend(left.iter().map(|&e| PencilBlock::MinimalColumnIndex(e)));
    let (l2, l3) = deflate_right(&t2, &t3, &left);
    let (r2, r3) = (l2.transpose(), l3.transpose());
    assert!(r2.is_square(), "regular core must be square");
    let n = r2.rows();
    if n > 0 {
        // λ = −μ is not an eigenvalue; X = (μA₂ + A₃)⁻¹A₂ has eigenvalue κ = 1/(μ+λ), κ = 0 at ∞
        let mu = primes()
            .map(|q| rat(q))
            .find(|mu| !det(&r2.scale(mu).add(&r3)).is_zero())
            .expect("a regular pencil has finitely many eigenvalues");
        let g = r2.scale(&mu).add(&r3);
        let x = inverse(&g).expect("chosen invertible").mul(&r2);
        let k_inf = rat(0);
        let k_zero = rat(1) / &mu;
        let k_one = rat(1) / (&mu + rat(1));
        for s in jordan_sizes(&x, &k_inf) {
            blocks.push(PencilBlock::JordanAtInfinity(s));
        }
        for s in jordan_sizes(&x, &k_zero) {
            blocks.push(PencilBlock::JordanAt0(s));
        }
        for s in jordan_sizes(&x, &k_one) {
            blocks.push(PencilBlock::JordanAt1(s));
        }
        for f in invariant_factors(&x) {
            let mut g = f;
            for root in [&k_inf, &k_zero, &k_one] {
                let m = g.root_multiplicity(root);
                if m > 0 {
                    g = g.exact_div(&Poly::linear_root(root).pow(m));
                }
            }
            if !g.is_constant() {
                blocks.push(PencilBlock::Regular(mobius_back(&g, &mu)));
            }
        }
    }
    blocks.sort();
    let (ra, rb) = blocks.iter().fold((0, 0), |(x, y), blk| {
        let (r, c) = blk.shape();
        (x + r, y + c)
    });
    assert_eq!((ra, rb), (p.a, p.b), "Kronecker blocks must tile the pencil");
    blocks
}

/// The pencil of a single block in the Hölder-family layout.
pub fn block_pencil(b: &PencilBlock) -> (Matrix, Matrix) {
    let tag = b.tag();
    let m = crate::tables::build(&tag).expect("pencil blocks map to valid tags");
    let p = holder_normal_form_module(&m).expect("Hölder families are of Hölder type");
    (p.a2, p.a3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;

    fn form(a2: Matrix, a3: Matrix) -> PencilForm {
        let (a, b) = (a2.rows(), a2.cols());
        PencilForm { a, b, a2, a3, base_change: Matrix::identity(a + b) }
    }

    #[test]
    fn scalar_regular() {
        let p = form(Matrix::from_i64(&[&[1]]), Matrix::new(1, 1, alloc::vec![ratio(1, 3)]));
        let blocks = kronecker_decompose(&p);
        assert_eq!(blocks, alloc::vec![PencilBlock::Regular(Poly::new(alloc::vec![ratio(-1, 3), rat(1)]))]);
    }

    #[test]
    fn jordan_at_zero() {
        let p = form(Matrix::from_i64(&[&[1]]), Matrix::from_i64(&[&[0]]));
        assert_eq!(kronecker_decompose(&p), alloc::vec![PencilBlock::JordanAt0(1)]);
    }

    #[test]
    fn tall_block_is_c1() {
        let p = form(Matrix::from_i64(&[&[0], &[1]]), Matrix::from_i64(&[&[1], &[0]]));
        assert_eq!(kronecker_decompose(&p), alloc::vec![PencilBlock::MinimalColumnIndex(1)]);
    }

    #[test]
    fn empty_shapes() {
        // 1 × 0 is C₀, 0 × 1 is T₀
        assert_eq!(kronecker_decompose(&form(Matrix::zeros(1, 0), Matrix::zeros(1, 0))), alloc::vec![
            PencilBlock::MinimalColumnIndex(0)
        ]);
        assert_eq!(kronecker_decompose(&form(Matrix::zeros(0, 1), Matrix::zeros(0, 1))), alloc::vec![
            PencilBlock::MinimalRowIndex(0)
        ]);
    }

    #[test]
    fn table_two_blocks_round_trip() {
        let blocks = [
            PencilBlock::MinimalColumnIndex(2),
            PencilBlock::MinimalRowIndex(2),
            PencilBlock::JordanAt0(2),
            PencilBlock::JordanAt1(3),
            PencilBlock::JordanAtInfinity(2),
            PencilBlock::Regular(Poly::from_i64(&[2, 0, 1])),
        ];
        for b in &blocks {
            let (a2, a3) = block_pencil(b);
            assert_eq!(kronecker_decompose(&form(a2, a3)), alloc::vec![b.clone()], "{b:?}");
        }
    }
}
