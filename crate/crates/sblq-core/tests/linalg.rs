use proptest::prelude::*;
use sblq_core::linalg::{
    det, invariant_factors, minimal_polynomial, rank, rank_power_sequence, ratio, subspace_intersect, subspace_sum,
    Matrix, Poly, Rational, Subspace,
};

fn entry() -> impl Strategy<Value = Rational> {
    // zeros are over-represented so rank-deficient matrices are common
    prop_oneof![Just(0i64), -4i64..=4].prop_flat_map(|n| (1i64..=3).prop_map(move |d| ratio(n, d)))
}

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(|(r, c)| proptest::collection::vec(entry(), r * c).prop_map(move |v| Matrix::new(r, c, v)))
}

fn square(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max).prop_flat_map(|n| proptest::collection::vec(entry(), n * n).prop_map(move |v| Matrix::new(n, n, v)))
}

/// Low-rank square matrices (`B·C` with a thin middle) so Jordan structure is nontrivial.
fn structured_square(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(|(n, k)| {
        let k = k.min(n);
        (proptest::collection::vec(entry(), n * k), proptest::collection::vec(entry(), k * n))
            .prop_map(move |(a, b)| Matrix::new(n, k, a).mul(&Matrix::new(k, n, b)))
    })
}

fn subspace_pair(max_ambient: usize) -> impl Strategy<Value = (Subspace, Subspace)> {
    (1..=max_ambient, 0..=max_ambient, 0..=max_ambient).prop_flat_map(|(n, a, b)| {
        let a = a.min(n);
        let b = b.min(n);
        (proptest::collection::vec(entry(), n * a), proptest::collection::vec(entry(), n * b)).prop_map(move |(x, y)| {
            (Subspace::span(&Matrix::new(n, a, x)), Subspace::span(&Matrix::new(n, b, y)))
        })
    })
}

/// `det(xI − m)` at a rational point, straight from the determinant.
fn char_at(m: &Matrix, x: &Rational) -> Rational {
    det(&Matrix::identity(m.rows()).scale(x).sub(m))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn rank_of_transpose(m in matrix(8, 8)) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn rank_is_bounded_and_subadditive(a in matrix(6, 6), b in matrix(6, 6)) {
        prop_assert!(rank(&a) <= a.rows().min(a.cols()));
        if a.rows() == b.rows() && a.cols() == b.cols() {
            prop_assert!(rank(&a.add(&b)) <= rank(&a) + rank(&b));
        }
    }

    #[test]
    fn grassmann_formula((u, v) in subspace_pair(7)) {
        let i = subspace_intersect(&u, &v).unwrap();
        let s = subspace_sum(&u, &v).unwrap();
        prop_assert_eq!(i.dim() + s.dim(), u.dim() + v.dim());
        prop_assert!(u.contains(&i) && v.contains(&i));
        prop_assert!(s.contains(&u) && s.contains(&v));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn minimal_polynomial_annihilates(m in prop_oneof![square(5), structured_square(5)]) {
        let p = minimal_polynomial(&m);
        prop_assert!(p.eval_matrix(&m).is_zero());
        prop_assert_eq!(p.lead(), ratio(1, 1));
        // minimality: I, M, …, M^{deg−1} are linearly independent
        let deg = p.degree().unwrap();
        prop_assert!(deg <= m.rows());
        let n2 = m.rows() * m.rows();
        let mut powers = Matrix::zeros(n2, 0);
        for k in 0..deg {
            powers = powers.hstack(&Matrix::new(n2, 1, m.pow(k).data().to_vec()));
        }
        prop_assert_eq!(rank(&powers), deg);
    }

    #[test]
    fn invariant_factors_multiply_to_charpoly(m in prop_oneof![square(5), structured_square(5)]) {
        let fs = invariant_factors(&m);
        let prod = fs.iter().fold(Poly::one(), |acc, f| acc.mul(f));
        prop_assert_eq!(prod.degree(), Some(m.rows()));
        for k in -3..=3 {
            let x = ratio(k, 2);
            prop_assert_eq!(prod.eval(&x), char_at(&m, &x));
        }
        for w in fs.windows(2) {
            prop_assert!(w[0].divides(&w[1]));
        }
        prop_assert_eq!(fs.last().cloned(), Some(minimal_polynomial(&m)));
    }

    #[test]
    fn rank_power_differences_are_nonincreasing(m in prop_oneof![square(6), structured_square(6)], l in -2i64..=2) {
        let r = rank_power_sequence(&m, &ratio(l, 1), m.rows() + 1);
        let d: Vec<usize> = r.windows(2).map(|w| w[0] - w[1]).collect();
        for w in d.windows(2) {
            prop_assert!(w[1] <= w[0], "{r:?}");
        }
    }
}
