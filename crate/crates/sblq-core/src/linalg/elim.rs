use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Matrix, Poly, Rational, Subspace};

/// Scale every row by the lcm of its denominators so the row becomes integral.
/// Row scaling changes neither the row space nor the rank.
fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let mut l = BigInt::one();
            for x in row {
                if !x.denom().is_one() {
                    l = l.lcm(x.denom());
                }
            }
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

fn divide_content(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x = &*x / &g;
        }
    }
}

/// Rank by Bareiss fraction-free elimination.
pub fn rank(m: &Matrix) -> usize {
    let mut a = integer_rows(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let f = row[c].clone();
            for j in c..cols {
                let v = &piv * &row[j] - &f * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = piv;
        r += 1;
    }
    r
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan on integer rows with content reduction, normalised to an exact RREF.
pub fn rref(m: &Matrix) -> Rref {
    let mut a = integer_rows(m);
    for row in a.iter_mut() {
        divide_content(row);
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).filter(|&i| !a[i][c].is_zero()).min_by_key(|&i| a[i][c].bits())
        else {
            continue;
        };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        let piv = &pivot_row[c];
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in 0..cols {
                if pivot_row[j].is_zero() {
                    if !row[j].is_zero() {
                        row[j] = piv * &row[j];
                    }
                } else {
                    row[j] = piv * &row[j] - &f * &pivot_row[j];
                }
            }
            divide_content(row);
        }
        pivots.push(c);
        r += 1;
    }
    let mut out = Matrix::zeros(rows, cols);
    for (i, &c) in pivots.iter().enumerate() {
        let piv = a[i][c].clone();
        for j in 0..cols {
            if !a[i][j].is_zero() {
                out[(i, j)] = Rational::new(a[i][j].clone(), piv.clone());
            }
        }
    }
    Rref { matrix: out, pivots }
}

/// Basis of the right null space, one vector per free column.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let Rref { matrix: r, pivots } = rref(m);
    let n = m.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Matrix::zeros(n, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis[(f, k)] = Rational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            let v = &r[(i, f)];
            if !v.is_zero() {
                basis[(pc, k)] = -v;
            }
        }
    }
    Subspace::from_basis_unchecked(basis)
}

/// Column-span basis made of the pivot columns of `m`.
pub fn image_basis(m: &Matrix) -> Subspace {
    let piv = rref(m).pivots;
    Subspace::from_basis_unchecked(m.select_cols(&piv))
}

/// Some `X` with `a X = b`, free variables set to zero; `None` if inconsistent.
pub fn solve_right(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows(), b.rows(), "solve_right needs a.rows == b.rows");
    let n = a.cols();
    let Rref { matrix: r, pivots } = rref(&a.hstack(b));
    if pivots.iter().any(|&c| c >= n) {
        return None;
    }
    let mut x = Matrix::zeros(n, b.cols());
    for (i, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x[(pc, j)] = r[(i, n + j)].clone();
        }
    }
    Some(x)
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let Rref { matrix: r, pivots } = rref(&m.hstack(&Matrix::identity(n)));
    if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
        return None;
    }
    Some(r.submatrix(0, n, n, n))
}

/// Determinant via Bareiss on integer rows, corrected for the row scalings.
pub fn det(m: &Matrix) -> Rational {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = Rational::one();
    for i in 0..n {
        let mut l = BigInt::one();
        for x in m.row(i) {
            l = l.lcm(x.denom());
        }
        scale *= Rational::from_integer(l);
    }
    let mut a = integer_rows(m);
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(c, p);
            sign = -sign;
        }
        let (top, rest) = a.split_at_mut(c + 1);
        let pivot_row = &top[c];
        let piv = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let f = row[c].clone();
            for j in c..n {
                let v = &piv * &row[j] - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = piv;
    }
    Rational::from_integer(sign * &a[n - 1][n - 1]) / scale
}

/// Monic minimal polynomial from the first linear dependency among vec(I), vec(M), vec(M²), ….
pub fn minimal_polynomial(m: &Matrix) -> Poly {
    assert!(m.is_square(), "minimal polynomial of a non-square matrix");
    let n = m.rows();
    let vec_of = |p: &Matrix| Matrix::column_vector(p.data().to_vec());
    let mut power = Matrix::identity(n);
    let mut krylov = vec_of(&power);
    for k in 1..=n {
        power = power.mul(m);
        let target = vec_of(&power);
        if let Some(c) = solve_right(&krylov, &target) {
            let mut coeffs: Vec<Rational> = (0..k).map(|j| -c[(j, 0)].clone()).collect();
            coeffs.push(Rational::one());
            return Poly::new(coeffs);
        }
        krylov = krylov.hstack(&target);
    }
    unreachable!("Cayley–Hamilton bounds the degree by n")
}

/// Ranks of `(m − λI)^k` for `k = 0..=kmax`.
pub fn rank_power_sequence(m: &Matrix, lambda: &Rational, kmax: usize) -> Vec<usize> {
    assert!(m.is_square(), "rank sequence of a non-square matrix");
    let shifted = m.shift(lambda);
    let mut out = Vec::with_capacity(kmax + 1);
    let mut p = Matrix::identity(m.rows());
    out.push(m.rows());
    for _ in 0..kmax {
        p = p.mul(&shifted);
        out.push(rank(&p));
    }
    out
}
