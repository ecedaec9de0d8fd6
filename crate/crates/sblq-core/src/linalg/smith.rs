use alloc::vec::Vec;

use num_traits::One;

use super::{Matrix, Poly};

/// Diagonal of the Smith form of a polynomial matrix over ℚ[t], each entry monic
/// (zero entries stay zero). Divisibility chain d₁ | d₂ | … holds on the nonzero part.
pub fn smith_diagonal(mut a: Vec<Vec<Poly>>) -> Vec<Poly> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    for k in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(k) {
                for (j, p) in row.iter().enumerate().skip(k) {
                    if let Some(d) = p.degree() {
                        if best.is_none_or(|(_, _, bd)| d < bd) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                diag.extend((k..rows.min(cols)).map(|_| Poly::zero()));
                return diag;
            };
            a.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            let mut clean = true;
            let piv = a[k][k].clone();
            for i in k + 1..rows {
                if a[i][k].is_zero() {
                    continue;
                }
                let (q, r) = a[i][k].divrem(&piv);
                for j in k..cols {
                    let t = q.mul(&a[k][j]);
                    a[i][j] = a[i][j].sub(&t);
                }
                if !r.is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..cols {
                if a[k][j].is_zero() {
                    continue;
                }
                let (q, r) = a[k][j].divrem(&piv);
                for row in a.iter_mut().skip(k) {
                    let t = q.mul(&row[k]);
                    row[j] = row[j].sub(&t);
                }
                if !r.is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // pivot row and column are clear; the pivot must divide the remaining block
            let offender = (k + 1..rows)
                .find(|&i| (k + 1..cols).any(|j| !piv.divides(&a[i][j])));
            if let Some(i) = offender {
                for j in k..cols {
                    let s = a[k][j].add(&a[i][j]);
                    a[k][j] = s;
                }
                continue;
            }
            break;
        }
        diag.push(a[k][k].monic());
    }
    diag
}

/// Invariant factors of `tI − m` (the nonconstant Smith diagonal entries), in divisibility order.
pub fn invariant_factors(m: &Matrix) -> Vec<Poly> {
    assert!(m.is_square(), "invariant factors of a non-square matrix");
    let n = m.rows();
    let char_matrix: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut c = alloc::vec![-m[(i, j)].clone()];
                    if i == j {
                        c.push(super::Rational::one());
                    }
                    Poly::new(c)
                })
                .collect()
        })
        .collect();
    smith_diagonal(char_matrix).into_iter().filter(|p| !p.is_constant()).collect()
}
