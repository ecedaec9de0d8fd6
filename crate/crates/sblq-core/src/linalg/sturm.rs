use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::{rat, Poly, Rational};
use crate::Error;

/// Half-open isolating interval `(lo, hi]` containing exactly one real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = alloc::vec![p.clone(), p.derivative()];
    while !chain[chain.len() - 1].is_zero() {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    chain.retain(|q| !q.is_zero());
    chain
}

fn sign_changes(chain: &[Poly], x: &Rational) -> usize {
    let mut changes = 0;
    let mut last = 0i8;
    for q in chain {
        let v = q.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Isolating intervals of width ≤ `precision`, one per distinct real root, ascending.
pub fn sturm_real_roots(p: &Poly, precision: &Rational) -> Result<Vec<RootInterval>, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    assert!(precision.is_positive(), "precision must be positive");
    let sq = p.squarefree_part();
    if sq.is_constant() {
        return Ok(Vec::new());
    }
    let chain = sturm_chain(&sq);
    // Cauchy bound: every root satisfies |x| < 1 + max |a_i / a_n|
    let lead = sq.lead();
    let mut bound = Rational::zero();
    for a in &sq.coeffs()[..sq.coeffs().len() - 1] {
        let r = (a / &lead).abs();
        if r > bound {
            bound = r;
        }
    }
    bound += Rational::one();
    let mut out = Vec::new();
    let mut stack = alloc::vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        // Roots in (lo, hi] = V(lo) − V(hi) for a squarefree polynomial.
        let count = sign_changes(&chain, &lo) - sign_changes(&chain, &hi);
        if count == 0 {
            continue;
        }
        if count == 1 && &hi - &lo <= *precision {
            out.push(RootInterval { lo, hi });
            continue;
        }
        let mid = (&lo + &hi) / rat(2);
        // push right first so the left half is processed first
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ratio, to_f64};

    #[test]
    fn sqrt_two() {
        let prec = ratio(1, 1000);
        let iv = sturm_real_roots(&Poly::from_i64(&[-2, 0, 1]), &prec).unwrap();
        assert_eq!(iv.len(), 2);
        // bisection oracle for √2, independent of the Sturm count
        let (mut a, mut b) = (1.0f64, 2.0f64);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if m * m > 2.0 {
                b = m;
            } else {
                a = m;
            }
        }
        let root = a;
        assert!(to_f64(&iv[0].lo) < -root && -root <= to_f64(&iv[0].hi));
        assert!(to_f64(&iv[1].lo) < root && root <= to_f64(&iv[1].hi));
        for r in &iv {
            assert!(&r.hi - &r.lo <= prec);
        }
    }

    #[test]
    fn no_real_roots() {
        assert!(sturm_real_roots(&Poly::from_i64(&[1, 0, 1]), &ratio(1, 10)).unwrap().is_empty());
    }

    #[test]
    fn root_at_zero() {
        let iv = sturm_real_roots(&Poly::from_i64(&[0, 1]), &ratio(1, 10)).unwrap();
        assert_eq!(iv.len(), 1);
        assert!(iv[0].lo < rat(0) && rat(0) <= iv[0].hi);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(sturm_real_roots(&Poly::zero(), &ratio(1, 10)), Err(Error::ZeroPolynomial));
    }
}
