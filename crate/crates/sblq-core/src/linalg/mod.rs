//! Exact rational linear algebra and univariate polynomials over ℚ.
//!
//! Rank and kernel decisions never touch floating point: every elimination
//! runs on integer rows (denominators cleared per row) with either Bareiss
//! exact division or content reduction.

mod elim;
mod matrix;
mod poly;
mod smith;
mod sturm;
mod subspace;

pub use elim::{
    det, image_basis, inverse, kernel_basis, minimal_polynomial, rank, rank_power_sequence, rref,
    solve_right, Rref,
};
pub use matrix::Matrix;
pub use poly::Poly;
pub use smith::invariant_factors;
pub use sturm::{sturm_real_roots, RootInterval};
pub use subspace::{is_direct_complement, subspace_intersect, subspace_sum, Subspace};

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}

/// Nearest `f64` to a rational; display and numerics only.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() && d != 0.0 => n / d,
        _ => {
            // huge numerator/denominator: scale both down by the same power of two
            let nb = r.numer().bits() as i64;
            let db = r.denom().bits() as i64;
            let shift = (nb.max(db) - 1000).max(0) as usize;
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}
