//! Canonical data (classical forms written out, the rest via `module_to_datum`) and
//! seeded generators for random direct sums and random equivalences.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::linalg::{det, is_zero, rat, Matrix, Poly, Rational};
use crate::module::{direct_sum_all, module_to_datum, Datum, EquivalenceMap, FourModule};
use crate::rng::Stream;
use crate::tables::{build, dim_vector, Family, FamilyTag};
use crate::Error;

pub const FIXTURE_NAMES: [&str; 10] = [
    "bht",
    "coifman_meyer",
    "twisted_paraproduct",
    "j2",
    "n1_j1",
    "three_twisted",
    "triangular_hilbert",
    "young",
    "loomis_whitney",
    "bilinear_holder_pk",
];

fn rows(r: &[&[i64]]) -> Matrix {
    Matrix::from_i64(r)
}

/// `∫∫ f₁(x) f₂(x+t) f₃(x+αt) K(t) dt dx` on `(x, t)`.
pub fn bht(alpha: &Rational) -> Result<Datum, Error> {
    if is_zero(alpha) || *alpha == rat(1) {
        return Err(Error::Malformed("bht needs alpha != 0, 1".into()));
    }
    let p3 = Matrix::from_rows(alloc::vec![alloc::vec![rat(1), alpha.clone()]], 2);
    Datum::new(2, [1, 1, 1, 1], [rows(&[&[0, 1]]), rows(&[&[1, 0]]), rows(&[&[1, 1]]), p3])
}

/// `∫ f₁(x) f₂(x+y) f₃(x+z) K(y, z)` with `x, y, z ∈ ℝⁿ`.
pub fn coifman_meyer(n: usize) -> Result<Datum, Error> {
    if n == 0 {
        return Err(Error::Malformed("coifman_meyer needs n >= 1".into()));
    }
    let i = Matrix::identity(n);
    let z = Matrix::zeros(n, n);
    let cat = |a: &Matrix, b: &Matrix, c: &Matrix| a.hstack(b).hstack(c);
    let p0 = cat(&z, &i, &z).vstack(&cat(&z, &z, &i));
    Datum::new(
        3 * n,
        [2 * n, n, n, n],
        [p0, cat(&i, &z, &z), cat(&i, &i, &z), cat(&i, &z, &i)],
    )
}

/// `∫ f₁(x, y) f₂(x+s, y) f₃(x, y+t) K(s, t)` on `(x, y, s, t)`.
pub fn twisted_paraproduct() -> Datum {
    Datum::new(
        4,
        [2, 2, 2, 2],
        [
            rows(&[&[0, 0, 1, 0], &[0, 0, 0, 1]]),
            rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]),
            rows(&[&[1, 0, 1, 0], &[0, 1, 0, 0]]),
            rows(&[&[1, 0, 0, 0], &[0, 1, 0, 1]]),
        ],
    )
    .expect("shapes")
}

/// `∫ f₁(x, y) f₂(x+t, y) f₃(x, y+t) K(t)` on `(x, y, t)`.
pub fn triangular_hilbert() -> Datum {
    Datum::new(
        3,
        [1, 2, 2, 2],
        [
            rows(&[&[0, 0, 1]]),
            rows(&[&[1, 0, 0], &[0, 1, 0]]),
            rows(&[&[1, 0, 1], &[0, 1, 0]]),
            rows(&[&[1, 0, 0], &[0, 1, 1]]),
        ],
    )
    .expect("shapes")
}

/// Datum of a direct sum of table modules.
pub fn from_tags(tags: &[FamilyTag]) -> Result<Datum, Error> {
    let mods = tags.iter().map(build).collect::<Result<Vec<FourModule>, Error>>()?;
    Ok(module_to_datum(&direct_sum_all(mods.iter())))
}

/// The summands each table-built fixture is made of.
pub fn fixture_tags(name: &str) -> Option<Vec<FamilyTag>> {
    let j = |f, n| FamilyTag::new(f, n);
    Some(match name {
        "j2" => alloc::vec![j(Family::J2, 2)],
        "n1_j1" => alloc::vec![FamilyTag::regular(Family::N, Poly::from_i64(&[1, 1])), j(Family::J1, 1)],
        "three_twisted" => alloc::vec![j(Family::J1, 1), j(Family::J2, 1), j(Family::J3, 1), j(Family::C, 1)],
        "young" => alloc::vec![FamilyTag::fixed(Family::Y), FamilyTag::fixed(Family::Z)],
        "loomis_whitney" => alloc::vec![FamilyTag::fixed(Family::L)],
        "bilinear_holder_pk" => alloc::vec![FamilyTag::fixed(Family::P2), FamilyTag::fixed(Family::K3)],
        _ => return None,
    })
}

/// A named fixture. `alpha` is used by `bht`, `n` by `coifman_meyer`.
pub fn fixture(name: &str, alpha: &Rational, n: usize) -> Result<Datum, Error> {
    match name {
        "bht" => bht(alpha),
        "coifman_meyer" => coifman_meyer(n),
        "twisted_paraproduct" => Ok(twisted_paraproduct()),
        "triangular_hilbert" => Ok(triangular_hilbert()),
        other => match fixture_tags(other) {
            Some(tags) => from_tags(&tags),
            None => Err(Error::Malformed(format!("unknown fixture {other:?}"))),
        },
    }
}

/// The shipped fixture set with file stems and the status each must produce.
pub fn shipped() -> Vec<(String, Datum, &'static str)> {
    let third = crate::linalg::ratio(1, 3);
    let mut out = Vec::new();
    let expected = [
        ("bht", "Bounded(lacey-thiele)"),
        ("coifman_meyer_1", "Bounded(coifman-meyer)"),
        ("coifman_meyer_2", "Bounded(coifman-meyer)"),
        ("twisted_paraproduct", "Bounded(kovac-twisted)"),
        ("j2", "Bounded(demeter-thiele)"),
        ("n1_j1", "Bounded(demeter-thiele)"),
        ("three_twisted", "Bounded(thm-3-twisted)"),
        ("triangular_hilbert", "OpenContainsT"),
        ("young", "Bounded(thm-i-ii-iii)"),
        ("loomis_whitney", "Bounded(thm-i-ii-iii)"),
        ("bilinear_holder_pk", "Bounded(thm-i-ii-iii)"),
    ];
    for (stem, status) in expected {
        let d = match stem {
            "coifman_meyer_1" => coifman_meyer(1),
            "coifman_meyer_2" => coifman_meyer(2),
            s => fixture(s, &third, 1),
        }
        .expect("shipped fixtures are well formed");
        out.push((stem.into(), d, status));
    }
    out
}

fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = libm::sqrt(n as f64) as i64;
    (r - 1..=r + 1).any(|k| k >= 0 && k * k == n)
}

/// `t − λ` with rational `λ ∉ {0, 1}`.
pub fn random_linear(s: &mut Stream) -> Poly {
    loop {
        let l = s.small_rational(4, 3);
        if !is_zero(&l) && l != rat(1) {
            return Poly::linear_root(&l);
        }
    }
}

/// Monic `t² + bt + c` without rational roots.
pub fn random_irreducible_quadratic(s: &mut Stream) -> Poly {
    loop {
        let (b, c) = (s.int_in(-3, 3), s.int_in(-3, 3));
        if c != 0 && !is_square(b * b - 4 * c) {
            return Poly::from_i64(&[c, b, 1]);
        }
    }
}

/// One random tag from the special families with `dim M ≤ max_dim`, if any fits.
pub fn random_tag(s: &mut Stream, max_dim: usize) -> Option<FamilyTag> {
    const POOL: [Family; 16] = [
        Family::N,
        Family::J1,
        Family::J2,
        Family::J3,
        Family::C,
        Family::T,
        Family::Y,
        Family::Z,
        Family::L,
        Family::B,
        Family::P1,
        Family::P2,
        Family::P3,
        Family::K1,
        Family::K2,
        Family::K3,
    ];
    for _ in 0..64 {
        let f = POOL[s.below(POOL.len() as u64) as usize];
        let tag = match f {
            Family::N => {
                if s.below(2) == 0 {
                    FamilyTag::regular(f, random_linear(s))
                } else {
                    FamilyTag::regular(f, random_irreducible_quadratic(s))
                }
            }
            f if f.has_size() => FamilyTag::new(f, s.int_in(f.min_n() as i64, 2) as usize),
            f => FamilyTag::fixed(f),
        };
        if dim_vector(&tag).map_or(false, |d| d.m <= max_dim) {
            return Some(tag);
        }
    }
    None
}

/// Random direct sum of 1–4 special-family summands with total `dim M ≤ max_dim`.
pub fn random_summands(s: &mut Stream, max_dim: usize) -> Vec<FamilyTag> {
    let count = s.int_in(1, 4) as usize;
    let mut out = Vec::new();
    let mut used = 0;
    for _ in 0..count {
        match random_tag(s, max_dim - used) {
            Some(t) => {
                used += dim_vector(&t).expect("valid").m;
                out.push(t);
            }
            None => break,
        }
        if used >= max_dim {
            break;
        }
    }
    out
}

/// Random invertible matrix `L·U` with unit-diagonal triangular factors and small
/// rational entries, times a random diagonal of nonzero small rationals.
pub fn random_invertible(s: &mut Stream, n: usize) -> Matrix {
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i > j {
                l[(i, j)] = rat(s.int_in(-2, 2));
            } else if i < j {
                u[(i, j)] = rat(s.int_in(-2, 2));
            } else {
                let mut d = s.small_rational(3, 2);
                while is_zero(&d) {
                    d = s.small_rational(3, 2);
                }
                u[(i, j)] = d;
            }
        }
    }
    let m = l.mul(&u);
    debug_assert!(!is_zero(&det(&m)));
    m
}

pub fn random_equivalence(s: &mut Stream, d: &Datum) -> EquivalenceMap {
    EquivalenceMap {
        phi: random_invertible(s, d.dim_h),
        phi_i: core::array::from_fn(|i| random_invertible(s, d.dims[i])),
    }
}
