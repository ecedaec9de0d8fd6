//! Block-matrix constructors for every indecomposable four-subspace module class.
//!
//! A module is written as a block matrix whose four block columns are the
//! embeddings `M_i → M`; the transposed block columns are the maps `Π_i` of the
//! dual datum. Slot 0 is always `M₀`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::linalg::{rat, Matrix, Poly, Rational};
use crate::module::{DimVector, FourModule};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Type0,
    TypeI,
    TypeII,
    TypeIII,
    TypeIIIstar,
    TypeIV,
    TypeIVstar,
    TypeV,
    TypeVstar,
    N,
    J1,
    J2,
    J3,
    C,
    T,
    Y,
    Z,
    L,
    B,
    P1,
    P2,
    P3,
    K1,
    K2,
    K3,
}

/// The nine types, each up to slot permutation.
pub const GENERAL_FAMILIES: [Family; 9] = [
    Family::Type0,
    Family::TypeI,
    Family::TypeII,
    Family::TypeIII,
    Family::TypeIIIstar,
    Family::TypeIV,
    Family::TypeIVstar,
    Family::TypeV,
    Family::TypeVstar,
];
/// Hölder-type summands.
pub const HOLDER_FAMILIES: [Family; 6] = [Family::N, Family::J1, Family::J2, Family::J3, Family::C, Family::T];
/// Fixed-size non-Hölder summands.
pub const SPORADIC_FAMILIES: [Family; 4] = [Family::Y, Family::Z, Family::L, Family::B];
/// Sized non-Hölder series.
pub const NON_HOLDER_SERIES: [Family; 6] = [Family::P1, Family::P2, Family::P3, Family::K1, Family::K2, Family::K3];

impl Family {
    /// Families whose size parameter `n` is meaningful.
    pub fn has_size(self) -> bool {
        !matches!(self, Family::Y | Family::Z | Family::L | Family::B)
            && !NON_HOLDER_SERIES.contains(&self)
    }

    pub fn min_n(self) -> usize {
        match self {
            Family::Type0 | Family::TypeI | Family::N | Family::J1 | Family::J2 | Family::J3 => 1,
            _ => 0,
        }
    }

    pub fn needs_poly(self) -> bool {
        matches!(self, Family::Type0 | Family::N)
    }

    /// Slot order that makes the built module's dimensions match the printed dimension
    /// column. The printed block matrices of III and III* list `M₀` last relative to it.
    pub fn default_perm(self) -> [usize; 4] {
        match self {
            Family::TypeIII | Family::TypeIIIstar => [1, 2, 3, 0],
            _ => [0, 1, 2, 3],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Type0 => "0",
            Family::TypeI => "I",
            Family::TypeII => "II",
            Family::TypeIII => "III",
            Family::TypeIIIstar => "III*",
            Family::TypeIV => "IV",
            Family::TypeIVstar => "IV*",
            Family::TypeV => "V",
            Family::TypeVstar => "V*",
            Family::N => "N",
            Family::J1 => "J(1)",
            Family::J2 => "J(2)",
            Family::J3 => "J(3)",
            Family::C => "C",
            Family::T => "T",
            Family::Y => "Y",
            Family::Z => "Z",
            Family::L => "L",
            Family::B => "B",
            Family::P1 => "P(1)",
            Family::P2 => "P(2)",
            Family::P3 => "P(3)",
            Family::K1 => "K(1)",
            Family::K2 => "K(2)",
            Family::K3 => "K(3)",
        }
    }
}

/// A family label with its size, slot permutation and (families 0/N) polynomial.
/// Slot `i` of the built module is slot `perm[i]` of the printed block matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyTag {
    pub family: Family,
    pub n: usize,
    pub perm: [usize; 4],
    pub poly: Option<Poly>,
}

impl FamilyTag {
    pub fn new(family: Family, n: usize) -> Self {
        FamilyTag { family, n: if family.has_size() { n } else { 0 }, perm: family.default_perm(), poly: None }
    }

    pub fn fixed(family: Family) -> Self {
        Self::new(family, 0)
    }

    /// Family N (or 0) with `X` the companion matrix of `poly`; `n = deg poly`.
    pub fn regular(family: Family, poly: Poly) -> Self {
        let p = poly.monic();
        FamilyTag { family, n: p.degree().unwrap_or(0), perm: family.default_perm(), poly: Some(p) }
    }

    pub fn with_perm(mut self, perm: [usize; 4]) -> Self {
        self.perm = perm;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        let f = self.family;
        let mut seen = [false; 4];
        for &p in &self.perm {
            if p > 3 || seen[p] {
                return Err(Error::Malformed(format!("{:?} is not a permutation", self.perm)));
            }
            seen[p] = true;
        }
        if self.n < f.min_n() {
            return Err(Error::Malformed(format!("{} needs n >= {}", f.name(), f.min_n())));
        }
        match (&self.poly, f.needs_poly()) {
            (None, true) => return Err(Error::Malformed(format!("{} needs a polynomial", f.name()))),
            (Some(_), false) => {
                return Err(Error::Malformed(format!("{} takes no polynomial", f.name())))
            }
            (Some(p), true) => {
                if p.degree() != Some(self.n) {
                    return Err(Error::Malformed("polynomial degree must equal n".into()));
                }
                if p.eval(&rat(0)) == rat(0) || p.eval(&rat(1)) == rat(0) {
                    return Err(Error::Malformed(
                        "polynomial must not vanish at 0 or 1 (P(t) != t, t - 1)".into(),
                    ));
                }
            }
            (None, false) => {}
        }
        Ok(())
    }

    /// Short human-readable label, e.g. `N_1[t - 1/3]`, `J(2)_2`, `C_0`, `Y`.
    pub fn label(&self) -> String {
        let f = self.family;
        let mut s = String::from(f.name());
        if f.has_size() {
            s.push_str(&format!("_{}", self.n));
        }
        if let Some(p) = &self.poly {
            s.push_str(&format!("[{p}]"));
        }
        if self.perm != f.default_perm() {
            s.push_str(&format!("@{}{}{}{}", self.perm[0], self.perm[1], self.perm[2], self.perm[3]));
        }
        s
    }
}

/// The matrices used in the printed tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockPiece {
    Identity(usize),
    Jordan(usize, Rational),
    /// `I_n` with a zero row on top, `(n+1) × n`.
    ArrowUp(usize),
    /// `I_n` with a zero row below, `(n+1) × n`.
    ArrowDown(usize),
    /// `I_n` with a zero column on the left, `n × (n+1)`.
    ArrowLeft(usize),
    /// `I_n` with a zero column on the right, `n × (n+1)`.
    ArrowRight(usize),
    Zero(usize, usize),
    /// The row `1 0 … 0` of length `n`.
    RowUnit(usize),
    Companion(Poly),
    Explicit(Matrix),
}

impl BlockPiece {
    pub fn matrix(&self) -> Matrix {
        match self {
            BlockPiece::Identity(n) => Matrix::identity(*n),
            BlockPiece::Jordan(n, l) => {
                let mut m = Matrix::zeros(*n, *n);
                for i in 0..*n {
                    m[(i, i)] = l.clone();
                    if i + 1 < *n {
                        m[(i, i + 1)] = rat(1);
                    }
                }
                m
            }
            BlockPiece::ArrowUp(n) => Matrix::zeros(1, *n).vstack(&Matrix::identity(*n)),
            BlockPiece::ArrowDown(n) => Matrix::identity(*n).vstack(&Matrix::zeros(1, *n)),
            BlockPiece::ArrowLeft(n) => Matrix::zeros(*n, 1).hstack(&Matrix::identity(*n)),
            BlockPiece::ArrowRight(n) => Matrix::identity(*n).hstack(&Matrix::zeros(*n, 1)),
            BlockPiece::Zero(r, c) => Matrix::zeros(*r, *c),
            BlockPiece::RowUnit(n) => {
                let mut m = Matrix::zeros(1, *n);
                if *n > 0 {
                    m[(0, 0)] = rat(1);
                }
                m
            }
            BlockPiece::Companion(p) => p.companion(),
            BlockPiece::Explicit(m) => m.clone(),
        }
    }
}

/// Stack block rows into the four column blocks, checking that sizes line up.
fn assemble(rows: Vec<[BlockPiece; 4]>) -> FourModule {
    let mats: Vec<[Matrix; 4]> = rows.iter().map(|r| core::array::from_fn(|j| r[j].matrix())).collect();
    let dim: usize = mats.iter().map(|r| r[0].rows()).sum();
    let cols: [Matrix; 4] = core::array::from_fn(|j| {
        let width = mats[0][j].cols();
        let mut acc = Matrix::zeros(0, width);
        for r in &mats {
            assert_eq!(r[j].cols(), width, "block column {j} has inconsistent width");
            assert_eq!(r[j].rows(), r[0].rows(), "block row has inconsistent height");
            acc = acc.vstack(&r[j]);
        }
        acc
    });
    FourModule::from_bases(dim, cols).expect("table block columns have full column rank")
}

fn printed(tag: &FamilyTag) -> FourModule {
    use BlockPiece::*;
    let n = tag.n;
    let one = || rat(1);
    let zero = || rat(0);
    let ex = |rows: &[&[i64]]| Explicit(Matrix::from_i64(rows));
    let exc = |r: usize, c: usize| Explicit(Matrix::zeros(r, c));
    let holder = |x2: BlockPiece, x3: BlockPiece| {
        alloc::vec![
            [Identity(n), Zero(n, n), x2, x3],
            [Zero(n, n), Identity(n), Identity(n), Identity(n)],
        ]
    };
    let rows = match tag.family {
        Family::Type0 | Family::N => {
            holder(Identity(n), Companion(tag.poly.clone().expect("validated")))
        }
        Family::TypeI | Family::J2 => holder(Identity(n), Jordan(n, zero())),
        Family::J1 => holder(Identity(n), Jordan(n, one())),
        Family::J3 => holder(Jordan(n, zero()), Identity(n)),
        Family::TypeII => alloc::vec![
            [Identity(n + 1), Identity(n + 1), ArrowDown(n), Zero(n + 1, n)],
            [Zero(n, n + 1), ArrowRight(n), Identity(n), Identity(n)],
        ],
        Family::TypeIII | Family::C => alloc::vec![
            [Identity(n + 1), Zero(n + 1, n), ArrowUp(n), ArrowDown(n)],
            [Zero(n, n + 1), Identity(n), Identity(n), Identity(n)],
        ],
        Family::TypeIIIstar | Family::T => alloc::vec![
            [Identity(n), Zero(n, n + 1), ArrowLeft(n), ArrowRight(n)],
            [Zero(n + 1, n), Identity(n + 1), Identity(n + 1), Identity(n + 1)],
        ],
        Family::TypeIV => alloc::vec![
            [Identity(n + 1), Zero(n + 1, n + 1), Identity(n + 1), ArrowUp(n)],
            [Zero(n + 1, n + 1), Identity(n + 1), Identity(n + 1), ArrowDown(n)],
        ],
        Family::TypeIVstar => alloc::vec![
            [Identity(n + 1), Zero(n + 1, n + 1), Identity(n + 1), ArrowLeft(n + 1)],
            [Zero(n + 1, n + 1), Identity(n + 1), Identity(n + 1), ArrowRight(n + 1)],
        ],
        Family::TypeV => alloc::vec![
            [Identity(n), Zero(n, n), Jordan(n, zero()), Identity(n)],
            [Zero(n, n), Identity(n), Identity(n), Jordan(n, zero())],
            [Zero(1, n), Zero(1, n), RowUnit(n), RowUnit(n)],
        ],
        Family::TypeVstar => alloc::vec![
            [ArrowLeft(n), ArrowLeft(n), ArrowRight(n), Zero(n, n + 1)],
            [Zero(n, n + 1), ArrowRight(n), ArrowLeft(n), ArrowLeft(n)],
            [RowUnit(n + 1), RowUnit(n + 1), RowUnit(n + 1), RowUnit(n + 1)],
        ],
        Family::Y => alloc::vec![[exc(2, 0), ex(&[&[1], &[0]]), ex(&[&[0], &[1]]), ex(&[&[1], &[1]])]],
        Family::Z => alloc::vec![[
            ex(&[&[1], &[0], &[0]]),
            ex(&[&[0], &[1], &[0]]),
            ex(&[&[0], &[1], &[1]]),
            ex(&[&[1], &[0], &[1]]),
        ]],
        Family::L => alloc::vec![
            [ArrowUp(1), Identity(2), Zero(2, 2), Identity(2)],
            [ArrowDown(1), Zero(2, 2), Identity(2), Identity(2)],
        ],
        Family::B => alloc::vec![
            [Identity(2), Zero(2, 2), Jordan(2, zero()), Identity(2)],
            [Zero(2, 2), Identity(2), Identity(2), Jordan(2, zero())],
            [Zero(1, 2), Zero(1, 2), RowUnit(2), RowUnit(2)],
        ],
        Family::P1 => alloc::vec![[exc(1, 0), exc(1, 0), Identity(1), Identity(1)]],
        Family::P2 => alloc::vec![[exc(1, 0), Identity(1), exc(1, 0), Identity(1)]],
        Family::P3 => alloc::vec![[exc(1, 0), Identity(1), Identity(1), exc(1, 0)]],
        Family::K1 => alloc::vec![
            [Identity(1), exc(1, 0), Zero(1, 1), Identity(1)],
            [Zero(1, 1), exc(1, 0), Identity(1), Identity(1)],
        ],
        Family::K2 => alloc::vec![
            [Identity(1), Zero(1, 1), exc(1, 0), Identity(1)],
            [Zero(1, 1), Identity(1), exc(1, 0), Identity(1)],
        ],
        Family::K3 => alloc::vec![
            [Identity(1), Zero(1, 1), Identity(1), exc(1, 0)],
            [Zero(1, 1), Identity(1), Identity(1), exc(1, 0)],
        ],
    };
    assemble(rows)
}

/// The module of a table row, slots permuted per `tag.perm`.
pub fn build(tag: &FamilyTag) -> Result<FourModule, Error> {
    tag.validate()?;
    Ok(printed(tag).permute(tag.perm))
}

/// Printed dimension vector `(m; n₀..n₃)` before permutation.
fn printed_dims(f: Family, n: usize) -> DimVector {
    let dv = |m, a, b, c, d| DimVector { m, n: [a, b, c, d] };
    match f {
        Family::Type0 | Family::TypeI | Family::N | Family::J1 | Family::J2 | Family::J3 => {
            dv(2 * n, n, n, n, n)
        }
        Family::TypeII => dv(2 * n + 1, n + 1, n + 1, n, n),
        Family::TypeIII | Family::C => dv(2 * n + 1, n + 1, n, n, n),
        Family::TypeIIIstar | Family::T => dv(2 * n + 1, n, n + 1, n + 1, n + 1),
        Family::TypeIV => dv(2 * n + 2, n + 1, n + 1, n + 1, n),
        Family::TypeIVstar => dv(2 * n + 2, n + 1, n + 1, n + 1, n + 2),
        Family::TypeV => dv(2 * n + 1, n, n, n, n),
        Family::TypeVstar => dv(2 * n + 1, n + 1, n + 1, n + 1, n + 1),
        Family::Y => dv(2, 0, 1, 1, 1),
        Family::Z => dv(3, 1, 1, 1, 1),
        Family::L => dv(4, 1, 2, 2, 2),
        Family::B => dv(5, 2, 2, 2, 2),
        Family::P1 => dv(1, 0, 0, 1, 1),
        Family::P2 => dv(1, 0, 1, 0, 1),
        Family::P3 => dv(1, 0, 1, 1, 0),
        Family::K1 => dv(2, 1, 0, 1, 1),
        Family::K2 => dv(2, 1, 1, 0, 1),
        Family::K3 => dv(2, 1, 1, 1, 0),
    }
}

/// Closed-form dimension vector, no matrices built.
pub fn dim_vector(tag: &FamilyTag) -> Result<DimVector, Error> {
    tag.validate()?;
    let p = printed_dims(tag.family, tag.n);
    Ok(DimVector { m: p.m, n: core::array::from_fn(|i| p.n[tag.perm[i]]) })
}

pub fn all_perms() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&x| !core::mem::replace(&mut seen[x], true)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn compose(h: [usize; 4], s: [usize; 4]) -> [usize; 4] {
    // slot i of the result reads printed slot h[s[i]]
    core::array::from_fn(|i| h[s[i]])
}

/// Permutations `g` of the printed slots with `printed.permute(g) ≅ printed`.
///
/// 0: the double transpositions (they fix the cross-ratio of a generic `X`; the others
/// move it). I: the swaps of slots {0,2} and {1,3}. II: the swaps of {0,1} and {2,3}
/// when `n = 0`, nothing else for `n ≥ 1` (the lattice invariants separate every other
/// relabelling). III, III*: everything fixing slot 0. IV, IV*: everything fixing slot 3.
/// V, V*: all of `S₄`.
fn printed_symmetries(family: Family, n: usize) -> Vec<[usize; 4]> {
    let fixing = |k: usize| all_perms().into_iter().filter(|p| p[k] == k).collect();
    match family {
        Family::Type0 => alloc::vec![[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]],
        Family::TypeI => alloc::vec![[0, 1, 2, 3], [2, 1, 0, 3], [0, 3, 2, 1], [2, 3, 0, 1]],
        Family::TypeII if n == 0 => alloc::vec![[0, 1, 2, 3], [1, 0, 2, 3], [0, 1, 3, 2], [1, 0, 3, 2]],
        Family::TypeII => alloc::vec![[0, 1, 2, 3]],
        Family::TypeIII | Family::TypeIIIstar => fixing(0),
        Family::TypeIV | Family::TypeIVstar => fixing(3),
        _ => all_perms(),
    }
}

/// Partition of the 24 slot permutations of a general family of size `n` into
/// isomorphism classes: the orbits of `printed_symmetries` acting on the left.
pub fn permutation_orbits(family: Family, n: usize) -> Result<Vec<Vec<[usize; 4]>>, Error> {
    if !GENERAL_FAMILIES.contains(&family) {
        return Err(Error::Malformed(format!("{} is not a general family", family.name())));
    }
    let group = printed_symmetries(family, n);
    let mut classes: Vec<Vec<[usize; 4]>> = Vec::new();
    for p in all_perms() {
        match classes.iter_mut().find(|cls| group.iter().any(|&h| compose(h, cls[0]) == p)) {
            Some(cls) => cls.push(p),
            None => classes.push(alloc::vec![p]),
        }
    }
    Ok(classes)
}
