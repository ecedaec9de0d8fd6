//! Affine constraints on `q = (1/p₁, 1/p₂, 1/p₃)` and an exact feasibility test.
//!
//! Equalities are substituted away first; the remaining inequalities (strict or not)
//! go through Fourier–Motzkin elimination, which is exact over ℚ and keeps track of
//! strictness.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::linalg::{rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Eq,
    Le,
    Lt,
}

/// `coeffs · q  (rel)  rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearConstraint {
    pub coeffs: [Rational; 3],
    pub rel: Relation,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn new(coeffs: [Rational; 3], rel: Relation, rhs: Rational) -> Self {
        LinearConstraint { coeffs, rel, rhs }
    }

    pub fn from_i64(c: [i64; 3], rel: Relation, rhs: i64) -> Self {
        Self::new(c.map(rat), rel, rat(rhs))
    }

    pub fn holds_at(&self, q: &[Rational; 3]) -> bool {
        let lhs: Rational = (0..3).map(|i| &self.coeffs[i] * &q[i]).sum();
        match self.rel {
            Relation::Eq => lhs == self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
        }
    }
}

impl fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if mag != rat(1) {
                write!(f, "{mag}*")?;
            }
            write!(f, "q{}", i + 1)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        let op = match self.rel {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Lt => "<",
        };
        write!(f, " {op} {}", self.rhs)
    }
}

/// The box `0 < q_i ≤ 1` of finite exponents `1 ≤ p_i < ∞`.
pub fn exponent_box() -> Vec<LinearConstraint> {
    let mut out = Vec::new();
    for i in 0..3 {
        let mut e = [0i64; 3];
        e[i] = 1;
        out.push(LinearConstraint::from_i64(e, Relation::Le, 1));
        e[i] = -1;
        out.push(LinearConstraint::from_i64(e, Relation::Lt, 0));
    }
    out
}

/// Row in `Σ a_j x_j (≤|<) b` form over the surviving variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Ineq {
    a: Vec<Rational>,
    b: Rational,
    strict: bool,
}

impl Ineq {
    fn normalized(mut self) -> Ineq {
        if let Some(p) = self.a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
            for x in self.a.iter_mut() {
                *x = &*x / &p;
            }
            self.b = &self.b / &p;
        }
        self
    }
}

/// True iff some `q` satisfies every constraint.
pub fn feasible(constraints: &[LinearConstraint]) -> bool {
    // substitute equalities: each pins one variable as an affine function of the rest
    let nv = 3;
    // rows as (coeffs over nv vars, rhs); equality rows kept separately
    let mut eqs: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let mut ineqs: Vec<Ineq> = Vec::new();
    for c in constraints {
        let a: Vec<Rational> = c.coeffs.to_vec();
        match c.rel {
            Relation::Eq => eqs.push((a, c.rhs.clone())),
            Relation::Le => ineqs.push(Ineq { a, b: c.rhs.clone(), strict: false }),
            Relation::Lt => ineqs.push(Ineq { a, b: c.rhs.clone(), strict: true }),
        }
    }
    let mut eliminated = [false; 3];
    while let Some((a, b)) = eqs.pop() {
        let Some(v) = (0..nv).find(|&j| !a[j].is_zero()) else {
            if !b.is_zero() {
                return false;
            }
            continue;
        };
        eliminated[v] = true;
        // x_v = (b − Σ_{j≠v} a_j x_j) / a_v
        let subst = |row: &mut Vec<Rational>, rhs: &mut Rational| {
            let k = &row[v] / &a[v];
            if k.is_zero() {
                return;
            }
            for j in 0..nv {
                row[j] = &row[j] - &(&k * &a[j]);
            }
            *rhs = &*rhs - &(&k * &b);
        };
        for (row, rhs) in eqs.iter_mut() {
            subst(row, rhs);
        }
        for q in ineqs.iter_mut() {
            subst(&mut q.a, &mut q.b);
        }
    }
    let mut set: BTreeSet<Ineq> = ineqs.into_iter().map(Ineq::normalized).collect();
    for v in 0..nv {
        if eliminated[v] {
            continue;
        }
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for q in set {
            if q.a[v].is_positive() {
                pos.push(q);
            } else if q.a[v].is_negative() {
                neg.push(q);
            } else {
                rest.push(q);
            }
        }
        let mut next: BTreeSet<Ineq> = rest.into_iter().collect();
        for p in &pos {
            for n in &neg {
                let sp = &p.a[v];
                let sn = -&n.a[v];
                let a: Vec<Rational> = (0..nv).map(|j| &p.a[j] * &sn + &n.a[j] * sp).collect();
                let b = &p.b * &sn + &n.b * sp;
                next.insert(Ineq { a, b, strict: p.strict || n.strict }.normalized());
            }
        }
        set = next;
    }
    set.iter().all(|q| if q.strict { q.b.is_positive() } else { !q.b.is_negative() })
}

/// Symbolic exponent set reported with a case.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExponentSet {
    /// `q₁ + q₂ + q₃ = 1`.
    HolderLine,
    /// `q₁ + q₂ + q₃ = 2`.
    YoungPlane,
    /// `q_i = 1` and `q₁ + q₂ + q₃ = 2` (slot index `i ∈ 1..=3`).
    YoungWithUnit(usize),
    /// `q_j = q_k = 1 − q_i`.
    BilinearHolder(usize),
    /// `q = (1/2, 1/2, 1/2)`.
    LoomisWhitney,
}

impl ExponentSet {
    pub fn constraints(&self) -> Vec<LinearConstraint> {
        use Relation::Eq;
        match *self {
            ExponentSet::HolderLine => alloc::vec![LinearConstraint::from_i64([1, 1, 1], Eq, 1)],
            ExponentSet::YoungPlane => alloc::vec![LinearConstraint::from_i64([1, 1, 1], Eq, 2)],
            ExponentSet::YoungWithUnit(i) => {
                let mut e = [0; 3];
                e[i - 1] = 1;
                alloc::vec![
                    LinearConstraint::from_i64([1, 1, 1], Eq, 2),
                    LinearConstraint::from_i64(e, Eq, 1)
                ]
            }
            ExponentSet::BilinearHolder(i) => {
                // q_j + q_i = 1 for both j ≠ i
                (1..=3)
                    .filter(|&j| j != i)
                    .map(|j| {
                        let mut e = [0; 3];
                        e[i - 1] = 1;
                        e[j - 1] = 1;
                        LinearConstraint::from_i64(e, Eq, 1)
                    })
                    .collect()
            }
            ExponentSet::LoomisWhitney => (0..3)
                .map(|i| {
                    let mut e = [0i64; 3];
                    e[i] = 2;
                    LinearConstraint::from_i64(e, Eq, 1)
                })
                .collect(),
        }
    }
}

impl fmt::Display for ExponentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ExponentSet::HolderLine => write!(f, "1/p1 + 1/p2 + 1/p3 = 1"),
            ExponentSet::YoungPlane => write!(f, "1/p1 + 1/p2 + 1/p3 = 2"),
            ExponentSet::YoungWithUnit(i) => write!(f, "p{i} = 1, 1/p1 + 1/p2 + 1/p3 = 2"),
            ExponentSet::BilinearHolder(i) => {
                let others: Vec<usize> = (1..=3).filter(|&j| j != i).collect();
                write!(f, "1/p{} = 1/p{} = 1 - 1/p{i}", others[0], others[1])
            }
            ExponentSet::LoomisWhitney => write!(f, "p = (2, 2, 2)"),
        }
    }
}

/// Exponents `q_i = 1/p_i` with `0 < q_i ≤ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentTriple {
    pub q: [Rational; 3],
}

impl ExponentTriple {
    pub fn new(q: [Rational; 3]) -> Option<Self> {
        q.iter().all(|x| x.is_positive() && *x <= rat(1)).then_some(ExponentTriple { q })
    }

    pub fn sum(&self) -> Rational {
        self.q.iter().sum()
    }

    pub fn satisfies(&self, cs: &[LinearConstraint]) -> bool {
        cs.iter().all(|c| c.holds_at(&self.q))
    }
}

pub fn describe(cs: &[LinearConstraint]) -> String {
    let parts: Vec<String> = cs.iter().map(|c| alloc::format!("{c}")).collect();
    parts.join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;
    use Relation::*;

    #[test]
    fn holder_line_is_feasible_in_the_box() {
        let mut cs = exponent_box();
        cs.extend(ExponentSet::HolderLine.constraints());
        assert!(feasible(&cs));
    }

    #[test]
    fn strictness_is_tracked() {
        // q₁ + q₂ + q₃ = 0 forces q = 0, excluded by q_i > 0
        let mut cs = exponent_box();
        cs.push(LinearConstraint::from_i64([1, 1, 1], Eq, 0));
        assert!(!feasible(&cs));
        // q₁ ≤ 0 with q₁ > 0 is empty; q₁ ≤ 1/2 is not
        let mut cs = exponent_box();
        cs.push(LinearConstraint::from_i64([1, 0, 0], Le, 0));
        assert!(!feasible(&cs));
    }

    #[test]
    fn conflicting_planes() {
        let mut cs = exponent_box();
        cs.extend(ExponentSet::HolderLine.constraints());
        cs.extend(ExponentSet::YoungPlane.constraints());
        assert!(!feasible(&cs));
        let mut cs = exponent_box();
        cs.extend(ExponentSet::LoomisWhitney.constraints());
        // 2 ≤ q₁ + q₂ + q₃ would fail at (1/2,1/2,1/2); 3/2 ≤ … holds with equality
        cs.push(LinearConstraint::new([rat(-1), rat(-1), rat(-1)], Le, ratio(-3, 2)));
        assert!(feasible(&cs));
        cs.push(LinearConstraint::from_i64([-1, -1, -1], Le, -2));
        assert!(!feasible(&cs));
    }

    #[test]
    fn display() {
        let c = LinearConstraint::new([rat(2), rat(0), rat(-1)], Le, ratio(1, 2));
        assert_eq!(alloc::format!("{c}"), "2*q1 - q3 <= 1/2");
        assert_eq!(alloc::format!("{}", ExponentSet::BilinearHolder(1)), "1/p2 = 1/p3 = 1 - 1/p1");
    }
}
