//! Known boundedness results for Hölder-type multisets and the closure rules that
//! propagate them: drop `C₀`; pass to sub-multisets; lower the index of a `J⁽ⁱ⁾_n`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::tables::{Family, FamilyTag};

/// One citation entry. `range` is the exponent range as stated by the source.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fact {
    pub key: &'static str,
    pub covers: &'static str,
    pub range: &'static str,
    pub source: &'static str,
}

pub const FACTS: [Fact; 7] = [
    Fact {
        key: "holder-inequality",
        covers: "C0^n (empty after dropping C0)",
        range: "1/p1 + 1/p2 + 1/p3 = 1, 1 <= p <= inf",
        source: "Hölder's inequality",
    },
    Fact {
        key: "coifman-meyer",
        covers: "C1^n, n >= 1",
        range: "1/p1 + 1/p2 + 1/p3 = 1, 1 < p < inf",
        source: "Coifman–Meyer multiplier theorem",
    },
    Fact {
        key: "lacey-thiele",
        covers: "N1",
        range: "1/p1 + 1/p2 + 1/p3 = 1, 2 < p < inf",
        source: "Lacey–Thiele, bilinear Hilbert transform",
    },
    Fact {
        key: "demeter-thiele",
        covers: "J(i)_2; N1 + J(i)_1; C1 + J(i)_1",
        range: "1/p1 + 1/p2 + 1/p3 = 1 (range of the source)",
        source: "Demeter–Thiele, one-and-a-half dimensional time-frequency analysis",
    },
    Fact {
        key: "kovac-twisted",
        covers: "J(i)_1 + J(j)_1, i != j",
        range: "1/p1 + 1/p2 + 1/p3 = 1 (range of the source)",
        source: "Kovač, twisted paraproduct",
    },
    Fact {
        key: "thm-3-twisted",
        covers: "(J(1)_1 + J(2)_1 + J(3)_1 + C1)^n, n >= 1",
        range: "1/p1 + 1/p2 + 1/p3 = 1, 2 < p < inf",
        source: "twisted techniques with a cone decomposition",
    },
    Fact {
        key: "thm-type-03",
        covers: "sums of N_n and C_m, n, m >= 1",
        range: "1/p1 + 1/p2 + 1/p3 = 1, 2 < p < inf",
        source: "time-frequency analysis for nondegenerate multipliers",
    },
];

pub fn fact(key: &str) -> Option<&'static Fact> {
    FACTS.iter().find(|f| f.key == key)
}

/// A summand slot of a fact instance.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Slot {
    Exact(Family, usize),
    /// `N` with a linear invariant factor (any admissible eigenvalue).
    N1,
    /// Any `N`, or `C_m` with `m ≥ 1`.
    NOrC,
}

impl Slot {
    fn label(&self) -> String {
        match self {
            Slot::Exact(f, n) => FamilyTag::new(*f, *n).label(),
            Slot::N1 => "N_1".into(),
            Slot::NOrC => "N_n|C_m".into(),
        }
    }

    /// `exact`: the summand is this slot. Otherwise `J_m⁽ⁱ⁾` may sit in a `J_n⁽ⁱ⁾` slot, `m ≤ n`.
    fn fits(&self, t: &FamilyTag, exact: bool) -> bool {
        if t.perm != t.family.default_perm() {
            return false;
        }
        match *self {
            Slot::Exact(f, n) => {
                t.family == f
                    && (t.n == n || (!exact && matches!(f, Family::J1 | Family::J2 | Family::J3) && t.n <= n))
            }
            Slot::N1 => t.family == Family::N && t.n == 1,
            Slot::NOrC => t.family == Family::N || (t.family == Family::C && t.n >= 1),
        }
    }
}

const J: [Family; 3] = [Family::J1, Family::J2, Family::J3];

/// Instances of a fact relevant to multisets with `size` summands.
fn instances(key: &str, size: usize) -> Vec<Vec<Slot>> {
    let c1 = Slot::Exact(Family::C, 1);
    let reps = size.max(1);
    match key {
        "holder-inequality" => alloc::vec![Vec::new()],
        "coifman-meyer" => (1..=reps).map(|k| alloc::vec![c1.clone(); k]).collect(),
        "lacey-thiele" => alloc::vec![alloc::vec![Slot::N1]],
        "demeter-thiele" => {
            let mut out = Vec::new();
            for f in J {
                out.push(alloc::vec![Slot::Exact(f, 2)]);
                out.push(alloc::vec![Slot::N1, Slot::Exact(f, 1)]);
                out.push(alloc::vec![c1.clone(), Slot::Exact(f, 1)]);
            }
            out
        }
        "kovac-twisted" => {
            let mut out = Vec::new();
            for a in 0..3 {
                for b in a + 1..3 {
                    out.push(alloc::vec![Slot::Exact(J[a], 1), Slot::Exact(J[b], 1)]);
                }
            }
            out
        }
        "thm-3-twisted" => (1..=reps)
            .map(|k| {
                let mut v = Vec::new();
                for _ in 0..k {
                    v.extend(J.iter().map(|&f| Slot::Exact(f, 1)));
                    v.push(c1.clone());
                }
                v
            })
            .collect(),
        "thm-type-03" => (1..=reps).map(|k| alloc::vec![Slot::NOrC; k]).collect(),
        _ => Vec::new(),
    }
}

/// Injective assignment of every summand to a slot (Kuhn's augmenting paths).
fn assign(s: &[FamilyTag], slots: &[Slot], exact: bool) -> Option<Vec<usize>> {
    fn augment(
        u: usize,
        s: &[FamilyTag],
        slots: &[Slot],
        exact: bool,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for v in 0..slots.len() {
            if !seen[v] && slots[v].fits(&s[u], exact) {
                seen[v] = true;
                if owner[v].map_or(true, |w| augment(w, s, slots, exact, seen, owner)) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = alloc::vec![None; slots.len()];
    for u in 0..s.len() {
        let mut seen = alloc::vec![false; slots.len()];
        if !augment(u, s, slots, exact, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut to = alloc::vec![0; s.len()];
    for (v, o) in owner.iter().enumerate() {
        if let Some(u) = o {
            to[*u] = v;
        }
    }
    Some(to)
}

/// How a multiset (without `C₀`, without `T`) relates to the fact table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactMatch {
    Exact(&'static Fact),
    /// Derivation steps from a fact instance down to the multiset.
    Dominated(Vec<String>),
    None,
}

fn labels(slots: &[Slot]) -> String {
    let v: Vec<String> = slots.iter().map(Slot::label).collect();
    format!("{{{}}}", v.join(", "))
}

pub fn match_facts(s: &[FamilyTag]) -> FactMatch {
    for f in FACTS.iter() {
        for inst in instances(f.key, s.len()) {
            if inst.len() == s.len() && assign(s, &inst, true).is_some() {
                return FactMatch::Exact(f);
            }
        }
    }
    for f in FACTS.iter() {
        for inst in instances(f.key, s.len()) {
            let Some(to) = assign(s, &inst, false) else { continue };
            let mut chain = alloc::vec![format!("{}: {} bounded for {}", f.key, labels(&inst), f.range)];
            if s.len() < inst.len() {
                chain.push(format!("sub-multiset (direct summands of a bounded module are bounded): drop {} summand(s)", inst.len() - s.len()));
            }
            for (u, &v) in to.iter().enumerate() {
                if let Slot::Exact(fam, n) = inst[v] {
                    if s[u].n < n {
                        chain.push(format!(
                            "lower index: {} from {}",
                            s[u].label(),
                            FamilyTag::new(fam, n).label()
                        ));
                    }
                }
            }
            return FactMatch::Dominated(chain);
        }
    }
    FactMatch::None
}
