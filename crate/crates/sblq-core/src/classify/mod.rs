//! From the certified summand multiset to the verdict: admissible exponent cases and
//! the boundedness status known from the literature.

mod facts;

pub use facts::{fact, match_facts, Fact, FactMatch, FACTS};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::decompose::{decompose, DecomposeConfig, DecomposeOutcome, Decomposition, IndecompSummand, NecessityReport};
use crate::decompose::necessary_conditions;
use crate::exponents::{describe, exponent_box, feasible, ExponentSet, LinearConstraint};
use crate::module::{validate_datum, Datum};
use crate::tables::{Family, FamilyTag, HOLDER_FAMILIES};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    /// Bilinear Hölder type.
    I,
    /// Young type.
    II,
    /// Loomis–Whitney type.
    III,
    /// Hölder type.
    IV,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::I => "i",
            CaseTag::II => "ii",
            CaseTag::III => "iii",
            CaseTag::IV => "iv",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatusTag {
    Bounded { key: String, range: String },
    BoundedConditional { chain: Vec<String> },
    Open,
    OpenContainsT,
    NotPBounded { witness: String },
}

impl StatusTag {
    /// `Bounded(key)`, `BoundedConditional`, `Open`, `OpenContainsT` or `NotPBounded`.
    pub fn short(&self) -> String {
        match self {
            StatusTag::Bounded { key, .. } => format!("Bounded({key})"),
            StatusTag::BoundedConditional { .. } => "BoundedConditional".into(),
            StatusTag::Open => "Open".into(),
            StatusTag::OpenContainsT => "OpenContainsT".into(),
            StatusTag::NotPBounded { .. } => "NotPBounded".into(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, StatusTag::Bounded { .. } | StatusTag::BoundedConditional { .. })
    }
}

impl fmt::Display for StatusTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatusTag::Bounded { key, range } => write!(f, "Bounded({key}) [{range}]"),
            StatusTag::BoundedConditional { chain } => write!(f, "BoundedConditional: {}", chain.join("; ")),
            StatusTag::NotPBounded { witness } => write!(f, "NotPBounded: {witness}"),
            s => f.write_str(&s.short()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseMatch {
    pub case: CaseTag,
    pub exponents: ExponentSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub cases: Vec<CaseMatch>,
    pub summands: Vec<IndecompSummand>,
    pub status: StatusTag,
    /// Necessity failures; nonempty exactly when the status came from the screen.
    pub witnesses: Vec<String>,
    pub diagnostics: Vec<String>,
    pub necessity: NecessityReport,
    pub decomposition: Option<Decomposition>,
}

impl Verdict {
    pub fn unclassified(&self) -> bool {
        self.decomposition.is_none() && self.witnesses.is_empty()
    }
}

fn slot_families(i: usize) -> [Family; 2] {
    match i {
        1 => [Family::P1, Family::K1],
        2 => [Family::P2, Family::K2],
        _ => [Family::P3, Family::K3],
    }
}

/// Every case whose allowed summands contain the multiset (`C₀` ignored) and whose
/// exponent set is compatible with `necessity` (typically the necessity constraints).
pub fn case_detect(summands: &[FamilyTag], necessity: &[LinearConstraint]) -> Vec<CaseMatch> {
    let fams: Vec<Family> = summands
        .iter()
        .filter(|t| !(t.family == Family::C && t.n == 0))
        .map(|t| t.family)
        .collect();
    let within = |allowed: &[Family]| fams.iter().all(|f| allowed.contains(f));
    let mut cand = Vec::new();
    for i in 1..=3 {
        let allowed: Vec<Family> = (1..=3).filter(|&j| j != i).flat_map(slot_families).collect();
        if within(&allowed) {
            cand.push((CaseTag::I, ExponentSet::BilinearHolder(i)));
        }
    }
    if within(&[Family::Y, Family::Z]) {
        cand.push((CaseTag::II, ExponentSet::YoungPlane));
    } else {
        for i in 1..=3 {
            let pk = slot_families(i);
            if within(&[Family::Y, Family::Z, pk[0], pk[1]]) {
                cand.push((CaseTag::II, ExponentSet::YoungWithUnit(i)));
            }
        }
    }
    if within(&[Family::L, Family::B, Family::P1, Family::P2, Family::P3, Family::K1, Family::K2, Family::K3]) {
        cand.push((CaseTag::III, ExponentSet::LoomisWhitney));
    }
    if within(&HOLDER_FAMILIES) {
        cand.push((CaseTag::IV, ExponentSet::HolderLine));
    }
    cand.into_iter()
        .filter(|(_, e)| {
            let mut cs = exponent_box();
            cs.extend(e.constraints());
            cs.extend_from_slice(necessity);
            feasible(&cs)
        })
        .map(|(case, exponents)| CaseMatch { case, exponents })
        .collect()
}

/// Literature status of a multiset of Hölder-family summands.
pub fn status_lookup(summands: &[FamilyTag]) -> StatusTag {
    let s: Vec<FamilyTag> =
        summands.iter().filter(|t| !(t.family == Family::C && t.n == 0)).cloned().collect();
    if s.iter().any(|t| t.family == Family::T && t.n >= 1) {
        return StatusTag::OpenContainsT;
    }
    if s.iter().any(|t| t.family == Family::T) {
        return StatusTag::Open;
    }
    match match_facts(&s) {
        FactMatch::Exact(f) => StatusTag::Bounded { key: f.key.into(), range: f.range.into() },
        FactMatch::Dominated(chain) => StatusTag::BoundedConditional { chain },
        FactMatch::None => StatusTag::Open,
    }
}

/// Validate, screen, decompose, detect cases, look up status.
pub fn classify(d: &Datum, cfg: &DecomposeConfig) -> Result<Verdict, Error> {
    let v = validate_datum(d);
    if !v.is_valid() {
        let (i, r) = v.surjectivity_failures[0];
        return Err(Error::Shape(format!("pi[{i}] has rank {r} < {}: not surjective", d.dims[i])));
    }
    let mut diagnostics = v.warnings;
    let necessity = necessary_conditions(d);
    if let Some(w) = necessity.witness() {
        return Ok(Verdict {
            cases: Vec::new(),
            summands: Vec::new(),
            status: StatusTag::NotPBounded { witness: w.clone() },
            witnesses: alloc::vec![w],
            diagnostics,
            necessity,
            decomposition: None,
        });
    }
    let dec = match decompose(d, cfg) {
        DecomposeOutcome::Decomposed(dec) => dec,
        DecomposeOutcome::Unclassified(mut why) => {
            diagnostics.append(&mut why);
            return Ok(Verdict {
                cases: Vec::new(),
                summands: Vec::new(),
                status: StatusTag::Open,
                witnesses: Vec::new(),
                diagnostics,
                necessity,
                decomposition: None,
            });
        }
    };
    let tags = dec.expanded();
    let hypotheses = (1..4).all(|i| d.dims[i] > 0);
    let cases = if hypotheses { case_detect(&tags, &necessity.constraints()) } else { Vec::new() };
    let status = if cases.iter().any(|c| c.case != CaseTag::IV) {
        let ranges: Vec<String> = cases
            .iter()
            .filter(|c| c.case != CaseTag::IV)
            .map(|c| format!("case {}: {}", c.case, c.exponents))
            .collect();
        StatusTag::Bounded { key: "thm-i-ii-iii".into(), range: ranges.join(" or ") }
    } else if !cases.is_empty() || (!hypotheses && tags.iter().all(|t| HOLDER_FAMILIES.contains(&t.family))) {
        status_lookup(&tags)
    } else if hypotheses {
        let labels: Vec<String> = tags.iter().map(FamilyTag::label).collect();
        StatusTag::NotPBounded {
            witness: format!(
                "summands {{{}}} fit no case compatible with {}",
                labels.join(", "),
                describe(&[necessity.equality_constraint.clone()])
            ),
        }
    } else {
        StatusTag::Open
    };
    Ok(Verdict {
        cases,
        summands: dec.summands.clone(),
        status,
        witnesses: Vec::new(),
        diagnostics,
        necessity,
        decomposition: Some(dec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Poly;

    fn t(f: Family, n: usize) -> FamilyTag {
        FamilyTag::new(f, n)
    }

    fn n1() -> FamilyTag {
        FamilyTag::regular(Family::N, Poly::from_i64(&[-2, 1]))
    }

    #[test]
    fn case_examples() {
        let c = case_detect(&[n1()], &[]);
        assert_eq!(c, alloc::vec![CaseMatch { case: CaseTag::IV, exponents: ExponentSet::HolderLine }]);
        let c = case_detect(&[FamilyTag::fixed(Family::Y), FamilyTag::fixed(Family::Z)], &[]);
        assert_eq!(c, alloc::vec![CaseMatch { case: CaseTag::II, exponents: ExponentSet::YoungPlane }]);
        let c = case_detect(&[FamilyTag::fixed(Family::L), FamilyTag::fixed(Family::B)], &[]);
        assert_eq!(c, alloc::vec![CaseMatch { case: CaseTag::III, exponents: ExponentSet::LoomisWhitney }]);
        let c = case_detect(&[FamilyTag::fixed(Family::P2), FamilyTag::fixed(Family::K3)], &[]);
        let tags: Vec<CaseTag> = c.iter().map(|m| m.case).collect();
        assert_eq!(tags, alloc::vec![CaseTag::I, CaseTag::III]);
        assert_eq!(c[0].exponents, ExponentSet::BilinearHolder(1));
    }

    #[test]
    fn status_examples() {
        assert_eq!(status_lookup(&[n1()]).short(), "Bounded(lacey-thiele)");
        assert_eq!(status_lookup(&[t(Family::J1, 1), t(Family::J2, 1)]).short(), "Bounded(kovac-twisted)");
        assert_eq!(status_lookup(&[t(Family::T, 1)]), StatusTag::OpenContainsT);
        assert_eq!(status_lookup(&[t(Family::C, 0), t(Family::C, 1)]).short(), "Bounded(coifman-meyer)");
        assert_eq!(status_lookup(&[t(Family::J2, 1)]).short(), "BoundedConditional");
        assert_eq!(status_lookup(&[t(Family::J2, 3)]), StatusTag::Open);
    }
}
