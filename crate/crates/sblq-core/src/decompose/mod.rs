//! Necessity screening and decomposition of `M_H` into identified indecomposables.
//!
//! Dispatch: split off `C₀`; if the rest is of Hölder type, read the summands off the
//! Kronecker form of its pencil. Otherwise extract the Hölder core functorially,
//! decompose that by its pencil, and match the remainder against the non-Hölder
//! families. Every result is certified by an explicit isomorphism from the direct sum
//! of the constructed summands onto the input module.

mod necessity;
mod nonholder;
mod pencil;
mod strip;

pub use necessity::{necessary_conditions, LatticeEntry, NecessityReport};
pub use nonholder::{match_nonholder, match_summands, Match, NonHolderCase, NONHOLDER_FAMILIES};
pub use pencil::{
    block_pencil, holder_normal_form, holder_normal_form_module, kronecker_decompose, normal_rank, pencil_module,
    reconstructs, right_minimal_indices, PencilBlock, PencilForm,
};
pub use strip::{holder_core, quotient, restrict, strip_c0, C0Split};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::iso::{module_isomorphic, IsoOutcome};
use crate::linalg::{invariant_factors, Matrix};
use crate::module::{datum_to_module, direct_sum_all, Datum, FourModule};
use crate::tables::{build, Family, FamilyTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SummandSource {
    /// Read off a Kronecker block (N at invariant-factor granularity).
    PencilBlock,
    /// Found by multiplicity enumeration and certified.
    CertifiedMatch,
    /// Split off by `strip_c0`.
    C0Split,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndecompSummand {
    pub tag: FamilyTag,
    pub multiplicity: usize,
    pub source: SummandSource,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecomposeConfig {
    pub trials: usize,
    pub seed: u64,
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        DecomposeConfig { trials: 32, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Hölder type after removing `C₀`: pencil only.
    Pencil,
    /// No Hölder part: non-Hölder matching only.
    NonHolder,
    /// Hölder core by pencil, remainder by matching.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// Sorted by tag, equal tags merged.
    pub summands: Vec<IndecompSummand>,
    pub route: Route,
    pub pencil: Option<PencilForm>,
    pub blocks: Vec<PencilBlock>,
    /// `ψ` from `⊕ build(tag)^{multiplicity}` (in `summands` order) onto `M_H`.
    pub certificate: Matrix,
}

impl Decomposition {
    pub fn multiset(&self) -> Vec<(FamilyTag, usize)> {
        self.summands.iter().map(|s| (s.tag.clone(), s.multiplicity)).collect()
    }

    pub fn expanded(&self) -> Vec<FamilyTag> {
        expand(&self.multiset())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecomposeOutcome {
    Decomposed(Decomposition),
    Unclassified(Vec<String>),
}

impl DecomposeOutcome {
    pub fn decomposition(&self) -> Option<&Decomposition> {
        match self {
            DecomposeOutcome::Decomposed(d) => Some(d),
            DecomposeOutcome::Unclassified(_) => None,
        }
    }
}

pub fn expand(multiset: &[(FamilyTag, usize)]) -> Vec<FamilyTag> {
    multiset.iter().flat_map(|(t, k)| core::iter::repeat(t.clone()).take(*k)).collect()
}

/// Sorted multiset with all `N` summands merged into the invariant factors of the
/// block-diagonal of their companion matrices (the granularity `decompose` reports).
pub fn canonical_multiset(tags: impl IntoIterator<Item = FamilyTag>) -> Vec<(FamilyTag, usize)> {
    let mut counts: BTreeMap<FamilyTag, usize> = BTreeMap::new();
    let mut regular: Option<Matrix> = None;
    for t in tags {
        if t.family == Family::N {
            let c = t.poly.as_ref().expect("N carries a polynomial").companion();
            regular = Some(match regular {
                None => c,
                Some(r) => r.block_diag(&c),
            });
        } else {
            *counts.entry(t).or_insert(0) += 1;
        }
    }
    if let Some(x) = regular {
        for f in invariant_factors(&x) {
            *counts.entry(FamilyTag::regular(Family::N, f)).or_insert(0) += 1;
        }
    }
    counts.into_iter().collect()
}

fn add(out: &mut BTreeMap<FamilyTag, (usize, SummandSource)>, tag: FamilyTag, k: usize, src: SummandSource) {
    out.entry(tag).or_insert((0, src)).0 += k;
}

pub fn decompose_module(m: &FourModule, cfg: &DecomposeConfig) -> DecomposeOutcome {
    let split = strip_c0(m);
    let rest = &split.rest;
    let mut acc: BTreeMap<FamilyTag, (usize, SummandSource)> = BTreeMap::new();
    if split.k > 0 {
        add(&mut acc, FamilyTag::new(Family::C, 0), split.k, SummandSource::C0Split);
    }
    let mut pencil = None;
    let mut blocks = Vec::new();
    let route;
    if rest.dim == 0 {
        route = Route::Pencil;
    } else if let Some(p) = holder_normal_form_module(rest) {
        blocks = kronecker_decompose(&p);
        pencil = Some(p);
        route = Route::Pencil;
    } else {
        let core = strip_c0(&holder_core(rest)).rest;
        let mut fixed = Vec::new();
        if core.dim > 0 {
            let Some(p) = holder_normal_form_module(&core) else {
                return DecomposeOutcome::Unclassified(alloc::vec![format!(
                    "Hölder core {} is not of Hölder type",
                    core.dim_vector()
                )]);
            };
            blocks = kronecker_decompose(&p);
            fixed = blocks.iter().map(PencilBlock::tag).collect();
            pencil = Some(p);
        }
        let Some(found) = match_summands(rest, &fixed, &NONHOLDER_FAMILIES, cfg.trials, cfg.seed) else {
            return DecomposeOutcome::Unclassified(alloc::vec![format!(
                "no certified non-Hölder multiset completes {} (Hölder part {} summands)",
                rest.dim_vector(),
                fixed.len()
            )]);
        };
        for (t, k) in found.parts {
            add(&mut acc, t, k, SummandSource::CertifiedMatch);
        }
        route = if fixed.is_empty() { Route::NonHolder } else { Route::Mixed };
    }
    for b in &blocks {
        add(&mut acc, b.tag(), 1, SummandSource::PencilBlock);
    }
    let summands: Vec<IndecompSummand> = acc
        .into_iter()
        .map(|(tag, (multiplicity, source))| IndecompSummand { tag, multiplicity, source })
        .collect();
    let parts: Vec<FourModule> = summands
        .iter()
        .flat_map(|s| core::iter::repeat(build(&s.tag).expect("identified tags are valid")).take(s.multiplicity))
        .collect();
    let built = direct_sum_all(parts.iter());
    match module_isomorphic(&built, m, cfg.trials, cfg.seed) {
        IsoOutcome::Isomorphic(psi) => {
            DecomposeOutcome::Decomposed(Decomposition { summands, route, pencil, blocks, certificate: psi })
        }
        other => DecomposeOutcome::Unclassified(alloc::vec![format!(
            "identified summands could not be certified: {other:?}"
        )]),
    }
}

pub fn decompose(d: &Datum, cfg: &DecomposeConfig) -> DecomposeOutcome {
    decompose_module(&datum_to_module(d), cfg)
}
