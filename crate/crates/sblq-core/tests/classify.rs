use std::collections::{BTreeSet, VecDeque};

use proptest::prelude::*;
use sblq_core::classify::{classify, status_lookup, StatusTag, FACTS};
use sblq_core::decompose::{canonical_multiset, decompose, DecomposeConfig, DecomposeOutcome};
use sblq_core::exponents::ExponentSet;
use sblq_core::fixtures::{from_tags, random_equivalence, random_summands, shipped};
use sblq_core::linalg::{ratio, Poly, Rational};
use sblq_core::module::{apply_equivalence, datum_to_module};
use sblq_core::rng::Stream;
use sblq_core::tables::{build, Family, FamilyTag};

fn cfg() -> DecomposeConfig {
    DecomposeConfig::default()
}

fn seeded(seed: u64, budget: usize) -> Vec<FamilyTag> {
    random_summands(&mut Stream::new(seed, 31), budget)
}

/// Rational points of each symbolic exponent set.
fn sample_points(e: &ExponentSet) -> Vec<[Rational; 3]> {
    let r = |a: i64, b: i64| ratio(a, b);
    let at = |i: usize, v: Rational, rest: [Rational; 2]| {
        let mut q = [rest[0].clone(), rest[0].clone(), rest[0].clone()];
        let mut k = 0;
        for (j, slot) in q.iter_mut().enumerate() {
            if j + 1 == i {
                *slot = v.clone();
            } else {
                *slot = rest[k].clone();
                k += 1;
            }
        }
        q
    };
    match *e {
        ExponentSet::HolderLine => vec![[r(1, 3), r(1, 3), r(1, 3)], [r(1, 2), r(1, 4), r(1, 4)], [r(1, 6), r(1, 3), r(1, 2)]],
        ExponentSet::YoungPlane => vec![[r(2, 3), r(2, 3), r(2, 3)], [r(1, 1), r(1, 2), r(1, 2)], [r(3, 4), r(1, 2), r(3, 4)]],
        ExponentSet::YoungWithUnit(i) => vec![at(i, r(1, 1), [r(1, 2), r(1, 2)]), at(i, r(1, 1), [r(1, 4), r(3, 4)])],
        ExponentSet::BilinearHolder(i) => {
            vec![at(i, r(1, 3), [r(2, 3), r(2, 3)]), at(i, r(1, 2), [r(1, 2), r(1, 2)]), at(i, r(3, 4), [r(1, 4), r(1, 4)])]
        }
        ExponentSet::LoomisWhitney => vec![[r(1, 2), r(1, 2), r(1, 2)]],
    }
}

#[test]
fn exponent_sets_sit_on_the_necessity_hyperplane() {
    let mut checked = 0;
    let data = shipped().into_iter().map(|(_, d, _)| d).chain((0..40).map(|s| from_tags(&seeded(s, 8)).unwrap()));
    for d in data {
        let v = classify(&d, &cfg()).unwrap();
        for c in &v.cases {
            for q in sample_points(&c.exponents) {
                assert!(c.exponents.constraints().iter().all(|k| k.holds_at(&q)), "sample outside {}", c.exponents);
                assert!(v.necessity.equality_constraint.holds_at(&q), "{} vs {}", c.exponents, v.necessity.equality_constraint);
                checked += 1;
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn pencil_blocks_fill_the_pencil() {
    for seed in 0..60 {
        let d = from_tags(&seeded(seed, 10)).unwrap();
        let DecomposeOutcome::Decomposed(dec) = decompose(&d, &cfg()) else { panic!("seed {seed}") };
        if let Some(p) = &dec.pencil {
            let (rows, cols) = dec.blocks.iter().fold((0, 0), |(r, c), b| (r + b.shape().0, c + b.shape().1));
            // blocks are indexed on the transposed (datum-side) pencil
            assert_eq!((rows, cols), (p.a, p.b), "seed {seed}");
        } else {
            assert!(dec.blocks.is_empty());
        }
    }
}

#[test]
fn extra_c0_summands_leave_the_rest_alone() {
    let c0 = FamilyTag::new(Family::C, 0);
    for seed in 0..30 {
        let tags = seeded(seed, 8);
        let mut with = tags.clone();
        with.extend(std::iter::repeat(c0.clone()).take(1 + seed as usize % 3));
        let d = from_tags(&with).unwrap();
        let DecomposeOutcome::Decomposed(dec) = decompose(&d, &cfg()) else { panic!("seed {seed}") };
        let strip = |v: Vec<FamilyTag>| canonical_multiset(v.into_iter().filter(|t| *t != c0));
        assert_eq!(strip(dec.expanded()), strip(tags.clone()), "seed {seed}");
        // the certificate maps the direct sum of the reported summands onto M_H
        let parts: Vec<_> = dec.expanded().iter().map(|t| build(t).unwrap()).collect();
        let sum = sblq_core::module::direct_sum_all(parts.iter());
        let m = datum_to_module(&d);
        let psi = &dec.certificate;
        assert_eq!(sblq_core::linalg::rank(psi), m.dim);
        for i in 0..4 {
            let img = sblq_core::Subspace::span(&psi.mul(sum.sub[i].basis()));
            assert!(img.same_span(&m.sub[i]), "seed {seed} slot {i}");
        }
    }
}

#[test]
fn bounded_keys_are_cited() {
    let mut keys: BTreeSet<String> = BTreeSet::new();
    let data = shipped().into_iter().map(|(_, d, _)| d).chain((0..60).map(|s| from_tags(&seeded(s, 10)).unwrap()));
    for d in data {
        if let StatusTag::Bounded { key, .. } = classify(&d, &cfg()).unwrap().status {
            keys.insert(key);
        }
    }
    let readme = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md")).expect("README.md");
    let table_rows: Vec<&str> = readme.lines().filter(|l| l.starts_with("| `")).collect();
    for k in keys.iter().map(String::as_str).chain(FACTS.iter().map(|f| f.key)) {
        let rows = table_rows.iter().filter(|l| l.starts_with(&format!("| `{k}`"))).count();
        assert_eq!(rows, 1, "{k} must have exactly one citation row");
    }
}

// --- closure oracle -------------------------------------------------------------------

/// Alphabet for the exhaustive check, as (family, n).
const ALPHABET: [(Family, usize); 9] = [
    (Family::N, 1),
    (Family::C, 1),
    (Family::C, 2),
    (Family::J1, 1),
    (Family::J2, 1),
    (Family::J3, 1),
    (Family::J1, 2),
    (Family::J2, 2),
    (Family::J3, 2),
];

type Word = Vec<(Family, usize)>;

fn sorted(mut w: Word) -> Word {
    w.sort();
    w
}

/// The fact instances of the citation table, written out over the alphabet.
fn seeds(max_len: usize) -> Vec<Word> {
    let js = [Family::J1, Family::J2, Family::J3];
    let mut out: Vec<Word> = vec![vec![], vec![(Family::N, 1)]];
    for k in 1..=max_len {
        out.push(vec![(Family::C, 1); k]);
    }
    for j in js {
        out.push(vec![(j, 2)]);
        out.push(vec![(Family::N, 1), (j, 1)]);
        out.push(vec![(Family::C, 1), (j, 1)]);
    }
    for a in 0..3 {
        for b in a + 1..3 {
            out.push(vec![(js[a], 1), (js[b], 1)]);
        }
    }
    for k in 1..=max_len {
        out.push([(Family::J1, 1), (Family::J2, 1), (Family::J3, 1), (Family::C, 1)].repeat(k));
    }
    // sums of N and C_m, m ≥ 1
    let nc = [(Family::N, 1), (Family::C, 1), (Family::C, 2)];
    let mut layer: Vec<Word> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|w| nc.iter().map(move |x| sorted([w.clone(), vec![*x]].concat()))).collect();
        out.extend(layer.iter().cloned());
    }
    out.into_iter().map(sorted).collect()
}

/// Closure under "drop a summand" and "lower a J index by one".
fn closure(max_len: usize) -> BTreeSet<Word> {
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    let mut queue: VecDeque<Word> = seeds(max_len).into_iter().collect();
    while let Some(w) = queue.pop_front() {
        if !seen.insert(w.clone()) {
            continue;
        }
        for i in 0..w.len() {
            let mut dropped = w.clone();
            dropped.remove(i);
            queue.push_back(dropped);
            let (f, n) = w[i];
            if matches!(f, Family::J1 | Family::J2 | Family::J3) && n >= 2 {
                let mut lowered = w.clone();
                lowered[i] = (f, n - 1);
                queue.push_back(sorted(lowered));
            }
        }
    }
    seen
}

fn to_tags(w: &Word) -> Vec<FamilyTag> {
    w.iter()
        .map(|&(f, n)| if f == Family::N { FamilyTag::regular(f, Poly::from_i64(&[-2, 1])) } else { FamilyTag::new(f, n) })
        .collect()
}

fn words(len: usize) -> Vec<Word> {
    let mut out: Vec<Word> = vec![vec![]];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|w| {
                let last = w.last().map_or(0, |x| ALPHABET.iter().position(|a| a == x).unwrap());
                ALPHABET[last..].iter().map(move |x| [w.clone(), vec![*x]].concat())
            })
            .collect();
    }
    out
}

#[test]
fn status_closure_matches_the_oracle() {
    let bounded = closure(3);
    let mut total = 0;
    for len in 0..=3 {
        for w in words(len) {
            let st = status_lookup(&to_tags(&w));
            assert_eq!(st.is_bounded(), bounded.contains(&sorted(w.clone())), "{w:?}: {st}");
            // confluence: the verdict does not depend on the order of the summands
            let mut rev = to_tags(&w);
            rev.reverse();
            assert_eq!(status_lookup(&rev), st, "{w:?}");
            total += 1;
        }
    }
    assert!(total > 200);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn verdicts_are_equivalence_invariant(seed in 0u64..100_000) {
        let d = from_tags(&seeded(seed, 10)).unwrap();
        let e = random_equivalence(&mut Stream::new(seed, 32), &d);
        let d2 = apply_equivalence(&d, &e).unwrap();
        let (a, b) = (classify(&d, &cfg()).unwrap(), classify(&d2, &cfg()).unwrap());
        prop_assert_eq!(&a.status, &b.status);
        prop_assert_eq!(&a.cases, &b.cases);
        let ms = |v: &sblq_core::classify::Verdict| {
            canonical_multiset(v.summands.iter().flat_map(|s| std::iter::repeat(s.tag.clone()).take(s.multiplicity)))
        };
        prop_assert_eq!(ms(&a), ms(&b));
    }

    #[test]
    fn decomposition_is_equivalence_invariant(seed in 0u64..100_000) {
        let tags = seeded(seed, 12);
        let d = from_tags(&tags).unwrap();
        let e = random_equivalence(&mut Stream::new(seed, 33), &d);
        let d2 = apply_equivalence(&d, &e).unwrap();
        let (DecomposeOutcome::Decomposed(x), DecomposeOutcome::Decomposed(y)) = (decompose(&d, &cfg()), decompose(&d2, &cfg())) else {
            return Err(TestCaseError::fail("unclassified"));
        };
        prop_assert_eq!(canonical_multiset(x.expanded()), canonical_multiset(y.expanded()));
        prop_assert_eq!(canonical_multiset(x.expanded()), canonical_multiset(tags));
    }
}
