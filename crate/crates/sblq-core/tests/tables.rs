use proptest::prelude::*;
use sblq_core::fixtures::{from_tags, random_equivalence, random_summands, shipped};
use sblq_core::iso::module_isomorphic;
use sblq_core::linalg::{rank, Matrix, Poly, Subspace};
use sblq_core::module::{apply_equivalence, datum_to_module, direct_sum, module_to_datum, validate_datum};
use sblq_core::rng::Stream;
use sblq_core::tables::{all_perms, build, dim_vector, permutation_orbits, Family, FamilyTag, GENERAL_FAMILIES, HOLDER_FAMILIES, SPORADIC_FAMILIES, NON_HOLDER_SERIES};
use sblq_core::{Datum, FourModule};

/// A valid tag of family `f` with size `n` (the polynomial `(t − 3)^n` for 0/N, whose
/// cross-ratio orbit has six distinct points).
fn tag(f: Family, n: usize) -> FamilyTag {
    if f.needs_poly() {
        FamilyTag::regular(f, Poly::from_i64(&[-3, 1]).pow(n))
    } else if f.has_size() {
        FamilyTag::new(f, n)
    } else {
        FamilyTag::fixed(f)
    }
}

fn all_families() -> impl Iterator<Item = Family> {
    GENERAL_FAMILIES.into_iter().chain(HOLDER_FAMILIES).chain(SPORADIC_FAMILIES).chain(NON_HOLDER_SERIES)
}

fn sizes(f: Family, max: usize) -> Vec<usize> {
    if f.has_size() {
        (f.min_n()..=max).collect()
    } else {
        vec![0]
    }
}

/// `ψ` is invertible and carries slot `i` of `a` onto slot `i` of `b`, checked with plain
/// subspace arithmetic.
fn certifies(a: &FourModule, b: &FourModule, psi: &Matrix) -> bool {
    psi.rows() == b.dim
        && psi.cols() == a.dim
        && rank(psi) == a.dim
        && (0..4).all(|i| Subspace::span(&psi.mul(a.sub[i].basis())).same_span(&b.sub[i]))
}

#[test]
fn dim_vector_matches_built_modules() {
    for f in all_families() {
        for n in sizes(f, 4) {
            let t = tag(f, n);
            assert_eq!(dim_vector(&t).unwrap(), build(&t).unwrap().dim_vector(), "{}", t.label());
        }
    }
}

#[test]
fn table_modules_validate() {
    for f in all_families() {
        for n in sizes(f, 3) {
            let t = tag(f, n);
            let d = module_to_datum(&build(&t).unwrap());
            let rep = validate_datum(&d);
            assert!(rep.is_valid(), "{}", t.label());
            let zero_slot = (1..4).any(|i| d.dims[i] == 0);
            assert_eq!(!rep.warnings.is_empty(), zero_slot, "{}", t.label());
        }
    }
}

#[test]
fn module_datum_round_trip() {
    for f in all_families() {
        for n in sizes(f, 2) {
            let m = build(&tag(f, n)).unwrap();
            assert!(datum_to_module(&module_to_datum(&m)).same_spans(&m));
        }
    }
    for (stem, d, _) in shipped() {
        let back = module_to_datum(&datum_to_module(&d));
        assert_eq!((back.dim_h, back.dims), (d.dim_h, d.dims), "{stem}");
        for i in 0..4 {
            // same kernels, so the same form up to equivalence on H_i
            assert!(Subspace::span(&back.pi[i].transpose()).same_span(&Subspace::span(&d.pi[i].transpose())), "{stem}");
        }
    }
}

#[test]
fn permutation_classes_are_certified() {
    for f in GENERAL_FAMILIES {
        for n in sizes(f, 3) {
            let classes = permutation_orbits(f, n).unwrap();
            assert_eq!(classes.iter().map(Vec::len).sum::<usize>(), 24);
            let built = |p: [usize; 4]| build(&tag(f, n).with_perm(p)).unwrap();
            for cls in &classes {
                let rep = built(cls[0]);
                for &p in &cls[1..] {
                    let other = built(p);
                    let out = module_isomorphic(&rep, &other, 32, 0);
                    let psi = out.certificate().unwrap_or_else(|| panic!("{} n={n} {:?} {p:?}: {out:?}", f.name(), cls[0]));
                    assert!(certifies(&rep, &other, psi));
                }
            }
            for (i, a) in classes.iter().enumerate() {
                for b in &classes[i + 1..] {
                    let (ma, mb) = (built(a[0]), built(b[0]));
                    if ma.dim_vector() == mb.dim_vector() {
                        let out = module_isomorphic(&ma, &mb, 32, 0);
                        assert!(!out.is_isomorphic(), "{} n={n}: {:?} ~ {:?}", f.name(), a[0], b[0]);
                    }
                }
            }
        }
    }
}

#[test]
fn holder_families_are_general_types_in_disguise() {
    let pairs = [
        (Family::J1, Family::TypeI),
        (Family::J2, Family::TypeI),
        (Family::J3, Family::TypeI),
        (Family::N, Family::Type0),
        (Family::C, Family::TypeIII),
        (Family::T, Family::TypeIIIstar),
    ];
    for (small, big) in pairs {
        for n in sizes(small, 3) {
            let m = build(&tag(small, n)).unwrap();
            let found = all_perms().into_iter().any(|p| {
                let Ok(other) = build(&tag(big, n).with_perm(p)) else { return false };
                module_isomorphic(&m, &other, 32, 0).certificate().is_some_and(|psi| certifies(&other, &m, psi))
            });
            assert!(found, "{} n={n} is no permutation of {}", small.name(), big.name());
        }
    }
}

fn seeded_datum(seed: u64, budget: usize) -> Datum {
    let mut s = Stream::new(seed, 21);
    from_tags(&random_summands(&mut s, budget)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn equivalences_are_module_isomorphisms(seed in 0u64..10_000) {
        let d = seeded_datum(seed, 8);
        let e = random_equivalence(&mut Stream::new(seed, 22), &d);
        let d2 = apply_equivalence(&d, &e).unwrap();
        let (a, b) = (datum_to_module(&d), datum_to_module(&d2));
        let out = module_isomorphic(&a, &b, 32, seed);
        let psi = out.certificate().expect("equivalent data give isomorphic modules");
        prop_assert!(certifies(&a, &b, psi));
    }

    #[test]
    fn direct_sums_commute_and_add_dimensions(s1 in 0u64..10_000, s2 in 0u64..10_000) {
        let a = datum_to_module(&seeded_datum(s1, 5));
        let b = datum_to_module(&seeded_datum(s2, 5));
        let (ab, ba) = (direct_sum(&a, &b), direct_sum(&b, &a));
        prop_assert_eq!(ab.dim_vector(), a.dim_vector().add(&b.dim_vector()));
        let out = module_isomorphic(&ab, &ba, 32, 0);
        let psi = out.certificate().expect("a + b ~ b + a");
        prop_assert!(certifies(&ab, &ba, psi));
    }
}
