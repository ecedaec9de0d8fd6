//! One line per acceptance criterion. Exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use sblq_core::classify::{classify, CaseTag};
use sblq_core::decompose::{canonical_multiset, decompose, DecomposeConfig, DecomposeOutcome};
use sblq_core::fixtures::{from_tags, random_equivalence, random_summands, shipped};
use sblq_core::iso::module_isomorphic;
use sblq_core::linalg::Poly;
use sblq_core::module::apply_equivalence;
use sblq_core::numcheck::{
    calibrate, check_equivalence_invariance, default_form, eval_form, extend_kernel, verify_mikhlin, KernelSpec,
    MikhlinGrid, QuadSpec,
};
use sblq_core::rng::Stream;
use sblq_core::rotations::{
    decay_exponent_fit, funk_eigenvalue, funk_eigenvalue_gamma, slice_check, superposition_pair, verify_superposition,
    SphereGrid,
};
use sblq_core::tables::{all_perms, build, dim_vector, permutation_orbits, Family, FamilyTag, GENERAL_FAMILIES, HOLDER_FAMILIES, SPORADIC_FAMILIES, NON_HOLDER_SERIES};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

/// Statuses the shipped fixtures must produce, with the case each non-Hölder one must hit.
const EXPECTED: [(&str, &str, Option<CaseTag>); 11] = [
    ("bht", "Bounded(lacey-thiele)", None),
    ("coifman_meyer_1", "Bounded(coifman-meyer)", None),
    ("coifman_meyer_2", "Bounded(coifman-meyer)", None),
    ("twisted_paraproduct", "Bounded(kovac-twisted)", None),
    ("j2", "Bounded(demeter-thiele)", None),
    ("n1_j1", "Bounded(demeter-thiele)", None),
    ("three_twisted", "Bounded(thm-3-twisted)", None),
    ("triangular_hilbert", "OpenContainsT", None),
    ("young", "Bounded(thm-i-ii-iii)", Some(CaseTag::II)),
    ("loomis_whitney", "Bounded(thm-i-ii-iii)", Some(CaseTag::III)),
    ("bilinear_holder_pk", "Bounded(thm-i-ii-iii)", Some(CaseTag::I)),
];

/// Criterion 1, plus the report text used by the determinism check.
fn fixture_verdicts() -> (Outcome, String) {
    let start = Instant::now();
    let cfg = DecomposeConfig::default();
    let fixtures: BTreeMap<String, _> = shipped().into_iter().map(|(s, d, _)| (s, d)).collect();
    let mut report = String::new();
    let mut bad = Vec::new();
    for (stem, want, case) in EXPECTED {
        let Some(d) = fixtures.get(stem) else {
            bad.push(format!("{stem} missing"));
            continue;
        };
        match classify(d, &cfg) {
            Ok(v) => {
                report.push_str(&format!("{stem}: {v:?}\n"));
                let case_ok = case.map_or(true, |c| v.cases.iter().any(|m| m.case == c));
                if v.status.short() != want || !case_ok || v.unclassified() {
                    bad.push(format!("{stem}: {}", v.status.short()));
                }
            }
            Err(e) => bad.push(format!("{stem}: {e}")),
        }
    }
    let t = start.elapsed();
    let pass = bad.is_empty() && t < Duration::from_secs(5) && fixtures.len() == EXPECTED.len();
    (outcome(pass, format!("{} fixtures in {} {}", EXPECTED.len(), secs(t), bad.join("; "))), report)
}

fn round_trips() -> (Outcome, String) {
    let start = Instant::now();
    let cfg = DecomposeConfig::default();
    let mut failures = Vec::new();
    let mut report = String::new();
    for case in 0..100u64 {
        let mut s = Stream::new(case, 11);
        let tags = random_summands(&mut s, 12);
        let d = from_tags(&tags).expect("constructors are valid");
        let e = random_equivalence(&mut s, &d);
        let scrambled = apply_equivalence(&d, &e).expect("invertible");
        match decompose(&scrambled, &cfg) {
            DecomposeOutcome::Decomposed(dec) => {
                report.push_str(&format!("{case}: {:?} {:?}\n", dec.summands, dec.certificate));
                if canonical_multiset(dec.expanded()) != canonical_multiset(tags.clone()) {
                    failures.push(case);
                }
            }
            DecomposeOutcome::Unclassified(why) => {
                report.push_str(&format!("{case}: unclassified {why:?}\n"));
                failures.push(case);
            }
        }
    }
    let t = start.elapsed();
    let pass = failures.is_empty() && t < Duration::from_secs(60);
    (outcome(pass, format!("100 cases, failures {failures:?}, {}", secs(t))), report)
}

fn tag(f: Family, n: usize) -> FamilyTag {
    if f.needs_poly() {
        FamilyTag::regular(f, Poly::from_i64(&[-3, 1]).pow(n))
    } else if f.has_size() {
        FamilyTag::new(f, n)
    } else {
        FamilyTag::fixed(f)
    }
}

fn dim_audit() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for f in GENERAL_FAMILIES.into_iter().chain(HOLDER_FAMILIES).chain(SPORADIC_FAMILIES).chain(NON_HOLDER_SERIES) {
        let ns: Vec<usize> = if f.has_size() { (f.min_n()..=4).collect() } else { vec![0] };
        for n in ns {
            let t = tag(f, n);
            checked += 1;
            match (dim_vector(&t), build(&t)) {
                (Ok(dv), Ok(m)) if dv == m.dim_vector() => {}
                _ => bad.push(t.label()),
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} tags, mismatches {bad:?}"))
}

fn type_i_orbits() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for n in 1..=2 {
        let built: Vec<_> = all_perms().into_iter().map(|p| (p, build(&tag(Family::TypeI, n).with_perm(p)).unwrap())).collect();
        // classes found by certificates alone
        let mut reps: Vec<usize> = Vec::new();
        for (i, (_, m)) in built.iter().enumerate() {
            if !reps.iter().any(|&r| module_isomorphic(&built[r].1, m, 32, 0).is_isomorphic()) {
                reps.push(i);
            }
        }
        let declared = permutation_orbits(Family::TypeI, n).unwrap();
        let find = |p: [usize; 4]| built.iter().find(|(q, _)| *q == p).map(|(_, m)| m).unwrap();
        let intra = declared.iter().all(|cls| {
            cls[1..].iter().all(|&p| module_isomorphic(find(cls[0]), find(p), 32, 0).is_isomorphic())
        });
        pass &= reps.len() == 6 && declared.len() == 6 && intra;
        details.push(format!("n={n}: {} certified classes, {} declared, intra-class {}", reps.len(), declared.len(), intra));
    }
    outcome(pass, details.join("; "))
}

fn funk_spectrum() -> Outcome {
    let mut worst_l2: f64 = 0.0;
    let mut worst_gamma: f64 = 0.0;
    let mut odd_ok = true;
    for d in 3..=8 {
        worst_l2 = worst_l2.max((funk_eigenvalue(2, d).abs() - 1.0 / (d as f64 - 1.0)).abs());
        for n in 0..=40 {
            if n % 2 == 1 {
                odd_ok &= funk_eigenvalue(n, d) == 0.0;
            } else {
                worst_gamma = worst_gamma.max((funk_eigenvalue(n, d) - funk_eigenvalue_gamma(n, d)).abs());
            }
        }
    }
    let slopes: Vec<f64> = (3..=5).map(|d| decay_exponent_fit(d, 20, 40)).collect();
    let slope_ok = slopes.iter().zip(3..=5).all(|(s, d)| (s - (2.0 - d as f64) / 2.0).abs() <= 0.1);
    let pass = worst_l2 <= 1e-12 && worst_gamma <= 1e-10 && odd_ok && slope_ok;
    outcome(
        pass,
        format!("|l2|-1/(d-1) {worst_l2:.1e}, gamma vs ratio {worst_gamma:.1e}, odd zero {odd_ok}, slopes {slopes:.3?}"),
    )
}

fn slice_reconstruction() -> Outcome {
    let start = Instant::now();
    match slice_check(8, 32, 0, 5, 5) {
        Ok(sc) => {
            let t = start.elapsed();
            let pass = sc.repr_residual_max < 1e-6 && sc.gamma_circle_mean_max < 1e-10 && t < Duration::from_secs(30);
            outcome(
                pass,
                format!(
                    "repr residual {:.1e}, circle means {:.1e}, {}",
                    sc.repr_residual_max,
                    sc.gamma_circle_mean_max,
                    secs(t)
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn superposition() -> Outcome {
    let grid = SphereGrid::new(16);
    let mut residuals = Vec::new();
    let mut pass = true;
    for k in 0..3 {
        let (om, f) = superposition_pair(0, k);
        pass &= f.terms.iter().all(|(g, _)| g.a >= 0.5 && g.b <= 2.0);
        match verify_superposition(&om, &f, &grid) {
            Ok(s) => {
                pass &= s.residual < 1e-5 && s.lhs.abs() > 1e-3;
                residuals.push(s.residual);
            }
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    outcome(pass, format!("residuals {:?}", residuals.iter().map(|r| format!("{r:.1e}")).collect::<Vec<_>>()))
}

fn kernel_extension() -> Outcome {
    let run = || -> Result<Outcome, sblq_core::Error> {
        let k = extend_kernel(&KernelSpec::truncated_odd(0.25, 4.0), 1)?;
        let (norm, _) = calibrate(&k, 2)?;
        let fine = verify_mikhlin(&norm, 2, &MikhlinGrid::fine())?;
        let big = verify_mikhlin(&norm.scaled(100.0), 2, &MikhlinGrid::fine())?;
        let pass = fine.pass && !big.pass && (big.worst - 100.0).abs() <= 5.0;
        Ok(outcome(pass, format!("normalized constant {:.4}, x100 constant {:.2}", fine.worst, big.worst)))
    };
    run().unwrap_or_else(|e| outcome(false, e.to_string()))
}

fn equivalence_invariance() -> Outcome {
    let mut checked = Vec::new();
    let mut bad = Vec::new();
    for (stem, d, _) in shipped() {
        if d.dim_h > 5 {
            continue;
        }
        let quad = match d.dim_h {
            0..=3 => QuadSpec::Tensor(32),
            4 => QuadSpec::Tensor(16),
            _ => QuadSpec::MonteCarlo { samples: 1 << 16, seed: 0 },
        };
        let spec = default_form(&d, 0);
        for k in 0..3 {
            let e = random_equivalence(&mut Stream::new(0, 100 + k), &d);
            match check_equivalence_invariance(&spec, &e, quad) {
                Ok(r) if r.pass => {}
                Ok(r) => bad.push(format!("{stem}#{k}: {:.1e} > {:.1e}", r.residual, r.tolerance)),
                Err(e) => bad.push(format!("{stem}#{k}: {e}")),
            }
        }
        checked.push(stem);
    }
    outcome(bad.is_empty() && !checked.is_empty(), format!("{} fixtures x 3 {}", checked.len(), bad.join("; ")))
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sblq")).args(args).output().expect("sblq runs");
    let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or(serde_json::Value::Null);
    if let Some(o) = v.as_object_mut() {
        o.remove("timing");
    }
    (out.status.code().unwrap_or(-1), v.to_string())
}

fn determinism(first: &[String; 2]) -> Outcome {
    let again = [fixture_verdicts().1, round_trips().1];
    let mut same = again[0] == first[0] && again[1] == first[1];
    let mut notes = vec![format!("criteria 1-2 reports identical: {same}")];

    let d = shipped().into_iter().find(|(s, _, _)| s == "twisted_paraproduct").unwrap().1;
    let spec = default_form(&d, 3);
    let q = QuadSpec::MonteCarlo { samples: 50_000, seed: 17 };
    let (a, b) = (eval_form(&spec, q), eval_form(&spec, q));
    let mc_same = matches!((a, b), (Ok(x), Ok(y)) if x.value.to_bits() == y.value.to_bits() && x.error.to_bits() == y.error.to_bits());
    same &= mc_same;
    notes.push(format!("MC bitwise: {mc_same}"));

    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let file = |s: &str| dir.join(format!("{s}.json")).to_string_lossy().into_owned();
    let runs: Vec<Vec<String>> = vec![
        vec!["classify".into(), file("three_twisted"), "--certificates".into()],
        vec!["decompose".into(), file("n1_j1"), "--refine-real".into()],
        vec!["numcheck".into(), "eval".into(), file("young"), "--quad".into(), "mc:20000:5".into()],
        vec!["numcheck".into(), "equiv".into(), file("bht"), "--quad".into(), "mc:8192:2".into()],
    ];
    let mut cli_same = true;
    for r in &runs {
        let args: Vec<&str> = r.iter().map(String::as_str).collect();
        let (c1, o1) = cli(&args);
        let (c2, o2) = cli(&args);
        cli_same &= c1 == c2 && o1 == o2 && o1 != "null";
    }
    same &= cli_same;
    notes.push(format!("CLI reports identical: {cli_same}"));
    outcome(same, notes.join(", "))
}

fn main() {
    let (c1, r1) = fixture_verdicts();
    let (c2, r2) = round_trips();
    let results = [
        ("fixture verdict suite", c1),
        ("round-trip decomposition", c2),
        ("dimension-vector audit", dim_audit()),
        ("permutation-orbit audit", type_i_orbits()),
        ("Funk spectrum", funk_spectrum()),
        ("slice reconstruction", slice_reconstruction()),
        ("superposition", superposition()),
        ("kernel extension", kernel_extension()),
        ("equivalence invariance", equivalence_invariance()),
        ("determinism", determinism(&[r1, r2])),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("criterion {:>2} {}: {} ({})", i + 1, if o.pass { "PASS" } else { "FAIL" }, name, o.detail.trim());
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
