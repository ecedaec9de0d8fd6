//! Multiplicity enumeration over the non-Hölder families, certified by isomorphism search.

use alloc::vec::Vec;

use crate::iso::{module_isomorphic, IsoOutcome};
use crate::linalg::Matrix;
use crate::module::{direct_sum_all, DimVector, FourModule};
use crate::tables::{build, dim_vector, Family, FamilyTag};

pub const NONHOLDER_FAMILIES: [Family; 10] = [
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

/// The non-Hölder shapes of the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NonHolderCase {
    /// Case i: `P⁽ʲ⁾, K⁽ʲ⁾, P⁽ᵏ⁾, K⁽ᵏ⁾`.
    BilinearHolder,
    /// Case ii: `Y, Z`, plus `P⁽ⁱ⁾, K⁽ⁱ⁾` when `p_i = 1`.
    Young,
    /// Case iii: `L, B` and any `P`, `K`.
    LoomisWhitney,
}

impl NonHolderCase {
    pub fn families(self) -> Vec<Family> {
        let pk = [Family::P1, Family::P2, Family::P3, Family::K1, Family::K2, Family::K3];
        let mut out = match self {
            NonHolderCase::BilinearHolder => Vec::new(),
            NonHolderCase::Young => alloc::vec![Family::Y, Family::Z],
            NonHolderCase::LoomisWhitney => alloc::vec![Family::L, Family::B],
        };
        out.extend(pk);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    /// Matched families with multiplicities, in enumeration order (zeros dropped).
    pub parts: Vec<(FamilyTag, usize)>,
    /// `ψ : fixed ⊕ matched → m`.
    pub certificate: Matrix,
}

fn dv_vec(d: &DimVector) -> [i64; 5] {
    [d.m as i64, d.n[0] as i64, d.n[1] as i64, d.n[2] as i64, d.n[3] as i64]
}

fn invariants(m: &FourModule) -> Vec<i64> {
    m.lattice_invariants().into_iter().map(|x| x as i64).collect()
}

/// All multiplicity vectors `n` with `Σ n_f dv_f = target`, lexicographically ascending.
fn solutions(dvs: &[[i64; 5]], target: [i64; 5]) -> Vec<Vec<usize>> {
    fn rec(dvs: &[[i64; 5]], i: usize, rem: [i64; 5], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == dvs.len() {
            if rem.iter().all(|&x| x == 0) {
                out.push(cur.clone());
            }
            return;
        }
        let d = dvs[i];
        let mut rem = rem;
        let mut k = 0;
        loop {
            cur.push(k);
            rec(dvs, i + 1, rem, cur, out);
            cur.pop();
            for j in 0..5 {
                rem[j] -= d[j];
            }
            k += 1;
            // every family has m ≥ 1, so this terminates
            if rem.iter().any(|&x| x < 0) {
                break;
            }
        }
    }
    let mut out = Vec::new();
    rec(dvs, 0, target, &mut Vec::new(), &mut out);
    out
}

/// Find multiplicities of `families` such that `fixed ⊕ (matched) ≅ m`, with a certificate.
/// Candidates are screened by dimension vector and by the additive lattice invariants.
pub fn match_summands(
    m: &FourModule,
    fixed: &[FamilyTag],
    families: &[Family],
    trials: usize,
    seed: u64,
) -> Option<Match> {
    let fixed_mods: Vec<FourModule> = fixed.iter().map(|t| build(t).expect("valid tag")).collect();
    let fixed_sum = direct_sum_all(fixed_mods.iter());
    let mut target = dv_vec(&m.dim_vector());
    let fd = dv_vec(&fixed_sum.dim_vector());
    for j in 0..5 {
        target[j] -= fd[j];
    }
    if target.iter().any(|&x| x < 0) {
        return None;
    }
    let target_inv: Vec<i64> =
        invariants(m).iter().zip(invariants(&fixed_sum)).map(|(a, b)| a - b).collect();
    let tags: Vec<FamilyTag> = families.iter().map(|&f| FamilyTag::fixed(f)).collect();
    let mods: Vec<FourModule> = tags.iter().map(|t| build(t).expect("fixed families build")).collect();
    let dvs: Vec<[i64; 5]> = tags.iter().map(|t| dv_vec(&dim_vector(t).expect("valid"))).collect();
    let invs: Vec<Vec<i64>> = mods.iter().map(invariants).collect();
    for n in solutions(&dvs, target) {
        let inv_ok = (0..target_inv.len()).all(|j| {
            let s: i64 = n.iter().zip(&invs).map(|(&k, v)| k as i64 * v[j]).sum();
            s == target_inv[j]
        });
        if !inv_ok {
            continue;
        }
        let mut parts_mods: Vec<&FourModule> = fixed_mods.iter().collect();
        for (k, md) in n.iter().zip(&mods) {
            for _ in 0..*k {
                parts_mods.push(md);
            }
        }
        let candidate = direct_sum_all(parts_mods);
        if let IsoOutcome::Isomorphic(psi) = module_isomorphic(&candidate, m, trials, seed) {
            let parts = tags.iter().cloned().zip(n).filter(|(_, k)| *k > 0).collect();
            return Some(Match { parts, certificate: psi });
        }
    }
    None
}

/// Certified decomposition of `m` into the summands allowed by one non-Hölder case.
pub fn match_nonholder(m: &FourModule, case: NonHolderCase, trials: usize, seed: u64) -> Option<Match> {
    match_summands(m, &[], &case.families(), trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::direct_sum;

    fn b(f: Family) -> FourModule {
        build(&FamilyTag::fixed(f)).unwrap()
    }

    #[test]
    fn young_plus_z() {
        let m = direct_sum(&b(Family::Y), &b(Family::Z));
        let got = match_nonholder(&m, NonHolderCase::Young, 32, 0).unwrap();
        assert_eq!(got.parts, alloc::vec![(FamilyTag::fixed(Family::Y), 1), (FamilyTag::fixed(Family::Z), 1)]);
    }

    #[test]
    fn loomis_whitney() {
        let got = match_nonholder(&b(Family::L), NonHolderCase::LoomisWhitney, 32, 0).unwrap();
        assert_eq!(got.parts, alloc::vec![(FamilyTag::fixed(Family::L), 1)]);
        assert!(match_nonholder(&b(Family::L), NonHolderCase::Young, 32, 0).is_none());
    }

    #[test]
    fn p_and_k() {
        let m = direct_sum(&b(Family::P1), &b(Family::K1));
        let got = match_nonholder(&m, NonHolderCase::BilinearHolder, 32, 0).unwrap();
        assert_eq!(got.parts, alloc::vec![(FamilyTag::fixed(Family::P1), 1), (FamilyTag::fixed(Family::K1), 1)]);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let s = solutions(&[[1, 0, 0, 0, 0], [2, 0, 0, 0, 0]], [4, 0, 0, 0, 0]);
        assert_eq!(s, alloc::vec![alloc::vec![0, 2], alloc::vec![2, 1], alloc::vec![4, 0]]);
    }
}
