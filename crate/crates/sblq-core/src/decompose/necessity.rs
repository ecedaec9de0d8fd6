//! The two necessary conditions for p-boundedness, evaluated on the datum side.
//!
//! With `K = ker Π₀` and `K_i = K ∩ ker Π_i`, the first condition is `Π_i K = Π_i H`.
//! The second, `dim H' ≤ Σ q_i dim Π_i H'`, is screened on the lattice generated by
//! `K, K₁, K₂, K₃` under sum and intersection (three rounds), with equality at `H' = K`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::exponents::{describe, exponent_box, feasible, LinearConstraint, Relation};
use crate::linalg::{kernel_basis, rank, rat, subspace_intersect, subspace_sum, Matrix, Subspace};
use crate::module::Datum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeEntry {
    /// Lattice word in `K, K1, K2, K3`.
    pub description: String,
    pub dim: usize,
    /// `dim Π_i H'` for `i = 1, 2, 3`.
    pub image_dims: [usize; 3],
}

impl LatticeEntry {
    /// `dim H' ≤ Σ q_i dim Π_i H'` as `−Σ d_i q_i ≤ −dim H'`.
    pub fn constraint(&self) -> LinearConstraint {
        LinearConstraint::new(
            self.image_dims.map(|d| -rat(d as i64)),
            Relation::Le,
            -rat(self.dim as i64),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecessityReport {
    /// `Π_i ker Π₀ = Π_i H`; index 0 is vacuous and always `true`.
    pub surjectivity_on_kernel: [bool; 4],
    pub kernel_dim: usize,
    pub lattice_inequalities: Vec<LatticeEntry>,
    /// `Σ q_i dim Π_i K = dim K`.
    pub equality_constraint: LinearConstraint,
}

impl NecessityReport {
    pub fn surjectivity_holds(&self) -> bool {
        self.surjectivity_on_kernel.iter().all(|&b| b)
    }

    /// Box, equality and every lattice inequality.
    pub fn constraints(&self) -> Vec<LinearConstraint> {
        let mut cs = exponent_box();
        cs.push(self.equality_constraint.clone());
        cs.extend(self.lattice_inequalities.iter().map(LatticeEntry::constraint));
        cs
    }

    pub fn feasible_with(&self, extra: &[LinearConstraint]) -> bool {
        let mut cs = self.constraints();
        cs.extend_from_slice(extra);
        feasible(&cs)
    }

    /// Human-readable reason the datum cannot be p-bounded for any finite p, if any.
    pub fn witness(&self) -> Option<String> {
        for i in 1..4 {
            if !self.surjectivity_on_kernel[i] {
                return Some(format!("Pi{i} ker Pi0 != Pi{i} H"));
            }
        }
        if self.feasible_with(&[]) {
            return None;
        }
        let mut base = exponent_box();
        base.push(self.equality_constraint.clone());
        if !feasible(&base) {
            return Some(format!(
                "H' = K: equality {} has no solution with 0 < q_i <= 1",
                self.equality_constraint
            ));
        }
        for e in &self.lattice_inequalities {
            let mut cs = base.clone();
            cs.push(e.constraint());
            if !feasible(&cs) {
                return Some(format!(
                    "H' = {} (dim {}, images {:?}): {} contradicts {}",
                    e.description,
                    e.dim,
                    e.image_dims,
                    e.constraint(),
                    self.equality_constraint
                ));
            }
        }
        let all: Vec<LinearConstraint> = self.lattice_inequalities.iter().map(LatticeEntry::constraint).collect();
        Some(format!("lattice inequalities jointly infeasible: {}", describe(&all)))
    }
}

pub fn necessary_conditions(d: &Datum) -> NecessityReport {
    let k = kernel_basis(&d.pi[0]);
    let kb = k.basis();
    let mut surj = [true; 4];
    for i in 1..4 {
        surj[i] = rank(&d.pi[i].mul(kb)) == d.dims[i];
    }
    let image_dims = |s: &Subspace| -> [usize; 3] { core::array::from_fn(|i| rank(&d.pi[i + 1].mul(s.basis()))) };

    let mut gens: Vec<(Subspace, String)> = alloc::vec![(k.clone(), "K".into())];
    for i in 1..4 {
        let ki = subspace_intersect(&k, &kernel_basis(&d.pi[i])).expect("same ambient");
        gens.push((ki, format!("K{i}")));
    }
    let mut seen: Vec<Matrix> = Vec::new();
    let mut lattice: Vec<(Subspace, String)> = Vec::new();
    let mut push = |s: Subspace, name: String, lattice: &mut Vec<(Subspace, String)>| {
        let key = s.canonical();
        if !seen.contains(&key) {
            seen.push(key);
            lattice.push((s, name));
        }
    };
    for (s, n) in gens {
        push(s, n, &mut lattice);
    }
    for _round in 0..3 {
        let current = lattice.clone();
        for a in 0..current.len() {
            for b in a + 1..current.len() {
                let (sa, na) = &current[a];
                let (sb, nb) = &current[b];
                let s = subspace_sum(sa, sb).expect("same ambient");
                push(s, format!("({na} + {nb})"), &mut lattice);
                let c = subspace_intersect(sa, sb).expect("same ambient");
                push(c, format!("({na} ∩ {nb})"), &mut lattice);
            }
        }
    }
    let lattice_inequalities = lattice
        .iter()
        .filter(|(s, _)| s.dim() > 0)
        .map(|(s, n)| LatticeEntry { description: n.clone(), dim: s.dim(), image_dims: image_dims(s) })
        .collect();
    let kd = image_dims(&k);
    NecessityReport {
        surjectivity_on_kernel: surj,
        kernel_dim: k.dim(),
        lattice_inequalities,
        equality_constraint: LinearConstraint::new(kd.map(|x| rat(x as i64)), Relation::Eq, rat(k.dim() as i64)),
    }
}
