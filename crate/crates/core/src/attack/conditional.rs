use crate::error::Result;
use crate::hbb::required_charlie;
use crate::qmath::{CMatrix, CVector};
use crate::qstate::{outcome_ket, Outcome, Sign, BRANCH_EPS};

use super::spec::{global_state, AttackSpec};
use super::Case;

/// Charlie's `C ⊗ E` state for one pair of Alice/Bob outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalEntry {
    pub alice: Outcome,
    pub bob: Outcome,
    /// Probability of this outcome pair.
    pub weight: f64,
    /// Unnormalized branch `(<alice| ⊗ <bob|) |Ψ>`; its squared norm is `weight`.
    pub branch: CVector,
    /// Normalized branch, `None` when the weight is at most `1e-12`.
    pub phi: Option<CVector>,
}

impl ConditionalEntry {
    /// What an honest Charlie would announce for this pair.
    pub fn required_announcement(&self) -> Outcome {
        required_charlie(self.alice, self.bob)
    }
}

/// The four conditional states of one basis case, indexed by
/// `2 * alice_sign + bob_sign` with `+` as 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalStateTable {
    pub case: Case,
    pub entries: [ConditionalEntry; 4],
}

impl ConditionalStateTable {
    pub fn entry(&self, alice: Sign, bob: Sign) -> &ConditionalEntry {
        &self.entries[2 * alice.bit() as usize + bob.bit() as usize]
    }

    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|e| e.weight).sum()
    }

    /// The pairs Charlie must tell apart: equal signs (`++`, `--`) against
    /// opposite signs (`+-`, `-+`). Within each set the required announcement
    /// is the same.
    pub fn announcement_sets(&self) -> [[&ConditionalEntry; 2]; 2] {
        use Sign::{Minus, Plus};
        [
            [self.entry(Plus, Plus), self.entry(Minus, Minus)],
            [self.entry(Plus, Minus), self.entry(Minus, Plus)],
        ]
    }
}

pub fn conditional_states(spec: &AttackSpec, case: Case) -> Result<ConditionalStateTable> {
    let psi = global_state(spec)?;
    let amps = psi.amplitudes();
    let ce = spec.ce_dim();
    let entries = [Sign::Plus, Sign::Minus]
        .iter()
        .flat_map(|&m| [Sign::Plus, Sign::Minus].into_iter().map(move |n| (m, n)))
        .map(|(m, n)| {
            let alice = Outcome::new(case.alice(), m);
            let bob = Outcome::new(case.bob(), n);
            let ka = outcome_ket(alice);
            let kb = outcome_ket(bob);
            let mut branch = CVector::zeros(ce);
            for i in 0..2 {
                for j in 0..2 {
                    let w = ka[i].conj() * kb[j].conj();
                    for k in 0..ce {
                        branch[k] += w * amps[(2 * i + j) * ce + k];
                    }
                }
            }
            let weight = branch.norm_sqr();
            let phi = if weight > BRANCH_EPS {
                branch.normalized()
            } else {
                None
            };
            ConditionalEntry {
                alice,
                bob,
                weight,
                branch,
                phi,
            }
        })
        .collect::<Vec<_>>();
    Ok(ConditionalStateTable {
        case,
        entries: entries.try_into().expect("four entries"),
    })
}

/// The two states Charlie must discriminate to learn Alice's sign, with
/// their prior probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoPair {
    pub plus: CMatrix,
    pub minus: CMatrix,
    pub p_plus: f64,
    pub p_minus: f64,
}

/// `ρ_±` is the mixture of the conditional states with Alice outcome `±`,
/// weighted by their actual probabilities. A zero-probability side is
/// replaced by the maximally mixed state; its prior is zero so it never
/// affects the discrimination error.
pub fn rho_pair(spec: &AttackSpec, case: Case) -> Result<RhoPair> {
    let table = conditional_states(spec, case)?;
    let dim = spec.ce_dim();
    let side = |alice: Sign| -> (CMatrix, f64) {
        let mut rho = CMatrix::zeros(dim, dim);
        let mut p = 0.0;
        for bob in Sign::ALL {
            let e = table.entry(alice, bob);
            rho = rho.add(&e.branch.projector()).expect("same dimension");
            p += e.weight;
        }
        if p > BRANCH_EPS {
            (rho.scale(crate::qmath::c(1.0 / p, 0.0)), p)
        } else {
            (
                CMatrix::identity(dim).scale(crate::qmath::c(1.0 / dim as f64, 0.0)),
                p,
            )
        }
    };
    let (plus, p_plus) = side(Sign::Plus);
    let (minus, p_minus) = side(Sign::Minus);
    // Renormalize the priors so they sum to one exactly.
    let total = p_plus + p_minus;
    Ok(RhoPair {
        plus,
        minus,
        p_plus: p_plus / total,
        p_minus: p_minus / total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{c, inner};

    #[test]
    fn honest_table_matches_ghz_correlations() {
        let spec = AttackSpec::honest();
        for case in Case::ALL {
            let table = conditional_states(&spec, case).unwrap();
            assert!((table.total_weight() - 1.0).abs() < 1e-12);
            for e in &table.entries {
                assert!((e.weight - 0.25).abs() < 1e-12);
                let want = outcome_ket(e.required_announcement());
                let got = e.phi.as_ref().unwrap();
                assert!(inner(&want, got).unwrap().norm() > 1.0 - 1e-12);
            }
        }
    }

    #[test]
    fn honest_rho_pair_is_uninformative() {
        let pair = rho_pair(&AttackSpec::honest(), Case::XX).unwrap();
        assert!(pair.plus.max_abs_diff(&pair.minus).unwrap() < 1e-12);
        let half = CMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(pair.plus.max_abs_diff(&half).unwrap() < 1e-12);
        assert!((pair.p_plus - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_weight_branch_has_no_phi() {
        // |Ψ> = |x+>_A |0>_B |0>_C: Alice never obtains x-.
        let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let e = CVector::basis(2, 0);
        let spec = AttackSpec::new(1, [h, crate::qmath::ZERO, h, crate::qmath::ZERO], [e.clone(), e.clone(), e.clone(), e]).unwrap();
        let table = conditional_states(&spec, Case::XX).unwrap();
        let empty = table.entries.iter().filter(|e| e.phi.is_none()).count();
        assert_eq!(empty, 2);
        let pair = rho_pair(&spec, Case::XX).unwrap();
        assert!((pair.p_plus - 1.0).abs() < 1e-12);
        assert!(pair.p_minus.abs() < 1e-12);
    }
}
