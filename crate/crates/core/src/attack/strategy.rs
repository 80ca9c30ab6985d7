use rand::Rng;

use crate::error::{QssError, Result};
use crate::hbb::{AttackStrategy, Interceptor, Response, RevealedRound, Role};
use crate::qmath::{hermitian_eigen, CMatrix};
use crate::qstate::{Basis, Register, Sign};
use crate::rng::QssRng;

use super::conditional::conditional_states;
use super::detection::DEFAULT_TOL;
use super::spec::AttackSpec;
use super::structure::interaction_unitary;
use super::Case;

/// Eigenvalues above this count as the positive part of a Helstrom operator.
const POSITIVE_EPS: f64 = 1e-12;

/// Simulated attacker for an arbitrary realizable spec.
///
/// It applies the spec's interaction unitary to `B, C, E` and, once the bases
/// are revealed, performs the minimum-error measurement on `C, E`: between
/// the two announcement sets on check rounds, between Alice's two signs on
/// key rounds.
#[derive(Debug, Clone)]
pub struct HelstromStrategy {
    ancilla_dim: usize,
    unitary: CMatrix,
    /// Projector whose outcome means "announce `+`", per case.
    announce_plus: [CMatrix; 4],
    /// Projector whose outcome means "Alice obtained `+`", per case.
    guess_plus: [CMatrix; 4],
}

fn positive_part_projector(lambda: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eigen(lambda)?;
    Ok(eig.reassemble_with(|x| if x > POSITIVE_EPS { 1.0 } else { 0.0 }))
}

impl HelstromStrategy {
    pub fn new(spec: &AttackSpec) -> Result<Self> {
        let unitary = interaction_unitary(spec, DEFAULT_TOL)?;
        let dim = spec.ce_dim();
        let mut announce_plus = Vec::with_capacity(4);
        let mut guess_plus = Vec::with_capacity(4);
        for case in Case::ALL {
            let table = conditional_states(spec, case)?;
            let mut check = CMatrix::zeros(dim, dim);
            let mut key = CMatrix::zeros(dim, dim);
            for e in &table.entries {
                let weighted = e.branch.projector();
                check = match e.required_announcement().sign {
                    Sign::Plus => check.add(&weighted)?,
                    Sign::Minus => check.sub(&weighted)?,
                };
                key = match e.alice.sign {
                    Sign::Plus => key.add(&weighted)?,
                    Sign::Minus => key.sub(&weighted)?,
                };
            }
            announce_plus.push(positive_part_projector(&check)?);
            guess_plus.push(positive_part_projector(&key)?);
        }
        Ok(Self {
            ancilla_dim: spec.ancilla_dim(),
            unitary,
            announce_plus: announce_plus.try_into().expect("four cases"),
            guess_plus: guess_plus.try_into().expect("four cases"),
        })
    }
}

impl AttackStrategy for HelstromStrategy {
    fn name(&self) -> &str {
        "helstrom"
    }

    fn ancilla(&self) -> Vec<Register> {
        vec![Register::new("E", self.ancilla_dim)]
    }

    fn intercept(&mut self, _round_id: usize, access: &mut Interceptor<'_>) -> Result<()> {
        access.apply_unitary(&self.unitary, &["B", "C", "E"])
    }

    fn announce_basis(&mut self, _round_id: usize, rng: &mut QssRng) -> Basis {
        if rng.random_bool(0.5) {
            Basis::X
        } else {
            Basis::Y
        }
    }

    fn respond(&mut self, round: &RevealedRound, access: &mut Interceptor<'_>) -> Result<Response> {
        let case = Case::from_bases(round.bases.alice, round.bases.bob);
        let sign = |hit: bool| if hit { Sign::Plus } else { Sign::Minus };
        match round.role {
            Role::Check => {
                let hit = access.measure_projector(&self.announce_plus[case.index()], &["C", "E"])?;
                Ok(Response::Announce(sign(hit)))
            }
            Role::Key => {
                let hit = access.measure_projector(&self.guess_plus[case.index()], &["C", "E"])?;
                Ok(Response::Guess(sign(hit)))
            }
            Role::Discarded => Err(QssError::InvalidArgument(format!(
                "round {} was discarded and needs no response",
                round.round_id
            ))),
        }
    }
}
