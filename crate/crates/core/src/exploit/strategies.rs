use rand::Rng;

use crate::error::{QssError, Result};
use crate::hbb::{infer_alice, AttackStrategy, Interceptor, Response, RevealedRound, Role};
use crate::qstate::{Axis, Basis, Gate, Outcome, Register, Sign};
use crate::rng::QssRng;

use super::{CaseId, Decoder};

fn uniform_basis(rng: &mut QssRng) -> Basis {
    if rng.random_bool(0.5) {
        Basis::X
    } else {
        Basis::Y
    }
}

fn read_ce(access: &mut Interceptor<'_>) -> Result<usize> {
    let c = access.measure("C", Axis::Z)?.bit() as usize;
    let e = access.measure("E", Axis::Z)?.bit() as usize;
    Ok(2 * c + e)
}

/// The one-ancilla circuit attack driven through the protocol engine.
#[derive(Debug, Clone, Default)]
pub struct CircuitAttack {
    decoder: Decoder,
}

impl CircuitAttack {
    pub fn with_decoder(decoder: Decoder) -> Self {
        Self { decoder }
    }

    pub fn decoder(&self) -> &Decoder {
        &self.decoder
    }
}

pub fn full_attack_strategy() -> CircuitAttack {
    CircuitAttack::default()
}

impl AttackStrategy for CircuitAttack {
    fn name(&self) -> &str {
        "hbb-circuit"
    }

    fn ancilla(&self) -> Vec<Register> {
        vec![Register::qubit("E")]
    }

    fn intercept(&mut self, _round_id: usize, access: &mut Interceptor<'_>) -> Result<()> {
        access.apply_gate(&Gate::h(), &["B"])?;
        access.apply_gate(&Gate::cnot(), &["B", "E"])
    }

    fn announce_basis(&mut self, _round_id: usize, rng: &mut QssRng) -> Basis {
        uniform_basis(rng)
    }

    fn respond(&mut self, round: &RevealedRound, access: &mut Interceptor<'_>) -> Result<Response> {
        let case = CaseId::from_bases(round.bases.alice, round.bases.bob);
        let config = self.decoder.config(case);
        match round.role {
            Role::Check => {
                access.apply_gate(self.decoder.cnot(), &["C", "E"])?;
                access.apply_unitary(&config.w.adjoint(), &["C"])?;
                let bit = self.decoder.detection_table(case)[read_ce(access)?];
                Ok(Response::Announce(Sign::from_bit(bit)))
            }
            Role::Key => {
                access.apply_unitary(&config.u.adjoint(), &["C"])?;
                let bit = self.decoder.info_table(case)[read_ce(access)?];
                Ok(Response::Guess(Sign::from_bit(bit)))
            }
            Role::Discarded => Err(QssError::InvalidArgument(format!(
                "round {} was discarded and needs no response",
                round.round_id
            ))),
        }
    }
}

/// Baseline: Charlie measures B in a random basis and forwards the collapsed
/// qubit. On kept rounds he measures C in his announced basis; check rounds
/// announce that result, key rounds combine it with the B result as if Bob
/// had used Charlie's basis for B.
#[derive(Debug, Clone, Default)]
pub struct InterceptResend {
    intercepted: Option<(usize, Outcome)>,
}

pub fn intercept_resend_strategy() -> InterceptResend {
    InterceptResend::default()
}

impl AttackStrategy for InterceptResend {
    fn name(&self) -> &str {
        "intercept-resend"
    }

    fn ancilla(&self) -> Vec<Register> {
        Vec::new()
    }

    fn intercept(&mut self, round_id: usize, access: &mut Interceptor<'_>) -> Result<()> {
        let basis = uniform_basis(access.rng());
        let sign = access.measure("B", basis)?;
        self.intercepted = Some((round_id, Outcome::new(basis, sign)));
        Ok(())
    }

    fn announce_basis(&mut self, _round_id: usize, rng: &mut QssRng) -> Basis {
        uniform_basis(rng)
    }

    fn respond(&mut self, round: &RevealedRound, access: &mut Interceptor<'_>) -> Result<Response> {
        let b_result = match self.intercepted {
            Some((id, outcome)) if id == round.round_id => outcome,
            _ => {
                return Err(QssError::Inconsistent(format!(
                    "no intercepted B result for round {}",
                    round.round_id
                )))
            }
        };
        let c_basis = round.bases.charlie;
        let c_result = Outcome::new(c_basis, access.measure("C", c_basis)?);
        match round.role {
            Role::Check => Ok(Response::Announce(c_result.sign)),
            Role::Key => Ok(Response::Guess(infer_alice(b_result, c_result).sign)),
            Role::Discarded => Err(QssError::InvalidArgument(format!(
                "round {} was discarded and needs no response",
                round.round_id
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hbb::{error_rate, info_rate, run_session, SessionConfig};

    fn cfg(rounds: usize) -> SessionConfig {
        SessionConfig {
            rounds,
            ..SessionConfig::default()
        }
    }

    #[test]
    fn circuit_attack_is_silent_and_complete() {
        let t = run_session(&cfg(2000), Some(&mut full_attack_strategy())).unwrap();
        assert_eq!(error_rate(&t).unwrap(), 0.0);
        assert_eq!(info_rate(&t).unwrap(), 1.0);
        assert_eq!(t.summary(), "error=0.0000 info=1.0000");
    }

    #[test]
    fn intercept_resend_is_noisy() {
        let t = run_session(&cfg(2000), Some(&mut intercept_resend_strategy())).unwrap();
        assert!(error_rate(&t).unwrap() > 0.15);
        assert!(info_rate(&t).unwrap() < 0.5);
    }

    #[test]
    fn corrupted_table_is_caught_in_session() {
        let decoder = Decoder::standard().with_detection_table(CaseId::XX, [0, 1, 1, 0]);
        let mut strategy = CircuitAttack::with_decoder(decoder);
        let t = run_session(&cfg(2000), Some(&mut strategy)).unwrap();
        assert!(error_rate(&t).unwrap() > 0.1);
    }
}
