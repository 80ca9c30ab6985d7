use rand::Rng;

use super::{
    error_rate, infer_alice, required_charlie, sift, BasisTriple, Role, RoundRecord,
    SessionTranscript,
};
use crate::error::{QssError, Result};
use crate::qmath::CMatrix;
use crate::qstate::{
    self, ghz_state, measure_projector, Axis, Basis, Gate, Outcome, Register, Sign, StateVector,
};
use crate::rng::{substream, QssRng};

const PROTOCOL_LABELS: [&str; 3] = ["A", "B", "C"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SessionConfig {
    pub rounds: usize,
    pub check_fraction: f64,
    pub seed: u64,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            rounds: 10_000,
            check_fraction: 0.5,
            seed: 42,
        }
    }
}

/// What the engine reveals to the attacker once Bob's and Charlie's bases
/// are committed and the round has been kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RevealedRound {
    pub round_id: usize,
    pub bases: BasisTriple,
    pub role: Role,
}

/// The attacker's reply for a kept round: an announcement for check rounds,
/// a guess of Alice's outcome sign for key rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Response {
    Announce(Sign),
    Guess(Sign),
}

/// Restricted access to the joint state: only the listed registers may be
/// touched, and every random draw comes from the round's stream.
pub struct Interceptor<'a> {
    state: &'a mut StateVector,
    allowed: Vec<String>,
    rng: &'a mut QssRng,
}

impl<'a> Interceptor<'a> {
    fn new(state: &'a mut StateVector, allowed: Vec<String>, rng: &'a mut QssRng) -> Self {
        Self { state, allowed, rng }
    }

    fn check(&self, targets: &[&str]) -> Result<()> {
        for t in targets {
            if !self.allowed.iter().any(|a| a == t) {
                return Err(QssError::BadTarget(format!(
                    "register {t} is not accessible here (allowed: {:?})",
                    self.allowed
                )));
            }
        }
        Ok(())
    }

    pub fn accessible(&self) -> &[String] {
        &self.allowed
    }

    pub fn registers(&self) -> &[Register] {
        self.state.registers()
    }

    pub fn apply_gate(&mut self, gate: &Gate, targets: &[&str]) -> Result<()> {
        self.check(targets)?;
        *self.state = qstate::apply_gate(self.state, gate, targets)?;
        Ok(())
    }

    pub fn apply_unitary(&mut self, u: &CMatrix, targets: &[&str]) -> Result<()> {
        self.check(targets)?;
        *self.state = self.state.apply_unitary(u, targets)?;
        Ok(())
    }

    pub fn measure(&mut self, label: &str, axis: impl Into<Axis>) -> Result<Sign> {
        self.check(&[label])?;
        let (sign, post) = qstate::measure_qubit(self.state, label, axis, self.rng)?;
        *self.state = post;
        Ok(sign)
    }

    /// Measures `{P, 1 - P}`; `true` means the `P` outcome.
    pub fn measure_projector(&mut self, projector: &CMatrix, targets: &[&str]) -> Result<bool> {
        self.check(targets)?;
        let (hit, post) = measure_projector(self.state, projector, targets, self.rng)?;
        *self.state = post;
        Ok(hit)
    }

    pub fn rng(&mut self) -> &mut QssRng {
        self.rng
    }
}

/// A dishonest Charlie.
///
/// Hooks are called in protocol order for every round: `intercept` when
/// qubits B and C leave Alice, `announce_basis` when Charlie must commit a
/// basis (before anything is revealed), and `respond` only for kept rounds,
/// after Alice has broadcast all three bases.
pub trait AttackStrategy {
    fn name(&self) -> &str;

    /// Private registers appended after `C`, each starting in `|0>`.
    fn ancilla(&self) -> Vec<Register>;

    /// Access covers `B`, `C` and the ancilla.
    fn intercept(&mut self, round_id: usize, access: &mut Interceptor<'_>) -> Result<()>;

    fn announce_basis(&mut self, round_id: usize, rng: &mut QssRng) -> Basis;

    /// Access covers `C` and the ancilla; `B` has already been measured by Bob.
    fn respond(&mut self, round: &RevealedRound, access: &mut Interceptor<'_>) -> Result<Response>;
}

fn random_basis(rng: &mut QssRng) -> Basis {
    if rng.random_bool(0.5) {
        Basis::X
    } else {
        Basis::Y
    }
}

/// Runs `config.rounds` protocol rounds. Round `k` draws all randomness from
/// substream `k` of `config.seed`, so equal seeds give identical transcripts.
pub fn run_session(
    config: &SessionConfig,
    mut strategy: Option<&mut dyn AttackStrategy>,
) -> Result<SessionTranscript> {
    if config.rounds == 0 {
        return Err(QssError::InvalidArgument("session needs at least one round".into()));
    }
    if !(0.0..=1.0).contains(&config.check_fraction) {
        return Err(QssError::InvalidArgument(format!(
            "check fraction {} outside [0, 1]",
            config.check_fraction
        )));
    }

    let mut rounds = Vec::with_capacity(config.rounds);
    let mut key_alice = Vec::new();
    let mut key_reconstructed = Vec::new();
    let mut guesses = strategy.as_ref().map(|_| Vec::new());

    for round_id in 0..config.rounds {
        let mut rng = substream(config.seed, round_id as u64);
        let (record, reconstructed) = match strategy.as_deref_mut() {
            None => honest_round(round_id, config, &mut rng)?,
            Some(s) => {
                let record = attacked_round(round_id, config, s, &mut rng)?;
                // The dishonest agent cooperates with Bob after the fact and
                // steers the reconstruction to his own guess.
                let guess = record.attacker_guess;
                (record, guess)
            }
        };
        if record.role == Role::Key {
            key_alice.push(record.alice.sign.bit());
            key_reconstructed.push(reconstructed.ok_or_else(|| {
                QssError::Inconsistent(format!("key round {round_id} has no reconstruction"))
            })?);
            if let (Some(g), Some(bit)) = (&mut guesses, record.attacker_guess) {
                g.push(bit);
            }
        }
        rounds.push(record);
    }

    let mut transcript = SessionTranscript {
        rounds,
        check_error_rate: None,
        key_alice,
        key_reconstructed,
        attacker_key_guess: guesses,
    };
    transcript.check_error_rate = error_rate(&transcript).ok();
    Ok(transcript)
}

fn choose_role(config: &SessionConfig, rng: &mut QssRng) -> Role {
    if rng.random_bool(config.check_fraction) {
        Role::Check
    } else {
        Role::Key
    }
}

/// Returns the record and, for key rounds, the bit Bob and Charlie recover
/// by pooling their outcomes.
fn honest_round(
    round_id: usize,
    config: &SessionConfig,
    rng: &mut QssRng,
) -> Result<(RoundRecord, Option<u8>)> {
    let state = ghz_state();
    let bases = BasisTriple::new(random_basis(rng), random_basis(rng), random_basis(rng));

    let (a, state) = qstate::measure_qubit(&state, "A", bases.alice, rng)?;
    let (b, state) = qstate::measure_qubit(&state, "B", bases.bob, rng)?;
    let (c, _) = qstate::measure_qubit(&state, "C", bases.charlie, rng)?;
    let alice = Outcome::new(bases.alice, a);
    let bob = Outcome::new(bases.bob, b);
    let charlie = Outcome::new(bases.charlie, c);

    let sifted = sift(bases);
    let role = if sifted { choose_role(config, rng) } else { Role::Discarded };
    let mut record = RoundRecord {
        round_id,
        bases,
        alice,
        bob,
        charlie_announced: None,
        sifted,
        role,
        consistent: None,
        attacker_guess: None,
    };
    let reconstructed = match role {
        Role::Check => {
            record.charlie_announced = Some(charlie);
            record.consistent = Some(infer_alice(bob, charlie) == alice);
            None
        }
        Role::Key => Some(infer_alice(bob, charlie).sign.bit()),
        Role::Discarded => None,
    };
    Ok((record, reconstructed))
}

fn attacked_round(
    round_id: usize,
    config: &SessionConfig,
    strategy: &mut dyn AttackStrategy,
    rng: &mut QssRng,
) -> Result<RoundRecord> {
    let ancilla = strategy.ancilla();
    let mut state = ghz_state();
    for reg in &ancilla {
        if PROTOCOL_LABELS.contains(&reg.label.as_str()) {
            return Err(QssError::SessionAborted {
                round: round_id,
                reason: format!("ancilla label {} collides with a protocol qubit", reg.label),
            });
        }
        state = state.with_register(reg.clone())?;
    }
    let anc_labels: Vec<String> = ancilla.iter().map(|r| r.label.clone()).collect();

    let mut in_transit = vec!["B".to_string(), "C".to_string()];
    in_transit.extend(anc_labels.iter().cloned());
    strategy
        .intercept(round_id, &mut Interceptor::new(&mut state, in_transit, rng))
        .map_err(|e| abort(round_id, "intercept", e))?;

    // Bob and Charlie commit their bases before Alice reveals hers.
    let alice_basis = random_basis(rng);
    let bob_basis = random_basis(rng);
    let charlie_basis = strategy.announce_basis(round_id, rng);
    let bases = BasisTriple::new(alice_basis, bob_basis, charlie_basis);

    let (a, post) = qstate::measure_qubit(&state, "A", bases.alice, rng)?;
    let (b, post) = qstate::measure_qubit(&post, "B", bases.bob, rng)?;
    state = post;
    let alice = Outcome::new(bases.alice, a);
    let bob = Outcome::new(bases.bob, b);

    let sifted = sift(bases);
    let role = if sifted { choose_role(config, rng) } else { Role::Discarded };
    let mut record = RoundRecord {
        round_id,
        bases,
        alice,
        bob,
        charlie_announced: None,
        sifted,
        role,
        consistent: None,
        attacker_guess: None,
    };
    if !sifted {
        return Ok(record);
    }

    let revealed = RevealedRound {
        round_id,
        bases,
        role,
    };
    let mut held = vec!["C".to_string()];
    held.extend(anc_labels);
    let response = strategy
        .respond(&revealed, &mut Interceptor::new(&mut state, held, rng))
        .map_err(|e| abort(round_id, "respond", e))?;

    match (role, response) {
        (Role::Check, Response::Announce(sign)) => {
            let announced = Outcome::new(bases.charlie, sign);
            record.charlie_announced = Some(announced);
            record.consistent = Some(required_charlie(alice, bob) == announced);
        }
        (Role::Key, Response::Guess(sign)) => {
            record.attacker_guess = Some(sign.bit());
        }
        (role, response) => {
            return Err(QssError::SessionAborted {
                round: round_id,
                reason: format!(
                    "strategy {} answered a {} round with {response:?}",
                    strategy.name(),
                    role.as_str()
                ),
            });
        }
    }
    Ok(record)
}

fn abort(round: usize, hook: &str, err: QssError) -> QssError {
    QssError::SessionAborted {
        round,
        reason: format!("{hook} hook failed: {err}"),
    }
}
