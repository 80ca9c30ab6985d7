//! The three-party GHZ secret-sharing protocol.
//!
//! Alice distributes GHZ triplets, all three parties measure in a random `x`
//! or `y` basis, and rounds are kept when an odd number of parties chose `x`.
//! Kept rounds are either sacrificed for an eavesdropping check or used as key.

mod export;
mod session;

use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};
use crate::qmath::binary_entropy;
use crate::qstate::{Basis, Outcome, Sign};

pub use session::{
    run_session, AttackStrategy, Interceptor, Response, RevealedRound, SessionConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisTriple {
    pub alice: Basis,
    pub bob: Basis,
    pub charlie: Basis,
}

impl BasisTriple {
    pub fn new(alice: Basis, bob: Basis, charlie: Basis) -> Self {
        Self { alice, bob, charlie }
    }

    pub fn x_count(&self) -> usize {
        [self.alice, self.bob, self.charlie]
            .iter()
            .filter(|&&b| b == Basis::X)
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Check,
    Key,
    Discarded,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Check => "check",
            Role::Key => "key",
            Role::Discarded => "discarded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round_id: usize,
    pub bases: BasisTriple,
    pub alice: Outcome,
    pub bob: Outcome,
    /// Charlie's public announcement; present on check rounds only.
    pub charlie_announced: Option<Outcome>,
    pub sifted: bool,
    pub role: Role,
    /// Whether the announcement agrees with the GHZ correlations (check rounds).
    pub consistent: Option<bool>,
    /// The attacker's guess of Alice's bit (key rounds of attacked sessions).
    pub attacker_guess: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionTranscript {
    pub rounds: Vec<RoundRecord>,
    /// Fraction of check rounds failing the correlation test; `None` when no
    /// round was selected for checking.
    pub check_error_rate: Option<f64>,
    pub key_alice: Vec<u8>,
    pub key_reconstructed: Vec<u8>,
    pub attacker_key_guess: Option<Vec<u8>>,
}

impl SessionTranscript {
    pub fn sifted_count(&self) -> usize {
        self.rounds.iter().filter(|r| r.sifted).count()
    }

    pub fn check_count(&self) -> usize {
        self.rounds.iter().filter(|r| r.role == Role::Check).count()
    }

    pub fn key_count(&self) -> usize {
        self.key_alice.len()
    }

    /// One-line human summary, e.g. `error=0.0000 info=1.0000`.
    pub fn summary(&self) -> String {
        let fmt = |r: Result<f64>| r.map(|x| format!("{x:.4}")).unwrap_or_else(|_| "n/a".into());
        format!(
            "error={} info={}",
            fmt(error_rate(self)),
            fmt(info_rate(self))
        )
    }
}

/// A round is kept iff an odd number of parties measured in `x`.
pub fn sift(bases: BasisTriple) -> bool {
    bases.x_count() % 2 == 1
}

/// The basis Alice must have used for a kept round, given Bob's and Charlie's.
pub fn completing_basis(bob: Basis, charlie: Basis) -> Basis {
    if bob == charlie {
        Basis::X
    } else {
        Basis::Y
    }
}

/// Alice's outcome implied by Bob's and Charlie's outcomes in a kept round.
///
/// With signs read as `±1`, the GHZ state gives `a·b·c = +1` when all three
/// parties measure `x` and `a·b·c = -1` when exactly one does.
pub fn infer_alice(bob: Outcome, charlie: Outcome) -> Outcome {
    let alice_basis = completing_basis(bob.basis, charlie.basis);
    let all_x = bob.basis == Basis::X && charlie.basis == Basis::X;
    let mut sign = if bob.sign == charlie.sign {
        Sign::Plus
    } else {
        Sign::Minus
    };
    if !all_x {
        sign = sign.flip();
    }
    Outcome::new(alice_basis, sign)
}

/// Charlie's outcome required by the correlations, given Alice's and Bob's.
pub fn required_charlie(alice: Outcome, bob: Outcome) -> Outcome {
    // The relation a·b·c = ±1 is symmetric in the three parties.
    infer_alice(bob, alice)
}

/// Fraction of check rounds whose announcement contradicts the correlations.
pub fn error_rate(transcript: &SessionTranscript) -> Result<f64> {
    let checks: Vec<bool> = transcript
        .rounds
        .iter()
        .filter(|r| r.role == Role::Check)
        .filter_map(|r| r.consistent)
        .collect();
    if checks.is_empty() {
        return Err(QssError::Undefined("error rate with no check rounds".into()));
    }
    Ok(checks.iter().filter(|&&ok| !ok).count() as f64 / checks.len() as f64)
}

/// Empirical attacker information per key bit: `1 - H2(disagreement)`.
pub fn info_rate(transcript: &SessionTranscript) -> Result<f64> {
    let guess = transcript
        .attacker_key_guess
        .as_ref()
        .filter(|g| !g.is_empty())
        .ok_or_else(|| QssError::Undefined("information rate with no attacker key guesses".into()))?;
    if guess.len() != transcript.key_alice.len() {
        return Err(QssError::Inconsistent(
            "attacker guess and key have different lengths".into(),
        ));
    }
    let wrong = guess
        .iter()
        .zip(&transcript.key_alice)
        .filter(|(g, k)| g != k)
        .count();
    let p = wrong as f64 / guess.len() as f64;
    Ok((1.0 - binary_entropy(p)).clamp(0.0, 1.0))
}
