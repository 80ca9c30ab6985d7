//! General participant attack by a dishonest Charlie.
//!
//! Charlie intercepts qubits B and C, lets them interact with a private
//! ancilla E and forwards B to Bob. Any such attack leaves the system in
//! `Σ a_ij |ij>_AB |ε_ij>_CE`; this module decides whether a given choice of
//! coefficients and ancilla kets escapes the eavesdropping check and how much
//! Charlie then learns about Alice's outcome.

mod conditional;
mod detection;
mod discrimination;
mod spec;
mod strategy;
mod structure;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};
use crate::qstate::Basis;

pub use conditional::{conditional_states, rho_pair, ConditionalEntry, ConditionalStateTable, RhoPair};
pub use detection::{
    announcement_overlap, bilinear_forms, detection_residuals, direct_cross_products,
    escape_check, DetectionResiduals, EscapeCheck, DEFAULT_TOL,
};
pub use discrimination::{helstrom, mutual_information, pe_closed_form, pe_numeric};
pub use spec::{global_state, AttackSpec, AttackSpecFile};
pub use strategy::HelstromStrategy;
pub use structure::{
    branch_vectors, interaction_unitary, is_realizable, nas_check, NasCheck, Realizability,
};

/// Alice's and Bob's measurement bases in a kept round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    XX,
    XY,
    YX,
    YY,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::XX, Case::XY, Case::YX, Case::YY];

    pub fn from_bases(alice: Basis, bob: Basis) -> Self {
        match (alice, bob) {
            (Basis::X, Basis::X) => Case::XX,
            (Basis::X, Basis::Y) => Case::XY,
            (Basis::Y, Basis::X) => Case::YX,
            (Basis::Y, Basis::Y) => Case::YY,
        }
    }

    pub fn alice(self) -> Basis {
        match self {
            Case::XX | Case::XY => Basis::X,
            Case::YX | Case::YY => Basis::Y,
        }
    }

    pub fn bob(self) -> Basis {
        match self {
            Case::XX | Case::YX => Basis::X,
            Case::XY | Case::YY => Basis::Y,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Roman numeral label, `I` to `IV`.
    pub fn roman(self) -> &'static str {
        ["I", "II", "III", "IV"][self.index()]
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.alice().letter(), self.bob().letter())
    }
}

/// Everything the analysis can say about one attack.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackReport {
    pub ancilla_dim: usize,
    /// The sixteen per-case constraint magnitudes, four per case.
    pub case_residuals: Vec<f64>,
    /// Six cross terms and two magnitude gaps.
    pub aggregate_residuals: Vec<f64>,
    pub escape_ok: bool,
    pub max_announcement_overlap: f64,
    /// Helstrom error per case, in `XX, XY, YX, YY` order.
    pub pe_numeric: [f64; 4],
    /// Present only when the attack escapes detection.
    pub pe_closed_form: Option<f64>,
    /// Mean information per key bit over the four cases, in bits.
    pub info: f64,
    pub nas_ok: bool,
    pub realizable: bool,
}

/// Per-case error probabilities must agree with the closed form this
/// closely when the attack escapes detection.
pub const CASE_AGREEMENT_TOL: f64 = 1e-6;

pub fn analyze(spec: &AttackSpec) -> Result<AttackReport> {
    let residuals = detection_residuals(spec);
    let escape = escape_check(spec, DEFAULT_TOL)?;
    let mut pe = [0.0; 4];
    for case in Case::ALL {
        pe[case.index()] = pe_numeric(spec, case)?;
    }
    let closed = if escape.escaped {
        let closed = pe_closed_form(spec)?;
        for case in Case::ALL {
            let dev = (pe[case.index()] - closed).abs();
            if dev > CASE_AGREEMENT_TOL {
                return Err(QssError::Inconsistent(format!(
                    "case {case}: Helstrom error {:.12} differs from closed form {closed:.12}",
                    pe[case.index()]
                )));
            }
        }
        Some(closed)
    } else {
        None
    };
    let mut info = 0.0;
    for p in pe {
        info += mutual_information(p)? / 4.0;
    }
    Ok(AttackReport {
        ancilla_dim: spec.ancilla_dim(),
        case_residuals: residuals.flat_per_case(),
        aggregate_residuals: residuals.aggregate.to_vec(),
        escape_ok: escape.escaped,
        max_announcement_overlap: escape.max_overlap,
        pe_numeric: pe,
        pe_closed_form: closed,
        info: info.clamp(0.0, 1.0),
        nas_ok: nas_check(spec, DEFAULT_TOL).satisfied,
        realizable: is_realizable(spec, DEFAULT_TOL).realizable,
    })
}

impl AttackReport {
    pub fn to_json(&self) -> Result<String> {
        crate::output::to_json(self)
    }
}
