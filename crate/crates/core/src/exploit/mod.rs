//! A concrete undetectable attack with one ancilla qubit.
//!
//! Charlie applies `H` to B and a CNOT from B onto his ancilla E. After the
//! bases are revealed, a small circuit on `C, E` followed by computational
//! basis readout yields either the announcement that passes the check or
//! Alice's secret bit. An intercept-resend strategy serves as a baseline.

mod decoder;
mod strategies;

use crate::attack::AttackSpec;
use crate::error::{QssError, Result};
use crate::qmath::{c, CVector};
use crate::qstate::{apply_gate, Gate, StateVector};

pub use crate::attack::Case as CaseId;
pub use decoder::{detection_decode, info_decode, Decoder, OutcomeTable};
pub use strategies::{
    full_attack_strategy, intercept_resend_strategy, CircuitAttack, InterceptResend,
};

/// Gates `U` (information readout of C), `V` (Bob's basis change) and `W`
/// (detection readout of C) for one case.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderConfig {
    pub case: CaseId,
    pub u: Gate,
    pub v: Gate,
    pub w: Gate,
}

impl DecoderConfig {
    pub fn for_case(case: CaseId) -> Self {
        Self::with_gates(case, &Gate::h(), &Gate::sh())
    }

    /// Same layout with caller-supplied `H` and `SH` gates.
    pub fn with_gates(case: CaseId, h: &Gate, sh: &Gate) -> Self {
        let (u, v, w) = match case {
            CaseId::XX => (h, h, h),
            CaseId::XY => (h, sh, sh),
            CaseId::YX => (sh, h, sh),
            CaseId::YY => (sh, sh, h),
        };
        Self {
            case,
            u: u.clone(),
            v: v.clone(),
            w: w.clone(),
        }
    }
}

/// The one-ancilla attack: `½|00>, ½|01>, ½|10>, -½|11>` on `C E`.
pub fn example_spec() -> AttackSpec {
    let half = c(0.5, 0.0);
    AttackSpec::from_weighted(
        2,
        [
            CVector::basis(4, 0).scale(half),
            CVector::basis(4, 1).scale(half),
            CVector::basis(4, 2).scale(half),
            CVector::basis(4, 3).scale(-half),
        ],
    )
    .expect("example spec is valid")
}

/// `H` on B, then CNOT with control B and target E.
pub fn entangle_circuit(psi0: &StateVector) -> Result<StateVector> {
    let layout: Vec<(&str, usize)> = psi0
        .registers()
        .iter()
        .map(|r| (r.label.as_str(), r.dim))
        .collect();
    if layout != [("A", 2), ("B", 2), ("C", 2), ("E", 2)] {
        return Err(QssError::BadTarget(format!(
            "entangling circuit needs qubits A, B, C, E; got {layout:?}"
        )));
    }
    let after_h = apply_gate(psi0, &Gate::h(), &["B"])?;
    apply_gate(&after_h, &Gate::cnot(), &["B", "E"])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::{analyze, global_state, is_realizable, nas_check};
    use crate::qstate::{ghz_state, Register};

    fn psi0() -> StateVector {
        ghz_state().with_register(Register::qubit("E")).unwrap()
    }

    #[test]
    fn example_spec_properties() {
        let spec = example_spec();
        assert!(nas_check(&spec, 1e-12).satisfied);
        assert!(is_realizable(&spec, 1e-12).realizable);
        let report = analyze(&spec).unwrap();
        assert!(report.escape_ok);
        assert!((report.info - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circuit_produces_example_state() {
        let out = entangle_circuit(&psi0()).unwrap();
        let want = global_state(&example_spec()).unwrap();
        assert!(out.phase_distance(&want).unwrap() < 1e-12);
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circuit_rejects_wrong_layout() {
        assert!(entangle_circuit(&ghz_state()).is_err());
        let wide = ghz_state().with_register(Register::new("E", 4)).unwrap();
        assert!(entangle_circuit(&wide).is_err());
    }

    #[test]
    fn gate_table() {
        let sh = Gate::sh();
        let h = Gate::h();
        let cfg = DecoderConfig::for_case(CaseId::YX);
        assert_eq!((&cfg.u, &cfg.v, &cfg.w), (&sh, &h, &sh));
        let cfg = DecoderConfig::for_case(CaseId::YY);
        assert_eq!((&cfg.u, &cfg.v, &cfg.w), (&sh, &sh, &h));
    }
}
