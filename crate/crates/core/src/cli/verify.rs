use std::f64::consts::FRAC_1_SQRT_2;

use clap::ValueEnum;
use serde::Serialize;

use crate::attack::{
    analyze, conditional_states, escape_check, is_realizable, nas_check, pe_closed_form,
    pe_numeric, AttackSpec, Case, DEFAULT_TOL,
};
use crate::error::Result;
use crate::exploit::{entangle_circuit, example_spec, Decoder};
use crate::hbb::{error_rate, required_charlie, run_session, SessionConfig};
use crate::optimizer::{maximize, random_family_point, OptimizerConfig, C_MAX};
use crate::qmath::{c, inner, CMatrix, CVector};
use crate::qstate::{ghz_state, outcome_ket, project_qubit, Basis, Outcome, Register, Sign};
use crate::rng::seeded;
use crate::sampling::{perturb_magnitude, random_nas_spec, rotate_eps};

const EXACT_TOL: f64 = 1e-12;
const CLOSED_FORM_TOL: f64 = 1e-9;
const CLOSED_FORM_SAMPLES: usize = 100;
const HONEST_ROUNDS: usize = 2000;
const NAS_SAMPLES: usize = 20;
const NECESSITY_SPECS: usize = 5;
const NECESSITY_DELTAS: [f64; 3] = [0.01, 0.05, 0.1];
/// Violations must cost at least this much information (or be detectable).
const NECESSITY_MARGIN: f64 = 1e-4;
const OPTIMUM_INFO_TOL: f64 = 1e-6;
const OPTIMUM_C_TOL: f64 = 1e-3;
const VERIFY_SEED: u64 = 7;

/// A deliberate defect for demonstrating that the checks catch it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// `S = diag(1, -i)` instead of `diag(1, i)` in the decoder.
    SGate,
    /// Inverted detection table for case `xx`.
    DetectionTable,
}

impl Fault {
    fn decoder(self) -> Decoder {
        match self {
            Fault::SGate => Decoder::standard().with_s_matrix(&CMatrix::diag(&[c(1.0, 0.0), c(0.0, -1.0)])),
            Fault::DetectionTable => Decoder::standard().with_detection_table(Case::XX, [0, 1, 1, 0]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyCheck {
    pub module: &'static str,
    pub invariant: &'static str,
    pub passed: bool,
    pub deviation: f64,
    pub tolerance: f64,
}

impl VerifyCheck {
    fn within(module: &'static str, invariant: &'static str, deviation: f64, tolerance: f64) -> Self {
        Self {
            module,
            invariant,
            passed: deviation.is_finite() && deviation <= tolerance,
            deviation,
            tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub fault: Option<Fault>,
    pub passed: bool,
    pub checks: Vec<VerifyCheck>,
}

impl VerifyReport {
    pub fn failed(&self) -> impl Iterator<Item = &VerifyCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn summary(&self) -> String {
        let ok = self.checks.iter().filter(|c| c.passed).count();
        let mut s = format!("verify: {ok}/{} checks passed", self.checks.len());
        for c in self.failed() {
            s.push_str(&format!("\nFAILED {}/{} deviation={:.3e}", c.module, c.invariant, c.deviation));
        }
        s
    }
}

pub fn cmd_verify(fault: Option<Fault>) -> Result<VerifyReport> {
    let decoder = fault.map(Fault::decoder).unwrap_or_default();
    let (optimum_info_gap, optimum_c_gap) = optimum_deviation()?;
    let checks = vec![
        VerifyCheck::within("hbb", "ghz-correlation-table", correlation_table_deviation()?, EXACT_TOL),
        VerifyCheck::within("hbb", "honest-session", honest_session_deviation()?, 0.0),
        VerifyCheck::within("attack", "closed-form-vs-helstrom", closed_form_deviation()?, CLOSED_FORM_TOL),
        VerifyCheck::within("exploit", "entangling-circuit", entangling_deviation()?, EXACT_TOL),
        VerifyCheck::within("exploit", "conditional-orthogonality", orthogonality_deviation()?, EXACT_TOL),
        VerifyCheck::within("exploit", "detection-circuit", detection_circuit_deviation(&decoder)?, EXACT_TOL),
        VerifyCheck::within("exploit", "info-circuit", info_circuit_deviation(&decoder)?, EXACT_TOL),
        VerifyCheck::within("exploit", "decoder-soundness", soundness_deviation(&decoder)?, EXACT_TOL),
        VerifyCheck::within("exploit", "decoder-completeness", completeness_deviation(&decoder)?, EXACT_TOL),
        VerifyCheck::within("attack", "nas-sufficiency", nas_sufficiency_deviation()?, OPTIMUM_INFO_TOL),
        VerifyCheck::within("attack", "nas-necessity", nas_necessity_violations()?, 0.0),
        VerifyCheck::within("optimizer", "maximum-info", optimum_info_gap, OPTIMUM_INFO_TOL),
        VerifyCheck::within("optimizer", "maximizer-c", optimum_c_gap, OPTIMUM_C_TOL),
    ];
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { fault, passed, checks })
}

/// Projects the GHZ state onto every kept basis pair and outcome pair of
/// Alice and Bob; Charlie's required outcome must then be certain and each
/// outcome pair must have probability ¼.
fn correlation_table_deviation() -> Result<f64> {
    let ghz = ghz_state();
    let mut worst: f64 = 0.0;
    for (ab, bb) in [(Basis::X, Basis::X), (Basis::X, Basis::Y), (Basis::Y, Basis::X), (Basis::Y, Basis::Y)] {
        for sa in Sign::ALL {
            for sb in Sign::ALL {
                let (alice, bob) = (Outcome::new(ab, sa), Outcome::new(bb, sb));
                let after_a = project_qubit(&ghz, "A", &outcome_ket(alice))?;
                let after_b = project_qubit(after_a.state.as_ref().expect("GHZ marginals are uniform"), "B", &outcome_ket(bob))?;
                let pair_prob = after_a.probability * after_b.probability;
                let charlie = after_b.state.expect("GHZ marginals are uniform");
                let required = outcome_ket(required_charlie(alice, bob));
                let p = inner(&required, charlie.amplitudes())?.norm_sqr();
                worst = worst.max((p - 1.0).abs()).max((pair_prob - 0.25).abs());
            }
        }
    }
    Ok(worst)
}

/// Fraction of mismatched key bits plus the check error rate of an
/// unattacked session.
fn honest_session_deviation() -> Result<f64> {
    let t = run_session(
        &SessionConfig {
            rounds: HONEST_ROUNDS,
            check_fraction: 0.5,
            seed: VERIFY_SEED,
        },
        None,
    )?;
    let mismatched = t
        .key_alice
        .iter()
        .zip(&t.key_reconstructed)
        .filter(|(a, b)| a != b)
        .count()
        + t.key_alice.len().abs_diff(t.key_reconstructed.len());
    Ok(mismatched as f64 / t.key_count().max(1) as f64 + error_rate(&t)?)
}

fn closed_form_deviation() -> Result<f64> {
    let mut rng = seeded(VERIFY_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..CLOSED_FORM_SAMPLES {
        let cval = rand::Rng::random_range(&mut rng, 0.0..=C_MAX);
        let spec = random_family_point(cval, &mut rng)?.to_spec()?;
        let closed = pe_closed_form(&spec)?;
        for case in Case::ALL {
            worst = worst.max((pe_numeric(&spec, case)? - closed).abs());
        }
    }
    Ok(worst)
}

fn entangling_deviation() -> Result<f64> {
    let psi0 = ghz_state().with_register(Register::qubit("E"))?;
    let out = entangle_circuit(&psi0)?;
    // ½ Σ_ab (-1)^{ab} |a b>_AB |a b>_CE
    let mut want = CVector::zeros(16);
    for a in 0..2 {
        for b in 0..2 {
            let sign = if a & b == 1 { -0.5 } else { 0.5 };
            want[(2 * a + b) * 4 + 2 * a + b] = c(sign, 0.0);
        }
    }
    out.amplitudes().phase_distance(&want)
}

fn case_states(case: Case) -> Result<[CVector; 4]> {
    let table = conditional_states(&example_spec(), case)?;
    Ok(table.entries.map(|e| e.phi.expect("every branch of the example attack is populated")))
}

fn orthogonality_deviation() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for case in Case::ALL {
        let phis = case_states(case)?;
        for i in 0..4 {
            for j in i + 1..4 {
                worst = worst.max(inner(&phis[i], &phis[j])?.norm());
            }
        }
    }
    Ok(worst)
}

fn ket(coeffs: [f64; 4]) -> CVector {
    CVector::from_real(&coeffs.map(|x| x * FRAC_1_SQRT_2)).expect("four entries")
}

/// Case `xx` outputs must match the listed Bell-type states exactly. In every
/// case each output must be an equal superposition of two readout outcomes.
fn detection_circuit_deviation(decoder: &Decoder) -> Result<f64> {
    let xx_targets = [
        ket([0.0, 1.0, 1.0, 0.0]),
        ket([1.0, 0.0, 0.0, -1.0]),
        ket([1.0, 0.0, 0.0, 1.0]),
        ket([0.0, -1.0, 1.0, 0.0]),
    ];
    circuit_deviation(decoder, &xx_targets, Decoder::detection_circuit)
}

fn info_circuit_deviation(decoder: &Decoder) -> Result<f64> {
    let xx_targets = [
        ket([1.0, 0.0, 0.0, 1.0]),
        ket([1.0, 0.0, 0.0, -1.0]),
        ket([0.0, 1.0, 1.0, 0.0]),
        ket([0.0, -1.0, 1.0, 0.0]),
    ];
    circuit_deviation(decoder, &xx_targets, Decoder::info_circuit)
}

fn circuit_deviation(
    decoder: &Decoder,
    xx_targets: &[CVector; 4],
    circuit: fn(&Decoder, &CVector, Case) -> Result<CVector>,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for case in Case::ALL {
        for (k, phi) in case_states(case)?.iter().enumerate() {
            let out = circuit(decoder, phi, case)?;
            if case == Case::XX {
                worst = worst.max(out.phase_distance(&xx_targets[k])?);
            }
            for z in out.as_slice() {
                let p = z.norm_sqr();
                worst = worst.max(p.min((p - 0.5).abs()));
            }
        }
    }
    Ok(worst)
}

/// Largest probability of announcing the wrong sign.
fn soundness_deviation(decoder: &Decoder) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for case in Case::ALL {
        let table = conditional_states(&example_spec(), case)?;
        for e in &table.entries {
            let p = decoder.announcement_distribution(e.phi.as_ref().expect("populated"), case)?;
            worst = worst.max(1.0 - p[e.required_announcement().sign.bit() as usize]);
        }
    }
    Ok(worst)
}

/// Largest probability of guessing Alice's bit wrong.
fn completeness_deviation(decoder: &Decoder) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for case in Case::ALL {
        let table = conditional_states(&example_spec(), case)?;
        for e in &table.entries {
            let p = decoder.secret_distribution(e.phi.as_ref().expect("populated"), case)?;
            worst = worst.max(1.0 - p[e.alice.sign.bit() as usize]);
        }
    }
    Ok(worst)
}

fn full_info_gap(spec: &AttackSpec) -> Result<f64> {
    let report = analyze(spec)?;
    if !(report.escape_ok && report.nas_ok) {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 - report.info)
}

fn nas_sufficiency_deviation() -> Result<f64> {
    let mut rng = seeded(VERIFY_SEED);
    let mut worst = full_info_gap(&example_spec())?.max(full_info_gap(&AttackSpec::kki())?);
    for _ in 0..NAS_SAMPLES {
        worst = worst.max(full_info_gap(&random_nas_spec(&mut rng)?)?);
    }
    Ok(worst)
}

/// Number of perturbed specs that both escape and keep full information.
fn nas_necessity_violations() -> Result<f64> {
    let mut rng = seeded(VERIFY_SEED + 1);
    let mut violations = 0usize;
    for _ in 0..NECESSITY_SPECS {
        let base = random_nas_spec(&mut rng)?;
        for delta in NECESSITY_DELTAS {
            for spec in [perturb_magnitude(&base, delta)?, rotate_eps(&base, delta)?] {
                if nas_check(&spec, DEFAULT_TOL).satisfied {
                    violations += 1;
                    continue;
                }
                let escaped = escape_check(&spec, DEFAULT_TOL)?.escaped;
                if escaped && is_realizable(&spec, DEFAULT_TOL).realizable {
                    let info = analyze(&spec)?.info;
                    if info > 1.0 - NECESSITY_MARGIN {
                        violations += 1;
                    }
                }
            }
        }
    }
    Ok(violations as f64)
}

/// `(|1 - best info|, |c* - ½|)`.
fn optimum_deviation() -> Result<(f64, f64)> {
    let result = maximize(&OptimizerConfig::default(), &mut seeded(VERIFY_SEED))?;
    Ok(((1.0 - result.best_info).abs(), (result.best_point.c - 0.5).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_build_passes() {
        let report = cmd_verify(None).unwrap();
        assert!(report.passed, "{}", report.summary());
    }

    #[test]
    fn s_gate_fault_is_caught() {
        let report = cmd_verify(Some(Fault::SGate)).unwrap();
        assert!(!report.passed);
        let failed: Vec<_> = report.failed().map(|c| c.invariant).collect();
        assert!(failed.contains(&"decoder-soundness"), "{failed:?}");
    }

    #[test]
    fn table_fault_is_caught() {
        let report = cmd_verify(Some(Fault::DetectionTable)).unwrap();
        let failed: Vec<_> = report.failed().map(|c| c.invariant).collect();
        assert_eq!(failed, ["decoder-soundness"]);
    }
}
