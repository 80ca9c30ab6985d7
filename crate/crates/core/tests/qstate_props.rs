mod common;

use common::*;
use hbb_qss::qmath::{matmul, CMatrix};
use hbb_qss::qstate::{
    basis_kets, measure_qubit, project_qubit, Basis, Gate, Register, Sign, StateVector,
};
use proptest::prelude::*;

fn random_state(seed: u64, registers: Vec<Register>) -> StateVector {
    let dim = registers.iter().map(|r| r.dim).product();
    StateVector::new(random_ket(dim, &mut rng(seed)), registers).unwrap()
}

fn abc() -> Vec<Register> {
    vec![Register::qubit("A"), Register::qubit("B"), Register::qubit("C")]
}

#[test]
fn every_gate_is_unitary() {
    for g in [Gate::h(), Gate::s(), Gate::sh(), Gate::cnot(), Gate::identity()] {
        let n = g.matrix.rows();
        let prod = matmul(&g.matrix, &g.adjoint()).unwrap();
        assert!(prod.max_abs_diff(&CMatrix::identity(n)).unwrap() <= 1e-10, "{:?}", g.kind);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alice_bob_outcome_probabilities_sum_to_one(
        seed in any::<u64>(),
        alice_x in any::<bool>(),
        bob_x in any::<bool>(),
    ) {
        let state = random_state(seed, abc());
        let basis = |x: bool| if x { Basis::X } else { Basis::Y };
        let (a_plus, a_minus) = basis_kets(basis(alice_x));
        let (b_plus, b_minus) = basis_kets(basis(bob_x));
        let mut total = 0.0;
        for ka in [&a_plus, &a_minus] {
            let pa = project_qubit(&state, "A", ka).unwrap();
            if let Some(rest) = pa.state {
                for kb in [&b_plus, &b_minus] {
                    total += pa.probability * project_qubit(&rest, "B", kb).unwrap().probability;
                }
            }
        }
        prop_assert!((total - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn collapse_matches_projection(seed in any::<u64>(), target in 0usize..3, along_x in any::<bool>()) {
        let state = random_state(seed, abc());
        let label = ["A", "B", "C"][target];
        let basis = if along_x { Basis::X } else { Basis::Y };
        let (sign, collapsed) = measure_qubit(&state, label, basis, &mut rng(seed ^ 1)).unwrap();
        let (plus, minus) = basis_kets(basis);
        let ket = if sign == Sign::Plus { plus } else { minus };
        let projected = project_qubit(&state, label, &ket).unwrap().state.unwrap();
        // The collapsed state keeps the measured qubit in |ket>.
        let (remaining, _) = collapsed.contract(label, &ket).unwrap();
        prop_assert!((remaining.norm_sqr() - 1.0).abs() <= 1e-9);
        prop_assert!(remaining.phase_distance(projected.amplitudes()).unwrap() <= 1e-9);
    }
}

#[test]
fn measurement_frequencies_follow_projection() {
    let trials = 10_000;
    let state = random_state(11, abc());
    for (label, basis) in [("A", Basis::X), ("B", Basis::Y), ("C", Basis::X)] {
        let (plus, _) = basis_kets(basis);
        let p = project_qubit(&state, label, &plus).unwrap().probability;
        let mut r = rng(99);
        let hits = (0..trials)
            .filter(|_| measure_qubit(&state, label, basis, &mut r).unwrap().0 == Sign::Plus)
            .count();
        let freq = hits as f64 / trials as f64;
        assert!((freq - p).abs() <= three_sigma(p, trials), "{label}: {freq} vs {p}");
    }
}
