//! Builds the interaction unitary that realizes an attack and checks that it
//! reproduces the attacked state from GHZ with a fresh ancilla.
//!
//! cargo run --example realize_unitary

use hbb_qss::attack::{global_state, interaction_unitary, is_realizable, AttackSpec};
use hbb_qss::qstate::{ghz_state, Register};

fn main() -> hbb_qss::Result<()> {
    for (name, spec) in [("honest", AttackSpec::honest()), ("kki", AttackSpec::kki())] {
        let check = is_realizable(&spec, 1e-10);
        println!("{name}: branch norms {:?}, cross {:.3e}", check.branch_norm_sqr, check.cross);
        let u = interaction_unitary(&spec, 1e-10)?;
        let start = ghz_state().with_register(Register::new("E", spec.ancilla_dim()))?;
        let out = start.apply_unitary(&u, &["B", "C", "E"])?;
        let want = global_state(&spec)?;
        println!(
            "  unitary {}x{}, deviation from unitarity {:.3e}, distance to target {:.3e}",
            u.rows(),
            u.cols(),
            u.unitary_deviation(),
            out.phase_distance(&want)?
        );
    }
    Ok(())
}
