//! Prints the GHZ correlation table: for every kept basis choice of Alice and
//! Bob, the outcome Charlie must see and its probability under projection.
//!
//! cargo run --example ghz_correlations

use hbb_qss::hbb::required_charlie;
use hbb_qss::qmath::inner;
use hbb_qss::qstate::{ghz_state, outcome_ket, project_qubit, Basis, Outcome, Sign};

fn label(o: Outcome) -> String {
    format!("{}{}", o.basis.letter(), o.sign.symbol())
}

fn main() -> hbb_qss::Result<()> {
    let ghz = ghz_state();
    println!("alice bob  charlie  P(charlie | alice, bob)");
    for alice_basis in [Basis::X, Basis::Y] {
        for bob_basis in [Basis::X, Basis::Y] {
            for sa in Sign::ALL {
                for sb in Sign::ALL {
                    let alice = Outcome::new(alice_basis, sa);
                    let bob = Outcome::new(bob_basis, sb);
                    let rest = project_qubit(&ghz, "A", &outcome_ket(alice))?
                        .state
                        .expect("nonzero branch");
                    let c_state = project_qubit(&rest, "B", &outcome_ket(bob))?
                        .state
                        .expect("nonzero branch");
                    let want = required_charlie(alice, bob);
                    let p = inner(&outcome_ket(want), c_state.amplitudes())?.norm_sqr();
                    println!("{:5} {:4} {:8} {p:.12}", label(alice), label(bob), label(want));
                }
            }
        }
    }
    Ok(())
}
