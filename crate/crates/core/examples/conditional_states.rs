//! Charlie's conditional states for each basis case of an attack, with their
//! weights, the announcement honesty would require and the per-case
//! detection residuals.
//!
//! cargo run --example conditional_states

use hbb_qss::attack::{bilinear_forms, conditional_states, Case};
use hbb_qss::exploit::example_spec;

fn main() -> hbb_qss::Result<()> {
    let spec = example_spec();
    for case in Case::ALL {
        let table = conditional_states(&spec, case)?;
        println!("case {case} ({})", case.roman());
        for e in &table.entries {
            let phi: Vec<String> = e
                .phi
                .as_ref()
                .map(|v| v.as_slice().iter().map(|z| format!("{:+.3}{:+.3}i", z.re, z.im)).collect())
                .unwrap_or_default();
            println!(
                "  alice {}{} bob {}{} weight {:.4} announce {}  phi [{}]",
                e.alice.basis.letter(),
                e.alice.sign.symbol(),
                e.bob.basis.letter(),
                e.bob.sign.symbol(),
                e.weight,
                e.required_announcement().sign.symbol(),
                phi.join(", ")
            );
        }
        let forms = bilinear_forms(&spec, case);
        println!("  residuals {:?}", forms.map(|z| z.norm()));
    }
    Ok(())
}
