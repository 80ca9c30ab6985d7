//! Baseline comparison: intercept-resend against the circuit attack on the
//! same seeds.
//!
//! cargo run --example intercept_resend

use hbb_qss::exploit::{full_attack_strategy, intercept_resend_strategy};
use hbb_qss::hbb::{run_session, SessionConfig};

fn main() -> hbb_qss::Result<()> {
    println!("seed  intercept-resend                circuit");
    for seed in 0..5 {
        let config = SessionConfig {
            rounds: 4000,
            check_fraction: 0.5,
            seed,
        };
        let baseline = run_session(&config, Some(&mut intercept_resend_strategy()))?;
        let circuit = run_session(&config, Some(&mut full_attack_strategy()))?;
        println!("{seed:4}  {:30}  {}", baseline.summary(), circuit.summary());
    }
    Ok(())
}
