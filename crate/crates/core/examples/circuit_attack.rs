//! The one-ancilla circuit attack run through the protocol engine, next to
//! the decoder's exact outcome distributions.
//!
//! cargo run --example circuit_attack -- [rounds]

use hbb_qss::attack::conditional_states;
use hbb_qss::exploit::{example_spec, full_attack_strategy, CaseId, Decoder};
use hbb_qss::hbb::{error_rate, info_rate, run_session, SessionConfig};

fn main() -> hbb_qss::Result<()> {
    let rounds = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4000);
    let decoder = Decoder::standard();
    for case in CaseId::ALL {
        let table = conditional_states(&example_spec(), case)?;
        for e in &table.entries {
            let phi = e.phi.as_ref().expect("populated");
            let announce = decoder.announcement_distribution(phi, case)?;
            let secret = decoder.secret_distribution(phi, case)?;
            println!(
                "case {case} alice {} bob {}: P(announce) {announce:?} P(secret) {secret:?}",
                e.alice.sign.symbol(),
                e.bob.sign.symbol()
            );
        }
    }
    let config = SessionConfig {
        rounds,
        ..SessionConfig::default()
    };
    let t = run_session(&config, Some(&mut full_attack_strategy()))?;
    println!("session: error {} info {}", error_rate(&t)?, info_rate(&t)?);
    Ok(())
}
