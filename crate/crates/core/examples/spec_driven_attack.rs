//! Simulates a session where Charlie performs the optimal measurement for an
//! arbitrary realizable spec, here a family point off the optimum.
//!
//! cargo run --example spec_driven_attack -- [c]

use hbb_qss::attack::{analyze, HelstromStrategy};
use hbb_qss::hbb::{run_session, SessionConfig};
use hbb_qss::optimizer::Eq6FamilyPoint;

fn main() -> hbb_qss::Result<()> {
    let cval = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.6);
    let spec = Eq6FamilyPoint::plain(cval)?.to_spec()?;
    let predicted = analyze(&spec)?;
    let mut strategy = HelstromStrategy::new(&spec)?;
    let t = run_session(
        &SessionConfig {
            rounds: 20_000,
            ..SessionConfig::default()
        },
        Some(&mut strategy),
    )?;
    println!("c = {cval}: predicted info {:.6}", predicted.info);
    println!("simulated: {}", t.summary());
    Ok(())
}
