//! Runs an unattacked session and prints its statistics and the first rows
//! of the CSV transcript.
//!
//! cargo run --example honest_session -- [rounds] [seed]

use hbb_qss::hbb::{run_session, SessionConfig};

fn main() -> hbb_qss::Result<()> {
    let mut args = std::env::args().skip(1);
    let rounds = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);
    let config = SessionConfig {
        rounds,
        check_fraction: 0.5,
        seed,
    };
    let t = run_session(&config, None)?;
    println!(
        "rounds={} kept={} check={} key={}",
        t.rounds.len(),
        t.sifted_count(),
        t.check_count(),
        t.key_count()
    );
    println!("key reconstructed exactly: {}", t.key_alice == t.key_reconstructed);
    println!("check error rate: {:?}", t.check_error_rate);
    for line in t.to_csv_string()?.lines().take(6) {
        println!("{line}");
    }
    Ok(())
}
