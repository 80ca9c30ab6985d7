//! Runs the verification suite clean and with each injected fault.
//!
//! cargo run --example fault_injection

use hbb_qss::cli::{cmd_verify, Fault};

fn main() -> hbb_qss::Result<()> {
    for fault in [None, Some(Fault::SGate), Some(Fault::DetectionTable)] {
        let report = cmd_verify(fault)?;
        println!("fault {fault:?}");
        for check in &report.checks {
            println!(
                "  {:4} {:9} {:26} deviation {:.3e}",
                if check.passed { "ok" } else { "FAIL" },
                check.module,
                check.invariant,
                check.deviation
            );
        }
    }
    Ok(())
}
