//! Full analysis of an attack spec file.
//!
//! cargo run --example analyze_attack -- specs/kki.json

use std::path::PathBuf;

use hbb_qss::attack::analyze;
use hbb_qss::cli::load_spec;

fn main() -> hbb_qss::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs/hbb_section4.json"));
    let spec = load_spec(&path)?;
    let report = analyze(&spec)?;
    println!("{}", path.display());
    println!("  escapes detection: {}", report.escape_ok);
    println!("  realizable:        {}", report.realizable);
    println!("  full information:  {}", report.nas_ok);
    println!("  Helstrom errors:   {:?}", report.pe_numeric);
    println!("  closed form:       {:?}", report.pe_closed_form);
    println!("  info per key bit:  {:.12}", report.info);
    Ok(())
}
