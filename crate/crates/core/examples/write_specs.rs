//! Regenerates the bundled attack specs in `specs/`.
//!
//! cargo run --example write_specs

use std::fs;
use std::path::Path;

use hbb_qss::attack::AttackSpec;
use hbb_qss::exploit::example_spec;

fn main() -> hbb_qss::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("specs");
    fs::create_dir_all(&dir)?;
    for (name, spec) in [
        ("honest", AttackSpec::honest()),
        ("hbb_section4", example_spec()),
        ("kki", AttackSpec::kki()),
    ] {
        let path = dir.join(format!("{name}.json"));
        fs::write(&path, spec.to_json()?)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
