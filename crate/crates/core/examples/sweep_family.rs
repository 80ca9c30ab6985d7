//! Tabulates error probability and information along the undetectable family
//! and writes the CSV table.
//!
//! cargo run --example sweep_family -- [points] [out.csv]

use hbb_qss::cli::{sweep_csv, sweep_rows};

fn main() -> hbb_qss::Result<()> {
    let mut args = std::env::args().skip(1);
    let points = args.next().and_then(|s| s.parse().ok()).unwrap_or(21);
    let rows = sweep_rows(points)?;
    for r in &rows {
        let bar = "#".repeat((r.info * 40.0).round() as usize);
        println!("c={:.4} pe={:.6} info={:.6} {bar}", r.c, r.pe_closed, r.info);
    }
    if let Some(out) = args.next() {
        std::fs::write(&out, sweep_csv(&rows)?)?;
        println!("wrote {out}");
    }
    Ok(())
}
