use std::io::Write;

use super::{RoundRecord, SessionTranscript};
use crate::error::Result;
use crate::output;
use crate::qstate::Outcome;

pub const CSV_HEADER: [&str; 10] = [
    "round_id",
    "basis_a",
    "basis_b",
    "basis_c",
    "sifted",
    "role",
    "outcome_a",
    "outcome_b",
    "announced_c",
    "consistent",
];

fn csv_row(r: &RoundRecord) -> [String; 10] {
    let outcome = |o: Option<Outcome>| o.map(|o| o.to_string()).unwrap_or_default();
    [
        r.round_id.to_string(),
        r.bases.alice.letter().to_string(),
        r.bases.bob.letter().to_string(),
        r.bases.charlie.letter().to_string(),
        r.sifted.to_string(),
        r.role.as_str().to_string(),
        r.alice.to_string(),
        r.bob.to_string(),
        outcome(r.charlie_announced),
        r.consistent.map(|c| c.to_string()).unwrap_or_default(),
    ]
}

impl SessionTranscript {
    /// One row per round under a mandatory header.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(CSV_HEADER)?;
        for r in &self.rounds {
            w.write_record(csv_row(r))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        output::to_json(self)
    }
}
