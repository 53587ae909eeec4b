use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRow {
    pub slot: u64,
    /// Receiver age at slot end, after any reset.
    pub age: u64,
    pub reset: bool,
}

/// Age evolution of a slot-level run, one row per slot.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AgeTrace {
    pub rows: Vec<TraceRow>,
}

impl AgeTrace {
    /// Checks that age grows by one per slot between resets and that every
    /// reset lands in `[1, max_tx]`. Returns the first offending slot.
    pub fn check(&self, max_tx: u64) -> std::result::Result<(), u64> {
        let mut prev = 0u64;
        for row in &self.rows {
            let ok = if row.reset {
                (1..=max_tx).contains(&row.age)
            } else {
                row.age == prev + 1
            };
            if !ok {
                return Err(row.slot);
            }
            prev = row.age;
        }
        Ok(())
    }

    /// CSV with header `slot,age,reset`; reset is written as 0/1.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["slot", "age", "reset"])?;
        for row in &self.rows {
            w.write_record([
                row.slot.to_string(),
                row.age.to_string(),
                u8::from(row.reset).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
