use std::fs::File;
use std::io::{self, Write};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::{Common, Format};

fn sink(common: &Common) -> Result<Box<dyn Write>> {
    Ok(match &common.out {
        Some(path) => Box::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        ),
        None => Box::new(io::stdout().lock()),
    })
}

/// Fixed 12-significant-digit scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

/// Writes `json` or the CSV table depending on `--format`.
pub fn emit<T: Serialize>(common: &Common, json: &T, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = sink(common)?;
    match common.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, json)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(header)?;
            for r in rows {
                csv.write_record(r)?;
            }
            csv.flush()?;
        }
    }
    Ok(())
}
