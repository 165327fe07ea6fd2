use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::ValueEnum;
use randcirc_core::experiment::EntropyPoint;
use randcirc_core::Engine;
use serde::Serialize;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// The CSV view of an entropy point; JSON output carries the full record.
#[derive(Serialize)]
pub struct EntropyRow {
    step: usize,
    mean_entropy: f64,
    stderr: f64,
    engine: Engine,
}

impl From<&EntropyPoint> for EntropyRow {
    fn from(p: &EntropyPoint) -> Self {
        Self {
            step: p.step,
            mean_entropy: p.mean_entropy,
            stderr: p.stderr,
            engine: p.engine,
        }
    }
}

/// Writes `rows` as CSV, or `full` as pretty JSON, to `out` or stdout.
pub fn write_records<R: Serialize, J: Serialize + ?Sized>(
    out: &Option<PathBuf>,
    format: Format,
    rows: &[R],
    full: &J,
) -> anyhow::Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut sink = sink;
            serde_json::to_writer_pretty(&mut sink, full)?;
            writeln!(sink)?;
            sink.flush()?;
        }
    }
    Ok(())
}
