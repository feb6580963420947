//! Trace files: one header row, comma separated, LF line endings, every
//! float written with 17 significant digits so reading it back is exact.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use modburgers::TraceRecord;

use crate::error::{io_error, CliError, Result};

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_records<W: Write>(out: W, records: &[TraceRecord]) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(TraceRecord::FIELDS)?;
    for record in records {
        writer.write_record(record.values().map(format_float))?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> std::result::Result<Vec<TraceRecord>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = reader.headers().map_err(|e| e.to_string())?.clone();
    if header.iter().ne(TraceRecord::FIELDS) {
        return Err(format!(
            "expected header {}, found {}",
            TraceRecord::FIELDS.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        ));
    }
    let mut records = Vec::new();
    for (line, row) in reader.records().enumerate() {
        let row = row.map_err(|e| e.to_string())?;
        let mut values = [0.0; 9];
        for (slot, field) in values.iter_mut().zip(row.iter()) {
            *slot = field
                .trim()
                .parse()
                .map_err(|_| format!("row {}: `{field}` is not a number", line + 1))?;
        }
        records.push(TraceRecord::from_values(values));
    }
    Ok(records)
}

pub fn write_trace(path: &Path, records: &[TraceRecord]) -> Result<()> {
    let file = File::create(path).map_err(io_error(path))?;
    write_records(file, records).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    })
}

pub fn read_trace(path: &Path) -> Result<Vec<TraceRecord>> {
    let file = File::open(path).map_err(io_error(path))?;
    read_records(file).map_err(|message| CliError::Trace {
        path: path.to_path_buf(),
        message,
    })
}
