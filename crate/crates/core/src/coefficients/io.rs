use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{CoefficientTable, TableMetadata};
use crate::error::{Error, Result};

/// Reads a coefficient CSV (`n,lambda`, rows n = 1, 2, ... contiguous).
pub fn load_coefficients(path: impl AsRef<Path>, descriptor_id: &str) -> Result<CoefficientTable> {
    let file = File::open(path.as_ref())?;
    parse_coefficients(BufReader::new(file), descriptor_id)
}

pub fn parse_coefficients<R: Read>(reader: R, descriptor_id: &str) -> Result<CoefficientTable> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Ingest(e.to_string()))?.clone();
    if headers.is_empty() && rdr.records().next().is_none() {
        return Err(Error::Ingest("no rows".into()));
    }
    if headers.len() != 2 || &headers[0] != "n" || &headers[1] != "lambda" {
        return Err(Error::Ingest(format!("expected header `n,lambda`, found `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut values = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Ingest(e.to_string()))?;
        let line = row + 2;
        if rec.len() != 2 {
            return Err(Error::Ingest(format!("line {line}: expected 2 fields, found {}", rec.len())));
        }
        let n: u64 = rec[0]
            .parse()
            .map_err(|_| Error::Ingest(format!("line {line}: non-numeric n `{}`", &rec[0])))?;
        let lambda: f64 = rec[1]
            .parse()
            .map_err(|_| Error::Ingest(format!("line {line}: non-numeric lambda `{}`", &rec[1])))?;
        if !lambda.is_finite() {
            return Err(Error::Ingest(format!("line {line}: non-finite lambda")));
        }
        let expected = values.len() as u64 + 1;
        if n != expected {
            return Err(Error::Ingest(if expected == 1 {
                format!("n must start at 1, found {n}")
            } else {
                format!("gap at n={expected}")
            }));
        }
        values.push(lambda);
    }
    if values.is_empty() {
        return Err(Error::Ingest("no rows".into()));
    }
    Ok(CoefficientTable::from_values(descriptor_id, &values))
}

/// Writes `n,lambda` rows plus a `<path>.json` sidecar with the table metadata.
pub fn export_coefficients(table: &CoefficientTable, path: impl AsRef<Path>) -> Result<TableMetadata> {
    let path = path.as_ref();
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "n,lambda")?;
    for (i, v) in table.values().iter().enumerate() {
        writeln!(w, "{},{}", i + 1, v)?;
    }
    w.flush()?;
    let meta = table.metadata();
    let sidecar = sidecar_path(path);
    std::fs::write(&sidecar, serde_json::to_string_pretty(&meta)?)?;
    Ok(meta)
}

pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    s.into()
}

/// Reads a sidecar written by [`export_coefficients`].
pub fn read_metadata(path: impl AsRef<Path>) -> Result<TableMetadata> {
    let f = BufReader::new(File::open(path)?);
    let text: String = f.lines().collect::<std::io::Result<Vec<_>>>()?.join("\n");
    Ok(serde_json::from_str(&text)?)
}
