//! Two-column `t,value` data files.

use std::io::Read;
use std::path::Path;

use lspline_core::Complex64;

use crate::error::{CliError, CliResult};
use crate::literal::{parse_complex, parse_real};

/// Abscissae and (possibly complex) values of a data file.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub t: Vec<f64>,
    pub values: Vec<Complex64>,
}

pub fn read_samples(path: &Path) -> CliResult<Samples> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    parse_samples(file).map_err(|e| match e {
        CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// A first row whose abscissa is not a number is taken as a header. Blank
/// lines are skipped; LF and CRLF line ends are both accepted.
pub fn parse_samples<R: Read>(source: R) -> CliResult<Samples> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut out = Samples { t: Vec::new(), values: Vec::new() };
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Parse(format!("line {}: {e}", row + 1)))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(CliError::Parse(format!("line {}: expected 2 columns, found {}", row + 1, record.len())));
        }
        if row == 0 && parse_real(&record[0]).is_err() {
            continue;
        }
        let at = |e: CliError| CliError::Parse(format!("line {}: {e}", row + 1));
        out.t.push(parse_real(&record[0]).map_err(at)?);
        out.values.push(parse_complex(&record[1]).map_err(at)?);
    }
    if out.t.is_empty() {
        return Err(CliError::Parse("no data rows".into()));
    }
    Ok(out)
}
