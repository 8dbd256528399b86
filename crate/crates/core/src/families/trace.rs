//! CSV trace ingestion: one sequence per row, decimal cells, equal lengths.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use super::{FamilySpec, Generator};
use crate::error::{Error, Result};

/// Reads a trace family from any reader. Rows and columns in errors are
/// 1-based.
pub fn ingest_trace<R: Read>(reader: R, source: &str, tolerance: f64) -> Result<FamilySpec> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in csv.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Ingest {
            row,
            column: None,
            message: e.to_string(),
        })?;
        let values = record
            .iter()
            .enumerate()
            .map(|(j, cell)| {
                let bad = |message: String| Error::Ingest {
                    row,
                    column: Some(j + 1),
                    message,
                };
                let v: f64 = cell.parse().map_err(|_| bad(format!("`{cell}` is not a decimal number")))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(bad(format!("`{cell}` is not finite")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != values.len() {
                return Err(Error::Ingest {
                    row,
                    column: None,
                    message: format!("row has {} values, expected {}", values.len(), first.len()),
                });
            }
        }
        rows.push(values);
    }
    let horizon = match rows.first() {
        Some(r) if !r.is_empty() => r.len(),
        _ => {
            return Err(Error::Ingest {
                row: 1,
                column: None,
                message: "trace is empty".into(),
            })
        }
    };
    Ok(FamilySpec {
        horizon,
        generator: Generator::Trace {
            source: source.to_string(),
            rows,
            labels: Vec::new(),
            tolerance,
        },
    })
}

pub fn ingest_trace_file(path: &Path, tolerance: f64) -> Result<FamilySpec> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    ingest_trace(file, &path.display().to_string(), tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Scalar;

    #[test]
    fn reads_rows() {
        let spec = ingest_trace("1,0.5,0.25\n2, 1e-1 ,0\n".as_bytes(), "mem", 1e-9).unwrap();
        assert_eq!(spec.horizon, 3);
        let fam = spec.sample().unwrap();
        assert_eq!(fam.members()[0].value(1).unwrap(), Scalar::Float(0.5));
        assert_eq!(fam.members()[1].value(1).unwrap(), Scalar::Float(0.1));
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(matches!(ingest_trace("".as_bytes(), "mem", 1e-9), Err(Error::Ingest { .. })));
    }

    #[test]
    fn ragged_rows_name_the_row() {
        let err = ingest_trace("1,2,3\n1,2\n".as_bytes(), "mem", 1e-9).unwrap_err();
        assert!(matches!(err, Error::Ingest { row: 2, column: None, .. }), "{err}");
    }

    #[test]
    fn bad_cells_name_row_and_column() {
        let err = ingest_trace("1,2\n3,x\n".as_bytes(), "mem", 1e-9).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Ingest {
                    row: 2,
                    column: Some(2),
                    ..
                }
            ),
            "{err}"
        );
        let err = ingest_trace("1,NaN\n".as_bytes(), "mem", 1e-9).unwrap_err();
        assert!(
            matches!(
                err,
                Error::Ingest {
                    row: 1,
                    column: Some(2),
                    ..
                }
            ),
            "{err}"
        );
    }
}
