//! Two-column numeric CSV in and out.

use std::io::{Read, Write};

use perm_moments::Dataset;

use crate::error::CliError;

/// CSV dialect and column selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub has_header: bool,
    /// Column name (needs a header) or 0-based index.
    pub x_col: String,
    pub y_col: String,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: true,
            x_col: "0".into(),
            y_col: "1".into(),
        }
    }
}

fn resolve(selector: &str, header: Option<&csv::StringRecord>) -> Result<usize, CliError> {
    if let Some(h) = header {
        if let Some(i) = h.iter().position(|name| name.trim() == selector) {
            return Ok(i);
        }
    }
    selector.parse::<usize>().map_err(|_| {
        CliError::Input(match header {
            Some(_) => format!("column {selector:?} is neither a header name nor an index"),
            None => format!("column {selector:?} is not an index and the input has no header"),
        })
    })
}

/// Parses a dataset. Blank lines are skipped; every other malformed row is
/// an error naming its line.
pub fn read_dataset<R: Read>(reader: R, options: &CsvOptions) -> Result<Dataset, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(options.has_header)
        .flexible(true)
        .from_reader(reader);
    let header = if options.has_header {
        Some(
            rdr.headers()
                .map_err(|e| CliError::Input(format!("cannot read header: {e}")))?
                .clone(),
        )
    } else {
        None
    };
    let x_idx = resolve(&options.x_col, header.as_ref())?;
    let y_idx = resolve(&options.y_col, header.as_ref())?;
    if x_idx == y_idx {
        return Err(CliError::Usage(format!(
            "x and y select the same column ({x_idx})"
        )));
    }
    if let Some(h) = &header {
        let width = h.len();
        if x_idx >= width || y_idx >= width {
            return Err(CliError::Input(format!(
                "header has {width} columns; cannot select columns {x_idx} and {y_idx}"
            )));
        }
    }
    let column_name = |i: usize| -> String {
        header
            .as_ref()
            .and_then(|h| h.get(i))
            .map(|s| s.trim().to_string())
            .unwrap_or_else(|| i.to_string())
    };

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| CliError::Input(format!("malformed CSV: {e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let field = |idx: usize| -> Result<f64, CliError> {
            let raw = record.get(idx).ok_or_else(|| {
                CliError::Input(format!(
                    "row {line}: missing column {} (row has {} fields)",
                    column_name(idx),
                    record.len()
                ))
            })?;
            let value: f64 = raw.trim().parse().map_err(|_| {
                CliError::Input(format!(
                    "row {line}, column {}: {raw:?} is not a number",
                    column_name(idx)
                ))
            })?;
            if !value.is_finite() {
                return Err(CliError::Input(format!(
                    "row {line}, column {}: non-finite value {raw:?}",
                    column_name(idx)
                )));
            }
            Ok(value)
        };
        xs.push(field(x_idx)?);
        ys.push(field(y_idx)?);
    }
    Dataset::new(xs, ys).map_err(|e| CliError::Input(e.to_string()))
}

/// Writes `x,y` rows with shortest round-trip formatting, so reading the
/// output back yields bit-identical values.
pub fn write_dataset<W: Write>(
    writer: W,
    d: &Dataset,
    delimiter: u8,
    header: Option<(&str, &str)>,
) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_writer(writer);
    let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    if let Some((x, y)) = header {
        w.write_record([x, y]).map_err(io)?;
    }
    for (x, y) in d.xs().iter().zip(d.ys()) {
        w.write_record([x.to_string(), y.to_string()]).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
