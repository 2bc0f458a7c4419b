use std::fs::File;
use std::io::Read;
use std::path::Path;

use ndarray::Array2;

use super::LabeledDataset;
use crate::error::{Error, Result};

/// How to interpret a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvOptions {
    pub label_column: usize,
    pub has_header: bool,
    /// Rows with any cell equal to this token (after trimming) are dropped.
    pub missing_token: String,
}

impl CsvOptions {
    pub fn new(label_column: usize, has_header: bool) -> Self {
        Self { label_column, has_header, missing_token: "?".to_string() }
    }
}

/// Load a binary-labeled dataset from a CSV file.
///
/// Label values are mapped to `0`/`1` in first-seen order; the remaining
/// columns become features in file order.
pub fn load_csv(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let io_err = |source| Error::Io { path: path.to_path_buf(), source };
    let mut text = String::new();
    File::open(path).map_err(io_err)?.read_to_string(&mut text).map_err(io_err)?;
    read_csv(text.as_bytes(), opts)
}

/// Same as [`load_csv`] over any reader.
pub fn read_csv<R: Read>(reader: R, opts: &CsvOptions) -> Result<LabeledDataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(opts.has_header).trim(csv::Trim::All).from_reader(reader);

    let csv_err = |e: csv::Error| {
        let row = e.position().map_or(0, |p| p.line() as usize);
        Error::Parse { row, col: 0, message: e.to_string() }
    };

    let header: Option<Vec<String>> =
        if opts.has_header { Some(rdr.headers().map_err(csv_err)?.iter().map(str::to_string).collect()) } else { None };

    let mut label_values: Vec<String> = Vec::new();
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut width: Option<usize> = None;

    for record in rdr.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if opts.label_column >= record.len() {
            return Err(Error::Parse {
                row: line,
                col: opts.label_column,
                message: format!("label column {} out of range for {} columns", opts.label_column, record.len()),
            });
        }
        if record.iter().any(|cell| cell == opts.missing_token) {
            continue;
        }
        width.get_or_insert(record.len() - 1);

        let raw_label = &record[opts.label_column];
        let label = match label_values.iter().position(|v| v == raw_label) {
            Some(i) => i,
            None => {
                label_values.push(raw_label.to_string());
                if label_values.len() > 2 {
                    return Err(Error::UnsupportedMulticlass { found: label_values.len() });
                }
                label_values.len() - 1
            }
        };
        labels.push(label as u8);

        for (col, cell) in record.iter().enumerate().filter(|(c, _)| *c != opts.label_column) {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row: line,
                col,
                message: format!("non-numeric feature value {cell:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse { row: line, col, message: format!("non-finite feature value {cell:?}") });
            }
            values.push(v);
        }
    }

    let Some(d) = width.filter(|_| !labels.is_empty()) else {
        return Err(Error::invalid_data("no usable rows in CSV input"));
    };
    let features = Array2::from_shape_vec((labels.len(), d), values)
        .map_err(|e| Error::invalid_data(format!("ragged CSV rows: {e}")))?;
    let names =
        header.map(|h| h.into_iter().enumerate().filter(|(c, _)| *c != opts.label_column).map(|(_, n)| n).collect());
    LabeledDataset::with_names(features, labels, names)
}
