//! Delimited text ingestion and output.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{ExpressionMatrix, RawMatrix, RawRow};

#[derive(Debug, Clone, PartialEq)]
pub struct LoadOptions {
    pub delimiter: char,
    /// Fields equal to any of these (after trimming) are treated as missing.
    pub missing_tokens: Vec<String>,
    /// Skip the first non-empty line.
    pub has_header: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            delimiter: '\t',
            missing_tokens: vec!["NA".into(), "N/A".into(), String::new()],
            has_header: false,
        }
    }
}

impl LoadOptions {
    pub fn with_delimiter(mut self, delimiter: char) -> Self {
        self.delimiter = delimiter;
        self
    }

    pub fn with_missing_tokens<I, S>(mut self, tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.missing_tokens = tokens.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_header(mut self, has_header: bool) -> Self {
        self.has_header = has_header;
        self
    }
}

pub fn load_delimited(path: impl AsRef<Path>, options: &LoadOptions) -> Result<RawMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_delimited(BufReader::new(file), options).map_err(|e| match e {
        Error::Io { source, .. } => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

/// Parses delimited rows of `label, v1, ..., vm`. Unparseable or non-finite
/// values become missing slots, as do the configured missing tokens.
pub fn parse_delimited<R: BufRead>(reader: R, options: &LoadOptions) -> Result<RawMatrix> {
    let mut rows = Vec::new();
    let mut width: Option<usize> = None;
    let mut header_pending = options.has_header;

    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| Error::Io {
            path: "<input>".into(),
            source,
        })?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            continue;
        }
        if header_pending {
            header_pending = false;
            continue;
        }
        let fields: Vec<&str> = line.split(options.delimiter).collect();
        match width {
            None => {
                if fields.len() < 2 {
                    return Err(Error::Shape(format!(
                        "line {}: a row needs a label and at least one value",
                        idx + 1
                    )));
                }
                width = Some(fields.len());
            }
            Some(w) if w != fields.len() => {
                return Err(Error::InconsistentColumns {
                    line: idx + 1,
                    expected: w,
                    found: fields.len(),
                });
            }
            Some(_) => {}
        }
        let label = fields[0].trim();
        let label = if label.is_empty() {
            format!("row{}", rows.len())
        } else {
            label.to_string()
        };
        let values = fields[1..]
            .iter()
            .map(|f| parse_value(f.trim(), &options.missing_tokens))
            .collect();
        rows.push(RawRow { label, values });
    }

    match width {
        Some(w) => RawMatrix::new(rows, w - 1),
        None => Err(Error::NoDataRows),
    }
}

fn parse_value(field: &str, missing: &[String]) -> Option<f64> {
    if missing.iter().any(|t| t == field) {
        return None;
    }
    field.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Writes a header row of condition indices followed by one line per gene.
/// Values use the shortest representation that parses back to the same f64.
pub fn write_delimited<W: Write>(
    mut out: W,
    mat: &ExpressionMatrix,
    delimiter: char,
) -> std::io::Result<()> {
    write!(out, "label")?;
    for j in 0..mat.m() {
        write!(out, "{delimiter}{j}")?;
    }
    writeln!(out)?;
    for (label, row) in mat.labels().iter().zip(mat.rows()) {
        write!(out, "{label}")?;
        for v in row {
            write!(out, "{delimiter}{v}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, opts: &LoadOptions) -> Result<RawMatrix> {
        parse_delimited(text.as_bytes(), opts)
    }

    #[test]
    fn comma_file_with_na() {
        let opts = LoadOptions::default()
            .with_delimiter(',')
            .with_missing_tokens(["NA"]);
        let raw = parse("g1,1.0,2.0\ng2,NA,3.0", &opts).unwrap();
        assert_eq!(raw.n(), 2);
        assert_eq!(raw.m(), 2);
        assert_eq!(raw.rows()[1].label, "g2");
        assert_eq!(raw.rows()[1].values, vec![None, Some(3.0)]);
        assert_eq!(raw.missing_count(), 1);
    }

    #[test]
    fn empty_input_has_no_rows() {
        let opts = LoadOptions::default();
        assert!(matches!(parse("", &opts), Err(Error::NoDataRows)));
        assert!(matches!(parse("\n\n  \n", &opts), Err(Error::NoDataRows)));
    }

    #[test]
    fn ragged_rows_report_line() {
        let opts = LoadOptions::default();
        let err = parse("a\t1\t2\n\nb\t1\n", &opts).unwrap_err();
        match err {
            Error::InconsistentColumns {
                line,
                expected,
                found,
            } => {
                assert_eq!((line, expected, found), (3, 3, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn garbage_and_blank_fields_are_missing() {
        let opts = LoadOptions::default();
        let raw = parse("a\tfoo\t\tinf\t1e3\n", &opts).unwrap();
        assert_eq!(raw.rows()[0].values, vec![None, None, None, Some(1000.0)]);
    }

    #[test]
    fn missing_label_is_synthesized() {
        let opts = LoadOptions::default();
        let raw = parse("\t1\nx\t2\n\t3\n", &opts).unwrap();
        let labels: Vec<_> = raw.rows().iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, ["row0", "x", "row2"]);
    }

    #[test]
    fn header_is_skipped_when_requested() {
        let opts = LoadOptions::default().with_header(true);
        let raw = parse("label\t0\t1\ng\t1\t2\n", &opts).unwrap();
        assert_eq!(raw.n(), 1);
    }

    #[test]
    fn missing_file() {
        let err = load_delimited("/nonexistent/matrix.tsv", &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert!(err.is_data_error());
    }

    #[test]
    fn written_matrix_reloads_exactly() {
        let mat = ExpressionMatrix::new(
            vec!["g1".into(), "g2".into()],
            vec![0.1, -2.5e-7, 1.0 / 3.0, 42.0],
            2,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_delimited(&mut buf, &mat, '\t').unwrap();
        let raw = parse_delimited(&buf[..], &LoadOptions::default().with_header(true)).unwrap();
        let back = crate::matrix::drop_missing_rows(&raw).unwrap();
        assert_eq!(back, mat);
    }
}
