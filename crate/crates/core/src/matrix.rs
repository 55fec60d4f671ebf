//! Expression matrices: the raw (possibly incomplete) form produced by the
//! loader and the clean form every algorithm consumes.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// One parsed input line. `None` marks a missing or unparseable value.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRow {
    pub label: String,
    pub values: Vec<Option<f64>>,
}

/// Matrix as read from disk, before missing-value removal.
#[derive(Debug, Clone, PartialEq)]
pub struct RawMatrix {
    rows: Vec<RawRow>,
    m: usize,
}

impl RawMatrix {
    pub fn new(rows: Vec<RawRow>, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Shape("at least one value column is required".into()));
        }
        if rows.is_empty() {
            return Err(Error::NoDataRows);
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.values.len() != m) {
            return Err(Error::InconsistentColumns {
                line: i + 1,
                expected: m + 1,
                found: row.values.len() + 1,
            });
        }
        Ok(Self { rows, m })
    }

    pub fn rows(&self) -> &[RawRow] {
        &self.rows
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn missing_count(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| r.values.iter())
            .filter(|v| v.is_none())
            .count()
    }
}

/// Dense n×m matrix of finite values, rows are genes and columns conditions.
///
/// Stored row-major. Labels are unique.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpressionMatrix {
    labels: Vec<String>,
    data: Vec<f64>,
    n: usize,
    m: usize,
}

impl ExpressionMatrix {
    pub fn new(labels: Vec<String>, data: Vec<f64>, m: usize) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::NoDataRows);
        }
        if m == 0 {
            return Err(Error::Shape("at least one column is required".into()));
        }
        if data.len() != n * m {
            return Err(Error::Shape(format!(
                "{} values cannot fill {n} rows of {m} columns",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / m,
                column: pos % m,
            });
        }
        let mut seen = HashSet::with_capacity(n);
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        Ok(Self { labels, data, n, m })
    }

    /// Builds a matrix from row vectors, labelling rows `row0`, `row1`, ...
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * m);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != m {
                return Err(Error::InconsistentColumns {
                    line: i + 1,
                    expected: m,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        let labels = (0..rows.len()).map(|i| format!("row{i}")).collect();
        Self::new(labels, data, m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.m)
    }

    /// Population standard deviation of every column.
    pub fn column_std(&self) -> Vec<f64> {
        let n = self.n as f64;
        let mut mean = vec![0.0; self.m];
        for row in self.rows() {
            for (acc, v) in mean.iter_mut().zip(row) {
                *acc += v;
            }
        }
        mean.iter_mut().for_each(|v| *v /= n);
        let mut var = vec![0.0; self.m];
        for row in self.rows() {
            for ((acc, v), mu) in var.iter_mut().zip(row).zip(&mean) {
                *acc += (v - mu) * (v - mu);
            }
        }
        var.into_iter().map(|s| (s / n).sqrt()).collect()
    }

    /// New matrix holding the given rows in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let data = indices
            .iter()
            .flat_map(|&i| self.row(i).iter().copied())
            .collect();
        Self::new(labels, data, self.m)
    }
}

/// Keeps only complete rows, preserving their order.
pub fn drop_missing_rows(raw: &RawMatrix) -> Result<ExpressionMatrix> {
    let mut labels = Vec::new();
    let mut data = Vec::new();
    for row in raw.rows() {
        if row.values.iter().all(Option::is_some) {
            labels.push(row.label.clone());
            data.extend(row.values.iter().flatten());
        }
    }
    if labels.is_empty() {
        return Err(Error::AllRowsDropped);
    }
    ExpressionMatrix::new(labels, data, raw.m())
}

/// Per-row z-score: each gene is shifted to mean 0 and scaled to unit
/// population standard deviation (divisor m).
pub fn zscore_normalize(mat: &ExpressionMatrix) -> Result<ExpressionMatrix> {
    let m = mat.m();
    let mut data = Vec::with_capacity(mat.data().len());
    for (label, row) in mat.labels().iter().zip(mat.rows()) {
        if m < 2 {
            return Err(Error::TooFewColumns {
                label: label.clone(),
            });
        }
        let (mean, std) = mean_std(row);
        if std == 0.0 || !std.is_finite() {
            return Err(Error::ConstantRow {
                label: label.clone(),
            });
        }
        data.extend(row.iter().map(|v| (v - mean) / std));
    }
    ExpressionMatrix::new(mat.labels().to_vec(), data, m)
}

/// Mean and population standard deviation, two-pass. The mean gets one
/// refinement step from the residual sum so rows with a large offset and a
/// tiny spread still centre to within a few ulps.
pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    let len = values.len() as f64;
    let rough = values.iter().sum::<f64>() / len;
    let mean = rough + values.iter().map(|v| v - rough).sum::<f64>() / len;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / len;
    (mean, var.sqrt())
}
