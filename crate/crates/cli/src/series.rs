//! Column-oriented time series and their CSV form.

use std::fmt::Write as _;

/// Every column a run can emit, in file order.
pub const ALL_COLUMNS: [&str; 11] =
    ["tau", "w_total", "w_single", "p_ini", "i_f_abc", "i_fc_ab", "i_fcb_a", "c_ab", "n_a_bc", "n_ab", "n_abc"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub columns: Vec<String>,
    /// One row per sample, same length and order as `columns`.
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CsvError {
    #[error("series file is empty")]
    Empty,
    #[error("line {line}: expected {expected} fields, found {found}")]
    FieldCount { line: usize, expected: usize, found: usize },
    #[error("line {line}: cannot parse {text:?} as a number")]
    BadNumber { line: usize, text: String },
}

impl Series {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// Header line, then one row per sample in `{:.16e}` (17 significant
    /// digits), which round-trips every finite double.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{v:.16e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Series, CsvError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        let (_, header) = lines.next().ok_or(CsvError::Empty)?;
        let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
        let mut rows = Vec::new();
        for (idx, line) in lines {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != columns.len() {
                return Err(CsvError::FieldCount { line: idx + 1, expected: columns.len(), found: fields.len() });
            }
            let row = fields
                .iter()
                .map(|f| f.trim().parse().map_err(|_| CsvError::BadNumber { line: idx + 1, text: f.to_string() }))
                .collect::<Result<Vec<f64>, _>>()?;
            rows.push(row);
        }
        Ok(Series { columns, rows })
    }
}
