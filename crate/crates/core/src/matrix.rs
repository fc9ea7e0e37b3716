//! Labeled symmetric distance matrices and their TSV form.
//!
//! ```text
//! labels<TAB>l1<TAB>...<TAB>ln
//! l1<TAB>v11<TAB>...<TAB>v1n
//! ...
//! ```
//!
//! Values carry six decimals; an infinite distance is written `inf`.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

/// Largest |d(i,j) - d(j,i)| accepted when reading a matrix.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("a distance matrix needs at least 2 labels, got {0}")]
    TooSmall(usize),
    #[error("invalid label {0:?}: labels must be non-empty and contain no tab or newline")]
    InvalidLabel(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("entry ({row}, {col}) = {value} is not a non-negative distance")]
    InvalidEntry { row: String, col: String, value: f64 },
    #[error("entries ({a}, {b}) = {ab} and ({b}, {a}) = {ba} differ by more than {SYMMETRY_TOLERANCE}")]
    Asymmetric { a: String, b: String, ab: f64, ba: f64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub fn validate_label(label: &str) -> Result<(), MatrixError> {
    if label.is_empty() || label.contains(['\t', '\n', '\r']) {
        return Err(MatrixError::InvalidLabel(label.to_owned()));
    }
    Ok(())
}

pub(crate) fn validate_labels(labels: &[String]) -> Result<(), MatrixError> {
    if labels.len() < 2 {
        return Err(MatrixError::TooSmall(labels.len()));
    }
    let mut seen = HashSet::with_capacity(labels.len());
    for label in labels {
        validate_label(label)?;
        if !seen.insert(label.as_str()) {
            return Err(MatrixError::DuplicateLabel(label.clone()));
        }
    }
    Ok(())
}

/// Dense, exactly symmetric matrix of non-negative distances, `+inf` allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds a matrix by evaluating `dist(i, j)` for `i <= j` and mirroring.
    pub fn from_fn<F>(labels: Vec<String>, mut dist: F) -> Result<Self, MatrixError>
    where
        F: FnMut(usize, usize) -> f64,
    {
        validate_labels(&labels)?;
        let n = labels.len();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = dist(i, j);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        let m = Self { labels, entries };
        m.check_entries()?;
        Ok(m)
    }

    /// Builds a matrix from full rows, requiring symmetry within
    /// [`SYMMETRY_TOLERANCE`]. The upper triangle wins.
    pub fn from_rows(labels: Vec<String>, rows: &[Vec<f64>]) -> Result<Self, MatrixError> {
        validate_labels(&labels)?;
        let n = labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(MatrixError::Parse {
                line: 0,
                message: format!("expected a {n}x{n} matrix"),
            });
        }
        for i in 0..n {
            for j in i + 1..n {
                let (ab, ba) = (rows[i][j], rows[j][i]);
                let close = ab == ba || (ab - ba).abs() <= SYMMETRY_TOLERANCE;
                if !close {
                    return Err(MatrixError::Asymmetric {
                        a: labels[i].clone(),
                        b: labels[j].clone(),
                        ab,
                        ba,
                    });
                }
            }
        }
        Self::from_fn(labels, |i, j| rows[i][j])
    }

    fn check_entries(&self) -> Result<(), MatrixError> {
        let n = self.len();
        for i in 0..n {
            for j in i..n {
                let value = self.get(i, j);
                if value.is_nan() || value < 0.0 {
                    return Err(MatrixError::InvalidEntry {
                        row: self.labels[i].clone(),
                        col: self.labels[j].clone(),
                        value,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.labels.len() + j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    /// Position of the first infinite entry, if any.
    pub fn first_infinite(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j).is_infinite())
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("labels");
        for label in &self.labels {
            out.push('\t');
            out.push_str(label);
        }
        out.push('\n');
        for (i, label) in self.labels.iter().enumerate() {
            out.push_str(label);
            for j in 0..self.len() {
                out.push('\t');
                push_value(&mut out, self.get(i, j));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_tsv(text: &str) -> Result<Self, MatrixError> {
        let mut lines = text
            .lines()
            .map(|l| l.trim_end_matches('\r'))
            .enumerate()
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines.next().ok_or(MatrixError::Parse {
            line: 1,
            message: "empty input".into(),
        })?;
        let mut fields = header.split('\t');
        if fields.next() != Some("labels") {
            return Err(MatrixError::Parse {
                line: 1,
                message: "header must start with `labels`".into(),
            });
        }
        let labels: Vec<String> = fields.map(str::to_owned).collect();
        let n = labels.len();
        let mut rows = Vec::with_capacity(n);
        for (idx, line) in lines {
            let line_no = idx + 1;
            let mut fields = line.split('\t');
            let row_label = fields.next().unwrap_or_default();
            if rows.len() >= n {
                return Err(MatrixError::Parse {
                    line: line_no,
                    message: "more rows than labels".into(),
                });
            }
            if row_label != labels[rows.len()] {
                return Err(MatrixError::Parse {
                    line: line_no,
                    message: format!(
                        "row label {row_label:?} does not match header label {:?}",
                        labels[rows.len()]
                    ),
                });
            }
            let row = fields
                .map(|f| parse_value(f).ok_or_else(|| f.to_owned()))
                .collect::<Result<Vec<f64>, String>>()
                .map_err(|bad| MatrixError::Parse {
                    line: line_no,
                    message: format!("bad value {bad:?}"),
                })?;
            if row.len() != n {
                return Err(MatrixError::Parse {
                    line: line_no,
                    message: format!("expected {n} values, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(MatrixError::Parse {
                line: rows.len() + 2,
                message: format!("expected {n} rows, found {}", rows.len()),
            });
        }
        Self::from_rows(labels, &rows)
    }
}

fn push_value(out: &mut String, v: f64) {
    if v.is_infinite() {
        out.push_str("inf");
    } else {
        // `+ 0.0` folds negative zero.
        let _ = write!(out, "{:.6}", v + 0.0);
    }
}

fn parse_value(field: &str) -> Option<f64> {
    match field {
        "inf" => Some(f64::INFINITY),
        _ => field.parse::<f64>().ok().filter(|v| v.is_finite()),
    }
}
