//! Delimited text datasets and the built-in UCI copies.

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use biaspca::evaluation::synthetic_gaussian;
use biaspca::DataMatrixF64;
use thiserror::Error;

const IRIS: &str = include_str!("../../../data/iris.csv");
const WINE: &str = include_str!("../../../data/wine.csv");
const WDBC: &str = include_str!("../../../data/wdbc.csv");

pub const SYNTHETIC_DIM: usize = 3;
pub const SYNTHETIC_LEN: usize = 50;
pub const SYNTHETIC_MEAN_NORM: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    PointsAsRows,
    PointsAsColumns,
}

impl Orientation {
    pub fn name(self) -> &'static str {
        match self {
            Orientation::PointsAsRows => "points_as_rows",
            Orientation::PointsAsColumns => "points_as_columns",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File(PathBuf),
    Iris,
    Wine,
    Wdbc,
    Synthetic { seed: u64 },
}

impl Source {
    /// Built-in name, or a path.
    pub fn parse(name: &str, seed: u64) -> Self {
        match name {
            "iris" => Source::Iris,
            "wine" => Source::Wine,
            "wdbc" => Source::Wdbc,
            "synthetic" => Source::Synthetic { seed },
            path => Source::File(PathBuf::from(path)),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Source::File(p) => p.display().to_string(),
            Source::Iris => "iris".into(),
            Source::Wine => "wine".into(),
            Source::Wdbc => "wdbc".into(),
            Source::Synthetic { .. } => "synthetic".into(),
        }
    }

    /// Header flag and 0-based feature columns used when none are given.
    fn defaults(&self) -> (bool, Option<Vec<usize>>) {
        match self {
            Source::Iris => (true, Some((0..4).collect())),
            Source::Wine => (true, Some((1..14).collect())),
            Source::Wdbc => (true, Some((0..30).collect())),
            Source::File(_) | Source::Synthetic { .. } => (false, None),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub source: Source,
    pub orientation: Orientation,
    /// 0-based file columns; `None` keeps them all.
    pub columns: Option<Vec<usize>>,
    pub header: bool,
}

impl DatasetSpec {
    /// Fills in the header flag and column selection of built-in datasets.
    pub fn resolve(source: Source, orientation: Orientation, columns: Option<Vec<usize>>, header: bool) -> Self {
        let (default_header, default_columns) = source.defaults();
        Self {
            columns: columns.or(default_columns),
            header: header || default_header,
            source,
            orientation,
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: cannot parse {cell:?} as a number")]
    ParseError { line: usize, column: usize, cell: String },
    #[error("line {line} has {found} columns, but column {wanted} was requested")]
    MissingColumn { line: usize, wanted: usize, found: usize },
    #[error("line {line} has {found} values, expected {expected}")]
    RaggedRow { line: usize, expected: usize, found: usize },
    #[error("dataset contains no data")]
    EmptyDataset,
    #[error("invalid column selection {0:?}")]
    InvalidColumns(String),
    #[error(transparent)]
    Data(#[from] biaspca::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub matrix: DataMatrixF64,
}

/// Parses `1-4,6` into 0-based indices `[0, 1, 2, 3, 5]`.
pub fn parse_columns(text: &str) -> Result<Vec<usize>, LoadError> {
    let bad = || LoadError::InvalidColumns(text.to_string());
    let one_based = |s: &str| -> Result<usize, LoadError> {
        match s.trim().parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(bad()),
        }
    };
    let mut out = Vec::new();
    for part in text.split(',') {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (one_based(a)?, one_based(b)?);
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(one_based(part)?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

pub fn load_dataset(spec: &DatasetSpec) -> Result<Dataset, LoadError> {
    let matrix = match &spec.source {
        Source::Synthetic { seed } => synthetic_gaussian(SYNTHETIC_DIM, SYNTHETIC_LEN, SYNTHETIC_MEAN_NORM, *seed)?,
        Source::Iris => parse_table(IRIS, spec)?,
        Source::Wine => parse_table(WINE, spec)?,
        Source::Wdbc => parse_table(WDBC, spec)?,
        Source::File(path) => parse_table(&read(path)?, spec)?,
    };
    log::info!(
        "loaded {}: {} features, {} points",
        spec.source.name(),
        matrix.dim(),
        matrix.len()
    );
    Ok(Dataset {
        name: spec.source.name(),
        matrix,
    })
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        ErrorKind::NotFound => LoadError::FileNotFound(path.to_path_buf()),
        _ => LoadError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })
}

/// Splits a line on commas when it has any, otherwise on whitespace.
fn split_line(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

/// Parses delimited text into a data matrix. Line and column numbers in errors are 1-based.
pub fn parse_table(text: &str, spec: &DatasetSpec) -> Result<DataMatrixF64, LoadError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    if spec.header {
        lines.next();
    }
    for (idx, line) in lines {
        let line_no = idx + 1;
        let cells = split_line(line);
        let selected: Vec<usize> = match &spec.columns {
            Some(cols) => cols.clone(),
            None => (0..cells.len()).collect(),
        };
        let mut row = Vec::with_capacity(selected.len());
        for &c in &selected {
            let cell = cells.get(c).ok_or(LoadError::MissingColumn {
                line: line_no,
                wanted: c + 1,
                found: cells.len(),
            })?;
            let value: f64 = cell.parse().map_err(|_| LoadError::ParseError {
                line: line_no,
                column: c + 1,
                cell: cell.to_string(),
            })?;
            if !value.is_finite() {
                return Err(LoadError::ParseError {
                    line: line_no,
                    column: c + 1,
                    cell: cell.to_string(),
                });
            }
            row.push(value);
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(LoadError::RaggedRow {
                    line: line_no,
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() || rows[0].is_empty() {
        return Err(LoadError::EmptyDataset);
    }
    Ok(match spec.orientation {
        Orientation::PointsAsRows => DataMatrixF64::from_points(&rows)?,
        Orientation::PointsAsColumns => DataMatrixF64::from_rows(&rows)?,
    })
}
