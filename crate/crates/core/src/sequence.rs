//! Ordered point sequences, their labels, and the shared CSV/JSON formats.
//!
//! Points are labelled by position: `1..9` for the first nine, then `A..Z`,
//! then parenthesised decimal indices such as `(36)`. Label `0` denotes a
//! point prepended before the first one.

use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::combin::Combinations;
use crate::error::{Error, Result};
use crate::kernel::{self, orientation, parse_rational, Point, Sign};

/// Text of the label for position number `n`.
pub fn label_text(n: usize) -> String {
    match n {
        0..=9 => char::from(b'0' + n as u8).to_string(),
        10..=35 => char::from(b'A' + (n - 10) as u8).to_string(),
        _ => format!("({n})"),
    }
}

/// Inverse of [`label_text`] for a single-character label.
pub fn label_value(c: char) -> Option<usize> {
    match c {
        '0'..='9' => Some(c as usize - '0' as usize),
        'A'..='Z' => Some(c as usize - 'A' as usize + 10),
        _ => None,
    }
}

/// An ordered list of points of a common dimension.
#[derive(Debug, Clone)]
pub struct PointSequence {
    dim: usize,
    points: Vec<Point>,
    generic: OnceLock<bool>,
    homogeneous: OnceLock<Option<Sign>>,
}

impl PartialEq for PointSequence {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.points == other.points
    }
}

impl Eq for PointSequence {}

impl PointSequence {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let dim = points
            .first()
            .map(Point::dim)
            .ok_or_else(|| Error::Precondition("empty point sequence".into()))?;
        Self::with_dim(dim, points)
    }

    pub fn with_dim(dim: usize, points: Vec<Point>) -> Result<Self> {
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.dim() != dim) {
            return Err(Error::Dimension(format!(
                "point {} has dimension {}, expected {dim}",
                i + 1,
                p.dim()
            )));
        }
        Ok(PointSequence {
            dim,
            points,
            generic: OnceLock::new(),
            homogeneous: OnceLock::new(),
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| Point::from_ints(r)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// The subsequence at the given (0-based, increasing) positions.
    pub fn select(&self, positions: &[usize]) -> PointSequence {
        PointSequence {
            dim: self.dim,
            points: positions.iter().map(|&i| self.points[i].clone()).collect(),
            generic: OnceLock::new(),
            homogeneous: OnceLock::new(),
        }
    }

    /// No (d+1)-subset has vanishing orientation. Cached after the first call.
    pub fn is_generic(&self) -> bool {
        *self
            .generic
            .get_or_init(|| kernel::is_generic(&self.points, self.dim + 1))
    }

    /// The common orientation of all (d+1)-subsequences, if there is one and
    /// it is nonzero. Cached after the first call.
    pub fn homogeneous_sign(&self) -> Option<Sign> {
        *self.homogeneous.get_or_init(|| self.compute_homogeneous_sign())
    }

    fn compute_homogeneous_sign(&self) -> Option<Sign> {
        let k = self.dim + 1;
        if self.len() < k {
            return None;
        }
        let mut common = None;
        for subset in Combinations::new(self.len(), k) {
            let refs: Vec<&Point> = subset.iter().map(|&i| &self.points[i]).collect();
            let s = orientation(&refs).ok()?;
            if s.is_zero() || common.is_some_and(|c| c != s) {
                return None;
            }
            common = Some(s);
        }
        common
    }

    pub fn is_orientation_homogeneous(&self) -> bool {
        self.homogeneous_sign().is_some()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            out.push_str(&p.to_strings().join(","));
            out.push('\n');
        }
        out
    }

    /// One point per row, coordinates as `p/q` or integers. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut points = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::parse(row + 1, e.to_string()))?;
            let coords = record
                .iter()
                .map(|field| {
                    parse_rational(field).map_err(|_| {
                        Error::parse(row + 1, format!("bad coordinate {field:?}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            points.push(Point::new(coords));
        }
        Self::new(points)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SequenceFile::from(self)).expect("sequence serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SequenceFile =
            serde_json::from_str(text).map_err(|e| Error::parse(e.column(), e.to_string()))?;
        Self::with_dim(file.dim, file.points)
    }

    /// Load a `.json` file, or CSV for any other extension.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_csv(&text)
        }
    }
}

/// On-disk JSON layout of a point sequence.
#[derive(Debug, Serialize, Deserialize)]
pub struct SequenceFile {
    pub dim: usize,
    pub points: Vec<Point>,
}

impl From<&PointSequence> for SequenceFile {
    fn from(seq: &PointSequence) -> Self {
        SequenceFile {
            dim: seq.dim,
            points: seq.points.clone(),
        }
    }
}

impl Serialize for PointSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SequenceFile::from(self).serialize(s)
    }
}
