//! Dellac configurations and their inversion statistics.
//!
//! A configuration with `N` columns and `2N` rows is stored as the column of
//! the unique point in each row, read bottom-to-top. Columns and rows are
//! 1-based throughout, so the point in row `i` sits in box `(rows[i-1], i)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::search;

/// Largest column count the crate accepts. Rows are indexed with `u8` and
/// index sets with 32-bit masks.
pub const MAX_COLUMNS: usize = 15;

/// Largest column count for which [`enumerate_dellac`] materializes the whole
/// family in memory. Use [`search::for_each_dellac`] to stream larger sizes.
pub const MAX_MATERIALIZED_COLUMNS: usize = 8;

/// A box `(column, row)` holding a point of a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub column: usize,
    pub row: usize,
}

impl Point {
    pub fn new(column: usize, row: usize) -> Self {
        Point { column, row }
    }

    /// Image under the central reflection of an `n_cols x 2*n_cols` tableau.
    pub fn reflect(self, n_cols: usize) -> Self {
        Point {
            column: n_cols + 1 - self.column,
            row: 2 * n_cols + 1 - self.row,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.column, self.row)
    }
}

/// Input that cannot even be read as a tableau.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("column count must be between 1 and {MAX_COLUMNS}, got {0}")]
    ColumnCount(usize),
    #[error("expected {expected} rows for {n_cols} columns, got {found}")]
    RowCount {
        n_cols: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row} names column {column}, outside 1..={n_cols}")]
    ColumnOutOfRange {
        row: usize,
        column: usize,
        n_cols: usize,
    },
    #[error("not a Dellac configuration: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("configuration is not centrally symmetric")]
    NotSymmetric,
    #[error("refusing to materialize DC_{n}: more than {limit} columns; stream it instead")]
    TooLarge { n: usize, limit: usize },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// A failed Dellac condition on a structurally sound tableau.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    ColumnCount { column: usize, points: usize },
    Band { row: usize, column: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ColumnCount { column, points } => {
                write!(f, "column {column} has {points} points")
            }
            Violation::Band { row, column } => {
                write!(
                    f,
                    "point ({column},{row}) lies outside the band j <= i <= N+j"
                )
            }
        }
    }
}

/// Checks the shape of a row assignment and then the three Dellac conditions.
///
/// Structural problems (wrong length, columns out of range) are reported as
/// `Err`; a well-formed tableau returns the list of failed conditions, empty
/// when the tableau is a Dellac configuration.
pub fn validate_rows(n_cols: usize, rows: &[usize]) -> Result<Vec<Violation>, ConfigError> {
    if n_cols == 0 || n_cols > MAX_COLUMNS {
        return Err(ConfigError::ColumnCount(n_cols));
    }
    if rows.len() != 2 * n_cols {
        return Err(ConfigError::RowCount {
            n_cols,
            expected: 2 * n_cols,
            found: rows.len(),
        });
    }
    let mut counts = vec![0usize; n_cols + 1];
    for (idx, &c) in rows.iter().enumerate() {
        if c == 0 || c > n_cols {
            return Err(ConfigError::ColumnOutOfRange {
                row: idx + 1,
                column: c,
                n_cols,
            });
        }
        counts[c] += 1;
    }
    let mut violations = Vec::new();
    for (column, &points) in counts.iter().enumerate().skip(1) {
        if points != 2 {
            violations.push(Violation::ColumnCount { column, points });
        }
    }
    for (idx, &column) in rows.iter().enumerate() {
        let row = idx + 1;
        if !(column <= row && row <= n_cols + column) {
            violations.push(Violation::Band { row, column });
        }
    }
    Ok(violations)
}

/// A validated Dellac configuration.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DellacConfiguration {
    n_cols: usize,
    rows: Vec<u8>,
}

impl DellacConfiguration {
    /// Builds a configuration from the column of each row, bottom to top.
    pub fn new(n_cols: usize, rows: &[usize]) -> Result<Self, ConfigError> {
        let violations = validate_rows(n_cols, rows)?;
        if !violations.is_empty() {
            return Err(ConfigError::Invalid(violations));
        }
        Ok(DellacConfiguration {
            n_cols,
            rows: rows.iter().map(|&c| c as u8).collect(),
        })
    }

    /// Builds a configuration from its point set.
    pub fn from_points(n_cols: usize, points: &[Point]) -> Result<Self, ConfigError> {
        if n_cols == 0 || n_cols > MAX_COLUMNS {
            return Err(ConfigError::ColumnCount(n_cols));
        }
        let mut rows = vec![0usize; 2 * n_cols];
        for p in points {
            if p.row == 0 || p.row > 2 * n_cols || rows[p.row - 1] != 0 {
                return Err(ConfigError::RowCount {
                    n_cols,
                    expected: 2 * n_cols,
                    found: points.len(),
                });
            }
            rows[p.row - 1] = p.column;
        }
        Self::new(n_cols, &rows)
    }

    /// Wraps rows produced by the search engine, which only emits valid tableaux.
    pub(crate) fn from_raw(n_cols: usize, rows: &[u8]) -> Self {
        debug_assert!(validate_rows(
            n_cols,
            &rows.iter().map(|&c| c as usize).collect::<Vec<_>>()
        )
        .map(|v| v.is_empty())
        .unwrap_or(false));
        DellacConfiguration {
            n_cols,
            rows: rows.to_vec(),
        }
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Column of the point in each row, bottom to top.
    pub fn rows(&self) -> Vec<usize> {
        self.rows.iter().map(|&c| c as usize).collect()
    }

    pub(crate) fn raw_rows(&self) -> &[u8] {
        &self.rows
    }

    /// Column of the point in `row` (1-based).
    pub fn column_of_row(&self, row: usize) -> usize {
        self.rows[row - 1] as usize
    }

    /// All points, ordered by row.
    pub fn points(&self) -> Vec<Point> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, &c)| Point::new(c as usize, i + 1))
            .collect()
    }

    pub fn central_reflection(&self) -> Self {
        DellacConfiguration {
            n_cols: self.n_cols,
            rows: reflect_rows(self.n_cols, &self.rows),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        is_symmetric_rows(self.n_cols, &self.rows)
    }

    pub fn inversions(&self) -> Vec<Inversion> {
        inversions(self)
    }

    pub fn inv(&self) -> usize {
        inv_rows(&self.rows)
    }

    pub fn classify(&self) -> InversionClassification {
        classify_rows(self.n_cols, &self.rows)
    }

    pub fn inv_tilde(&self) -> Result<usize, ConfigError> {
        inv_tilde(self)
    }

    pub fn inv_prime(&self) -> Result<usize, ConfigError> {
        inv_prime(self)
    }
}

impl fmt::Display for DellacConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DC[{}](", self.n_cols)?;
        for (i, c) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn reflect_rows(n_cols: usize, rows: &[u8]) -> Vec<u8> {
    rows.iter().rev().map(|&c| (n_cols + 1) as u8 - c).collect()
}

pub(crate) fn is_symmetric_rows(n_cols: usize, rows: &[u8]) -> bool {
    let m = rows.len();
    (0..n_cols).all(|i| rows[i] as usize + rows[m - 1 - i] as usize == n_cols + 1)
}

/// Pair of points `(first, second)` with `first` strictly left of and
/// strictly above `second`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Inversion {
    pub first: Point,
    pub second: Point,
}

impl Inversion {
    /// The unordered pair of reflected points, written back as an inversion.
    pub fn reflect(self, n_cols: usize) -> Self {
        let a = self.first.reflect(n_cols);
        let b = self.second.reflect(n_cols);
        // reflection reverses both coordinates, so the roles swap
        Inversion {
            first: b,
            second: a,
        }
    }

    pub fn is_self_symmetric(self, n_cols: usize) -> bool {
        self.reflect(n_cols) == self
    }
}

impl fmt::Display for Inversion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

/// Counts of inversions split by their behavior under the central reflection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InversionClassification {
    pub total: usize,
    /// Inversions whose point pair is mapped onto itself.
    pub self_symmetric: usize,
    /// Inversions moved by the reflection.
    pub paired: usize,
}

/// Every inversion, ordered by the row of the upper point and then of the lower one.
pub fn inversions(cfg: &DellacConfiguration) -> Vec<Inversion> {
    let rows = &cfg.rows;
    let mut out = Vec::new();
    for (hi, &c_hi) in rows.iter().enumerate() {
        for (lo, &c_lo) in rows[..hi].iter().enumerate() {
            if c_hi < c_lo {
                out.push(Inversion {
                    first: Point::new(c_hi as usize, hi + 1),
                    second: Point::new(c_lo as usize, lo + 1),
                });
            }
        }
    }
    out
}

pub(crate) fn inv_rows(rows: &[u8]) -> usize {
    let mut count = 0;
    for hi in 1..rows.len() {
        let c = rows[hi];
        count += rows[..hi].iter().filter(|&&lo| c < lo).count();
    }
    count
}

pub(crate) fn classify_rows(n_cols: usize, rows: &[u8]) -> InversionClassification {
    let total = inv_rows(rows);
    let m = rows.len();
    // An inversion is fixed setwise only when its two points swap, i.e. the
    // lower point is the reflection of the upper one.
    let self_symmetric = (n_cols..m)
        .filter(|&hi| {
            let lo = m - 1 - hi;
            let (c_hi, c_lo) = (rows[hi] as usize, rows[lo] as usize);
            c_hi + c_lo == n_cols + 1 && c_hi < c_lo
        })
        .count();
    InversionClassification {
        total,
        self_symmetric,
        paired: total - self_symmetric,
    }
}

pub fn classify(cfg: &DellacConfiguration) -> InversionClassification {
    classify_rows(cfg.n_cols, &cfg.rows)
}

/// Number of classes of inversions up to the central reflection.
pub fn inv_tilde(cfg: &DellacConfiguration) -> Result<usize, ConfigError> {
    if !cfg.is_symmetric() {
        return Err(ConfigError::NotSymmetric);
    }
    let c = cfg.classify();
    debug_assert!(c.paired.is_multiple_of(2));
    Ok(c.self_symmetric + c.paired / 2)
}

/// Half the number of inversions that are not fixed by the central reflection.
pub fn inv_prime(cfg: &DellacConfiguration) -> Result<usize, ConfigError> {
    if !cfg.is_symmetric() {
        return Err(ConfigError::NotSymmetric);
    }
    let c = cfg.classify();
    assert!(
        c.paired.is_multiple_of(2),
        "odd number of moved inversions in symmetric configuration {cfg}"
    );
    Ok(c.paired / 2)
}

/// All of `DC_n` in lexicographic order of the row assignment.
pub fn enumerate_dellac(n: usize) -> Result<Vec<DellacConfiguration>, ConfigError> {
    if n == 0 || n > MAX_COLUMNS {
        return Err(ConfigError::ColumnCount(n));
    }
    if n > MAX_MATERIALIZED_COLUMNS {
        return Err(ConfigError::TooLarge {
            n,
            limit: MAX_MATERIALIZED_COLUMNS,
        });
    }
    let mut out = Vec::new();
    search::for_each_dellac(n, |rows| out.push(DellacConfiguration::from_raw(n, rows)));
    Ok(out)
}

/// The centrally symmetric elements of `DC_n`, in the same order as
/// [`enumerate_dellac`].
pub fn enumerate_symmetric(n: usize) -> Result<Vec<DellacConfiguration>, ConfigError> {
    if n == 0 || n > MAX_COLUMNS {
        return Err(ConfigError::ColumnCount(n));
    }
    let mut out = Vec::new();
    search::for_each_symmetric(n, |rows| out.push(DellacConfiguration::from_raw(n, rows)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, rows: &[usize]) -> DellacConfiguration {
        DellacConfiguration::new(n, rows).unwrap()
    }

    #[test]
    fn single_column() {
        assert_eq!(validate_rows(1, &[1, 1]).unwrap(), vec![]);
        assert_eq!(enumerate_dellac(1).unwrap(), vec![cfg(1, &[1, 1])]);
    }

    #[test]
    fn staircase_is_valid() {
        assert!(validate_rows(3, &[1, 2, 3, 1, 2, 3]).unwrap().is_empty());
        assert!(validate_rows(3, &[1, 1, 2, 2, 3, 3]).unwrap().is_empty());
    }

    #[test]
    fn column_overflow_is_reported() {
        let v = validate_rows(3, &[1, 1, 1, 2, 3, 3]).unwrap();
        assert!(v.contains(&Violation::ColumnCount {
            column: 1,
            points: 3
        }));
        assert!(v.contains(&Violation::ColumnCount {
            column: 2,
            points: 1
        }));
        assert_eq!(
            Violation::ColumnCount {
                column: 1,
                points: 3
            }
            .to_string(),
            "column 1 has 3 points"
        );
    }

    #[test]
    fn band_violation_is_reported() {
        // column 2 in row 1 sits below the diagonal
        let v = validate_rows(2, &[2, 1, 1, 2]).unwrap();
        assert_eq!(v, vec![Violation::Band { row: 1, column: 2 }]);
        // column 1 in row 4 sits above the band
        let v = validate_rows(2, &[1, 2, 2, 1]).unwrap();
        assert_eq!(v, vec![Violation::Band { row: 4, column: 1 }]);
    }

    #[test]
    fn structural_errors_are_distinct() {
        assert_eq!(
            validate_rows(2, &[1, 2, 1]),
            Err(ConfigError::RowCount {
                n_cols: 2,
                expected: 4,
                found: 3
            })
        );
        assert!(matches!(
            validate_rows(2, &[1, 3, 1, 2]),
            Err(ConfigError::ColumnOutOfRange {
                row: 2,
                column: 3,
                ..
            })
        ));
        assert_eq!(validate_rows(0, &[]), Err(ConfigError::ColumnCount(0)));
        assert!(matches!(
            DellacConfiguration::new(3, &[1, 1, 1, 2, 3, 3]),
            Err(ConfigError::Invalid(_))
        ));
    }

    #[test]
    fn reflection_examples() {
        let s = cfg(3, &[1, 2, 3, 1, 2, 3]);
        assert_eq!(s.central_reflection(), s);
        assert!(s.is_symmetric());
        let t = cfg(2, &[1, 2, 1, 2]);
        assert_eq!(t.central_reflection(), t);
        let u = cfg(3, &[1, 1, 2, 3, 2, 3]);
        assert!(!u.is_symmetric());
        assert_eq!(u.central_reflection().central_reflection(), u);
    }

    #[test]
    fn staircase_inversions() {
        let s = cfg(3, &[1, 2, 3, 1, 2, 3]);
        let expected = vec![
            Inversion {
                first: Point::new(1, 4),
                second: Point::new(2, 2),
            },
            Inversion {
                first: Point::new(1, 4),
                second: Point::new(3, 3),
            },
            Inversion {
                first: Point::new(2, 5),
                second: Point::new(3, 3),
            },
        ];
        let mut got = s.inversions();
        got.sort();
        assert_eq!(got, expected);
        let c = s.classify();
        assert_eq!(
            c,
            InversionClassification {
                total: 3,
                self_symmetric: 1,
                paired: 2
            }
        );
        assert_eq!(s.inv_tilde().unwrap(), 2);
        assert_eq!(s.inv_prime().unwrap(), 1);
    }

    #[test]
    fn classification_matches_explicit_orbits() {
        for n in 1..=6 {
            for d in enumerate_symmetric(n).unwrap() {
                let invs = d.inversions();
                let fixed = invs.iter().filter(|i| i.is_self_symmetric(n)).count();
                for i in &invs {
                    assert!(invs.contains(&i.reflect(n)), "{d}: {i} has no mirror");
                }
                assert_eq!(d.classify().self_symmetric, fixed);
            }
        }
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let u = cfg(3, &[1, 1, 2, 3, 2, 3]);
        assert_eq!(u.inv_tilde(), Err(ConfigError::NotSymmetric));
        assert_eq!(u.inv_prime(), Err(ConfigError::NotSymmetric));
    }

    #[test]
    fn inversion_free_symmetric_has_zero_statistics() {
        let d = cfg(2, &[1, 1, 2, 2]);
        assert_eq!(d.inv(), 0);
        assert_eq!(d.inv_tilde().unwrap(), 0);
        assert_eq!(d.inv_prime().unwrap(), 0);
    }

    #[test]
    fn from_points_roundtrip() {
        let d = cfg(3, &[1, 2, 1, 3, 2, 3]);
        assert_eq!(DellacConfiguration::from_points(3, &d.points()).unwrap(), d);
    }

    #[test]
    fn materialization_limit() {
        assert_eq!(
            enumerate_dellac(MAX_MATERIALIZED_COLUMNS + 1),
            Err(ConfigError::TooLarge {
                n: MAX_MATERIALIZED_COLUMNS + 1,
                limit: MAX_MATERIALIZED_COLUMNS
            })
        );
    }
}
