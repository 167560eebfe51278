//! JSON-lines wire forms of configurations, collections and polynomials.
//!
//! ```text
//! {"n_cols":2,"rows":[1,2,1,2]}
//! {"family":"sp-even","n_ambient":8,"sets":[[3],[3,7],[1,4,7],[1,4,6,7]]}
//! {"variety":"so-even","n_ambient":4,"coeffs_ascending":[2,4,4]}
//! ```

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Number;
use thiserror::Error;

use crate::config::DellacConfiguration;
use crate::flag::{Family, IndexCollection};
use crate::poincare::VarietyFamily;
use crate::poly::PoincarePolynomial;
use crate::search::{
    dellac_prefixes, for_each_dellac_below, for_each_symmetric_below, symmetric_prefixes,
    DELLAC_SPLIT_DEPTH, SYMMETRIC_SPLIT_DEPTH,
};

/// A malformed or invalid record, located by line and, for syntax errors,
/// by column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct WireError {
    pub line: usize,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for WireError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.column {
            Some(c) => write!(f, "line {}, column {}: {}", self.line, c, self.message),
            None => write!(f, "line {}: {}", self.line, self.message),
        }
    }
}

impl WireError {
    fn invalid(line: usize, message: impl fmt::Display) -> Self {
        WireError {
            line,
            column: None,
            message: message.to_string(),
        }
    }

    fn syntax(line: usize, e: serde_json::Error) -> Self {
        // serde_json reports its own line within the record, always 1 here
        WireError {
            line,
            column: Some(e.column()),
            message: e.to_string(),
        }
    }

    /// Re-anchors an error from a single-record parser at `line`.
    fn at_line(mut self, line: usize) -> Self {
        self.line = line;
        self
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigRecord {
    n_cols: usize,
    rows: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CollectionRecord {
    family: Family,
    n_ambient: usize,
    sets: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialRecord {
    variety: Family,
    n_ambient: usize,
    coeffs_ascending: Vec<Number>,
}

fn parse<'a, T: Deserialize<'a>>(line: &'a str) -> Result<T, WireError> {
    serde_json::from_str(line).map_err(|e| WireError::syntax(1, e))
}

pub fn config_to_json(cfg: &DellacConfiguration) -> String {
    let mut out = Vec::new();
    write_config_line(&mut out, cfg.n_cols(), cfg.raw_rows()).expect("writing to a Vec");
    out.pop();
    String::from_utf8(out).expect("ascii output")
}

/// Writes one configuration record and a newline, straight from a row
/// assignment. Output matches [`config_to_json`].
pub fn write_config_line<W: Write>(out: &mut W, n_cols: usize, rows: &[u8]) -> io::Result<()> {
    write!(out, "{{\"n_cols\":{n_cols},\"rows\":[")?;
    for (i, c) in rows.iter().enumerate() {
        if i > 0 {
            out.write_all(b",")?;
        }
        write!(out, "{c}")?;
    }
    out.write_all(b"]}\n")
}

pub fn config_from_json(line: &str) -> Result<DellacConfiguration, WireError> {
    let r: ConfigRecord = parse(line)?;
    DellacConfiguration::new(r.n_cols, &r.rows).map_err(|e| WireError::invalid(1, e))
}

pub fn collection_to_json(c: &IndexCollection) -> String {
    serde_json::to_string(&CollectionRecord {
        family: c.family(),
        n_ambient: c.ambient(),
        sets: c.sets(),
    })
    .expect("collections serialize")
}

pub fn collection_from_json(line: &str) -> Result<IndexCollection, WireError> {
    let r: CollectionRecord = parse(line)?;
    IndexCollection::new(r.family, r.n_ambient, &r.sets).map_err(|e| WireError::invalid(1, e))
}

/// Coefficients are written as exact decimal integers of any size.
pub fn polynomial_to_json(variety: VarietyFamily, p: &PoincarePolynomial) -> String {
    let coeffs = p
        .coeffs()
        .iter()
        .map(|c| Number::from_str(&c.to_str_radix(10)).expect("decimal integers are numbers"))
        .collect();
    serde_json::to_string(&PolynomialRecord {
        variety: variety.family(),
        n_ambient: variety.ambient(),
        coeffs_ascending: coeffs,
    })
    .expect("polynomials serialize")
}

pub fn polynomial_from_json(line: &str) -> Result<(VarietyFamily, PoincarePolynomial), WireError> {
    let r: PolynomialRecord = parse(line)?;
    let variety =
        VarietyFamily::new(r.variety, r.n_ambient).map_err(|e| WireError::invalid(1, e))?;
    let coeffs = r
        .coeffs_ascending
        .iter()
        .enumerate()
        .map(|(d, x)| {
            BigUint::from_str(&x.to_string()).map_err(|_| {
                WireError::invalid(
                    1,
                    format!("coefficient of q^{d} is not a nonnegative integer: {x}"),
                )
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    if r.coeffs_ascending.len() != coeffs.len()
        || coeffs.last().is_some_and(|c| c == &BigUint::ZERO)
    {
        return Err(WireError::invalid(1, "leading coefficient is zero"));
    }
    Ok((variety, PoincarePolynomial::new(coeffs)))
}

/// Parses every non-blank line of `reader` with `parse`, numbering lines
/// from 1.
pub fn read_records<R, T, P>(reader: R, parse: P) -> impl Iterator<Item = Result<T, WireError>>
where
    R: BufRead,
    P: Fn(&str) -> Result<T, WireError>,
{
    reader
        .lines()
        .enumerate()
        .filter_map(move |(i, line)| match line {
            Err(e) => Some(Err(WireError::invalid(i + 1, e))),
            Ok(l) if l.trim().is_empty() => None,
            Ok(l) => Some(parse(&l).map_err(|e| e.at_line(i + 1))),
        })
}

pub fn read_configurations<R: BufRead>(
    reader: R,
) -> impl Iterator<Item = Result<DellacConfiguration, WireError>> {
    read_records(reader, config_from_json)
}

pub fn read_collections<R: BufRead>(
    reader: R,
) -> impl Iterator<Item = Result<IndexCollection, WireError>> {
    read_records(reader, collection_from_json)
}

/// Which configurations [`write_enumeration`] lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnumerationKind {
    Dellac,
    Symmetric,
}

impl FromStr for EnumerationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dellac" => Ok(EnumerationKind::Dellac),
            "symmetric" => Ok(EnumerationKind::Symmetric),
            _ => Err(format!(
                "unknown configuration family {s:?}, expected dellac or symmetric"
            )),
        }
    }
}

impl fmt::Display for EnumerationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnumerationKind::Dellac => "dellac",
            EnumerationKind::Symmetric => "symmetric",
        })
    }
}

/// Subtrees rendered per parallel batch.
const BATCH: usize = 16;

/// Renders every configuration of the family with `line(out, n_cols, rows)`
/// and streams the bytes to `out` in lexicographic order. Subtrees are
/// rendered in parallel on the current rayon pool, a batch at a time, so the
/// output does not depend on the thread count. Returns the number of
/// configurations.
pub fn write_enumeration<W, L>(
    out: &mut W,
    kind: EnumerationKind,
    n: usize,
    line: L,
) -> io::Result<u64>
where
    W: Write,
    L: Fn(&mut Vec<u8>, usize, &[u8]) -> io::Result<()> + Sync,
{
    let prefixes = match kind {
        EnumerationKind::Dellac => dellac_prefixes(n, DELLAC_SPLIT_DEPTH),
        EnumerationKind::Symmetric => symmetric_prefixes(n, SYMMETRIC_SPLIT_DEPTH),
    };
    let mut total = 0;
    for batch in prefixes.chunks(BATCH) {
        let parts: Vec<io::Result<(Vec<u8>, u64)>> = batch
            .par_iter()
            .map(|p| {
                let mut buf = Vec::new();
                let mut count = 0u64;
                let mut status = Ok(());
                let mut emit = |rows: &[u8]| {
                    if status.is_ok() {
                        status = line(&mut buf, n, rows);
                        count += 1;
                    }
                };
                match kind {
                    EnumerationKind::Dellac => for_each_dellac_below(n, p, &mut emit),
                    EnumerationKind::Symmetric => for_each_symmetric_below(n, p, &mut emit),
                }
                status.map(|_| (buf, count))
            })
            .collect();
        for part in parts {
            let (buf, count) = part?;
            out.write_all(&buf)?;
            total += count;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configuration_roundtrip() {
        let cfg = DellacConfiguration::new(2, &[1, 2, 1, 2]).unwrap();
        let text = config_to_json(&cfg);
        assert_eq!(text, r#"{"n_cols":2,"rows":[1,2,1,2]}"#);
        assert_eq!(config_from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn collection_wire_form() {
        let sets = vec![vec![3], vec![3, 7], vec![1, 4, 7], vec![1, 4, 6, 7]];
        let c = IndexCollection::new(Family::SpEven, 8, &sets).unwrap();
        let text = collection_to_json(&c);
        assert_eq!(
            text,
            r#"{"family":"sp-even","n_ambient":8,"sets":[[3],[3,7],[1,4,7],[1,4,6,7]]}"#
        );
        assert_eq!(collection_from_json(&text).unwrap(), c);
    }

    #[test]
    fn polynomial_roundtrip_with_big_coefficients() {
        let v = VarietyFamily::new(Family::SOEven, 4).unwrap();
        let p: PoincarePolynomial = "4q^2 + 4q + 2".parse().unwrap();
        let text = polynomial_to_json(v, &p);
        assert_eq!(
            text,
            r#"{"variety":"so-even","n_ambient":4,"coeffs_ascending":[2,4,4]}"#
        );
        assert_eq!(polynomial_from_json(&text).unwrap(), (v, p));
        let huge = r#"{"variety":"a","n_ambient":3,"coeffs_ascending":[123456789012345678901234567890,1]}"#;
        let (_, q) = polynomial_from_json(huge).unwrap();
        assert_eq!(q.coeffs()[0].to_string(), "123456789012345678901234567890");
        assert_eq!(
            polynomial_to_json(VarietyFamily::new(Family::TypeA, 3).unwrap(), &q),
            huge
        );
    }

    #[test]
    fn malformed_input() {
        let e = config_from_json(r#"{"n_cols":2,"rows":[1,2,1]}"#).unwrap_err();
        assert!(e.message.contains("expected 4 rows"), "{e}");
        let e = config_from_json(r#"{"n_cols":2,"rows":[1,2,1,2}"#).unwrap_err();
        assert!(e.column.is_some());
        assert!(config_from_json(r#"{"n_cols":2,"rows":[1,2,1,2],"x":1}"#).is_err());
        assert!(
            polynomial_from_json(r#"{"variety":"a","n_ambient":2,"coeffs_ascending":[1,-1]}"#)
                .is_err()
        );
        assert!(
            polynomial_from_json(r#"{"variety":"a","n_ambient":2,"coeffs_ascending":[1,0]}"#)
                .is_err()
        );
        assert!(
            collection_from_json(r#"{"family":"sp-even","n_ambient":3,"sets":[[1]]}"#).is_err()
        );
    }

    #[test]
    fn enumeration_output() {
        let mut out = Vec::new();
        let count = write_enumeration(&mut out, EnumerationKind::Dellac, 3, |b, n, r| {
            write_config_line(b, n, r)
        })
        .unwrap();
        assert_eq!(count, 7);
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text.lines().next(),
            Some(r#"{"n_cols":3,"rows":[1,1,2,2,3,3]}"#)
        );
        let parsed: Vec<_> = read_configurations(text.as_bytes())
            .map(Result::unwrap)
            .collect();
        assert_eq!(parsed, crate::config::enumerate_dellac(3).unwrap());

        let mut out = Vec::new();
        let count = write_enumeration(&mut out, EnumerationKind::Symmetric, 4, |b, n, r| {
            write_config_line(b, n, r)
        })
        .unwrap();
        assert_eq!(count, 10);
        assert_eq!(out.iter().filter(|&&c| c == b'\n').count(), 10);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let input = "{\"n_cols\":1,\"rows\":[1,1]}\n\n{\"n_cols\":1,\"rows\":[1]}\n";
        let got: Vec<_> = read_configurations(input.as_bytes()).collect();
        assert_eq!(got.len(), 2);
        assert!(got[0].is_ok());
        let e = got[1].as_ref().unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.to_string().starts_with("line 3: "));
    }
}
