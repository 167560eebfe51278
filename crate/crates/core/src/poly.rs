//! Polynomials in one variable `q` with nonnegative integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

/// A polynomial stored by ascending degree with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

pub type PoincarePolynomial = Polynomial<BigUint>;
pub type SmallPolynomial = Polynomial<u64>;

impl<T: Zero> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coefficient(&self, degree: usize) -> Option<&T> {
        self.coeffs.get(degree)
    }

    pub fn leading_coefficient(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn constant_coefficient(&self) -> Option<&T> {
        self.coeffs.first()
    }
}

impl<T> Polynomial<T>
where
    T: Zero + Clone + Mul<Output = T> + Add<Output = T>,
{
    pub fn evaluate(&self, q: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * q.clone() + c.clone())
    }
}

impl<T: Zero + One + Clone + Mul<Output = T> + Add<Output = T>> Polynomial<T> {
    /// Value at `q = 1`.
    pub fn sum(&self) -> T {
        self.evaluate(&T::one())
    }
}

impl<T: PartialOrd> Polynomial<T> {
    /// Coefficients weakly rise, then weakly fall.
    pub fn is_unimodal(&self) -> bool {
        is_unimodal(&self.coeffs)
    }
}

/// Whether a sequence weakly increases and then weakly decreases.
pub fn is_unimodal<T: PartialOrd>(seq: &[T]) -> bool {
    let mut i = 1;
    while i < seq.len() && seq[i - 1] <= seq[i] {
        i += 1;
    }
    while i < seq.len() && seq[i - 1] >= seq[i] {
        i += 1;
    }
    i >= seq.len()
}

impl<T: Zero + From<u64>> Polynomial<T> {
    /// Polynomial whose coefficient in degree `d` is `counts[d]`.
    pub fn from_counts(counts: &[u64]) -> Self {
        Self::new(counts.iter().map(|&c| T::from(c)).collect())
    }
}

impl<T: Zero + One + PartialEq + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if d == 0 || !c.is_one() {
                write!(f, "{c}")?;
            }
            match d {
                0 => {}
                1 => f.write_str("q")?,
                _ => write!(f, "q^{d}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse polynomial at byte {position}: {message}")]
pub struct PolyParseError {
    pub position: usize,
    pub message: String,
}

fn parse_error(position: usize, message: impl Into<String>) -> PolyParseError {
    PolyParseError {
        position,
        message: message.into(),
    }
}

/// Parses sums of terms `c`, `q`, `cq`, `q^k`, `cq^k`, `c*q^{k}`, in any
/// order and with any spacing.
impl<T> FromStr for Polynomial<T>
where
    T: Zero + Clone + FromStr + AddAssign,
{
    type Err = PolyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let digits = |pos: &mut usize| {
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            start..*pos
        };
        let mut coeffs: Vec<T> = Vec::new();
        let mut expect_term = true;
        loop {
            skip_ws(&mut pos);
            if pos == bytes.len() {
                if expect_term {
                    return Err(parse_error(pos, "expected a term"));
                }
                break;
            }
            if !expect_term {
                if bytes[pos] != b'+' {
                    return Err(parse_error(pos, "expected '+'"));
                }
                pos += 1;
                expect_term = true;
                continue;
            }
            let term_start = pos;
            let span = digits(&mut pos);
            let coefficient = if span.is_empty() {
                None
            } else {
                let c = s[span.clone()]
                    .parse::<T>()
                    .map_err(|_| parse_error(span.start, "bad coefficient"))?;
                Some(c)
            };
            skip_ws(&mut pos);
            if coefficient.is_some() && pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                skip_ws(&mut pos);
            }
            let degree = if pos < bytes.len() && bytes[pos] == b'q' {
                pos += 1;
                skip_ws(&mut pos);
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let braced = pos < bytes.len() && bytes[pos] == b'{';
                    if braced {
                        pos += 1;
                    }
                    let span = digits(&mut pos);
                    if span.is_empty() {
                        return Err(parse_error(pos, "expected an exponent"));
                    }
                    let d = s[span.clone()]
                        .parse::<usize>()
                        .ok()
                        .filter(|&d| d <= 1 << 16)
                        .ok_or_else(|| parse_error(span.start, "exponent too large"))?;
                    if braced {
                        if pos < bytes.len() && bytes[pos] == b'}' {
                            pos += 1;
                        } else {
                            return Err(parse_error(pos, "expected '}'"));
                        }
                    }
                    d
                } else {
                    1
                }
            } else if coefficient.is_some() {
                0
            } else {
                return Err(parse_error(term_start, "expected a coefficient or 'q'"));
            };
            let c = match coefficient {
                Some(c) => c,
                None => "1"
                    .parse::<T>()
                    .map_err(|_| parse_error(term_start, "coefficient type has no 1"))?,
            };
            if coeffs.len() <= degree {
                coeffs.resize(degree + 1, T::zero());
            }
            coeffs[degree] += c;
            expect_term = false;
        }
        Ok(Polynomial::new(coeffs))
    }
}

impl<T: Serialize> Serialize for Polynomial<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

/// Degree to count map; merging is associative and commutative.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Histogram {
    counts: BTreeMap<u32, u64>,
}

impl Histogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: u32) {
        *self.counts.entry(value).or_insert(0) += 1;
    }

    pub fn add_many(&mut self, value: u32, count: u64) {
        if count > 0 {
            *self.counts.entry(value).or_insert(0) += count;
        }
    }

    pub fn merge(mut self, other: Histogram) -> Histogram {
        for (v, c) in other.counts {
            self.add_many(v, c);
        }
        self
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, value: u32) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    /// `(value, count)` pairs in increasing value order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts.iter().map(|(&v, &c)| (v, c))
    }

    /// Counts for the values `0..=max`, with zeros filled in.
    pub fn dense(&self) -> Vec<u64> {
        let len = self
            .counts
            .keys()
            .next_back()
            .map_or(0, |&m| m as usize + 1);
        let mut out = vec![0; len];
        for (&v, &c) in &self.counts {
            out[v as usize] = c;
        }
        out
    }

    pub fn to_polynomial<T: Zero + From<u64>>(&self) -> Polynomial<T> {
        Polynomial::from_counts(&self.dense())
    }
}

impl FromIterator<u32> for Histogram {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut h = Histogram::new();
        for v in iter {
            h.add(v);
        }
        h
    }
}
