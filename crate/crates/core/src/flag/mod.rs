//! Index collections labeling coordinate flags, the column orderings, and the
//! cell-dimension algorithms of the five degenerate flag families.

mod bijection;
mod collection;
mod dimension;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, MAX_COLUMNS};

pub use bijection::{dim_orthogonal, from_dellac, to_dellac};
pub use collection::{
    enumerate_collections, fold_collections, for_each_collection, initiating_elements,
    IndexCollection,
};
pub use dimension::{
    dim_sp_even, dim_sp_even_via_correction, dim_sp_odd, dim_type_a, isotropy_correction,
    symplectic_trace, ComplementaryRequest, DimensionTrace, InitiatingTerm, TraceStep,
};

/// The five families of degenerate flag varieties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "a")]
    TypeA,
    #[serde(rename = "sp-even")]
    SpEven,
    #[serde(rename = "sp-odd")]
    SpOdd,
    #[serde(rename = "so-even")]
    SOEven,
    #[serde(rename = "so-odd")]
    SOOdd,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::TypeA,
        Family::SpEven,
        Family::SpOdd,
        Family::SOEven,
        Family::SOOdd,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::TypeA => "a",
            Family::SpEven => "sp-even",
            Family::SpOdd => "sp-odd",
            Family::SOEven => "so-even",
            Family::SOOdd => "so-odd",
        }
    }

    pub fn is_symplectic(self) -> bool {
        matches!(self, Family::SpEven | Family::SpOdd)
    }

    pub fn is_orthogonal(self) -> bool {
        matches!(self, Family::SOEven | Family::SOOdd)
    }

    /// Checks that `ambient` is a legal ground-set size for this family.
    pub fn check_ambient(self, ambient: usize) -> Result<(), FlagError> {
        if ambient == 0 || ambient > MAX_COLUMNS {
            return Err(FlagError::AmbientRange(ambient));
        }
        let ok = match self {
            Family::TypeA => true,
            Family::SpEven | Family::SOEven => ambient.is_multiple_of(2),
            Family::SpOdd | Family::SOOdd => ambient % 2 == 1,
        };
        if ok {
            Ok(())
        } else {
            Err(FlagError::Parity {
                family: self,
                ambient,
            })
        }
    }

    /// Number of subsets in a collection: `N-1` in type A, `floor(N/2)` otherwise.
    pub fn set_count(self, ambient: usize) -> usize {
        match self {
            Family::TypeA => ambient - 1,
            _ => ambient / 2,
        }
    }

    /// The symplectic or orthogonal family sharing the parity of `ambient`.
    pub fn for_parity(symplectic: bool, ambient: usize) -> Family {
        match (symplectic, ambient.is_multiple_of(2)) {
            (true, true) => Family::SpEven,
            (true, false) => Family::SpOdd,
            (false, true) => Family::SOEven,
            (false, false) => Family::SOOdd,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = FlagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| FlagError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlagError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("ground set size must be between 1 and {MAX_COLUMNS}, got {0}")]
    AmbientRange(usize),
    #[error("family {family} does not exist for ground set size {ambient}")]
    Parity { family: Family, ambient: usize },
    #[error("expected {expected} subsets, got {found}")]
    SetCount { expected: usize, found: usize },
    #[error("I_{k} must have {k} elements, has {found}")]
    SetSize { k: usize, found: usize },
    #[error("I_{k} contains {element}, outside 1..={ambient}")]
    ElementOutOfRange {
        k: usize,
        element: usize,
        ambient: usize,
    },
    #[error("I_{k} lists {element} twice")]
    DuplicateElement { k: usize, element: usize },
    #[error("I_{k} is not contained in I_{next} together with {next}", next = .k + 1)]
    NotNested { k: usize },
    #[error("top subset contains the paired elements {a} and {b}")]
    NotIsotropic { a: usize, b: usize },
    #[error("ordering arguments out of range: a={a}, b={b}, k={k}, N={ambient}")]
    OrderingRange {
        a: usize,
        b: usize,
        k: usize,
        ambient: usize,
    },
    #[error("degree {k} out of range 1..={max}")]
    DegreeRange { k: usize, max: usize },
    #[error("s({a},{b},{k}) is undefined: {a}+{b} = {sum}", sum = .a + .b)]
    ComplementaryPair { a: usize, b: usize, k: usize },
    #[error("{operation} does not apply to family {family}")]
    WrongFamily {
        family: Family,
        operation: &'static str,
    },
    #[error("configuration is not the image of an index collection")]
    NotInImage,
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Position of `x` in the order `k+1 <_k k+2 <_k ... <_k N <_k 1 <_k ... <_k k`,
/// starting from 0. Arguments are assumed in range.
#[inline]
pub(crate) fn position(x: usize, k: usize, ambient: usize) -> usize {
    (x + ambient - k - 1) % ambient
}

#[inline]
pub(crate) fn less(a: usize, b: usize, k: usize, ambient: usize) -> bool {
    position(a, k, ambient) < position(b, k, ambient)
}

/// The `k`-th cyclic order on `{1..N}`: `k+1` is the smallest element, `k`
/// the largest.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColumnOrdering {
    k: usize,
    ambient: usize,
}

impl ColumnOrdering {
    pub fn new(k: usize, ambient: usize) -> Result<Self, FlagError> {
        if !(2..=MAX_COLUMNS).contains(&ambient) || k == 0 || k >= ambient {
            return Err(FlagError::OrderingRange {
                a: 0,
                b: 0,
                k,
                ambient,
            });
        }
        Ok(ColumnOrdering { k, ambient })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn position(&self, x: usize) -> usize {
        position(x, self.k, self.ambient)
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        less(a, b, self.k, self.ambient)
    }

    /// Elements from smallest to largest.
    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.ambient).map(move |p| (self.k + p) % self.ambient + 1)
    }
}

/// Whether `a <_k b` on the ground set `{1..N}`.
pub fn ordering_less(a: usize, b: usize, k: usize, ambient: usize) -> Result<bool, FlagError> {
    let in_range = |x: usize| (1..=ambient).contains(&x);
    if !in_range(a) || !in_range(b) || k == 0 || k >= ambient || ambient > MAX_COLUMNS {
        return Err(FlagError::OrderingRange { a, b, k, ambient });
    }
    Ok(less(a, b, k, ambient))
}

/// The 0/1 correction for ground set `{1..N}`: 1 when both `a` and `b` lie in
/// the top `2k` positions of the `k`-th order and the partner `N+1-b` of `b`
/// sits below `a`. `None` when `a` and `b` are partners themselves.
pub(crate) fn s_value(a: usize, b: usize, k: usize, ambient: usize) -> Option<u8> {
    if a + b == ambient + 1 {
        return None;
    }
    let threshold = position(ambient + 1 - k, k, ambient);
    let top = |x: usize| position(x, k, ambient) >= threshold;
    Some(u8::from(
        top(a) && top(b) && less(ambient + 1 - b, a, k, ambient),
    ))
}

/// The correction function `s(a,b,k)` on `{1..2n}`.
pub fn s_statistic(a: usize, b: usize, k: usize, n: usize) -> Result<u8, FlagError> {
    let ambient = 2 * n;
    let in_range = |x: usize| (1..=ambient).contains(&x);
    if n == 0 || !in_range(a) || !in_range(b) || k == 0 || k > n || ambient > MAX_COLUMNS {
        return Err(FlagError::OrderingRange { a, b, k, ambient });
    }
    s_value(a, b, k, ambient).ok_or(FlagError::ComplementaryPair { a, b, k })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_examples() {
        assert!(ordering_less(2, 1, 1, 3).unwrap());
        assert!(ordering_less(3, 7, 2, 8).unwrap());
        for ambient in 2..=9 {
            for k in 1..ambient {
                assert!(ordering_less(k + 1, k, k, ambient).unwrap());
                let ord = ColumnOrdering::new(k, ambient).unwrap();
                let elems: Vec<usize> = ord.elements().collect();
                assert_eq!(elems[0], k + 1);
                assert_eq!(*elems.last().unwrap(), k);
                assert!(elems.windows(2).all(|w| ord.less(w[0], w[1])));
            }
        }
    }

    #[test]
    fn ordering_range_errors() {
        assert!(ordering_less(0, 1, 1, 3).is_err());
        assert!(ordering_less(1, 4, 1, 3).is_err());
        assert!(ordering_less(1, 2, 3, 3).is_err());
        assert!(ordering_less(1, 2, 0, 3).is_err());
    }

    #[test]
    fn s_worked_values() {
        assert_eq!(s_statistic(7, 3, 2, 4), Ok(0));
        assert_eq!(s_statistic(4, 1, 4, 4), Ok(1));
        assert_eq!(s_statistic(4, 7, 4, 4), Ok(1));
        assert_eq!(s_statistic(4, 6, 4, 4), Ok(1));
        assert_eq!(s_statistic(1, 4, 3, 4), Ok(0));
        assert_eq!(s_statistic(1, 7, 3, 4), Ok(0));
    }

    #[test]
    fn s_rejects_partners() {
        assert_eq!(
            s_statistic(3, 6, 2, 4),
            Err(FlagError::ComplementaryPair { a: 3, b: 6, k: 2 })
        );
        assert!(s_statistic(1, 2, 3, 2).is_err());
    }

    #[test]
    fn s_is_one_only_on_the_top_block() {
        // s = 1 forces both arguments into {k,...,1,2n,...,2n-k+1}
        for n in 1..=4 {
            let ambient = 2 * n;
            for k in 1..=n {
                let block: Vec<usize> = (1..=k).chain(ambient - k + 1..=ambient).collect();
                for a in 1..=ambient {
                    for b in 1..=ambient {
                        if let Ok(1) = s_statistic(a, b, k, n) {
                            assert!(block.contains(&a) && block.contains(&b));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn family_tags_roundtrip() {
        for f in Family::ALL {
            assert_eq!(f.tag().parse::<Family>().unwrap(), f);
        }
        assert!("b".parse::<Family>().is_err());
        assert!(Family::SpEven.check_ambient(3).is_err());
        assert!(Family::SOOdd.check_ambient(1).is_ok());
        assert!(Family::TypeA.check_ambient(0).is_err());
    }
}
