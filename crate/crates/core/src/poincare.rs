//! Poincaré polynomials of the five families, by configuration statistics
//! and by cell dimensions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{classify_rows, inv_rows};
use crate::flag::{
    dim_orthogonal, dim_sp_even, dim_sp_odd, dim_type_a, fold_collections, Family, FlagError,
    IndexCollection,
};
use crate::poly::{Histogram, PoincarePolynomial};
use crate::search::{fold_dellac, fold_symmetric};

/// Largest `N` accepted for the type A family.
pub const MAX_TYPE_A_AMBIENT: usize = 9;
/// Largest `N` accepted for the symplectic and orthogonal families.
pub const MAX_SYMMETRIC_AMBIENT: usize = 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PoincareError {
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error("{family} with N = {ambient} is beyond the supported range (N <= {limit})")]
    TooLarge {
        family: Family,
        ambient: usize,
        limit: usize,
    },
    #[error("unknown method {0:?}, expected statistic, cells or both")]
    UnknownMethod(String),
    #[error("unknown sequence {0:?}, expected genocchi, r or l")]
    UnknownSequence(String),
}

/// A family together with its ground set size `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarietyFamily {
    family: Family,
    ambient: usize,
}

impl VarietyFamily {
    pub fn new(family: Family, ambient: usize) -> Result<Self, PoincareError> {
        family.check_ambient(ambient)?;
        Ok(VarietyFamily { family, ambient })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// `floor(N/2)`.
    pub fn n(&self) -> usize {
        self.ambient / 2
    }

    pub fn expected_dimension(&self) -> usize {
        expected_dimension(self.family, self.ambient)
    }

    fn check_size(&self) -> Result<(), PoincareError> {
        let limit = match self.family {
            Family::TypeA => MAX_TYPE_A_AMBIENT,
            _ => MAX_SYMMETRIC_AMBIENT,
        };
        if self.ambient > limit {
            return Err(PoincareError::TooLarge {
                family: self.family,
                ambient: self.ambient,
                limit,
            });
        }
        Ok(())
    }
}

impl fmt::Display for VarietyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.family, self.ambient)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Statistic,
    Cells,
    Both,
}

impl FromStr for Method {
    type Err = PoincareError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "statistic" => Ok(Method::Statistic),
            "cells" => Ok(Method::Cells),
            "both" => Ok(Method::Both),
            _ => Err(PoincareError::UnknownMethod(s.to_string())),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Statistic => "statistic",
            Method::Cells => "cells",
            Method::Both => "both",
        })
    }
}

/// `inv` over `DC_N` in type A, `inv~` over `SDC_N` for the symplectic
/// families and `inv'` over `SDC_N` for the orthogonal ones.
pub fn statistic_histogram(variety: VarietyFamily) -> Result<Histogram, PoincareError> {
    variety.check_size()?;
    let n = variety.ambient;
    let merge = Histogram::merge;
    let h = match variety.family {
        Family::TypeA => fold_dellac(
            n,
            Histogram::new,
            |h, rows| h.add(inv_rows(rows) as u32),
            merge,
        ),
        Family::SpEven | Family::SpOdd => fold_symmetric(
            n,
            Histogram::new,
            |h, rows| {
                let c = classify_rows(n, rows);
                h.add((c.self_symmetric + c.paired / 2) as u32)
            },
            merge,
        ),
        Family::SOEven | Family::SOOdd => fold_symmetric(
            n,
            Histogram::new,
            |h, rows| h.add((classify_rows(n, rows).paired / 2) as u32),
            merge,
        ),
    };
    Ok(h)
}

/// Cell dimension of one collection by the dimension algorithm of its family.
pub fn cell_dimension(collection: &IndexCollection) -> Result<u32, FlagError> {
    match collection.family() {
        Family::TypeA => {
            let degrees: Vec<usize> = (1..=collection.len()).collect();
            dim_type_a(collection, &degrees)
        }
        Family::SpEven => Ok(dim_sp_even(collection)?.dimension()),
        Family::SpOdd => dim_sp_odd(collection),
        Family::SOEven | Family::SOOdd => dim_orthogonal(collection),
    }
}

/// Cell dimensions over every index collection of the family.
pub fn cells_histogram(variety: VarietyFamily) -> Result<Histogram, PoincareError> {
    variety.check_size()?;
    let h = fold_collections(
        variety.family,
        variety.ambient,
        || Ok(Histogram::new()),
        |acc: &mut Result<Histogram, FlagError>, c| {
            if let Ok(h) = acc {
                match cell_dimension(c) {
                    Ok(d) => h.add(d),
                    Err(e) => *acc = Err(e),
                }
            }
        },
        |a, b| match (a, b) {
            (Ok(a), Ok(b)) => Ok(a.merge(b)),
            (Err(e), _) | (_, Err(e)) => Err(e),
        },
    )??;
    Ok(h)
}

/// The Poincaré polynomial by one route. [`Method::Both`] computes both and
/// fails with an inconsistency if they differ.
pub fn poincare_polynomial(
    variety: VarietyFamily,
    method: Method,
) -> Result<PoincarePolynomial, PoincareError> {
    match method {
        Method::Statistic => Ok(statistic_histogram(variety)?.to_polynomial()),
        Method::Cells => Ok(cells_histogram(variety)?.to_polynomial()),
        Method::Both => {
            let report = poincare_report(variety)?;
            if report.agree() {
                Ok(report.statistic)
            } else {
                Err(FlagError::Inconsistency(format!(
                    "{variety}: statistic gives {} but cells give {}",
                    report.statistic, report.cells
                ))
                .into())
            }
        }
    }
}

/// Both routes side by side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareReport {
    pub variety: VarietyFamily,
    pub statistic: PoincarePolynomial,
    pub cells: PoincarePolynomial,
}

impl PoincareReport {
    pub fn agree(&self) -> bool {
        self.statistic == self.cells
    }
}

pub fn poincare_report(variety: VarietyFamily) -> Result<PoincareReport, PoincareError> {
    Ok(PoincareReport {
        variety,
        statistic: poincare_polynomial(variety, Method::Statistic)?,
        cells: poincare_polynomial(variety, Method::Cells)?,
    })
}

/// `P(1)`.
pub fn euler_characteristic(variety: VarietyFamily) -> Result<BigUint, PoincareError> {
    Ok(poincare_polynomial(variety, Method::Statistic)?.sum())
}

/// `N(N-1)/2` in type A, `n^2` for `Sp_{2n}`, `n(n+1)` for `Sp_{2n+1}` and
/// `ceil((N-1)/2) * floor((N-1)/2)` for the orthogonal families.
pub fn expected_dimension(family: Family, ambient: usize) -> usize {
    let n = ambient / 2;
    match family {
        Family::TypeA => ambient * ambient.saturating_sub(1) / 2,
        Family::SpEven => n * n,
        Family::SpOdd => n * (n + 1),
        Family::SOEven | Family::SOOdd => {
            let m = ambient.saturating_sub(1);
            m.div_ceil(2) * (m / 2)
        }
    }
}

const GENOCCHI: [u64; 5] = [1, 2, 7, 38, 295];
const R_SEQUENCE: [u64; 5] = [1, 2, 10, 98, 1594];
const L_SEQUENCE: [u64; 5] = [1, 3, 21, 267, 5349];

/// Published prefixes: normalized median Genocchi numbers (`|DC_N|`,
/// `N = 1..5`), `r` (`|SDC_{2n}|`) and `l` (`|SDC_{2n+1}|`), both for
/// `n = 0..4`.
pub fn reference_sequence(name: &str) -> Result<&'static [u64], PoincareError> {
    match name {
        "genocchi" | "genocchi_normalized" | "genocchi-normalized" => Ok(&GENOCCHI),
        "r" => Ok(&R_SEQUENCE),
        "l" => Ok(&L_SEQUENCE),
        _ => Err(PoincareError::UnknownSequence(name.to_string())),
    }
}

const REFERENCE_POLYNOMIALS: [(Family, usize, &str); 20] = [
    (Family::TypeA, 1, "1"),
    (Family::TypeA, 2, "q + 1"),
    (Family::TypeA, 3, "q^3 + 3q^2 + 2q + 1"),
    (Family::TypeA, 4, "q^6 + 6q^5 + 10q^4 + 10q^3 + 7q^2 + 3q + 1"),
    (Family::SpOdd, 1, "1"),
    (Family::SpOdd, 3, "q^2 + q + 1"),
    (Family::SpOdd, 5, "q^6 + 3q^5 + 5q^4 + 5q^3 + 4q^2 + 2q + 1"),
    (
        Family::SpOdd,
        7,
        "q^12 + 6q^11 + 16q^10 + 29q^9 + 40q^8 + 45q^7 + 43q^6 + 35q^5 + 25q^4 + 15q^3 + 8q^2 + 3q + 1",
    ),
    (Family::SpEven, 2, "q + 1"),
    (Family::SpEven, 4, "q^4 + 3q^3 + 3q^2 + 2q + 1"),
    (
        Family::SpEven,
        6,
        "q^9 + 6q^8 + 13q^7 + 18q^6 + 20q^5 + 17q^4 + 12q^3 + 7q^2 + 3q + 1",
    ),
    (
        Family::SpEven,
        8,
        "q^16 + 10q^15 + 36q^14 + 79q^13 + 134q^12 + 186q^11 + 220q^10 + 229q^9 + 211q^8 + 175q^7 + 130q^6 + 87q^5 + 52q^4 + 27q^3 + 12q^2 + 4q + 1",
    ),
    (Family::SOOdd, 1, "1"),
    (Family::SOOdd, 3, "2q + 1"),
    (Family::SOOdd, 5, "4q^4 + 7q^3 + 6q^2 + 3q + 1"),
    (
        Family::SOOdd,
        7,
        "8q^9 + 27q^8 + 47q^7 + 56q^6 + 52q^5 + 38q^4 + 23q^3 + 11q^2 + 4q + 1",
    ),
    (Family::SOEven, 2, "2"),
    (Family::SOEven, 4, "4q^2 + 4q + 2"),
    (
        Family::SOEven,
        6,
        "8q^6 + 20q^5 + 26q^4 + 22q^3 + 14q^2 + 6q + 2",
    ),
    (
        Family::SOEven,
        8,
        "16q^12 + 68q^11 + 150q^10 + 230q^9 + 276q^8 + 272q^7 + 228q^6 + 164q^5 + 102q^4 + 54q^3 + 24q^2 + 8q + 2",
    ),
];

/// Every tabulated polynomial as `(family, N, text)`.
pub fn reference_table() -> impl Iterator<Item = (Family, usize, &'static str)> {
    REFERENCE_POLYNOMIALS.into_iter()
}

/// The tabulated polynomial for `(family, N)`, if there is one.
pub fn reference_polynomial(family: Family, ambient: usize) -> Option<PoincarePolynomial> {
    reference_table()
        .find(|&(f, n, _)| f == family && n == ambient)
        .map(|(_, _, text)| text.parse().expect("tabulated polynomial parses"))
}
