//! Dellac configurations and the cell decompositions of degenerate flag
//! varieties of types A, symplectic and orthogonal.
//!
//! A Dellac configuration of size `N` places `2N` points in an `N x 2N`
//! tableau, one per row and two per column, with the point of column `j`
//! in rows `j..=N+j`. Inversion statistics on these configurations and on
//! the centrally symmetric ones give the Poincaré polynomials; the [`flag`]
//! module computes the same polynomials from cell dimensions of index
//! collections, and [`verify`] checks that the two routes agree.
//!
//! ```
//! use dellac::{poincare_polynomial, Family, Method, VarietyFamily};
//!
//! let v = VarietyFamily::new(Family::SpEven, 4).unwrap();
//! let p = poincare_polynomial(v, Method::Both).unwrap();
//! assert_eq!(p.to_string(), "q^4 + 3q^3 + 3q^2 + 2q + 1");
//! ```

pub mod config;
pub mod flag;
pub mod poincare;
pub mod poly;
pub mod search;
pub mod verify;
pub mod wire;

pub use config::{
    classify, enumerate_dellac, enumerate_symmetric, inv_prime, inv_tilde, inversions,
    validate_rows, ConfigError, DellacConfiguration, Inversion, InversionClassification, Point,
    Violation, MAX_COLUMNS, MAX_MATERIALIZED_COLUMNS,
};
pub use flag::{
    dim_orthogonal, dim_sp_even, dim_sp_even_via_correction, dim_sp_odd, dim_type_a,
    enumerate_collections, from_dellac, initiating_elements, isotropy_correction, ordering_less,
    s_statistic, symplectic_trace, to_dellac, ColumnOrdering, DimensionTrace, Family, FlagError,
    IndexCollection,
};
pub use poincare::{
    euler_characteristic, expected_dimension, poincare_polynomial, poincare_report,
    reference_polynomial, reference_sequence, Method, PoincareError, PoincareReport, VarietyFamily,
};
pub use poly::{is_unimodal, Histogram, PoincarePolynomial, Polynomial, SmallPolynomial};
pub use verify::{run_verification, VerificationReport, VerifyBounds};

/// Coefficients of [`PoincarePolynomial`].
pub type Coefficient = num_bigint::BigUint;
