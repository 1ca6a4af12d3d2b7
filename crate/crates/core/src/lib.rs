//! Extended multiple zeta values over arbitrary nonzero sequences, their
//! complementary sequences and zeta functions, closed forms for the
//! built-in families, and a harness that checks the structural identities
//! numerically.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`.

// `!(x > y)` is used throughout to reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closedforms;
pub mod complementary;
pub mod error;
pub mod identities;
pub mod scalar;
pub mod sequences;
pub mod specialfn;
pub mod summation;

pub use complementary::{
    complementary_term, complementary_zeta, higher_complementary_term, higher_complementary_zeta,
};
pub use error::{Error, Result};
pub use identities::{default_suite, run_suite, IdentityReport, SuiteEntry};
pub use scalar::Scalar;
pub use sequences::{make_sequence, Length};
pub use summation::{extended_mzv, extended_star_mzv, extended_zeta};

pub type Family = sequences::Family<f64>;
pub type SequenceSpec = sequences::SequenceSpec<f64>;
pub type Sequence = sequences::SequenceSource<f64>;
pub type Composition = summation::Composition<f64>;
pub type SummationConfig = summation::SummationConfig<f64>;
pub type EvalResult = summation::EvalResult<f64>;
pub type ComplementaryTermResult = complementary::ComplementaryTermResult<f64>;
