//! Bidiagonal decompositions of generalized Pascal and lattice path
//! matrices, and linear algebra driven by them.

pub mod bd;
pub mod bigfloat;
pub mod dense;
pub mod error;
pub mod experiment;
pub mod family;
pub mod instrument;
pub mod matrix;
pub mod neville;
pub mod oracle;
pub mod par;
pub mod param;
pub mod pascal;
pub mod scalar;
pub mod surd;
pub mod tn;

pub use bd::{BdMatrix, Certificate, Diagnostic, Side};
pub use bigfloat::BigFloat;
pub use error::{Error, Result};
pub use family::{Family, FamilySpec};
pub use matrix::Matrix;
pub use neville::{bd_from_dense, neville_eliminate, NevilleTrace};
pub use par::Execution;
pub use oracle::{OracleResult, Query};
pub use param::ParamExpr;
pub use scalar::{Rational, Real, Refinable, Scalar, ScalarDomain, Sign};
pub use surd::Surd;
pub use tn::{sign_pattern, tn_eigenvalues, tn_inverse, tn_singular_values, tn_solve, AccuracyMode, Outcome, SignPattern};
