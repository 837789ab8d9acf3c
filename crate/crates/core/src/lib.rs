//! Nearly holomorphic vector-valued Siegel modular forms of degree 1 and 2:
//! evaluation from truncated Fourier expansions, the slash action of
//! `Sp_2n(R)`, reduction to a fundamental domain, and empirical
//! certification of the eigenvalue growth bound
//!
//! ```text
//! ||rho(Y^{1/2}) F(Z)|| <= C_F prod_i (mu_i(Y)^{lambda_1/2} + mu_i(Y)^{-lambda_1/2})
//! ```
//!
//! together with its trace/determinant form and the moderate growth of the
//! lifted function on the group.

// Negated comparisons below deliberately treat NaN as a failed check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cli;
pub mod error;
pub mod formfile;
pub mod forms;
pub mod growth;
pub mod linalg;
pub mod rep;
pub mod symplectic;

pub use error::{Error, Result};
pub use forms::{phi, slash, FormPackage, FourierExpansion, VectorForm};
pub use linalg::{MultiIndex, SymMatrix};
pub use rep::{HighestWeight, Rep, RepVector};
pub use symplectic::{SiegelPoint, SymplecticMatrix};
