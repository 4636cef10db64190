//! Numerical and symbolic toolkit for mollified second moments of the
//! Riemann zeta function.
//!
//! The crate builds, end to end, the machinery needed to evaluate the
//! Levinson lower bound `kappa` for the proportion of nontrivial zeros on
//! the critical line when zeta is mollified by generalized von Mangoldt
//! convolutions:
//!
//! * [`sieve`] — arithmetic function tables and Dirichlet convolutions,
//! * [`combin`] — partitions, compositions and exponential Bell polynomials,
//! * [`mollifier`] — mollifier coefficient tables and partial-sum diagnostics,
//! * [`series`] — the exact multivariate residue engine for the moment
//!   integrand,
//! * [`euler`] — the arithmetical Euler-product factor and its derivative
//!   catalog,
//! * [`main_terms`] — contour-case classification, Euler–Maclaurin sums and
//!   assembly of the numeric main term,
//! * [`optimizer`] — derivative-free maximization of `kappa` over polynomial
//!   coefficients.

pub mod bidual;
pub mod combin;
pub mod error;
pub mod euler;
pub mod main_terms;
pub mod mollifier;
pub mod optimizer;
pub mod poly;
pub mod primes;
pub mod quad;
pub mod series;
pub mod sieve;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
