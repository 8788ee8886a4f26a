//! Exact arithmetic kernel: rationals, Gaussian rationals, sparse
//! multivariate polynomials, rational functions, truncated Laurent series,
//! determinants and real root isolation.

mod field;
mod gaussian;
mod matrix;
mod poly;
mod ratfunc;
mod rational;
pub mod roots;
mod series;
mod univariate;

pub use field::{det_small, inverse_small, mat_mul, Scalar};
pub use gaussian::GaussianRational;
pub use matrix::det_fraction_free;
pub use poly::MultiPolynomial;
pub use ratfunc::RationalFunction;
pub use rational::{binomial, factorial, factorial_int, falling, ParseRationalError, Rational};
pub use roots::{isolate_real_roots, Domain, IsolatedRoot, RealRoot};
pub use series::{LaurentSeries, EXACT};
pub use univariate::UniPoly;
