//! Numerical and arithmetic toolkit for the least Ramanujan prime of a Maass form.
//!
//! The crate covers five areas:
//!
//! * [`hecke`]: local algebra at an unramified prime (Satake parameters, Hecke
//!   eigenvalues at prime powers, adjoint and symmetric-power lift coefficients).
//! * [`dde`]: a method-of-steps solver for `y'(u) = a(u) y(u) + b(u) y(u-1)`, the
//!   sieve density `σ(u)`, the Buchstab function `ω(u)`, the real dilogarithm and
//!   the smallest zero of `σ`.
//! * [`sieve`]: prime tables and exact/asymptotic counts of integers free of small
//!   prime factors.
//! * [`multfunc`]: dense multiplicative-function arithmetic (Dirichlet convolution,
//!   inverses, weighted partial sums, the constant `c(N)`).
//! * [`dataset`]: Hecke-eigenvalue datasets, Sato–Tate synthesis and the density
//!   statistics behind the 9/10 and 34/35 bounds.

pub mod dataset;
pub mod dde;
pub mod error;
pub mod hecke;
pub mod multfunc;
pub mod numfmt;
pub mod sieve;
pub mod special;
pub mod sum;

pub use error::{Error, Result};
