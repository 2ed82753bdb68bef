//! Computations around the leftmost zeros of partial sums of the Riemann
//! zeta function `zeta_n(s) = sum_{m <= n} m^{-s}`.
//!
//! * [`dirichlet`]: signed Dirichlet polynomials in MPFR arithmetic with
//!   rigorous error bounds and certified signs.
//! * [`realroots`]: certified leftmost real zeros `rho_{n,k}` of the
//!   auxiliary polynomials `zeta_{n,k}`.
//! * [`complexzeros`]: argument-principle zero isolation and bounded scans for
//!   the infimum of real parts of the zeros of `zeta_n`.
//! * [`chi`]: completely multiplicative `+-1` functions with a prescribed sign
//!   pattern on a window of consecutive integers.
//! * [`arith`], [`dioph`]: squarefree kernels, smooth windows and the
//!   quadratic systems behind them.

pub mod arith;
pub mod chi;
pub mod complexzeros;
pub mod dioph;
pub mod dirichlet;
pub mod error;
pub mod mp;
pub mod realroots;

pub use error::{Error, Result};
