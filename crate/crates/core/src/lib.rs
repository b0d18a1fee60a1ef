//! Pathwise hedging along refining partitions.
//!
//! The crate simulates price paths on a fine dyadic grid, measures their
//! p-th variation along coarser nested partitions, prices European claims in
//! the zero-rate Black-Scholes model, and runs discrete delta and
//! delta-gamma hedges whose profit and loss is recorded interval by interval.
//!
//! The building blocks are:
//!
//! - [`paths`]: partitions, path generators (Brownian, fractional Brownian,
//!   exponential and integral transforms) and variation analytics.
//! - [`pricing`]: Black-Scholes quotes and greeks, quadrature for general
//!   payoffs, exact PDE-solution instruments and residual checks.
//! - [`hedging`]: weight solvers, the rebalancing ledger, the Taylor-term
//!   decomposition of a ledger and the Riemann-sum defect bound.
//! - [`asian`]: instruments on the augmented state `(t, I_t, X_t)`.
//! - [`scenario`]: seed-batched convergence experiments and their outputs.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asian;
pub mod error;
pub mod hedging;
pub mod paths;
pub mod pricing;
pub mod rng;
pub mod scenario;
pub mod summation;
pub mod tolerances;

pub use error::{Error, Result};
