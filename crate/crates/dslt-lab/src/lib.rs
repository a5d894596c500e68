//! Numerical laboratory for the first-order derivative of self-intersection
//! local time (DSLT) of d-dimensional fractional Brownian motion.
//!
//! The estimator under study is the heat-kernel regularization
//!
//! ```text
//! alpha_eps(t) = -∫_0^t ∫_0^s  p_eps^(1)(B_s - B_r) dr ds,
//! ```
//!
//! where `p_eps` is the centered Gaussian density with covariance `eps·I` and
//! `p_eps^(1)` its partial derivative in the first coordinate. As `eps → 0`
//! the estimator either converges in L² (`H < 3/(2(1+d))`) or satisfies a
//! central limit theorem under a regime-dependent normalization. This crate
//! provides:
//!
//! - exact synthesis of fBm sample paths (circulant embedding with a Cholesky
//!   fallback) with reproducible, splittable random streams ([`fbm`]);
//! - the analytic primitives: heat kernel, increment covariance triples on
//!   the three interleaving cases, and the `G` covariance function
//!   ([`kernel`]);
//! - singularity-aware deterministic quadrature on intervals, the 2-simplex
//!   and the positive octant ([`quad`]);
//! - every limiting constant: the supercritical closed form and its integral
//!   form, the subcritical and critical chaos constants, per-chaos variances
//!   and the chaos combinatorics behind them ([`constants`], [`chaos`]);
//! - the discretized estimator itself ([`estimator`]);
//! - a Monte Carlo harness verifying the three central limit theorems and
//!   the L² existence threshold at desk scale ([`experiments`]);
//! - a CLI with reproducible run manifests ([`config`], [`manifest`]).

pub mod chaos;
pub mod config;
pub mod constants;
pub mod error;
pub mod estimator;
pub mod experiments;
pub mod fbm;
pub mod kernel;
pub mod manifest;
pub mod quad;
pub mod rng;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
