//! First-order stochastic optimizers built around gradient-difference
//! friction, with comparison baselines and a deterministic benchmark
//! harness.
//!
//! The crate has three layers:
//!
//! - [`optim`]: elementwise step engines for sgd, sgdm, adagrad, adadelta,
//!   rmsprop, adam, amsgrad and diffgrad, plus the friction-coefficient
//!   family that modulates the diffgrad step.
//! - [`objective`]: the 1-D piecewise benchmark functions, convex
//!   quadratics, softmax cross-entropy with quadratic regularization, a
//!   two-layer ReLU MLP with exact backpropagation, and a finite-difference
//!   gradient oracle.
//! - [`harness`]: seeded experiment runners (synthetic benchmarks, toy
//!   training, online regret with its analytic bound) and the CSV/SVG
//!   serializers for their traces.
//!
//! The crate is `no_std` (with `alloc`); all transcendental math goes
//! through `libm`, and all randomness through the splittable
//! [`rng::SplitMix64`] generator, so results are reproducible for a given
//! seed.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod harness;
pub mod objective;
pub mod optim;
pub mod rng;

pub use error::{Error, Result};
