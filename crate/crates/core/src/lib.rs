//! Fast-consensus controller design for discrete-time high-order multi-agent
//! systems on undirected graphs.
//!
//! Every agent is an `n`-th order sampled integrator chain
//! `x(k+1) = A x(k) + B u(k)` with sampling period `tau`, driven by the
//! diffusive protocol `u_i = K Σ_j a_ij (x_j − x_i)`. The crate covers:
//!
//! * [`graph`] and [`spectrum`]: weighted graphs, Laplacians and a Jacobi
//!   eigensolver producing the distinct nonzero Laplacian eigenvalues.
//! * [`dynamics`]: single-agent matrices, closed-loop blocks `A − λBK`,
//!   closed-form powers of `A` and one network step.
//! * [`stability`]: characteristic polynomials, Durand–Kerner roots,
//!   Routh–Hurwitz classification and the disk-to-half-plane transform.
//! * [`rate`]: convergence rate, its lower bound, closed-form optimal gains
//!   and the finite-difference gradient-descent optimizer.
//! * [`finite_time`]: deadbeat gain schedules reaching exact consensus after
//!   `n · l̄` steps, and the closed-form consensus state.
//! * [`sim`]: trajectory simulation and consensus-error series.
//! * [`precise`]: double-double deadbeat runs and a multiprecision check
//!   that schedule products vanish.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod binomial;
pub mod dynamics;
pub mod error;
pub mod finite_time;
pub mod graph;
pub mod matrix;
pub mod precise;
pub mod rate;
pub mod rng;
pub mod sim;
pub mod spectrum;
pub mod stability;

pub use dynamics::{GainVector, SystemConfig};
pub use error::{Error, Result};
pub use graph::Graph;
pub use matrix::Matrix;
pub use spectrum::Spectrum;
