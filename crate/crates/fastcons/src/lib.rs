//! File formats, parallel experiment drivers and the command-line front end
//! for [`fastcons_core`].
//!
//! * [`edgelist`]: the text edge-list graph format.
//! * [`export`]: CSV writers for spectra, schedules, trajectories and tables.
//! * [`config`]: flat `key = value` files that pre-fill command-line flags.
//! * [`harness`]: named graph families, rayon-parallel optimizer restarts and
//!   the convergence-rate table.
//! * [`cli`]: the `fastcons` command.

pub mod cli;
pub mod config;
pub mod edgelist;
pub mod export;
pub mod harness;

pub use fastcons_core as core;
