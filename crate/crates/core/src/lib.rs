//! Connectivity analytics and Monte Carlo routing simulation for V2V
//! multi-hop forwarding on a straight road, with D2D failover at dead-ends.
//!
//! The crate is organised bottom-up:
//!
//! * [`traffic`]: truncated-normal speeds, Poisson arrivals, spatial rate,
//!   road snapshots and mobility.
//! * [`analytics`]: hop-distance kernel, component-size distribution by
//!   nested-kernel iteration and by z-transform, moments, delay.
//! * [`routing`]: greedy forwarding and the recovery strategy registry.
//! * [`experiments`]: sweeps, aggregation, persistence.
//! * [`cli`]: the `v2vlab` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod quad;
pub mod routing;
pub mod seed;
pub mod traffic;

pub use error::{Error, Result};
