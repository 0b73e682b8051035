//! Downlink system-level simulator for relay-assisted OFDMA cellular networks.
//!
//! A seven-cell clover-leaf network is populated with uniformly dropped
//! users, each user is classified as critical (cell edge) or non-critical by
//! its estimated SNR, and five resource-allocation schemes are compared on
//! identical drops: reuse-1, reuse-3, soft frequency reuse, and the
//! neighbor-set coordinated allocation without and with sector relays.
//!
//! ```no_run
//! use racnsim::engine::{run_experiment, ExperimentConfig};
//!
//! let cfg = ExperimentConfig { users_per_sector: vec![200], num_drops: 10, ..Default::default() };
//! let result = run_experiment(&cfg).unwrap();
//! for e in &result.entries {
//!     println!("{} {:?}", e.scheme, e.report.median_edge_sinr_db());
//! }
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod schemes;
pub mod tables;

pub use error::{ConfigError, Result, SimError};
