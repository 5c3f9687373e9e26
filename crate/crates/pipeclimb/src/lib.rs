//! Deterministic kinematic simulator of a tracked in-pipe climbing robot
//! driven by a passive three-output equal-output differential.
//!
//! The crate models:
//!
//! - pipe networks as arc-length-parameterized centerline segments
//!   ([`geometry`], [`netfile`]),
//! - the differential's speed and torque laws ([`differential`]),
//! - no-slip track speeds in bends and sprocket conversion
//!   ([`kinematics`]),
//! - radial spring compression of the wall-pressing modules
//!   ([`suspension`]),
//! - full-network traversal with per-track odometry, slip, and timing
//!   ([`sim`]),
//! - validation against published observations and report rendering
//!   ([`analysis`], [`mod@reference`]).
//!
//! All simulation is pure `f64` arithmetic with fixed iteration order:
//! identical inputs give byte-identical reports.

pub mod analysis;
pub mod differential;
pub mod error;
pub mod geometry;
pub mod kinematics;
pub mod netfile;
pub mod reference;
pub mod sim;
pub mod suspension;

pub use error::{Error, Result};
