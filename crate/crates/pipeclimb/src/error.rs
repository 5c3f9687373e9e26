//! Crate-wide error type.
//!
//! All error messages render on a single line so callers can forward them
//! verbatim into machine-parseable diagnostics.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A pipe network or segment violates a geometric invariant.
    #[error("invalid geometry: {0}")]
    Geometry(String),

    /// Robot length is incompatible with the pipe network.
    #[error("invalid robot length: {0}")]
    RobotLength(String),

    /// Arc-length query outside the network.
    #[error("arc position out of range: s = {s} mm, network length = {total} mm")]
    PositionOutOfRange { s: f64, total: f64 },

    /// A configuration value violates its invariant.
    #[error("invalid config: {0}")]
    Config(String),

    /// A demand weight passed to the speed allocator is unusable.
    #[error("invalid allocation weight: {0}")]
    AllocationWeight(String),

    /// A module spring was driven past its travel limit.
    #[error("over-compression: {computed} mm exceeds limit of {max} mm")]
    OverCompression { computed: f64, max: f64 },

    /// APE against a zero theoretical value is undefined.
    #[error("undefined APE: theoretical value is zero")]
    UndefinedApe,

    /// Report rendering was asked to summarize nothing.
    #[error("nothing to render: reports and comparisons are both empty")]
    EmptyReport,

    /// Line-oriented config or network file failed to parse.
    #[error("{file}:{line}: {msg}")]
    Parse {
        file: String,
        line: usize,
        msg: String,
    },

    /// The traversal loop exceeded its step budget without finishing.
    #[error("simulation diverged: exceeded {max_steps} steps after t = {t} s")]
    Divergence { max_steps: u64, t: f64 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}
