//! Radial spring compression of the wall-pressing modules.
//!
//! Springs are preloaded so the tracks grip the pipe wall in straight runs.
//! Entering a bend, the pipe cross-section seen by the robot widens along
//! the bend plane, and the modules facing the bend center and the outside
//! wall compress further. The published data gives the extra compression
//! only at those two positions; between them this model interpolates with
//! `preload + extra * |cos(module_angle)|`, which reproduces both endpoints
//! and falls smoothly to the preload for a module riding the neutral axis.
//!
//! Compression is capped by the spring travel limit; a module can also
//! compress unevenly front-to-rear up to a tilt limit `phi`.
//!
//! Pure functions; unrestricted concurrent use.

use crate::error::{Error, Result};
use crate::geometry::SegmentKind;

/// Spring travel limit of each module, mm.
pub const DEFAULT_MAX_COMPRESSION_MM: f64 = 16.0;
/// Preload applied when the robot is inserted, mm.
pub const DEFAULT_PRELOAD_MM: f64 = 1.25;
/// Additional compression of the inner/outer modules inside a bend, mm.
pub const DEFAULT_BEND_EXTRA_MM: f64 = 1.5;
/// Distance between a module's front and rear linkage pairs, mm.
pub const DEFAULT_LINKAGE_SPAN_MM: f64 = 100.0;

/// Spring and linkage parameters of one module (all three are identical).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpringConfig {
    pub preload_mm: f64,
    pub bend_extra_mm: f64,
    pub max_compression_mm: f64,
    /// Front-to-rear linkage span used to convert a compression difference
    /// into a tilt angle, mm.
    pub linkage_span_mm: f64,
    /// Largest allowed asymmetric tilt, degrees.
    pub asym_max_angle_deg: f64,
}

impl Default for SpringConfig {
    fn default() -> Self {
        Self {
            preload_mm: DEFAULT_PRELOAD_MM,
            bend_extra_mm: DEFAULT_BEND_EXTRA_MM,
            max_compression_mm: DEFAULT_MAX_COMPRESSION_MM,
            linkage_span_mm: DEFAULT_LINKAGE_SPAN_MM,
            // full travel on one linkage pair with the other fully extended
            asym_max_angle_deg: (DEFAULT_MAX_COMPRESSION_MM / DEFAULT_LINKAGE_SPAN_MM)
                .atan()
                .to_degrees(),
        }
    }
}

impl SpringConfig {
    pub fn validate(&self) -> Result<()> {
        if self.preload_mm.is_nan()
            || self.preload_mm < 0.0
            || self.preload_mm > self.max_compression_mm
        {
            return Err(Error::Config(format!(
                "spring preload {} mm must lie in [0, {}] mm",
                self.preload_mm, self.max_compression_mm
            )));
        }
        if self.bend_extra_mm < 0.0 || !self.bend_extra_mm.is_finite() {
            return Err(Error::Config(format!(
                "bend extra compression must be non-negative and finite, got {} mm",
                self.bend_extra_mm
            )));
        }
        if self.linkage_span_mm <= 0.0 || !self.linkage_span_mm.is_finite() {
            return Err(Error::Config(format!(
                "linkage span must be positive and finite, got {} mm",
                self.linkage_span_mm
            )));
        }
        Ok(())
    }
}

/// Spring compression of a module at angular position `module_angle_deg`
/// while the robot occupies a segment of the given kind, mm.
///
/// Straight pipe holds every module at the preload. In a bend the
/// compression is `preload + extra * |cos(angle)|`. Exceeding the travel
/// limit is an error, never a silently clamped value.
pub fn compression_at(kind: SegmentKind, module_angle_deg: f64, cfg: &SpringConfig) -> Result<f64> {
    let compression = match kind {
        SegmentKind::Straight => cfg.preload_mm,
        SegmentKind::Bend => {
            cfg.preload_mm + cfg.bend_extra_mm * module_angle_deg.to_radians().cos().abs()
        }
    };
    if compression > cfg.max_compression_mm {
        return Err(Error::OverCompression {
            computed: compression,
            max: cfg.max_compression_mm,
        });
    }
    Ok(compression)
}

/// Outcome of an asymmetric-compression check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymmetryCheck {
    /// Tilt implied by the front/rear compression difference, degrees.
    pub tilt_angle_deg: f64,
    pub pass: bool,
}

/// Check whether a front/rear compression pair is admissible.
///
/// The tilt angle is `atan(|front - rear| / linkage_span)`. The check fails
/// (it does not error) when the tilt exceeds the configured limit or either
/// compression exceeds the travel limit.
pub fn check_asymmetric(
    front_compression_mm: f64,
    rear_compression_mm: f64,
    cfg: &SpringConfig,
) -> AsymmetryCheck {
    let delta = (front_compression_mm - rear_compression_mm).abs();
    let tilt_angle_deg = (delta / cfg.linkage_span_mm).atan().to_degrees();
    let within_travel = front_compression_mm <= cfg.max_compression_mm
        && rear_compression_mm <= cfg.max_compression_mm;
    AsymmetryCheck {
        tilt_angle_deg,
        pass: within_travel && tilt_angle_deg <= cfg.asym_max_angle_deg,
    }
}
