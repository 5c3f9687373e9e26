//! Pipe-network geometry: ordered centerline segments with arc-length
//! parameterization.
//!
//! A network is a sequence of straight runs and circular bends described by
//! their centerline only. Bend plane and 3D pose are not modeled; every
//! quantity downstream (track speeds, timings, compressions) depends only on
//! centerline arc length, the bend radius, and the pipe radius.
//!
//! Networks are immutable after construction and safe to share across
//! threads.

use crate::error::{Error, Result};

/// Cross-section of the pipe the robot climbs inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipeSpec {
    /// Inner radius of the pipe wall, mm.
    pub inner_radius_mm: f64,
}

impl PipeSpec {
    pub fn new(inner_radius_mm: f64) -> Result<Self> {
        if inner_radius_mm <= 0.0 || !inner_radius_mm.is_finite() {
            return Err(Error::Geometry(format!(
                "pipe inner radius must be positive and finite, got {inner_radius_mm}"
            )));
        }
        Ok(Self { inner_radius_mm })
    }
}

/// Direction of gravity relative to a straight run. Carried as metadata for
/// reporting; the kinematic model treats both identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GravityOrientation {
    Vertical,
    Horizontal,
}

impl GravityOrientation {
    pub fn as_str(self) -> &'static str {
        match self {
            GravityOrientation::Vertical => "vertical",
            GravityOrientation::Horizontal => "horizontal",
        }
    }
}

/// Coarse segment classification used by the suspension model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Straight,
    Bend,
}

/// One centerline segment of a pipe network.
#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    Straight {
        /// Centerline length, mm.
        length_mm: f64,
        orientation: GravityOrientation,
    },
    Bend {
        /// Radius of curvature of the bend centerline, mm.
        bend_radius_mm: f64,
        /// Swept angle of the bend, degrees, in (0, 360).
        sweep_deg: f64,
        /// Free-text label, e.g. `elbow` or `u_section`.
        label: String,
    },
}

/// Arc length of a circular bend centerline: radius times sweep in radians.
pub fn bend_arc_length_mm(bend_radius_mm: f64, sweep_deg: f64) -> f64 {
    bend_radius_mm * sweep_deg.to_radians()
}

impl Segment {
    pub fn straight(length_mm: f64, orientation: GravityOrientation) -> Result<Self> {
        if length_mm <= 0.0 || !length_mm.is_finite() {
            return Err(Error::Geometry(format!(
                "straight segment length must be positive and finite, got {length_mm}"
            )));
        }
        Ok(Segment::Straight {
            length_mm,
            orientation,
        })
    }

    pub fn bend(bend_radius_mm: f64, sweep_deg: f64, label: impl Into<String>) -> Result<Self> {
        if bend_radius_mm <= 0.0 || !bend_radius_mm.is_finite() {
            return Err(Error::Geometry(format!(
                "bend radius must be positive and finite, got {bend_radius_mm}"
            )));
        }
        if sweep_deg.is_nan() || sweep_deg <= 0.0 || sweep_deg >= 360.0 {
            return Err(Error::Geometry(format!(
                "bend sweep must lie in (0, 360) degrees, got {sweep_deg}"
            )));
        }
        Ok(Segment::Bend {
            bend_radius_mm,
            sweep_deg,
            label: label.into(),
        })
    }

    /// Centerline length of this segment, mm.
    pub fn length_mm(&self) -> f64 {
        match *self {
            Segment::Straight { length_mm, .. } => length_mm,
            Segment::Bend {
                bend_radius_mm,
                sweep_deg,
                ..
            } => bend_arc_length_mm(bend_radius_mm, sweep_deg),
        }
    }

    pub fn kind(&self) -> SegmentKind {
        match self {
            Segment::Straight { .. } => SegmentKind::Straight,
            Segment::Bend { .. } => SegmentKind::Bend,
        }
    }
}

/// A position along the network centerline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPosition {
    /// Index of the containing segment.
    pub segment_index: usize,
    /// Offset from the segment start, mm.
    pub local_s_mm: f64,
    /// Offset from the network start, mm.
    pub global_s_mm: f64,
}

/// An ordered pipe network: the world the robot traverses.
#[derive(Debug, Clone, PartialEq)]
pub struct PipeNetwork {
    spec: PipeSpec,
    segments: Vec<Segment>,
}

impl PipeNetwork {
    /// Build a network, checking each segment against the pipe spec.
    ///
    /// An empty segment list is allowed here (its total length is zero);
    /// the traversal simulator rejects empty networks at run time.
    pub fn new(spec: PipeSpec, segments: Vec<Segment>) -> Result<Self> {
        for (i, seg) in segments.iter().enumerate() {
            if let Segment::Bend { bend_radius_mm, .. } = seg {
                if *bend_radius_mm <= spec.inner_radius_mm {
                    return Err(Error::Geometry(format!(
                        "segment {i}: bend radius {bend_radius_mm} mm must exceed pipe inner radius {} mm",
                        spec.inner_radius_mm
                    )));
                }
            }
        }
        Ok(Self { spec, segments })
    }

    pub fn spec(&self) -> PipeSpec {
        self.spec
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Total centerline length: straight lengths plus bend arc lengths, mm.
    pub fn total_centerline_length_mm(&self) -> f64 {
        self.segments.iter().map(Segment::length_mm).sum()
    }

    /// Distance available to the robot center: total length minus the robot
    /// body length.
    pub fn robot_path_length_mm(&self, robot_length_mm: f64) -> Result<f64> {
        let total = self.total_centerline_length_mm();
        if robot_length_mm < 0.0 || !robot_length_mm.is_finite() {
            return Err(Error::RobotLength(format!(
                "robot length must be non-negative and finite, got {robot_length_mm}"
            )));
        }
        if robot_length_mm >= total {
            return Err(Error::RobotLength(format!(
                "robot length {robot_length_mm} mm must be shorter than the network ({total} mm)"
            )));
        }
        Ok(total - robot_length_mm)
    }

    /// Map a global arc length to its containing segment.
    ///
    /// A position exactly on a segment boundary belongs to the *following*
    /// segment; `s` equal to the total length maps to the end of the last
    /// segment.
    pub fn locate(&self, global_s_mm: f64) -> Result<ArcPosition> {
        let total = self.total_centerline_length_mm();
        if !global_s_mm.is_finite() || global_s_mm < 0.0 || global_s_mm > total {
            return Err(Error::PositionOutOfRange {
                s: global_s_mm,
                total,
            });
        }
        let mut start = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            let end = start + seg.length_mm();
            let last = i == self.segments.len() - 1;
            // boundary tie-break: end of a segment belongs to the next one
            if global_s_mm < end || (last && global_s_mm <= end) {
                return Ok(ArcPosition {
                    segment_index: i,
                    local_s_mm: global_s_mm - start,
                    global_s_mm,
                });
            }
            start = end;
        }
        Err(Error::PositionOutOfRange {
            s: global_s_mm,
            total,
        })
    }

    /// Global arc length at which segment `index` starts.
    pub fn segment_start_mm(&self, index: usize) -> f64 {
        self.segments[..index].iter().map(Segment::length_mm).sum()
    }
}
