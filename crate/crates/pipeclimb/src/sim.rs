//! Time-stepped traversal of a pipe network.
//!
//! The robot is reduced to a point at its body center moving along the
//! centerline at the equal-load speed `v` (differential output through the
//! sprocket). Track speeds are piecewise constant per segment: equal to `v`
//! in straights, redistributed by the bend law inside bends. Integration is
//! explicit Euler with a fixed `dt`, split exactly at segment boundaries, so
//! for piecewise-constant speeds the computed times are exact up to float
//! rounding regardless of `dt`.
//!
//! Two modes are simulated:
//!
//! - `PassiveDifferential`: tracks follow the geometric no-slip speeds, the
//!   behavior of the equal-output differential. Slip is identically zero.
//! - `FixedEqualSpeed`: all tracks are forced to `v`, the behavior of a
//!   rigidly coupled drive. Inside bends the tracks fight the geometry and
//!   the difference shows up as slip.
//!
//! Distance accounting follows the robot-body convention: the center starts
//! half a body length into the network and stops after covering the network
//! length minus one body length (or an explicit distance override).
//!
//! Speed changes at segment boundaries are instantaneous; contact
//! transients are not modeled. A single run is strictly sequential and
//! deterministic; distinct runs share nothing and may execute in parallel.

use crate::differential::{equal_load_output_speed, DifferentialConfig};
use crate::error::{Error, Result};
use crate::geometry::{PipeNetwork, Segment};
use crate::kinematics::{
    bend_track_speeds, linear_track_speed, module_angles, ModuleOrientation, TrackSpeeds,
};
use crate::suspension::{compression_at, SpringConfig};

/// Hard ceiling on integration substeps per run.
pub const MAX_STEPS: u64 = 10_000_000;

/// CSV header for the traversal time series.
pub const CSV_HEADER: &str = "t_s,center_mm,vA_mm_s,vB_mm_s,vC_mm_s,odoA_mm,odoB_mm,odoC_mm,\
                              compA_mm,compB_mm,compC_mm,slipA_mm_s,slipB_mm_s,slipC_mm_s";

/// Physical configuration of the robot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotConfig {
    /// Body length used in distance accounting, mm.
    pub robot_length_mm: f64,
    /// Drive sprocket diameter, mm.
    pub sprocket_diameter_mm: f64,
    /// Insertion orientation of module A.
    pub orientation: ModuleOrientation,
    pub differential: DifferentialConfig,
    pub springs: SpringConfig,
}

impl Default for RobotConfig {
    fn default() -> Self {
        Self {
            robot_length_mm: 200.0,
            sprocket_diameter_mm: 80.0,
            orientation: ModuleOrientation::default(),
            differential: DifferentialConfig::default(),
            springs: SpringConfig::default(),
        }
    }
}

impl RobotConfig {
    pub fn validate(&self) -> Result<()> {
        if self.robot_length_mm <= 0.0 || !self.robot_length_mm.is_finite() {
            return Err(Error::Config(format!(
                "robot length must be positive and finite, got {} mm",
                self.robot_length_mm
            )));
        }
        if self.sprocket_diameter_mm <= 0.0 || !self.sprocket_diameter_mm.is_finite() {
            return Err(Error::Config(format!(
                "sprocket diameter must be positive and finite, got {} mm",
                self.sprocket_diameter_mm
            )));
        }
        self.differential.validate()?;
        self.springs.validate()
    }

    /// Equal-load linear track speed through the sprocket, mm/s.
    pub fn center_speed_mm_s(&self) -> f64 {
        linear_track_speed(
            equal_load_output_speed(&self.differential),
            self.sprocket_diameter_mm,
        )
    }
}

/// Track drive policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    /// Tracks follow the geometric no-slip demand (the differential).
    PassiveDifferential,
    /// All tracks locked to the equal-load speed (rigid comparison drive).
    FixedEqualSpeed,
}

impl SimMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SimMode::PassiveDifferential => "passive",
            SimMode::FixedEqualSpeed => "fixed",
        }
    }
}

/// Integration and reporting settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSettings {
    pub dt_s: f64,
    pub mode: SimMode,
    /// Replace the robot-path distance with an explicit value, mm. The pose
    /// used for speed lookup saturates at the network end if the override
    /// runs past it.
    pub effective_distance_override_mm: Option<f64>,
    /// Record every n-th step into the time series (the initial and final
    /// states are always recorded).
    pub record_stride: usize,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            dt_s: 0.01,
            mode: SimMode::PassiveDifferential,
            effective_distance_override_mm: None,
            record_stride: 1,
        }
    }
}

impl SimSettings {
    pub fn validate(&self) -> Result<()> {
        if self.dt_s <= 0.0 || !self.dt_s.is_finite() {
            return Err(Error::Config(format!(
                "dt must be positive and finite, got {} s",
                self.dt_s
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::Config("record stride must be at least 1".into()));
        }
        if let Some(d) = self.effective_distance_override_mm {
            if d <= 0.0 || !d.is_finite() {
                return Err(Error::Config(format!(
                    "effective distance override must be positive and finite, got {d} mm"
                )));
            }
        }
        Ok(())
    }
}

/// Instantaneous simulation state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimState {
    pub t_s: f64,
    /// Robot-center arc length from the network start, mm. May exceed the
    /// network length when a distance override runs past the end.
    pub center_s_mm: f64,
    /// Distance rolled by each track, mm.
    pub track_odometers_mm: [f64; 3],
    /// Commanded track speeds over the last substep.
    pub speeds: TrackSpeeds,
    /// Module spring compressions at the current pose, mm.
    pub compressions_mm: [f64; 3],
}

/// One recorded row of the time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSample {
    pub t_s: f64,
    pub center_mm: f64,
    pub speeds: TrackSpeeds,
    pub odometers_mm: [f64; 3],
    pub compressions_mm: [f64; 3],
    pub slip_mm_s: [f64; 3],
}

/// Time interval the robot center spent in one segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentWindow {
    pub segment_index: usize,
    pub entry_t_s: f64,
    pub exit_t_s: f64,
}

impl SegmentWindow {
    pub fn duration_s(&self) -> f64 {
        self.exit_t_s - self.entry_t_s
    }
}

/// Aggregates computed over the full-resolution run (not the strided
/// series).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraversalSummary {
    pub max_abs_slip_mm_s: [f64; 3],
    /// Integral of |slip| over time: slipped distance per track, mm.
    pub slip_integral_mm: [f64; 3],
    pub final_odometers_mm: [f64; 3],
    pub mean_track_speed_mm_s: [f64; 3],
    pub distance_mm: f64,
}

/// Complete result of one traversal run.
#[derive(Debug, Clone, PartialEq)]
pub struct TraversalReport {
    pub mode: SimMode,
    pub orientation_mu_deg: f64,
    pub total_time_s: f64,
    pub segment_windows: Vec<SegmentWindow>,
    pub series: Vec<SimSample>,
    pub summary: TraversalSummary,
}

impl TraversalReport {
    /// Render the time series as CSV, one row per recorded sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.series.len() * 128 + 160);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for s in &self.series {
            let [oa, ob, oc] = s.odometers_mm;
            let [ca, cb, cc] = s.compressions_mm;
            let [sa, sb, sc] = s.slip_mm_s;
            out.push_str(&format!(
                "{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
                s.t_s, s.center_mm, s.speeds.v_a, s.speeds.v_b, s.speeds.v_c,
                oa, ob, oc, ca, cb, cc, sa, sb, sc,
            ));
        }
        out
    }
}

/// Per-pose derived quantities, constant within a segment.
#[derive(Debug, Clone, Copy)]
struct PoseDynamics {
    segment_index: usize,
    commanded: TrackSpeeds,
    compressions_mm: [f64; 3],
    slip_mm_s: [f64; 3],
}

/// The fixed context of one traversal: network, robot, drive mode, and the
/// constant center speed.
struct Course<'a> {
    network: &'a PipeNetwork,
    robot: &'a RobotConfig,
    mode: SimMode,
    v_center: f64,
    total_mm: f64,
}

impl<'a> Course<'a> {
    fn new(network: &'a PipeNetwork, robot: &'a RobotConfig, mode: SimMode) -> Self {
        Self {
            network,
            robot,
            mode,
            v_center: robot.center_speed_mm_s(),
            total_mm: network.total_centerline_length_mm(),
        }
    }

    fn pose_dynamics(&self, center_s_mm: f64) -> Result<PoseDynamics> {
        let pos = self.network.locate(center_s_mm.min(self.total_mm))?;
        let seg = &self.network.segments()[pos.segment_index];
        let mu = self.robot.orientation.deg();
        let demand = match *seg {
            Segment::Straight { .. } => TrackSpeeds::uniform(self.v_center),
            Segment::Bend { bend_radius_mm, .. } => bend_track_speeds(
                self.v_center,
                bend_radius_mm,
                self.network.spec().inner_radius_mm,
                mu,
            )?,
        };
        let commanded = match self.mode {
            SimMode::PassiveDifferential => demand,
            SimMode::FixedEqualSpeed => TrackSpeeds::uniform(self.v_center),
        };
        let angles = module_angles(mu);
        let kind = seg.kind();
        let compressions_mm = [
            compression_at(kind, angles[0], &self.robot.springs)?,
            compression_at(kind, angles[1], &self.robot.springs)?,
            compression_at(kind, angles[2], &self.robot.springs)?,
        ];
        let c = commanded.as_array();
        let d = demand.as_array();
        let slip_mm_s = [c[0] - d[0], c[1] - d[1], c[2] - d[2]];
        Ok(PoseDynamics {
            segment_index: pos.segment_index,
            commanded,
            compressions_mm,
            slip_mm_s,
        })
    }
}

/// Initial state with the robot center half a body length into the network.
pub fn initial_state(
    network: &PipeNetwork,
    robot: &RobotConfig,
    settings: &SimSettings,
) -> Result<SimState> {
    let course = Course::new(network, robot, settings.mode);
    let start_s = robot.robot_length_mm / 2.0;
    let dyn0 = course.pose_dynamics(start_s)?;
    Ok(SimState {
        t_s: 0.0,
        center_s_mm: start_s,
        track_odometers_mm: [0.0; 3],
        speeds: dyn0.commanded,
        compressions_mm: dyn0.compressions_mm,
    })
}

impl Course<'_> {
    /// Advance the state by at most `dt_cap` seconds and `dist_cap`
    /// millimetres, splitting exactly at segment boundaries. Returns true
    /// when the distance cap was exhausted. `on_substep(t_start, dt,
    /// dynamics)` fires once per piecewise-constant interval.
    fn advance(
        &self,
        state: &mut SimState,
        dt_cap: f64,
        dist_cap: f64,
        budget: &mut u64,
        mut on_substep: impl FnMut(f64, f64, &PoseDynamics),
    ) -> Result<bool> {
        let v_center = self.v_center;
        let mut remaining_dt = dt_cap;
        let mut remaining_dist = dist_cap;
        while remaining_dt > 0.0 {
            if *budget == 0 {
                return Err(Error::Divergence {
                    max_steps: MAX_STEPS,
                    t: state.t_s,
                });
            }
            *budget -= 1;

            let dynamics = self.pose_dynamics(state.center_s_mm)?;
            let t_start = state.t_s;

            if v_center <= 0.0 {
                // no spatial progress; let the clock run out
                state.t_s += remaining_dt;
                state.speeds = dynamics.commanded;
                state.compressions_mm = dynamics.compressions_mm;
                on_substep(t_start, remaining_dt, &dynamics);
                return Ok(false);
            }

            let seg_end = if state.center_s_mm < self.total_mm {
                self.network.segment_start_mm(dynamics.segment_index)
                    + self.network.segments()[dynamics.segment_index].length_mm()
            } else {
                f64::INFINITY
            };
            let boundary_dt = (seg_end - state.center_s_mm) / v_center;
            let dist_dt = remaining_dist / v_center;

            // smallest wins; boundary beats dist beats dt on ties so the
            // pose snaps exactly onto segment ends
            enum Cap {
                Dt,
                Dist,
                Boundary,
            }
            let mut step_dt = remaining_dt;
            let mut cap = Cap::Dt;
            if dist_dt <= step_dt {
                step_dt = dist_dt;
                cap = Cap::Dist;
            }
            if boundary_dt <= step_dt {
                step_dt = boundary_dt;
                cap = Cap::Boundary;
            }

            state.t_s += step_dt;
            for (odometer, speed) in state
                .track_odometers_mm
                .iter_mut()
                .zip(dynamics.commanded.as_array())
            {
                *odometer += speed * step_dt;
            }
            state.speeds = dynamics.commanded;
            state.compressions_mm = dynamics.compressions_mm;
            on_substep(t_start, step_dt, &dynamics);

            match cap {
                Cap::Boundary => {
                    state.center_s_mm = seg_end;
                    remaining_dt -= step_dt;
                    remaining_dist -= v_center * step_dt;
                    if remaining_dist <= 0.0 {
                        return Ok(true);
                    }
                }
                Cap::Dist => {
                    state.center_s_mm += v_center * step_dt;
                    return Ok(true);
                }
                Cap::Dt => {
                    state.center_s_mm += v_center * step_dt;
                    remaining_dt = 0.0;
                    remaining_dist -= v_center * step_dt;
                    if remaining_dist <= 0.0 {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }
}

/// Advance one fixed time step (`settings.dt_s`), splitting at segment
/// boundaries. A zero `dt` returns the state unchanged.
pub fn step(
    state: &SimState,
    network: &PipeNetwork,
    robot: &RobotConfig,
    settings: &SimSettings,
) -> Result<SimState> {
    let course = Course::new(network, robot, settings.mode);
    let mut next = *state;
    let mut budget = MAX_STEPS;
    course.advance(
        &mut next,
        settings.dt_s,
        f64::INFINITY,
        &mut budget,
        |_, _, _| {},
    )?;
    Ok(next)
}

/// Simulate the robot over the full network (or the distance override) and
/// collect the traversal report.
pub fn run(
    network: &PipeNetwork,
    robot: &RobotConfig,
    settings: &SimSettings,
) -> Result<TraversalReport> {
    settings.validate()?;
    robot.validate()?;
    if network.is_empty() {
        return Err(Error::Config(
            "cannot simulate an empty pipe network".into(),
        ));
    }
    let path_mm = network.robot_path_length_mm(robot.robot_length_mm)?;
    let target_mm = settings.effective_distance_override_mm.unwrap_or(path_mm);
    let course = Course::new(network, robot, settings.mode);
    if course.v_center <= 0.0 {
        return Err(Error::Config(
            "input speed and gear ratios give zero track speed; traversal cannot finish".into(),
        ));
    }

    let mut state = initial_state(network, robot, settings)?;
    let start_s = state.center_s_mm;

    let mut series = Vec::new();
    let mut windows: Vec<SegmentWindow> = Vec::new();
    let mut max_abs_slip = [0.0f64; 3];
    let mut slip_integral = [0.0f64; 3];

    let initial_dynamics = course.pose_dynamics(start_s)?;
    let mut current_segment = initial_dynamics.segment_index;
    let mut window_entry_t = 0.0;
    let mut last_slip = initial_dynamics.slip_mm_s;

    let record = |series: &mut Vec<SimSample>, state: &SimState, slip: [f64; 3]| {
        series.push(SimSample {
            t_s: state.t_s,
            center_mm: state.center_s_mm,
            speeds: state.speeds,
            odometers_mm: state.track_odometers_mm,
            compressions_mm: state.compressions_mm,
            slip_mm_s: slip,
        });
    };
    record(&mut series, &state, last_slip);

    let mut budget = MAX_STEPS;
    let mut outer_steps: usize = 0;
    loop {
        let traveled = state.center_s_mm - start_s;
        let remaining = target_mm - traveled;
        if remaining <= 0.0 {
            break;
        }
        if budget == 0 {
            return Err(Error::Divergence {
                max_steps: MAX_STEPS,
                t: state.t_s,
            });
        }
        let finished = course.advance(
            &mut state,
            settings.dt_s,
            remaining,
            &mut budget,
            |t_start, dt, dynamics| {
                if dynamics.segment_index != current_segment {
                    windows.push(SegmentWindow {
                        segment_index: current_segment,
                        entry_t_s: window_entry_t,
                        exit_t_s: t_start,
                    });
                    current_segment = dynamics.segment_index;
                    window_entry_t = t_start;
                }
                for i in 0..3 {
                    let a = dynamics.slip_mm_s[i].abs();
                    slip_integral[i] += a * dt;
                    if a > max_abs_slip[i] {
                        max_abs_slip[i] = a;
                    }
                }
                last_slip = dynamics.slip_mm_s;
            },
        )?;
        outer_steps += 1;
        if finished {
            break;
        }
        if outer_steps.is_multiple_of(settings.record_stride) {
            record(&mut series, &state, last_slip);
        }
    }
    // final state is always recorded
    if series.last().map(|s| s.t_s) != Some(state.t_s) {
        record(&mut series, &state, last_slip);
    }
    windows.push(SegmentWindow {
        segment_index: current_segment,
        entry_t_s: window_entry_t,
        exit_t_s: state.t_s,
    });

    let total_time_s = state.t_s;
    let mean = if total_time_s > 0.0 {
        [
            state.track_odometers_mm[0] / total_time_s,
            state.track_odometers_mm[1] / total_time_s,
            state.track_odometers_mm[2] / total_time_s,
        ]
    } else {
        [0.0; 3]
    };
    Ok(TraversalReport {
        mode: settings.mode,
        orientation_mu_deg: robot.orientation.deg(),
        total_time_s,
        segment_windows: windows,
        series,
        summary: TraversalSummary {
            max_abs_slip_mm_s: max_abs_slip,
            slip_integral_mm: slip_integral,
            final_odometers_mm: state.track_odometers_mm,
            mean_track_speed_mm_s: mean,
            distance_mm: state.center_s_mm - start_s,
        },
    })
}

/// Per-track slip series and aggregates extracted from a report.
#[derive(Debug, Clone, PartialEq)]
pub struct SlipProfile {
    /// (t, per-track slip) rows at the report's recording stride.
    pub series: Vec<(f64, [f64; 3])>,
    /// Computed at full step resolution during the run.
    pub max_abs_mm_s: [f64; 3],
    /// Integral of |slip| over the run: slipped distance, mm.
    pub integral_abs_mm: [f64; 3],
}

pub fn slip_profile(report: &TraversalReport) -> SlipProfile {
    SlipProfile {
        series: report.series.iter().map(|s| (s.t_s, s.slip_mm_s)).collect(),
        max_abs_mm_s: report.summary.max_abs_slip_mm_s,
        integral_abs_mm: report.summary.slip_integral_mm,
    }
}
