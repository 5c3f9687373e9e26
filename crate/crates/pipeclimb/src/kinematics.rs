//! No-slip track speeds in pipe bends.
//!
//! When the robot rides a bend of centerline radius `R` inside a pipe of
//! inner radius `r`, a module whose angular position is `mu` from the
//! bend-center direction follows an arc of radius `R - r cos(mu)`, so its
//! no-slip speed relative to the robot-center speed `v` is
//!
//! ```text
//! v_track = v * (R - r * cos(mu)) / R
//! ```
//!
//! `mu = 0` points at the bend center: that module takes the short, slow
//! path and the module at 180 degrees takes the long, fast one. The three
//! modules sit 120 degrees apart, and since cosines 120 degrees apart sum to
//! zero the three track speeds always sum to `3 v` — the same sum the
//! differential enforces, which is why the mechanism can satisfy bend
//! kinematics passively.
//!
//! All functions are pure and stateless.

use crate::error::{Error, Result};

/// Angular spacing between neighbouring modules, degrees.
pub const MODULE_SPACING_DEG: f64 = 120.0;

/// Insertion orientation of module A about the pipe axis, measured from the
/// bend-center direction. Normalized to [0, 360) on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModuleOrientation {
    mu_deg: f64,
}

impl ModuleOrientation {
    pub fn new(mu_deg: f64) -> Self {
        Self {
            mu_deg: normalize_deg(mu_deg),
        }
    }

    pub fn deg(self) -> f64 {
        self.mu_deg
    }
}

impl Default for ModuleOrientation {
    fn default() -> Self {
        Self::new(0.0)
    }
}

fn normalize_deg(angle: f64) -> f64 {
    angle.rem_euclid(360.0)
}

/// Angular positions of the three modules for insertion orientation `mu`:
/// `(mu, mu + 120, mu + 240)`, each normalized to [0, 360).
pub fn module_angles(mu_deg: f64) -> [f64; 3] {
    [
        normalize_deg(mu_deg),
        normalize_deg(mu_deg + MODULE_SPACING_DEG),
        normalize_deg(mu_deg + 2.0 * MODULE_SPACING_DEG),
    ]
}

/// Linear speeds of the three tracks, mm/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackSpeeds {
    pub v_a: f64,
    pub v_b: f64,
    pub v_c: f64,
}

impl TrackSpeeds {
    pub fn uniform(v: f64) -> Self {
        Self {
            v_a: v,
            v_b: v,
            v_c: v,
        }
    }

    pub fn as_array(self) -> [f64; 3] {
        [self.v_a, self.v_b, self.v_c]
    }

    pub fn sum(self) -> f64 {
        self.v_a + self.v_b + self.v_c
    }
}

fn check_bend_geometry(bend_radius_mm: f64, pipe_radius_mm: f64, v_mm_s: f64) -> Result<()> {
    if pipe_radius_mm < 0.0 || !pipe_radius_mm.is_finite() {
        return Err(Error::Geometry(format!(
            "pipe radius must be non-negative and finite, got {pipe_radius_mm}"
        )));
    }
    if bend_radius_mm.is_nan() || bend_radius_mm <= pipe_radius_mm {
        return Err(Error::Geometry(format!(
            "bend radius {bend_radius_mm} mm must exceed pipe radius {pipe_radius_mm} mm \
             (track path would cross the bend center)"
        )));
    }
    if v_mm_s < 0.0 || !v_mm_s.is_finite() {
        return Err(Error::Geometry(format!(
            "center speed must be non-negative and finite, got {v_mm_s}"
        )));
    }
    Ok(())
}

/// No-slip speed of one track at module angle `mu_deg` in a bend, mm/s.
pub fn track_speed_in_bend(
    v_mm_s: f64,
    bend_radius_mm: f64,
    pipe_radius_mm: f64,
    mu_deg: f64,
) -> Result<f64> {
    check_bend_geometry(bend_radius_mm, pipe_radius_mm, v_mm_s)?;
    let cos_mu = normalize_deg(mu_deg).to_radians().cos();
    Ok(v_mm_s * (bend_radius_mm - pipe_radius_mm * cos_mu) / bend_radius_mm)
}

/// No-slip speeds of all three tracks in a bend, evaluated at the three
/// module angles for orientation `mu_deg`.
pub fn bend_track_speeds(
    v_mm_s: f64,
    bend_radius_mm: f64,
    pipe_radius_mm: f64,
    mu_deg: f64,
) -> Result<TrackSpeeds> {
    check_bend_geometry(bend_radius_mm, pipe_radius_mm, v_mm_s)?;
    let ratio = pipe_radius_mm / bend_radius_mm;
    let [a, b, c] = module_angles(mu_deg);
    let speed = |angle_deg: f64| v_mm_s * (1.0 - ratio * angle_deg.to_radians().cos());
    Ok(TrackSpeeds {
        v_a: speed(a),
        v_b: speed(b),
        v_c: speed(c),
    })
}

/// Linear track speed produced by a sprocket of diameter `d_s` at `omega`
/// rpm: `pi * d_s * omega / 60`, mm/s.
pub fn linear_track_speed(omega_rpm: f64, sprocket_diameter_mm: f64) -> f64 {
    omega_rpm * crate::differential::RPM_TO_RAD_PER_S * sprocket_diameter_mm / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: f64 = 418.77;
    const PIPE_R: f64 = 137.9;
    const V: f64 = 50.24;

    #[test]
    fn module_angles_examples() {
        assert_eq!(module_angles(0.0), [0.0, 120.0, 240.0]);
        assert_eq!(module_angles(30.0), [30.0, 150.0, 270.0]);
        assert_eq!(module_angles(370.0), [10.0, 130.0, 250.0]);
    }

    #[test]
    fn orientation_normalizes() {
        assert_eq!(ModuleOrientation::new(-90.0).deg(), 270.0);
        assert_eq!(ModuleOrientation::new(720.0).deg(), 0.0);
        assert_eq!(ModuleOrientation::new(45.5).deg(), 45.5);
    }

    #[test]
    fn inner_track_speed_mu_0() {
        let v = track_speed_in_bend(V, R, PIPE_R, 0.0).unwrap();
        assert!((v - 33.70).abs() < 0.05, "v = {v}");
    }

    #[test]
    fn outer_pair_speed_mu_120() {
        let v = track_speed_in_bend(V, R, PIPE_R, 120.0).unwrap();
        assert!((v - 58.51).abs() < 0.05, "v = {v}");
    }

    #[test]
    fn zero_pipe_radius_gives_center_speed() {
        for mu in [0.0, 37.0, 120.0, 255.0] {
            assert_eq!(track_speed_in_bend(V, R, 0.0, mu).unwrap(), V);
        }
    }

    #[test]
    fn ninety_degree_module_rides_the_centerline() {
        let v = track_speed_in_bend(V, R, PIPE_R, 90.0).unwrap();
        assert!((v - V).abs() / V < 1e-12, "v = {v}");
    }

    #[test]
    fn bend_radius_not_exceeding_pipe_radius_is_an_error() {
        assert!(track_speed_in_bend(V, 100.0, 200.0, 0.0).is_err());
        assert!(track_speed_in_bend(V, 100.0, 100.0, 0.0).is_err());
        assert!(bend_track_speeds(V, 100.0, 200.0, 0.0).is_err());
    }

    #[test]
    fn triple_mu_0() {
        let s = bend_track_speeds(V, R, PIPE_R, 0.0).unwrap();
        assert!((s.v_a - 33.70).abs() < 0.05, "{s:?}");
        assert!((s.v_b - 58.51).abs() < 0.05);
        assert!((s.v_c - 58.51).abs() < 0.05);
    }

    #[test]
    fn triple_mu_30() {
        let s = bend_track_speeds(V, R, PIPE_R, 30.0).unwrap();
        assert!((s.v_a - 35.91).abs() < 0.05, "{s:?}");
        assert!((s.v_b - 64.57).abs() < 0.05);
        assert!((s.v_c - 50.24).abs() < 0.05);
    }

    #[test]
    fn triple_mu_60() {
        let s = bend_track_speeds(V, R, PIPE_R, 60.0).unwrap();
        assert!((s.v_a - 41.97).abs() < 0.05, "{s:?}");
        assert!((s.v_b - 66.78).abs() < 0.05);
        assert!((s.v_c - 41.97).abs() < 0.05);
    }

    #[test]
    fn outermost_fastest_innermost_slowest() {
        let s = bend_track_speeds(V, R, PIPE_R, 0.0).unwrap();
        // module A at 0 deg faces the bend center
        assert!(s.v_a < s.v_b);
        assert!(s.v_a < V && s.v_b > V);
    }

    #[test]
    fn sprocket_conversion() {
        let v = linear_track_speed(12.0, 80.0);
        assert!((v - 50.265).abs() < 1e-3, "v = {v}");
        assert_eq!(linear_track_speed(0.0, 80.0), 0.0);
        assert!((linear_track_speed(24.0, 80.0) - 100.53).abs() < 0.01);
    }
}
