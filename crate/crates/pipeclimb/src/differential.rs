//! Kinematics and torque relations of the equal-output three-output
//! differential.
//!
//! The mechanism couples one input to three outputs through three two-output
//! and three two-input bevel differentials arranged at 120 degrees. Two laws
//! govern it:
//!
//! ```text
//! ring speed    w_ring = k * (w_side1 + w_side2) / 2
//! output speed  w_out  = j * w_u / k        (equal or zero load)
//! ```
//!
//! Ring speeds are pinned to the input, so the *sum* of the three output
//! speeds is fixed at `3 * j * w_u / k` no matter how load shifts between
//! them. Under unequal load, the outputs redistribute speed around that sum;
//! under equal load all three run at `j * w_u / k` and carry torque
//! `k * tau_u / (3 j)` each.
//!
//! Only the quotient `j / k` is observable at the outputs, so the individual
//! ratios are configuration, not measurement.
//!
//! Everything here is a pure function over an immutable config; concurrent
//! use is unrestricted.

use crate::error::{Error, Result};

/// Angular speed conversion, rpm to rad/s.
pub const RPM_TO_RAD_PER_S: f64 = 2.0 * std::f64::consts::PI / 60.0;

/// Rotational inertias of the internal gear stages.
///
/// The two-stage form of the dynamic torque law uses `i01` and `i03`; the
/// collapsed single-stage form uses `i1`. No published values exist, so all
/// default to zero (pure kinematics).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inertias {
    pub i1: f64,
    pub i01: f64,
    pub i03: f64,
}

impl Default for Inertias {
    fn default() -> Self {
        Self {
            i1: 0.0,
            i01: 0.0,
            i03: 0.0,
        }
    }
}

/// Gear ratios, input state, and inertias of the differential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferentialConfig {
    /// Ring-to-output gear ratio `j`.
    pub ratio_j: f64,
    /// Input/ring-to-side coupling ratio `k`.
    pub ratio_k: f64,
    /// Input angular speed, rpm.
    pub input_speed_rpm: f64,
    /// Input torque, N mm (any consistent torque unit works).
    pub input_torque: f64,
    pub inertias: Inertias,
}

impl Default for DifferentialConfig {
    /// 120 rpm in, j/k = 0.1, so 12 rpm at each output under equal load.
    fn default() -> Self {
        Self {
            ratio_j: 1.0,
            ratio_k: 10.0,
            input_speed_rpm: 120.0,
            input_torque: 0.0,
            inertias: Inertias::default(),
        }
    }
}

impl DifferentialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ratio_j <= 0.0 || !self.ratio_j.is_finite() {
            return Err(Error::Config(format!(
                "gear ratio j must be positive and finite, got {}",
                self.ratio_j
            )));
        }
        if self.ratio_k <= 0.0 || !self.ratio_k.is_finite() {
            return Err(Error::Config(format!(
                "gear ratio k must be positive and finite, got {}",
                self.ratio_k
            )));
        }
        if self.input_speed_rpm < 0.0 || !self.input_speed_rpm.is_finite() {
            return Err(Error::Config(format!(
                "input speed must be non-negative and finite, got {} rpm",
                self.input_speed_rpm
            )));
        }
        Ok(())
    }

    /// Speeds and torques of all three outputs under equal (or zero) load.
    pub fn equal_load_state(&self) -> OutputState {
        let speed = equal_load_output_speed(self);
        let torque = steady_state_output_torque(self);
        OutputState {
            speeds_rpm: [speed; 3],
            torques: [torque; 3],
        }
    }
}

/// Speeds and torques at the three outputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputState {
    pub speeds_rpm: [f64; 3],
    pub torques: [f64; 3],
}

/// Ring gear speed of a two-output differential stage: the ratio-scaled mean
/// of its two side gears, which are free to spin at different rates.
pub fn ring_speed_from_sides(ratio_k: f64, side1_rpm: f64, side2_rpm: f64) -> f64 {
    ratio_k * (side1_rpm + side2_rpm) / 2.0
}

/// Output speed under equal or zero load: `j * w_u / k`, rpm.
pub fn equal_load_output_speed(cfg: &DifferentialConfig) -> f64 {
    cfg.ratio_j * cfg.input_speed_rpm / cfg.ratio_k
}

/// Per-output torque once all internal accelerations have settled:
/// `k * tau_u / (3 j)`.
pub fn steady_state_output_torque(cfg: &DifferentialConfig) -> f64 {
    cfg.ratio_k * cfg.input_torque / (3.0 * cfg.ratio_j)
}

/// Per-output torque with the two internal gear stages still accelerating:
/// `k * tau_u / (3 j) - (i01 * a07 + i03 * a08) / j`.
///
/// `accel_07` and `accel_08` are the angular accelerations (rad/s^2) of the
/// gear stages carrying inertias `i01` and `i03`. They are direct inputs;
/// the model does not integrate internal gear state.
pub fn dynamic_output_torque(cfg: &DifferentialConfig, accel_07: f64, accel_08: f64) -> f64 {
    steady_state_output_torque(cfg)
        - (cfg.inertias.i01 * accel_07 + cfg.inertias.i03 * accel_08) / cfg.ratio_j
}

/// Single-stage form of the dynamic torque law:
/// `k * tau_u / (3 j) - 2 * i1 * a1 / j`.
///
/// The two-stage and single-stage forms are both kept; which one matches the
/// physical device depends on unpublished internals.
pub fn dynamic_output_torque_single_stage(cfg: &DifferentialConfig, accel_1: f64) -> f64 {
    steady_state_output_torque(cfg) - 2.0 * cfg.inertias.i1 * accel_1 / cfg.ratio_j
}

/// Distribute the three output speeds in proportion to positive demand
/// weights, holding the kinematic sum at `3 * j * w_u / k`.
///
/// Equal weights return three equal speeds. The scale factor is computed
/// once so that equal-weight allocation is exact.
pub fn allocate_output_speeds(cfg: &DifferentialConfig, weights: [f64; 3]) -> Result<[f64; 3]> {
    for (i, w) in weights.iter().enumerate() {
        if *w <= 0.0 || !w.is_finite() {
            return Err(Error::AllocationWeight(format!(
                "demand weight {i} must be positive and finite, got {w}"
            )));
        }
    }
    let sum = weights[0] + weights[1] + weights[2];
    let total = 3.0 * equal_load_output_speed(cfg);
    let scale = total / sum;
    Ok([weights[0] * scale, weights[1] * scale, weights[2] * scale])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg_120_j1_k10() -> DifferentialConfig {
        DifferentialConfig::default()
    }

    #[test]
    fn ring_speed_is_scaled_mean_of_sides() {
        assert_eq!(ring_speed_from_sides(1.0, 10.0, 14.0), 12.0);
        assert_eq!(ring_speed_from_sides(1.0, 12.0, 12.0), 12.0);
        assert_eq!(ring_speed_from_sides(2.0, 10.0, 14.0), 24.0);
    }

    #[test]
    fn equal_load_speed_is_j_wu_over_k() {
        // 120 rpm in, j/k = 0.1 -> exactly 12 rpm out
        assert_eq!(equal_load_output_speed(&cfg_120_j1_k10()), 12.0);

        let mut cfg = cfg_120_j1_k10();
        cfg.input_speed_rpm = 0.0;
        assert_eq!(equal_load_output_speed(&cfg), 0.0);

        let cfg = DifferentialConfig {
            ratio_j: 1.0,
            ratio_k: 2.0,
            input_speed_rpm: 60.0,
            ..Default::default()
        };
        assert_eq!(equal_load_output_speed(&cfg), 30.0);
    }

    #[test]
    fn steady_state_torque() {
        let cfg = DifferentialConfig {
            ratio_j: 0.1,
            ratio_k: 1.0,
            input_torque: 30.0,
            ..Default::default()
        };
        assert!((steady_state_output_torque(&cfg) - 100.0).abs() < 1e-12);

        let zero = DifferentialConfig {
            input_torque: 0.0,
            ..cfg
        };
        assert_eq!(steady_state_output_torque(&zero), 0.0);
    }

    #[test]
    fn steady_state_power_is_conserved() {
        // 3 outputs x 100 torque x 12 rpm == input 30 torque x 120 rpm
        let cfg = DifferentialConfig {
            ratio_j: 0.1,
            ratio_k: 1.0,
            input_speed_rpm: 120.0,
            input_torque: 30.0,
            ..Default::default()
        };
        let out = cfg.equal_load_state();
        let p_out: f64 = out
            .speeds_rpm
            .iter()
            .zip(out.torques.iter())
            .map(|(w, t)| t * w * RPM_TO_RAD_PER_S)
            .sum();
        let p_in = cfg.input_torque * cfg.input_speed_rpm * RPM_TO_RAD_PER_S;
        assert!((p_out - p_in).abs() / p_in < 1e-12, "{p_out} vs {p_in}");
    }

    #[test]
    fn dynamic_torque_reduces_to_steady_state() {
        let cfg = DifferentialConfig {
            ratio_j: 0.1,
            ratio_k: 1.0,
            input_torque: 30.0,
            inertias: Inertias {
                i1: 0.0,
                i01: 2.0,
                i03: 1.0,
            },
            ..Default::default()
        };
        assert_eq!(
            dynamic_output_torque(&cfg, 0.0, 0.0),
            steady_state_output_torque(&cfg)
        );
    }

    #[test]
    fn dynamic_torque_substitution() {
        let cfg = DifferentialConfig {
            ratio_j: 0.1,
            ratio_k: 1.0,
            input_torque: 30.0,
            inertias: Inertias {
                i1: 0.0,
                i01: 2.0,
                i03: 1.0,
            },
            ..Default::default()
        };
        // 100 - (2*1 + 1*2)/0.1 = 100 - 40
        assert!((dynamic_output_torque(&cfg, 1.0, 2.0) - 60.0).abs() < 1e-9);
    }

    #[test]
    fn zero_inertia_ignores_accelerations() {
        let cfg = DifferentialConfig {
            ratio_j: 0.1,
            ratio_k: 1.0,
            input_torque: 30.0,
            ..Default::default()
        };
        for accel in [-100.0, 0.0, 573.2] {
            assert_eq!(
                dynamic_output_torque(&cfg, accel, -accel),
                steady_state_output_torque(&cfg)
            );
            assert_eq!(
                dynamic_output_torque_single_stage(&cfg, accel),
                steady_state_output_torque(&cfg)
            );
        }
    }

    #[test]
    fn dynamic_torque_is_affine_in_each_acceleration() {
        let cfg = DifferentialConfig {
            ratio_j: 0.4,
            ratio_k: 3.0,
            input_torque: 17.0,
            inertias: Inertias {
                i1: 0.7,
                i01: 2.5,
                i03: 1.25,
            },
            ..Default::default()
        };
        let h = 1.0;
        let slope_07 = dynamic_output_torque(&cfg, h, 0.0) - dynamic_output_torque(&cfg, 0.0, 0.0);
        let slope_08 = dynamic_output_torque(&cfg, 0.0, h) - dynamic_output_torque(&cfg, 0.0, 0.0);
        assert!((slope_07 - (-cfg.inertias.i01 / cfg.ratio_j)).abs() < 1e-12);
        assert!((slope_08 - (-cfg.inertias.i03 / cfg.ratio_j)).abs() < 1e-12);
        let slope_1 = dynamic_output_torque_single_stage(&cfg, h)
            - dynamic_output_torque_single_stage(&cfg, 0.0);
        assert!((slope_1 - (-2.0 * cfg.inertias.i1 / cfg.ratio_j)).abs() < 1e-12);
    }

    #[test]
    fn equal_weights_allocate_equal_speeds_exactly() {
        let speeds = allocate_output_speeds(&cfg_120_j1_k10(), [1.0, 1.0, 1.0]).unwrap();
        assert_eq!(speeds, [12.0, 12.0, 12.0]);
    }

    #[test]
    fn allocation_scales_weights_to_the_kinematic_sum() {
        let speeds = allocate_output_speeds(&cfg_120_j1_k10(), [0.6706, 1.1647, 1.1647]).unwrap();
        assert!((speeds[0] - 8.047).abs() < 1e-3, "{speeds:?}");
        assert!((speeds[1] - 13.976).abs() < 1e-3);
        assert!((speeds[2] - 13.976).abs() < 1e-3);
        let sum: f64 = speeds.iter().sum();
        assert!((sum - 36.0).abs() / 36.0 < 1e-12);
    }

    #[test]
    fn allocation_sum_is_exact_for_simple_ratios() {
        let speeds = allocate_output_speeds(&cfg_120_j1_k10(), [2.0, 1.0, 1.0]).unwrap();
        assert_eq!(speeds.iter().sum::<f64>(), 36.0);
        assert_eq!(speeds, [18.0, 9.0, 9.0]);
    }

    #[test]
    fn non_positive_weights_are_rejected() {
        let cfg = cfg_120_j1_k10();
        assert!(allocate_output_speeds(&cfg, [0.0, 1.0, 1.0]).is_err());
        assert!(allocate_output_speeds(&cfg, [1.0, -2.0, 1.0]).is_err());
        assert!(allocate_output_speeds(&cfg, [1.0, 1.0, f64::NAN]).is_err());
        assert!(allocate_output_speeds(&cfg, [1.0, f64::INFINITY, 1.0]).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(DifferentialConfig::default().validate().is_ok());
        let bad = DifferentialConfig {
            ratio_k: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = DifferentialConfig {
            input_speed_rpm: -1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
