//! Scenario config files: one `key value...` pair per line, `#` comments.
//!
//! ```text
//! name paper_network
//! network paper_network.pipe
//! mu_deg 0 30 60
//! mode passive
//! dt 0.01
//! effective_distance_mm 3016.49
//! ```
//!
//! The network path is resolved relative to the scenario file. Robot,
//! differential, and spring keys override the defaults; unknown keys are
//! rejected with the offending line number.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use pipeclimb::error::Error;
use pipeclimb::geometry::PipeNetwork;
use pipeclimb::kinematics::ModuleOrientation;
use pipeclimb::netfile;
use pipeclimb::sim::{RobotConfig, SimMode, SimSettings};

/// A parsed scenario: the network plus the sweep over orientations and
/// modes to run on it.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub network: PipeNetwork,
    pub mu_list_deg: Vec<f64>,
    pub modes: Vec<SimMode>,
    pub robot: RobotConfig,
    pub dt_s: f64,
    pub record_stride: usize,
    pub effective_distance_mm: Option<f64>,
    pub out_dir: Option<PathBuf>,
}

impl Scenario {
    pub fn settings_for(&self, mode: SimMode) -> SimSettings {
        SimSettings {
            dt_s: self.dt_s,
            mode,
            effective_distance_override_mm: self.effective_distance_mm,
            record_stride: self.record_stride,
        }
    }

    /// `<name>_mu<mu>_<mode>`, the key for all files of one run.
    pub fn run_label(&self, mu_deg: f64, mode: SimMode) -> String {
        format!("{}_mu{}_{}", self.name, mu_deg, mode.as_str())
    }
}

fn err(file: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        file: file.to_string(),
        line,
        msg: msg.into(),
    }
}

fn one_f64(file: &str, line: usize, key: &str, values: &[&str]) -> Result<f64, Error> {
    if values.len() != 1 {
        return Err(err(file, line, format!("{key} expects exactly one value")));
    }
    values[0].parse::<f64>().map_err(|_| {
        err(
            file,
            line,
            format!("{key}: expected a number, got `{}`", values[0]),
        )
    })
}

/// Parse a scenario from source text. Relative network paths resolve
/// against `base_dir`; `file` labels error messages.
pub fn parse_scenario_str(
    src: &str,
    file: &str,
    base_dir: &Path,
    default_name: &str,
) -> Result<Scenario, Error> {
    let mut name = default_name.to_string();
    let mut network: Option<PipeNetwork> = None;
    let mut mu_list: Vec<f64> = Vec::new();
    let mut modes: Vec<SimMode> = Vec::new();
    let mut robot = RobotConfig::default();
    let mut dt_s = 0.01;
    let mut record_stride = 1usize;
    let mut effective_distance_mm = None;
    let mut out_dir = None;
    let mut seen: HashSet<String> = HashSet::new();

    for (idx, raw) in src.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let key = tokens.next().unwrap();
        let values: Vec<&str> = tokens.collect();
        if values.is_empty() {
            return Err(err(file, lineno, format!("{key} is missing a value")));
        }
        if !seen.insert(key.to_string()) {
            return Err(err(file, lineno, format!("duplicate key `{key}`")));
        }
        match key {
            "name" => name = values.join("_"),
            "network" => {
                let rel = PathBuf::from(values.join(" "));
                let path = if rel.is_absolute() {
                    rel
                } else {
                    base_dir.join(rel)
                };
                network = Some(netfile::load_network(&path)?);
            }
            "mu_deg" => {
                for v in &values {
                    let mu: f64 = v.parse().map_err(|_| {
                        err(
                            file,
                            lineno,
                            format!("mu_deg: expected a number, got `{v}`"),
                        )
                    })?;
                    mu_list.push(ModuleOrientation::new(mu).deg());
                }
            }
            "mode" => {
                if values.len() != 1 {
                    return Err(err(file, lineno, "mode expects exactly one value"));
                }
                modes = match values[0] {
                    "passive" => vec![SimMode::PassiveDifferential],
                    "fixed" => vec![SimMode::FixedEqualSpeed],
                    "both" => vec![SimMode::PassiveDifferential, SimMode::FixedEqualSpeed],
                    other => {
                        return Err(err(
                            file,
                            lineno,
                            format!("mode must be passive, fixed, or both, got `{other}`"),
                        ))
                    }
                };
            }
            "dt" => dt_s = one_f64(file, lineno, key, &values)?,
            "record_stride" => {
                record_stride = values[0].parse::<usize>().map_err(|_| {
                    err(
                        file,
                        lineno,
                        format!(
                            "record_stride: expected a positive integer, got `{}`",
                            values[0]
                        ),
                    )
                })?;
            }
            "effective_distance_mm" => {
                effective_distance_mm = Some(one_f64(file, lineno, key, &values)?)
            }
            "out_dir" => out_dir = Some(PathBuf::from(values.join(" "))),
            "robot_length_mm" => robot.robot_length_mm = one_f64(file, lineno, key, &values)?,
            "sprocket_mm" => robot.sprocket_diameter_mm = one_f64(file, lineno, key, &values)?,
            "gear_j" => robot.differential.ratio_j = one_f64(file, lineno, key, &values)?,
            "gear_k" => robot.differential.ratio_k = one_f64(file, lineno, key, &values)?,
            "input_rpm" => {
                robot.differential.input_speed_rpm = one_f64(file, lineno, key, &values)?
            }
            "input_torque" => {
                robot.differential.input_torque = one_f64(file, lineno, key, &values)?
            }
            "inertia_I1" => robot.differential.inertias.i1 = one_f64(file, lineno, key, &values)?,
            "inertia_I01" => robot.differential.inertias.i01 = one_f64(file, lineno, key, &values)?,
            "inertia_I03" => robot.differential.inertias.i03 = one_f64(file, lineno, key, &values)?,
            "spring_preload_mm" => robot.springs.preload_mm = one_f64(file, lineno, key, &values)?,
            "spring_bend_extra_mm" => {
                robot.springs.bend_extra_mm = one_f64(file, lineno, key, &values)?
            }
            "spring_max_mm" => {
                robot.springs.max_compression_mm = one_f64(file, lineno, key, &values)?
            }
            "linkage_span_mm" => {
                robot.springs.linkage_span_mm = one_f64(file, lineno, key, &values)?
            }
            other => return Err(err(file, lineno, format!("unknown keyword `{other}`"))),
        }
    }

    let network = network.ok_or_else(|| err(file, 1, "missing `network` directive"))?;
    if mu_list.is_empty() {
        mu_list.push(0.0);
    }
    if modes.is_empty() {
        modes = vec![SimMode::PassiveDifferential];
    }
    Ok(Scenario {
        name,
        network,
        mu_list_deg: mu_list,
        modes,
        robot,
        dt_s,
        record_stride,
        effective_distance_mm,
        out_dir,
    })
}

/// Load a scenario file; the default name is the file stem.
pub fn load_scenario(path: &Path) -> Result<Scenario, Error> {
    let src = std::fs::read_to_string(path)?;
    let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
    let default_name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".to_string());
    parse_scenario_str(&src, &path.display().to_string(), base_dir, &default_name)
}
