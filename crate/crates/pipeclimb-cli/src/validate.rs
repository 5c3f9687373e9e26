//! Validation against reference observations: build the APE table, apply
//! the per-row gates, and parse external reference files.
//!
//! Reference file format, one observation per line:
//!
//! ```text
//! bend <mu_deg> <vA> <vB> <vC> <quoted_ape_pct> <gated|ungated>
//! straight <mu_deg> <v> <ape_bound_pct> <gated|ungated>
//! ```
//!
//! Bend rows are gated on matching the quoted APE within +-0.1 percentage
//! points; straight rows on staying below the quoted bound.

use std::fmt::Write as _;
use std::path::Path;

use pipeclimb::analysis::{compare_orientation, compare_speeds, PaperReference, SpeedComparison};
use pipeclimb::error::Error;
use pipeclimb::kinematics::TrackSpeeds;
use pipeclimb::reference;
use pipeclimb::sim::RobotConfig;

/// Half-width of the band a gated bend row must land in, percentage points.
pub const BEND_APE_BAND_PCT: f64 = 0.1;

/// One row of the validation table.
#[derive(Debug, Clone)]
pub struct ValidationRow {
    pub label: String,
    pub mu_deg: f64,
    pub comparison: SpeedComparison,
    pub quoted_ape_pct: Option<f64>,
    /// None when the row is informational only.
    pub pass: Option<bool>,
}

/// The bundled observations: three bend orientations plus three straight
/// runs.
pub fn bundled_references() -> (Vec<PaperReference>, Vec<PaperReference>) {
    (
        reference::bend_observations(),
        reference::straight_observations(),
    )
}

/// Compare every reference against the model and gate the rows.
pub fn build_validation(
    bends: &[PaperReference],
    straights: &[PaperReference],
) -> Result<Vec<ValidationRow>, Error> {
    let mut rows = Vec::new();
    let nominal = RobotConfig::default().center_speed_mm_s();

    for r in straights {
        let comparison = compare_speeds(TrackSpeeds::uniform(nominal), r.observed)?;
        let pass = if r.gated {
            Some(
                r.reported_ape_pct
                    .is_none_or(|bound| comparison.max_ape_pct <= bound),
            )
        } else {
            None
        };
        rows.push(ValidationRow {
            label: r.label.clone(),
            mu_deg: r.mu_deg,
            comparison,
            quoted_ape_pct: r.reported_ape_pct,
            pass,
        });
    }

    for r in bends {
        let comparison = compare_orientation(
            r.mu_deg,
            reference::ELBOW_RADIUS_MM,
            reference::PIPE_RADIUS_MM,
            reference::BEND_REFERENCE_SPEED_MM_S,
            r.observed,
        )?;
        let pass = match (r.gated, r.reported_ape_pct) {
            (true, Some(quoted)) => {
                Some((comparison.max_ape_pct - quoted).abs() <= BEND_APE_BAND_PCT)
            }
            _ => None,
        };
        rows.push(ValidationRow {
            label: r.label.clone(),
            mu_deg: r.mu_deg,
            comparison,
            quoted_ape_pct: r.reported_ape_pct,
            pass,
        });
    }
    Ok(rows)
}

pub fn all_gates_pass(rows: &[ValidationRow]) -> bool {
    rows.iter().all(|r| r.pass != Some(false))
}

/// Fixed-width validation table with a verdict column.
pub fn render_validation_table(rows: &[ValidationRow]) -> String {
    let mut out = String::new();
    out.push_str("validation against reference observations (speeds mm/s, APE %)\n");
    let _ = writeln!(
        out,
        "{:<12} {:>6} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>7} {:>7} {:>7} {:>8}",
        "scenario",
        "mu",
        "th_A",
        "th_B",
        "th_C",
        "obs_A",
        "obs_B",
        "obs_C",
        "mean",
        "max",
        "quoted",
        "verdict"
    );
    for r in rows {
        let c = &r.comparison;
        let quoted = r
            .quoted_ape_pct
            .map_or_else(|| "-".to_string(), |q| format!("{q:.1}"));
        let verdict = match r.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "n/a",
        };
        let _ = writeln!(
            out,
            "{:<12} {:>6.1} {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>7.2} {:>7.2} {:>7} {:>8}",
            r.label,
            r.mu_deg,
            c.theoretical.v_a,
            c.theoretical.v_b,
            c.theoretical.v_c,
            c.observed.v_a,
            c.observed.v_b,
            c.observed.v_c,
            c.mean_ape_pct,
            c.max_ape_pct,
            quoted,
            verdict
        );
    }
    out
}

fn err(file: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        file: file.to_string(),
        line,
        msg: msg.into(),
    }
}

fn parse_f64(file: &str, line: usize, what: &str, token: &str) -> Result<f64, Error> {
    token.parse::<f64>().map_err(|_| {
        err(
            file,
            line,
            format!("{what}: expected a number, got `{token}`"),
        )
    })
}

fn parse_gated(file: &str, line: usize, token: &str) -> Result<bool, Error> {
    match token {
        "gated" => Ok(true),
        "ungated" => Ok(false),
        other => Err(err(
            file,
            line,
            format!("expected gated or ungated, got `{other}`"),
        )),
    }
}

/// Parse a reference observation file.
pub fn parse_references_str(
    src: &str,
    file: &str,
) -> Result<(Vec<PaperReference>, Vec<PaperReference>), Error> {
    let mut bends = Vec::new();
    let mut straights = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "bend" => {
                if tokens.len() != 7 {
                    return Err(err(
                        file,
                        lineno,
                        "usage: bend <mu> <vA> <vB> <vC> <quoted_ape> <gated|ungated>",
                    ));
                }
                bends.push(PaperReference {
                    label: "bend".into(),
                    mu_deg: parse_f64(file, lineno, "mu", tokens[1])?,
                    observed: TrackSpeeds {
                        v_a: parse_f64(file, lineno, "vA", tokens[2])?,
                        v_b: parse_f64(file, lineno, "vB", tokens[3])?,
                        v_c: parse_f64(file, lineno, "vC", tokens[4])?,
                    },
                    reported_ape_pct: Some(parse_f64(file, lineno, "quoted APE", tokens[5])?),
                    gated: parse_gated(file, lineno, tokens[6])?,
                });
            }
            "straight" => {
                if tokens.len() != 5 {
                    return Err(err(
                        file,
                        lineno,
                        "usage: straight <mu> <v> <ape_bound> <gated|ungated>",
                    ));
                }
                let v = parse_f64(file, lineno, "v", tokens[2])?;
                straights.push(PaperReference {
                    label: "straight".into(),
                    mu_deg: parse_f64(file, lineno, "mu", tokens[1])?,
                    observed: TrackSpeeds::uniform(v),
                    reported_ape_pct: Some(parse_f64(file, lineno, "APE bound", tokens[3])?),
                    gated: parse_gated(file, lineno, tokens[4])?,
                });
            }
            other => return Err(err(file, lineno, format!("unknown keyword `{other}`"))),
        }
    }
    Ok((bends, straights))
}

pub fn load_references(path: &Path) -> Result<(Vec<PaperReference>, Vec<PaperReference>), Error> {
    let src = std::fs::read_to_string(path)?;
    parse_references_str(&src, &path.display().to_string())
}
