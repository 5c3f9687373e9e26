//! Parser for the plain-text pipe-network description format.
//!
//! One directive per line, `#` comments and blank lines ignored:
//!
//! ```text
//! pipe_radius 137.9
//! straight 550 vertical
//! bend 418.77 90 elbow
//! straight 350 horizontal
//! bend 418.79 180 u_section
//! straight 150 horizontal
//! ```
//!
//! `pipe_radius` must appear exactly once. A bend's trailing label is
//! optional free text. Unknown keywords are rejected with the offending
//! line number.

use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{GravityOrientation, PipeNetwork, PipeSpec, Segment};

fn parse_err(file: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        file: file.to_string(),
        line,
        msg: msg.into(),
    }
}

fn parse_f64(file: &str, line: usize, what: &str, token: &str) -> Result<f64> {
    token.parse::<f64>().map_err(|_| {
        parse_err(
            file,
            line,
            format!("{what}: expected a number, got `{token}`"),
        )
    })
}

/// Parse a network from source text. `file` labels error messages.
pub fn parse_network_str(src: &str, file: &str) -> Result<PipeNetwork> {
    let mut pipe_radius: Option<(f64, usize)> = None;
    // (segment, source line) so post-parse validation can point at the line
    let mut segments: Vec<(Segment, usize)> = Vec::new();

    for (idx, raw) in src.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().unwrap();
        let rest: Vec<&str> = tokens.collect();
        match keyword {
            "pipe_radius" => {
                if pipe_radius.is_some() {
                    return Err(parse_err(file, lineno, "duplicate pipe_radius"));
                }
                if rest.len() != 1 {
                    return Err(parse_err(file, lineno, "usage: pipe_radius <mm>"));
                }
                let r = parse_f64(file, lineno, "pipe_radius", rest[0])?;
                pipe_radius = Some((r, lineno));
            }
            "straight" => {
                if rest.len() != 2 {
                    return Err(parse_err(
                        file,
                        lineno,
                        "usage: straight <length_mm> <vertical|horizontal>",
                    ));
                }
                let length = parse_f64(file, lineno, "straight length", rest[0])?;
                let orientation = match rest[1] {
                    "vertical" => GravityOrientation::Vertical,
                    "horizontal" => GravityOrientation::Horizontal,
                    other => {
                        return Err(parse_err(
                            file,
                            lineno,
                            format!("orientation must be vertical or horizontal, got `{other}`"),
                        ))
                    }
                };
                let seg = Segment::straight(length, orientation)
                    .map_err(|e| parse_err(file, lineno, e.to_string()))?;
                segments.push((seg, lineno));
            }
            "bend" => {
                if rest.len() < 2 {
                    return Err(parse_err(
                        file,
                        lineno,
                        "usage: bend <radius_mm> <sweep_deg> [label]",
                    ));
                }
                let radius = parse_f64(file, lineno, "bend radius", rest[0])?;
                let sweep = parse_f64(file, lineno, "bend sweep", rest[1])?;
                let label = rest[2..].join(" ");
                let seg = Segment::bend(radius, sweep, label)
                    .map_err(|e| parse_err(file, lineno, e.to_string()))?;
                segments.push((seg, lineno));
            }
            other => {
                return Err(parse_err(
                    file,
                    lineno,
                    format!("unknown keyword `{other}`"),
                ));
            }
        }
    }

    let (radius, _) = pipe_radius.ok_or_else(|| {
        parse_err(
            file,
            segments.last().map_or(1, |(_, l)| *l),
            "missing pipe_radius directive",
        )
    })?;
    let spec = PipeSpec::new(radius).map_err(|e| {
        let line = pipe_radius.map_or(1, |(_, l)| l);
        parse_err(file, line, e.to_string())
    })?;

    // check bends against the pipe radius, blaming the bend's own line
    for (seg, lineno) in &segments {
        if let Segment::Bend { bend_radius_mm, .. } = seg {
            if *bend_radius_mm <= spec.inner_radius_mm {
                return Err(parse_err(
                    file,
                    *lineno,
                    format!(
                        "bend radius {bend_radius_mm} mm must exceed pipe inner radius {} mm",
                        spec.inner_radius_mm
                    ),
                ));
            }
        }
    }

    PipeNetwork::new(spec, segments.into_iter().map(|(s, _)| s).collect())
}

/// Load a network description from a file.
pub fn load_network(path: &Path) -> Result<PipeNetwork> {
    let src = std::fs::read_to_string(path)?;
    parse_network_str(&src, &path.display().to_string())
}
