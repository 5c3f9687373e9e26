//! Validation and reporting: absolute percentage error against reference
//! observations, summary tables, and speed-profile plots.
//!
//! Rendering is a pure function of its inputs; identical inputs produce
//! byte-identical text, CSV, and SVG. File writing happens only when an
//! output directory is supplied, and callers must not share an output path
//! between concurrent writers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::kinematics::{bend_track_speeds, TrackSpeeds};
use crate::sim::TraversalReport;

/// Absolute percentage error of an observation against a theoretical value:
/// `100 * |observed - theoretical| / |theoretical|`.
pub fn ape(theoretical: f64, observed: f64) -> Result<f64> {
    if theoretical == 0.0 {
        return Err(Error::UndefinedApe);
    }
    Ok(100.0 * (observed - theoretical).abs() / theoretical.abs())
}

/// Per-track APE of an observed speed triple against a theoretical one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedComparison {
    pub theoretical: TrackSpeeds,
    pub observed: TrackSpeeds,
    pub per_track_ape_pct: [f64; 3],
    pub mean_ape_pct: f64,
    /// The headline figure; quoted per-scenario errors match the max.
    pub max_ape_pct: f64,
}

/// Compare two speed triples track by track.
pub fn compare_speeds(theoretical: TrackSpeeds, observed: TrackSpeeds) -> Result<SpeedComparison> {
    let th = theoretical.as_array();
    let obs = observed.as_array();
    let per_track_ape_pct = [
        ape(th[0], obs[0])?,
        ape(th[1], obs[1])?,
        ape(th[2], obs[2])?,
    ];
    let mean_ape_pct = per_track_ape_pct.iter().sum::<f64>() / 3.0;
    let max_ape_pct = per_track_ape_pct.iter().cloned().fold(0.0, f64::max);
    Ok(SpeedComparison {
        theoretical,
        observed,
        per_track_ape_pct,
        mean_ape_pct,
        max_ape_pct,
    })
}

/// Compare observed bend speeds against the no-slip theoretical triple for
/// orientation `mu_deg` in a bend of radius `bend_radius_mm`.
pub fn compare_orientation(
    mu_deg: f64,
    bend_radius_mm: f64,
    pipe_radius_mm: f64,
    v_mm_s: f64,
    observed: TrackSpeeds,
) -> Result<SpeedComparison> {
    let theoretical = bend_track_speeds(v_mm_s, bend_radius_mm, pipe_radius_mm, mu_deg)?;
    compare_speeds(theoretical, observed)
}

/// A published observation the model is validated against.
#[derive(Debug, Clone, PartialEq)]
pub struct PaperReference {
    pub label: String,
    pub mu_deg: f64,
    pub observed: TrackSpeeds,
    /// The APE quoted alongside the observation, percent.
    pub reported_ape_pct: Option<f64>,
    /// Whether validation gates on this row.
    pub gated: bool,
}

/// A traversal run labeled for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub label: String,
    pub report: TraversalReport,
}

/// A speed comparison labeled for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub label: String,
    pub mu_deg: f64,
    pub comparison: SpeedComparison,
    pub reported_ape_pct: Option<f64>,
}

/// Rendered summary: fixed-width text, CSV, and any plot files written.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub text: String,
    pub csv: String,
    pub plot_files: Vec<PathBuf>,
}

fn sanitize_file_stem(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Render the summary table for a set of runs and comparisons.
///
/// At least one of the two lists must be non-empty. When `plot_dir` is
/// given, one `<label>_speeds.svg` speed-profile plot is written per run.
pub fn render_report(
    reports: &[ReportRow],
    comparisons: &[ComparisonRow],
    plot_dir: Option<&Path>,
) -> Result<Rendered> {
    if reports.is_empty() && comparisons.is_empty() {
        return Err(Error::EmptyReport);
    }

    let mut text = String::new();
    let mut csv = String::new();

    if !reports.is_empty() {
        text.push_str("traversal runs\n");
        let _ = writeln!(
            text,
            "{:<28} {:<8} {:>6} {:>10} {:>12} {:>8} {:>8} {:>8} {:>14}",
            "scenario",
            "mode",
            "mu",
            "time_s",
            "distance_mm",
            "vA_mm_s",
            "vB_mm_s",
            "vC_mm_s",
            "max|slip|_mm_s"
        );
        csv.push_str(
            "scenario,mode,mu_deg,time_s,distance_mm,mean_vA_mm_s,mean_vB_mm_s,mean_vC_mm_s,max_abs_slip_mm_s\n",
        );
        for row in reports {
            let r = &row.report;
            let max_slip = r
                .summary
                .max_abs_slip_mm_s
                .iter()
                .cloned()
                .fold(0.0, f64::max);
            let [va, vb, vc] = r.summary.mean_track_speed_mm_s;
            let _ = writeln!(
                text,
                "{:<28} {:<8} {:>6.1} {:>10.3} {:>12.3} {:>8.2} {:>8.2} {:>8.2} {:>14.3}",
                row.label,
                r.mode.as_str(),
                r.orientation_mu_deg,
                r.total_time_s,
                r.summary.distance_mm,
                va,
                vb,
                vc,
                max_slip
            );
            let _ = writeln!(
                csv,
                "{},{},{:.1},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
                row.label,
                r.mode.as_str(),
                r.orientation_mu_deg,
                r.total_time_s,
                r.summary.distance_mm,
                va,
                vb,
                vc,
                max_slip
            );
        }
    }

    if !comparisons.is_empty() {
        if !text.is_empty() {
            text.push('\n');
        }
        text.push_str("speed validation (mm/s, APE %)\n");
        let _ =
            writeln!(
            text,
            "{:<16} {:>6} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}",
            "scenario", "mu", "th_A", "th_B", "th_C", "obs_A", "obs_B", "obs_C", "apeA",
            "apeB", "apeC", "mean", "max", "quoted"
        );
        csv.push_str(
            "scenario,mu_deg,th_A,th_B,th_C,obs_A,obs_B,obs_C,ape_A_pct,ape_B_pct,ape_C_pct,mean_ape_pct,max_ape_pct,quoted_ape_pct\n",
        );
        for row in comparisons {
            let c = &row.comparison;
            let quoted = row
                .reported_ape_pct
                .map_or_else(|| "-".to_string(), |q| format!("{q:.1}"));
            let _ = writeln!(
                text,
                "{:<16} {:>6.1} {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7}",
                row.label,
                row.mu_deg,
                c.theoretical.v_a,
                c.theoretical.v_b,
                c.theoretical.v_c,
                c.observed.v_a,
                c.observed.v_b,
                c.observed.v_c,
                c.per_track_ape_pct[0],
                c.per_track_ape_pct[1],
                c.per_track_ape_pct[2],
                c.mean_ape_pct,
                c.max_ape_pct,
                quoted
            );
            let _ = writeln!(
                csv,
                "{},{:.1},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{}",
                row.label,
                row.mu_deg,
                c.theoretical.v_a,
                c.theoretical.v_b,
                c.theoretical.v_c,
                c.observed.v_a,
                c.observed.v_b,
                c.observed.v_c,
                c.per_track_ape_pct[0],
                c.per_track_ape_pct[1],
                c.per_track_ape_pct[2],
                c.mean_ape_pct,
                c.max_ape_pct,
                quoted
            );
        }
    }

    let mut plot_files = Vec::new();
    if let Some(dir) = plot_dir {
        std::fs::create_dir_all(dir)?;
        for row in reports {
            let svg = speed_plot_svg(&row.report, &row.label);
            let path = dir.join(format!("{}_speeds.svg", sanitize_file_stem(&row.label)));
            std::fs::write(&path, svg)?;
            plot_files.push(path);
        }
    }

    Ok(Rendered {
        text,
        csv,
        plot_files,
    })
}

/// Render the speed-vs-time profile of a run as an SVG document.
pub fn speed_plot_svg(report: &TraversalReport, title: &str) -> String {
    const W: f64 = 860.0;
    const H: f64 = 480.0;
    const ML: f64 = 70.0; // left margin
    const MR: f64 = 24.0;
    const MT: f64 = 42.0;
    const MB: f64 = 56.0;
    let plot_w = W - ML - MR;
    let plot_h = H - MT - MB;

    let t_max = report.total_time_s.max(1e-9);
    let v_max = report
        .series
        .iter()
        .flat_map(|s| s.speeds.as_array())
        .fold(0.0, f64::max)
        .max(1e-9)
        * 1.08;

    let x = |t: f64| ML + t / t_max * plot_w;
    let y = |v: f64| MT + plot_h - v / v_max * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {W} {H}" font-family="monospace" font-size="13">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{} track speeds</text>"#,
        W / 2.0,
        xml_escape(title)
    );

    // axes with 5 ticks each
    for i in 0..=5 {
        let frac = i as f64 / 5.0;
        let tx = x(frac * t_max);
        let ty = y(frac * v_max);
        let _ = writeln!(
            svg,
            r##"<line x1="{tx:.1}" y1="{:.1}" x2="{tx:.1}" y2="{:.1}" stroke="#ddd"/>"##,
            MT,
            MT + plot_h
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{:.1}" y1="{ty:.1}" x2="{:.1}" y2="{ty:.1}" stroke="#ddd"/>"##,
            ML,
            ML + plot_w
        );
        let _ = writeln!(
            svg,
            r#"<text x="{tx:.1}" y="{:.1}" text-anchor="middle">{:.1}</text>"#,
            MT + plot_h + 18.0,
            frac * t_max
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{:.1}</text>"#,
            ML - 6.0,
            ty + 4.0,
            frac * v_max
        );
    }
    let _ = writeln!(
        svg,
        r#"<rect x="{ML}" y="{MT}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">t (s)</text>"#,
        ML + plot_w / 2.0,
        H - 14.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.1}" transform="rotate(-90 16 {:.1})" text-anchor="middle">track speed (mm/s)</text>"#,
        MT + plot_h / 2.0,
        MT + plot_h / 2.0
    );

    let tracks = [("A", "#d62728"), ("B", "#2ca02c"), ("C", "#1f77b4")];
    for (i, (name, color)) in tracks.iter().enumerate() {
        let mut points = String::new();
        for s in &report.series {
            let _ = write!(points, "{:.2},{:.2} ", x(s.t_s), y(s.speeds.as_array()[i]));
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            points.trim_end()
        );
        let lx = ML + 12.0 + i as f64 * 90.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="3"/>"#,
            MT + 12.0,
            lx + 22.0,
            MT + 12.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}">track {name}</text>"#,
            lx + 28.0,
            MT + 16.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
