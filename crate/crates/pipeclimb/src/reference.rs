//! Bundled reference data: the benchmark pipe network and the published
//! multibody-simulation observations used to validate this model.
//!
//! The observations are fixed reference values, not something this crate
//! recomputes; validation compares the model's theoretical speeds against
//! them via absolute percentage error.

use crate::analysis::PaperReference;
use crate::geometry::{GravityOrientation, PipeNetwork, PipeSpec, Segment};
use crate::kinematics::TrackSpeeds;

/// Pipe inner radius of the benchmark network, mm.
pub const PIPE_RADIUS_MM: f64 = 137.9;
/// Centerline radius of the 90-degree elbow, mm.
pub const ELBOW_RADIUS_MM: f64 = 418.77;
/// Centerline radius of the 180-degree U-section, mm.
pub const U_SECTION_RADIUS_MM: f64 = 418.79;
/// Robot-center speed used in the published bend-speed triples, mm/s.
pub const BEND_REFERENCE_SPEED_MM_S: f64 = 50.24;
/// Published effective traversal distance for the full-network timing, mm.
pub const EFFECTIVE_DISTANCE_MM: f64 = 3016.49;
/// Published full-network traversal time, s.
pub const TRAVERSAL_TIME_S: f64 = 60.04;
/// APE bound quoted for the straight-run speeds, percent.
pub const STRAIGHT_APE_BOUND_PCT: f64 = 2.2;

/// The benchmark network: vertical climb, 90-degree elbow, horizontal run,
/// 180-degree U-section, horizontal run.
pub fn paper_network() -> PipeNetwork {
    PipeNetwork::new(
        PipeSpec::new(PIPE_RADIUS_MM).expect("valid pipe radius"),
        vec![
            Segment::straight(550.0, GravityOrientation::Vertical).expect("valid segment"),
            Segment::bend(ELBOW_RADIUS_MM, 90.0, "elbow").expect("valid segment"),
            Segment::straight(350.0, GravityOrientation::Horizontal).expect("valid segment"),
            Segment::bend(U_SECTION_RADIUS_MM, 180.0, "u_section").expect("valid segment"),
            Segment::straight(150.0, GravityOrientation::Horizontal).expect("valid segment"),
        ],
    )
    .expect("benchmark network is valid")
}

/// Source text of the benchmark network in the network-file format.
pub const PAPER_NETWORK_FILE: &str = "\
# benchmark pipe network
pipe_radius 137.9
straight 550 vertical
bend 418.77 90 elbow
straight 350 horizontal
bend 418.79 180 u_section
straight 150 horizontal
";

/// Published track-speed observations inside the elbow, one per insertion
/// orientation, with the APE each was quoted at.
pub fn bend_observations() -> Vec<PaperReference> {
    vec![
        PaperReference {
            label: "elbow".into(),
            mu_deg: 0.0,
            observed: TrackSpeeds {
                v_a: 33.62,
                v_b: 58.7,
                v_c: 57.8,
            },
            reported_ape_pct: Some(1.2),
            gated: true,
        },
        PaperReference {
            label: "elbow".into(),
            mu_deg: 30.0,
            observed: TrackSpeeds {
                v_a: 37.3,
                v_b: 63.8,
                v_c: 50.3,
            },
            reported_ape_pct: Some(3.8),
            gated: true,
        },
        // the published 2.5% for this case is not reproducible from the
        // quoted speeds, so it is reported but never gated on
        PaperReference {
            label: "elbow".into(),
            mu_deg: 60.0,
            observed: TrackSpeeds {
                v_a: 40.2,
                v_b: 68.5,
                v_c: 41.3,
            },
            reported_ape_pct: Some(2.5),
            gated: false,
        },
    ]
}

/// Published straight-run speeds (all three tracks equal), one per
/// insertion orientation. Gated against [`STRAIGHT_APE_BOUND_PCT`].
pub fn straight_observations() -> Vec<PaperReference> {
    let speeds = [(0.0, 50.03), (30.0, 50.22), (60.0, 51.36)];
    speeds
        .into_iter()
        .map(|(mu_deg, v)| PaperReference {
            label: "straight".into(),
            mu_deg,
            observed: TrackSpeeds::uniform(v),
            reported_ape_pct: Some(STRAIGHT_APE_BOUND_PCT),
            gated: true,
        })
        .collect()
}
