//! Explicit competitor networks with closed-form energies.
//!
//! The generalized network `{A1, A2, S}` is built around a horizontal
//! segment `S` of length `c = 2 R sin(a1)` centred at the origin. Arc `A1`
//! (radius `R`) bulges upward and leaves `S` at angle `a1`; arc `A2` (radius
//! `R sin(a1)/sin(a2)`) bulges downward and leaves `S` at angle `a2`. The
//! same angles occur at both junctions.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;
use thiserror::Error;

use crate::curve::{self, CurveError, EnergyReport, SampledCurve};
use crate::elastica::{self, ElasticaError, ElasticaParams};
use crate::geom::Vec2;
use crate::network::{End, Junction, Network, NetworkCurve, NetworkError, NetworkOptions};
use crate::rescale::{self, FunctionalValues, HomogeneityPair, RescaleError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompetitorError {
    #[error("radius must be positive, got {0}")]
    NonpositiveRadius(f64),
    #[error("penalty weight must be positive, got {0}")]
    InvalidDelta(f64),
    #[error("invalid angle triple: {0}")]
    InvalidAngles(String),
    #[error("angle triple makes an arc degenerate (sin = 0)")]
    DegenerateAngle,
    #[error("invalid fixture parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Rescale(#[from] RescaleError),
    #[error(transparent)]
    Elastica(#[from] ElasticaError),
}

pub type Result<T> = std::result::Result<T, CompetitorError>;

/// Nodes per curve of emitted networks.
pub const DEFAULT_NODES: usize = 2048;
const ANGLE_SUM_TOL: f64 = 1e-9;

/// Junction angles `a1 <= a2 <= a3` in radians with `a1 + a2 + a3 = 2 pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleTriple {
    alpha1: f64,
    alpha2: f64,
    alpha3: f64,
}

impl AngleTriple {
    /// Sorts the angles; their order on input is irrelevant.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let mut v = [a, b, c];
        if v.iter().any(|x| !(*x > 0.0 && *x < TAU)) {
            return Err(CompetitorError::InvalidAngles(format!(
                "every angle must lie in (0, 2 pi), got {v:?}"
            )));
        }
        if (v.iter().sum::<f64>() - TAU).abs() > ANGLE_SUM_TOL {
            return Err(CompetitorError::InvalidAngles(format!(
                "angles must sum to 2 pi, got {}",
                v.iter().sum::<f64>()
            )));
        }
        v.sort_by(f64::total_cmp);
        Ok(AngleTriple {
            alpha1: v[0],
            alpha2: v[1],
            alpha3: v[2],
        })
    }

    pub fn from_degrees(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(a.to_radians(), b.to_radians(), c.to_radians())
    }

    pub fn regular() -> Self {
        let t = TAU / 3.0;
        AngleTriple {
            alpha1: t,
            alpha2: t,
            alpha3: t,
        }
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn alpha3(&self) -> f64 {
        self.alpha3
    }

    /// `a2 <= 3 pi / 4`, where the closed-form competitor is known to beat
    /// the Figure Eight.
    pub fn in_recommended_range(&self) -> bool {
        self.alpha2 <= 0.75 * PI + 1e-12
    }
}

/// Bending energy and length of one curve of a competitor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePart {
    pub name: &'static str,
    pub bending: f64,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompetitorGeometry {
    pub network: Network,
    pub radius: f64,
    pub closed_form: EnergyReport,
    pub parts: Vec<CurvePart>,
}

impl CompetitorGeometry {
    fn new(network: Network, radius: f64, delta: f64, parts: Vec<CurvePart>) -> Self {
        let (e, l) = parts
            .iter()
            .fold((0.0, 0.0), |(e, l), p| (e + p.bending, l + p.length));
        let tac = network
            .curves()
            .iter()
            .filter_map(NetworkCurve::as_regular)
            .map(SampledCurve::total_abs_curvature)
            .sum();
        CompetitorGeometry {
            network,
            radius,
            closed_form: EnergyReport::new(e, l, delta, tac),
            parts,
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(CompetitorError::NonpositiveRadius(r))
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(CompetitorError::InvalidDelta(delta))
    }
}

/// Points on the circle `center + r (cos phi, sin phi)` for `phi` running
/// from `phi0` through a signed `sweep`.
fn arc_points(center: Vec2, r: f64, phi0: f64, sweep: f64, count: usize) -> Vec<Vec2> {
    (0..count)
        .map(|i| center + Vec2::from_angle(phi0 + sweep * i as f64 / (count - 1) as f64) * r)
        .collect()
}

fn line_points(a: Vec2, b: Vec2, count: usize) -> Vec<Vec2> {
    (0..count)
        .map(|i| a + (b - a) * (i as f64 / (count - 1) as f64))
        .collect()
}

fn raw_count(nodes: usize) -> usize {
    4 * nodes + 1
}

fn resample(points: &[Vec2], nodes: usize, closed: bool) -> Result<NetworkCurve> {
    Ok(NetworkCurve::Regular(curve::resample_arclength(points, nodes, closed)?))
}

fn options() -> NetworkOptions {
    NetworkOptions::default()
}

/// Circle of radius `delta^(-1/2)`, the minimizer of `E + delta L` among
/// closed curves, with `F = 4 pi sqrt(delta)`.
pub fn circle_minimizer(delta: f64, nodes: usize) -> Result<CompetitorGeometry> {
    check_delta(delta)?;
    let unit = FunctionalValues::new(TAU, TAU, delta)?;
    let r = rescale::optimal_scale(unit, HomogeneityPair::elastic_length())?;
    let mut pts = arc_points(Vec2::ZERO, r, 0.0, TAU, raw_count(nodes));
    pts.pop();
    let net = Network::new(vec![resample(&pts, nodes, true)?], vec![], options())?;
    Ok(CompetitorGeometry::new(
        net,
        r,
        delta,
        vec![CurvePart {
            name: "circle",
            bending: TAU / r,
            length: TAU * r,
        }],
    ))
}

/// Lengths and bending energies of `A1`, `A2`, `S` at radius `R`, derived
/// from the arc radii `R` and `R sin(a1)/sin(a2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralizedTable {
    pub length_a1: f64,
    pub length_a2: f64,
    pub length_s: f64,
    pub energy_a1: f64,
    pub energy_a2: f64,
    pub energy_s: f64,
}

impl GeneralizedTable {
    fn from_geometry(a1: f64, a2: f64, r: f64) -> Self {
        let r2 = r * a1.sin() / a2.sin();
        let (l1, l2) = (2.0 * a1 * r, 2.0 * a2 * r2);
        GeneralizedTable {
            length_a1: l1,
            length_a2: l2,
            length_s: 2.0 * a1.sin() * r,
            energy_a1: l1 / (r * r),
            energy_a2: l2 / (r2 * r2),
            energy_s: 0.0,
        }
    }

    /// The same quantities written directly in terms of the angles.
    pub fn tabulated(a1: f64, a2: f64, r: f64) -> Self {
        let (s1, s2) = (a1.sin(), a2.sin());
        GeneralizedTable {
            length_a1: 2.0 * a1 * r,
            length_a2: 2.0 * a2 * s1 / s2 * r,
            length_s: 2.0 * s1 * r,
            energy_a1: 2.0 * a1 / r,
            energy_a2: 2.0 * a2 * s2 / (s1 * r),
            energy_s: 0.0,
        }
    }

    fn max_abs_difference(&self, other: &Self) -> f64 {
        [
            self.length_a1 - other.length_a1,
            self.length_a2 - other.length_a2,
            self.length_s - other.length_s,
            self.energy_a1 - other.energy_a1,
            self.energy_a2 - other.energy_a2,
            self.energy_s - other.energy_s,
        ]
        .iter()
        .map(|d| d.abs())
        .fold(0.0, f64::max)
    }

    fn parts(&self) -> Vec<CurvePart> {
        vec![
            CurvePart {
                name: "S",
                bending: self.energy_s,
                length: self.length_s,
            },
            CurvePart {
                name: "A1",
                bending: self.energy_a1,
                length: self.length_a1,
            },
            CurvePart {
                name: "A2",
                bending: self.energy_a2,
                length: self.length_a2,
            },
        ]
    }
}

/// `(c1, c2)` with `E = c1 / R` and `L = c2 R` for the generalized network.
pub fn generalized_coefficients(angles: &AngleTriple) -> Result<(f64, f64)> {
    let (a1, a2) = (angles.alpha1, angles.alpha2);
    let (s1, s2) = (a1.sin(), a2.sin());
    if s1.abs() < 1e-15 || s2.abs() < 1e-15 {
        return Err(CompetitorError::DegenerateAngle);
    }
    Ok((2.0 * (a1 + a2 * s2 / s1), 2.0 * (a1 + a2 * s1 / s2 + s1)))
}

/// Curves `[S, A1, A2]` and the two junctions of the network with half
/// angles `a1`, `a2` at radius `r`.
fn lens_network(a1: f64, a2: f64, r: f64, nodes: usize, with_targets: bool) -> Result<Network> {
    let r2 = r * a1.sin() / a2.sin();
    let half = r * a1.sin();
    let (left, right) = (Vec2::new(-half, 0.0), Vec2::new(half, 0.0));
    let raw = raw_count(nodes);
    let mut top = arc_points(Vec2::new(0.0, -r * a1.cos()), r, FRAC_PI_2 + a1, -2.0 * a1, raw);
    let mut bottom = arc_points(Vec2::new(0.0, r2 * a2.cos()), r2, -FRAC_PI_2 - a2, 2.0 * a2, raw);
    for arc in [&mut top, &mut bottom] {
        arc[0] = left;
        arc[raw - 1] = right;
    }
    let curves = vec![
        resample(&line_points(left, right, 16), nodes, false)?,
        resample(&top, nodes, false)?,
        resample(&bottom, nodes, false)?,
    ];
    let a3 = TAU - a1 - a2;
    let targets = |v: [f64; 3]| with_targets.then(|| v.iter().map(|x| x.to_degrees()).collect());
    let junctions = vec![
        Junction {
            position: left,
            incident: vec![(0, End::Start), (1, End::Start), (2, End::Start)],
            target_angles: targets([a1, a3, a2]),
        },
        Junction {
            position: right,
            incident: vec![(0, End::End), (2, End::End), (1, End::End)],
            target_angles: targets([a2, a3, a1]),
        },
    ];
    Ok(Network::new(curves, junctions, options())?)
}

/// Network `{A1, A2, S}` meeting at angles `(a1, a2, a3)` at radius `R`.
///
/// The second flag of the result is `false` when `a2 > 3 pi / 4`.
pub fn generalized_network(
    angles: &AngleTriple,
    r: f64,
    delta: f64,
    nodes: usize,
) -> Result<(CompetitorGeometry, bool)> {
    check_radius(r)?;
    check_delta(delta)?;
    generalized_coefficients(angles)?;
    let (a1, a2) = (angles.alpha1, angles.alpha2);
    let table = GeneralizedTable::from_geometry(a1, a2, r);
    debug_assert!(table.max_abs_difference(&GeneralizedTable::tabulated(a1, a2, r)) < 1e-9 * (r + 1.0 / r));
    let net = lens_network(a1, a2, r, nodes, true)?;
    Ok((
        CompetitorGeometry::new(net, r, delta, table.parts()),
        angles.in_recommended_range(),
    ))
}

/// `min_R F(R) = 2 sqrt(delta c1 c2)` for the generalized network.
pub fn optimal_generalized_energy(angles: &AngleTriple, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let (c1, c2) = generalized_coefficients(angles)?;
    Ok(rescale::energy_at_optimal(
        FunctionalValues::new(c1, c2, delta)?,
        HomogeneityPair::elastic_length(),
    )?)
}

/// `R` minimizing `F` of the generalized network.
pub fn optimal_generalized_radius(angles: &AngleTriple, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let (c1, c2) = generalized_coefficients(angles)?;
    Ok(rescale::optimal_scale(
        FunctionalValues::new(c1, c2, delta)?,
        HomogeneityPair::elastic_length(),
    )?)
}

/// Standard double bubble of radius `R`: two arcs of radius `R` and a
/// segment, all meeting at 120 degrees.
pub fn double_bubble(r: f64, delta: f64, nodes: usize) -> Result<CompetitorGeometry> {
    Ok(generalized_network(&AngleTriple::regular(), r, delta, nodes)?.0)
}

/// Double bubble at the radius minimizing `E + delta L`.
pub fn optimal_double_bubble(delta: f64, nodes: usize) -> Result<CompetitorGeometry> {
    double_bubble(optimal_generalized_radius(&AngleTriple::regular(), delta)?, delta, nodes)
}

/// `(2/3) sqrt(8 pi (8 pi + 3 sqrt 3))`
pub fn double_bubble_optimal_energy() -> f64 {
    2.0 / 3.0 * (8.0 * PI * (8.0 * PI + 3.0 * 3f64.sqrt())).sqrt()
}

/// Two unit arcs of length `eps` and their chord. Energy
/// `4 eps + sqrt(2) sqrt(1 - cos eps)`, which vanishes as `eps -> 0`.
pub fn collapsing_network(eps: f64, nodes: usize) -> Result<CompetitorGeometry> {
    if !(eps > 0.0 && eps < PI) {
        return Err(CompetitorError::InvalidParameter(format!("eps = {eps} not in (0, pi)")));
    }
    let h = 0.5 * eps;
    let net = lens_network(h, h, 1.0, nodes, false)?;
    let chord = 2f64.sqrt() * (1.0 - eps.cos()).sqrt();
    Ok(CompetitorGeometry::new(
        net,
        1.0,
        1.0,
        vec![
            CurvePart {
                name: "S",
                bending: 0.0,
                length: chord,
            },
            CurvePart {
                name: "A1",
                bending: eps,
                length: eps,
            },
            CurvePart {
                name: "A2",
                bending: eps,
                length: eps,
            },
        ],
    ))
}

/// `4 eps + sqrt(2) sqrt(1 - cos eps)`
pub fn collapsing_energy(eps: f64) -> f64 {
    4.0 * eps + 2f64.sqrt() * (1.0 - eps.cos()).sqrt()
}

/// Theta network with a short middle edge of length `eps`. Each outer curve
/// is a straight piece of length `d`, a circular arc of radius
/// `(eps + d)/sqrt(3)` turning through 240 degrees, and another straight
/// piece of length `d`. All junction angles are 120 degrees.
pub fn short_edge_theta(eps: f64, d: f64, nodes: usize) -> Result<CompetitorGeometry> {
    if !(eps > 0.0) || !(d >= 0.0) || !eps.is_finite() || !d.is_finite() {
        return Err(CompetitorError::InvalidParameter(format!("eps = {eps}, d = {d}")));
    }
    let r = (eps + d) / 3f64.sqrt();
    let left = Vec2::new(-0.5 * eps, 0.0);
    let right = Vec2::new(0.5 * eps, 0.0);
    let raw = raw_count(nodes);

    let outer = |sign: f64| -> Result<NetworkCurve> {
        let heading = Vec2::from_angle(sign * 2.0 * PI / 3.0);
        let p1 = left + heading * d;
        let center = Vec2::new(0.0, p1.y + sign * 0.5 * r);
        let phi0 = (p1 - center).angle();
        let mut pts = Vec::with_capacity(3 * raw);
        if d > 0.0 {
            let count = ((raw as f64 * d / (2.0 * d + 4.0 * PI * r / 3.0)) as usize).max(8);
            pts.extend(line_points(left, p1, count));
            pts.pop();
        }
        pts.extend(arc_points(center, r, phi0, -sign * 4.0 * PI / 3.0, raw));
        if d > 0.0 {
            let p2 = *pts.last().expect("arc has points");
            pts.pop();
            let count = ((raw as f64 * d / (2.0 * d + 4.0 * PI * r / 3.0)) as usize).max(8);
            pts.extend(line_points(p2, right, count));
        }
        pts[0] = left;
        *pts.last_mut().expect("non-empty") = right;
        resample(&pts, nodes, false)
    };
    let curves = vec![
        resample(&line_points(left, right, 16), nodes, false)?,
        outer(1.0)?,
        outer(-1.0)?,
    ];
    let net = Network::new(
        curves,
        vec![
            Junction {
                position: left,
                incident: vec![(0, End::Start), (1, End::Start), (2, End::Start)],
                target_angles: None,
            },
            Junction {
                position: right,
                incident: vec![(0, End::End), (1, End::End), (2, End::End)],
                target_angles: None,
            },
        ],
        options(),
    )?;
    let arc_len = 4.0 * PI * r / 3.0;
    let piece = |name| CurvePart {
        name,
        bending: arc_len / (r * r),
        length: 2.0 * d + arc_len,
    };
    Ok(CompetitorGeometry::new(
        net,
        r,
        1.0,
        vec![
            CurvePart {
                name: "S",
                bending: 0.0,
                length: eps,
            },
            piece("top"),
            piece("bottom"),
        ],
    ))
}

/// Two circles of radius `r` through the origin whose tangents there differ
/// by 60 degrees: a degenerate Theta network.
pub fn degenerate_theta_circles(r: f64, nodes: usize) -> Result<CompetitorGeometry> {
    check_radius(r)?;
    let raw = raw_count(nodes);
    let circle = |heading: f64| -> Result<NetworkCurve> {
        let center = Vec2::from_angle(heading).perp() * r;
        let mut pts = arc_points(center, r, (-center).angle(), TAU, raw);
        pts[0] = Vec2::ZERO;
        pts[raw - 1] = Vec2::ZERO;
        resample(&pts, nodes, false)
    };
    let net = Network::new(
        vec![circle(0.0)?, circle(PI / 3.0)?],
        vec![Junction {
            position: Vec2::ZERO,
            incident: vec![(0, End::Start), (0, End::End), (1, End::Start), (1, End::End)],
            target_angles: None,
        }],
        options(),
    )?;
    let part = |name| CurvePart {
        name,
        bending: TAU / r,
        length: TAU * r,
    };
    Ok(CompetitorGeometry::new(net, r, 1.0, vec![part("first"), part("second")]))
}

/// The Figure Eight split at its crossing into two drops meeting at one
/// four-valent point.
pub fn figure_eight_network(p: &ElasticaParams, nodes: usize) -> Result<Network> {
    let [first, second] = elastica::sample_drops(p, nodes)?;
    let position = first.start();
    Ok(Network::new(
        vec![NetworkCurve::Regular(first), NetworkCurve::Regular(second)],
        vec![Junction {
            position,
            incident: vec![(0, End::Start), (0, End::End), (1, End::Start), (1, End::End)],
            target_angles: None,
        }],
        options(),
    )?)
}
