//! Planar curve networks: curves whose end points meet at junctions.
//!
//! All quantities measured at a junction use the *outward* orientation: an
//! incident curve is traversed away from the junction. For a curve that
//! ends at the junction this reverses `tau` and `k`, leaves `dk/ds`
//! unchanged and flips `nu`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{self, CurveDocument, CurveError, EnergyReport, SampledCurve};
use crate::geom::{ccw_angle, Vec2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("malformed network: {0}")]
    Schema(String),
    #[error("network is not connected")]
    DisconnectedNetwork,
    #[error("curve {curve} ({end:?}) is {distance:e} away from junction {junction}")]
    JunctionMismatch {
        junction: usize,
        curve: usize,
        end: End,
        distance: f64,
    },
    #[error("invalid target angles at junction {junction}: {reason}")]
    InvalidTargetAngles { junction: usize, reason: String },
    #[error("relaxed energy is infinite for a network classified as {0:?}")]
    InfiniteEnergy(Classification),
    #[error("junction {junction} has {valence} regular branches, expected 3")]
    NotTripleJunction { junction: usize, valence: usize },
    #[error("angle {0} is outside [-pi, pi]")]
    AngleOutOfRange(f64),
    #[error("network is classified as {0:?}, not Theta")]
    NotTheta(Classification),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

pub type Result<T> = std::result::Result<T, NetworkError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Start,
    End,
}

/// A curve of a network. Collapsed curves have zero length and sit at a
/// single point.
#[derive(Debug, Clone, PartialEq)]
pub enum NetworkCurve {
    Regular(SampledCurve),
    Collapsed(Vec2),
}

impl NetworkCurve {
    pub fn endpoint(&self, end: End) -> Vec2 {
        match (self, end) {
            (NetworkCurve::Regular(c), End::Start) => c.start(),
            (NetworkCurve::Regular(c), End::End) => c.end(),
            (NetworkCurve::Collapsed(p), _) => *p,
        }
    }

    pub fn as_regular(&self) -> Option<&SampledCurve> {
        match self {
            NetworkCurve::Regular(c) => Some(c),
            NetworkCurve::Collapsed(_) => None,
        }
    }

    pub fn length(&self) -> f64 {
        self.as_regular().map_or(0.0, SampledCurve::length)
    }

    fn moved(&self, angle: f64, shift: Vec2) -> NetworkCurve {
        match self {
            NetworkCurve::Regular(c) => NetworkCurve::Regular(c.moved(angle, shift)),
            NetworkCurve::Collapsed(p) => NetworkCurve::Collapsed(p.rotate(angle) + shift),
        }
    }
}

/// Frenet data of a regular curve at one of its ends, oriented away from
/// that end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutwardFrame {
    pub tangent: Vec2,
    pub normal: Vec2,
    pub curvature: f64,
    pub curvature_derivative: f64,
}

fn outward_frame(c: &SampledCurve, end: End) -> curve::Result<OutwardFrame> {
    let dk = c.curvature_derivative()?;
    let n = c.len();
    Ok(match end {
        End::Start => OutwardFrame {
            tangent: c.tangents()[0],
            normal: c.normals()[0],
            curvature: c.curvature()[0],
            curvature_derivative: dk[0],
        },
        End::End => OutwardFrame {
            tangent: -c.tangents()[n - 1],
            normal: -c.normals()[n - 1],
            curvature: -c.curvature()[n - 1],
            curvature_derivative: dk[n - 1],
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Junction {
    pub position: Vec2,
    pub incident: Vec<(usize, End)>,
    /// Prescribed angles in degrees between consecutive tangents.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_angles: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Theta,
    DegenerateTheta,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkOptions {
    /// Nodes per curve when resampling file input.
    pub nodes: usize,
    pub junction_tol: f64,
    /// Degrees.
    pub angle_tol: f64,
}

impl Default for NetworkOptions {
    fn default() -> Self {
        NetworkOptions {
            nodes: 1024,
            junction_tol: 1e-6,
            angle_tol: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    curves: Vec<NetworkCurve>,
    junctions: Vec<Junction>,
    classification: Classification,
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

impl Network {
    pub fn new(
        curves: Vec<NetworkCurve>,
        junctions: Vec<Junction>,
        options: NetworkOptions,
    ) -> Result<Self> {
        if curves.is_empty() {
            return Err(NetworkError::Schema("no curves".into()));
        }
        let mut seen = vec![[false; 2]; curves.len()];
        for (j, junction) in junctions.iter().enumerate() {
            if junction.incident.len() < 2 {
                return Err(NetworkError::Schema(format!(
                    "junction {j} has fewer than 2 incident ends"
                )));
            }
            for &(c, end) in &junction.incident {
                let curve = curves.get(c).ok_or_else(|| {
                    NetworkError::Schema(format!("junction {j} refers to missing curve {c}"))
                })?;
                let slot = &mut seen[c][end as usize];
                if *slot {
                    return Err(NetworkError::Schema(format!(
                        "end {end:?} of curve {c} appears in more than one incidence"
                    )));
                }
                *slot = true;
                let distance = curve.endpoint(end).distance(junction.position);
                if !(distance <= options.junction_tol) {
                    return Err(NetworkError::JunctionMismatch {
                        junction: j,
                        curve: c,
                        end,
                        distance,
                    });
                }
            }
            if let Some(angles) = &junction.target_angles {
                let reason = if angles.len() != junction.incident.len() {
                    Some(format!(
                        "{} angles for {} incident ends",
                        angles.len(),
                        junction.incident.len()
                    ))
                } else if angles.iter().any(|a| !(*a > 0.0 && *a < 360.0)) {
                    Some("angles must lie in (0, 360)".into())
                } else if (angles.iter().sum::<f64>() - 360.0).abs() > 1e-6 {
                    Some("angles must sum to 360".into())
                } else {
                    None
                };
                if let Some(reason) = reason {
                    return Err(NetworkError::InvalidTargetAngles { junction: j, reason });
                }
            }
        }
        for (c, curve) in curves.iter().enumerate() {
            let closed = matches!(curve, NetworkCurve::Regular(s) if s.is_closed());
            if !closed && seen[c] != [true, true] {
                return Err(NetworkError::Schema(format!(
                    "open curve {c} has an end point that is not at a junction"
                )));
            }
        }

        let mut sets = DisjointSets::new(curves.len() + junctions.len());
        for (j, junction) in junctions.iter().enumerate() {
            for &(c, _) in &junction.incident {
                sets.union(c, curves.len() + j);
            }
        }
        let root = sets.find(0);
        if (1..curves.len() + junctions.len()).any(|i| sets.find(i) != root) {
            return Err(NetworkError::DisconnectedNetwork);
        }

        let mut net = Network {
            curves,
            junctions,
            classification: Classification::Other,
        };
        net.classification = classify(&net, options.angle_tol);
        Ok(net)
    }

    pub fn curves(&self) -> &[NetworkCurve] {
        &self.curves
    }

    pub fn junctions(&self) -> &[Junction] {
        &self.junctions
    }

    pub fn classification(&self) -> Classification {
        self.classification
    }

    /// Regular curves that are incident to junction `j`, with outward frames.
    pub fn branches(&self, j: usize) -> Result<Vec<(usize, End, OutwardFrame)>> {
        self.junctions[j]
            .incident
            .iter()
            .filter_map(|&(c, end)| self.curves[c].as_regular().map(|s| (c, end, s)))
            .map(|(c, end, s)| Ok((c, end, outward_frame(s, end)?)))
            .collect()
    }

    /// Rotates by `angle` about the origin, then translates by `shift`.
    pub fn moved(&self, angle: f64, shift: Vec2) -> Network {
        Network {
            curves: self.curves.iter().map(|c| c.moved(angle, shift)).collect(),
            junctions: self
                .junctions
                .iter()
                .map(|j| Junction {
                    position: j.position.rotate(angle) + shift,
                    ..j.clone()
                })
                .collect(),
            classification: self.classification,
        }
    }

    /// Curve `i` of the result is curve `order[i]` of `self`.
    pub fn relabeled(&self, order: &[usize], options: NetworkOptions) -> Result<Network> {
        if order.len() != self.curves.len() {
            return Err(NetworkError::Schema("permutation has the wrong length".into()));
        }
        let mut inverse = vec![usize::MAX; order.len()];
        for (new, &old) in order.iter().enumerate() {
            if old >= order.len() || inverse[old] != usize::MAX {
                return Err(NetworkError::Schema("not a permutation".into()));
            }
            inverse[old] = new;
        }
        let curves = order.iter().map(|&i| self.curves[i].clone()).collect();
        let junctions = self
            .junctions
            .iter()
            .map(|j| Junction {
                incident: j.incident.iter().map(|&(c, e)| (inverse[c], e)).collect(),
                ..j.clone()
            })
            .collect();
        Network::new(curves, junctions, options)
    }
}

/// On-disk network. Curves whose points all coincide are read as collapsed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub curves: Vec<CurveDocument>,
    pub junctions: Vec<Junction>,
}

impl NetworkDocument {
    pub fn from_network(net: &Network) -> Self {
        NetworkDocument {
            curves: net
                .curves
                .iter()
                .map(|c| match c {
                    NetworkCurve::Regular(s) => CurveDocument::from_curve(s),
                    NetworkCurve::Collapsed(p) => CurveDocument {
                        closed: false,
                        points: vec![*p, *p],
                    },
                })
                .collect(),
            junctions: net.junctions.clone(),
        }
    }

    pub fn into_network(self, options: NetworkOptions) -> Result<Network> {
        let curves = self
            .curves
            .into_iter()
            .enumerate()
            .map(|(i, doc)| {
                let first = *doc
                    .points
                    .first()
                    .ok_or_else(|| NetworkError::Schema(format!("curve {i} has no points")))?;
                if doc.points.iter().all(|p| p.distance(first) <= options.junction_tol) {
                    return Ok(NetworkCurve::Collapsed(first));
                }
                let closure = if doc.closed { curve::FILE_CLOSURE_TOL } else { 0.0 };
                Ok(NetworkCurve::Regular(curve::resample_arclength_with(
                    &doc.points,
                    options.nodes,
                    doc.closed,
                    closure,
                )?))
            })
            .collect::<Result<Vec<_>>>()?;
        Network::new(curves, self.junctions, options)
    }
}

pub fn load_network(json: &str, options: NetworkOptions) -> Result<Network> {
    let doc: NetworkDocument =
        serde_json::from_str(json).map_err(|e| NetworkError::Schema(e.to_string()))?;
    doc.into_network(options)
}

/// Counter-clockwise gaps in degrees between consecutive outward tangents at
/// a set of branches.
fn angular_gaps(tangents: &[Vec2]) -> Vec<f64> {
    let mut dirs: Vec<f64> = tangents.iter().map(|t| t.angle()).collect();
    dirs.sort_by(f64::total_cmp);
    (0..dirs.len())
        .map(|i| {
            let a = Vec2::from_angle(dirs[i]);
            let b = Vec2::from_angle(dirs[(i + 1) % dirs.len()]);
            let gap = ccw_angle(a, b);
            // a single direction, or coincident ones, give a full turn
            if dirs.len() == 1 { TAU } else { gap }.to_degrees()
        })
        .collect()
}

/// Angles in degrees between consecutive regular branches at junction `j`,
/// counter-clockwise.
pub fn measured_angles(net: &Network, j: usize) -> Result<Vec<f64>> {
    let tangents: Vec<Vec2> = net.branches(j)?.iter().map(|b| b.2.tangent).collect();
    Ok(angular_gaps(&tangents))
}

/// The two junctions of a Theta-shaped topology: three regular open curves,
/// each running from one triple junction to the other.
fn theta_junctions(net: &Network) -> Option<(usize, usize)> {
    let regular = || net.curves.iter().filter_map(NetworkCurve::as_regular);
    if net.curves.len() != 3 || net.junctions.len() != 2 || regular().count() != 3 {
        return None;
    }
    if regular().any(SampledCurve::is_closed) {
        return None;
    }
    let at = |j: usize, c: usize| net.junctions[j].incident.iter().filter(|i| i.0 == c).count();
    (0..3)
        .all(|c| at(0, c) == 1 && at(1, c) == 1)
        .then_some((0, 1))
}

fn close_to(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

/// Theta, degenerate Theta or Other, with junction angles compared at
/// `angle_tol` degrees.
pub fn classify(net: &Network, angle_tol: f64) -> Classification {
    if let Some((a, b)) = theta_junctions(net) {
        let ok = [a, b].iter().all(|&j| {
            measured_angles(net, j)
                .map(|g| g.len() == 3 && g.iter().all(|x| close_to(*x, 120.0, angle_tol)))
                .unwrap_or(false)
        });
        return if ok { Classification::Theta } else { Classification::Other };
    }

    // junctions joined by a collapsed curve form one point
    let mut sets = DisjointSets::new(net.junctions.len());
    let mut owner = vec![[usize::MAX; 2]; net.curves.len()];
    for (j, junction) in net.junctions.iter().enumerate() {
        for &(c, end) in &junction.incident {
            owner[c][end as usize] = j;
        }
    }
    let mut regular = 0;
    for (c, curve) in net.curves.iter().enumerate() {
        match curve {
            NetworkCurve::Collapsed(_) => sets.union(owner[c][0], owner[c][1]),
            NetworkCurve::Regular(s) if !s.is_closed() => regular += 1,
            NetworkCurve::Regular(_) => return Classification::Other,
        }
    }
    let collapsed = net.curves.len() - regular;
    if regular != 2 || collapsed > 1 {
        return Classification::Other;
    }
    let point = sets.find(owner[0..].iter().find(|o| o[0] != usize::MAX).map_or(0, |o| o[0]));
    let mut tangents = Vec::new();
    for (c, curve) in net.curves.iter().enumerate() {
        if let NetworkCurve::Regular(s) = curve {
            for end in [End::Start, End::End] {
                if sets.find(owner[c][end as usize]) != point {
                    return Classification::Other;
                }
                match outward_frame(s, end) {
                    Ok(f) => tangents.push(f.tangent),
                    Err(_) => return Classification::Other,
                }
            }
        }
    }
    let gaps = angular_gaps(&tangents);
    let alternating = |first: f64, second: f64| {
        gaps.iter()
            .enumerate()
            .all(|(i, g)| close_to(*g, if i % 2 == 0 { first } else { second }, angle_tol))
    };
    if alternating(120.0, 60.0) || alternating(60.0, 120.0) {
        Classification::DegenerateTheta
    } else {
        Classification::Other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyMode {
    /// Sum over curves for any network.
    Raw,
    /// Finite only on Theta and degenerate Theta networks.
    Relaxed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkEnergy {
    pub total: EnergyReport,
    pub per_curve: Vec<EnergyReport>,
}

pub fn network_energy(net: &Network, delta: f64, mode: EnergyMode) -> Result<NetworkEnergy> {
    if mode == EnergyMode::Relaxed && net.classification == Classification::Other {
        return Err(NetworkError::InfiniteEnergy(net.classification));
    }
    let per_curve = net
        .curves
        .iter()
        .map(|c| match c {
            NetworkCurve::Regular(s) => curve::energy_report(s, delta),
            NetworkCurve::Collapsed(_) => Ok(EnergyReport::new(0.0, 0.0, delta, 0.0)),
        })
        .collect::<curve::Result<Vec<_>>>()?;
    Ok(NetworkEnergy {
        total: EnergyReport::sum(delta, &per_curve),
        per_curve,
    })
}

/// Sums entering the natural conditions at a triple junction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JunctionResidual {
    pub junction: usize,
    /// `sum k`
    pub scalar_sum: f64,
    /// `sum (2 dk/ds nu + k^2 tau)`
    pub vector_sum: Vec2,
    /// `sum tau`
    pub tangent_sum: Vec2,
}

pub fn junction_residuals(net: &Network) -> Result<Vec<JunctionResidual>> {
    (0..net.junctions.len())
        .map(|j| {
            let branches = net.branches(j)?;
            if branches.len() != 3 {
                return Err(NetworkError::NotTripleJunction {
                    junction: j,
                    valence: branches.len(),
                });
            }
            let mut r = JunctionResidual {
                junction: j,
                scalar_sum: 0.0,
                vector_sum: Vec2::ZERO,
                tangent_sum: Vec2::ZERO,
            };
            for (_, _, f) in branches {
                r.scalar_sum += f.curvature;
                r.vector_sum = r.vector_sum
                    + f.normal * (2.0 * f.curvature_derivative)
                    + f.tangent * (f.curvature * f.curvature);
                r.tangent_sum = r.tangent_sum + f.tangent;
            }
            Ok(r)
        })
        .collect()
}

/// Lower bound `2 pi - theta1 - theta2` for `int |k| ds` along a closed
/// loop with exterior angles `theta1`, `theta2` at its two corners.
pub fn gauss_bonnet_bound(theta1: f64, theta2: f64) -> Result<f64> {
    for t in [theta1, theta2] {
        if !(-PI..=PI).contains(&t) {
            return Err(NetworkError::AngleOutOfRange(t));
        }
    }
    Ok(TAU - theta1 - theta2)
}

/// A loop of a Theta-shaped network made of two of its curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopCurvature {
    pub curves: [usize; 2],
    pub total_abs_curvature: f64,
    /// Exterior angles at the two junctions, radians.
    pub exterior_angles: [f64; 2],
    pub bound: f64,
}

impl LoopCurvature {
    pub fn holds(&self, slack: f64) -> bool {
        self.total_abs_curvature >= self.bound - slack
    }
}

/// The three loops of a network with Theta topology and their curvature
/// bounds. Angles need not be 120 degrees.
pub fn theta_loops(net: &Network) -> Result<Vec<LoopCurvature>> {
    let (ja, jb) = theta_junctions(net).ok_or(NetworkError::NotTheta(net.classification))?;
    let frames = |j: usize| -> Result<Vec<(usize, OutwardFrame)>> {
        Ok(net.branches(j)?.into_iter().map(|(c, _, f)| (c, f)).collect())
    };
    let (fa, fb) = (frames(ja)?, frames(jb)?);
    let tangent = |fs: &[(usize, OutwardFrame)], c: usize| {
        fs.iter().find(|(i, _)| *i == c).map(|(_, f)| f.tangent).unwrap_or(Vec2::ZERO)
    };
    [[0, 1], [0, 2], [1, 2]]
        .iter()
        .map(|&[p, q]| {
            let exterior = |fs: &[(usize, OutwardFrame)]| {
                let cos = tangent(fs, p).dot(tangent(fs, q)).clamp(-1.0, 1.0);
                PI - cos.acos()
            };
            let exterior_angles = [exterior(&fa), exterior(&fb)];
            let tac = [p, q]
                .iter()
                .filter_map(|&c| net.curves[c].as_regular())
                .map(SampledCurve::total_abs_curvature)
                .sum();
            Ok(LoopCurvature {
                curves: [p, q],
                total_abs_curvature: tac,
                exterior_angles,
                bound: gauss_bonnet_bound(exterior_angles[0], exterior_angles[1])?,
            })
        })
        .collect()
}

/// Whether a Theta network satisfies `F >= 4 pi sqrt(delta)` up to `1e-6`.
pub fn theta_lower_bound_check(net: &Network, delta: f64) -> Result<bool> {
    if net.classification != Classification::Theta {
        return Err(NetworkError::NotTheta(net.classification));
    }
    let e = network_energy(net, delta, EnergyMode::Raw)?;
    Ok(e.total.total >= 4.0 * PI * delta.sqrt() - 1e-6)
}
