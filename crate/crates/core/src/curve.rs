//! Arclength-sampled planar curves: Frenet frame, signed scalar curvature,
//! bending energy and length.
//!
//! Curvature follows the convention `k = <d tau/ds, nu>` where `nu` is the
//! counter-clockwise quarter-turn rotation of the unit tangent `tau`. A
//! counter-clockwise circle of radius `R` therefore has `k = 1/R`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Vec2;
use crate::numerics::{self, NumericsError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("curve is not closed")]
    NotClosed,
    #[error("penalty weight must be >= 0, got {0}")]
    InvalidDelta(f64),
    #[error("need at least {need} nodes, got {got}")]
    TooFewNodes { need: usize, got: usize },
    #[error("sampled curve violates an invariant: {0}")]
    Invariant(String),
    #[error("curve samples are not uniformly spaced in arclength")]
    NonUniformGrid,
    #[error("malformed curve document: {0}")]
    Schema(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub type Result<T> = std::result::Result<T, CurveError>;

/// Default gap allowed between the first and last node of a closed curve.
pub const CLOSURE_TOL: f64 = 1e-10;
/// Looser closure gap for curves read from files.
pub const FILE_CLOSURE_TOL: f64 = 1e-6;
const UNIT_TANGENT_TOL: f64 = 1e-10;
/// Absolute slack on the `2 pi` bound, sized for sampled curvature.
pub const GAUSS_BONNET_SLACK: f64 = 1e-3;

/// Planar curve sampled at nodes `s_0 = 0 < s_1 < ... < s_{n-1} = L`.
///
/// For closed curves the last node repeats the first one.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    points: Vec<Vec2>,
    s: Vec<f64>,
    tangent: Vec<Vec2>,
    normal: Vec<Vec2>,
    curvature: Vec<f64>,
    closed: bool,
}

impl SampledCurve {
    /// Builds a curve from exact nodal data (positions, arclength, unit
    /// tangents and curvature), checking every invariant.
    pub fn from_parts(
        points: Vec<Vec2>,
        s: Vec<f64>,
        tangent: Vec<Vec2>,
        curvature: Vec<f64>,
        closed: bool,
    ) -> Result<Self> {
        Self::from_parts_with_tol(points, s, tangent, curvature, closed, CLOSURE_TOL)
    }

    pub fn from_parts_with_tol(
        points: Vec<Vec2>,
        s: Vec<f64>,
        tangent: Vec<Vec2>,
        curvature: Vec<f64>,
        closed: bool,
        closure_tol: f64,
    ) -> Result<Self> {
        let n = points.len();
        if n < 2 {
            return Err(CurveError::TooFewNodes { need: 2, got: n });
        }
        if s.len() != n || tangent.len() != n || curvature.len() != n {
            return Err(CurveError::Invariant("per-node arrays differ in length".into()));
        }
        if s[0] != 0.0 || s.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CurveError::Invariant(
                "arclength must start at 0 and increase strictly".into(),
            ));
        }
        if let Some(i) = tangent
            .iter()
            .position(|t| (t.norm() - 1.0).abs() > UNIT_TANGENT_TOL)
        {
            return Err(CurveError::Invariant(format!("tangent at node {i} is not unit")));
        }
        if curvature.iter().any(|k| !k.is_finite()) || points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(CurveError::Invariant("non-finite samples".into()));
        }
        if closed && points[0].distance(points[n - 1]) > closure_tol {
            return Err(CurveError::NotClosed);
        }
        let normal = tangent.iter().map(|t| t.perp()).collect();
        Ok(SampledCurve {
            points,
            s,
            tangent,
            normal,
            curvature,
            closed,
        })
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn arclength(&self) -> &[f64] {
        &self.s
    }

    pub fn tangents(&self) -> &[Vec2] {
        &self.tangent
    }

    pub fn normals(&self) -> &[Vec2] {
        &self.normal
    }

    pub fn curvature(&self) -> &[f64] {
        &self.curvature
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total length `L`.
    pub fn length(&self) -> f64 {
        *self.s.last().expect("curves have at least two nodes")
    }

    pub fn start(&self) -> Vec2 {
        self.points[0]
    }

    pub fn end(&self) -> Vec2 {
        self.points[self.points.len() - 1]
    }

    /// Grid step when the nodes are equally spaced in arclength.
    pub fn uniform_step(&self) -> Result<f64> {
        let n = self.s.len();
        let h = self.length() / (n - 1) as f64;
        let uniform = self
            .s
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.max(1e-300));
        if uniform {
            Ok(h)
        } else {
            Err(CurveError::NonUniformGrid)
        }
    }

    /// Applies `f` to a per-node quantity with the stencil family matching
    /// the curve: periodic across the seam for closed curves, one-sided at
    /// the ends otherwise.
    fn differentiate(
        &self,
        values: &[f64],
        op: fn(&[f64], f64) -> numerics::Result<Vec<f64>>,
        periodic: fn(&[f64], f64) -> numerics::Result<Vec<f64>>,
    ) -> Result<Vec<f64>> {
        let h = self.uniform_step()?;
        if self.closed {
            let mut out = periodic(&values[..values.len() - 1], h)?;
            out.push(out[0]);
            Ok(out)
        } else {
            Ok(op(values, h)?)
        }
    }

    /// `d/ds` of a per-node quantity.
    pub fn d_ds(&self, values: &[f64]) -> Result<Vec<f64>> {
        self.differentiate(values, numerics::first_derivative, numerics::first_derivative_periodic)
    }

    /// `d^2/ds^2` of a per-node quantity.
    pub fn d2_ds2(&self, values: &[f64]) -> Result<Vec<f64>> {
        self.differentiate(values, numerics::second_derivative, numerics::second_derivative_periodic)
    }

    /// `dk/ds` at every node.
    pub fn curvature_derivative(&self) -> Result<Vec<f64>> {
        self.d_ds(&self.curvature)
    }

    /// Composite trapezoid rule of a per-node quantity over the `s`-grid.
    pub fn integrate_nodal(&self, values: &[f64]) -> f64 {
        self.s
            .windows(2)
            .zip(values.windows(2))
            .map(|(s, v)| 0.5 * (v[0] + v[1]) * (s[1] - s[0]))
            .sum()
    }

    /// `int |k| ds`.
    pub fn total_abs_curvature(&self) -> f64 {
        let abs: Vec<f64> = self.curvature.iter().map(|k| k.abs()).collect();
        self.integrate_nodal(&abs)
    }

    /// Homothety `x -> factor * x` about the origin.
    pub fn scaled(&self, factor: f64) -> SampledCurve {
        SampledCurve {
            points: self.points.iter().map(|p| *p * factor).collect(),
            s: self.s.iter().map(|s| s * factor).collect(),
            tangent: self.tangent.clone(),
            normal: self.normal.clone(),
            curvature: self.curvature.iter().map(|k| k / factor).collect(),
            closed: self.closed,
        }
    }

    /// Rotation by `angle` about the origin followed by a translation.
    pub fn moved(&self, angle: f64, shift: Vec2) -> SampledCurve {
        SampledCurve {
            points: self.points.iter().map(|p| p.rotate(angle) + shift).collect(),
            s: self.s.clone(),
            tangent: self.tangent.iter().map(|t| t.rotate(angle)).collect(),
            normal: self.normal.iter().map(|t| t.rotate(angle)).collect(),
            curvature: self.curvature.clone(),
            closed: self.closed,
        }
    }

    /// The same curve traversed backwards; tangent and curvature flip sign.
    pub fn reversed(&self) -> SampledCurve {
        let l = self.length();
        let mut s: Vec<f64> = self.s.iter().rev().map(|s| l - s).collect();
        s[0] = 0.0;
        SampledCurve {
            points: self.points.iter().rev().copied().collect(),
            s,
            tangent: self.tangent.iter().rev().map(|t| -*t).collect(),
            normal: self.normal.iter().rev().map(|t| -*t).collect(),
            curvature: self.curvature.iter().rev().map(|k| -k).collect(),
            closed: self.closed,
        }
    }
}

/// Bending energy, length and penalized total of a curve or network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    /// `E = int k^2 ds`
    pub bending: f64,
    /// `L`
    pub length: f64,
    pub delta: f64,
    /// `E + delta * L`
    pub total: f64,
    /// `int |k| ds`
    pub total_abs_curvature: f64,
}

impl EnergyReport {
    pub fn new(bending: f64, length: f64, delta: f64, total_abs_curvature: f64) -> Self {
        EnergyReport {
            bending,
            length,
            delta,
            total: bending + delta * length,
            total_abs_curvature,
        }
    }

    /// Sum of reports sharing the same `delta`.
    pub fn sum<'a>(delta: f64, parts: impl IntoIterator<Item = &'a EnergyReport>) -> Self {
        let (mut e, mut l, mut a) = (0.0, 0.0, 0.0);
        for p in parts {
            e += p.bending;
            l += p.length;
            a += p.total_abs_curvature;
        }
        EnergyReport::new(e, l, delta, a)
    }
}

/// `E`, `L`, `E + delta L` and `int |k| ds` by the trapezoid rule in `s`.
pub fn energy_report(curve: &SampledCurve, delta: f64) -> Result<EnergyReport> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(CurveError::InvalidDelta(delta));
    }
    let k2: Vec<f64> = curve.curvature.iter().map(|k| k * k).collect();
    Ok(EnergyReport::new(
        curve.integrate_nodal(&k2),
        curve.length(),
        delta,
        curve.total_abs_curvature(),
    ))
}

/// Total absolute curvature of a closed curve with the two lower bounds it
/// must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussBonnet {
    pub total_abs_curvature: f64,
    /// `int |k| ds >= 2 pi` (up to [`GAUSS_BONNET_SLACK`]).
    pub meets_two_pi: bool,
    /// `E L >= (int |k| ds)^2` (up to `1e-6` relative slack).
    pub holder_holds: bool,
}

pub fn gauss_bonnet_check(curve: &SampledCurve) -> Result<GaussBonnet> {
    if !curve.closed {
        return Err(CurveError::NotClosed);
    }
    let r = energy_report(curve, 0.0)?;
    let tac = r.total_abs_curvature;
    Ok(GaussBonnet {
        total_abs_curvature: tac,
        meets_two_pi: tac >= std::f64::consts::TAU - GAUSS_BONNET_SLACK,
        holder_holds: r.bending * r.length >= tac * tac * (1.0 - 1e-6),
    })
}

/// Piecewise cubic Lagrange interpolant of a polyline, parametrized by
/// cumulative chord length.
struct ChordInterpolant {
    pts: Vec<Vec2>,
    /// Cumulative chord length at each point; for closed input one extra
    /// entry holds the full perimeter.
    knots: Vec<f64>,
    closed: bool,
}

impl ChordInterpolant {
    fn segments(&self) -> usize {
        if self.closed {
            self.pts.len()
        } else {
            self.pts.len() - 1
        }
    }

    fn period(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    /// Knot and point for an index that may run past either end of a
    /// closed polyline.
    fn node(&self, i: isize) -> (f64, Vec2) {
        let m = self.pts.len() as isize;
        let wraps = i.div_euclid(m);
        let j = i.rem_euclid(m) as usize;
        (self.knots[j] + wraps as f64 * self.period(), self.pts[j])
    }

    fn window(&self, seg: usize) -> [(f64, Vec2); 4] {
        let first = if self.closed {
            seg as isize - 1
        } else {
            (seg as isize - 1).clamp(0, self.pts.len() as isize - 4)
        };
        std::array::from_fn(|i| self.node(first + i as isize))
    }

    fn eval(&self, seg: usize, t: f64) -> (Vec2, Vec2) {
        let w = self.window(seg);
        let mut pos = Vec2::ZERO;
        let mut vel = Vec2::ZERO;
        for i in 0..4 {
            let mut denom = 1.0;
            let mut basis = 1.0;
            for (k, wk) in w.iter().enumerate() {
                if k != i {
                    denom *= w[i].0 - wk.0;
                    basis *= t - wk.0;
                }
            }
            let mut dbasis = 0.0;
            for l in 0..4 {
                if l == i {
                    continue;
                }
                let mut prod = 1.0;
                for (k, wk) in w.iter().enumerate() {
                    if k != i && k != l {
                        prod *= t - wk.0;
                    }
                }
                dbasis += prod;
            }
            pos = pos + w[i].1 * (basis / denom);
            vel = vel + w[i].1 * (dbasis / denom);
        }
        (pos, vel)
    }

    fn seg_bounds(&self, seg: usize) -> (f64, f64) {
        (self.knots[seg], self.knots[seg + 1])
    }

    /// Arclength of the interpolant from the start of `seg` to `t`.
    fn partial_length(&self, seg: usize, t: f64) -> f64 {
        let (a, _) = self.seg_bounds(seg);
        let half = 0.5 * (t - a);
        let mid = 0.5 * (t + a);
        GAUSS_LEGENDRE_8
            .iter()
            .map(|&(x, w)| w * self.eval(seg, mid + half * x).1.norm())
            .sum::<f64>()
            * half
    }
}

const GAUSS_LEGENDRE_8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (-0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
];

/// Resamples a polyline at `n` nodes equally spaced in arclength and fills
/// the Frenet data by finite differences in `s`.
///
/// For `closed` input the last raw point may either repeat the first one
/// (within [`CLOSURE_TOL`]) or be left out.
pub fn resample_arclength(raw: &[Vec2], n: usize, closed: bool) -> Result<SampledCurve> {
    resample_arclength_with(raw, n, closed, CLOSURE_TOL)
}

pub fn resample_arclength_with(
    raw: &[Vec2],
    n: usize,
    closed: bool,
    closure_tol: f64,
) -> Result<SampledCurve> {
    if n < 5 {
        return Err(CurveError::TooFewNodes { need: 5, got: n });
    }
    let mut pts = raw.to_vec();
    if closed && pts.len() >= 2 && pts[0].distance(pts[pts.len() - 1]) <= closure_tol {
        pts.pop();
    }
    if pts.len() < 4 {
        return Err(CurveError::DegenerateCurve(format!(
            "need at least 4 distinct points, got {}",
            pts.len()
        )));
    }
    if pts.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(CurveError::DegenerateCurve("non-finite coordinates".into()));
    }

    let mut knots = Vec::with_capacity(pts.len() + 1);
    knots.push(0.0);
    let pairs = pts.len() - 1 + usize::from(closed);
    for i in 0..pairs {
        let d = pts[i].distance(pts[(i + 1) % pts.len()]);
        if d == 0.0 {
            return Err(CurveError::DegenerateCurve(format!(
                "points {} and {} coincide",
                i,
                (i + 1) % pts.len()
            )));
        }
        knots.push(knots[i] + d);
    }
    let interp = ChordInterpolant { pts, knots, closed };

    let segs = interp.segments();
    let mut cumulative = Vec::with_capacity(segs + 1);
    cumulative.push(0.0);
    for seg in 0..segs {
        let (_, b) = interp.seg_bounds(seg);
        cumulative.push(cumulative[seg] + interp.partial_length(seg, b));
    }
    let total = cumulative[segs];
    let h = total / (n - 1) as f64;

    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        let target = i as f64 * h;
        if i == 0 {
            points.push(interp.pts[0]);
            continue;
        }
        if i == n - 1 {
            points.push(if closed { interp.pts[0] } else { *interp.pts.last().unwrap() });
            continue;
        }
        let seg = (cumulative.partition_point(|&c| c <= target) - 1).min(segs - 1);
        let local = target - cumulative[seg];
        let (a, b) = interp.seg_bounds(seg);
        let seg_len = cumulative[seg + 1] - cumulative[seg];
        let (mut lo, mut hi) = (a, b);
        let mut t = a + (b - a) * (local / seg_len);
        for _ in 0..50 {
            let err = interp.partial_length(seg, t) - local;
            if err.abs() <= 1e-15 * total {
                break;
            }
            if err > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let speed = interp.eval(seg, t).1.norm();
            let newton = t - err / speed;
            t = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        }
        points.push(interp.eval(seg, t).0);
    }

    frenet_from_points(points, h, closed)
}

/// Finite-difference Frenet data for nodes already equally spaced in
/// arclength with step `h`.
fn frenet_from_points(points: Vec<Vec2>, h: f64, closed: bool) -> Result<SampledCurve> {
    let n = points.len();
    let s: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
    let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.y).collect();

    let d = |v: &[f64]| -> Result<Vec<f64>> {
        if closed {
            let mut out = numerics::first_derivative_periodic(&v[..n - 1], h)?;
            out.push(out[0]);
            Ok(out)
        } else {
            Ok(numerics::first_derivative(v, h)?)
        }
    };

    let dx = d(&xs)?;
    let dy = d(&ys)?;
    let tangent: Vec<Vec2> = dx
        .iter()
        .zip(&dy)
        .map(|(&x, &y)| Vec2::new(x, y))
        .map(|v| {
            if v.norm() > 0.0 {
                Ok(v.normalized())
            } else {
                Err(CurveError::DegenerateCurve("vanishing tangent".into()))
            }
        })
        .collect::<Result<_>>()?;
    let tx: Vec<f64> = tangent.iter().map(|t| t.x).collect();
    let ty: Vec<f64> = tangent.iter().map(|t| t.y).collect();
    let dtx = d(&tx)?;
    let dty = d(&ty)?;
    let curvature = tangent
        .iter()
        .zip(dtx.iter().zip(&dty))
        .map(|(t, (&ax, &ay))| Vec2::new(ax, ay).dot(t.perp()))
        .collect();

    SampledCurve::from_parts(points, s, tangent, curvature, closed)
}

/// On-disk curve: `{"closed": bool, "points": [[x, y], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDocument {
    pub closed: bool,
    pub points: Vec<Vec2>,
}

impl CurveDocument {
    pub fn from_curve(curve: &SampledCurve) -> Self {
        CurveDocument {
            closed: curve.is_closed(),
            points: curve.points().to_vec(),
        }
    }
}

/// Parses a curve document and resamples it at `n` nodes. `closure_tol`
/// is the gap tolerated between the first and last raw point of a closed
/// curve.
pub fn load_curve(json: &str, n: usize, closure_tol: f64) -> Result<SampledCurve> {
    let doc: CurveDocument =
        serde_json::from_str(json).map_err(|e| CurveError::Schema(e.to_string()))?;
    resample_arclength_with(&doc.points, n, doc.closed, closure_tol)
}
