//! The closed Figure-Eight elastica in explicit form.
//!
//! An arclength-parametrized curve whose coordinates solve
//! `x'' = lambda y y'`, `y'' = -lambda y x'` has curvature `k = -lambda y` and
//! satisfies `2 k_ss + k^3 - delta k = 0` with `delta = -2 lambda mu`, where
//! `x' = (lambda/2) y^2 + mu`. For `mu` in `(-1, 0)` the solution is
//!
//! ```text
//! y(s) = a cn(sqrt(lambda) s, m)
//! x(s) = (2/sqrt(lambda)) E(am(sqrt(lambda) s, m), m) - s
//! m = (1 - mu)/2,   a^2 = 2 (1 - mu)/lambda
//! ```
//!
//! `y` has period `4K(m)/sqrt(lambda)` and `x(s + 2K/sqrt(lambda)) = x(s) +
//! (2/sqrt(lambda)) (2E(m) - K(m))`, so the curve closes up exactly when
//! `2E(m) = K(m)`. That root is the Figure Eight.

use serde::Serialize;
use thiserror::Error;

use crate::curve::{CurveError, EnergyReport, SampledCurve};
use crate::elliptic::{self, EllipticError, EllipticParameter, Jacobi};
use crate::geom::Vec2;
use crate::numerics::{self, Bracket, NumericsError, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ElasticaError {
    #[error("penalty weight must be positive, got {0}")]
    InvalidDelta(f64),
    #[error("parameter m = {0} does not give a wavelike elastica with mu in (-1, 0)")]
    NotWavelike(f64),
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub type Result<T> = std::result::Result<T, ElasticaError>;

/// Parameters of a wavelike elastica.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElasticaParams {
    pub m: EllipticParameter,
    pub mu: f64,
    pub lambda: f64,
    /// Amplitude of `y`.
    pub a: f64,
    /// Quarter period in arclength, `K(m)/sqrt(lambda)`.
    pub sbar: f64,
    pub delta: f64,
    /// First-integral constant, `lambda^2 - delta^2/4`.
    pub b: f64,
}

impl ElasticaParams {
    /// Wavelike elastica with parameter `m` in `(1/2, 1)` solving the
    /// equation with penalty `delta`.
    pub fn wavelike(m: EllipticParameter, delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(ElasticaError::InvalidDelta(delta));
        }
        let mv = m.value();
        let mu = 1.0 - 2.0 * mv;
        if !(mu > -1.0 && mu < 0.0) {
            return Err(ElasticaError::NotWavelike(mv));
        }
        let lambda = -delta / (2.0 * mu);
        let a = (2.0 * (1.0 - mu) / lambda).sqrt();
        let sbar = elliptic::complete_k(m)? / lambda.sqrt();
        Ok(ElasticaParams {
            m,
            mu,
            lambda,
            a,
            sbar,
            delta,
            b: lambda * lambda - 0.25 * delta * delta,
        })
    }

    /// Largest violation among `m = (1-mu)/2`, `a^2 = 2(1-mu)/lambda`,
    /// `delta = -2 lambda mu` and `lambda^2 = b + delta^2/4`.
    pub fn invariant_residual(&self) -> f64 {
        let m = self.m.value();
        [
            m - 0.5 * (1.0 - self.mu),
            self.a * self.a - 2.0 * (1.0 - self.mu) / self.lambda,
            self.delta + 2.0 * self.lambda * self.mu,
            self.lambda * self.lambda - self.b - 0.25 * self.delta * self.delta,
        ]
        .iter()
        .map(|r| r.abs())
        .fold(0.0, f64::max)
    }

    /// Full period of the closed curve, `4 sbar`.
    pub fn period(&self) -> f64 {
        4.0 * self.sbar
    }
}

/// `g(m) = 2E(m) - K(m)`, the horizontal drift of `x` over half a period
/// (up to the factor `2/sqrt(lambda)`).
pub fn closure_function(m: EllipticParameter) -> Result<f64> {
    Ok(2.0 * elliptic::complete_e(m) - elliptic::complete_k(m)?)
}

/// The unique root of `2E(m) - K(m)` in `(0, 1)`.
pub fn solve_closure(tol: Tolerance) -> Result<EllipticParameter> {
    let g = |m: f64| {
        let p = EllipticParameter::new(m).expect("bracket lies inside [0, 1)");
        closure_function(p).expect("m < 1")
    };
    let root = numerics::find_root(g, Bracket::new(0.01, 0.99)?, tol)?;
    Ok(EllipticParameter::new(root)?)
}

/// Figure-Eight elastica for penalty `delta`.
pub fn figure_eight_params(delta: f64) -> Result<ElasticaParams> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(ElasticaError::InvalidDelta(delta));
    }
    ElasticaParams::wavelike(solve_closure(Tolerance::default())?, delta)
}

/// Position, Frenet data and curvature of the elastica at arclength `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EightPoint {
    pub s: f64,
    pub position: Vec2,
    pub tangent: Vec2,
    pub curvature: f64,
    /// `dk/ds`
    pub curvature_derivative: f64,
}

/// Evaluator that keeps the Landen tables for repeated sampling.
#[derive(Debug, Clone)]
pub struct Elastica {
    params: ElasticaParams,
    jacobi: Jacobi,
    sqrt_lambda: f64,
}

impl Elastica {
    pub fn new(params: ElasticaParams) -> Result<Self> {
        Ok(Elastica {
            jacobi: Jacobi::new(params.m)?,
            sqrt_lambda: params.lambda.sqrt(),
            params,
        })
    }

    pub fn params(&self) -> &ElasticaParams {
        &self.params
    }

    pub fn point(&self, s: f64) -> EightPoint {
        let p = &self.params;
        let u = self.sqrt_lambda * s;
        let phi = self.jacobi.am(u);
        let (sn, cn) = phi.sin_cos();
        let dn = (1.0 - p.m.value() * sn * sn).max(0.0).sqrt();
        let e_phi = elliptic::incomplete_e(phi, p.m).expect("m < 1 checked on construction");

        let y = p.a * cn;
        let x = 2.0 / self.sqrt_lambda * e_phi - s;
        // y' from the derivative of cn, never from differencing
        let dy = -p.a * self.sqrt_lambda * sn * dn;
        let dx = 0.5 * p.lambda * y * y + p.mu;
        EightPoint {
            s,
            position: Vec2::new(x, y),
            tangent: Vec2::new(dx, dy),
            curvature: -p.lambda * y,
            curvature_derivative: -p.lambda * dy,
        }
    }

    /// `n` nodes on `[s0, s1]` with analytic Frenet data and curvature.
    pub fn sample(&self, s0: f64, s1: f64, n: usize, closed: bool) -> Result<SampledCurve> {
        if n < 2 {
            return Err(ElasticaError::TooFewSamples { need: 2, got: n });
        }
        let h = (s1 - s0) / (n - 1) as f64;
        let pts: Vec<EightPoint> = (0..n).map(|i| self.point(s0 + i as f64 * h)).collect();
        let s = (0..n).map(|i| i as f64 * h).collect();
        let closure_tol = 1e-8 * (s1 - s0);
        Ok(SampledCurve::from_parts_with_tol(
            pts.iter().map(|p| p.position).collect(),
            s,
            pts.iter().map(|p| p.tangent).collect(),
            pts.iter().map(|p| p.curvature).collect(),
            closed,
            closure_tol,
        )?)
    }
}

/// Point of the elastica at arclength `s`.
pub fn eight_point(p: &ElasticaParams, s: f64) -> Result<EightPoint> {
    Ok(Elastica::new(*p)?.point(s))
}

/// The closed curve over `s` in `[0, 4 sbar]` at `n` nodes.
pub fn sample_eight(p: &ElasticaParams, n: usize) -> Result<SampledCurve> {
    if n < 64 {
        return Err(ElasticaError::TooFewSamples { need: 64, got: n });
    }
    Elastica::new(*p)?.sample(0.0, p.period(), n, true)
}

/// The two lobes (drops) of the eight, `[sbar, 3 sbar]` and
/// `[3 sbar, 5 sbar]`, both starting and ending at the crossing point.
pub fn sample_drops(p: &ElasticaParams, n: usize) -> Result<[SampledCurve; 2]> {
    let e = Elastica::new(*p)?;
    Ok([
        e.sample(p.sbar, 3.0 * p.sbar, n, false)?,
        e.sample(3.0 * p.sbar, 5.0 * p.sbar, n, false)?,
    ])
}

fn quadrature_tol() -> Tolerance {
    Tolerance::default()
}

/// Bending energy `int k^2 ds` and `int |k| ds` over `[s0, s1]` by adaptive
/// quadrature of the analytic curvature `k = -lambda a cn(sqrt(lambda) s)`.
fn curvature_integrals(p: &ElasticaParams, s0: f64, s1: f64) -> Result<(f64, f64)> {
    let jac = Jacobi::new(p.m)?;
    let sl = p.lambda.sqrt();
    let amp = p.lambda * p.a;
    let bending = numerics::integrate(|s| (amp * jac.cn(sl * s)).powi(2), s0, s1, quadrature_tol())?;
    let abs = numerics::integrate(|s| (amp * jac.cn(sl * s)).abs(), s0, s1, quadrature_tol())?;
    Ok((bending, abs))
}

/// Energies of the full eight: `E = 4 int_0^sbar lambda^2 a^2 cn^2 ds`,
/// `L = 4 sbar`.
pub fn eight_report(p: &ElasticaParams) -> Result<EnergyReport> {
    let (e, abs) = curvature_integrals(p, 0.0, p.sbar)?;
    Ok(EnergyReport::new(4.0 * e, p.period(), p.delta, 4.0 * abs))
}

/// Closed form `4 lambda^(3/2) a^2 (E(m) - (1-m) K(m)) / m` of the bending
/// energy of the eight.
pub fn eight_bending_closed_form(p: &ElasticaParams) -> Result<f64> {
    Ok(4.0 * p.lambda.powf(1.5) * p.a * p.a * elliptic::cn_squared_quarter_integral(p.m)?)
}

/// Energies of one lobe, `s` in `[sbar, 3 sbar]`.
pub fn drop_report(p: &ElasticaParams) -> Result<EnergyReport> {
    let (e, abs) = curvature_integrals(p, p.sbar, 3.0 * p.sbar)?;
    Ok(EnergyReport::new(e, 2.0 * p.sbar, p.delta, abs))
}

/// End data of one lobe, for the drop boundary conditions `k(0) = k(1) = 0`
/// and `dk/ds(0) = +- dk/ds(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DropBoundary {
    pub start: EightPoint,
    pub end: EightPoint,
    /// `|gamma(end) - gamma(start)|`
    pub gap: f64,
}

pub fn drop_boundary(p: &ElasticaParams) -> Result<DropBoundary> {
    let e = Elastica::new(*p)?;
    let start = e.point(p.sbar);
    let end = e.point(3.0 * p.sbar);
    Ok(DropBoundary {
        start,
        end,
        gap: start.position.distance(end.position),
    })
}

/// Angles between the two branches at the self-intersection, in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JunctionAngles {
    pub small: f64,
    pub large: f64,
}

/// The branches cross with tangents `(mu, -+sqrt(1 - mu^2))`, so the angle
/// between them is `acos(2 mu^2 - 1)`.
pub fn junction_angles(p: &ElasticaParams) -> JunctionAngles {
    let t = (2.0 * p.mu * p.mu - 1.0).clamp(-1.0, 1.0).acos().to_degrees();
    let other = 180.0 - t;
    JunctionAngles {
        small: t.min(other),
        large: t.max(other),
    }
}

fn interior_max(curve: &SampledCurve, values: impl Iterator<Item = f64>) -> f64 {
    let n = curve.len();
    let skip = usize::from(!curve.is_closed());
    values
        .enumerate()
        .filter(|(i, _)| *i >= skip && *i + skip < n)
        .map(|(_, v)| v.abs())
        .fold(0.0, f64::max)
}

/// `max |2 k_ss + k^3 - delta k|` over interior nodes, with `k_ss` by
/// second differences on the `s`-grid.
pub fn el_residual(curve: &SampledCurve, delta: f64) -> Result<f64> {
    if curve.len() < 16 {
        return Err(ElasticaError::TooFewSamples { need: 16, got: curve.len() });
    }
    let k = curve.curvature();
    let kss = curve.d2_ds2(k)?;
    Ok(interior_max(
        curve,
        k.iter().zip(&kss).map(|(k, kss)| 2.0 * kss + k.powi(3) - delta * k),
    ))
}

/// `max (|x'' - lambda y y'| + |y'' + lambda y x'|)` over interior nodes,
/// with all derivatives of the coordinates by finite differences in `s`.
pub fn system_residual(curve: &SampledCurve, lambda: f64) -> Result<f64> {
    if curve.len() < 16 {
        return Err(ElasticaError::TooFewSamples { need: 16, got: curve.len() });
    }
    let xs: Vec<f64> = curve.points().iter().map(|p| p.x).collect();
    let ys: Vec<f64> = curve.points().iter().map(|p| p.y).collect();
    let (dx, dy) = (curve.d_ds(&xs)?, curve.d_ds(&ys)?);
    let (ddx, ddy) = (curve.d2_ds2(&xs)?, curve.d2_ds2(&ys)?);
    Ok(interior_max(
        curve,
        (0..curve.len()).map(|i| {
            (ddx[i] - lambda * ys[i] * dy[i]).abs() + (ddy[i] + lambda * ys[i] * dx[i]).abs()
        }),
    ))
}

/// `(y')^2 - (lambda^2/4)(2(1-mu)/lambda - y^2)(y^2 + 2(1+mu)/lambda)` at a
/// point, zero on the elastica.
pub fn first_integral_residual(p: &ElasticaParams, pt: &EightPoint) -> f64 {
    let y2 = pt.position.y * pt.position.y;
    let rhs = 0.25
        * p.lambda
        * p.lambda
        * (2.0 * (1.0 - p.mu) / p.lambda - y2)
        * (y2 + 2.0 * (1.0 + p.mu) / p.lambda);
    pt.tangent.y * pt.tangent.y - rhs
}

/// `int |k| ds` of the full eight in closed form, `8 asin(sqrt(m))`.
pub fn eight_total_abs_curvature(p: &ElasticaParams) -> f64 {
    8.0 * p.m.value().sqrt().asin()
}

/// Horizontal drift over one half period, zero exactly at the closure root.
pub fn half_period_drift(p: &ElasticaParams) -> Result<f64> {
    Ok(2.0 / p.lambda.sqrt() * closure_function(p.m)?)
}
