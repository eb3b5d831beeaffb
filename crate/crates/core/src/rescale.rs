//! Homogeneity calculus for penalized functionals `F_delta = A + delta B`
//! where `A(lambda G) = lambda^-alpha A(G)` and `B(lambda G) = lambda^beta B(G)`.
//!
//! Everything here works on functional values; the geometry modules supply
//! them. For the elastic energy and the length, `alpha = beta = 1`.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RescaleError {
    #[error("homogeneity degrees must be positive, got alpha = {alpha}, beta = {beta}")]
    InvalidDegrees { alpha: f64, beta: f64 },
    #[error("invalid functional values: {0}")]
    InvalidValues(&'static str),
    #[error("the bending-type term vanishes, so no finite optimal scale exists")]
    ZeroBending,
    #[error("constraint values must be positive, got current = {current}, target = {target}")]
    NonpositiveConstraint { current: f64, target: f64 },
}

pub type Result<T> = std::result::Result<T, RescaleError>;

/// Degrees `(alpha, beta)` of the two terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomogeneityPair {
    alpha: f64,
    beta: f64,
}

impl HomogeneityPair {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite() {
            Ok(HomogeneityPair { alpha, beta })
        } else {
            Err(RescaleError::InvalidDegrees { alpha, beta })
        }
    }

    /// Elastic energy against length.
    pub fn elastic_length() -> Self {
        HomogeneityPair { alpha: 1.0, beta: 1.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn sum(&self) -> f64 {
        self.alpha + self.beta
    }
}

/// Values `A >= 0`, `B > 0` of the two functionals on a fixed set and the
/// penalty weight `delta > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalValues {
    a: f64,
    b: f64,
    delta: f64,
}

impl FunctionalValues {
    pub fn new(a: f64, b: f64, delta: f64) -> Result<Self> {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(RescaleError::InvalidValues("A must be finite and >= 0"));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(RescaleError::InvalidValues("B must be finite and > 0"));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(RescaleError::InvalidValues("delta must be finite and > 0"));
        }
        Ok(FunctionalValues { a, b, delta })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `F_delta = A + delta B`.
    pub fn penalized(&self) -> f64 {
        self.a + self.delta * self.b
    }

    /// Values after rescaling the underlying set by `lambda`.
    pub fn rescaled(&self, degrees: HomogeneityPair, lambda: f64) -> FunctionalValues {
        FunctionalValues {
            a: lambda.powf(-degrees.alpha) * self.a,
            b: lambda.powf(degrees.beta) * self.b,
            delta: self.delta,
        }
    }

    /// `F_delta(lambda G) = lambda^-alpha A + delta lambda^beta B`.
    pub fn penalized_at(&self, degrees: HomogeneityPair, lambda: f64) -> f64 {
        self.rescaled(degrees, lambda).penalized()
    }

    fn require_bending(&self) -> Result<()> {
        if self.a > 0.0 {
            Ok(())
        } else {
            Err(RescaleError::ZeroBending)
        }
    }
}

/// Scale and energy factor that turn the `delta` problem into the unit one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitReduction {
    /// `delta^(-1/(alpha+beta))`
    pub scale: f64,
    /// `delta^(alpha/(alpha+beta))`
    pub energy_factor: f64,
    /// `F_1(G) = A + B`
    pub unit_energy: f64,
    /// `F_delta(scale * G)`
    pub rescaled_penalized: f64,
}

impl UnitReduction {
    /// `F_1(G) - F_delta(scale G) / energy_factor`, zero up to rounding.
    pub fn identity_residual(&self) -> f64 {
        self.unit_energy - self.rescaled_penalized / self.energy_factor
    }
}

pub fn reduce_to_unit(values: FunctionalValues, degrees: HomogeneityPair) -> UnitReduction {
    let d = values.delta;
    let scale = d.powf(-1.0 / degrees.sum());
    let energy_factor = d.powf(degrees.alpha / degrees.sum());
    UnitReduction {
        scale,
        energy_factor,
        unit_energy: values.a + values.b,
        rescaled_penalized: values.penalized_at(degrees, scale),
    }
}

/// Minimizer of `lambda -> lambda^-alpha A + delta lambda^beta B`:
/// `(alpha A / (beta delta B))^(1/(alpha+beta))`.
pub fn optimal_scale(values: FunctionalValues, degrees: HomogeneityPair) -> Result<f64> {
    values.require_bending()?;
    Ok(
        (degrees.alpha * values.a / (degrees.beta * values.delta * values.b))
            .powf(1.0 / degrees.sum()),
    )
}

/// `F_delta` at the optimal scale,
/// `(1 + alpha/beta) (beta/alpha)^(alpha/(alpha+beta)) A^(beta/(alpha+beta)) (delta B)^(alpha/(alpha+beta))`.
pub fn energy_at_optimal(values: FunctionalValues, degrees: HomogeneityPair) -> Result<f64> {
    values.require_bending()?;
    let (al, be) = (degrees.alpha, degrees.beta);
    let s = degrees.sum();
    Ok((1.0 + al / be)
        * (be / al).powf(al / s)
        * values.a.powf(be / s)
        * (values.delta * values.b).powf(al / s))
}

/// Factor `(B_current / B0)^(-1/beta)` that rescales a set with
/// `B = B_current` onto the constraint `B = B0`.
pub fn constrained_scale_factor(
    b_current: f64,
    b0: f64,
    degrees: HomogeneityPair,
) -> Result<f64> {
    if !(b_current > 0.0) || !(b0 > 0.0) {
        return Err(RescaleError::NonpositiveConstraint {
            current: b_current,
            target: b0,
        });
    }
    Ok((b_current / b0).powf(-1.0 / degrees.beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn deg(a: f64, b: f64) -> HomogeneityPair {
        HomogeneityPair::new(a, b).unwrap()
    }

    fn vals(a: f64, b: f64, d: f64) -> FunctionalValues {
        FunctionalValues::new(a, b, d).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let r = reduce_to_unit(vals(3.0, 2.0, 1.0), deg(1.0, 1.0));
        assert_eq!((r.scale, r.energy_factor), (1.0, 1.0));
        let r = reduce_to_unit(vals(3.0, 2.0, 4.0), deg(1.0, 1.0));
        assert!((r.scale - 0.5).abs() < 1e-15 && (r.energy_factor - 2.0).abs() < 1e-15);
        let r = reduce_to_unit(vals(3.0, 2.0, 8.0), deg(1.0, 2.0));
        assert!((r.scale - 0.5).abs() < 1e-15 && (r.energy_factor - 2.0).abs() < 1e-15);
        assert!(r.identity_residual().abs() < 1e-12);
    }

    #[test]
    fn optimal_scale_examples() {
        assert!((optimal_scale(vals(2.5, 2.5, 1.0), deg(1.7, 1.7)).unwrap() - 1.0).abs() < 1e-15);
        // circle of radius 2: A = pi, B = 4 pi
        let circle = vals(PI, 4.0 * PI, 1.0);
        let lam = optimal_scale(circle, deg(1.0, 1.0)).unwrap();
        assert!((lam - 0.5).abs() < 1e-15);
        // grid oracle
        let best = (1..2000)
            .map(|i| 0.001 * i as f64)
            .min_by(|x, y| {
                circle
                    .penalized_at(deg(1.0, 1.0), *x)
                    .total_cmp(&circle.penalized_at(deg(1.0, 1.0), *y))
            })
            .unwrap();
        assert!((best - 0.5).abs() < 1e-3);
    }

    #[test]
    fn energy_at_optimal_examples() {
        let v = vals(3.0, 5.0, 1.0);
        assert!((energy_at_optimal(v, deg(1.0, 1.0)).unwrap() - 2.0 * 15f64.sqrt()).abs() < 1e-14);
        let circle = vals(2.0 * PI, 2.0 * PI, 1.0);
        assert!((energy_at_optimal(circle, deg(1.0, 1.0)).unwrap() - 4.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn zero_bending_is_an_error() {
        let v = vals(0.0, 3.0, 1.0);
        assert_eq!(optimal_scale(v, deg(1.0, 1.0)), Err(RescaleError::ZeroBending));
        assert_eq!(energy_at_optimal(v, deg(1.0, 1.0)), Err(RescaleError::ZeroBending));
    }

    #[test]
    fn constrained_factor_examples() {
        assert_eq!(constrained_scale_factor(3.0, 3.0, deg(1.0, 1.0)).unwrap(), 1.0);
        assert!((constrained_scale_factor(4.0, 2.0, deg(1.0, 1.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!((constrained_scale_factor(8.0, 2.0, deg(1.0, 2.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!(constrained_scale_factor(0.0, 2.0, deg(1.0, 1.0)).is_err());
        assert!(constrained_scale_factor(1.0, -2.0, deg(1.0, 1.0)).is_err());
    }

    #[test]
    fn invalid_inputs() {
        assert!(HomogeneityPair::new(0.0, 1.0).is_err());
        assert!(HomogeneityPair::new(1.0, -1.0).is_err());
        assert!(FunctionalValues::new(-1.0, 1.0, 1.0).is_err());
        assert!(FunctionalValues::new(1.0, 0.0, 1.0).is_err());
        assert!(FunctionalValues::new(1.0, 1.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn optimum_beats_log_grid(
            a in 1e-3f64..1e3, b in 1e-3f64..1e3, delta in 0.05f64..20.0,
            alpha in 0.2f64..3.0, beta in 0.2f64..3.0,
        ) {
            let v = vals(a, b, delta);
            let d = deg(alpha, beta);
            let lam = optimal_scale(v, d).unwrap();
            let best = v.penalized_at(d, lam);
            let closed = energy_at_optimal(v, d).unwrap();
            prop_assert!((best - closed).abs() <= 1e-12 * closed);
            for i in 0..100 {
                let l = lam * 10f64.powf(-3.0 + 6.0 * i as f64 / 99.0);
                prop_assert!(best <= v.penalized_at(d, l) * (1.0 + 1e-14));
            }
        }

        #[test]
        fn equipartition_for_equal_degrees(
            a in 1e-3f64..1e3, b in 1e-3f64..1e3, delta in 0.05f64..20.0, deg_ in 0.2f64..3.0,
        ) {
            let v = vals(a, b, delta);
            let d = deg(deg_, deg_);
            let lam = optimal_scale(v, d).unwrap();
            let r = v.rescaled(d, lam);
            let (ta, tb) = (r.a(), r.delta() * r.b());
            prop_assert!((ta - tb).abs() <= 1e-12 * ta.max(tb));
        }

        #[test]
        fn unit_reduction_round_trip(
            a in 0.0f64..1e3, b in 1e-3f64..1e3, delta in 0.05f64..20.0,
            alpha in 0.2f64..3.0, beta in 0.2f64..3.0,
        ) {
            let v = vals(a, b, delta);
            let d = deg(alpha, beta);
            let red = reduce_to_unit(v, d);
            prop_assert!(red.identity_residual().abs() <= 1e-12 * red.unit_energy.max(1.0));
            let back = v.rescaled(d, red.scale).rescaled(d, 1.0 / red.scale);
            prop_assert!((back.a() - a).abs() <= 1e-12 * a.max(1.0));
            prop_assert!((back.b() - b).abs() <= 1e-12 * b.max(1.0));
        }
    }
}
