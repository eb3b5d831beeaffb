//! Jacobi elliptic functions and Legendre elliptic integrals in the
//! parameter convention: every integrand contains `1 - m sin^2(theta)` with
//! `m` in `[0, 1]` (not the modulus `k = sqrt(m)`).
//!
//! Complete integrals come from the arithmetic-geometric mean, the amplitude
//! from the descending Landen transformation with phase doubling, and the
//! incomplete integrals from Carlson's symmetric forms `R_F` and `R_D`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EllipticError {
    #[error("elliptic parameter m = {0} outside the admissible range")]
    ParameterOutOfRange(f64),
}

pub type Result<T> = std::result::Result<T, EllipticError>;

/// Elliptic parameter `m` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct EllipticParameter(f64);

impl EllipticParameter {
    pub fn new(m: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&m) {
            Ok(EllipticParameter(m))
        } else {
            Err(EllipticError::ParameterOutOfRange(m))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Rejects `m = 1`, where the quarter period diverges.
    fn require_finite_period(self) -> Result<f64> {
        if self.0 < 1.0 {
            Ok(self.0)
        } else {
            Err(EllipticError::ParameterOutOfRange(self.0))
        }
    }
}

impl TryFrom<f64> for EllipticParameter {
    type Error = EllipticError;

    fn try_from(m: f64) -> Result<Self> {
        EllipticParameter::new(m)
    }
}

impl From<EllipticParameter> for f64 {
    fn from(m: EllipticParameter) -> f64 {
        m.0
    }
}

const AGM_MAX_STEPS: usize = 40;

/// Complete elliptic integral of the first kind `K(m)`, the real quarter
/// period. `K(m) = pi / (2 AGM(1, sqrt(1 - m)))`.
pub fn complete_k(m: EllipticParameter) -> Result<f64> {
    let m = m.require_finite_period()?;
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..AGM_MAX_STEPS {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    Ok(PI / (2.0 * a))
}

/// Complete elliptic integral of the second kind `E(m)`, via the AGM sum
/// `E = K (1 - sum_n 2^{n-1} c_n^2)` with `c_0^2 = m`.
pub fn complete_e(m: EllipticParameter) -> f64 {
    let m = m.value();
    if m == 1.0 {
        return 1.0;
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    let mut sum = 0.5 * m;
    let mut pow2 = 0.5;
    for _ in 0..AGM_MAX_STEPS {
        let c = 0.5 * (a - b);
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow2 *= 2.0;
        sum += pow2 * c * c;
    }
    PI / (2.0 * a) * (1.0 - sum)
}

/// Carlson's symmetric integral of the first kind,
/// `R_F(x,y,z) = 1/2 int_0^inf dt / sqrt((t+x)(t+y)(t+z))`.
/// At most one argument may be zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    const ERRTOL: f64 = 0.0008;
    let (mut x, mut y, mut z) = (x, y, z);
    let (mut dx, mut dy, mut dz, mut ave);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        ave = (x + y + z) / 3.0;
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) <= ERRTOL {
            break;
        }
    }
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0) / ave.sqrt()
}

/// Carlson's symmetric integral of the second kind,
/// `R_D(x,y,z) = 3/2 int_0^inf dt / ((t+z) sqrt((t+x)(t+y)(t+z)))`.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> f64 {
    const ERRTOL: f64 = 0.0008;
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 6.0;
    const C3: f64 = 9.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.25 * C3;
    const C6: f64 = 1.5 * C4;
    let (mut x, mut y, mut z) = (x, y, z);
    let mut sum = 0.0;
    let mut fac = 1.0;
    let (mut dx, mut dy, mut dz, mut ave);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lambda));
        fac *= 0.25;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        ave = 0.2 * (x + y + 3.0 * z);
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) <= ERRTOL {
            break;
        }
    }
    let ea = dx * dy;
    let eb = dz * dz;
    let ec = ea - eb;
    let ed = ea - 6.0 * eb;
    let ee = ed + ec + ec;
    3.0 * sum
        + fac
            * (1.0 + ed * (-C1 + C5 * ed - C6 * dz * ee) + dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea)))
            / (ave * ave.sqrt())
}

/// Splits `phi = j*pi + r` with `r` in `[-pi/2, pi/2]`.
fn reduce_half_turns(phi: f64) -> (f64, f64) {
    let j = (phi / PI).round();
    (j, phi - j * PI)
}

/// Incomplete integral of the first kind `F(phi, m)`, for any real `phi`.
pub fn incomplete_f(phi: f64, m: EllipticParameter) -> Result<f64> {
    let mv = m.require_finite_period()?;
    let (j, r) = reduce_half_turns(phi);
    let (s, c) = r.sin_cos();
    let base = s * carlson_rf(c * c, 1.0 - mv * s * s, 1.0);
    Ok(2.0 * j * complete_k(m)? + base)
}

/// Incomplete integral of the second kind
/// `E(phi, m) = int_0^phi sqrt(1 - m sin^2 t) dt`, for any real `phi`.
/// Satisfies `E(phi + pi, m) = 2 E(m) + E(phi, m)`.
pub fn incomplete_e(phi: f64, m: EllipticParameter) -> Result<f64> {
    let mv = m.require_finite_period()?;
    let (j, r) = reduce_half_turns(phi);
    let (s, c) = r.sin_cos();
    let c2 = c * c;
    let d2 = 1.0 - mv * s * s;
    let base = s * carlson_rf(c2, d2, 1.0) - mv / 3.0 * s * s * s * carlson_rd(c2, d2, 1.0);
    Ok(2.0 * j * complete_e(m) + base)
}

/// `sn`, `cn` and `dn` at a single argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Precomputed Landen/AGM tables for a fixed parameter, for evaluating the
/// amplitude and the Jacobi functions at many arguments.
#[derive(Debug, Clone)]
pub struct Jacobi {
    m: EllipticParameter,
    quarter_period: f64,
    /// `c_n / a_n` for `n = 1..=N`.
    ratios: Vec<f64>,
    /// `2^N a_N`.
    scale: f64,
}

impl Jacobi {
    pub fn new(m: EllipticParameter) -> Result<Self> {
        let mv = m.require_finite_period()?;
        let mut a = 1.0_f64;
        let mut b = (1.0 - mv).sqrt();
        let mut ratios = Vec::new();
        let mut pow2 = 1.0;
        if mv > 0.0 {
            for _ in 0..AGM_MAX_STEPS {
                let c = 0.5 * (a - b);
                let an = 0.5 * (a + b);
                b = (a * b).sqrt();
                a = an;
                pow2 *= 2.0;
                ratios.push(c / a);
                if c.abs() <= f64::EPSILON * a {
                    break;
                }
            }
        }
        Ok(Jacobi {
            m,
            quarter_period: PI / (2.0 * a),
            ratios,
            scale: pow2 * a,
        })
    }

    pub fn parameter(&self) -> EllipticParameter {
        self.m
    }

    /// `K(m)`.
    pub fn quarter_period(&self) -> f64 {
        self.quarter_period
    }

    /// Amplitude for `|u| <= K`, by backward phase recursion
    /// `phi_{n-1} = (phi_n + asin((c_n/a_n) sin phi_n)) / 2`.
    fn landen_amplitude(&self, u: f64) -> f64 {
        let mut phi = self.scale * u;
        for ratio in self.ratios.iter().rev() {
            phi = 0.5 * (phi + (ratio * phi.sin()).asin());
        }
        phi
    }

    /// Amplitude `am(u, m)`, unreduced: continuous and increasing in `u` with
    /// `am(u + 2K) = am(u) + pi`.
    pub fn am(&self, u: f64) -> f64 {
        let two_k = 2.0 * self.quarter_period;
        let j = (u / two_k).round();
        self.landen_amplitude(u - j * two_k) + j * PI
    }

    pub fn sn_cn_dn(&self, u: f64) -> JacobiTriple {
        let (sn, cn) = self.am(u).sin_cos();
        let dn = (1.0 - self.m.value() * sn * sn).max(0.0).sqrt();
        JacobiTriple { sn, cn, dn }
    }

    pub fn cn(&self, u: f64) -> f64 {
        self.am(u).cos()
    }
}

/// `am(u, m)`, the inverse of `u = F(phi, m)`.
pub fn jacobi_am(u: f64, m: EllipticParameter) -> Result<f64> {
    Ok(Jacobi::new(m)?.am(u))
}

/// `cn(u, m) = cos(am(u, m))`.
pub fn jacobi_cn(u: f64, m: EllipticParameter) -> Result<f64> {
    Ok(Jacobi::new(m)?.cn(u))
}

/// `sn`, `cn`, `dn` at `(u, m)`.
pub fn jacobi_sn_cn_dn(u: f64, m: EllipticParameter) -> Result<JacobiTriple> {
    Ok(Jacobi::new(m)?.sn_cn_dn(u))
}

/// `E(m) - (1 - m) K(m)`, which equals `m * int_0^K cn^2(u, m) du`.
pub fn cn_squared_quarter_integral(m: EllipticParameter) -> Result<f64> {
    let k = complete_k(m)?;
    let mv = m.value();
    if mv == 0.0 {
        return Ok(FRAC_PI_2 / 2.0);
    }
    Ok((complete_e(m) - (1.0 - mv) * k) / mv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{find_root, integrate, Bracket, Tolerance};

    fn p(m: f64) -> EllipticParameter {
        EllipticParameter::new(m).unwrap()
    }

    fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        integrate(f, a, b, Tolerance::new(1e-13, 1e-13, 200).unwrap()).unwrap()
    }

    #[test]
    fn parameter_range() {
        assert!(EllipticParameter::new(-0.1).is_err());
        assert!(EllipticParameter::new(1.1).is_err());
        assert!(EllipticParameter::new(f64::NAN).is_err());
        assert!(complete_k(p(1.0)).is_err());
        assert!(jacobi_am(0.3, p(1.0)).is_err());
        assert!(incomplete_e(0.3, p(1.0)).is_err());
        assert_eq!(complete_e(p(1.0)), 1.0);
    }

    #[test]
    fn complete_integrals_at_zero() {
        assert!((complete_k(p(0.0)).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((complete_e(p(0.0)) - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn complete_integrals_against_quadrature() {
        for &m in &[0.1, 0.5, 0.826115, 0.95, 0.99] {
            let k_q = quad(|t| (1.0 - m * t.sin().powi(2)).powf(-0.5), 0.0, FRAC_PI_2);
            let e_q = quad(|t| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2);
            assert!((complete_k(p(m)).unwrap() - k_q).abs() < 1e-10, "K({m})");
            assert!((complete_e(p(m)) - e_q).abs() < 1e-10, "E({m})");
        }
        // frozen quadrature values
        assert!((complete_k(p(0.5)).unwrap() - 1.854_074_677_301_372).abs() < 1e-12);
        assert!((complete_e(p(0.5)) - 1.350_643_881_047_675_5).abs() < 1e-12);
    }

    #[test]
    fn incomplete_e_basics() {
        for &m in &[0.0, 0.3, 0.9] {
            assert_eq!(incomplete_e(0.0, p(m)).unwrap(), 0.0);
            let half = incomplete_e(FRAC_PI_2, p(m)).unwrap();
            assert!((half - complete_e(p(m))).abs() < 1e-14);
        }
        for &phi in &[-3.0, 0.2, 1.0, 7.5] {
            assert!((incomplete_e(phi, p(0.0)).unwrap() - phi).abs() < 1e-14);
            let a = incomplete_e(phi, p(0.7)).unwrap();
            let b = incomplete_e(-phi, p(0.7)).unwrap();
            assert!((a + b).abs() < 1e-14, "odd");
        }
    }

    #[test]
    fn incomplete_integrals_against_quadrature() {
        for &m in &[0.2, 0.6, 0.826115, 0.97] {
            for &phi in &[0.3, 1.2, 2.9, 5.0] {
                let e_q = quad(|t| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, phi);
                let f_q = quad(|t| (1.0 - m * t.sin().powi(2)).powf(-0.5), 0.0, phi);
                assert!((incomplete_e(phi, p(m)).unwrap() - e_q).abs() < 1e-10);
                assert!((incomplete_f(phi, p(m)).unwrap() - f_q).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn half_turn_shift_of_e() {
        for &m in &[0.0, 0.25, 0.5, 0.826115, 0.99] {
            let em = complete_e(p(m));
            for i in -8..=8 {
                let phi = 0.37 * i as f64;
                let d = incomplete_e(phi + PI, p(m)).unwrap() - incomplete_e(phi, p(m)).unwrap() - 2.0 * em;
                assert!(d.abs() <= 1e-12, "m={m} phi={phi} d={d}");
            }
        }
    }

    #[test]
    fn amplitude_degenerate_and_periods() {
        for &u in &[-4.0, -0.5, 0.0, 0.9, 3.3, 12.0] {
            assert!((jacobi_am(u, p(0.0)).unwrap() - u).abs() < 1e-12);
            assert!((jacobi_cn(u, p(0.0)).unwrap() - u.cos()).abs() < 1e-12);
        }
        assert!((jacobi_cn(PI / 3.0, p(0.0)).unwrap() - 0.5).abs() < 1e-15);
        for &m in &[0.1, 0.5, 0.826115, 0.99] {
            let j = Jacobi::new(p(m)).unwrap();
            let k = j.quarter_period();
            assert_eq!(j.am(0.0), 0.0);
            assert_eq!(j.cn(0.0), 1.0);
            assert!((j.am(k) - FRAC_PI_2).abs() < 1e-12);
            assert!((j.am(2.0 * k) - PI).abs() < 1e-12);
            assert!(j.cn(k).abs() < 1e-12);
            for &u in &[0.1, 1.7, -2.3, 9.0] {
                assert!((j.am(u + 2.0 * k) - j.am(u) - PI).abs() < 1e-12);
                assert!((j.cn(u + 4.0 * k) - j.cn(u)).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn amplitude_inverts_first_kind_integral() {
        // Independent route: solve F(phi, m) = u for phi by bracketing on the
        // defining integral evaluated with adaptive quadrature.
        let m = 0.826115;
        let u = 0.7;
        let f = |phi: f64| quad(|t| (1.0 - m * t.sin().powi(2)).powf(-0.5), 0.0, phi) - u;
        let phi = find_root(f, Bracket::new(0.0, 2.0).unwrap(), Tolerance::new(1e-13, 0.0, 200).unwrap())
            .unwrap();
        let j = Jacobi::new(p(m)).unwrap();
        assert!((j.am(u) - phi).abs() < 1e-10);
        assert!((j.cn(u) - phi.cos()).abs() < 1e-10);
    }

    #[test]
    fn am_is_increasing() {
        let j = Jacobi::new(p(0.9)).unwrap();
        let mut prev = j.am(-20.0);
        for i in 1..=4000 {
            let next = j.am(-20.0 + 0.01 * i as f64);
            assert!(next > prev);
            prev = next;
        }
    }

    #[test]
    fn pythagorean_identities() {
        for i in 0..=99 {
            let m = 0.01 * i as f64;
            let j = Jacobi::new(p(m)).unwrap();
            for k in -20..=20 {
                let u = 0.77 * k as f64;
                let t = j.sn_cn_dn(u);
                assert!((t.sn * t.sn + t.cn * t.cn - 1.0).abs() <= 1e-12);
                assert!((t.dn * t.dn + m * t.sn * t.sn - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn monotonicity_of_complete_integrals() {
        let mut k_prev = complete_k(p(0.0)).unwrap();
        let mut e_prev = complete_e(p(0.0));
        for i in 1..=100 {
            let m = 0.0099 * i as f64;
            let k = complete_k(p(m)).unwrap();
            let e = complete_e(p(m));
            assert!(k > k_prev && e < e_prev, "m={m}");
            k_prev = k;
            e_prev = e;
        }
    }

    #[test]
    fn second_kind_from_cn_squared() {
        // E(am(u)) = (1 - m) u + m int_0^u cn^2(w) dw
        let m = 0.6;
        let j = Jacobi::new(p(m)).unwrap();
        for &u in &[0.4, 1.9, 3.6] {
            let rhs = (1.0 - m) * u + m * quad(|w| j.cn(w).powi(2), 0.0, u);
            let lhs = incomplete_e(j.am(u), p(m)).unwrap();
            assert!((lhs - rhs).abs() < 1e-10);
        }
        let k = j.quarter_period();
        let q = quad(|w| j.cn(w).powi(2), 0.0, k);
        assert!((cn_squared_quarter_integral(p(m)).unwrap() - q).abs() < 1e-10);
    }
}
