//! Scalar kernels shared by the rest of the crate: bracketed root finding,
//! adaptive Simpson quadrature and finite-difference derivatives on uniform
//! grids.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("f(lo) = {flo} and f(hi) = {fhi} have the same sign")]
    NoSignChange { flo: f64, fhi: f64 },
    #[error("no convergence after {0} iterations")]
    MaxIterExceeded(usize),
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("invalid bracket [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(&'static str),
    #[error("grid step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("integration bounds must satisfy a <= b, got [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
}

pub type Result<T> = std::result::Result<T, NumericsError>;

/// Closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    lo: f64,
    hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(NumericsError::InvalidBracket { lo, hi });
        }
        Ok(Bracket { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    abs_tol: f64,
    rel_tol: f64,
    max_iter: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(NumericsError::InvalidTolerance("abs_tol must be > 0"));
        }
        if !(rel_tol >= 0.0) {
            return Err(NumericsError::InvalidTolerance("rel_tol must be >= 0"));
        }
        if max_iter == 0 {
            return Err(NumericsError::InvalidTolerance("max_iter must be >= 1"));
        }
        Ok(Tolerance {
            abs_tol,
            rel_tol,
            max_iter,
        })
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_iter: 200,
        }
    }
}

/// Finds a root of `f` inside `bracket`.
///
/// Each step tries the secant point through the current bracket ends and
/// falls back to bisection whenever the secant point leaves the bracket or
/// the previous step failed to halve it, so the bracket always shrinks
/// geometrically. Stops when `|f(x)| <= abs_tol` or the bracket is narrower
/// than `abs_tol`.
pub fn find_root<F>(f: F, bracket: Bracket, tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let mut flo = f(lo);
    let mut fhi = f(hi);

    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo * fhi > 0.0 {
        return Err(NumericsError::NoSignChange { flo, fhi });
    }

    let mut force_bisect = false;
    for _ in 0..tol.max_iter {
        let width = hi - lo;
        let mid = 0.5 * (lo + hi);
        let mut x = mid;
        if !force_bisect {
            let secant = hi - fhi * (hi - lo) / (fhi - flo);
            if secant.is_finite() && secant > lo && secant < hi {
                x = secant;
            }
        }

        let fx = f(x);
        if fx.abs() <= tol.abs_tol {
            return Ok(x);
        }
        if (fx < 0.0) == (flo < 0.0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }

        let new_width = hi - lo;
        force_bisect = new_width > 0.5 * width;
        if new_width <= tol.abs_tol {
            return Ok(if flo.abs() < fhi.abs() { lo } else { hi });
        }
        // bracket ends are adjacent floats
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(if flo.abs() < fhi.abs() { lo } else { hi });
        }
    }
    Err(NumericsError::MaxIterExceeded(tol.max_iter))
}

/// Depth below which a panel is always subdivided, so that symmetric or
/// oscillating integrands cannot fool the first error estimate.
const MIN_DEPTH: usize = 4;
/// Recursion depth cap, on top of `Tolerance::max_iter`.
const MAX_DEPTH: usize = 60;

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// The target error is `max(abs_tol, rel_tol * |I|)`, with `|I|` estimated
/// from a coarse composite rule before refinement starts.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a <= b) {
        return Err(NumericsError::InvalidInterval { a, b });
    }
    if a == b {
        return Ok(0.0);
    }

    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);

    // Coarse magnitude estimate for the relative target.
    let coarse = {
        let n = 16;
        let h = (b - a) / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let x0 = a + i as f64 * h;
            let x1 = x0 + h;
            acc += simpson(x0, x1, f(x0), f(0.5 * (x0 + x1)), f(x1));
        }
        acc
    };
    let eps = tol.abs_tol.max(tol.rel_tol * coarse.abs());
    let depth_cap = tol.max_iter.min(MAX_DEPTH).max(MIN_DEPTH + 1);

    let ctx = SimpsonCtx { f: &f, depth_cap };
    ctx.refine(a, b, fa, fm, fb, whole, eps, 0)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

struct SimpsonCtx<'a, F> {
    f: &'a F,
    depth_cap: usize,
}

impl<F: Fn(f64) -> f64> SimpsonCtx<'_, F> {
    #[allow(clippy::too_many_arguments)]
    fn refine(
        &self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: usize,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (self.f)(lm);
        let frm = (self.f)(rm);
        let left = simpson(a, m, fa, flm, fm);
        let right = simpson(m, b, fm, frm, fb);
        let delta = left + right - whole;

        let floor = 8.0 * f64::EPSILON * (left.abs() + right.abs());
        let exhausted = lm <= a || rm >= b;
        if depth >= MIN_DEPTH && (delta.abs() <= 15.0 * eps.max(floor) || exhausted) {
            return Ok(left + right + delta / 15.0);
        }
        if depth + 1 >= self.depth_cap {
            return Err(NumericsError::MaxIterExceeded(self.depth_cap));
        }
        let l = self.refine(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1)?;
        let r = self.refine(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1)?;
        Ok(l + r)
    }
}

fn check_grid(len: usize, need: usize, step: f64) -> Result<()> {
    if len < need {
        return Err(NumericsError::TooFewSamples { need, got: len });
    }
    if !(step > 0.0) {
        return Err(NumericsError::NonPositiveStep(step));
    }
    Ok(())
}

/// Second derivative of uniformly spaced samples.
///
/// Central three-point stencil inside; the four-point one-sided stencil
/// `(2f0 - 5f1 + 4f2 - f3)/h^2` at each end. With exactly three samples the
/// ends reuse the single available three-point stencil. All stencils are
/// exact on quadratics.
pub fn second_derivative(samples: &[f64], step: f64) -> Result<Vec<f64>> {
    let n = samples.len();
    check_grid(n, 3, step)?;
    let h2 = step * step;
    let f = samples;
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / h2;
    }
    if n == 3 {
        out[0] = out[1];
        out[2] = out[1];
    } else {
        out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
        out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    }
    Ok(out)
}

/// First derivative of uniformly spaced samples: central differences inside,
/// second-order one-sided differences at the ends.
pub fn first_derivative(samples: &[f64], step: f64) -> Result<Vec<f64>> {
    let n = samples.len();
    check_grid(n, 3, step)?;
    let f = samples;
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - f[i - 1]) / (2.0 * step);
    }
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * step);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * step);
    Ok(out)
}

/// Central first derivative of samples of a periodic function. `samples`
/// holds one period without the repeated endpoint.
pub fn first_derivative_periodic(samples: &[f64], step: f64) -> Result<Vec<f64>> {
    let n = samples.len();
    check_grid(n, 3, step)?;
    Ok((0..n)
        .map(|i| (samples[(i + 1) % n] - samples[(i + n - 1) % n]) / (2.0 * step))
        .collect())
}

/// Central second derivative of samples of a periodic function, one period
/// without the repeated endpoint.
pub fn second_derivative_periodic(samples: &[f64], step: f64) -> Result<Vec<f64>> {
    let n = samples.len();
    check_grid(n, 3, step)?;
    let h2 = step * step;
    Ok((0..n)
        .map(|i| (samples[(i + n - 1) % n] - 2.0 * samples[i] + samples[(i + 1) % n]) / h2)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn linear_root() {
        let r = find_root(|x| x - 0.5, Bracket::new(0.0, 1.0).unwrap(), tol()).unwrap();
        assert!((r - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn sqrt_two() {
        let r = find_root(|x| x * x - 2.0, Bracket::new(1.0, 2.0).unwrap(), tol()).unwrap();
        assert!((r - 2f64.sqrt()).abs() <= 1e-12);
    }

    #[test]
    fn root_on_bracket_end() {
        let r = find_root(|x| x - 1.0, Bracket::new(0.0, 1.0).unwrap(), tol()).unwrap();
        assert_eq!(r, 1.0);
    }

    #[test]
    fn no_sign_change() {
        let err = find_root(|x| x * x + 1.0, Bracket::new(-1.0, 1.0).unwrap(), tol());
        assert!(matches!(err, Err(NumericsError::NoSignChange { .. })));
    }

    #[test]
    fn max_iter_reported() {
        let t = Tolerance::new(1e-300, 0.0, 3).unwrap();
        let err = find_root(|x| x.powi(3) - 0.3, Bracket::new(0.0, 1.0).unwrap(), t);
        assert_eq!(err, Err(NumericsError::MaxIterExceeded(3)));
    }

    #[test]
    fn flat_function_secant_fallback() {
        // secant steps stall on this one, bisection must take over
        let f = |x: f64| (x - 0.3).powi(9);
        let r = find_root(f, Bracket::new(0.0, 1.0).unwrap(), Tolerance::new(1e-14, 0.0, 200).unwrap())
            .unwrap();
        // |f| <= 1e-14 only pins x to within 1e-14^(1/9) of the root
        assert!(f(r).abs() <= 1e-14);
        assert!((r - 0.3).abs() < 0.03);
    }

    #[test]
    fn bad_bracket_and_tolerance() {
        assert!(Bracket::new(1.0, 1.0).is_err());
        assert!(Bracket::new(2.0, 1.0).is_err());
        assert!(Bracket::new(f64::NAN, 1.0).is_err());
        assert!(Tolerance::new(0.0, 0.0, 1).is_err());
        assert!(Tolerance::new(1e-3, -1.0, 1).is_err());
        assert!(Tolerance::new(1e-3, 0.0, 0).is_err());
    }

    #[test]
    fn integrate_sin() {
        let v = integrate(f64::sin, 0.0, PI, tol()).unwrap();
        assert!((v - 2.0).abs() <= 1e-11);
    }

    #[test]
    fn integrate_constant_and_empty() {
        assert!((integrate(|_| 1.0, 0.0, 1.0, tol()).unwrap() - 1.0).abs() <= 1e-14);
        assert_eq!(integrate(f64::exp, 0.7, 0.7, tol()).unwrap(), 0.0);
        assert!(integrate(f64::exp, 1.0, 0.0, tol()).is_err());
    }

    /// Series for the complete integral of the second kind:
    /// E(m) = pi/2 * sum_n [ (2n)! / (2^{2n} n!^2) ]^2 m^n / (1 - 2n).
    fn complete_e_series(m: f64) -> f64 {
        let mut coef = 1.0; // (2n)! / (2^{2n} n!^2)
        let mut mn = 1.0;
        let mut sum = 0.0;
        for n in 0..400 {
            if n > 0 {
                coef *= (2 * n - 1) as f64 / (2 * n) as f64;
                mn *= m;
            }
            sum += coef * coef * mn / (1.0 - 2.0 * n as f64);
        }
        FRAC_PI_2 * sum
    }

    #[test]
    fn integrate_matches_series_oracle() {
        let oracle = complete_e_series(0.5);
        assert!((oracle - 1.350_643_881_047_675_5).abs() < 1e-14);
        let v = integrate(|t| (1.0 - 0.5 * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, tol()).unwrap();
        assert!((v - oracle).abs() <= 1e-12, "{v} vs {oracle}");
    }

    #[test]
    fn integrate_depth_limit() {
        let t = Tolerance::new(1e-15, 0.0, 6).unwrap();
        let err = integrate(|x: f64| x.abs().sqrt(), -1.0, 1.0, t);
        assert!(matches!(err, Err(NumericsError::MaxIterExceeded(_))));
    }

    #[test]
    fn second_derivative_quadratic_exact() {
        let h = 0.1;
        let xs: Vec<f64> = (0..10).map(|i| 0.3 + h * i as f64).collect();
        let f: Vec<f64> = xs.iter().map(|x| 3.0 * x * x - x + 2.0).collect();
        for d in second_derivative(&f, h).unwrap() {
            assert!((d - 6.0).abs() < 1e-9, "{d}");
        }
        let three = second_derivative(&f[..3], h).unwrap();
        assert!(three.iter().all(|d| (d - 6.0).abs() < 1e-9));
    }

    #[test]
    fn second_derivative_constant_is_zero() {
        let d = second_derivative(&[4.0; 7], 0.5).unwrap();
        assert!(d.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn second_derivative_second_order() {
        let err = |n: usize| {
            let h = 1.0 / (n - 1) as f64;
            let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).sin()).collect();
            let d = second_derivative(&f, h).unwrap();
            d.iter()
                .enumerate()
                .map(|(i, v)| (v + (i as f64 * h).sin()).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(41), err(81));
        assert!(e1 / e2 >= 3.5, "ratio {}", e1 / e2);
    }

    #[test]
    fn derivative_errors() {
        assert_eq!(
            second_derivative(&[1.0, 2.0], 0.1),
            Err(NumericsError::TooFewSamples { need: 3, got: 2 })
        );
        assert!(second_derivative(&[1.0, 2.0, 3.0], 0.0).is_err());
        assert!(first_derivative(&[1.0], 1.0).is_err());
    }

    #[test]
    fn first_derivative_quadratic_exact() {
        let h = 0.25;
        let f: Vec<f64> = (0..6).map(|i| (i as f64 * h).powi(2)).collect();
        let d = first_derivative(&f, h).unwrap();
        for (i, v) in d.iter().enumerate() {
            assert!((v - 2.0 * i as f64 * h).abs() < 1e-12);
        }
    }

    #[test]
    fn periodic_stencils() {
        let n = 64;
        let h = 2.0 * PI / n as f64;
        let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).cos()).collect();
        let d1 = first_derivative_periodic(&f, h).unwrap();
        let d2 = second_derivative_periodic(&f, h).unwrap();
        for i in 0..n {
            let x = i as f64 * h;
            assert!((d1[i] + x.sin()).abs() < 2e-3);
            assert!((d2[i] + x.cos()).abs() < 1e-3);
        }
    }
}
