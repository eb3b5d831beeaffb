//! Fixtures shared by the benchmarks.

use std::f64::consts::TAU;

use elastnet::Vec2;

/// `n` points on a closed ellipse with semi-axes 2 and 1.
pub fn ellipse_points(n: usize) -> Vec<Vec2> {
    (0..n)
        .map(|i| {
            let t = TAU * i as f64 / n as f64;
            Vec2::new(2.0 * t.cos(), t.sin())
        })
        .collect()
}

/// Evenly spaced arguments covering about one and a half periods of `cn` at `m = 0.8`.
pub fn jacobi_arguments(n: usize) -> Vec<f64> {
    (0..n).map(|i| 14.0 * i as f64 / n as f64).collect()
}
