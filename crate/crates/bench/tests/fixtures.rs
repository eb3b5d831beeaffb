use elastnet::elliptic::{complete_k, EllipticParameter};
use elastnet_bench::{ellipse_points, jacobi_arguments};

#[test]
fn ellipse_is_closed_and_on_curve() {
    let pts = ellipse_points(64);
    assert_eq!(pts.len(), 64);
    for p in &pts {
        assert!(((p.x / 2.0).powi(2) + p.y.powi(2) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn jacobi_arguments_cover_more_than_a_period() {
    let u = jacobi_arguments(100);
    let period = 4.0 * complete_k(EllipticParameter::new(0.8).unwrap()).unwrap();
    assert!(u[0] == 0.0 && *u.last().unwrap() < 14.0);
    assert!(14.0 > period && 14.0 < 2.0 * period);
}
