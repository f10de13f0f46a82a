use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use nsdq_core::experiments::scenes::{duct_scene, ellipsoid_scene, ellipsoid_slope};
use nsdq_core::oracle::{adaptive_quad_1d, brute_force_polar};
use nsdq_core::path::{Direction, RadialScene};
use nsdq_core::polar::*;
use nsdq_core::specfun::ellipsoid_reference;
use nsdq_core::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn flat(omega: f64) -> RadialScene {
    RadialScene::builder(2, omega, |_, _| c(1.0, 0.0), |z, _| z)
        .oscillator_dz(|_, _| c(1.0, 0.0))
        .alpha_coeff(|_| 1.0)
        .build()
        .unwrap()
}

#[test]
fn quarter_plane_identity() {
    let region = AngularRegion::sector(0.0, FRAC_PI_2).unwrap();
    let plan = OuterPlan::standard(&region, 10, 10).unwrap();
    for w in [1.0, 10.0, 100.0] {
        for m in [1, 2, 5, 16] {
            let v = integrate_unbounded(&flat(w), &region, &plan, m).unwrap();
            let exact = -PI / (2.0 * w * w);
            assert!((v - c(exact, 0.0)).norm() <= 1e-12 * exact.abs(), "w = {w}, m = {m}");
        }
    }
}

fn ellipsoid_direction() -> Direction {
    Direction::new(&[FRAC_PI_2, 0.0]).unwrap()
}

#[test]
fn ellipsoid_inner_value_against_descent_integral() {
    let w = 100.0;
    let scene = ellipsoid_scene(w).unwrap();
    let dir = ellipsoid_direction();
    let s = ellipsoid_slope(&dir);
    // (1/3) int_0^inf f(rho) 3 rho^2 rho' exp(-w p) dp with rho = i p / s
    let integrand = |p: f64| {
        let rho = c(0.0, p / s);
        let f = 1.0 / (rho * rho * s * s * (1.0 + rho * s));
        f * rho * rho * c(0.0, 1.0 / s) * (-w * p).exp()
    };
    let r = adaptive_quad_1d(integrand, 0.0, 60.0 / w, 1e-14).unwrap();
    let q = central_contribution(&scene, &dir, 8).unwrap();
    assert!((q - r.value).norm() < 1e-10, "{q} vs {}", r.value);
}

fn truncated_ellipsoid(w: f64, radius: f64) -> RadialScene {
    RadialScene::builder(
        3,
        w,
        |z, d| {
            let s = ellipsoid_slope(d);
            1.0 / (z * z * s * s * (1.0 + z * s))
        },
        |z, d| z * ellipsoid_slope(d),
    )
    .oscillator_dz(|_, d| c(ellipsoid_slope(d), 0.0))
    .alpha_coeff(ellipsoid_slope)
    .singularity_order(2.0)
    .boundary(move |_| radius)
    .build()
    .unwrap()
}

#[test]
fn ellipsoid_boundary_against_descent_integral() {
    let w = 100.0;
    let scene = truncated_ellipsoid(w, 1.0);
    let dir = ellipsoid_direction();
    let s = ellipsoid_slope(&dir);
    let integrand = |p: f64| {
        let rho = c(1.0, p / s);
        let f = 1.0 / (rho * rho * s * s * (1.0 + rho * s));
        3.0 * f * rho * rho * c(0.0, 1.0 / s) * (-w * p).exp()
    };
    let r = adaptive_quad_1d(integrand, 0.0, 60.0 / w, 1e-14).unwrap();
    let expect = -Complex64::from_polar(1.0, w * s) * r.value / 3.0;
    let b = boundary_contribution(&scene, &dir, 10).unwrap();
    assert!((b - expect).norm() < 1e-9, "{b} vs {expect}");
}

#[test]
fn duct_boundary_at_split_angle() {
    let (a, b) = (1.0f64, 2.0f64);
    let w = 40.0;
    let beta = (b / a).atan();
    let closed = duct_scene(w, a, b).unwrap();
    let dir = Direction::planar(beta);
    assert!((closed.boundary(&dir).unwrap() - 5f64.sqrt()).abs() < 1e-15);
    let traced = RadialScene::builder(2, w, |z, d: &Direction| d.theta().sin() * (z * d.theta().cos()).cos(), |z, _| z)
        .oscillator_dz(|_, _| c(1.0, 0.0))
        .alpha_coeff(|_| 1.0)
        .singularity_order(1.0)
        .boundary(move |d| (a / d.theta().cos()).min(b / d.theta().sin()))
        .build()
        .unwrap();
    let v1 = boundary_contribution(&closed, &dir, 8).unwrap();
    let v2 = boundary_contribution(&traced, &dir, 8).unwrap();
    assert!((v1 - v2).norm() <= 1e-12 * v1.norm());
}

#[test]
fn ellipsoid_machine_precision_at_large_frequency() {
    let region = AngularRegion::full_sphere(3).unwrap();
    let plan = OuterPlan::standard(&region, 50, 50).unwrap();
    let w = 1000.0;
    let v = integrate_unbounded(&ellipsoid_scene(w).unwrap(), &region, &plan, 8).unwrap();
    let r = ellipsoid_reference(w).unwrap();
    assert!((v - r).norm() <= 1e-12, "{:e}", (v - r).norm());
}

#[test]
fn isotropic_integrand_factorises() {
    let region = AngularRegion::full_sphere(3).unwrap();
    let plan = OuterPlan::standard(&region, 24, 12).unwrap();
    let w = 5.0;
    let scene = RadialScene::builder(3, w, |z, _| 1.0 / (1.0 + z), |z, _| z)
        .oscillator_dz(|_, _| c(1.0, 0.0))
        .alpha_coeff(|_| 1.0)
        .build()
        .unwrap();
    let q = central_contribution(&scene, &ellipsoid_direction(), 12).unwrap();
    let v = integrate_unbounded(&scene, &region, &plan, 12).unwrap();
    assert!((v - 4.0 * PI * q).norm() < 1e-13 * v.norm(), "{:e}", (v - 4.0 * PI * q).norm() / v.norm());
}

fn ellipse_radius(t: Complex64) -> Complex64 {
    1.0 / (t.cos() * t.cos() + 2.0 * t.sin() * t.sin()).sqrt()
}

#[test]
fn ellipse_with_oscillatory_outer_rule() {
    let w = 200.0;
    let scene = RadialScene::builder(2, w, |_, _| c(1.0, 0.0), |z, _| z)
        .oscillator_dz(|_, _| c(1.0, 0.0))
        .alpha_coeff(|_| 1.0)
        .boundary(|d| ellipse_radius(c(d.theta(), 0.0)).re)
        .build()
        .unwrap();
    let boundary = ComplexBoundary {
        radius: Box::new(ellipse_radius),
        amplitude: Box::new(|_, _| c(1.0, 0.0)),
        oscillator: Box::new(|z, _| z),
        oscillator_dz: Some(Box::new(|_, _| c(1.0, 0.0))),
    };
    let v = integrate_star_shaped_oscillatory(&scene, &boundary, 0.0, FRAC_PI_2, &[], 12, 8, 12).unwrap();
    let region = AngularRegion::sector(0.0, FRAC_PI_2).unwrap();
    let r = brute_force_polar(&scene, &region, 1e-9).unwrap();
    assert!(r.converged);
    assert!((v - r.value).norm() < 1e-6, "{v} vs {}", r.value);
}

#[test]
fn interior_point_of_duct_uses_periodic_outer_rule() {
    let (x0, y0) = (0.4, 0.7);
    let f: CartesianFn = Arc::new(|_| c(1.0, 0.0));
    let g: CartesianFn = Arc::new(|x| (x[0] * x[0] + x[1] * x[1]).sqrt());
    let scene = normalize_scene(&[x0, y0], f, g, 3.0)
        .unwrap()
        .boundary(move |d| rectangle_radius(x0, y0, 1.0, 2.0, d.theta()))
        .build()
        .unwrap();
    let region = AngularRegion::full_sphere(2).unwrap();
    let plan = OuterPlan::standard(&region, 16, 64).unwrap();
    assert_eq!(plan.axes, vec![AxisRule::PeriodicTrapezoid(64)]);
    let nodes = plan.nodes(&region).unwrap();
    assert!(nodes.iter().all(|(d, _)| d.theta() >= 0.0 && d.theta() < 2.0 * PI));
    assert!(nodes.iter().all(|(d, _)| scene.boundary(d).unwrap() > 0.0));
    let phase = (Complex64::i() * 3.0 * (x0 * x0 + y0 * y0).sqrt()).exp();
    assert!((scene.phase_at_origin() - phase).norm() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn integrators_are_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, w in 5.0f64..200.0) {
        let mk = move |ka: f64, kb: f64| {
            RadialScene::builder(2, w, move |z, d: &Direction| ka * (z * d.theta().cos()).exp() + kb / (1.0 + z), |z, _| z)
                .oscillator_dz(|_, _| c(1.0, 0.0))
                .alpha_coeff(|_| 1.0)
                .boundary(|d| 1.0 + 0.1 * d.theta())
                .build()
                .unwrap()
        };
        let region = AngularRegion::sector(0.0, 1.0).unwrap();
        let plan = OuterPlan::standard(&region, 8, 8).unwrap();
        for bounded in [false, true] {
            let run = |s: &RadialScene| if bounded {
                integrate_star_shaped(s, &region, &plan, 6).unwrap()
            } else {
                integrate_unbounded(s, &region, &plan, 6).unwrap()
            };
            let lhs = run(&mk(a, b));
            let r1 = run(&mk(1.0, 0.0));
            let r2 = run(&mk(0.0, 1.0));
            let scale = a.abs() * r1.norm() + b.abs() * r2.norm();
            prop_assert!((lhs - (a * r1 + b * r2)).norm() <= 1e-13 * scale.max(1e-300));
        }
    }
}
