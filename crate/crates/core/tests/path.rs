use nsdq_core::path::{trace_boundary_path, trace_origin_path, Direction, RadialScene};
use nsdq_core::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// g(z, theta) = s z + t z^2 with s, t depending on the direction.
fn cubic_scene(alpha: u32) -> RadialScene {
    let osc = move |z: Complex64, d: &Direction| {
        let s = 1.0 + 0.5 * d.theta().cos().powi(2);
        if alpha == 1 {
            s * z + 0.3 * z * z
        } else {
            s * z * z + 0.2 * z * z * z
        }
    };
    let dosc = move |z: Complex64, d: &Direction| {
        let s = 1.0 + 0.5 * d.theta().cos().powi(2);
        if alpha == 1 {
            s + 0.6 * z
        } else {
            2.0 * s * z + 0.6 * z * z
        }
    };
    RadialScene::builder(2, 1.0, |_, _| c(1.0, 0.0), osc)
        .oscillator_dz(dosc)
        .alpha(alpha)
        .alpha_coeff(|d| 1.0 + 0.5 * d.theta().cos().powi(2))
        .boundary(|d| 1.0 + 0.2 * d.theta().sin())
        .build()
        .unwrap()
}

fn grid(top: f64, k: usize) -> Vec<f64> {
    (1..=k).map(|j| top * j as f64 / k as f64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn traced_paths_satisfy_defining_equation(theta in 0.0f64..std::f64::consts::TAU, alpha in 1u32..=2, top in 0.1f64..20.0) {
        let scene = cubic_scene(alpha);
        let dir = Direction::planar(theta);
        let ps = grid(top, 16);
        let origin = trace_origin_path(&scene, &dir, &ps).unwrap();
        for s in &origin {
            let r = (scene.oscillator(s.rho, &dir) - c(0.0, s.p)).norm();
            prop_assert!(r <= 1e-12 * (1.0 + s.p), "residual {r:e}");
            prop_assert!(s.residual <= 1e-12 * (1.0 + s.p));
        }
        let r0 = scene.boundary(&dir).unwrap();
        let g_r = scene.oscillator(c(r0, 0.0), &dir);
        let bnd = trace_boundary_path(&scene, &dir, &ps).unwrap();
        for s in &bnd {
            let r = (scene.oscillator(s.rho, &dir) - g_r - c(0.0, s.p)).norm();
            prop_assert!(r <= 1e-12 * (1.0 + g_r.norm() + s.p));
        }
    }

    #[test]
    fn implicit_derivative_matches_finite_difference(theta in 0.0f64..std::f64::consts::TAU, alpha in 1u32..=2, p in 0.2f64..10.0) {
        let scene = cubic_scene(alpha);
        let dir = Direction::planar(theta);
        let h = 1e-5 * p;
        let s = trace_origin_path(&scene, &dir, &[p - h, p, p + h]).unwrap();
        let fd = (s[2].rho - s[0].rho) / (2.0 * h);
        let err = (fd - s[1].drho_dp).norm() / s[1].drho_dp.norm();
        prop_assert!(err < 1e-6, "relative derivative error {err:e}");
        // jac = n rho^(n-1) rho'
        let jac = 2.0 * s[1].rho * s[1].drho_dp;
        prop_assert!((jac - s[1].jac).norm() <= 1e-14 * jac.norm());
    }

    #[test]
    fn oscillator_decays_along_paths(theta in 0.0f64..std::f64::consts::TAU, alpha in 1u32..=2, omega in 1.0f64..100.0) {
        let scene = cubic_scene(alpha);
        let dir = Direction::planar(theta);
        let ps = grid(5.0, 20);
        let s = trace_origin_path(&scene, &dir, &ps).unwrap();
        let mut last = 1.0f64;
        for sample in &s {
            let m = (Complex64::i() * omega * scene.oscillator(sample.rho, &dir)).exp().norm();
            prop_assert!(m < last);
            prop_assert!((m - (-omega * sample.p).exp()).abs() <= 1e-10 * (-omega * sample.p).exp().max(1e-300) + 1e-300);
            last = m;
        }
    }

    #[test]
    fn paths_stay_on_one_branch(theta in 0.0f64..std::f64::consts::TAU, alpha in 1u32..=2) {
        let scene = cubic_scene(alpha);
        let dir = Direction::planar(theta);
        let coarse = trace_origin_path(&scene, &dir, &grid(8.0, 4)).unwrap();
        let fine = trace_origin_path(&scene, &dir, &grid(8.0, 400)).unwrap();
        for (k, s) in coarse.iter().enumerate() {
            let f = &fine[100 * (k + 1) - 1];
            prop_assert!((s.rho - f.rho).norm() <= 1e-12 * s.rho.norm().max(1.0));
        }
        let max_jump = fine
            .windows(2)
            .map(|w| (w[1].rho - w[0].rho).norm())
            .fold(0.0f64, f64::max);
        prop_assert!(max_jump < 0.1);
        // principal branch for alpha = 2 starts in the first quadrant
        prop_assert!(fine[0].rho.re > 0.0 && fine[0].rho.im > 0.0);
    }
}
