use nsdq_core::oracle::adaptive_quad_1d;
use nsdq_core::specfun::sici;
use nsdq_core::univariate::{endpoint_contribution, nsd_interval, Endpoint1D, Oscillator};
use nsdq_core::path::Side;
use nsdq_core::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn oracle<F: Fn(f64) -> Complex64>(f: F, g: impl Fn(f64) -> f64, omega: f64) -> Complex64 {
    let r = adaptive_quad_1d(|x| f(x) * Complex64::from_polar(1.0, omega * g(x)), 0.0, 1.0, 1e-13).unwrap();
    assert!(r.converged);
    r.value
}

fn linear() -> Oscillator<'static> {
    Oscillator::new(|z| z).with_derivative(|_| c(1.0, 0.0))
}

#[test]
fn fresnel_endpoint_against_rotated_contour() {
    let w = 20.0f64;
    // exp(i pi/4) int_0^inf exp(-w t^2) dt on [0, 40/sqrt(w)]
    let r = adaptive_quad_1d(|t| c((-w * t * t).exp(), 0.0), 0.0, 40.0 / w.sqrt(), 1e-14).unwrap();
    let reference = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4) * r.value;
    let osc = Oscillator::new(|z| z * z).with_derivative(|z| 2.0 * z);
    let e = Endpoint1D::new(0.0, 2, &osc, w, Side::Forward).unwrap();
    let v = endpoint_contribution(|_| c(1.0, 0.0), &osc, &e, w, 8).unwrap();
    assert!((v - reference).norm() < 1e-6, "{v} vs {reference}");
}

#[test]
fn cosine_amplitude_linear_phase() {
    let w = 100.0;
    let v = nsd_interval(|z| z.cos(), &linear(), 0.0, 1.0, w, 6).unwrap();
    let r = oracle(|x| c(x.cos(), 0.0), |x| x, w);
    assert!((v - r).norm() < 1e-10, "{:e}", (v - r).norm());
}

#[test]
fn quadratic_phase_on_unit_interval() {
    let w = 50.0;
    let osc = Oscillator::new(|z| z * z).with_derivative(|z| 2.0 * z);
    let v = nsd_interval(|_| c(1.0, 0.0), &osc, 0.0, 1.0, w, 8).unwrap();
    let r = oracle(|_| c(1.0, 0.0), |x| x * x, w);
    assert!((v - r).norm() < 1e-7, "{:e}", (v - r).norm());
}

/// int_0^1 exp(i w x)/(1 + x) dx = exp(-i w) [Ci(2w) - Ci(w) + i (Si(2w) - Si(w))]
fn reciprocal_reference(w: f64) -> Complex64 {
    let (s1, c1) = sici(w).unwrap();
    let (s2, c2) = sici(2.0 * w).unwrap();
    Complex64::from_polar(1.0, -w) * c(c2.value - c1.value, s2.value - s1.value)
}

#[test]
fn reciprocal_reference_matches_oracle() {
    for w in [3.0, 50.0, 400.0] {
        let r = oracle(|x| c(1.0 / (1.0 + x), 0.0), |x| x, w);
        assert!((r - reciprocal_reference(w)).norm() < 1e-13);
    }
}

#[test]
fn asymptotic_order() {
    let omegas: Vec<f64> = (1..=16).map(|k| 50.0 * k as f64).collect();
    for m in 1..=3usize {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for &w in &omegas {
            let v = nsd_interval(|z| 1.0 / (1.0 + z), &linear(), 0.0, 1.0, w, m).unwrap();
            let reference = reciprocal_reference(w);
            let err = (v - reference).norm();
            if err > 1e3 * f64::EPSILON * reference.norm() {
                xs.push(w.ln());
                ys.push(err.ln());
            }
        }
        assert!(xs.len() >= 4, "m = {m}: only {} usable points", xs.len());
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        assert!(slope <= -((2 * m - 1) as f64) + 0.5, "m = {m}: slope {slope}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn linear_in_amplitude(a in -3.0f64..3.0, b in -3.0f64..3.0, w in 5.0f64..500.0, m in 1usize..10) {
        let osc = Oscillator::new(|z| z + 0.2 * z * z).with_derivative(|z| 1.0 + 0.4 * z);
        let f1 = |z: Complex64| z.exp();
        let f2 = |z: Complex64| 1.0 / (2.0 + z);
        let lhs = nsd_interval(|z| a * f1(z) + b * f2(z), &osc, 0.0, 1.0, w, m).unwrap();
        let r1 = nsd_interval(f1, &osc, 0.0, 1.0, w, m).unwrap();
        let r2 = nsd_interval(f2, &osc, 0.0, 1.0, w, m).unwrap();
        let rhs = a * r1 + b * r2;
        let scale = a.abs() * r1.norm() + b.abs() * r2.norm();
        prop_assert!((lhs - rhs).norm() <= 1e-13 * scale.max(1e-300));
    }

    #[test]
    fn phase_shift_covariance(shift in -5.0f64..5.0, w in 5.0f64..500.0, m in 1usize..10) {
        let osc = Oscillator::new(|z| z + 0.2 * z * z).with_derivative(|z| 1.0 + 0.4 * z);
        let shifted = Oscillator::new(move |z| z + 0.2 * z * z + shift).with_derivative(|z| 1.0 + 0.4 * z);
        let base = nsd_interval(|z| z.cos(), &osc, 0.0, 1.0, w, m).unwrap();
        let moved = nsd_interval(|z| z.cos(), &shifted, 0.0, 1.0, w, m).unwrap();
        let expect = base * Complex64::from_polar(1.0, w * shift);
        prop_assert!((moved - expect).norm() <= 1e-13 * base.norm());
    }
}
