//! The integrands behind the numerical experiments.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::path::{Direction, RadialScene};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `s(Theta) = sqrt(Theta_1^2 + 2 Theta_2^2 + 3 Theta_3^2)`, so that
/// `sqrt(x^2 + 2 y^2 + 3 z^2) = r s(Theta)`.
pub fn ellipsoid_slope(dir: &Direction) -> f64 {
    let u = dir.unit();
    (u[0] * u[0] + 2.0 * u[1] * u[1] + 3.0 * u[2] * u[2]).sqrt()
}

/// `exp(i w q) / (q^2 (1 + q))` over R^3 with `q = sqrt(x^2 + 2 y^2 + 3 z^2)`.
pub fn ellipsoid_scene(omega: f64) -> Result<RadialScene> {
    RadialScene::builder(
        3,
        omega,
        |z, d| {
            let s = ellipsoid_slope(d);
            1.0 / (z * z * s * s * (1.0 + z * s))
        },
        |z, d| z * ellipsoid_slope(d),
    )
    .oscillator_dz(|_, d| Complex64::new(ellipsoid_slope(d), 0.0))
    .alpha_coeff(ellipsoid_slope)
    .singularity_order(2.0)
    .origin_path(|p, d| {
        let s = ellipsoid_slope(d);
        (I * p / s, I / s)
    })
    .build()
}

/// The same scene with the origin path left to the Newton tracer.
pub fn ellipsoid_scene_traced(omega: f64) -> Result<RadialScene> {
    RadialScene::builder(
        3,
        omega,
        |z, d| {
            let s = ellipsoid_slope(d);
            1.0 / (z * z * s * s * (1.0 + z * s))
        },
        |z, d| z * ellipsoid_slope(d),
    )
    .oscillator_dz(|_, d| Complex64::new(ellipsoid_slope(d), 0.0))
    .alpha_coeff(ellipsoid_slope)
    .singularity_order(2.0)
    .build()
}

/// Duct amplitude in polar form, `f(z, theta) = sin(theta) cos(z cos(theta))`,
/// which is `y cos(x) / sqrt(x^2 + y^2)` along the ray at angle `theta`.
pub fn duct_amplitude(z: Complex64, theta: f64) -> Complex64 {
    theta.sin() * (z * theta.cos()).cos()
}

/// Duct amplitude at a complex angle.
pub fn duct_amplitude_complex(z: Complex64, theta: Complex64) -> Complex64 {
    theta.sin() * (z * theta.cos()).cos()
}

/// `exp(i w sqrt(x^2 + y^2)) y cos(x) / sqrt(x^2 + y^2)` over `[0, a] x [0, b]`.
pub fn duct_scene(omega: f64, a: f64, b: f64) -> Result<RadialScene> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidScene(format!("duct sides must be positive, got a = {a}, b = {b}")));
    }
    RadialScene::builder(2, omega, |z, d| duct_amplitude(z, d.theta()), |z, _| z)
        .oscillator_dz(|_, _| Complex64::new(1.0, 0.0))
        .alpha_coeff(|_| 1.0)
        .singularity_order(1.0)
        .boundary(move |d| duct_radius(a, b, d.theta()))
        .origin_path(|p, _| (I * p, I))
        .boundary_path(move |p, d| (duct_radius(a, b, d.theta()) + I * p, I))
        .build()
}

/// `R(theta) = min(a sec(theta), b csc(theta))` on `[0, pi/2]`.
pub fn duct_radius(a: f64, b: f64, theta: f64) -> f64 {
    if theta <= (b / a).atan() {
        a / theta.cos()
    } else {
        b / theta.sin()
    }
}

fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// Incident direction `d = [-cos(psi), 0, sin(psi)]`.
pub fn sphere_incidence(psi: f64) -> [f64; 3] {
    [-psi.cos(), 0.0, psi.sin()]
}

/// Single-layer kernel on the unit sphere seen from `y = [1, 0, 0]` with the
/// Kirchhoff phase `exp(i k x.d)` factored out and unit density. The
/// parameter plane `(phi_1, phi_2) = (pi/2 + r cos(theta), r sin(theta))`
/// is centred at `y`; the distance is `|x - y| = r sqrt(E)`.
pub fn sphere_scene(k: f64, d: [f64; 3]) -> Result<RadialScene> {
    let norm = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidScene(format!("incident direction must be a unit vector, |d| = {norm}")));
    }
    if d[0].abs() < 1e-12 {
        return Err(Error::InvalidScene("d_1 = 0 puts the target point on the shadow boundary".into()));
    }
    let amplitude = move |z: Complex64, dir: &Direction| {
        let (a, _, dist) = sphere_coordinates(z, dir.theta());
        a.cos() / (4.0 * std::f64::consts::PI * dist)
    };
    let oscillator = move |z: Complex64, dir: &Direction| sphere_phase(z, dir.theta(), d);
    RadialScene::builder(2, k, amplitude, oscillator)
        .alpha_coeff(move |dir| sphere_radial_slope(dir.theta(), d))
        .singularity_order(1.0)
        .analytic_radius(|_| std::f64::consts::PI)
        .build()
}

fn sphere_coordinates(z: Complex64, theta: f64) -> (Complex64, Complex64, Complex64) {
    let (a, b) = (z * theta.cos(), z * theta.sin());
    let (sa, sb) = (sinc(a / 2.0), sinc(b / 2.0));
    let e = theta.cos().powi(2) * sa * sa + a.cos() * theta.sin().powi(2) * sb * sb;
    (a, b, z * e.sqrt())
}

/// `|x - y| + (x - y).d` in the parameter plane.
pub fn sphere_phase(z: Complex64, theta: f64, d: [f64; 3]) -> Complex64 {
    let (a, b, dist) = sphere_coordinates(z, theta);
    let half_dist2 = 2.0 * ((a / 2.0).sin().powi(2) + a.cos() * (b / 2.0).sin().powi(2));
    dist - half_dist2 * d[0] + d[1] * a.cos() * b.sin() - d[2] * a.sin()
}

/// `dg/dr (0+) = 1 + [-d_3, d_2] . Theta`.
pub fn sphere_radial_slope(theta: f64, d: [f64; 3]) -> f64 {
    1.0 - d[2] * theta.cos() + d[1] * theta.sin()
}
