//! Oscillatory integrals over the rectangle `[0, a] x [0, b]` with the
//! distance phase `sqrt(x^2 + y^2)`, the special point sitting in the corner
//! at the origin.
//!
//! Two decompositions are provided. The polar one integrates the central
//! contribution over `[0, pi/2]` and corrects by the exterior integral
//! beyond `R(theta)`, itself evaluated by steepest descent in `theta` from
//! the corner angles `0`, `beta` and `pi/2`. The Cartesian one applies
//! steepest descent directly in `x` and `y` from the four rectangle corners;
//! its origin term does not decay faster than `w^-2`, whatever rule is used.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::path::ClosedFormPath;
use crate::polar::{integrate_angular, AngularRegion, AxisRule, OuterPlan};
use crate::rules::{gauss_exp_power, QuadRule};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Polar integrand `psi(r, theta)` without the factor `exp(i w r)`,
/// continued to complex `r` and `theta`.
pub type PolarIntegrand<'a> = &'a (dyn Fn(Complex64, Complex64) -> Complex64 + Sync);

/// Cartesian amplitude `f(x, y, r)` with `r = sqrt(x^2 + y^2)` supplied on
/// the continued branch.
pub type CartesianAmplitude<'a> = &'a (dyn Fn(Complex64, Complex64, Complex64) -> Complex64 + Sync);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    /// `theta = 0` on the side `x = a` (resonance point `[a, 0]`).
    H11,
    /// `theta = beta` on the side `x = a`.
    H12,
    /// `theta = beta` on the side `y = b`.
    H21,
    /// `theta = pi/2` on the side `y = b` (resonance point `[0, b]`).
    H22,
}

impl Corner {
    pub fn id(&self) -> &'static str {
        match self {
            Corner::H11 => "1,1",
            Corner::H12 => "1,2",
            Corner::H21 => "2,1",
            Corner::H22 => "2,2",
        }
    }
}

fn check_sides(a: f64, b: f64, omega: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("rectangle sides must be positive, got a = {a}, b = {b}")));
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
    }
    Ok(())
}

/// One corner term `i exp(i w g0) int int psi(g0 + i q + i p, h(q)) h'(q)
/// exp(-w (p + q)) dp dq`, with `q = t^2 / w` on the resonance corners and
/// `q = t / w` otherwise.
fn corner_term(
    psi: PolarIntegrand<'_>,
    corner: Corner,
    a: f64,
    b: f64,
    omega: f64,
    lag: &QuadRule,
    herm: &QuadRule,
) -> Result<Complex64> {
    let eta = a.hypot(b);
    let (path, g0, resonance) = match corner {
        Corner::H11 => (ClosedFormPath::DuctH11 { a }, a, true),
        Corner::H12 => (ClosedFormPath::DuctH12 { a, b }, eta, false),
        Corner::H21 => (ClosedFormPath::DuctH21 { a, b }, eta, false),
        Corner::H22 => (ClosedFormPath::DuctH22 { b }, b, true),
    };
    let q_rule = if resonance { herm } else { lag };
    let mut acc = Complex64::new(0.0, 0.0);
    for (t, wt) in q_rule.iter() {
        let (q, dq) = if resonance { (t * t / omega, 2.0 * t) } else { (t / omega, 1.0) };
        let (h, dh) = path.eval(q);
        if !(h.re.is_finite() && h.im.is_finite() && dh.re.is_finite() && dh.im.is_finite()) {
            return Err(Error::Branch {
                corner: corner.id().to_string(),
                detail: format!("inverse secant/cosecant not finite at q = {q:e}"),
            });
        }
        if h.re < -1e-12 || h.re > std::f64::consts::FRAC_PI_2 + 1e-12 {
            return Err(Error::Branch {
                corner: corner.id().to_string(),
                detail: format!("angle path left the quarter strip at q = {q:e}: {h}"),
            });
        }
        let mut inner = Complex64::new(0.0, 0.0);
        for (s, ws) in lag.iter() {
            inner += ws * psi(g0 + I * (q + s / omega), h);
        }
        acc += wt * dq * inner * dh;
    }
    Ok(I * Complex64::from_polar(1.0, omega * g0) * acc / (omega * omega))
}

/// `I_ext = I11 - I12 + I21 - I22`, the integral of `psi exp(i w r)` over
/// `r > R(theta)`, `theta` in `[0, pi/2]`, along steepest-descent paths in
/// both variables: `m_lag` Gauss-Laguerre points in `p` (and in `q` at the
/// split angle), `m_herm` half-range Gauss-Hermite points in `q` at the
/// resonance corners.
pub fn rectangle_corner_contributions(
    psi: PolarIntegrand<'_>,
    a: f64,
    b: f64,
    omega: f64,
    m_lag: usize,
    m_herm: usize,
) -> Result<Complex64> {
    check_sides(a, b, omega)?;
    let lag = gauss_exp_power(m_lag, 1, 0)?;
    let herm = gauss_exp_power(m_herm, 2, 0)?;
    let term = |c| corner_term(psi, c, a, b, omega, &lag, &herm);
    Ok(term(Corner::H11)? - term(Corner::H12)? + term(Corner::H21)? - term(Corner::H22)?)
}

/// `Q_r(theta) = i int_0^inf psi(i p, theta) exp(-w p) dp` by `m`-point
/// Gauss-Laguerre.
pub fn polar_central(psi: PolarIntegrand<'_>, theta: f64, omega: f64, m: usize) -> Result<Complex64> {
    let lag = gauss_exp_power(m, 1, 0)?;
    let th = Complex64::new(theta, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in lag.iter() {
        acc += w * psi(I * x / omega, th);
    }
    Ok(I * acc / omega)
}

/// `int_0^{pi/2} Q_r(theta) dtheta` with an `outer_cc`-point Clenshaw-Curtis
/// rule.
pub fn quarter_plane_central(psi: PolarIntegrand<'_>, omega: f64, m: usize, outer_cc: usize) -> Result<Complex64> {
    let region = AngularRegion::sector(0.0, std::f64::consts::FRAC_PI_2)?;
    let plan = OuterPlan::new(vec![AxisRule::ClenshawCurtis(outer_cc)])?;
    integrate_angular(&region, &plan, |d| polar_central(psi, d.theta(), omega, m))
}

/// The polar decomposition: `int_0^{pi/2} Q_r dtheta - I_ext`.
pub fn rectangle_polar_nsd(
    psi: PolarIntegrand<'_>,
    a: f64,
    b: f64,
    omega: f64,
    m_lag: usize,
    m_herm: usize,
    outer_cc: usize,
) -> Result<Complex64> {
    check_sides(a, b, omega)?;
    Ok(quarter_plane_central(psi, omega, m_lag, outer_cc)? - rectangle_corner_contributions(psi, a, b, omega, m_lag, m_herm)?)
}

/// Which variables of a Cartesian corner term are rescaled quadratically.
fn corner_substitutions(x0: f64, y0: f64) -> (bool, bool) {
    let s0 = x0.hypot(y0);
    (x0 == 0.0 && s0 > 0.0, y0 == 0.0)
}

/// `F(x0, y0)`: steepest descent in `x` from `x0`, then in `y` from `y0`,
/// for `f exp(i w sqrt(x^2 + y^2))`. Lines of stationary points (`y = 0`,
/// and `x = 0` away from the origin) are resolved by `q -> t^2` or
/// `p -> t^2` with half-range Gauss-Hermite rules.
pub fn direct_corner_term(
    f: CartesianAmplitude<'_>,
    x0: f64,
    y0: f64,
    omega: f64,
    m_lag: usize,
    m_herm: usize,
) -> Result<Complex64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
    }
    let s0 = x0.hypot(y0);
    let lag = gauss_exp_power(m_lag, 1, 0)?;
    let herm = gauss_exp_power(m_herm, 2, 0)?;
    let (p_sq, q_sq) = corner_substitutions(x0, y0);
    let p_rule: &QuadRule = if p_sq { &herm } else { &lag };
    let q_rule: &QuadRule = if q_sq { &herm } else { &lag };
    let mut acc = Complex64::new(0.0, 0.0);
    for (tp, wp) in p_rule.iter() {
        let (p, dp) = if p_sq { (tp * tp / omega, 2.0 * tp / omega) } else { (tp / omega, 1.0 / omega) };
        let u = if x0 == 0.0 {
            Complex64::new(p, 0.0).sqrt() * Complex64::new(-p, 2.0 * s0).sqrt()
        } else {
            Complex64::new(x0 * x0 - p * p, 2.0 * p * s0).sqrt()
        };
        let s = Complex64::new(s0, p);
        let du = I * s / u;
        let mut inner = Complex64::new(0.0, 0.0);
        for (tq, wq) in q_rule.iter() {
            let (q, dq) = if q_sq { (tq * tq / omega, 2.0 * tq / omega) } else { (tq / omega, 1.0 / omega) };
            let v = if y0 == 0.0 {
                Complex64::new(q, 0.0).sqrt() * Complex64::new(-2.0 * p - q, 2.0 * s0).sqrt()
            } else {
                Complex64::new(y0 * y0 - q * q - 2.0 * p * q, 2.0 * q * s0).sqrt()
            };
            let r = Complex64::new(s0, p + q);
            let dv = I * r / v;
            inner += wq * dq * f(u, v, r) * dv;
        }
        acc += wp * dp * inner * du;
    }
    if !(acc.re.is_finite() && acc.im.is_finite()) {
        return Err(Error::NonFinite { node: f64::NAN, value: acc });
    }
    Ok(Complex64::from_polar(1.0, omega * s0) * acc)
}

/// The Cartesian decomposition `F(0,0) - F(a,0) - F(0,b) + F(a,b)`.
pub fn rectangle_direct_nsd(
    f: CartesianAmplitude<'_>,
    a: f64,
    b: f64,
    omega: f64,
    m_lag: usize,
    m_herm: usize,
) -> Result<Complex64> {
    check_sides(a, b, omega)?;
    let t = |x, y| direct_corner_term(f, x, y, omega, m_lag, m_herm);
    Ok(t(0.0, 0.0)? - t(a, 0.0)? - t(0.0, b)? + t(a, b)?)
}

/// The Cartesian decomposition with its origin term replaced by the polar
/// central contribution over the quarter plane.
#[allow(clippy::too_many_arguments)]
pub fn rectangle_direct_modified(
    f: CartesianAmplitude<'_>,
    psi: PolarIntegrand<'_>,
    a: f64,
    b: f64,
    omega: f64,
    m_lag: usize,
    m_herm: usize,
    outer_cc: usize,
) -> Result<Complex64> {
    check_sides(a, b, omega)?;
    let t = |x, y| direct_corner_term(f, x, y, omega, m_lag, m_herm);
    Ok(quarter_plane_central(psi, omega, m_lag, outer_cc)? - t(a, 0.0)? - t(0.0, b)? + t(a, b)?)
}

/// Poles of the origin-term integrand for `f = 1` after `q -> q^2`:
/// `q = +- i sqrt(2 p)`.
pub fn origin_term_poles(p: f64) -> [Complex64; 2] {
    let r = (2.0 * p).sqrt();
    [Complex64::new(0.0, r), Complex64::new(0.0, -r)]
}
