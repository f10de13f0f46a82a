//! Univariate numerical steepest descent.
//!
//! `int_a^b f(x) exp(i w g(x)) dx = G(a) - G(b)`, where `G(x)` integrates
//! along the steepest-descent path out of `x`. With `p = t^alpha / w` each
//! `G(x)` becomes a smooth integral against `exp(-t^alpha)` and is resolved
//! by the matching Gaussian rule.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::path::{complex_derivative, leading_coefficient, PathProblem, Side};
use crate::rules::gauss_exp_power;

type ScalarFn<'a> = Box<dyn Fn(Complex64) -> Complex64 + Send + Sync + 'a>;

/// An analytic oscillator `g` with an optional exact derivative.
pub struct Oscillator<'a> {
    g: ScalarFn<'a>,
    dg: Option<ScalarFn<'a>>,
}

impl<'a> Oscillator<'a> {
    pub fn new<G>(g: G) -> Self
    where
        G: Fn(Complex64) -> Complex64 + Send + Sync + 'a,
    {
        Oscillator { g: Box::new(g), dg: None }
    }

    pub fn with_derivative<D>(mut self, dg: D) -> Self
    where
        D: Fn(Complex64) -> Complex64 + Send + Sync + 'a,
    {
        self.dg = Some(Box::new(dg));
        self
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        (self.g)(z)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match &self.dg {
            Some(dg) => dg(z),
            None => complex_derivative(&self.g, z),
        }
    }
}

/// An endpoint of a univariate oscillatory integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint1D {
    pub x: f64,
    /// One plus the number of derivatives of `g` vanishing at `x`.
    pub alpha_local: u32,
    /// `exp(i w g(x))`.
    pub phase: Complex64,
    /// Which descent branch leaves `x` when `alpha_local > 1`.
    pub side: Side,
}

impl Endpoint1D {
    pub fn new(x: f64, alpha_local: u32, osc: &Oscillator<'_>, omega: f64, side: Side) -> Result<Self> {
        if alpha_local == 0 {
            return Err(Error::InvalidArgument("alpha_local must be >= 1".into()));
        }
        let g = osc.value(Complex64::new(x, 0.0));
        Ok(Endpoint1D {
            x,
            alpha_local,
            phase: (Complex64::i() * omega * g).exp(),
            side,
        })
    }

    /// Checks the declared order against the Taylor coefficients of `g` at
    /// `x`, estimated by a Cauchy integral.
    pub fn validate(&self, osc: &Oscillator<'_>) -> Result<()> {
        let detected = detect_alpha_local(osc, self.x, 8);
        if detected != Some(self.alpha_local) {
            return Err(Error::InvalidArgument(format!(
                "declared alpha_local = {} at x = {} but the phase behaves like order {:?}",
                self.alpha_local, self.x, detected
            )));
        }
        Ok(())
    }
}

/// First order `l <= max_order` whose Taylor coefficient of `g` at `x` is
/// clearly nonzero.
pub fn detect_alpha_local(osc: &Oscillator<'_>, x: f64, max_order: u32) -> Option<u32> {
    let base = Complex64::new(x, 0.0);
    let scale = osc.value(base).norm().max(1.0);
    (1..=max_order).find(|&l| leading_coefficient(|z| osc.value(z), base, l).norm() > 1e-8 * scale)
}

/// `G(x)`: the integral of `f exp(i w g)` along the descent path out of the
/// endpoint, with an `m`-point Gaussian rule for `exp(-t^alpha)`.
pub fn endpoint_contribution<F>(f: F, osc: &Oscillator<'_>, endpoint: &Endpoint1D, omega: f64, m: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
    }
    let alpha = endpoint.alpha_local;
    let rule = gauss_exp_power(m, alpha, 0)?;
    let base = Complex64::new(endpoint.x, 0.0);
    let lead = if alpha == 1 {
        osc.derivative(base)
    } else {
        leading_coefficient(|z| osc.value(z), base, alpha)
    };
    let g = |z: Complex64| osc.value(z);
    let dg = |z: Complex64| osc.derivative(z);
    let a = alpha as f64;
    let ps: Vec<f64> = rule.nodes.iter().map(|t| t.powf(a) / omega).collect();
    let samples = PathProblem {
        g: &g,
        dg: &dg,
        base,
        alpha,
        lead,
        side: endpoint.side,
        n: 1,
        analytic_radius: f64::INFINITY,
        context: format!("endpoint x = {}", endpoint.x),
    }
    .trace(&ps)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for ((t, w), s) in rule.nodes.iter().zip(&rule.weights).zip(&samples) {
        let term = w * t.powf(a - 1.0) * f(s.rho) * s.drho_dp;
        if !(term.re.is_finite() && term.im.is_finite()) {
            return Err(Error::NonFinite { node: *t, value: term });
        }
        acc += term;
    }
    Ok(endpoint.phase * acc * (a / omega))
}

/// `int_a^b f exp(i w g) dx = G(a) - G(b)` for `g` without interior
/// stationary points; the endpoint orders are supplied by the caller.
#[allow(clippy::too_many_arguments)]
pub fn nsd_interval_with_orders<F>(
    f: F,
    osc: &Oscillator<'_>,
    a: f64,
    alpha_a: u32,
    b: f64,
    alpha_b: u32,
    omega: f64,
    m: usize,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("interval needs a < b, got [{a}, {b}]")));
    }
    let left = Endpoint1D::new(a, alpha_a, osc, omega, Side::Forward)?;
    let right = Endpoint1D::new(b, alpha_b, osc, omega, Side::Backward)?;
    Ok(endpoint_contribution(&f, osc, &left, omega, m)? - endpoint_contribution(&f, osc, &right, omega, m)?)
}

/// `nsd_interval_with_orders` with the orders read off `g` at each endpoint.
pub fn nsd_interval<F>(f: F, osc: &Oscillator<'_>, a: f64, b: f64, omega: f64, m: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let order = |x: f64| {
        detect_alpha_local(osc, x, 8)
            .ok_or_else(|| Error::InvalidArgument(format!("phase is flat to order 8 at x = {x}")))
    };
    nsd_interval_with_orders(f, osc, a, order(a)?, b, order(b)?, omega, m)
}

/// `(1/2) sqrt(pi / w) exp(i pi / 4)`, the half-line Fresnel integral
/// `int_0^inf exp(i w x^2) dx`.
pub fn fresnel_half_line(omega: f64) -> Complex64 {
    0.5 * (PI / omega).sqrt() * Complex64::from_polar(1.0, PI / 4.0)
}
