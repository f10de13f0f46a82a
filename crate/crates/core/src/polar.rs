//! Integration in n-spherical coordinates around the special point.
//!
//! The radial integral along every direction is replaced by its
//! steepest-descent form: a central contribution `Q_r` from the origin and,
//! on bounded star-shaped domains, a boundary contribution from `R(Theta)`.
//! The remaining angular integral is smooth and handled by a tensor product
//! of Clenshaw-Curtis and periodic trapezoidal rules.

use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::path::{complex_derivative, Direction, PathProblem, RadialScene, RadialSceneBuilder, Side};
use crate::rules::{clenshaw_curtis, gauss_exp_power, trapezoid_periodic};
use crate::univariate::{nsd_interval, Oscillator};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const PERIOD_TOL: f64 = 1e-12;

/// Cartesian point `r Theta` and the angular part of the volume element,
/// `prod_l sin^(n-1-l)(phi_l)`.
pub fn spherical_map(r: f64, dir: &Direction) -> (Vec<f64>, f64) {
    (dir.unit().iter().map(|u| r * u).collect(), surface_factor(dir))
}

pub fn surface_factor(dir: &Direction) -> f64 {
    let n = dir.dim();
    dir.angles()
        .iter()
        .enumerate()
        .map(|(l, phi)| phi.sin().powi((n - 2 - l) as i32))
        .product()
}

/// A coordinate box in the angles `(phi_1, .., phi_{n-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngularRegion {
    pub n: usize,
    pub boxes: Vec<AngularBox>,
    pub full_sphere: bool,
}

impl AngularRegion {
    /// The whole sphere `[0, pi]^(n-2) x [0, 2 pi]`.
    pub fn full_sphere(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("dimension must be >= 2, got {n}")));
        }
        let mut lo = vec![0.0; n - 1];
        let mut hi = vec![PI; n - 1];
        lo[n - 2] = 0.0;
        hi[n - 2] = 2.0 * PI;
        Ok(AngularRegion {
            n,
            boxes: vec![AngularBox { lo, hi }],
            full_sphere: true,
        })
    }

    /// A planar sector `[theta_a, theta_b]`.
    pub fn sector(theta_a: f64, theta_b: f64) -> Result<Self> {
        Self::from_boxes(2, vec![AngularBox { lo: vec![theta_a], hi: vec![theta_b] }])
    }

    pub fn from_boxes(n: usize, boxes: Vec<AngularBox>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("dimension must be >= 2, got {n}")));
        }
        if boxes.is_empty() {
            return Err(Error::InvalidArgument("an angular region needs at least one box".into()));
        }
        for b in &boxes {
            if b.lo.len() != n - 1 || b.hi.len() != n - 1 {
                return Err(Error::InvalidArgument(format!("boxes in dimension {n} need {} angles", n - 1)));
            }
            for j in 0..n - 1 {
                let top = if j == n - 2 { 2.0 * PI } else { PI };
                if !(b.lo[j] >= -PERIOD_TOL && b.lo[j] < b.hi[j] && b.hi[j] <= top + PERIOD_TOL) {
                    return Err(Error::InvalidArgument(format!(
                        "angle range [{}, {}] for phi_{} lies outside [0, {top}]",
                        b.lo[j],
                        b.hi[j],
                        j + 1
                    )));
                }
            }
        }
        for (i, x) in boxes.iter().enumerate() {
            for y in &boxes[i + 1..] {
                let overlap = (0..n - 1).all(|j| x.lo[j] < y.hi[j] - PERIOD_TOL && y.lo[j] < x.hi[j] - PERIOD_TOL);
                if overlap {
                    return Err(Error::InvalidArgument("angular boxes overlap".into()));
                }
            }
        }
        let full_sphere = boxes.len() == 1
            && (0..n - 1).all(|j| {
                let top = if j == n - 2 { 2.0 * PI } else { PI };
                boxes[0].lo[j].abs() <= PERIOD_TOL && (boxes[0].hi[j] - top).abs() <= PERIOD_TOL
            });
        Ok(AngularRegion { n, boxes, full_sphere })
    }
}

/// Rule used along one angular axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisRule {
    ClenshawCurtis(usize),
    PeriodicTrapezoid(usize),
}

/// Per-axis rules, `phi_1` first; the tensor product runs with `phi_1`
/// outermost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterPlan {
    pub axes: Vec<AxisRule>,
}

impl OuterPlan {
    pub fn new(axes: Vec<AxisRule>) -> Result<Self> {
        for a in &axes {
            let count = match a {
                AxisRule::ClenshawCurtis(k) | AxisRule::PeriodicTrapezoid(k) => *k,
            };
            if count < 2 {
                return Err(Error::InvalidArgument(format!("outer rules need at least 2 points, got {count}")));
            }
        }
        Ok(OuterPlan { axes })
    }

    /// Clenshaw-Curtis on every axis, except a trapezoidal rule on the last
    /// axis when it spans a full period.
    pub fn standard(region: &AngularRegion, cc: usize, trap: usize) -> Result<Self> {
        let n = region.n;
        let periodic = region
            .boxes
            .iter()
            .all(|b| (b.hi[n - 2] - b.lo[n - 2] - 2.0 * PI).abs() <= PERIOD_TOL);
        let mut axes = vec![AxisRule::ClenshawCurtis(cc); n - 1];
        if periodic {
            axes[n - 2] = AxisRule::PeriodicTrapezoid(trap);
        }
        Self::new(axes)
    }

    /// Tensor nodes over the region with weights that include the surface
    /// factor.
    pub fn nodes(&self, region: &AngularRegion) -> Result<Vec<(Direction, f64)>> {
        let n = region.n;
        if self.axes.len() != n - 1 {
            return Err(Error::InvalidArgument(format!(
                "outer plan has {} axes but the region needs {}",
                self.axes.len(),
                n - 1
            )));
        }
        let mut out = Vec::new();
        for b in &region.boxes {
            let mut axis_rules = Vec::with_capacity(n - 1);
            for (j, rule) in self.axes.iter().enumerate() {
                let (lo, hi) = (b.lo[j], b.hi[j]);
                let pts: Vec<(f64, f64)> = match *rule {
                    AxisRule::ClenshawCurtis(k) => clenshaw_curtis(k, lo, hi)?.iter().collect(),
                    AxisRule::PeriodicTrapezoid(k) => {
                        if j != n - 2 || (hi - lo - 2.0 * PI).abs() > PERIOD_TOL {
                            return Err(Error::InvalidArgument(format!(
                                "trapezoidal rule requested on phi_{} over [{lo}, {hi}], which is not a full period",
                                j + 1
                            )));
                        }
                        trapezoid_periodic(k, 2.0 * PI)?.iter().map(|(x, w)| (lo + x, w)).collect()
                    }
                };
                axis_rules.push(pts);
            }
            let mut idx = vec![0usize; n - 1];
            'grid: loop {
                let angles: Vec<f64> = (0..n - 1).map(|j| axis_rules[j][idx[j]].0).collect();
                let w: f64 = (0..n - 1).map(|j| axis_rules[j][idx[j]].1).product();
                let dir = Direction::from_angles_unchecked(&angles);
                let s = surface_factor(&dir);
                out.push((dir, w * s));
                let mut j = n - 1;
                loop {
                    if j == 0 {
                        break 'grid;
                    }
                    j -= 1;
                    idx[j] += 1;
                    if idx[j] < axis_rules[j].len() {
                        break;
                    }
                    idx[j] = 0;
                }
            }
        }
        Ok(out)
    }
}

/// Angular quadrature of `f` over the region: values may be computed in
/// parallel, the weighted sum is taken in node order.
pub fn integrate_angular<F>(region: &AngularRegion, plan: &OuterPlan, f: F) -> Result<Complex64>
where
    F: Fn(&Direction) -> Result<Complex64> + Sync + Send,
{
    let nodes = plan.nodes(region)?;
    #[cfg(feature = "parallel")]
    let values: Vec<Result<Complex64>> = {
        use rayon::prelude::*;
        nodes.par_iter().map(|(d, _)| f(d)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let values: Vec<Result<Complex64>> = nodes.iter().map(|(d, _)| f(d)).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for ((_, w), v) in nodes.iter().zip(values) {
        acc += *w * v?;
    }
    Ok(acc)
}

/// Weight exponent of the radial Gaussian rule: `n - 1` for a regular
/// amplitude, `n - 1 - ceil(nu)` (at least 0) for an amplitude singular of
/// order `nu`.
pub fn radial_weight_degree(n: usize, nu: f64) -> u32 {
    if nu == 0.0 {
        (n - 1) as u32
    } else {
        (n as f64 - 1.0 - nu.ceil()).max(0.0) as u32
    }
}

/// `Q_r(Theta)`: the radial integral from the special point to infinity
/// along `Theta`, evaluated on the steepest-descent path with an `m`-point
/// rule for `x^d exp(-x^alpha)`.
pub fn central_contribution(scene: &RadialScene, dir: &Direction, m: usize) -> Result<Complex64> {
    let n = scene.dim();
    let omega = scene.omega();
    let alpha = scene.alpha();
    let degree = radial_weight_degree(n, scene.singularity_order());
    let rule = gauss_exp_power(m, alpha, degree)?;
    let a = alpha as f64;
    let ps: Vec<f64> = rule.nodes.iter().map(|x| x.powf(a) / omega).collect();
    let samples = scene.origin_samples(dir, &ps)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for ((x, w), s) in rule.nodes.iter().zip(&rule.weights).zip(&samples) {
        let term = w * x.powf(a - 1.0 - degree as f64) * scene.amplitude(s.rho, dir) * s.jac;
        if !(term.re.is_finite() && term.im.is_finite()) {
            return Err(Error::NonFinite { node: *x, value: term });
        }
        acc += term;
    }
    Ok(acc * (a / (n as f64 * omega)))
}

/// The boundary term of the radial integral at `R(Theta)`, including its
/// sign: the radial integral over `[0, R]` is
/// `central_contribution + boundary_contribution`.
pub fn boundary_contribution(scene: &RadialScene, dir: &Direction, m: usize) -> Result<Complex64> {
    let amp = boundary_amplitude(scene, dir, m)?;
    let radius = scene.boundary(dir).expect("boundary_amplitude checks boundedness");
    let g_r = scene.oscillator(Complex64::new(radius, 0.0), dir);
    Ok(amp * (I * scene.omega() * g_r).exp())
}

/// `boundary_contribution` without the factor `exp(i w g(R, Theta))`.
pub fn boundary_amplitude(scene: &RadialScene, dir: &Direction, m: usize) -> Result<Complex64> {
    let radius = scene
        .boundary(dir)
        .ok_or_else(|| Error::InvalidScene("boundary contribution needs a bounded scene".into()))?;
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidScene(format!("R({dir}) = {radius} must be finite and positive")));
    }
    let omega = scene.omega();
    let n = scene.dim() as f64;
    let rule = gauss_exp_power(m, 1, 0)?;
    let ps: Vec<f64> = rule.nodes.iter().map(|x| x / omega).collect();
    let samples = scene.boundary_samples(dir, &ps)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for ((x, w), s) in rule.nodes.iter().zip(&rule.weights).zip(&samples) {
        let term = w * scene.amplitude(s.rho, dir) * s.jac;
        if !(term.re.is_finite() && term.im.is_finite()) {
            return Err(Error::NonFinite { node: *x, value: term });
        }
        acc += term;
    }
    Ok(-acc / (n * omega))
}

fn check_region(scene: &RadialScene, region: &AngularRegion) -> Result<()> {
    if scene.dim() != region.n {
        return Err(Error::InvalidArgument(format!(
            "scene has dimension {} but the angular region has {}",
            scene.dim(),
            region.n
        )));
    }
    Ok(())
}

/// Integral over the infinite cone spanned by `region`.
pub fn integrate_unbounded(scene: &RadialScene, region: &AngularRegion, plan: &OuterPlan, m: usize) -> Result<Complex64> {
    check_region(scene, region)?;
    let v = integrate_angular(region, plan, |d| central_contribution(scene, d, m))?;
    Ok(scene.phase_at_origin() * v)
}

/// Integral over the star-shaped domain `r < R(Theta)` with a classical
/// outer rule applied to `Q_r + boundary_contribution`. The outer integrand
/// oscillates like `exp(i w g(R(Theta), Theta))`; a warning is logged when
/// that phase is not constant over the outer nodes.
pub fn integrate_star_shaped(scene: &RadialScene, region: &AngularRegion, plan: &OuterPlan, m: usize) -> Result<Complex64> {
    check_region(scene, region)?;
    if !scene.is_bounded() {
        return Err(Error::InvalidScene("star-shaped integration needs a boundary radius".into()));
    }
    let nodes = plan.nodes(region)?;
    let phases: Vec<f64> = nodes
        .iter()
        .filter_map(|(d, _)| scene.boundary(d).map(|r| scene.oscillator(Complex64::new(r, 0.0), d).re))
        .collect();
    let (lo, hi) = phases
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if scene.omega() * (hi - lo) > 1e-8 {
        log::warn!(
            "boundary phase varies by {:.3e} over the outer nodes; the classical outer rule sees an oscillatory integrand (use the oscillatory outer treatment)",
            scene.omega() * (hi - lo)
        );
    }
    let v = integrate_angular(region, plan, |d| Ok(central_contribution(scene, d, m)? + boundary_contribution(scene, d, m)?))?;
    Ok(scene.phase_at_origin() * v)
}

pub type ComplexAngleFn = Box<dyn Fn(Complex64) -> Complex64 + Send + Sync>;
pub type ComplexRadialFn = Box<dyn Fn(Complex64, Complex64) -> Complex64 + Send + Sync>;

/// A planar boundary continued to complex angles: `R(theta)`, the amplitude
/// `f(z, theta)`, the oscillator `g(z, theta)` and its `z`-derivative.
pub struct ComplexBoundary {
    pub radius: ComplexAngleFn,
    pub amplitude: ComplexRadialFn,
    pub oscillator: ComplexRadialFn,
    pub oscillator_dz: Option<ComplexRadialFn>,
}

impl ComplexBoundary {
    fn dz(&self, z: Complex64, theta: Complex64) -> Complex64 {
        match &self.oscillator_dz {
            Some(d) => d(z, theta),
            None => complex_derivative(|w| (self.oscillator)(w, theta), z),
        }
    }

    /// `g(R(theta), theta)`.
    pub fn boundary_phase(&self, theta: Complex64) -> Complex64 {
        (self.oscillator)((self.radius)(theta), theta)
    }

    /// Boundary amplitude at a complex angle (planar, so `n = 2`).
    pub fn amplitude_at(&self, theta: Complex64, omega: f64, m: usize) -> Result<Complex64> {
        let rule = gauss_exp_power(m, 1, 0)?;
        let base = (self.radius)(theta);
        let g = |z: Complex64| (self.oscillator)(z, theta);
        let dg = |z: Complex64| self.dz(z, theta);
        let ps: Vec<f64> = rule.nodes.iter().map(|x| x / omega).collect();
        let samples = PathProblem {
            g: &g,
            dg: &dg,
            base,
            alpha: 1,
            lead: dg(base),
            side: Side::Forward,
            n: 2,
            analytic_radius: f64::INFINITY,
            context: format!("boundary path at complex angle {theta}"),
        }
        .trace(&ps)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, s) in rule.weights.iter().zip(&samples) {
            acc += w * (self.amplitude)(s.rho, theta) * s.jac;
        }
        Ok(-acc / (2.0 * omega))
    }
}

/// Planar star-shaped integral over `[theta_a, theta_b]` whose boundary term
/// is integrated in `theta` by univariate steepest descent, split at the
/// given stationary points of `g(R(theta), theta)`.
#[allow(clippy::too_many_arguments)]
pub fn integrate_star_shaped_oscillatory(
    scene: &RadialScene,
    boundary: &ComplexBoundary,
    theta_a: f64,
    theta_b: f64,
    stationary: &[f64],
    outer_cc: usize,
    m_radial: usize,
    m_angular: usize,
) -> Result<Complex64> {
    if scene.dim() != 2 {
        return Err(Error::InvalidScene("the oscillatory outer treatment is planar".into()));
    }
    let region = AngularRegion::sector(theta_a, theta_b)?;
    let plan = OuterPlan::new(vec![AxisRule::ClenshawCurtis(outer_cc)])?;
    let central = integrate_angular(&region, &plan, |d| central_contribution(scene, d, m_radial))?;

    let mut cuts: Vec<f64> = stationary.iter().copied().filter(|t| *t > theta_a && *t < theta_b).collect();
    cuts.sort_by(|a, b| a.total_cmp(b));
    let mut bounds = vec![theta_a];
    bounds.extend(cuts);
    bounds.push(theta_b);

    let omega = scene.omega();
    let first_error: Mutex<Option<Error>> = Mutex::new(None);
    let amp = |t: Complex64| match boundary.amplitude_at(t, omega, m_radial) {
        Ok(v) => v,
        Err(e) => {
            let mut slot = first_error.lock().expect("error slot");
            slot.get_or_insert(e);
            Complex64::new(f64::NAN, f64::NAN)
        }
    };
    let phase = Oscillator::new(|t| boundary.boundary_phase(t));
    let mut outer = Complex64::new(0.0, 0.0);
    for w in bounds.windows(2) {
        let piece = nsd_interval(amp, &phase, w[0], w[1], omega, m_angular);
        if let Some(e) = first_error.lock().expect("error slot").take() {
            return Err(e);
        }
        outer += piece?;
    }
    Ok(scene.phase_at_origin() * (central + outer))
}

pub type CartesianFn = std::sync::Arc<dyn Fn(&[Complex64]) -> Complex64 + Send + Sync>;

/// Moves the special point `x0` of `f exp(i w g)` to the origin:
/// `f(z, Theta) = f(x0 + z Theta)`, `g(z, Theta) = g(x0 + z Theta) - g(x0)`,
/// and the phase `exp(i w g(x0))` is carried by the scene. The returned
/// builder still takes the order, boundary and the other options.
pub fn normalize_scene(x0: &[f64], f: CartesianFn, g: CartesianFn, omega: f64) -> Result<RadialSceneBuilder> {
    let n = x0.len();
    let origin: Vec<Complex64> = x0.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let g0 = g(&origin);
    if !(g0.re.is_finite() && g0.im.is_finite()) {
        return Err(Error::InvalidScene(format!("g is not finite at the special point ({g0})")));
    }
    let point = {
        let origin = origin.clone();
        move |z: Complex64, d: &Direction| -> Vec<Complex64> {
            origin.iter().zip(d.unit()).map(|(o, u)| o + z * u).collect()
        }
    };
    let p1 = point.clone();
    let amplitude = move |z: Complex64, d: &Direction| f(&p1(z, d));
    let oscillator = move |z: Complex64, d: &Direction| g(&point(z, d)) - g0;
    Ok(RadialScene::builder(n, omega, amplitude, oscillator).phase_at_origin((I * omega * g0).exp()))
}

/// Distance from an interior point of `[0, a] x [0, b]` to the boundary
/// along the planar direction `theta`.
pub fn rectangle_radius(x0: f64, y0: f64, a: f64, b: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let mut r = f64::INFINITY;
    if c > 0.0 {
        r = r.min((a - x0) / c);
    } else if c < 0.0 {
        r = r.min(-x0 / c);
    }
    if s > 0.0 {
        r = r.min((b - y0) / s);
    } else if s < 0.0 {
        r = r.min(-y0 / s);
    }
    r
}
