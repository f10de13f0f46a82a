//! Steepest-descent paths.
//!
//! A path from a base point `x` solves `g(rho(p)) = g(x) + i p` for
//! `p >= 0`, turning `exp(i w g)` into `exp(i w g(x)) exp(-w p)`. The tracer
//! below solves it by Newton continuation in `p`: the first point is seeded
//! from the local series `rho - x ~ (i p / c)^(1/alpha)` and every later point
//! is warm-started from its predecessor, with step halving when a corrector
//! fails. That keeps the solution on one branch.
//!
//! Radial scenes (the restriction of an n-dimensional integrand to a ray
//! `r Theta` out of the special point) live here too, together with a small
//! registry of closed-form paths.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Residual bound on traced samples, relative to `max(1, |g(base)| + p)`.
pub const PATH_RESIDUAL_TOL: f64 = 1e-12;
/// Newton iteration budget per requested sample.
pub const NEWTON_MAX_ITER: usize = 50;
/// Below this derivative magnitude the path is declared degenerate.
pub const DEGENERATE_DERIVATIVE: f64 = 1e-14;

/// Which way a path leaves a base point with `alpha > 1`: `Forward` is the
/// root adjacent to the positive real direction, `Backward` the one adjacent
/// to the negative real direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Forward,
    Backward,
}

/// A point on the (n-1)-sphere in n-spherical angles
/// `(phi_1, .., phi_{n-1})`, `phi_j` in `[0, pi]` except the last, which
/// lies in `[0, 2 pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    angles: Vec<f64>,
    unit: Vec<f64>,
}

impl Direction {
    pub fn new(angles: &[f64]) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidArgument("a direction needs at least one angle".into()));
        }
        let slack = 1e-12;
        let last = angles.len() - 1;
        for (j, &phi) in angles.iter().enumerate() {
            let hi = if j == last { 2.0 * PI } else { PI };
            if !(phi >= -slack && phi <= hi + slack) {
                return Err(Error::InvalidArgument(format!(
                    "angle phi_{} = {phi} outside [0, {hi}]",
                    j + 1
                )));
            }
        }
        Ok(Self::from_angles_unchecked(angles))
    }

    /// Planar direction at angle `theta` (any real value).
    pub fn planar(theta: f64) -> Self {
        Self::from_angles_unchecked(&[theta])
    }

    pub(crate) fn from_angles_unchecked(angles: &[f64]) -> Self {
        let n = angles.len() + 1;
        let mut unit = Vec::with_capacity(n);
        let mut sines = 1.0;
        for &phi in angles {
            unit.push(sines * phi.cos());
            sines *= phi.sin();
        }
        unit.push(sines);
        Direction {
            angles: angles.to_vec(),
            unit,
        }
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn unit(&self) -> &[f64] {
        &self.unit
    }

    /// The single angle of a planar direction.
    pub fn theta(&self) -> f64 {
        self.angles[0]
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Theta(")?;
        for (j, a) in self.angles.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a:.6}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample {
    pub p: f64,
    pub rho: Complex64,
    pub drho_dp: Complex64,
    /// `d(rho^n)/dp = n rho^(n-1) drho/dp`.
    pub jac: Complex64,
    pub residual: f64,
}

/// Fourth-order central difference in the complex plane.
pub fn complex_derivative<F>(f: F, z: Complex64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let h = 1e-3 * z.norm().max(1.0);
    (f(z - 2.0 * h) - f(z + 2.0 * h) + 8.0 * (f(z + h) - f(z - h))) / (12.0 * h)
}

/// Leading Taylor coefficient `g^(alpha)(x) / alpha!` by a Cauchy integral on
/// a small circle (32-point trapezoid).
pub fn leading_coefficient<F>(g: F, x: Complex64, alpha: u32) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let n = 32;
    let r = 0.05 * x.norm().max(1.0);
    let g0 = g(x);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let t = 2.0 * PI * k as f64 / n as f64;
        let e = Complex64::from_polar(1.0, t);
        acc += (g(x + r * e) - g0) * Complex64::from_polar(1.0, -(alpha as f64) * t);
    }
    acc / (n as f64 * r.powi(alpha as i32))
}

/// The analytic phase a path is traced for: `g`, its derivative, the base
/// point, its local order and leading coefficient.
pub struct PathProblem<'a> {
    pub g: &'a (dyn Fn(Complex64) -> Complex64 + 'a),
    pub dg: &'a (dyn Fn(Complex64) -> Complex64 + 'a),
    pub base: Complex64,
    pub alpha: u32,
    pub lead: Complex64,
    pub side: Side,
    /// Exponent in the Jacobian factor `d(rho^n)/dp`; 1 gives `drho/dp`.
    pub n: usize,
    /// Paths may not leave the disc of this radius around `base`.
    pub analytic_radius: f64,
    pub context: String,
}

impl PathProblem<'_> {
    fn seed(&self, p: f64) -> Complex64 {
        let a = self.alpha as f64;
        let principal = (I * p / self.lead).powf(1.0 / a);
        if self.alpha == 1 {
            return self.base + principal;
        }
        let root = match self.side {
            Side::Forward => (0..self.alpha)
                .map(|k| principal * Complex64::from_polar(1.0, 2.0 * PI * k as f64 / a))
                .max_by(|u, v| u.re.total_cmp(&v.re))
                .unwrap(),
            Side::Backward => (0..self.alpha)
                .map(|k| principal * Complex64::from_polar(1.0, 2.0 * PI * k as f64 / a))
                .min_by(|u, v| u.re.total_cmp(&v.re))
                .unwrap(),
        };
        self.base + root
    }

    fn sample(&self, p: f64, rho: Complex64, target: Complex64) -> Result<PathSample> {
        let d = (self.dg)(rho);
        if d.norm() < DEGENERATE_DERIVATIVE {
            return Err(Error::DegeneratePath {
                p,
                derivative: d.norm(),
                context: self.context.clone(),
            });
        }
        let drho = I / d;
        let n = self.n as i32;
        let jac = if n == 1 { drho } else { rho.powi(n - 1) * drho * n as f64 };
        Ok(PathSample {
            p,
            rho,
            drho_dp: drho,
            jac,
            residual: ((self.g)(rho) - target).norm(),
        })
    }

    /// Newton on `g(rho) = target` starting at `rho`. Returns the root and
    /// the number of iterations used, or `None` when it stalls.
    fn newton(&self, mut rho: Complex64, target: Complex64, budget: usize, scale: f64) -> Option<(Complex64, usize)> {
        let tol = 2.0 * f64::EPSILON * scale;
        for it in 0..budget {
            let r = (self.g)(rho) - target;
            if r.norm() <= tol {
                return Some((rho, it));
            }
            let d = (self.dg)(rho);
            if d.norm() < DEGENERATE_DERIVATIVE || !d.re.is_finite() || !d.im.is_finite() {
                return None;
            }
            let step = r / d;
            rho -= step;
            if !(rho.re.is_finite() && rho.im.is_finite()) {
                return None;
            }
            if step.norm() <= 2.0 * f64::EPSILON * rho.norm().max(1e-300) {
                return Some((rho, it + 1));
            }
        }
        let r = ((self.g)(rho) - target).norm();
        (r <= PATH_RESIDUAL_TOL * scale).then_some((rho, budget))
    }

    /// Trace the path at the requested ascending `p` values.
    pub fn trace(&self, p_list: &[f64]) -> Result<Vec<PathSample>> {
        if p_list.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
            return Err(Error::InvalidArgument("path parameters must be positive and finite".into()));
        }
        if p_list.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidArgument("path parameters must be ascending".into()));
        }
        if p_list.is_empty() {
            return Ok(Vec::new());
        }
        let g0 = (self.g)(self.base);
        let scale_of = |p: f64| (g0.norm() + p).max(1.0);

        let (mut p_cur, mut rho_cur) = if self.alpha == 1 {
            (0.0, self.base)
        } else {
            let p_start = p_list[0].min(1e-8 * self.lead.norm().max(1e-300));
            let target = g0 + I * p_start;
            let seed = self.seed(p_start);
            let (rho, _) = self
                .newton(seed, target, NEWTON_MAX_ITER, scale_of(p_start))
                .ok_or_else(|| self.newton_error(p_start))?;
            (p_start, rho)
        };

        let mut out = Vec::with_capacity(p_list.len());
        for &p_target in p_list {
            let mut used = 0usize;
            let mut step = p_target - p_cur;
            while p_cur < p_target {
                let h = step.min(p_target - p_cur);
                let p_next = if h >= p_target - p_cur { p_target } else { p_cur + h };
                let d0 = (self.dg)(rho_cur);
                if d0.norm() < DEGENERATE_DERIVATIVE && p_cur > 0.0 {
                    return Err(Error::DegeneratePath {
                        p: p_cur,
                        derivative: d0.norm(),
                        context: self.context.clone(),
                    });
                }
                // Heun predictor on drho/dp = i / g'(rho)
                let k1 = I / d0;
                let mid = rho_cur + k1 * (p_next - p_cur);
                let k2 = I / (self.dg)(mid);
                let pred = rho_cur + 0.5 * (k1 + k2) * (p_next - p_cur);
                let target = g0 + I * p_next;
                let accepted = if pred.re.is_finite() && pred.im.is_finite() {
                    self.newton(pred, target, 12, scale_of(p_next)).filter(|(rho, _)| {
                        let jump = (*rho - pred).norm();
                        let travel = (pred - rho_cur).norm();
                        jump <= 0.5 * travel + 1e-12 * rho.norm().max(1.0)
                    })
                } else {
                    None
                };
                match accepted {
                    Some((rho, its)) => {
                        used += its.max(1);
                        p_cur = p_next;
                        rho_cur = rho;
                        step = (2.0 * h).min(p_target);
                    }
                    None => {
                        step = 0.5 * h;
                        used += 1;
                        if step < 1e-14 * p_target.max(1.0) || used > 40 * NEWTON_MAX_ITER {
                            return Err(self.newton_error(p_next));
                        }
                    }
                }
            }
            // polish at the requested point
            let target = g0 + I * p_target;
            let (rho, _) = self
                .newton(rho_cur, target, NEWTON_MAX_ITER, scale_of(p_target))
                .ok_or_else(|| self.newton_error(p_target))?;
            rho_cur = rho;
            if (rho - self.base).norm() > self.analytic_radius {
                return Err(Error::InvalidScene(format!(
                    "path left the declared analytic region (|rho - base| = {:.3e} > {:.3e}) at p = {p_target} ({})",
                    (rho - self.base).norm(),
                    self.analytic_radius,
                    self.context
                )));
            }
            let s = self.sample(p_target, rho, target)?;
            if s.residual > PATH_RESIDUAL_TOL * scale_of(p_target) {
                return Err(self.newton_error(p_target));
            }
            out.push(s);
        }
        Ok(out)
    }

    fn newton_error(&self, p: f64) -> Error {
        Error::NewtonFailed {
            p,
            iterations: NEWTON_MAX_ITER,
            context: self.context.clone(),
        }
    }
}

pub type AmplitudeFn = Arc<dyn Fn(Complex64, &Direction) -> Complex64 + Send + Sync>;
pub type DirectionalFn = Arc<dyn Fn(&Direction) -> f64 + Send + Sync>;
/// Closed-form path `p -> (rho, drho/dp)` for a direction.
pub type PathFn = Arc<dyn Fn(f64, &Direction) -> (Complex64, Complex64) + Send + Sync>;

/// An integrand restricted to rays out of the special point: amplitude
/// `f(z, Theta)`, oscillator `g(z, Theta)` with `g(0, Theta) = 0`, both
/// analytic in the radial variable `z`.
#[derive(Clone)]
pub struct RadialScene {
    n: usize,
    omega: f64,
    amplitude: AmplitudeFn,
    oscillator: AmplitudeFn,
    oscillator_dz: Option<AmplitudeFn>,
    alpha: u32,
    alpha_coeff: DirectionalFn,
    singularity_order: f64,
    boundary: Option<DirectionalFn>,
    phase_at_origin: Complex64,
    analytic_radius: Option<DirectionalFn>,
    origin_path: Option<PathFn>,
    boundary_path: Option<PathFn>,
}

impl fmt::Debug for RadialScene {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialScene")
            .field("n", &self.n)
            .field("omega", &self.omega)
            .field("alpha", &self.alpha)
            .field("singularity_order", &self.singularity_order)
            .field("bounded", &self.boundary.is_some())
            .field("phase_at_origin", &self.phase_at_origin)
            .finish_non_exhaustive()
    }
}

pub struct RadialSceneBuilder {
    scene: RadialScene,
    coeff_set: bool,
}

impl RadialSceneBuilder {
    pub fn oscillator_dz<F>(mut self, dg: F) -> Self
    where
        F: Fn(Complex64, &Direction) -> Complex64 + Send + Sync + 'static,
    {
        self.scene.oscillator_dz = Some(Arc::new(dg));
        self
    }

    pub fn alpha(mut self, alpha: u32) -> Self {
        self.scene.alpha = alpha;
        self
    }

    /// Leading radial Taylor coefficient of the oscillator,
    /// `d^alpha g / dr^alpha (0+) / alpha!`. Estimated by a Cauchy integral
    /// when not given.
    pub fn alpha_coeff<F>(mut self, c: F) -> Self
    where
        F: Fn(&Direction) -> f64 + Send + Sync + 'static,
    {
        self.scene.alpha_coeff = Arc::new(c);
        self.coeff_set = true;
        self
    }

    pub fn singularity_order(mut self, nu: f64) -> Self {
        self.scene.singularity_order = nu;
        self
    }

    pub fn boundary<F>(mut self, r: F) -> Self
    where
        F: Fn(&Direction) -> f64 + Send + Sync + 'static,
    {
        self.scene.boundary = Some(Arc::new(r));
        self
    }

    pub fn phase_at_origin(mut self, phase: Complex64) -> Self {
        self.scene.phase_at_origin = phase;
        self
    }

    pub fn analytic_radius<F>(mut self, r: F) -> Self
    where
        F: Fn(&Direction) -> f64 + Send + Sync + 'static,
    {
        self.scene.analytic_radius = Some(Arc::new(r));
        self
    }

    /// Analytic origin path used instead of Newton tracing.
    pub fn origin_path<F>(mut self, path: F) -> Self
    where
        F: Fn(f64, &Direction) -> (Complex64, Complex64) + Send + Sync + 'static,
    {
        self.scene.origin_path = Some(Arc::new(path));
        self
    }

    /// Analytic boundary path used instead of Newton tracing.
    pub fn boundary_path<F>(mut self, path: F) -> Self
    where
        F: Fn(f64, &Direction) -> (Complex64, Complex64) + Send + Sync + 'static,
    {
        self.scene.boundary_path = Some(Arc::new(path));
        self
    }

    pub fn build(mut self) -> Result<RadialScene> {
        let s = &self.scene;
        if s.n < 2 {
            return Err(Error::InvalidScene(format!("dimension must be >= 2, got {}", s.n)));
        }
        if !(s.omega > 0.0) || !s.omega.is_finite() {
            return Err(Error::InvalidScene(format!("omega must be positive, got {}", s.omega)));
        }
        if s.alpha == 0 {
            return Err(Error::InvalidScene("alpha must be >= 1".into()));
        }
        if !(s.singularity_order >= 0.0) || s.singularity_order >= s.n as f64 {
            return Err(Error::InvalidScene(format!(
                "singularity order nu = {} must satisfy 0 <= nu < n = {}",
                s.singularity_order, s.n
            )));
        }
        if !self.coeff_set {
            let g = Arc::clone(&s.oscillator);
            let alpha = s.alpha;
            self.scene.alpha_coeff = Arc::new(move |dir: &Direction| {
                leading_coefficient(|z| g(z, dir), Complex64::new(0.0, 0.0), alpha).re
            });
        }
        Ok(self.scene)
    }
}

impl RadialScene {
    /// Start a scene in `n` dimensions at frequency `omega`. Defaults:
    /// alpha = 1, nu = 0, unbounded, unit phase at the origin.
    pub fn builder<F, G>(n: usize, omega: f64, amplitude: F, oscillator: G) -> RadialSceneBuilder
    where
        F: Fn(Complex64, &Direction) -> Complex64 + Send + Sync + 'static,
        G: Fn(Complex64, &Direction) -> Complex64 + Send + Sync + 'static,
    {
        RadialSceneBuilder {
            scene: RadialScene {
                n,
                omega,
                amplitude: Arc::new(amplitude),
                oscillator: Arc::new(oscillator),
                oscillator_dz: None,
                alpha: 1,
                alpha_coeff: Arc::new(|_| 1.0),
                singularity_order: 0.0,
                boundary: None,
                phase_at_origin: Complex64::new(1.0, 0.0),
                analytic_radius: None,
                origin_path: None,
                boundary_path: None,
            },
            coeff_set: false,
        }
    }

    /// Same scene at another frequency.
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidScene(format!("omega must be positive, got {omega}")));
        }
        let mut s = self.clone();
        s.omega = omega;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn singularity_order(&self) -> f64 {
        self.singularity_order
    }

    pub fn phase_at_origin(&self) -> Complex64 {
        self.phase_at_origin
    }

    pub fn amplitude(&self, z: Complex64, dir: &Direction) -> Complex64 {
        (self.amplitude)(z, dir)
    }

    pub fn oscillator(&self, z: Complex64, dir: &Direction) -> Complex64 {
        (self.oscillator)(z, dir)
    }

    pub fn oscillator_dz(&self, z: Complex64, dir: &Direction) -> Complex64 {
        match &self.oscillator_dz {
            Some(dg) => dg(z, dir),
            None => complex_derivative(|w| (self.oscillator)(w, dir), z),
        }
    }

    pub fn alpha_coeff(&self, dir: &Direction) -> f64 {
        (self.alpha_coeff)(dir)
    }

    /// `R(Theta)`, or `None` for an unbounded cone.
    pub fn boundary(&self, dir: &Direction) -> Option<f64> {
        self.boundary.as_ref().map(|r| r(dir))
    }

    pub fn is_bounded(&self) -> bool {
        self.boundary.is_some()
    }

    pub fn has_closed_form_origin_path(&self) -> bool {
        self.origin_path.is_some()
    }

    fn analytic_radius(&self, dir: &Direction) -> f64 {
        self.analytic_radius.as_ref().map_or(f64::INFINITY, |r| r(dir))
    }

    pub fn has_closed_form_boundary_path(&self) -> bool {
        self.boundary_path.is_some()
    }

    fn closed_form_samples(&self, path: &PathFn, dir: &Direction, p_list: &[f64], g_base: Complex64) -> Vec<PathSample> {
        let n = self.n as i32;
        p_list
            .iter()
            .map(|&p| {
                let (rho, drho) = path(p, dir);
                PathSample {
                    p,
                    rho,
                    drho_dp: drho,
                    jac: rho.powi(n - 1) * drho * n as f64,
                    residual: (self.oscillator(rho, dir) - g_base - I * p).norm(),
                }
            })
            .collect()
    }

    /// Origin path at the given `p`, from the closed form when the scene
    /// carries one and from the Newton tracer otherwise.
    pub fn origin_samples(&self, dir: &Direction, p_list: &[f64]) -> Result<Vec<PathSample>> {
        match &self.origin_path {
            Some(path) => Ok(self.closed_form_samples(path, dir, p_list, Complex64::new(0.0, 0.0))),
            None => trace_origin_path(self, dir, p_list),
        }
    }

    /// Boundary path at the given `p`, closed form when available.
    pub fn boundary_samples(&self, dir: &Direction, p_list: &[f64]) -> Result<Vec<PathSample>> {
        match &self.boundary_path {
            Some(path) => {
                let radius = self
                    .boundary(dir)
                    .ok_or_else(|| Error::InvalidScene("boundary path requested on an unbounded scene".into()))?;
                let g_base = self.oscillator(Complex64::new(radius, 0.0), dir);
                Ok(self.closed_form_samples(path, dir, p_list, g_base))
            }
            None => trace_boundary_path(self, dir, p_list),
        }
    }

    /// Checks the scene's structural conditions at the given directions:
    /// normalisation, vanishing of the first alpha-1 radial derivatives,
    /// positive alpha-th derivative, and radial monotonicity on (0, R).
    pub fn validate(&self, dirs: &[Direction]) -> Result<()> {
        let zero = Complex64::new(0.0, 0.0);
        for dir in dirs {
            if dir.dim() != self.n {
                return Err(Error::InvalidScene(format!(
                    "direction {dir} has dimension {} but the scene has {}",
                    dir.dim(),
                    self.n
                )));
            }
            let g0 = self.oscillator(zero, dir);
            if g0.norm() > 1e-14 {
                return Err(Error::InvalidScene(format!("g(0, {dir}) = {g0} is not normalised to 0")));
            }
            let g = |z: Complex64| self.oscillator(z, dir);
            for l in 1..self.alpha {
                let c = leading_coefficient(g, zero, l);
                if c.norm() > 1e-6 {
                    return Err(Error::InvalidScene(format!(
                        "radial derivative of order {l} does not vanish at {dir} ({c})"
                    )));
                }
            }
            let c = leading_coefficient(g, zero, self.alpha);
            if !(c.re > 0.0) || self.alpha_coeff(dir) <= 0.0 {
                return Err(Error::InvalidScene(format!(
                    "radial derivative of order {} is not positive at {dir}",
                    self.alpha
                )));
            }
            let r_max = self.boundary(dir).unwrap_or(10.0);
            for k in 1..=32 {
                let r = r_max * k as f64 / 32.0;
                let d = self.oscillator_dz(Complex64::new(r, 0.0), dir);
                if !(d.re > 0.0) {
                    return Err(Error::InvalidScene(format!(
                        "oscillator is not increasing along the ray at r = {r}, {dir}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Path `g(rho, Theta) = i p` out of the special point, principal branch
/// (argument in `(0, pi/alpha)` for a real positive leading coefficient).
pub fn trace_origin_path(scene: &RadialScene, dir: &Direction, p_list: &[f64]) -> Result<Vec<PathSample>> {
    let coeff = scene.alpha_coeff(dir);
    if !(coeff > 1e-14) {
        return Err(Error::DegeneratePath {
            p: 0.0,
            derivative: coeff,
            context: format!("leading coefficient vanishes at {dir}"),
        });
    }
    let g = |z: Complex64| scene.oscillator(z, dir);
    let dg = |z: Complex64| scene.oscillator_dz(z, dir);
    PathProblem {
        g: &g,
        dg: &dg,
        base: Complex64::new(0.0, 0.0),
        alpha: scene.alpha,
        lead: Complex64::new(coeff, 0.0),
        side: Side::Forward,
        n: scene.n,
        analytic_radius: scene.analytic_radius(dir),
        context: format!("origin path at {dir}"),
    }
    .trace(p_list)
}

/// Path `g(rho, Theta) = g(R(Theta), Theta) + i p` out of the boundary point.
pub fn trace_boundary_path(scene: &RadialScene, dir: &Direction, p_list: &[f64]) -> Result<Vec<PathSample>> {
    let radius = scene
        .boundary(dir)
        .ok_or_else(|| Error::InvalidScene("boundary path requested on an unbounded scene".into()))?;
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidScene(format!("R({dir}) = {radius} must be finite and positive")));
    }
    let base = Complex64::new(radius, 0.0);
    let g = |z: Complex64| scene.oscillator(z, dir);
    let dg = |z: Complex64| scene.oscillator_dz(z, dir);
    let d = dg(base);
    PathProblem {
        g: &g,
        dg: &dg,
        base,
        alpha: 1,
        lead: d,
        side: Side::Forward,
        n: scene.n,
        analytic_radius: f64::INFINITY,
        context: format!("boundary path at {dir}"),
    }
    .trace(p_list)
}

/// Registered analytic paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFormPath {
    /// `g = s r`: `rho = i p / s`.
    LinearRadial { slope: f64 },
    /// `g = s r` from `r = R`: `rho = R + i p / s`.
    LinearBoundary { radius: f64, slope: f64 },
    /// `g = c r^2`: `rho = sqrt(i p / c)`, principal root.
    QuadraticRadial { coeff: f64 },
    /// `a sec(h) = a + i q` from `theta = 0`.
    DuctH11 { a: f64 },
    /// `a sec(h) = eta + i q` from `theta = beta`.
    DuctH12 { a: f64, b: f64 },
    /// `b csc(h) = eta + i q` from `theta = beta`.
    DuctH21 { a: f64, b: f64 },
    /// `b csc(h) = b + i q` from `theta = pi/2`.
    DuctH22 { b: f64 },
}

pub const REGISTERED_PATHS: [&str; 7] = [
    "linear-radial",
    "linear-boundary",
    "quadratic-radial",
    "duct-corner-h11",
    "duct-corner-h12",
    "duct-corner-h21",
    "duct-corner-h22",
];

/// Look up a registered path by key.
pub fn closed_form_path(key: &str, params: &[f64]) -> Result<ClosedFormPath> {
    let need = |k: usize| -> Result<()> {
        if params.len() != k || params.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            Err(Error::InvalidArgument(format!(
                "path {key:?} takes {k} positive parameter(s), got {params:?}"
            )))
        } else {
            Ok(())
        }
    };
    let path = match key {
        "linear-radial" => {
            need(1)?;
            ClosedFormPath::LinearRadial { slope: params[0] }
        }
        "linear-boundary" => {
            need(2)?;
            ClosedFormPath::LinearBoundary { radius: params[0], slope: params[1] }
        }
        "quadratic-radial" => {
            need(1)?;
            ClosedFormPath::QuadraticRadial { coeff: params[0] }
        }
        "duct-corner-h11" => {
            need(1)?;
            ClosedFormPath::DuctH11 { a: params[0] }
        }
        "duct-corner-h12" => {
            need(2)?;
            ClosedFormPath::DuctH12 { a: params[0], b: params[1] }
        }
        "duct-corner-h21" => {
            need(2)?;
            ClosedFormPath::DuctH21 { a: params[0], b: params[1] }
        }
        "duct-corner-h22" => {
            need(1)?;
            ClosedFormPath::DuctH22 { b: params[0] }
        }
        other => return Err(Error::UnknownPath(other.to_string())),
    };
    Ok(path)
}

/// `h` with `sec h = 1 + i q / a`, accurate for small `q`: solves
/// `sin(h/2) = sqrt(i q / (2 (a + i q)))` and refines by Newton.
fn arcsec_near_one(q: f64, a: f64) -> Complex64 {
    let iq = I * q;
    let sigma = (iq / (2.0 * (a + iq))).sqrt();
    let mut h = 2.0 * sigma.asin();
    for _ in 0..3 {
        let f = (0.5 * h).sin() - sigma;
        let step = f / (0.5 * (0.5 * h).cos());
        h -= step;
        if step.norm() <= f64::EPSILON * h.norm() {
            break;
        }
    }
    h
}

impl ClosedFormPath {
    pub fn key(&self) -> &'static str {
        match self {
            ClosedFormPath::LinearRadial { .. } => "linear-radial",
            ClosedFormPath::LinearBoundary { .. } => "linear-boundary",
            ClosedFormPath::QuadraticRadial { .. } => "quadratic-radial",
            ClosedFormPath::DuctH11 { .. } => "duct-corner-h11",
            ClosedFormPath::DuctH12 { .. } => "duct-corner-h12",
            ClosedFormPath::DuctH21 { .. } => "duct-corner-h21",
            ClosedFormPath::DuctH22 { .. } => "duct-corner-h22",
        }
    }

    /// `(rho(p), drho/dp(p))`.
    pub fn eval(&self, p: f64) -> (Complex64, Complex64) {
        match *self {
            ClosedFormPath::LinearRadial { slope } => (I * p / slope, I / slope),
            ClosedFormPath::LinearBoundary { radius, slope } => (radius + I * p / slope, I / slope),
            ClosedFormPath::QuadraticRadial { coeff } => {
                let rho = (I * p / coeff).sqrt();
                (rho, I / (2.0 * coeff * rho))
            }
            ClosedFormPath::DuctH11 { a } => {
                let h = arcsec_near_one(p, a);
                let sec = 1.0 + I * p / a;
                (h, I / (a * sec * h.tan()))
            }
            ClosedFormPath::DuctH12 { a, b } => {
                let w = (a * a + b * b).sqrt() + I * p;
                let h = (a / w).acos();
                (h, I / (w * h.tan()))
            }
            ClosedFormPath::DuctH21 { a, b } => {
                let w = (a * a + b * b).sqrt() + I * p;
                let h = (b / w).asin();
                (h, -I * h.tan() / w)
            }
            ClosedFormPath::DuctH22 { b } => {
                let u = arcsec_near_one(p, b);
                let sec = 1.0 + I * p / b;
                (FRAC_PI_2 - u, -I / (b * sec * u.tan()))
            }
        }
    }

    /// The phase this path descends, relative to its base value, with its
    /// derivative, base point, local order and side.
    #[allow(clippy::type_complexity)]
    pub fn phase(
        &self,
    ) -> (
        Box<dyn Fn(Complex64) -> Complex64>,
        Box<dyn Fn(Complex64) -> Complex64>,
        Complex64,
        u32,
        Side,
    ) {
        match *self {
            ClosedFormPath::LinearRadial { slope } => (
                Box::new(move |z| slope * z),
                Box::new(move |_| Complex64::new(slope, 0.0)),
                Complex64::new(0.0, 0.0),
                1,
                Side::Forward,
            ),
            ClosedFormPath::LinearBoundary { radius, slope } => (
                Box::new(move |z| slope * (z - radius)),
                Box::new(move |_| Complex64::new(slope, 0.0)),
                Complex64::new(radius, 0.0),
                1,
                Side::Forward,
            ),
            ClosedFormPath::QuadraticRadial { coeff } => (
                Box::new(move |z| coeff * z * z),
                Box::new(move |z| 2.0 * coeff * z),
                Complex64::new(0.0, 0.0),
                2,
                Side::Forward,
            ),
            ClosedFormPath::DuctH11 { a } => (
                // a sec(t) - a = 2 a sin^2(t/2) / cos(t)
                Box::new(move |t: Complex64| 2.0 * a * (0.5 * t).sin().powi(2) / t.cos()),
                Box::new(move |t: Complex64| a * t.tan() / t.cos()),
                Complex64::new(0.0, 0.0),
                2,
                Side::Forward,
            ),
            ClosedFormPath::DuctH12 { a, b } => {
                let eta = (a * a + b * b).sqrt();
                (
                    Box::new(move |t: Complex64| a / t.cos() - eta),
                    Box::new(move |t: Complex64| a * t.tan() / t.cos()),
                    Complex64::new((b / a).atan(), 0.0),
                    1,
                    Side::Forward,
                )
            }
            ClosedFormPath::DuctH21 { a, b } => {
                let eta = (a * a + b * b).sqrt();
                (
                    Box::new(move |t: Complex64| b / t.sin() - eta),
                    Box::new(move |t: Complex64| -b / (t.sin() * t.tan())),
                    Complex64::new((b / a).atan(), 0.0),
                    1,
                    Side::Forward,
                )
            }
            ClosedFormPath::DuctH22 { b } => (
                Box::new(move |t: Complex64| {
                    let u = FRAC_PI_2 - t;
                    2.0 * b * (0.5 * u).sin().powi(2) / u.cos()
                }),
                Box::new(move |t: Complex64| {
                    let u = FRAC_PI_2 - t;
                    -b * u.tan() / u.cos()
                }),
                Complex64::new(FRAC_PI_2, 0.0),
                2,
                Side::Backward,
            ),
        }
    }

    /// Largest discrepancy `|rho_closed - rho_newton|` (relative to
    /// `max(1, |rho|)`) and the largest Newton residual over `p_list`.
    pub fn verify(&self, p_list: &[f64]) -> Result<(f64, f64)> {
        let (g, dg, base, alpha, side) = self.phase();
        let lead = leading_coefficient(&*g, base, alpha);
        let traced = PathProblem {
            g: &*g,
            dg: &*dg,
            base,
            alpha,
            lead,
            side,
            n: 1,
            analytic_radius: f64::INFINITY,
            context: format!("closed-form check of {}", self.key()),
        }
        .trace(p_list)?;
        let mut worst = 0.0f64;
        let mut worst_res = 0.0f64;
        for s in &traced {
            let (rho, drho) = self.eval(s.p);
            let d = (rho - s.rho).norm() / rho.norm().max(1.0);
            let dd = (drho - s.drho_dp).norm() / drho.norm().max(1.0);
            worst = worst.max(d).max(dd);
            worst_res = worst_res.max(s.residual);
        }
        Ok((worst, worst_res))
    }
}
