//! Quadrature rules: Gaussian rules for `x^d exp(-x^alpha)` on the half
//! line, Clenshaw-Curtis on finite intervals and the periodic trapezoidal
//! rule.
//!
//! Rules are immutable and memoised; `gauss_exp_power` and
//! `clenshaw_curtis` hand out shared `Arc`s from a process-wide cache.

mod jacobi;
mod stieltjes;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::gamma;

/// Largest rule size accepted by [`gauss_exp_power`].
pub const MAX_GAUSS_POINTS: usize = 64;
/// Largest polynomial degree `d` of the weight `x^d exp(-x^alpha)`.
pub const MAX_WEIGHT_DEGREE: u32 = 8;
/// Largest exponent alpha of the weight `x^d exp(-x^alpha)`.
pub const MAX_ALPHA: u32 = 4;

/// Relative tolerance on monomial exactness of the Gaussian rules.
pub const GAUSS_EXACTNESS_TOL: f64 = 1e-10;
/// Relative tolerance on the weight sum against the zeroth moment.
pub const MOMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightKind {
    /// `x^degree exp(-x^alpha)` on `[0, inf)`.
    ExpPower { alpha: u32, degree: u32 },
    ClenshawCurtis { a: f64, b: f64 },
    PeriodicTrapezoid { period: f64 },
}

impl WeightKind {
    /// Total mass of the weight function.
    pub fn zeroth_moment(&self) -> f64 {
        match *self {
            WeightKind::ExpPower { alpha, degree } => exp_power_moment(alpha, degree, 0),
            WeightKind::ClenshawCurtis { a, b } => b - a,
            WeightKind::PeriodicTrapezoid { period } => period,
        }
    }
}

/// `int_0^inf x^(k+d) exp(-x^alpha) dx = Gamma((k+d+1)/alpha)/alpha`.
pub fn exp_power_moment(alpha: u32, degree: u32, k: u32) -> f64 {
    let s = (k + degree + 1) as f64 / alpha as f64;
    gamma(s).unwrap_or(f64::INFINITY) / alpha as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub kind: WeightKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `sum_j w_j f(x_j)`, summed left to right.
    pub fn integrate<F>(&self, f: F) -> Result<Complex64>
    where
        F: Fn(f64) -> Complex64,
    {
        integrate(self, f)
    }
}

/// `sum_j w_j f(x_j)` in node order. A non-finite sample is reported with
/// the node it came from.
pub fn integrate<F>(rule: &QuadRule, f: F) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in rule.iter() {
        let v = f(x);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite { node: x, value: v });
        }
        acc += v * w;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum CacheKey {
    ExpPower { m: usize, alpha: u32, degree: u32 },
    ClenshawCurtis { n: usize, a: u64, b: u64 },
}

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<QuadRule>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<QuadRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached<F>(key: CacheKey, build: F) -> Result<Arc<QuadRule>>
where
    F: FnOnce() -> Result<QuadRule>,
{
    if let Some(rule) = cache().read().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build()?);
    let mut map = cache().write().expect("rule cache poisoned");
    Ok(Arc::clone(map.entry(key).or_insert(rule)))
}

/// The `m`-point Gaussian rule for the weight `x^degree exp(-x^alpha)` on
/// `[0, inf)`.
///
/// alpha = 1 uses the generalised Laguerre recurrence; larger alpha gets its
/// recurrence from a discretised Stieltjes procedure.
pub fn gauss_exp_power(m: usize, alpha: u32, degree: u32) -> Result<Arc<QuadRule>> {
    if m == 0 || m > MAX_GAUSS_POINTS {
        return Err(Error::UnsupportedRule(format!(
            "m = {m} outside 1..={MAX_GAUSS_POINTS} (larger rules are not stable in double precision)"
        )));
    }
    if alpha == 0 || alpha > MAX_ALPHA {
        return Err(Error::UnsupportedRule(format!(
            "alpha = {alpha} outside 1..={MAX_ALPHA}"
        )));
    }
    if degree > MAX_WEIGHT_DEGREE {
        return Err(Error::UnsupportedRule(format!(
            "weight degree {degree} exceeds {MAX_WEIGHT_DEGREE}"
        )));
    }
    cached(CacheKey::ExpPower { m, alpha, degree }, || {
        let mu0 = exp_power_moment(alpha, degree, 0);
        let rec = if alpha == 1 {
            let d = degree as f64;
            jacobi::Recurrence {
                a: (0..m).map(|k| 2.0 * k as f64 + d + 1.0).collect(),
                b: (0..m).map(|k| k as f64 * (k as f64 + d)).collect(),
                mu0,
            }
        } else {
            stieltjes::exp_power_recurrence(m, alpha, degree, mu0)?
        };
        let (nodes, weights) = rec.gauss_rule()?;
        if nodes[0] <= 0.0 || nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::UnsupportedRule(format!(
                "rule m = {m}, alpha = {alpha}, degree = {degree} lost node ordering"
            )));
        }
        Ok(QuadRule {
            kind: WeightKind::ExpPower { alpha, degree },
            nodes,
            weights,
        })
    })
}

/// `n`-point Clenshaw-Curtis rule on `[a, b]` (Chebyshev extreme points,
/// endpoints included).
pub fn clenshaw_curtis(n: usize, a: f64, b: f64) -> Result<Arc<QuadRule>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Clenshaw-Curtis needs at least 2 points, got {n}"
        )));
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Clenshaw-Curtis interval [{a}, {b}] is empty or not finite"
        )));
    }
    let key = CacheKey::ClenshawCurtis {
        n,
        a: a.to_bits(),
        b: b.to_bits(),
    };
    cached(key, || {
        let big_n = n - 1;
        let nf = big_n as f64;
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        // k runs from the right endpoint down so nodes come out increasing
        for idx in 0..n {
            let k = big_n - idx;
            let theta = k as f64 * PI / nf;
            let c = if k == 0 || k == big_n { 1.0 } else { 2.0 };
            let mut s = 0.0;
            for j in 1..=big_n / 2 {
                let bj = if 2 * j == big_n { 1.0 } else { 2.0 };
                s += bj / (4.0 * (j * j) as f64 - 1.0) * (2.0 * j as f64 * theta).cos();
            }
            let x = if 2 * k == big_n { 0.0 } else { theta.cos() };
            nodes.push(mid + half * x);
            weights.push(half * c / nf * (1.0 - s));
        }
        Ok(QuadRule {
            kind: WeightKind::ClenshawCurtis { a, b },
            nodes,
            weights,
        })
    })
}

/// `n` equispaced nodes on `[0, period)` with uniform weights.
pub fn trapezoid_periodic(n: usize, period: f64) -> Result<QuadRule> {
    if n == 0 {
        return Err(Error::InvalidArgument("trapezoid rule needs n >= 1".into()));
    }
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "trapezoid period must be positive, got {period}"
        )));
    }
    let h = period / n as f64;
    Ok(QuadRule {
        kind: WeightKind::PeriodicTrapezoid { period },
        nodes: (0..n).map(|j| j as f64 * h).collect(),
        weights: vec![h; n],
    })
}
