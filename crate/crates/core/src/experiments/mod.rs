//! Convergence experiments: rows of (frequency, approximation, reference),
//! slope fits, and CSV/JSON output.

pub mod scenes;

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::duct::{quarter_plane_central, rectangle_direct_modified, rectangle_direct_nsd, rectangle_polar_nsd};
use crate::error::{Error, Result};
use crate::oracle::acoustics_reference_tol;
use crate::path::Direction;
use crate::polar::{central_contribution, integrate_unbounded, AngularRegion, OuterPlan};
use crate::specfun::ellipsoid_reference;

use scenes::{ellipsoid_scene, sphere_incidence, sphere_scene};

/// Errors at or below this level are treated as rounding noise.
pub const ERROR_FLOOR: f64 = 1e-14;

/// One line of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub omega: f64,
    pub approx: Complex64,
    pub reference: Option<Complex64>,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub params: BTreeMap<String, String>,
}

impl ExperimentRow {
    pub fn new(omega: f64, approx: Complex64, reference: Option<Complex64>, params: BTreeMap<String, String>) -> Self {
        let abs_err = reference.map(|r| (approx - r).norm());
        let rel_err = match (abs_err, reference) {
            (Some(e), Some(r)) if r.norm() > 0.0 => Some(e / r.norm()),
            _ => None,
        };
        ExperimentRow {
            omega,
            approx,
            reference,
            abs_err,
            rel_err,
            params,
        }
    }

    pub fn error(&self, metric: ErrorMetric) -> Option<f64> {
        match metric {
            ErrorMetric::Absolute => self.abs_err,
            ErrorMetric::Relative => self.rel_err,
        }
    }
}

/// Which error column a slope fit uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorMetric {
    Absolute,
    Relative,
}

/// Least-squares line through `(ln omega, ln err)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub omega_range: (f64, f64),
    pub points: usize,
}

/// Fit `ln err = intercept + slope ln omega` over the rows whose error
/// exceeds [`ERROR_FLOOR`].
pub fn fit_slope(rows: &[ExperimentRow], metric: ErrorMetric) -> Result<SlopeFit> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.error(metric).filter(|e| *e > ERROR_FLOOR && e.is_finite()).map(|e| (r.omega, e)))
        .collect();
    if pts.len() < 3 {
        return Err(Error::TooFewPoints(pts.len()));
    }
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("slope fit needs at least two distinct frequencies".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(SlopeFit {
        slope,
        intercept,
        r_squared,
        omega_range: (lo, hi),
        points: pts.len(),
    })
}

/// `count` logarithmically spaced points from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || count == 0 {
        return Err(Error::InvalidArgument(format!("invalid grid {lo}:{hi}:{count}")));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|k| match k {
            0 => lo,
            k if k + 1 == count => hi,
            k => (a + (b - a) * k as f64 / (count - 1) as f64).exp(),
        })
        .collect())
}

/// Default frequency grid: 20 log-spaced points on `[10, 2000]`.
pub fn default_grid() -> Vec<f64> {
    log_grid(10.0, 2000.0, 20).expect("static grid")
}

/// Parse `w1,w2,...` or `min:max:count` (log-spaced). The result is sorted.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidArgument(format!("not a number: {s:?}")))
    };
    let mut grid = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidArgument(format!("expected min:max:count, got {text:?}")));
        }
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("not a count: {:?}", parts[2])))?;
        log_grid(parse(parts[0])?, parse(parts[1])?, count)?
    } else {
        text.split(',').map(parse).collect::<Result<Vec<f64>>>()?
    };
    if grid.is_empty() || grid.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
        return Err(Error::InvalidArgument(format!("frequencies must be positive: {text:?}")));
    }
    grid.sort_by(f64::total_cmp);
    Ok(grid)
}

fn map_grid<F>(grid: &[f64], f: F) -> Result<Vec<ExperimentRow>>
where
    F: Fn(f64) -> Result<ExperimentRow> + Sync,
{
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        sorted.par_iter().map(|&w| f(w)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        sorted.iter().map(|&w| f(w)).collect()
    }
}

fn params(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// The ellipsoidal-phase integral over R^3 against its closed form.
pub fn run_ellipsoid(grid: &[f64], m: usize, outer_cc: usize, outer_trap: usize) -> Result<Vec<ExperimentRow>> {
    if !(1..=16).contains(&m) {
        return Err(Error::InvalidArgument(format!("radial points must be in [1, 16], got {m}")));
    }
    let region = AngularRegion::full_sphere(3)?;
    let plan = OuterPlan::standard(&region, outer_cc, outer_trap)?;
    map_grid(grid, |w| {
        let scene = ellipsoid_scene(w)?;
        let approx = integrate_unbounded(&scene, &region, &plan, m)?;
        let reference = ellipsoid_reference(w)?;
        let p = params(&[
            ("experiment", "ellipsoid".into()),
            ("m", m.to_string()),
            ("outer_cc", outer_cc.to_string()),
            ("outer_trap", outer_trap.to_string()),
        ]);
        Ok(ExperimentRow::new(w, approx, Some(reference), p))
    })
}

/// `|Q_r|` of the ellipsoid scene on an `n1 x n2` grid of directions,
/// as `(phi_1, phi_2, |Q_r|)`.
pub fn ellipsoid_inner_grid(omega: f64, m: usize, n1: usize, n2: usize) -> Result<Vec<(f64, f64, f64)>> {
    if n1 < 2 || n2 < 1 {
        return Err(Error::InvalidArgument(format!("grid must be at least 2 x 1, got {n1} x {n2}")));
    }
    let scene = ellipsoid_scene(omega)?;
    let mut out = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        let phi1 = PI * i as f64 / (n1 - 1) as f64;
        for j in 0..n2 {
            let phi2 = 2.0 * PI * j as f64 / n2 as f64;
            let dir = Direction::new(&[phi1, phi2])?;
            out.push((phi1, phi2, central_contribution(&scene, &dir, m)?.norm()));
        }
    }
    Ok(out)
}

/// How the duct integral is decomposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DuctMode {
    Corner,
    Direct,
    DirectModified,
}

impl DuctMode {
    pub fn name(&self) -> &'static str {
        match self {
            DuctMode::Corner => "corner",
            DuctMode::Direct => "direct",
            DuctMode::DirectModified => "direct_modified",
        }
    }
}

impl std::str::FromStr for DuctMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corner" => Ok(DuctMode::Corner),
            "direct" => Ok(DuctMode::Direct),
            "direct_modified" => Ok(DuctMode::DirectModified),
            _ => Err(Error::InvalidArgument(format!(
                "unknown duct mode {s:?}; expected corner, direct or direct_modified"
            ))),
        }
    }
}

/// Settings of [`run_duct`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuctConfig {
    pub n_gl: usize,
    pub n_gh: Option<usize>,
    pub a: f64,
    pub b: f64,
    pub mode: DuctMode,
    pub outer_cc: usize,
    pub oracle_tol: f64,
}

impl DuctConfig {
    pub fn new(n_gl: usize, mode: DuctMode) -> Self {
        DuctConfig {
            n_gl,
            n_gh: None,
            a: 1.0,
            b: 2.0,
            mode,
            outer_cc: 30,
            oracle_tol: crate::oracle::ACOUSTICS_TOL,
        }
    }

    pub fn hermite_points(&self) -> usize {
        self.n_gh.unwrap_or(2 * self.n_gl)
    }
}

/// `r sin(theta) cos(r cos(theta))`: the duct amplitude with the polar area
/// element.
pub fn duct_polar_integrand(z: Complex64, theta: Complex64) -> Complex64 {
    z * theta.sin() * (z * theta.cos()).cos()
}

/// `y cos(x) / r`: the duct amplitude in Cartesian form.
pub fn duct_cartesian_amplitude(x: Complex64, y: Complex64, r: Complex64) -> Complex64 {
    y * x.cos() / r
}

/// The duct integral
/// `int_0^a int_0^b exp(i w r) y cos(x) / r dy dx` against its
/// one-dimensional reduction.
pub fn run_duct(grid: &[f64], cfg: &DuctConfig) -> Result<Vec<ExperimentRow>> {
    let (a, b, m, h) = (cfg.a, cfg.b, cfg.n_gl, cfg.hermite_points());
    map_grid(grid, |w| {
        let approx = match cfg.mode {
            DuctMode::Corner => rectangle_polar_nsd(&duct_polar_integrand, a, b, w, m, h, cfg.outer_cc)?,
            DuctMode::Direct => rectangle_direct_nsd(&duct_cartesian_amplitude, a, b, w, m, h)?,
            DuctMode::DirectModified => rectangle_direct_modified(
                &duct_cartesian_amplitude,
                &duct_polar_integrand,
                a,
                b,
                w,
                m,
                h,
                cfg.outer_cc,
            )?,
        };
        let reference = acoustics_reference_tol(w, a, b, cfg.oracle_tol)?.into_result()?;
        let p = params(&[
            ("experiment", "duct".into()),
            ("mode", cfg.mode.name().into()),
            ("n_gl", m.to_string()),
            ("n_gh", h.to_string()),
            ("a", a.to_string()),
            ("b", b.to_string()),
            ("outer_cc", cfg.outer_cc.to_string()),
        ]);
        Ok(ExperimentRow::new(w, approx, Some(reference), p))
    })
}

/// Local approximation `w0` of the sphere single-layer integral at
/// `y = [1, 0, 0]` with unit density: the central contribution only.
pub fn sphere_w0(k: f64, psi: f64, m: usize, n_trap: usize) -> Result<Complex64> {
    if (psi - FRAC_PI_2).abs() < 1e-12 {
        return Err(Error::InvalidArgument("psi = pi/2 is the shadow boundary".into()));
    }
    let scene = sphere_scene(k, sphere_incidence(psi))?;
    let region = AngularRegion::full_sphere(2)?;
    let plan = OuterPlan::standard(&region, 2, n_trap)?;
    integrate_unbounded(&scene, &region, &plan, m)
}

/// `q = -1/w0` over a `(k, psi)` grid. No reference is available; the
/// `self_conv` parameter is `|w0(m, N) - w0(m + 3, 2N)| / |w0|`.
pub fn run_sphere_scatter(k_grid: &[f64], psi_grid: &[f64], m: usize, n_trap: usize) -> Result<Vec<ExperimentRow>> {
    let mut rows = Vec::new();
    for &psi in psi_grid {
        if !(0.0..=PI / 3.0 + 1e-12).contains(&psi) {
            return Err(Error::InvalidArgument(format!("psi must lie in [0, pi/3], got {psi}")));
        }
        rows.extend(map_grid(k_grid, |k| {
            let w0 = sphere_w0(k, psi, m, n_trap)?;
            let fine = sphere_w0(k, psi, m + 3, 2 * n_trap)?;
            let p = params(&[
                ("experiment", "sphere".into()),
                ("psi", format!("{psi:.17e}")),
                ("m", m.to_string()),
                ("n_trap", n_trap.to_string()),
                ("w0_re", format!("{:.17e}", w0.re)),
                ("w0_im", format!("{:.17e}", w0.im)),
                ("self_conv", format!("{:.17e}", (w0 - fine).norm() / w0.norm())),
            ]);
            Ok(ExperimentRow::new(k, -1.0 / w0, None, p))
        })?);
    }
    Ok(rows)
}

/// The sphere results laid out with one line per `psi` and one column per
/// `k`, each cell holding the self-convergence estimate of `w0`.
pub fn sphere_table(rows: &[ExperimentRow]) -> String {
    let mut psis: Vec<f64> = Vec::new();
    let mut ks: Vec<f64> = Vec::new();
    let key = |r: &ExperimentRow| r.params.get("psi").and_then(|s| s.parse::<f64>().ok());
    for r in rows {
        if let Some(p) = key(r) {
            if !psis.contains(&p) {
                psis.push(p);
            }
        }
        if !ks.contains(&r.omega) {
            ks.push(r.omega);
        }
    }
    ks.sort_by(f64::total_cmp);
    let mut out = String::new();
    let _ = writeln!(out, "# self-convergence of w0; the reference column needs a Mie series and is not computed");
    let _ = write!(out, "psi\\k");
    for k in &ks {
        let _ = write!(out, " {k}");
    }
    out.push('\n');
    for p in &psis {
        let _ = write!(out, "{p:.6}");
        for k in &ks {
            let cell = rows
                .iter()
                .find(|r| key(r) == Some(*p) && r.omega == *k)
                .and_then(|r| r.params.get("self_conv"))
                .and_then(|s| s.parse::<f64>().ok());
            match cell {
                Some(v) => {
                    let _ = write!(out, " {v:.5e}");
                }
                None => out.push_str(" -"),
            }
        }
        out.push('\n');
    }
    out
}

/// `int_{[0, inf)^2} exp(i w sqrt(x^2 + y^2)) dx dy = -pi / (2 w^2)`, by the
/// polar central contribution and by Cartesian steepest descent.
pub fn run_example1(grid: &[f64], m: usize, outer_cc: usize) -> Result<Vec<ExperimentRow>> {
    let one_polar = |z: Complex64, _: Complex64| z;
    let one_cartesian = |_: Complex64, _: Complex64, _: Complex64| Complex64::new(1.0, 0.0);
    let mut rows = map_grid(grid, |w| {
        let approx = quarter_plane_central(&one_polar, w, m, outer_cc)?;
        let p = params(&[("experiment", "example1".into()), ("variant", "polar".into()), ("m", m.to_string())]);
        Ok(ExperimentRow::new(w, approx, Some(Complex64::new(-PI / (2.0 * w * w), 0.0)), p))
    })?;
    rows.extend(map_grid(grid, |w| {
        let approx = crate::duct::direct_corner_term(&one_cartesian, 0.0, 0.0, w, m, 2 * m)?;
        let p = params(&[("experiment", "example1".into()), ("variant", "direct".into()), ("m", m.to_string())]);
        Ok(ExperimentRow::new(w, approx, Some(Complex64::new(-PI / (2.0 * w * w), 0.0)), p))
    })?);
    rows.sort_by(|x, y| x.omega.total_cmp(&y.omega));
    Ok(rows)
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_params(p: &BTreeMap<String, String>) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

pub const CSV_HEADER: &str = "omega,approx_re,approx_im,ref_re,ref_im,abs_err,rel_err,params";

/// Rows as CSV sorted by frequency; missing values are empty fields.
pub fn to_csv(rows: &[ExperimentRow]) -> String {
    let mut sorted: Vec<&ExperimentRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in sorted {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(r.omega),
            fmt_f64(r.approx.re),
            fmt_f64(r.approx.im),
            opt(r.reference.map(|c| c.re)),
            opt(r.reference.map(|c| c.im)),
            opt(r.abs_err),
            opt(r.rel_err),
            fmt_params(&r.params)
        );
    }
    out
}

#[derive(Serialize)]
struct JsonRow<'a> {
    omega: f64,
    approx_re: f64,
    approx_im: f64,
    ref_re: Option<f64>,
    ref_im: Option<f64>,
    abs_err: Option<f64>,
    rel_err: Option<f64>,
    params: &'a BTreeMap<String, String>,
}

/// Rows as a JSON array sorted by frequency; missing values are `null`.
pub fn to_json(rows: &[ExperimentRow]) -> String {
    let mut sorted: Vec<&ExperimentRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    let json: Vec<JsonRow> = sorted
        .iter()
        .map(|r| JsonRow {
            omega: r.omega,
            approx_re: r.approx.re,
            approx_im: r.approx.im,
            ref_re: r.reference.map(|c| c.re),
            ref_im: r.reference.map(|c| c.im),
            abs_err: r.abs_err,
            rel_err: r.rel_err,
            params: &r.params,
        })
        .collect();
    serde_json::to_string_pretty(&json).expect("rows serialize")
}
