//! Reference integrators: adaptive Gauss-Kronrod quadrature, the reduced
//! one-dimensional form of the duct test integral, and nested adaptive
//! integration in polar coordinates.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::path::{Direction, RadialScene};
use crate::polar::{surface_factor, AngularRegion};
use std::sync::Mutex;

/// Subinterval cap of the adaptive integrator.
pub const MAX_SUBDIVISIONS: usize = 1_000_000;
/// Smallest accepted tolerance.
pub const MIN_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveResult {
    pub value: Complex64,
    pub est_error: f64,
    pub subdivisions: usize,
    pub converged: bool,
}

impl AdaptiveResult {
    /// The value, or `NotConverged` carrying the partial result.
    pub fn into_result(self) -> Result<Complex64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NotConverged {
                value: self.value,
                est_error: self.est_error,
                subdivisions: self.subdivisions,
            })
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    at_floor: bool,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Segment {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.norm() * WGK[7];
    let mut values = [Complex64::new(0.0, 0.0); 15];
    values[7] = fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        values[j] = f1;
        values[14 - j] = f2;
        kron += (f1 + f2) * WGK[j];
        abs_sum += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut asc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        asc += WGK[j] * ((values[j] - mean).norm() + (values[14 - j] - mean).norm());
    }
    let value = kron * half;
    let resabs = abs_sum * half.abs();
    let resasc = asc * half.abs();
    let mut error = ((kron - gauss) * half).norm();
    if resasc > 0.0 && error > 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let mut at_floor = false;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * resabs;
        at_floor = error <= floor;
        error = error.max(floor);
    }
    if !(value.re.is_finite() && value.im.is_finite()) {
        error = f64::INFINITY;
    }
    Segment { a, b, value, error, at_floor }
}

/// Adaptive 15/7-point Gauss-Kronrod quadrature with bisection of the
/// segment carrying the largest error estimate; `tol` is absolute.
pub fn adaptive_quad_1d<F>(f: F, a: f64, b: f64, tol: f64) -> Result<AdaptiveResult>
where
    F: Fn(f64) -> Complex64,
{
    adaptive_quad_1d_capped(f, a, b, tol, MAX_SUBDIVISIONS)
}

pub fn adaptive_quad_1d_capped<F>(f: F, a: f64, b: f64, tol: f64, cap: usize) -> Result<AdaptiveResult>
where
    F: Fn(f64) -> Complex64,
{
    if !(tol >= MIN_TOL) {
        return Err(Error::InvalidArgument(format!("tolerance must be >= {MIN_TOL:e}, got {tol:e}")));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("finite limits required, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(AdaptiveResult {
            value: Complex64::new(0.0, 0.0),
            est_error: 0.0,
            subdivisions: 1,
            converged: true,
        });
    }
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Segment> = Vec::new();
    let first = kronrod(&f, a, b);
    // segments at the roundoff floor are final; their error is not reducible
    let mut floor_err = 0.0;
    let mut total_err = first.error;
    heap.push(first);
    let mut count = 1usize;
    while total_err > tol && total_err > floor_err && count < cap {
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        let tiny = (seg.b - seg.a).abs() < 1e-15 * mid.abs().max(1e-300);
        if seg.at_floor || tiny || !(mid > seg.a.min(seg.b) && mid < seg.a.max(seg.b)) {
            floor_err += seg.error;
            done.push(seg);
            continue;
        }
        let left = kronrod(&f, seg.a, mid);
        let right = kronrod(&f, mid, seg.b);
        total_err += left.error + right.error - seg.error;
        heap.push(left);
        heap.push(right);
        count += 1;
        if total_err.is_nan() {
            break;
        }
    }
    done.extend(heap);
    done.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = done.iter().fold(Complex64::new(0.0, 0.0), |acc, s| acc + s.value);
    let est_error = done.iter().map(|s| s.error).sum::<f64>();
    let reducible = done.iter().filter(|s| !s.at_floor).map(|s| s.error).sum::<f64>();
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite { node: f64::NAN, value });
    }
    Ok(AdaptiveResult {
        value,
        est_error,
        subdivisions: count,
        converged: est_error <= tol || (count < cap && reducible <= tol),
    })
}

/// Adaptive integration split into `panels` equal pieces first, with the
/// tolerance shared evenly.
pub fn adaptive_quad_panels<F>(f: F, a: f64, b: f64, tol: f64, panels: usize) -> Result<AdaptiveResult>
where
    F: Fn(f64) -> Complex64,
{
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut out = AdaptiveResult {
        value: Complex64::new(0.0, 0.0),
        est_error: 0.0,
        subdivisions: 0,
        converged: true,
    };
    let local_tol = (tol / panels as f64).max(MIN_TOL);
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let hi = if k + 1 == panels { b } else { lo + h };
        let r = adaptive_quad_1d(&f, lo, hi, local_tol)?;
        out.value += r.value;
        out.est_error += r.est_error;
        out.subdivisions += r.subdivisions;
        out.converged &= r.converged;
    }
    out.converged = out.converged || out.est_error <= tol;
    Ok(out)
}

/// Tolerance of the duct reference on its reduced integral.
pub const ACOUSTICS_TOL: f64 = 1e-13;

/// `int_0^a int_0^b exp(i w r) y cos(x) / r dy dx` with `r = sqrt(x^2 + y^2)`
/// through its reduction
/// `(i/w) int_0^a (exp(i w x) - exp(i w sqrt(x^2 + b^2))) cos(x) dx`.
pub fn acoustics_reference_ab(omega: f64, a: f64, b: f64) -> Result<AdaptiveResult> {
    acoustics_reference_tol(omega, a, b, ACOUSTICS_TOL)
}

/// The duct reference at a caller-chosen tolerance on the reduced integral.
pub fn acoustics_reference_tol(omega: f64, a: f64, b: f64, tol: f64) -> Result<AdaptiveResult> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
    }
    let integrand = |x: f64| {
        (Complex64::from_polar(1.0, omega * x) - Complex64::from_polar(1.0, omega * x.hypot(b))) * x.cos()
    };
    let panels = if omega > 2000.0 { (omega / 100.0).ceil() as usize } else { 1 };
    let mut r = adaptive_quad_panels(integrand, 0.0, a, tol, panels)?;
    let scale = Complex64::new(0.0, 1.0 / omega);
    r.value *= scale;
    r.est_error /= omega;
    Ok(r)
}

/// The duct test integral over `[0, 1] x [0, 2]`.
pub fn acoustics_reference(omega: f64) -> Result<AdaptiveResult> {
    acoustics_reference_ab(omega, 1.0, 2.0)
}

struct Nested<'a> {
    tol: f64,
    failure: &'a Mutex<Option<Error>>,
    unconverged: &'a Mutex<bool>,
}

impl Nested<'_> {
    fn run<F: Fn(f64) -> Complex64>(&self, f: F, a: f64, b: f64, tol: f64) -> Complex64 {
        match adaptive_quad_1d(f, a, b, tol.max(MIN_TOL)) {
            Ok(r) => {
                if !r.converged {
                    *self.unconverged.lock().expect("flag") = true;
                }
                r.value
            }
            Err(e) => {
                self.failure.lock().expect("slot").get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    }

    /// Integrates over the angles from `axis` on, `prefix` holding the
    /// already fixed ones.
    fn angular(&self, scene: &RadialScene, lo: &[f64], hi: &[f64], prefix: &[f64], volume: f64) -> Complex64 {
        let axis = prefix.len();
        if axis == lo.len() {
            let dir = Direction::from_angles_unchecked(prefix);
            let radius = scene.boundary(&dir).unwrap_or(0.0);
            let n = scene.dim() as i32;
            let omega = scene.omega();
            let radial = self.run(
                |r| {
                    let z = Complex64::new(r, 0.0);
                    scene.amplitude(z, &dir) * (Complex64::i() * omega * scene.oscillator(z, &dir)).exp() * r.powi(n - 1)
                },
                0.0,
                radius,
                self.tol / (10.0 * volume),
            );
            return radial * surface_factor(&dir);
        }
        let share = volume / (hi[axis] - lo[axis]);
        let base = prefix.to_vec();
        self.run(
            |t| {
                let mut pre = base.clone();
                pre.push(t);
                self.angular(scene, lo, hi, &pre, share)
            },
            lo[axis],
            hi[axis],
            self.tol / (2.0 * share.max(1.0)),
        )
    }
}

/// Nested adaptive quadrature of `int_W int_0^R(Theta) f exp(i w g) r^(n-1)
/// dr dTheta` in polar form. Bounded scenes only.
pub fn brute_force_polar(scene: &RadialScene, region: &AngularRegion, tol: f64) -> Result<AdaptiveResult> {
    if !scene.is_bounded() {
        return Err(Error::InvalidScene("brute-force integration needs a bounded scene".into()));
    }
    if scene.dim() != region.n {
        return Err(Error::InvalidArgument("scene and region dimensions differ".into()));
    }
    let failure = Mutex::new(None);
    let unconverged = Mutex::new(false);
    let nested = Nested { tol: tol.max(MIN_TOL), failure: &failure, unconverged: &unconverged };
    let mut value = Complex64::new(0.0, 0.0);
    for b in &region.boxes {
        let volume: f64 = b.lo.iter().zip(&b.hi).map(|(l, h)| h - l).product();
        value += nested.angular(scene, &b.lo, &b.hi, &[], volume);
        if let Some(e) = failure.lock().expect("slot").take() {
            return Err(e);
        }
    }
    let converged = !*unconverged.lock().expect("flag");
    Ok(AdaptiveResult {
        value: scene.phase_at_origin() * value,
        est_error: tol,
        subdivisions: 0,
        converged,
    })
}

/// `int_0^inf exp(i w t) / (1 + t) dt`: adaptive quadrature on `[0, L]`
/// plus the asymptotic expansion of the tail, summed until its terms stop
/// decreasing.
pub fn reciprocal_fourier_half_line(omega: f64, tol: f64) -> Result<AdaptiveResult> {
    let big_l = (40.0 / omega).max(20.0);
    let panels = (omega * big_l / 50.0).ceil() as usize;
    let mut r = adaptive_quad_panels(|t| Complex64::from_polar(1.0, omega * t) / (1.0 + t), 0.0, big_l, tol, panels)?;
    // int_L^inf exp(i w t)/(1 + t) dt = -exp(i w L) sum_k k! / x^(k+1), x = i w (1 + L)
    let x = Complex64::new(0.0, omega * (1.0 + big_l));
    let mut term = x.inv();
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..200 {
        sum += term;
        let next = term * (k as f64) / x;
        if next.norm() >= term.norm() || next.norm() < 1e-20 * sum.norm() {
            break;
        }
        term = next;
    }
    let tail = -Complex64::from_polar(1.0, omega * big_l) * sum;
    r.value += tail;
    Ok(r)
}

/// The ellipsoidal integral by brute force: `(int dTheta / s^3) J(w)` with
/// both factors from adaptive quadrature.
pub fn ellipsoid_brute_force(omega: f64, tol: f64) -> Result<AdaptiveResult> {
    let slope = |p1: f64, p2: f64| {
        let (s1, c1) = p1.sin_cos();
        let (s2, c2) = p2.sin_cos();
        (c1 * c1 + 2.0 * s1 * s1 * c2 * c2 + 3.0 * s1 * s1 * s2 * s2).sqrt()
    };
    let inner = |p1: f64| {
        adaptive_quad_1d(|p2| Complex64::new(p1.sin() / slope(p1, p2).powi(3), 0.0), 0.0, 2.0 * std::f64::consts::PI, 1e-14)
            .map(|r| r.value)
            .unwrap_or(Complex64::new(f64::NAN, 0.0))
    };
    let sphere = adaptive_quad_1d(inner, 0.0, std::f64::consts::PI, 1e-14)?;
    let j = reciprocal_fourier_half_line(omega, tol)?;
    Ok(AdaptiveResult {
        value: sphere.value * j.value,
        est_error: sphere.est_error * j.value.norm() + j.est_error * sphere.value.norm(),
        subdivisions: sphere.subdivisions + j.subdivisions,
        converged: sphere.converged && j.converged,
    })
}
