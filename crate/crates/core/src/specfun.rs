//! Gamma on the positive reals, the sine and cosine integrals, and the closed
//! form of the ellipsoidal test integral.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;

/// A special-function value with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialValue<T> {
    pub value: T,
    pub est_error: f64,
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma(x) for 0 < x <= 170.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::InvalidArgument(format!("gamma needs x > 0, got {x}")));
    }
    if x > 170.0 {
        return Err(Error::Overflow(x));
    }
    // exact on small integers
    if x.fract() == 0.0 && x <= 25.0 {
        return Ok((1..x as u64).fold(1.0, |acc, k| acc * k as f64));
    }
    if x < 1.0 {
        return Ok(lanczos(x + 1.0) / x);
    }
    // reduce to [1, 2) and climb with the recurrence
    let base = 1.0 + x.fract();
    let mut y = base;
    let mut acc = 1.0;
    while y + 0.5 < x {
        acc *= y;
        y += 1.0;
    }
    Ok(acc * lanczos(base))
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // t^(z+1/2) exp(-t) as t^(h/2) exp(-t) t^(h/2), h = z + 1/2
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * ((-t).exp() * half) * acc
}

/// Both sine and cosine integrals at x > 0 (Si(0) = 0 is handled by
/// [`sin_int`]).
pub fn sici(x: f64) -> Result<(SpecialValue<f64>, SpecialValue<f64>)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("sici needs finite x > 0, got {x}")));
    }
    if x <= 4.0 {
        Ok(sici_series(x))
    } else {
        Ok(sici_continued_fraction(x))
    }
}

/// Si(x) = int_0^x sin t / t dt for x >= 0.
pub fn sin_int(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < 0.0 {
        return Err(Error::InvalidArgument(format!("sin_int needs x >= 0, got {x}")));
    }
    Ok(sici(x)?.0.value)
}

/// Ci(x) = gamma + ln x + int_0^x (cos t - 1)/t dt for x > 0.
pub fn cos_int(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidArgument(format!("cos_int needs x > 0, got {x}")));
    }
    Ok(sici(x)?.1.value)
}

fn sici_series(x: f64) -> (SpecialValue<f64>, SpecialValue<f64>) {
    let x2 = x * x;
    // Si: sum (-1)^k x^(2k+1) / ((2k+1) (2k+1)!)
    let mut term = x; // x^(2k+1)/(2k+1)!
    let mut si = x;
    let mut k = 0usize;
    let mut last_si = f64::INFINITY;
    while k < 60 {
        let n = 2 * k + 1;
        term *= -x2 / ((n + 1) * (n + 2)) as f64;
        let add = term / (n + 2) as f64;
        si += add;
        last_si = add.abs();
        k += 1;
        if last_si < 1e-18 * si.abs() {
            break;
        }
    }
    // Ci: gamma + ln x + sum_{k>=1} (-1)^k x^(2k) / (2k (2k)!)
    let mut term = 1.0; // x^(2k)/(2k)!
    let mut sum = 0.0;
    let mut last_ci = f64::INFINITY;
    for k in 1..60 {
        let n = 2 * k;
        term *= -x2 / ((n - 1) * n) as f64;
        let add = term / n as f64;
        sum += add;
        last_ci = add.abs();
        if last_ci < 1e-18 {
            break;
        }
    }
    let ci = EULER_GAMMA + x.ln() + sum;
    (
        SpecialValue { value: si, est_error: last_si + 4.0 * f64::EPSILON * si.abs() },
        SpecialValue { value: ci, est_error: last_ci + 16.0 * f64::EPSILON },
    )
}

/// Lentz evaluation of the continued fraction for E1(ix), using
/// E1(ix) = -Ci(x) + i (Si(x) - pi/2).
fn sici_continued_fraction(x: f64) -> (SpecialValue<f64>, SpecialValue<f64>) {
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    let mut delta = 1.0;
    for i in 2..200 {
        let a = -((i - 1) * (i - 1)) as f64;
        b += 2.0;
        d = Complex64::new(1.0, 0.0) / (d * a + b);
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        delta = (del - 1.0).norm();
        if delta < f64::EPSILON {
            break;
        }
    }
    let h = Complex64::new(x.cos(), -x.sin()) * h;
    let err = 8.0 * f64::EPSILON * h.norm() + delta * h.norm();
    (
        SpecialValue { value: FRAC_PI_2 + h.im, est_error: err + 2.0 * f64::EPSILON },
        SpecialValue { value: -h.re, est_error: err },
    )
}

/// Closed form of `int_R^3 exp(i w q) / (q^2 (1 + q)) dx` with
/// `q = sqrt(x^2 + 2 y^2 + 3 z^2)`:
/// `sqrt(2/3) pi (i cos w + sin w) (pi + 2 i Ci(w) - 2 Si(w))`.
pub fn ellipsoid_reference(omega: f64) -> Result<Complex64> {
    if !(omega > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ellipsoid_reference needs omega > 0, got {omega}"
        )));
    }
    let (si, ci) = sici(omega)?;
    let unit = Complex64::new(omega.sin(), omega.cos());
    let tail = Complex64::new(PI - 2.0 * si.value, 2.0 * ci.value);
    Ok((2.0f64 / 3.0).sqrt() * PI * unit * tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_known_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert!((gamma(0.5).unwrap() - PI.sqrt()).abs() / PI.sqrt() < 1e-14);
        let v = gamma(3.5).unwrap();
        let exact = 15.0 * PI.sqrt() / 8.0;
        assert!((v - exact).abs() / exact < 1e-14);
        assert!((gamma(170.0).unwrap() / 4.269_068_009_004_705e304 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn gamma_domain() {
        assert!(matches!(gamma(170.5), Err(Error::Overflow(_))));
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.0).is_err());
    }

    #[test]
    fn gamma_recurrence_grid() {
        let mut x = 0.1;
        while x <= 50.0 {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!((lhs - rhs).abs() / lhs < 1e-12, "x = {x}");
            x += 0.1;
        }
    }

    #[test]
    fn si_ci_values() {
        assert_eq!(sin_int(0.0).unwrap(), 0.0);
        assert!((sin_int(1e6).unwrap() - FRAC_PI_2).abs() < 2e-6);
        // power series summed in exact rational arithmetic at x = 1
        assert!((cos_int(1.0).unwrap() - 0.337_403_922_900_968_1).abs() < 1e-15);
        assert!((sin_int(1.0).unwrap() - 0.946_083_070_367_183_0).abs() < 1e-15);
        assert!(cos_int(0.0).is_err());
        assert!(sin_int(-1.0).is_err());
    }

    #[test]
    fn branches_agree_at_split() {
        let (s1, c1) = sici_series(4.0);
        let (s2, c2) = sici_continued_fraction(4.0);
        assert!((s1.value - s2.value).abs() < 1e-14);
        assert!((c1.value - c2.value).abs() < 1e-14);
    }

    #[test]
    fn derivatives_by_central_differences() {
        let h = 1e-5;
        let mut x = 0.5;
        while x <= 50.0 {
            let dsi = (sin_int(x + h).unwrap() - sin_int(x - h).unwrap()) / (2.0 * h);
            let dci = (cos_int(x + h).unwrap() - cos_int(x - h).unwrap()) / (2.0 * h);
            assert!((dsi - x.sin() / x).abs() < 1e-7, "Si' at {x}");
            assert!((dci - x.cos() / x).abs() < 1e-7, "Ci' at {x}");
            x += 0.37;
        }
    }

    #[test]
    fn ellipsoid_reference_modulus() {
        let w = 100.0;
        let (si, ci) = sici(w).unwrap();
        let expected = (2.0f64 / 3.0).sqrt() * PI * Complex64::new(PI - 2.0 * si.value, 2.0 * ci.value).norm();
        assert!((ellipsoid_reference(w).unwrap().norm() - expected).abs() < 1e-15);
        assert!(ellipsoid_reference(1e7).unwrap().norm() < 1e-5);
        assert!(ellipsoid_reference(0.0).is_err());
    }
}
