//! Recurrence coefficients for `x^d exp(-x^alpha)` on `[0, inf)` by the
//! discretised Stieltjes procedure.
//!
//! The measure is replaced by a composite Gauss-Legendre discretisation of
//! `[0, L]` with `L^alpha = 740`, beyond which the weight is below the
//! smallest normal double. The procedure runs on orthonormalised vectors so
//! nothing over- or underflows up to degree 64.

use super::jacobi::{gauss_legendre, Recurrence};
use crate::error::Result;

const PANELS: usize = 64;
const PANEL_POINTS: usize = 32;

pub(crate) fn exp_power_recurrence(m: usize, alpha: u32, degree: u32, mu0: f64) -> Result<Recurrence> {
    let (gx, gw) = gauss_legendre(PANEL_POINTS)?;
    let alpha_f = alpha as f64;
    let len = 740f64.powf(1.0 / alpha_f);
    let h = len / PANELS as f64;

    let mut x = Vec::with_capacity(PANELS * PANEL_POINTS);
    let mut w = Vec::with_capacity(PANELS * PANEL_POINTS);
    for p in 0..PANELS {
        let lo = p as f64 * h;
        for (t, wt) in gx.iter().zip(&gw) {
            let xi = lo + 0.5 * h * (t + 1.0);
            let wi = 0.5 * h * wt * xi.powi(degree as i32) * (-xi.powf(alpha_f)).exp();
            if wi > 0.0 {
                x.push(xi);
                w.push(wi);
            }
        }
    }

    let total: f64 = w.iter().sum();
    let mut p_prev = vec![0.0; x.len()];
    let mut p = vec![1.0 / total.sqrt(); x.len()];
    let mut a = Vec::with_capacity(m);
    let mut b = vec![0.0; m];
    let mut beta = 0.0;
    for k in 0..m {
        let ak: f64 = x
            .iter()
            .zip(&w)
            .zip(&p)
            .map(|((xi, wi), pi)| wi * xi * pi * pi)
            .sum();
        a.push(ak);
        if k + 1 == m {
            break;
        }
        let mut r: Vec<f64> = (0..x.len())
            .map(|i| (x[i] - ak) * p[i] - beta * p_prev[i])
            .collect();
        // one pass of reorthogonalisation against the two previous vectors
        for basis in [&p, &p_prev] {
            let c: f64 = (0..x.len()).map(|i| w[i] * r[i] * basis[i]).sum();
            for i in 0..x.len() {
                r[i] -= c * basis[i];
            }
        }
        let norm = (0..x.len()).map(|i| w[i] * r[i] * r[i]).sum::<f64>().sqrt();
        beta = norm;
        b[k + 1] = norm * norm;
        for v in r.iter_mut() {
            *v /= norm;
        }
        p_prev = std::mem::replace(&mut p, r);
    }
    Ok(Recurrence { a, b, mu0 })
}
