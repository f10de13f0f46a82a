//! Gaussian rules from three-term recurrence coefficients.
//!
//! Nodes are the eigenvalues of the symmetric Jacobi matrix (implicit QL with
//! Wilkinson shifts), polished by Newton on the characteristic polynomial.
//! Weights come from the Christoffel function `1 / sum_k p_k(x)^2` over the
//! orthonormal polynomials, which keeps small weights accurate in a relative
//! sense (the eigenvector route only resolves them to absolute precision).

use crate::error::{Error, Result};

/// Recurrence `sqrt(b[k+1]) p_{k+1} = (x - a[k]) p_k - sqrt(b[k]) p_{k-1}` for
/// the orthonormal polynomials of a measure with total mass `mu0`.
///
/// `a` has length `m`, `b` has length `m` with `b[0]` unused (ignored).
#[derive(Debug, Clone)]
pub(crate) struct Recurrence {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub mu0: f64,
}

impl Recurrence {
    fn len(&self) -> usize {
        self.a.len()
    }

    /// Value and derivative of the (unnormalised at the top) degree-`m`
    /// polynomial, plus the Christoffel sum `sum_{k<m} p_k(x)^2`.
    fn eval(&self, x: f64) -> (f64, f64, f64) {
        let m = self.len();
        let mut p_prev = 0.0;
        let mut dp_prev = 0.0;
        let mut p = 1.0 / self.mu0.sqrt();
        let mut dp = 0.0;
        let mut christoffel = p * p;
        for k in 0..m {
            let beta_k = if k == 0 { 0.0 } else { self.b[k].sqrt() };
            let np = (x - self.a[k]) * p - beta_k * p_prev;
            let ndp = p + (x - self.a[k]) * dp - beta_k * dp_prev;
            if k + 1 < m {
                let beta_next = self.b[k + 1].sqrt();
                p_prev = p;
                dp_prev = dp;
                p = np / beta_next;
                dp = ndp / beta_next;
                christoffel += p * p;
            } else {
                p = np;
                dp = ndp;
            }
        }
        (p, dp, christoffel)
    }

    pub fn gauss_rule(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let m = self.len();
        let mut d = self.a.clone();
        let mut e = vec![0.0; m];
        for k in 1..m {
            e[k - 1] = self.b[k].sqrt();
        }
        tridiagonal_eigenvalues(&mut d, &mut e)?;
        d.sort_by(|x, y| x.total_cmp(y));

        let mut nodes = d;
        for j in 0..m {
            let gap = neighbour_gap(&nodes, j);
            for _ in 0..3 {
                let (p, dp, _) = self.eval(nodes[j]);
                if dp == 0.0 || !p.is_finite() || !dp.is_finite() {
                    break;
                }
                let step = p / dp;
                if step.abs() > 0.1 * gap {
                    break;
                }
                nodes[j] -= step;
                if step.abs() <= 4.0 * f64::EPSILON * nodes[j].abs() {
                    break;
                }
            }
        }
        let weights = nodes
            .iter()
            .map(|&x| 1.0 / self.eval(x).2)
            .collect::<Vec<_>>();
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::UnsupportedRule(
                "Christoffel weights lost positivity".into(),
            ));
        }
        Ok((nodes, weights))
    }
}

fn neighbour_gap(nodes: &[f64], j: usize) -> f64 {
    let left = if j > 0 { nodes[j] - nodes[j - 1] } else { f64::INFINITY };
    let right = if j + 1 < nodes.len() { nodes[j + 1] - nodes[j] } else { f64::INFINITY };
    let g = left.min(right);
    if g.is_finite() {
        g
    } else {
        1.0 + nodes[j].abs()
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e[i]` couples `i` and `i+1`, `e[n-1] = 0`).
/// Overwrites `d` with the eigenvalues in no particular order.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut mm = l;
            while mm + 1 < n {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= f64::EPSILON * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::UnsupportedRule(
                    "tridiagonal QL iteration did not converge".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[mm] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = mm;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }
    Ok(())
}

/// Gauss-Legendre on [-1, 1].
pub(crate) fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let a = vec![0.0; n];
    let b = (0..n)
        .map(|k| {
            let k = k as f64;
            k * k / (4.0 * k * k - 1.0)
        })
        .collect();
    Recurrence { a, b, mu0: 2.0 }.gauss_rule()
}
