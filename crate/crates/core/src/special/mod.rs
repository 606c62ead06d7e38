//! Special functions and quadrature used throughout the crate.

mod bessel;
mod quadrature;

pub use bessel::{bessel_j, bessel_j_over_power};
pub use quadrature::{integrate, QuadratureConfig};

use crate::error::{Error, Result};

/// Volume of the unit ball in dimension `n`, π^{n/2}/Γ(n/2+1).
pub fn unit_ball_volume(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDimension(n));
    }
    // V_n = (2π/n) V_{n-2}
    let (mut v, start) = if n.is_multiple_of(2) {
        (1.0, 2)
    } else {
        (2.0, 3)
    };
    let mut k = start;
    while k <= n {
        v *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    Ok(v)
}

/// Generalized Laguerre polynomial L_k^{(alpha)}(y) by the three-term recurrence.
pub fn laguerre(k: usize, alpha: f64, y: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - y;
    for j in 1..k {
        let j = j as f64;
        let next = ((2.0 * j + 1.0 + alpha - y) * cur - (j + alpha) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// All of L_0 … L_k at one point.
pub fn laguerre_all(k: usize, alpha: f64, y: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(1.0);
    if k == 0 {
        return out;
    }
    out.push(1.0 + alpha - y);
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - y) * out[j] - (jf + alpha) * out[j - 1]) / (jf + 1.0);
        out.push(next);
    }
    out
}

/// Monomial coefficients c_0 … c_k of L_k^{(alpha)}(y) = Σ c_i y^i.
pub fn laguerre_coefficients(k: usize, alpha: f64) -> Vec<f64> {
    (0..=k)
        .map(|i| {
            // binom(k+alpha, k-i) / i!
            let mut c = 1.0;
            for j in 1..=(k - i) {
                c *= (i as f64 + alpha + j as f64) / j as f64;
            }
            for j in 1..=i {
                c /= j as f64;
            }
            if i % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}

/// Regularized incomplete beta function I_x(a, b).
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!(
            "incomplete beta parameters a={a}, b={b}"
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("incomplete beta argument {x}")));
    }
    Ok(statrs::function::beta::beta_reg(a, b, x))
}
