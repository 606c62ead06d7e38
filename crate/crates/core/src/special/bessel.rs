//! Bessel functions of the first kind for integer and half-integer orders.
//!
//! Half-integer orders start from the closed forms of J_{-1/2} and J_{1/2};
//! integer orders start from the large-argument expansions of J_0 and J_1.
//! Both are carried upward by the three-term recurrence while the argument
//! exceeds the order. Below that the recurrence is run downward from a
//! high starting index (Miller's algorithm) and normalized, which stays
//! accurate where the power series would lose digits to cancellation.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};

/// Arguments above this use the asymptotic expansion for J_0/J_1.
const ASYMPTOTIC_MIN_X: f64 = 25.0;

/// J_order(x) for order in {-1/2, 0, 1/2, 1, 3/2, ...} and x >= 0.
pub fn bessel_j(order: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_j argument {x}")));
    }
    let twice = 2.0 * order;
    if twice.fract() != 0.0 || twice < -1.0 || !order.is_finite() {
        return Err(Error::Domain(format!(
            "bessel_j order {order} (only half-integers >= -1/2 supported)"
        )));
    }
    let twice = twice as i64;
    if twice % 2 == 0 {
        Ok(integer_order((twice / 2) as usize, x))
    } else if x == 0.0 {
        if twice == -1 {
            Err(Error::Domain("J_{-1/2} is singular at 0".into()))
        } else {
            Ok(0.0)
        }
    } else {
        // order = m - 1/2 with m >= 0
        Ok(half_integer_order(((twice + 1) / 2) as usize, x))
    }
}

/// J_ν(x) / x^ν, finite at x = 0, for the same orders as [`bessel_j`].
///
/// Used where the factor t^{-ν} multiplies J_ν and the ratio must be
/// evaluated near the origin.
pub fn bessel_j_over_power(order: f64, x: f64) -> Result<f64> {
    if x < 0.5 {
        // series in (x/2)^2; few terms suffice and there is no cancellation
        let q = 0.25 * x * x;
        let mut term = 1.0 / (2f64.powf(order) * statrs::function::gamma::gamma(order + 1.0));
        let mut sum = term;
        for m in 1..40 {
            term *= -q / (m as f64 * (m as f64 + order));
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        Ok(sum)
    } else {
        Ok(bessel_j(order, x)? / x.powf(order))
    }
}

fn integer_order(m: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    if x > ASYMPTOTIC_MIN_X && (m as f64) < x {
        let j0 = asymptotic(0.0, x);
        if m == 0 {
            return j0;
        }
        let j1 = asymptotic(1.0, x);
        upward(j0, j1, 0.0, m, x)
    } else {
        miller_integer(m, x)
    }
}

fn half_integer_order(m: usize, x: f64) -> f64 {
    let amp = (2.0 / (PI * x)).sqrt();
    let jm = amp * x.cos(); // J_{-1/2}
    if m == 0 {
        return jm;
    }
    let jp = amp * x.sin(); // J_{1/2}
    if m == 1 {
        return jp;
    }
    let order = m as f64 - 0.5;
    if x > order {
        upward(jm, jp, -0.5, m, x)
    } else {
        miller_half(m, x, jm, jp)
    }
}

/// Carries (J_{ν0}, J_{ν0+1}) up to J_{ν0+steps}.
fn upward(mut prev: f64, mut cur: f64, nu0: f64, steps: usize, x: f64) -> f64 {
    if steps == 0 {
        return prev;
    }
    let mut nu = nu0 + 1.0;
    for _ in 1..steps {
        let next = 2.0 * nu / x * cur - prev;
        prev = cur;
        cur = next;
        nu += 1.0;
    }
    cur
}

fn start_index(m: usize, x: f64) -> usize {
    let top = (m as f64).max(x);
    (top + 30.0 + 6.0 * top.sqrt()).ceil() as usize
}

const RESCALE_ABOVE: f64 = 1e200;

/// Downward recurrence for integer orders, normalized by J_0 + 2ΣJ_{2k} = 1.
fn miller_integer(m: usize, x: f64) -> f64 {
    let top = start_index(m, x) | 1;
    let mut above = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k, k starts at `top`
    let mut norm = 0.0;
    let mut target = 0.0;
    let mut k = top;
    loop {
        if k == m {
            target = cur;
        }
        if k.is_multiple_of(2) {
            norm += if k == 0 { cur } else { 2.0 * cur };
        }
        if k == 0 {
            break;
        }
        let below = 2.0 * k as f64 / x * cur - above;
        above = cur;
        cur = below;
        k -= 1;
        if cur.abs() > RESCALE_ABOVE {
            cur /= RESCALE_ABOVE;
            above /= RESCALE_ABOVE;
            norm /= RESCALE_ABOVE;
            target /= RESCALE_ABOVE;
        }
    }
    target / norm
}

/// Downward recurrence for order m - 1/2, normalized against the exact
/// pair (J_{-1/2}, J_{1/2}) by least squares so neither zero can blow up.
fn miller_half(m: usize, x: f64, jm: f64, jp: f64) -> f64 {
    let top = start_index(m, x);
    // index i represents order i - 1/2
    let mut above = 0.0;
    let mut cur = 1e-300;
    let mut target = 0.0;
    let mut at_half = 0.0;
    let mut i = top;
    loop {
        if i == m {
            target = cur;
        }
        if i == 1 {
            at_half = cur;
        }
        if i == 0 {
            break;
        }
        let nu = i as f64 - 0.5;
        let below = 2.0 * nu / x * cur - above;
        above = cur;
        cur = below;
        i -= 1;
        if cur.abs() > RESCALE_ABOVE {
            cur /= RESCALE_ABOVE;
            above /= RESCALE_ABOVE;
            target /= RESCALE_ABOVE;
            at_half /= RESCALE_ABOVE;
        }
    }
    let big = cur.abs().max(at_half.abs());
    let (a, b) = (cur / big, at_half / big);
    let scale = (jm * a + jp * b) / (a * a + b * b);
    target / big * scale
}

/// Hankel large-argument expansion; accurate to roundoff for x > 25.
fn asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() >= last || term == 0.0 {
            break;
        }
        last = term.abs();
        // k odd contributes to Q, k even to P, with alternating signs
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (nu * FRAC_PI_2 + FRAC_PI_4);
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct power series; only trustworthy for small x.
    fn series(order: f64, x: f64) -> f64 {
        let h = x / 2.0;
        let mut term = h.powf(order) / statrs::function::gamma::gamma(order + 1.0);
        let mut sum = term;
        for m in 1..200 {
            term *= -h * h / (m as f64 * (m as f64 + order));
            sum += term;
        }
        sum
    }

    #[test]
    fn basic_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert!(bessel_j(0.5, PI).unwrap().abs() < 1e-12);
        assert!(bessel_j(1.0, 3.831_705_970_2).unwrap().abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(bessel_j(0.0, -1.0).is_err());
        assert!(bessel_j(0.3, 1.0).is_err());
        assert!(bessel_j(-1.0, 1.0).is_err());
        assert!(bessel_j(-0.5, 0.0).is_err());
    }

    #[test]
    fn matches_series_at_small_arguments() {
        for twice in -1..=26 {
            let order = twice as f64 / 2.0;
            for i in 1..=40 {
                let x = i as f64 * 0.2;
                let got = bessel_j(order, x).unwrap();
                let want = series(order, x);
                assert!(
                    (got - want).abs() < 1e-13,
                    "J_{order}({x}): {got} vs {want}"
                );
            }
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn reference_values() {
        // mpmath besselj at 30 digits
        let cases = [
            (0.0, 30.0, -0.086_367_983_581_040_211),
            (1.0, 50.0, -0.097_511_828_125_175_138),
            (4.0, 12.5, 0.226_165_368_869_670_306),
            (12.0, 12.0, 0.195_280_182_738_832_243),
            (3.0, 100.0, 0.076_284_201_720_331_943),
            (24.0, 20.0, 0.019_929_106_196_554_408),
            (4.5, 3.0, 0.077_597_591_180_409_847),
            (12.5, 40.0, -0.116_776_179_769_225_722),
            (0.0, 17.3, -0.133_700_647_075_764_194),
            (7.0, 25.5, -0.083_249_221_475_469_142),
            (10.5, 10.0, 0.163_007_366_390_325_745),
        ];
        for (order, x, want) in cases {
            let got = bessel_j(order, x).unwrap();
            assert!(
                (got - want).abs() < 1e-12,
                "J_{order}({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn recurrence_residual() {
        for twice in 1..=26 {
            let nu = twice as f64 / 2.0;
            let mut x = 0.1;
            while x <= 50.0 {
                let r = bessel_j(nu - 1.0, x).unwrap() + bessel_j(nu + 1.0, x).unwrap()
                    - 2.0 * nu / x * bessel_j(nu, x).unwrap();
                assert!(r.abs() <= 1e-9, "nu {nu} x {x} residual {r}");
                x += 0.173;
            }
        }
    }

    #[test]
    fn first_zero_of_j1_by_bisection_on_series() {
        let (mut lo, mut hi) = (3.0, 4.5);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if series(1.0, lo) * series(1.0, mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((lo - 3.831_705_970_2).abs() < 1e-9);
        assert!(bessel_j(1.0, lo).unwrap().abs() < 1e-12);
    }

    #[test]
    fn scaled_form_branches_agree() {
        for twice in -1..=24 {
            let order = twice as f64 / 2.0;
            for &x in &[0.3, 0.499, 0.5, 0.7] {
                let got = bessel_j_over_power(order, x).unwrap();
                let want = series(order, x) / x.powf(order);
                assert!(
                    (got - want).abs() < 1e-13 * want.abs(),
                    "order {order} x {x}: {got} vs {want}"
                );
            }
        }
    }
}
