//! Unions of equal-radius balls, their autocorrelations and indicator
//! transforms, clearance sampling and witness-chain construction.

mod clearance;
mod witness;

pub use clearance::{
    clearance, dual_clearance, ClearanceMode, ClearanceReport, DualClearanceReport,
};
pub use witness::{differences_certified, witness_chain, ForbiddenSetOracle, GapOracle};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{bessel_j_over_power, regularized_incomplete_beta, unit_ball_volume};

/// Pairwise-disjoint closed balls of a common radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BallUnionRepr", into = "BallUnionRepr")]
pub struct BallUnion {
    dim: usize,
    radius: f64,
    centers: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct BallUnionRepr {
    dim: usize,
    radius: f64,
    centers: Vec<Vec<f64>>,
}

impl TryFrom<BallUnionRepr> for BallUnion {
    type Error = Error;
    fn try_from(r: BallUnionRepr) -> Result<Self> {
        BallUnion::new(r.dim, r.radius, r.centers)
    }
}

impl From<BallUnion> for BallUnionRepr {
    fn from(b: BallUnion) -> Self {
        BallUnionRepr {
            dim: b.dim,
            radius: b.radius,
            centers: b.centers,
        }
    }
}

/// Relative slack allowed when checking that touching balls do not overlap.
const TOUCH_SLACK: f64 = 1e-12;

impl BallUnion {
    pub fn new(dim: usize, radius: f64, centers: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!("ball radius {radius}")));
        }
        if centers.is_empty() {
            return Err(Error::InvalidParameter(
                "ball union needs at least one center".into(),
            ));
        }
        for c in &centers {
            if c.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.len(),
                });
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter("non-finite center".into()));
            }
        }
        for j in 0..centers.len() {
            for k in 0..j {
                let d = distance(&centers[j], &centers[k]);
                if d < 2.0 * radius * (1.0 - TOUCH_SLACK) {
                    return Err(Error::InvalidParameter(format!(
                        "balls {k} and {j} overlap (center distance {d}, radius {radius})"
                    )));
                }
            }
        }
        Ok(Self {
            dim,
            radius,
            centers,
        })
    }

    /// A single ball centered at the origin.
    pub fn single(dim: usize, radius: f64) -> Result<Self> {
        Self::new(dim, radius, vec![vec![0.0; dim]])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// k · V_n · ρⁿ.
    pub fn measure(&self) -> f64 {
        self.centers.len() as f64
            * unit_ball_volume(self.dim).unwrap()
            * self.radius.powi(self.dim as i32)
    }

    /// Largest center-to-center distance.
    pub fn center_spread(&self) -> f64 {
        let mut best = 0.0f64;
        for j in 0..self.centers.len() {
            for k in 0..j {
                best = best.max(distance(&self.centers[j], &self.centers[k]));
            }
        }
        best
    }

    /// Radius of the smallest origin ball containing S − S.
    pub fn support_radius(&self) -> f64 {
        self.center_spread() + 2.0 * self.radius
    }

    /// Autocorrelation and indicator transform depend only on ‖x‖: one ball, or any even function on the line.
    pub fn is_radial(&self) -> bool {
        self.dim == 1 || self.centers.len() == 1
    }

    /// Difference vectors c_j − c_k for j < k.
    pub fn differences(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        for j in 0..self.centers.len() {
            for k in (j + 1)..self.centers.len() {
                out.push(sub(&self.centers[j], &self.centers[k]));
            }
        }
        out
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// μ(B_ρ(a) ∩ B_ρ(b)) for centers at distance `d`: twice a hyperspherical cap.
pub fn pair_intersection_volume(n: usize, rho: f64, d: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDimension(n));
    }
    if !(rho > 0.0) || !(d >= 0.0) {
        return Err(Error::Domain(format!("pair intersection rho={rho}, d={d}")));
    }
    if d >= 2.0 * rho {
        return Ok(0.0);
    }
    if n == 1 {
        return Ok(2.0 * rho - d);
    }
    let q = d / (2.0 * rho);
    let x = (1.0 - q) * (1.0 + q);
    let cap = regularized_incomplete_beta((n as f64 + 1.0) / 2.0, 0.5, x)?;
    Ok(unit_ball_volume(n)? * rho.powi(n as i32) * cap)
}

/// h(x) = μ(S ∩ (S + x)), summed so that h(x) and h(−x) agree bit for bit.
pub fn autocorr_eval(s: &BallUnion, x: &[f64]) -> Result<f64> {
    s.check_point(x)?;
    let (n, rho) = (s.dim, s.radius);
    let mut total = s.len() as f64 * pair_intersection_volume(n, rho, norm(x))?;
    for d in s.differences() {
        let minus: f64 = d
            .iter()
            .zip(x)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let plus: f64 = d
            .iter()
            .zip(x)
            .map(|(a, b)| (a + b) * (a + b))
            .sum::<f64>()
            .sqrt();
        total += pair_intersection_volume(n, rho, minus)? + pair_intersection_volume(n, rho, plus)?;
    }
    Ok(total)
}

/// Transform of a single origin ball of radius ρ at frequency length t.
pub fn ball_ft(n: usize, rho: f64, t: f64) -> Result<f64> {
    let half = n as f64 / 2.0;
    let u = 2.0 * PI * rho * t;
    Ok(rho.powi(n as i32) * (2.0 * PI).powf(half) * bessel_j_over_power(half, u)?)
}

/// 1̂_S(ξ) = Σ_j e^{−2πi ξ·c_j} B̂_ρ(‖ξ‖).
pub fn indicator_ft(s: &BallUnion, xi: &[f64]) -> Result<Complex64> {
    s.check_point(xi)?;
    let radial = ball_ft(s.dim, s.radius, norm(xi))?;
    let phase: Complex64 = s
        .centers
        .iter()
        .map(|c| {
            let dot: f64 = c.iter().zip(xi).map(|(a, b)| a * b).sum();
            Complex64::from_polar(1.0, -2.0 * PI * dot)
        })
        .sum();
    Ok(phase * radial)
}

/// ĥ(ξ) = |1̂_S(ξ)|², computed from cosines of pairwise phase differences.
pub fn autocorr_ft_eval(s: &BallUnion, xi: &[f64]) -> Result<f64> {
    s.check_point(xi)?;
    let radial = ball_ft(s.dim, s.radius, norm(xi))?;
    let mut phase = s.len() as f64;
    for d in s.differences() {
        let dot: f64 = d.iter().zip(xi).map(|(a, b)| a * b).sum();
        phase += 2.0 * (2.0 * PI * dot).cos();
    }
    Ok((radial * radial * phase).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn measures() {
        assert!((BallUnion::single(1, 0.5).unwrap().measure() - 1.0).abs() < 1e-15);
        let three =
            BallUnion::new(2, 1.0, vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 5.0]]).unwrap();
        assert!((three.measure() - 3.0 * PI).abs() < 1e-12);
        let b8 = BallUnion::single(8, 0.9).unwrap();
        assert!((b8.measure() - 4.058_712_126_416_768 * 0.9f64.powi(8)).abs() < 1e-12);
        assert!((b8.measure() - 1.7472).abs() < 1e-4);
    }

    #[test]
    fn construction_rejects_bad_unions() {
        assert!(BallUnion::new(2, 1.0, vec![vec![0.0, 0.0], vec![0.0, 0.0]]).is_err());
        assert!(BallUnion::new(2, 1.0, vec![vec![0.0, 0.0], vec![1.5, 0.0]]).is_err());
        assert!(BallUnion::new(2, 1.0, vec![vec![0.0]]).is_err());
        assert!(BallUnion::new(2, -1.0, vec![vec![0.0, 0.0]]).is_err());
        // touching is allowed
        assert!(BallUnion::new(1, 0.5, vec![vec![0.0], vec![1.0]]).is_ok());
    }

    #[test]
    fn json_shape() {
        let s = BallUnion::new(2, 0.25, vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"{"dim":2,"radius":0.25,"centers":[[0.0,0.0],[1.0,0.0]]}"#
        );
        let back: BallUnion = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(
            serde_json::from_str::<BallUnion>(r#"{"dim":1,"radius":1,"centers":[[0],[1]]}"#)
                .is_err()
        );
    }

    #[test]
    fn pair_intersection_examples() {
        for n in 1..6 {
            let v = pair_intersection_volume(n, 0.7, 0.0).unwrap();
            assert!((v - unit_ball_volume(n).unwrap() * 0.7f64.powi(n as i32)).abs() < 1e-12);
        }
        assert!((pair_intersection_volume(1, 0.5, 0.3).unwrap() - 0.7).abs() < 1e-15);
        assert!((pair_intersection_volume(3, 1.0, 1.0).unwrap() - 5.0 * PI / 12.0).abs() < 1e-12);
        assert_eq!(pair_intersection_volume(3, 1.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn pair_intersection_monte_carlo() {
        // lens of two unit balls in R^3 at distance 1, sampled in its bounding box
        // [0, 1] × [−√3/2, √3/2]²; standard error ≈ 2.4e-4
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let samples = 40_000_000;
        let h = 3f64.sqrt() / 2.0;
        let mut hits = 0u64;
        for _ in 0..samples {
            let p: [f64; 3] = [
                rng.random_range(0.0..1.0),
                rng.random_range(-h..h),
                rng.random_range(-h..h),
            ];
            let r0 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            let r1 = (p[0] - 1.0) * (p[0] - 1.0) + p[1] * p[1] + p[2] * p[2];
            if r0 <= 1.0 && r1 <= 1.0 {
                hits += 1;
            }
        }
        let estimate = 3.0 * hits as f64 / samples as f64;
        let exact = pair_intersection_volume(3, 1.0, 1.0).unwrap();
        assert!((estimate - exact).abs() < 1e-3, "{estimate} vs {exact}");
    }

    #[test]
    fn pair_intersection_monotone_and_continuous() {
        for n in 1..=8 {
            let mut last = f64::INFINITY;
            for i in 0..=400 {
                let d = i as f64 * 0.005;
                let v = pair_intersection_volume(n, 1.0, d).unwrap();
                assert!(v <= last + 1e-14, "n={n} d={d}");
                last = v;
            }
            let near = pair_intersection_volume(n, 1.0, 2.0 - 1e-9).unwrap();
            assert!(near < 1e-6, "n={n}: {near}");
        }
    }

    #[test]
    fn autocorrelation_examples() {
        let tri = BallUnion::single(1, 0.5).unwrap();
        assert!((autocorr_eval(&tri, &[0.25]).unwrap() - 0.75).abs() < 1e-15);
        assert!((autocorr_eval(&tri, &[0.0]).unwrap() - 1.0).abs() < 1e-15);
        let s = BallUnion::new(
            2,
            0.4,
            vec![vec![0.0, 0.0], vec![1.0, 0.3], vec![-0.5, 2.0]],
        )
        .unwrap();
        assert!((autocorr_eval(&s, &[0.0, 0.0]).unwrap() - s.measure()).abs() < 1e-12);
        let far = s.support_radius() + 1e-9;
        assert_eq!(autocorr_eval(&s, &[far, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn indicator_transform_examples() {
        let tri = BallUnion::single(1, 0.5).unwrap();
        for &t in &[0.1, 0.37, 1.5, 2.25] {
            let want = (PI * t).sin() / (PI * t);
            let got = indicator_ft(&tri, &[t]).unwrap();
            assert!((got.re - want).abs() < 1e-13 && got.im.abs() < 1e-15);
        }
        assert!(indicator_ft(&tri, &[1.0]).unwrap().norm() < 1e-15);
        assert!(autocorr_ft_eval(&tri, &[1.0]).unwrap() < 1e-30);
        let s = BallUnion::new(3, 0.3, vec![vec![0.0; 3], vec![1.0, 0.0, 0.0]]).unwrap();
        let at0 = indicator_ft(&s, &[0.0; 3]).unwrap();
        assert!((at0.re - s.measure()).abs() < 1e-14 && at0.im == 0.0);
        assert!((autocorr_ft_eval(&s, &[0.0; 3]).unwrap() - s.measure().powi(2)).abs() < 1e-14);
    }

    fn union_strategy() -> impl Strategy<Value = BallUnion> {
        (
            1usize..=3,
            0.05f64..0.6,
            prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 1..=4),
        )
            .prop_filter_map("overlapping balls", |(n, rho, pts)| {
                let centers = pts.into_iter().map(|p| p[..n].to_vec()).collect();
                BallUnion::new(n, rho, centers).ok()
            })
    }

    proptest! {
        #[test]
        fn autocorrelation_is_exactly_even(s in union_strategy(), raw in prop::collection::vec(-4.0f64..4.0, 3)) {
            let x = &raw[..s.dim()];
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            prop_assert_eq!(autocorr_eval(&s, x).unwrap(), autocorr_eval(&s, &neg).unwrap());
            prop_assert_eq!(autocorr_ft_eval(&s, x).unwrap(), autocorr_ft_eval(&s, &neg).unwrap());
        }

        #[test]
        fn transform_is_squared_modulus(s in union_strategy(), raw in prop::collection::vec(-2.0f64..2.0, 3)) {
            let xi = &raw[..s.dim()];
            let direct = indicator_ft(&s, xi).unwrap().norm_sqr();
            let h = autocorr_ft_eval(&s, xi).unwrap();
            prop_assert!(h >= 0.0);
            prop_assert!((direct - h).abs() <= 1e-12 * s.measure().powi(2));
        }
    }
}
