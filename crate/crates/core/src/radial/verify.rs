//! r(f), the Cohn–Elkies conditions and the density bound.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::expr::{EvenFunction, Expansion, GeometricKind, TailCertificate};
use crate::error::{Error, Result};
use crate::scan::scan_min;
use crate::special::{bessel_j_over_power, integrate, unit_ball_volume, QuadratureConfig};

/// V_n (r/2)^n.
pub fn density_bound(n: usize, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("radius {r}")));
    }
    Ok(unit_ball_volume(n)? * (r / 2.0).powi(n as i32))
}

/// Numeric f̂(t) from the radial reduction
/// f̂(t) = 2π (2π)^ν ∫₀^∞ f(s) s^{n−1} [J_ν(2πst)/(2πst)^ν] ds, ν = n/2 − 1.
pub fn hankel_oracle(f: &EvenFunction, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !f.is_radial() {
        return Err(Error::NotRadial);
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("frequency length {t}")));
    }
    let e = f.expansion(false);
    let upper = integration_cutoff(&e)?;
    let n = f.dim();
    let nu = n as f64 / 2.0 - 1.0;
    let pre = 2.0 * PI * (2.0 * PI).powf(nu);
    let integrand = |s: f64| -> f64 {
        let v = e.eval_axis(s).unwrap_or(f64::NAN);
        let bessel = bessel_j_over_power(nu, 2.0 * PI * s * t).unwrap_or(f64::NAN);
        pre * v * s.powi(n as i32 - 1) * bessel
    };
    // unit pieces keep each oscillatory segment short
    let pieces = upper.ceil().max(1.0) as usize;
    let mut total = 0.0;
    for i in 0..pieces {
        let lo = upper * i as f64 / pieces as f64;
        let hi = upper * (i + 1) as f64 / pieces as f64;
        total += integrate(integrand, lo, hi, cfg)?;
    }
    Ok(total)
}

/// One radius of an exact-versus-quadrature transform comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FtSample {
    pub radius: f64,
    pub exact: f64,
    pub oracle: f64,
}

/// Exact transform against [`hankel_oracle`] at the given radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FtCheck {
    pub samples: Vec<FtSample>,
    /// largest |exact| over the samples, the denominator of the relative error
    pub scale: f64,
    pub max_rel_error: f64,
}

/// Errors are relative to the largest sampled |f̂|, so roots of f̂ do not blow them up.
pub fn ft_check(f: &EvenFunction, radii: &[f64], cfg: &QuadratureConfig) -> Result<FtCheck> {
    let exact = f.fourier_exact();
    let samples = radii
        .iter()
        .map(|&t| {
            Ok(FtSample {
                radius: t,
                exact: exact.evaluate_radial(t)?,
                oracle: hankel_oracle(f, t, cfg)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let scale = samples.iter().fold(0.0f64, |m, p| m.max(p.exact.abs()));
    let max_rel_error = samples
        .iter()
        .fold(0.0f64, |m, p| m.max((p.exact - p.oracle).abs()))
        / scale.max(f64::MIN_POSITIVE);
    Ok(FtCheck {
        samples,
        scale,
        max_rel_error,
    })
}

/// Radius beyond which the integrand is negligible (Gaussian terms) or zero (autocorrelations).
fn integration_cutoff(e: &Expansion) -> Result<f64> {
    let alpha = e.dim() as f64 / 2.0 - 1.0;
    let mut upper = 0.0f64;
    for g in e.groups() {
        let k = g.coeffs.len().saturating_sub(1) as f64;
        let y = 4.0 * k + 2.0 * alpha.abs() + 120.0;
        upper = upper.max((y / (2.0 * PI)).sqrt() / g.dilation);
    }
    for g in e.geometric() {
        match g.kind {
            GeometricKind::Autocorr => upper = upper.max(g.set.support_radius() / g.dilation),
            GeometricKind::FtSquared => {
                if g.coef != 0.0 {
                    return Err(Error::InvalidParameter(
                        "numeric transform needs Gaussian decay or compact support".into(),
                    ));
                }
            }
        }
    }
    Ok(upper.max(1.0))
}

/// Last scanned length with profile > tol, refined by bisection; 0 when there is none.
fn positivity_radius<F: Fn(f64) -> Result<f64>>(
    profile: F,
    end: f64,
    step: f64,
    tol: f64,
) -> Result<f64> {
    let steps = (end / step).ceil().max(1.0) as usize;
    let at = |i: usize| end * i as f64 / steps as f64;
    let mut last = None;
    for i in 0..=steps {
        if profile(at(i))? > tol {
            last = Some(i);
        }
    }
    let Some(i) = last else { return Ok(0.0) };
    if i == steps {
        return Err(Error::RmaxTooSmall { r_max: end });
    }
    let (mut lo, mut hi) = (at(i), at(i + 1));
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        if profile(mid)? > tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// R_max extended to where `sign · f ≤ tol` is certified.
fn certified_end(e: &Expansion, sign: f64, r_max: f64, tol: f64) -> Result<f64> {
    match e.tail_certificate_within(sign, tol) {
        TailCertificate::NonPositiveBeyond { radius, .. } => Ok(r_max.max(radius)),
        TailCertificate::Unavailable(why) => Err(Error::UncertifiableTail(why)),
    }
}

/// r(f) for radial f: scan at step 1e-3 up to R_max (extended to the tail
/// certificate's radius when that is larger).
pub fn radius_of_positivity(f: &EvenFunction, r_max: f64, tol: f64) -> Result<f64> {
    if !f.is_radial() {
        return Err(Error::NotRadial);
    }
    let e = f.expansion(false);
    let end = certified_end(&e, 1.0, r_max, tol)?;
    positivity_radius(|s| e.eval_axis(s), end, DEFAULT_STEP, tol)
}

const DEFAULT_STEP: f64 = 1e-3;

/// Grids and tolerances for [`verify_ce`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_max: f64,
    pub step: f64,
    pub tol: f64,
    /// random directions added to the first axis for non-radial functions
    pub directions: usize,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            r_max: 6.0,
            step: DEFAULT_STEP,
            tol: 1e-9,
            directions: 64,
            seed: 0,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0 && self.step > 0.0 && self.tol > 0.0) || !self.r_max.is_finite() {
            return Err(Error::InvalidParameter(format!("grid spec {self:?}")));
        }
        Ok(())
    }
}

/// A function sampled along fixed unit directions: the first axis, plus
/// seeded random directions when the function is not radial.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    expansion: Expansion,
    directions: Vec<Vec<f64>>,
}

impl RadialProfile {
    pub fn new(f: &EvenFunction, transform: bool, directions: usize, seed: u64) -> Self {
        let expansion = f.expansion(transform);
        let n = f.dim();
        let mut dirs = vec![super::expr::axis_point(n, 1.0)];
        if !expansion.is_radial() && n > 1 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            while dirs.len() < directions + 1 {
                let g: Vec<f64> = (0..n)
                    .map(|_| rng.sample::<f64, _>(StandardNormal))
                    .collect();
                let len = g.iter().map(|v| v * v).sum::<f64>().sqrt();
                if len > 0.0 {
                    dirs.push(g.iter().map(|v| v / len).collect());
                }
            }
        }
        Self {
            expansion,
            directions: dirs,
        }
    }

    pub fn expansion(&self) -> &Expansion {
        &self.expansion
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn is_exact(&self) -> bool {
        self.directions.len() == 1
    }

    fn along(&self, s: f64) -> impl Iterator<Item = Result<f64>> + '_ {
        self.directions.iter().map(move |u| {
            let p: Vec<f64> = u.iter().map(|v| v * s).collect();
            self.expansion.eval(&p)
        })
    }

    /// Largest sampled value at length s.
    pub fn max_at(&self, s: f64) -> Result<f64> {
        self.along(s)
            .try_fold(f64::NEG_INFINITY, |m, v| Ok(m.max(v?)))
    }

    /// Smallest sampled value at length s.
    pub fn min_at(&self, s: f64) -> Result<f64> {
        self.along(s).try_fold(f64::INFINITY, |m, v| Ok(m.min(v?)))
    }
}

/// Sampled r(f) for any even f, using the largest value over sampled directions.
pub fn radius_of_positivity_sampled(f: &EvenFunction, grid: &GridSpec) -> Result<f64> {
    grid.validate()?;
    let p = RadialProfile::new(f, false, grid.directions, grid.seed);
    let end = certified_end(p.expansion(), 1.0, grid.r_max, grid.tol)?;
    positivity_radius(|s| p.max_at(s), end, grid.step, grid.tol)
}

/// Verification record for membership in the Cohn–Elkies class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CEReport {
    pub dim: usize,
    pub f0: f64,
    pub fhat0: f64,
    pub r: Option<f64>,
    pub fhat_min: f64,
    pub fhat_min_at: f64,
    pub density_bound: Option<f64>,
    pub passed: bool,
    pub failures: Vec<String>,
    /// false when values came from sampled directions rather than an exact radial profile
    pub exact_profile: bool,
    pub grid: GridSpec,
}

/// Checks f(0) = f̂(0) > 0, f ≤ 0 beyond r and f̂ ≥ 0 on the grid, with tail certificates for both.
pub fn verify_ce(f: &EvenFunction, grid: &GridSpec) -> Result<CEReport> {
    grid.validate()?;
    let n = f.dim();
    let fp = RadialProfile::new(f, false, grid.directions, grid.seed);
    let hp = RadialProfile::new(f, true, grid.directions, grid.seed);
    let origin = vec![0.0; n];
    let f0 = fp.expansion().eval(&origin)?;
    let fhat0 = hp.expansion().eval(&origin)?;
    let mut failures = Vec::new();
    if !(f0 > 0.0) {
        failures.push(format!("f(0) = {f0:e} is not positive"));
    }
    if (f0 - fhat0).abs() > grid.tol * f0.abs().max(1.0) {
        failures.push(format!("f(0) = {f0:e} differs from f̂(0) = {fhat0:e}"));
    }

    let r = match certified_end(fp.expansion(), 1.0, grid.r_max, grid.tol)
        .and_then(|end| positivity_radius(|s| fp.max_at(s), end, grid.step, grid.tol))
    {
        Ok(r) => Some(r),
        Err(e) => {
            failures.push(format!("no certified radius: {e}"));
            None
        }
    };

    let mut fhat_min = f64::INFINITY;
    let mut fhat_min_at = 0.0;
    match certified_end(hp.expansion(), -1.0, grid.r_max, grid.tol) {
        Ok(end) => {
            (fhat_min_at, fhat_min) = scan_min(&|s| hp.min_at(s), 0.0, end, grid.step)?;
            if fhat_min < -grid.tol {
                failures.push(format!("f̂ reaches {fhat_min:e} at length {fhat_min_at}"));
            }
        }
        Err(e) => failures.push(format!("transform tail: {e}")),
    }

    let density = match r {
        Some(r) if r > 0.0 => Some(density_bound(n, r)?),
        _ => None,
    };
    Ok(CEReport {
        dim: n,
        f0,
        fhat0,
        r,
        fhat_min,
        fhat_min_at,
        density_bound: density,
        passed: failures.is_empty(),
        failures,
        exact_profile: fp.is_exact() && hp.is_exact(),
        grid: *grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BallUnion;

    fn triangle() -> EvenFunction {
        EvenFunction::autocorr(BallUnion::single(1, 0.5).unwrap())
    }

    #[test]
    fn density_examples() {
        assert!((density_bound(1, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let e8 = PI.powi(4) / 384.0;
        assert!((density_bound(8, 2f64.sqrt()).unwrap() - e8).abs() < 1e-14);
        assert!((density_bound(8, 2f64.sqrt()).unwrap() - 0.253_669).abs() < 1e-6);
        assert!((density_bound(24, 2.0).unwrap() - 0.001_930).abs() < 1e-6);
        assert!(density_bound(3, 0.0).is_err());
        assert!(density_bound(3, -1.0).is_err());
        let mut last = 0.0;
        for i in 1..100 {
            let v = density_bound(5, i as f64 * 0.05).unwrap();
            assert!(v > last);
            last = v;
        }
        assert!((density_bound(7, 2.0).unwrap() - unit_ball_volume(7).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn hankel_examples() {
        let cfg = QuadratureConfig::default();
        let e0 = EvenFunction::eigen(3, 0).unwrap();
        let v = hankel_oracle(&e0, 0.7, &cfg).unwrap();
        assert!((v - (-PI * 0.49).exp()).abs() < 1e-9);
        let e2 = EvenFunction::eigen(1, 2).unwrap();
        for &t in &[0.0, 0.3, 1.1, 2.0] {
            let got = hankel_oracle(&e2, t, &cfg).unwrap();
            assert!((got - e2.evaluate_radial(t).unwrap()).abs() < 1e-6);
        }
        assert!(hankel_oracle(&triangle(), 1.0, &cfg).unwrap().abs() < 1e-6);
    }

    #[test]
    fn fourier_exact_agrees_with_oracle_for_dilations() {
        let cfg = QuadratureConfig::default();
        let f = EvenFunction::eigen(1, 1).unwrap().dilate(2.0).unwrap();
        let ft = f.fourier_exact();
        for i in 0..10 {
            let t = 0.3 * i as f64;
            let want = hankel_oracle(&f, t, &cfg).unwrap();
            assert!(
                (ft.evaluate_radial(t).unwrap() - want).abs() < 1e-9,
                "t = {t}"
            );
        }
    }

    #[test]
    fn positivity_radius_examples() {
        let r = radius_of_positivity(&triangle(), 6.0, 1e-9).unwrap();
        assert!((r - 1.0).abs() <= 1e-9);
        let half = radius_of_positivity(&triangle().dilate(2.0).unwrap(), 6.0, 1e-9).unwrap();
        assert!((half - 0.5).abs() <= 1e-9);
        // e_1 in n = 1 crosses zero at 1/(2√π)
        let e1 = EvenFunction::eigen(1, 1).unwrap();
        let r1 = radius_of_positivity(&e1, 6.0, 1e-12).unwrap();
        assert!((r1 - 0.5 / PI.sqrt()).abs() < 1e-9);
        // the Gaussian stays positive, but drops below tol at √(ln(1/tol)/π)
        let g = radius_of_positivity(&EvenFunction::eigen(2, 0).unwrap(), 6.0, 1e-9).unwrap();
        assert!((g - (1e9f64.ln() / PI).sqrt()).abs() < 1e-8);
        let sinc2 = EvenFunction::ft_squared(BallUnion::single(1, 0.5).unwrap());
        assert!(matches!(
            radius_of_positivity(&sinc2, 6.0, 1e-9),
            Err(Error::UncertifiableTail(_))
        ));
        assert!(
            radius_of_positivity(&e1.scaled(-1.0).unwrap().scaled(-1.0).unwrap(), 6.0, 1e-9)
                .is_ok()
        );
    }

    #[test]
    fn verify_examples() {
        let rep = verify_ce(&triangle(), &GridSpec::default()).unwrap();
        assert!(rep.passed, "{:?}", rep.failures);
        assert!((rep.r.unwrap() - 1.0).abs() <= 1e-9);
        assert!((rep.density_bound.unwrap() - 1.0).abs() <= 1e-9);
        assert!(rep.exact_profile);

        let g = verify_ce(&EvenFunction::eigen(1, 0).unwrap(), &GridSpec::default()).unwrap();
        assert!(g.passed && (g.r.unwrap() - (1e9f64.ln() / PI).sqrt()).abs() < 1e-8);
        // sinc² has the triangle as transform but no certifiable tail
        let sinc2 = verify_ce(
            &EvenFunction::ft_squared(BallUnion::single(1, 0.5).unwrap()),
            &GridSpec::default(),
        )
        .unwrap();
        assert!(!sinc2.passed && sinc2.r.is_none());
        assert!((sinc2.f0 - 1.0).abs() < 1e-12 && (sinc2.fhat0 - 1.0).abs() < 1e-12);
        let neg = verify_ce(
            &EvenFunction::eigen(1, 0).unwrap().scaled(-1.0).unwrap(),
            &GridSpec::default(),
        )
        .unwrap();
        assert!(!neg.passed);
        assert!(neg.failures.iter().any(|m| m.contains("f(0)")));
    }

    #[test]
    fn sampled_profile_for_unions() {
        let s = BallUnion::new(2, 0.2, vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let f = EvenFunction::autocorr(s.clone());
        let grid = GridSpec {
            directions: 16,
            ..GridSpec::default()
        };
        let r = radius_of_positivity_sampled(&f, &grid).unwrap();
        // the axis direction reaches the far edge of B(c_2 − c_1, 2ρ)
        // the lens area vanishes like (2ρ − d)^{3/2}, so f drops below tol slightly early
        assert!((r - s.support_radius()).abs() < 1e-4, "{r}");
        assert!(matches!(
            radius_of_positivity(&f, 6.0, 1e-9),
            Err(Error::NotRadial)
        ));
    }
}
