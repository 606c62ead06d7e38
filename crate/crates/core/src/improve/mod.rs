//! Operators that turn a Cohn–Elkies candidate into one with a strictly
//! smaller radius: adding an autocorrelation bump, subtracting an indicator
//! transform, and subtracting a multiple of the function's own transform.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{clearance, dual_clearance, BallUnion};
use crate::radial::{EvenFunction, GridSpec, RadialProfile};
use crate::scan::{self, scan_min};

/// Default fraction of the maximal admissible α actually used.
pub const DEFAULT_THETA: f64 = 0.5;

/// Default clearance grid: spacing 2ρ/50.
pub const DEFAULT_CLEARANCE_DENSITY: usize = 50;

/// Dual clearance at or below this multiple of f̂(0) counts as a zero of f̂.
pub const DUAL_CLEARANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImprovementSide {
    Spatial,
    Fourier,
    Dual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovementParams {
    pub side: ImprovementSide,
    /// mixing weight; the sharpening constant c for the dual side
    pub alpha: f64,
    /// rescaling factor; 1 for the dual side
    pub c_scale: f64,
    pub theta: f64,
    /// clearance sup (spatial) or dual-clearance min (fourier) used to pick α
    pub clearance: Option<f64>,
    pub measure: Option<f64>,
    /// F(0) and F̂(0) before rescaling
    pub f0: f64,
    pub fhat0: f64,
}

/// An improved function together with the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Improved {
    pub function: EvenFunction,
    pub params: ImprovementParams,
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "theta {theta} outside (0, 1)"
        )));
    }
    Ok(())
}

fn check_measure(s: &BallUnion) -> Result<f64> {
    let mu = s.measure();
    if mu <= 1.0 {
        return Err(Error::InsufficientMeasure(mu));
    }
    Ok(mu)
}

/// c with F(0) = F̂(0)/cⁿ, i.e. (F̂(0)/F(0))^{1/n}.
pub fn zero_balance_scale(n: usize, f0: f64, fhat0: f64) -> Result<f64> {
    if !(f0 > 0.0) || !(fhat0 > 0.0) || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "zero values F(0) = {f0}, F̂(0) = {fhat0}"
        )));
    }
    Ok((fhat0 / f0).powf(1.0 / n as f64))
}

/// F_c(x) = f(cx) + α h(cx), h = 1_S ∗ 1_{−S}, with α = θ(−margin)/h_max.
///
/// The caller is responsible for f being a verified candidate with radius r.
pub fn improve_spatial(
    f: &EvenFunction,
    s: &BallUnion,
    r: f64,
    theta: f64,
    density: usize,
    seed: u64,
) -> Result<Improved> {
    check_theta(theta)?;
    let mu = check_measure(s)?;
    let rep = clearance(s, f, r, density, seed)?;
    if rep.margin >= 0.0 {
        return Err(Error::NoClearance { margin: rep.margin });
    }
    let alpha = theta * (-rep.margin) / rep.h_max;
    let origin = vec![0.0; f.dim()];
    let f0 = f.evaluate(&origin)? + alpha * mu;
    let fhat0 = f.evaluate_transform(&origin)? + alpha * mu * mu;
    let c = zero_balance_scale(f.dim(), f0, fhat0)?;
    let big = EvenFunction::sum(vec![
        (1.0, f.clone()),
        (alpha, EvenFunction::autocorr(s.clone())),
    ])?;
    Ok(Improved {
        function: big.dilate(c)?,
        params: ImprovementParams {
            side: ImprovementSide::Spatial,
            alpha,
            c_scale: c,
            theta,
            clearance: Some(rep.margin),
            measure: Some(mu),
            f0,
            fhat0,
        },
    })
}

/// F_c(x) = f(cx) − α |1̂_S(cx)|², with α = θ · min_{S−S} f̂ / μ(S).
pub fn improve_fourier(
    f: &EvenFunction,
    s: &BallUnion,
    theta: f64,
    density: usize,
    seed: u64,
) -> Result<Improved> {
    check_theta(theta)?;
    let mu = check_measure(s)?;
    let rep = dual_clearance(s, f, density, seed)?;
    let origin = vec![0.0; f.dim()];
    let fhat_origin = f.evaluate_transform(&origin)?;
    if rep.min <= DUAL_CLEARANCE_FLOOR * fhat_origin.abs() {
        return Err(Error::NoDualClearance { min: rep.min });
    }
    let alpha = theta * rep.min / mu;
    let f0 = f.evaluate(&origin)? - alpha * mu * mu;
    let fhat0 = fhat_origin - alpha * mu;
    if f0 <= 0.0 {
        return Err(Error::AlphaTooLarge { f0 });
    }
    let c = zero_balance_scale(f.dim(), f0, fhat0)?;
    let big = EvenFunction::sum(vec![
        (1.0, f.clone()),
        (-alpha, EvenFunction::ft_squared(s.clone())),
    ])?;
    Ok(Improved {
        function: big.dilate(c)?,
        params: ImprovementParams {
            side: ImprovementSide::Fourier,
            alpha,
            c_scale: c,
            theta,
            clearance: Some(rep.min),
            measure: Some(mu),
            f0,
            fhat0,
        },
    })
}

/// F = f − c f̂. Refuses when F̂ = f̂ − c f dips below −tol on the grid
/// (checked first), or when f̂ is not bounded away from zero on [0, r].
pub fn sharpen_via_dual(f: &EvenFunction, r: f64, c: f64, grid: &GridSpec) -> Result<Improved> {
    grid.validate()?;
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "sharpening constant {c} outside (0, 1)"
        )));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius {r}")));
    }
    let big = EvenFunction::sum(vec![(1.0, f.clone()), (-c, f.fourier_of())])?;
    let big_hat = RadialProfile::new(&big, true, grid.directions, grid.seed);
    let (at, min) = scan_min(&|s| big_hat.min_at(s), 0.0, grid.r_max.max(r), grid.step)?;
    if min < -grid.tol {
        return Err(Error::CTooLarge { min, at });
    }
    let fhat = RadialProfile::new(f, true, grid.directions, grid.seed);
    let (m_at, m) = scan_min(&|s| fhat.min_at(s), 0.0, r, grid.step)?;
    if m <= grid.tol {
        return Err(Error::DualVanishes { min: m, at: m_at });
    }
    let origin = vec![0.0; f.dim()];
    Ok(Improved {
        params: ImprovementParams {
            side: ImprovementSide::Dual,
            alpha: c,
            c_scale: 1.0,
            theta: 1.0,
            clearance: Some(m),
            measure: None,
            f0: big.evaluate(&origin)?,
            fhat0: big.evaluate_transform(&origin)?,
        },
        function: big,
    })
}

/// θ · min of f̂/f over grid points with f > tol, the largest sharpening
/// constant the grid check can accept, scaled by θ.
pub fn suggest_dual_c(f: &EvenFunction, theta: f64, grid: &GridSpec) -> Result<f64> {
    check_theta(theta)?;
    grid.validate()?;
    let fp = RadialProfile::new(f, false, grid.directions, grid.seed);
    let hp = RadialProfile::new(f, true, grid.directions, grid.seed);
    let mut ratio = f64::INFINITY;
    for s in scan::grid(0.0, grid.r_max, grid.step) {
        let v = fp.max_at(s)?;
        if v > grid.tol {
            ratio = ratio.min(hp.min_at(s)? / v);
        }
    }
    if !(ratio > 0.0) || !ratio.is_finite() {
        return Err(Error::DualVanishes {
            min: ratio,
            at: f64::NAN,
        });
    }
    Ok((theta * ratio).min(theta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> EvenFunction {
        EvenFunction::autocorr(BallUnion::single(1, 0.5).unwrap())
    }

    #[test]
    fn scale_formula_examples() {
        // spatial: f(0) = 1, α = 0.1, μ = 1.5, n = 2
        let c = zero_balance_scale(2, 1.0 + 0.1 * 1.5, 1.0 + 0.1 * 2.25).unwrap();
        assert!((c - 1.03209).abs() < 1e-5);
        // fourier: α = 0.05, μ = 1.5, n = 1
        let (f0, fh0): (f64, f64) = (1.0 - 0.05 * 2.25, 1.0 - 0.05 * 1.5);
        assert!((f0 - 0.8875).abs() < 1e-15 && (fh0 - 0.925).abs() < 1e-15);
        assert!((zero_balance_scale(1, f0, fh0).unwrap() - 1.04225).abs() < 1e-5);
    }

    #[test]
    fn insufficient_measure() {
        let s = BallUnion::single(1, 0.45).unwrap();
        assert!(matches!(
            improve_spatial(&triangle(), &s, 1.0, 0.5, 50, 0),
            Err(Error::InsufficientMeasure(_))
        ));
        assert!(matches!(
            improve_fourier(&triangle(), &s, 0.5, 50, 0),
            Err(Error::InsufficientMeasure(_))
        ));
    }

    #[test]
    fn triangle_refuses_every_operator() {
        let s = BallUnion::single(1, 0.6).unwrap();
        assert!(matches!(
            improve_spatial(&triangle(), &s, 1.0, 0.5, 50, 0),
            Err(Error::NoClearance { .. })
        ));
        // sinc² vanishes at 1 ∈ S − S
        assert!(matches!(
            improve_fourier(&triangle(), &s, 0.5, 500, 0),
            Err(Error::NoDualClearance { .. })
        ));
        for c in [0.5, 0.1, 0.01] {
            assert!(matches!(
                sharpen_via_dual(&triangle(), 1.0, c, &GridSpec::default()),
                Err(Error::CTooLarge { .. })
            ));
        }
        let tiny = sharpen_via_dual(&triangle(), 1.0, 1e-7, &GridSpec::default());
        assert!(matches!(
            tiny,
            Err(Error::DualVanishes { .. }) | Err(Error::CTooLarge { .. })
        ));
    }

    #[test]
    fn theta_range() {
        let s = BallUnion::single(1, 0.6).unwrap();
        assert!(improve_spatial(&triangle(), &s, 1.0, 1.0, 50, 0).is_err());
        assert!(improve_fourier(&triangle(), &s, 0.0, 50, 0).is_err());
    }

    /// T(cx) − β T(cx/2) with β = 1/4 and c = (1 − 2β)/(1 − β); its transform is
    /// sinc²(t/c)(1 − 2β cos²(πt/c))/c ≥ 0, it crosses zero once and vanishes beyond 2/c.
    fn slack_triangle() -> EvenFunction {
        let beta = 0.25;
        let c = (1.0 - 2.0 * beta) / (1.0 - beta);
        EvenFunction::sum(vec![
            (1.0, triangle()),
            (-beta, triangle().dilate(0.5).unwrap()),
        ])
        .unwrap()
        .dilate(c)
        .unwrap()
    }

    fn transform_min(f: &EvenFunction) -> f64 {
        scan_min(&|s| f.evaluate_transform_radial(s), 0.0, 6.0, 1e-3)
            .unwrap()
            .1
    }

    // The transform tail of this candidate has no certificate (negative |1̂_B|² term),
    // so it is checked through radius_of_positivity and a refined transform scan.
    #[test]
    fn spatial_improvement_of_a_slack_function() {
        use crate::geometry::witness_chain;
        use crate::radial::radius_of_positivity;
        use crate::zeros::{extract_zeros, Side};

        let f = slack_triangle();
        let origin = [0.0];
        assert!(
            (f.evaluate(&origin).unwrap() - f.evaluate_transform(&origin).unwrap()).abs() < 1e-12
        );
        assert!(transform_min(&f) > -1e-12);
        let r = radius_of_positivity(&f, 6.0, 1e-12).unwrap();
        // (1 − β)/(1 − β/2) / c
        assert!((r - 0.75 / 0.875 * 1.5).abs() < 1e-8);

        let zeros = extract_zeros(&f, Side::Function, 6.0, 1e-9, 1e-3).unwrap();
        let oracle = zeros.gap_oracle(0.05).unwrap();
        let s = witness_chain(1, &oracle, 0.35, 1.2).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.centers()[1][0] - 0.7 > r);

        let out = improve_spatial(&f, &s, r, 0.5, 50, 0).unwrap();
        let p = &out.params;
        assert!(p.c_scale > 1.0 && p.alpha > 0.0 && p.clearance.unwrap() < -0.02);
        let g = &out.function;
        assert!(
            (g.evaluate(&origin).unwrap() - g.evaluate_transform(&origin).unwrap()).abs() < 1e-12
        );
        assert!(transform_min(g) > -1e-12);
        let r_new = radius_of_positivity(g, 6.0, 1e-12).unwrap();
        assert!(r_new < r);
        assert!(r_new <= r / p.c_scale + 1e-3);
    }

    #[test]
    fn dual_sharpening_of_a_slack_function() {
        use crate::radial::verify_ce;
        // f̂ of the slack triangle vanishes at multiples of c = 2/3, inside [0, r]
        let f = slack_triangle();
        let r = verify_ce(&f, &GridSpec::default()).unwrap().r.unwrap();
        let c = suggest_dual_c(&f, 0.5, &GridSpec::default());
        assert!(c.is_err() || sharpen_via_dual(&f, r, c.unwrap(), &GridSpec::default()).is_err());
    }
}
