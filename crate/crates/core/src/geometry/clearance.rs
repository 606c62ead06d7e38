//! Sampling f over the difference set S − S.
//!
//! S − S is covered by the balls B(c_j − c_k, 2ρ), including B(0, 2ρ) for
//! j = k. Evenness of f and h means only one of ±(c_j − c_k) is needed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{autocorr_eval, norm, BallUnion};
use crate::error::{Error, Result};
use crate::radial::{EvenFunction, Expansion};
use crate::scan::{grid, scan_max, scan_min};

/// Per-ball sample budget when f is not radial and n > 3.
const RANDOM_SAMPLES_PER_BALL: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClearanceMode {
    /// 1-D scan of ‖x‖ over each difference ball; exact reduction for radial f.
    Radial,
    /// Cubic lattice inside each difference ball.
    Grid,
    /// Seeded uniform samples inside each difference ball.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClearanceReport {
    /// sup of f over sampled T = (S − S) ∩ {‖x‖ ≥ r}
    pub margin: f64,
    pub worst_point: Vec<f64>,
    /// max of h over the samples; μ(S) = h(0) in radial mode
    pub h_max: f64,
    pub samples: usize,
    pub spacing: f64,
    pub mode: ClearanceMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualClearanceReport {
    /// min of f̂ over sampled S − S
    pub min: f64,
    pub worst_point: Vec<f64>,
    pub samples: usize,
    pub spacing: f64,
    pub mode: ClearanceMode,
}

/// Difference vectors covering S − S up to sign, starting with the origin.
fn difference_centers(s: &BallUnion) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; s.dim()]];
    out.extend(s.differences());
    out
}

fn unit_or_axis(d: &[f64]) -> Vec<f64> {
    let len = norm(d);
    if len == 0.0 {
        let mut e = vec![0.0; d.len()];
        e[0] = 1.0;
        e
    } else {
        d.iter().map(|v| v / len).collect()
    }
}

/// Points of B(d, 2ρ) with ‖x‖ ≥ r_min used for one difference ball.
fn ball_samples(
    d: &[f64],
    rho: f64,
    r_min: f64,
    spacing: f64,
    mode: ClearanceMode,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<f64>> {
    let n = d.len();
    let reach = 2.0 * rho;
    let dn = norm(d);
    let dir = unit_or_axis(d);
    // always include the radial segment through d
    let mut pts: Vec<Vec<f64>> = if mode == ClearanceMode::Radial {
        Vec::new()
    } else {
        grid((dn - reach).max(r_min), dn + reach, spacing)
            .into_iter()
            .map(|s| dir.iter().map(|u| u * s).collect())
            .collect()
    };
    match mode {
        ClearanceMode::Radial => {}
        ClearanceMode::Grid => {
            let m = (reach / spacing).ceil() as i64;
            let mut idx = vec![-m; n];
            loop {
                let p: Vec<f64> = idx
                    .iter()
                    .zip(d)
                    .map(|(&i, c)| c + i as f64 * spacing)
                    .collect();
                let off: f64 = idx
                    .iter()
                    .map(|&i| (i as f64 * spacing).powi(2))
                    .sum::<f64>()
                    .sqrt();
                if off <= reach && norm(&p) >= r_min {
                    pts.push(p);
                }
                let mut a = 0;
                loop {
                    if a == n {
                        return pts;
                    }
                    idx[a] += 1;
                    if idx[a] <= m {
                        break;
                    }
                    idx[a] = -m;
                    a += 1;
                }
            }
        }
        ClearanceMode::Random => {
            for _ in 0..RANDOM_SAMPLES_PER_BALL {
                let g: Vec<f64> = (0..n)
                    .map(|_| rng.sample::<f64, _>(StandardNormal))
                    .collect();
                let gl = norm(&g);
                if gl == 0.0 {
                    continue;
                }
                let radius = reach * rng.random::<f64>().powf(1.0 / n as f64);
                let p: Vec<f64> = g.iter().zip(d).map(|(v, c)| c + v / gl * radius).collect();
                if norm(&p) >= r_min {
                    pts.push(p);
                }
            }
        }
    }
    pts
}

fn pick_mode(f: &EvenFunction) -> ClearanceMode {
    if f.is_radial() {
        ClearanceMode::Radial
    } else if f.dim() <= 3 {
        ClearanceMode::Grid
    } else {
        ClearanceMode::Random
    }
}

fn check_args(s: &BallUnion, f: &EvenFunction, density: usize) -> Result<()> {
    if s.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: s.dim(),
        });
    }
    if density == 0 {
        return Err(Error::InvalidParameter(
            "clearance grid density must be positive".into(),
        ));
    }
    Ok(())
}

/// Samples f on T = (S − S) ∩ {‖x‖ ≥ r} with spacing 2ρ/density.
pub fn clearance(
    s: &BallUnion,
    f: &EvenFunction,
    r: f64,
    density: usize,
    seed: u64,
) -> Result<ClearanceReport> {
    check_args(s, f, density)?;
    let rho = s.radius();
    let centers = difference_centers(s);
    if centers.iter().all(|d| norm(d) + 2.0 * rho < r) {
        return Err(Error::EmptyRegion);
    }
    let mode = pick_mode(f);
    let spacing = 2.0 * rho / density as f64;
    let e: Expansion = f.expansion(false);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut margin = f64::NEG_INFINITY;
    let mut worst = vec![0.0; s.dim()];
    let mut h_max = if mode == ClearanceMode::Radial {
        s.measure()
    } else {
        0.0
    };
    let mut samples = 0;
    for d in &centers {
        if norm(d) + 2.0 * rho < r {
            continue;
        }
        if mode == ClearanceMode::Radial {
            let dn = norm(d);
            let dir = unit_or_axis(d);
            let at = |s: f64| dir.iter().map(|u| u * s).collect::<Vec<f64>>();
            let (lo, hi) = ((dn - 2.0 * rho).max(r), dn + 2.0 * rho);
            let (s_w, v) = scan_max(&|s| e.eval(&at(s)), lo, hi, spacing)?;
            samples += grid(lo, hi, spacing).len();
            if v > margin {
                margin = v;
                worst = at(s_w);
            }
        }
        for p in ball_samples(d, rho, r, spacing, mode, &mut rng) {
            let v = e.eval(&p)?;
            samples += 1;
            if v > margin {
                margin = v;
                worst = p.clone();
            }
            if mode != ClearanceMode::Radial {
                h_max = h_max.max(autocorr_eval(s, &p)?);
            }
        }
    }
    Ok(ClearanceReport {
        margin,
        worst_point: worst,
        h_max,
        samples,
        spacing,
        mode,
    })
}

/// Samples f̂ over all of S − S.
pub fn dual_clearance(
    s: &BallUnion,
    f: &EvenFunction,
    density: usize,
    seed: u64,
) -> Result<DualClearanceReport> {
    check_args(s, f, density)?;
    let rho = s.radius();
    let mode = pick_mode(f);
    let spacing = 2.0 * rho / density as f64;
    let e = f.expansion(true);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min = f64::INFINITY;
    let mut worst = vec![0.0; s.dim()];
    let mut samples = 0;
    for d in &difference_centers(s) {
        if mode == ClearanceMode::Radial {
            let dn = norm(d);
            let dir = unit_or_axis(d);
            let at = |s: f64| dir.iter().map(|u| u * s).collect::<Vec<f64>>();
            let (lo, hi) = ((dn - 2.0 * rho).max(0.0), dn + 2.0 * rho);
            let (s_w, v) = scan_min(&|s| e.eval(&at(s)), lo, hi, spacing)?;
            samples += grid(lo, hi, spacing).len();
            if v < min {
                min = v;
                worst = at(s_w);
            }
        }
        for p in ball_samples(d, rho, 0.0, spacing, mode, &mut rng) {
            let v = e.eval(&p)?;
            samples += 1;
            if v < min {
                min = v;
                worst = p;
            }
        }
    }
    Ok(DualClearanceReport {
        min,
        worst_point: worst,
        samples,
        spacing,
        mode,
    })
}
