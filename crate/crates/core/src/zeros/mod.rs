//! Root lengths of radial profiles and finite-range statistics of their gaps.
//!
//! The zero-distribution results these statistics relate to are asymptotic
//! statements about exactly optimal functions. Everything here describes
//! behaviour on [0, R_max] only.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ForbiddenSetOracle;
use crate::radial::{verify_ce, EvenFunction, GridSpec};
use crate::scan::golden_min;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootKind {
    Crossing,
    Touching,
    IntervalStart,
    IntervalEnd,
}

impl RootKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RootKind::Crossing => "crossing",
            RootKind::Touching => "touching",
            RootKind::IntervalStart => "interval-start",
            RootKind::IntervalEnd => "interval-end",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub length: f64,
    pub kind: RootKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Function,
    Transform,
}

pub const FINITE_RANGE_NOTE: &str =
    "finite-range statistics on [0, r_max]; asymptotic zero-distribution results are not verified";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroReport {
    pub dim: usize,
    pub side: Side,
    pub roots: Vec<Root>,
    pub r_max: f64,
    pub tol: f64,
    /// |f| at or below this counts as zero
    pub zero_threshold: f64,
    pub scan_step: f64,
    pub note: String,
}

impl ZeroReport {
    pub fn lengths(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.length).collect()
    }

    /// Vanishing intervals as (start, end) pairs.
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut open = None;
        for r in &self.roots {
            match r.kind {
                RootKind::IntervalStart => open = Some(r.length),
                RootKind::IntervalEnd => {
                    if let Some(a) = open.take() {
                        out.push((a, r.length));
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// Lengths are increasing and interval markers alternate. A start may
    /// coincide with the preceding end (touching intervals).
    pub fn check_invariants(&self) -> Result<()> {
        let mut open = false;
        for (i, r) in self.roots.iter().enumerate() {
            if i > 0 {
                let prev = self.roots[i - 1];
                let touching =
                    prev.kind == RootKind::IntervalEnd && r.kind == RootKind::IntervalStart;
                if !(r.length > prev.length || (touching && r.length == prev.length)) {
                    return Err(Error::InsufficientData(format!(
                        "root lengths not increasing at index {i}"
                    )));
                }
            }
            match r.kind {
                RootKind::IntervalStart if open => {
                    return Err(Error::InsufficientData("nested interval".into()))
                }
                RootKind::IntervalStart => open = true,
                RootKind::IntervalEnd if !open => {
                    return Err(Error::InsufficientData("interval end without start".into()))
                }
                RootKind::IntervalEnd => open = false,
                _ if open => {
                    return Err(Error::InsufficientData(
                        "root inside vanishing interval".into(),
                    ))
                }
                _ => {}
            }
        }
        if open {
            return Err(Error::InsufficientData("unterminated interval".into()));
        }
        Ok(())
    }

    /// Oracle treating every root and vanishing interval as forbidden, certified up to R_max.
    pub fn gap_oracle(&self, buffer: f64) -> Result<ForbiddenSetOracle> {
        let mut forbidden: Vec<(f64, f64)> = self.intervals();
        forbidden.extend(
            self.roots
                .iter()
                .filter(|r| matches!(r.kind, RootKind::Crossing | RootKind::Touching))
                .map(|r| (r.length, r.length)),
        );
        ForbiddenSetOracle::new(forbidden, buffer, self.r_max)
    }
}

/// Moves `lo` (predicate false) and `hi` (predicate true) together until hi − lo ≤ width.
fn bisect_predicate<P: Fn(f64) -> Result<bool>>(
    p: &P,
    mut lo: f64,
    mut hi: f64,
    width: f64,
) -> Result<(f64, f64)> {
    for _ in 0..200 {
        if (hi - lo).abs() <= width {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if p(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Root extraction from any profile s ↦ value on [0, r_max].
///
/// Values count as zero when |f(s)| ≤ tol · max|f| · e^{−π(c s)²}, with c the
/// slowest Gaussian decay rate of the profile (`gaussian_rate`), so Gaussian
/// tails are never mistaken for vanishing intervals.
pub fn extract_zeros_from_profile<F: Fn(f64) -> Result<f64>>(
    profile: F,
    gaussian_rate: Option<f64>,
    dim: usize,
    side: Side,
    r_max: f64,
    tol: f64,
    scan_step: f64,
) -> Result<ZeroReport> {
    if !(r_max > 0.0 && tol > 0.0 && scan_step > 0.0) || !r_max.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "scan r_max={r_max}, tol={tol}, step={scan_step}"
        )));
    }
    let steps = (r_max / scan_step).ceil().max(2.0) as usize;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| r_max * i as f64 / steps as f64)
        .collect();
    let values = grid
        .iter()
        .map(|&s| profile(s))
        .collect::<Result<Vec<f64>>>()?;
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let thr = if scale > 0.0 { tol * scale } else { tol };
    let envelope = |s: f64| gaussian_rate.map_or(1.0, |c| (-PI * (c * s).powi(2)).exp());
    let class: Vec<i8> = values
        .iter()
        .zip(&grid)
        .map(|(&v, &s)| {
            if v.abs() <= thr * envelope(s) {
                0
            } else if v > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect();
    let is_zero = |s: f64| -> Result<bool> { Ok(profile(s)?.abs() <= thr * envelope(s)) };
    let abs = |s: f64| -> Result<f64> { Ok(profile(s)?.abs()) };

    let mut roots = Vec::new();
    let last = grid.len() - 1;
    let mut i = 0;
    while i <= last {
        if class[i] == 0 {
            let a = i;
            let mut b = i;
            while b < last && class[b + 1] == 0 {
                b += 1;
            }
            if b > a {
                let start = if a == 0 {
                    0.0
                } else {
                    bisect_predicate(&is_zero, grid[a - 1], grid[a], tol)?.1
                };
                let end = if b == last {
                    grid[last]
                } else {
                    // predicate "nonzero" flips from false to true going right
                    bisect_predicate(&|s| Ok(!is_zero(s)?), grid[b], grid[b + 1], tol)?.0
                };
                roots.push(Root {
                    length: start,
                    kind: RootKind::IntervalStart,
                });
                roots.push(Root {
                    length: end,
                    kind: RootKind::IntervalEnd,
                });
            } else {
                let left = if a > 0 { class[a - 1] } else { 0 };
                let right = if a < last { class[a + 1] } else { 0 };
                let lo = if a > 0 { grid[a - 1] } else { grid[a] };
                let hi = if a < last { grid[a + 1] } else { grid[a] };
                let kind = if left * right < 0 {
                    RootKind::Crossing
                } else {
                    RootKind::Touching
                };
                let (at, _) = if hi > lo {
                    golden_min(&abs, lo, hi, tol)?
                } else {
                    (grid[a], 0.0)
                };
                roots.push(Root { length: at, kind });
            }
            i = b + 1;
            continue;
        }
        if i < last && class[i + 1] != 0 && class[i] != class[i + 1] {
            let sign_i = class[i];
            let (lo, hi) = bisect_predicate(
                &|s| Ok((profile(s)? > 0.0) != (sign_i > 0)),
                grid[i],
                grid[i + 1],
                tol,
            )?;
            roots.push(Root {
                length: 0.5 * (lo + hi),
                kind: RootKind::Crossing,
            });
        } else if i > 0 && i < last && class[i - 1] == class[i] && class[i + 1] == class[i] {
            let (l, m, r) = (values[i - 1].abs(), values[i].abs(), values[i + 1].abs());
            if m <= l && m <= r {
                let (at, v) = golden_min(&abs, grid[i - 1], grid[i + 1], tol)?;
                if v <= thr * envelope(at) {
                    roots.push(Root {
                        length: at,
                        kind: RootKind::Touching,
                    });
                }
            }
        }
        i += 1;
    }
    roots.sort_by(|x, y| x.length.total_cmp(&y.length));
    let mut merged: Vec<Root> = Vec::with_capacity(roots.len());
    for r in roots {
        if let Some(p) = merged.last() {
            let interval_pair =
                p.kind == RootKind::IntervalStart || r.kind == RootKind::IntervalEnd;
            if !interval_pair && r.length - p.length <= tol {
                continue;
            }
        }
        merged.push(r);
    }
    Ok(ZeroReport {
        dim,
        side,
        roots: merged,
        r_max: grid[last],
        tol,
        zero_threshold: thr,
        scan_step,
        note: FINITE_RANGE_NOTE.into(),
    })
}

/// Roots of a radial f (or of f̂ for `Side::Transform`) on [0, r_max].
///
/// `tol` is both the bisection width and, relative to max |f| on the scan,
/// the threshold below which values count as zero.
pub fn extract_zeros(
    f: &EvenFunction,
    side: Side,
    r_max: f64,
    tol: f64,
    scan_step: f64,
) -> Result<ZeroReport> {
    if !f.is_radial() {
        return Err(Error::NotRadial);
    }
    let e = f.expansion(side == Side::Transform);
    let rate = e
        .groups()
        .iter()
        .filter(|g| g.coeffs.iter().any(|a| *a != 0.0))
        .map(|g| g.dilation)
        .fold(None, |m: Option<f64>, c| Some(m.map_or(c, |m| m.min(c))));
    extract_zeros_from_profile(
        |s| e.eval_axis(s),
        rate,
        f.dim(),
        side,
        r_max,
        tol,
        scan_step,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowMin {
    pub start: f64,
    /// smallest gap with both ends in the window; None with fewer than two roots
    pub min_gap: Option<f64>,
    pub roots: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCount {
    pub threshold: f64,
    /// consecutive root gaps ≤ threshold
    pub close_pairs: usize,
    /// windows of width `threshold` (step threshold/2) on [first root, last root]
    pub windows: usize,
    pub windows_with_two_roots: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborhoodCount {
    pub spacing: f64,
    pub eps: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapStats {
    pub gaps: Vec<f64>,
    pub max_gap: f64,
    pub max_gap_at: f64,
    pub min_gap: f64,
    pub window_c: f64,
    pub windows: Vec<WindowMin>,
    /// windows of width C containing no root
    pub empty_windows: usize,
    pub thresholds: Vec<ThresholdCount>,
    pub neighborhoods: Vec<NeighborhoodCount>,
    pub note: String,
}

/// Consecutive gaps; the span of a vanishing interval counts as a gap of 0.
fn gap_list(z: &ZeroReport) -> Vec<(f64, f64)> {
    z.roots
        .windows(2)
        .map(|w| {
            let inside = w[0].kind == RootKind::IntervalStart && w[1].kind == RootKind::IntervalEnd;
            (
                w[0].length,
                if inside {
                    0.0
                } else {
                    w[1].length - w[0].length
                },
            )
        })
        .collect()
}

fn roots_in(z: &ZeroReport, lo: f64, hi: f64) -> usize {
    let points = z
        .roots
        .iter()
        .filter(|r| r.length >= lo && r.length <= hi)
        .count();
    // a vanishing interval overlapping the window contributes a continuum of roots
    let overlap = z
        .intervals()
        .iter()
        .any(|&(a, b)| a < hi && b > lo && b > a);
    if overlap {
        points.max(2)
    } else {
        points
    }
}

fn window_starts(lo: f64, hi: f64, width: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let t = lo + k as f64 * width / 2.0;
        if t + width > hi + 1e-12 * hi.abs().max(1.0) {
            break;
        }
        out.push(t);
        k += 1;
    }
    out
}

pub fn gap_statistics(
    z: &ZeroReport,
    window_c: f64,
    thresholds: &[f64],
    progressions: &[(f64, f64)],
) -> Result<GapStats> {
    if !(window_c > 0.0) {
        return Err(Error::InvalidParameter(format!("window width {window_c}")));
    }
    if z.roots.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} root(s); need two or a vanishing interval",
            z.roots.len()
        )));
    }
    let gl = gap_list(z);
    let gaps: Vec<f64> = gl.iter().map(|g| g.1).collect();
    let (max_gap_at, max_gap) = gl
        .iter()
        .fold((gl[0].0, f64::NEG_INFINITY), |acc, &(at, g)| {
            if g > acc.1 {
                (at, g)
            } else {
                acc
            }
        });
    let min_gap = gaps.iter().cloned().fold(f64::INFINITY, f64::min);

    let inside_gap = |a: f64, b: f64, lo: f64, hi: f64| a >= lo && a + b <= hi;
    let windows: Vec<WindowMin> = window_starts(0.0, z.r_max, window_c)
        .into_iter()
        .map(|t| {
            let hi = t + window_c;
            let min_gap = gl
                .iter()
                .filter(|&&(a, g)| inside_gap(a, g, t, hi))
                .map(|g| g.1)
                .fold(None, |m: Option<f64>, g| Some(m.map_or(g, |m| m.min(g))));
            let overlap_zero = z.intervals().iter().any(|&(a, b)| a < hi && b > t && b > a);
            WindowMin {
                start: t,
                min_gap: if overlap_zero { Some(0.0) } else { min_gap },
                roots: roots_in(z, t, hi),
            }
        })
        .collect();
    let empty_windows = windows.iter().filter(|w| w.roots == 0).count();

    let first = z.roots[0].length;
    let last = z.roots[z.roots.len() - 1].length;
    let thresholds = thresholds
        .iter()
        .map(|&c| {
            let starts = window_starts(first, last, c);
            ThresholdCount {
                threshold: c,
                close_pairs: gaps.iter().filter(|&&g| g <= c).count(),
                windows: starts.len(),
                windows_with_two_roots: starts
                    .iter()
                    .filter(|&&t| roots_in(z, t, t + c) >= 2)
                    .count(),
            }
        })
        .collect();
    let neighborhoods = progressions
        .iter()
        .map(|&(spacing, eps)| {
            Ok(NeighborhoodCount {
                spacing,
                eps,
                count: neighborhood_count(z, spacing, eps)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GapStats {
        gaps,
        max_gap,
        max_gap_at,
        min_gap,
        window_c,
        windows,
        empty_windows,
        thresholds,
        neighborhoods,
        note: FINITE_RANGE_NOTE.into(),
    })
}

fn check_progression(spacing: f64, eps: f64) -> Result<()> {
    if !(spacing > 0.0) || !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "progression spacing {spacing}, eps {eps}"
        )));
    }
    Ok(())
}

/// Number of root lengths within eps of {m·spacing : m ≥ 0} ∩ [0, R_max].
pub fn neighborhood_count(z: &ZeroReport, spacing: f64, eps: f64) -> Result<usize> {
    check_progression(spacing, eps)?;
    let top = (z.r_max / spacing).floor();
    Ok(z.roots
        .iter()
        .filter(|r| {
            let m = (r.length / spacing).round().clamp(0.0, top);
            (r.length - m * spacing).abs() < eps
        })
        .count())
}

/// (covered, total) progression points m·spacing between the first and last
/// root that have a root length within eps.
pub fn progression_coverage(z: &ZeroReport, spacing: f64, eps: f64) -> Result<(usize, usize)> {
    check_progression(spacing, eps)?;
    let lengths = z.lengths();
    let (Some(&first), Some(&last)) = (lengths.first(), lengths.last()) else {
        return Ok((0, 0));
    };
    let intervals = z.intervals();
    let mut covered = 0;
    let mut total = 0;
    let mut m = (first / spacing).ceil() as usize;
    while m as f64 * spacing <= last {
        let p = m as f64 * spacing;
        total += 1;
        let near = lengths.iter().any(|l| (l - p).abs() < eps)
            || intervals.iter().any(|&(a, b)| a <= p && p <= b);
        if near {
            covered += 1;
        }
        m += 1;
    }
    Ok((covered, total))
}

/// Synthetic report whose zero-free lengths are exactly [0, eps] and
/// [2^k − eps, 2^k + eps], k = 1, …, k_max, within [0, r_max].
pub fn remark_fixture(eps: f64, k_max: u32, r_max: f64) -> Result<ZeroReport> {
    if !(eps >= 0.0) || eps >= 1.0 {
        return Err(Error::InvalidEps(eps));
    }
    if !(r_max > eps) || !r_max.is_finite() {
        return Err(Error::InvalidParameter(format!("fixture r_max {r_max}")));
    }
    let mut roots = Vec::new();
    let mut start = eps;
    for k in 1..=k_max {
        let center = 2f64.powi(k as i32);
        if center - eps >= r_max {
            break;
        }
        roots.push(Root {
            length: start,
            kind: RootKind::IntervalStart,
        });
        roots.push(Root {
            length: center - eps,
            kind: RootKind::IntervalEnd,
        });
        start = center + eps;
    }
    if start < r_max {
        roots.push(Root {
            length: start,
            kind: RootKind::IntervalStart,
        });
        roots.push(Root {
            length: r_max,
            kind: RootKind::IntervalEnd,
        });
    }
    Ok(ZeroReport {
        dim: 1,
        side: Side::Function,
        roots,
        r_max,
        tol: 0.0,
        zero_threshold: 0.0,
        scan_step: 0.0,
        note: FINITE_RANGE_NOTE.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualRootCheck {
    pub r: f64,
    /// min of f̂ over [0, 1.05 r]
    pub min: f64,
    pub at: f64,
    /// max of f̂ over the same range
    pub max: f64,
}

impl DualRootCheck {
    pub fn relative_min(&self) -> f64 {
        self.min / self.max
    }
}

/// Smallest value of f̂ on [0, 1.05 r], located on a `step` grid and refined.
/// Requires f to pass verification.
pub fn dual_smallest_root_check(
    f: &EvenFunction,
    r: f64,
    grid: &GridSpec,
) -> Result<DualRootCheck> {
    let report = verify_ce(f, grid)?;
    if !report.passed {
        return Err(Error::PreconditionFailed(format!(
            "function fails verification: {}",
            report.failures.join("; ")
        )));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius {r}")));
    }
    let e = f.expansion(true);
    let top = 1.05 * r;
    let steps = (top / grid.step).ceil().max(2.0) as usize;
    let at = |i: usize| top * i as f64 / steps as f64;
    let values = (0..=steps)
        .map(|i| e.eval_axis(at(i)))
        .collect::<Result<Vec<f64>>>()?;
    let (imin, _) =
        values.iter().enumerate().fold(
            (0, f64::INFINITY),
            |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc },
        );
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = at(imin.saturating_sub(1));
    let hi = at((imin + 1).min(steps));
    let (x, v) = golden_min(&|s| e.eval_axis(s), lo, hi, 1e-12)?;
    let (min, at_min) = if v < values[imin] {
        (v, x)
    } else {
        (values[imin], at(imin))
    };
    Ok(DualRootCheck {
        r,
        min,
        at: at_min,
        max,
    })
}

/// Root list as CSV (length,kind).
pub fn roots_csv(z: &ZeroReport) -> String {
    let mut out = String::from("length,kind\n");
    for r in &z.roots {
        out.push_str(&format!("{},{}\n", r.length, r.kind.as_str()));
    }
    out
}
