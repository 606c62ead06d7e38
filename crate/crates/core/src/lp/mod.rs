//! The Cohn–Elkies linear program over f = Σ_{k ≤ K} a_k e_k.
//!
//! Feasibility at a trial radius r is decided by a max-margin LP: maximize t
//! subject to f ≤ −t on G_neg, f̂ ≥ t on G_pos, f(0) = f̂(0) = 1, t ≤ 1. The
//! grid rows are rescaled by e^{π s²}/max_k |L_k|, so they constrain the
//! polynomial parts, and the probe is feasible when t* > δ. Local violations
//! found on a fine grid are added as cutting planes and the LP is re-solved.

mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radial::{verify_ce, CEReport, EvenFunction, GridSpec};
use crate::scan::golden_min;
use crate::special::{laguerre_all, unit_ball_volume};
use simplex::{maximize, Outcome};

const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpGridSpec {
    /// points of G_neg, clustered towards r
    pub neg_points: usize,
    /// uniform points of G_pos on [0, R_max]
    pub pos_points: usize,
    /// defaults to max(6, 3r)
    pub r_max: Option<f64>,
    pub delta: f64,
    /// cutting-plane rounds before a probe is declared grid-infeasible
    pub cut_rounds: usize,
    pub cut_step: f64,
    pub cut_tol: f64,
}

impl Default for LpGridSpec {
    fn default() -> Self {
        Self {
            neg_points: 400,
            pos_points: 400,
            r_max: None,
            delta: 1e-9,
            cut_rounds: 10,
            cut_step: 1e-3,
            cut_tol: 1e-9,
        }
    }
}

impl LpGridSpec {
    pub fn r_max_for(&self, r: f64) -> f64 {
        self.r_max.unwrap_or_else(|| (3.0 * r).max(6.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityProblem {
    pub dim: usize,
    pub degree: usize,
    pub r: f64,
    pub r_max: f64,
    /// radii where f ≤ −δ
    pub g_neg: Vec<f64>,
    /// radii where f̂ ≥ δ
    pub g_pos: Vec<f64>,
    pub delta: f64,
}

fn sorted_within(g: &[f64], lo: f64, hi: f64) -> bool {
    !g.is_empty()
        && g.windows(2).all(|w| w[0] <= w[1])
        && g.iter().all(|&s| s >= lo && s <= hi && s.is_finite())
}

impl FeasibilityProblem {
    pub fn new(
        dim: usize,
        degree: usize,
        r: f64,
        r_max: f64,
        g_neg: Vec<f64>,
        g_pos: Vec<f64>,
        delta: f64,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        if degree < 2 {
            return Err(Error::InvalidParameter(format!("degree {degree} below 2")));
        }
        if !(r >= 0.0 && r < r_max) || !(delta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "r = {r}, R_max = {r_max}, δ = {delta}"
            )));
        }
        if !sorted_within(&g_neg, r, r_max) {
            return Err(Error::DegenerateGrid(
                "G_neg must be nonempty, sorted and inside [r, R_max]".into(),
            ));
        }
        if !sorted_within(&g_pos, 0.0, r_max) {
            return Err(Error::DegenerateGrid(
                "G_pos must be nonempty, sorted and inside [0, R_max]".into(),
            ));
        }
        Ok(Self {
            dim,
            degree,
            r,
            r_max,
            g_neg,
            g_pos,
            delta,
        })
    }

    fn alpha(&self) -> f64 {
        self.dim as f64 / 2.0 - 1.0
    }

    /// Row of a ↦ −(scaled f̂) or scaled f at one radius, before the margin column.
    fn row(&self, s: f64, transform: bool) -> Vec<f64> {
        let l = laguerre_all(
            self.degree,
            self.alpha(),
            2.0 * std::f64::consts::PI * s * s,
        );
        let scale = l.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        l.iter()
            .enumerate()
            .map(|(k, v)| {
                if transform {
                    -sign(k) * v / scale
                } else {
                    v / scale
                }
            })
            .collect()
    }
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Problem at trial radius r with the default grid layout.
pub fn build_problem(
    n: usize,
    degree: usize,
    r: f64,
    grid: &LpGridSpec,
) -> Result<FeasibilityProblem> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("trial radius {r}")));
    }
    if grid.neg_points < 2 || grid.pos_points < 2 {
        return Err(Error::DegenerateGrid(
            "sign grids need at least two points".into(),
        ));
    }
    let r_max = grid.r_max_for(r);
    if !(r_max > r) {
        return Err(Error::DegenerateGrid(format!(
            "R_max = {r_max} not above r = {r}"
        )));
    }
    let span = r_max - r;
    let last = (grid.neg_points - 1) as f64;
    let g_neg = (0..grid.neg_points)
        .map(|i| {
            let u = i as f64 / last;
            (r + span * (4.0 * u).exp_m1() / 4f64.exp_m1()).min(r_max)
        })
        .collect();
    let last = (grid.pos_points - 1) as f64;
    let g_pos = (0..grid.pos_points)
        .map(|i| r_max * i as f64 / last)
        .collect();
    FeasibilityProblem::new(n, degree, r, r_max, g_neg, g_pos, grid.delta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Feasibility {
    /// coefficients a_0 … a_K and the attained margin t* > δ
    Feasible {
        coefficients: Vec<f64>,
        margin: f64,
    },
    Infeasible {
        margin: f64,
    },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }
}

/// Max-margin phase-1 LP. The two normalization rows are eliminated through
/// a_0 and a_1, and t is shifted so the origin is feasible.
pub fn solve_feasibility(p: &FeasibilityProblem) -> Result<Feasibility> {
    let kk = p.degree;
    let e0 = laguerre_all(kk, p.alpha(), 0.0);
    // columns: a_2 … a_K then u, all free
    let free = kk;
    let mut g_rows = Vec::with_capacity(p.g_neg.len() + p.g_pos.len());
    let mut h = Vec::with_capacity(g_rows.capacity());
    let rows = p
        .g_neg
        .iter()
        .map(|&s| p.row(s, false))
        .chain(p.g_pos.iter().map(|&s| p.row(s, true)));
    for row in rows {
        let mut g = vec![0.0; free];
        for k in 2..=kk {
            g[k - 2] = if k % 2 == 0 {
                row[k] - row[0] * e0[k] / e0[0]
            } else {
                row[k] - row[1] * e0[k] / e0[1]
            };
        }
        g[free - 1] = 1.0;
        h.push(-row[0] / e0[0]);
        g_rows.push(g);
    }
    let t0 = h.iter().copied().fold(f64::INFINITY, f64::min).min(1.0);

    let mut b: Vec<f64> = h.iter().map(|hi| hi - t0).collect();
    let mut m = g_rows;
    let mut cap = vec![0.0; free];
    cap[free - 1] = 1.0;
    m.push(cap);
    b.push(1.0 - t0);
    let mut c = vec![0.0; free];
    c[free - 1] = 1.0;

    let var = match maximize(&c, &m, &b, &vec![true; free], MAX_PIVOTS)? {
        Outcome::Optimal { x, .. } => x,
        Outcome::Unbounded => {
            return Err(Error::Convergence {
                estimate: f64::INFINITY,
                error_bound: f64::NAN,
            })
        }
    };
    let mut a = vec![0.0; kk + 1];
    a[2..].copy_from_slice(&var[..kk - 1]);
    a[0] = (1.0 - (2..=kk).step_by(2).map(|k| a[k] * e0[k]).sum::<f64>()) / e0[0];
    a[1] = -(3..=kk).step_by(2).map(|k| a[k] * e0[k]).sum::<f64>() / e0[1];
    // margin actually attained by a, recomputed from the rows
    let margin = p
        .g_neg
        .iter()
        .map(|&s| p.row(s, false))
        .chain(p.g_pos.iter().map(|&s| p.row(s, true)))
        .map(|row| -row.iter().zip(&a).map(|(x, y)| x * y).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    if !(margin > p.delta) {
        return Ok(Feasibility::Infeasible { margin });
    }
    Ok(Feasibility::Feasible {
        coefficients: a,
        margin,
    })
}

/// Values of f and f̂ for f = Σ a_k e_k at radius s.
fn pair_at(n: usize, a: &[f64], s: f64) -> (f64, f64) {
    let l = laguerre_all(
        a.len() - 1,
        n as f64 / 2.0 - 1.0,
        2.0 * std::f64::consts::PI * s * s,
    );
    let g = (-std::f64::consts::PI * s * s).exp();
    let (mut f, mut fh) = (0.0, 0.0);
    for (k, (ak, lk)) in a.iter().zip(&l).enumerate() {
        f += ak * lk;
        fh += sign(k) * ak * lk;
    }
    (f * g, fh * g)
}

fn insert_sorted(g: &mut Vec<f64>, s: f64) {
    if let Err(i) = g.binary_search_by(|v| v.total_cmp(&s)) {
        g.insert(i, s);
    }
}

/// Outcome of one trial radius after cutting-plane refinement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub r: f64,
    pub feasible: bool,
    pub coefficients: Option<Vec<f64>>,
    pub margin: f64,
    pub rounds: usize,
}

/// Solves at r, then adds local maxima of f above cut_tol beyond r to G_neg and local
/// minima of f̂ below −cut_tol to G_pos (grid extrema refined by golden section), up to `cut_rounds` times. Violations left after
/// the last round make the probe infeasible.
pub fn probe(n: usize, degree: usize, r: f64, grid: &LpGridSpec) -> Result<Probe> {
    let mut p = build_problem(n, degree, r, grid)?;
    let steps = (p.r_max / grid.cut_step).ceil() as usize;
    let fine: Vec<f64> = (0..=steps)
        .map(|i| p.r_max * i as f64 / steps as f64)
        .collect();
    for round in 0..=grid.cut_rounds {
        let a = match solve_feasibility(&p)? {
            Feasibility::Infeasible { margin } => {
                return Ok(Probe {
                    r,
                    feasible: false,
                    coefficients: None,
                    margin,
                    rounds: round,
                })
            }
            Feasibility::Feasible {
                coefficients,
                margin,
            } => (coefficients, margin),
        };
        let vals: Vec<(f64, f64)> = fine.iter().map(|&s| pair_at(n, &a.0, s)).collect();
        let mut cuts = 0;
        for i in 1..fine.len() - 1 {
            let (lo, hi) = (fine[i - 1], fine[i + 1]);
            let (f, fh) = vals[i];
            if fine[i] >= r && f >= vals[i - 1].0 && f >= vals[i + 1].0 {
                let (s, v) = golden_min(&|s| Ok(-pair_at(n, &a.0, s).0), lo.max(r), hi, 1e-12)?;
                let (s, v) = if -v > f { (s, -v) } else { (fine[i], f) };
                if v > grid.cut_tol {
                    insert_sorted(&mut p.g_neg, s);
                    cuts += 1;
                }
            }
            if fh <= vals[i - 1].1 && fh <= vals[i + 1].1 {
                let (s, v) = golden_min(&|s| Ok(pair_at(n, &a.0, s).1), lo, hi, 1e-12)?;
                let (s, v) = if v < fh { (s, v) } else { (fine[i], fh) };
                if v < -grid.cut_tol {
                    insert_sorted(&mut p.g_pos, s);
                    cuts += 1;
                }
            }
        }
        if cuts == 0 {
            return Ok(Probe {
                r,
                feasible: true,
                coefficients: Some(a.0),
                margin: a.1,
                rounds: round,
            });
        }
    }
    Ok(Probe {
        r,
        feasible: false,
        coefficients: None,
        margin: f64::NAN,
        rounds: grid.cut_rounds,
    })
}

/// Starting bracket [0.5 V_n^{−1/n}, 2 V_n^{−1/n} + 0.5].
pub fn default_bracket(n: usize) -> Result<(f64, f64)> {
    let v = unit_ball_volume(n)?.powf(-1.0 / n as f64);
    Ok((0.5 * v, 2.0 * v + 0.5))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeResult {
    /// radius of the assembled function as re-verified by verify_ce
    pub r_best: f64,
    /// trial radius of the LP probe that produced the coefficients
    pub lp_r: f64,
    pub coefficients: Vec<f64>,
    pub report: CEReport,
    pub bisection_trace: Vec<(f64, bool)>,
}

impl OptimizeResult {
    pub fn function(&self) -> Result<EvenFunction> {
        EvenFunction::eigen_sum(self.report.dim, &self.coefficients)
    }

    pub fn trace_csv(&self) -> String {
        let mut out = String::from("r,feasible\n");
        for (r, ok) in &self.bisection_trace {
            out.push_str(&format!("{r},{ok}\n"));
        }
        out
    }
}

/// Bisection on r, re-verifying the smallest feasible probe on an independent grid.
pub fn minimize_r(
    n: usize,
    degree: usize,
    r_lo: f64,
    r_hi: f64,
    tol: f64,
    grid: &LpGridSpec,
) -> Result<OptimizeResult> {
    if !(r_lo > 0.0 && r_lo < r_hi) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bracket [{r_lo}, {r_hi}], tol {tol}"
        )));
    }
    let mut trace = Vec::new();
    let top = probe(n, degree, r_hi, grid)?;
    trace.push((r_hi, top.feasible));
    let Some(mut best) = top.coefficients else {
        return Err(Error::BracketInvalid(format!(
            "infeasible at r_hi = {r_hi}"
        )));
    };
    let bottom = probe(n, degree, r_lo, grid)?;
    trace.push((r_lo, bottom.feasible));
    if bottom.feasible {
        return Err(Error::BracketInvalid(format!("feasible at r_lo = {r_lo}")));
    }
    let (mut lo, mut hi) = (r_lo, r_hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let pr = probe(n, degree, mid, grid)?;
        trace.push((mid, pr.feasible));
        match pr.coefficients {
            Some(a) => {
                hi = mid;
                best = a;
            }
            None => lo = mid,
        }
    }
    let f = EvenFunction::eigen_sum(n, &best)?;
    let vgrid = GridSpec {
        r_max: (2.0 * hi).max(6.0),
        ..GridSpec::default()
    };
    let report = verify_ce(&f, &vgrid)?;
    let r_best = report.r.ok_or_else(|| {
        Error::UncertifiableTail(format!("re-verification failed: {:?}", report.failures))
    })?;
    Ok(OptimizeResult {
        r_best,
        lp_r: hi,
        coefficients: best,
        report,
        bisection_trace: trace,
    })
}
