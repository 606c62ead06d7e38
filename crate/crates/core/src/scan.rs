//! One-dimensional grid scans with golden-section refinement of local extrema.

use crate::error::Result;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

pub(crate) fn golden_min<F: Fn(f64) -> Result<f64>>(
    g: &F,
    mut a: f64,
    mut b: f64,
    width: f64,
) -> Result<(f64, f64)> {
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (g(x1)?, g(x2)?);
    for _ in 0..200 {
        if b - a <= width {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = g(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = g(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Evenly spaced points covering [lo, hi] with spacing at most `step`.
pub(crate) fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let steps = ((hi - lo) / step).ceil().max(1.0) as usize;
    (0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .collect()
}

/// (argmin, min) of g on [lo, hi]: grid scan, then golden section inside the
/// neighbouring cells of every interior local minimum.
pub(crate) fn scan_min<F: Fn(f64) -> Result<f64>>(
    g: &F,
    lo: f64,
    hi: f64,
    step: f64,
) -> Result<(f64, f64)> {
    let xs = grid(lo, hi, step);
    let vs = xs.iter().map(|&x| g(x)).collect::<Result<Vec<_>>>()?;
    let mut best = (xs[0], vs[0]);
    for (i, (&x, &v)) in xs.iter().zip(&vs).enumerate() {
        if v < best.1 {
            best = (x, v);
        }
        if i > 0 && i + 1 < xs.len() && v <= vs[i - 1] && v <= vs[i + 1] {
            let width = (xs[i + 1] - xs[i - 1]) * 1e-9;
            let (xm, vm) = golden_min(g, xs[i - 1], xs[i + 1], width)?;
            if vm < best.1 {
                best = (xm, vm);
            }
        }
    }
    Ok(best)
}

/// (argmax, max) of g on [lo, hi], refined like [`scan_min`].
pub(crate) fn scan_max<F: Fn(f64) -> Result<f64>>(
    g: &F,
    lo: f64,
    hi: f64,
    step: f64,
) -> Result<(f64, f64)> {
    let (x, v) = scan_min(&|s| g(s).map(|v| -v), lo, hi, step)?;
    Ok((x, -v))
}
