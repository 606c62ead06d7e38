//! Chains of small balls along one axis whose difference lengths avoid the
//! root lengths of a radial function.

use super::BallUnion;
use crate::error::{Error, Result};
use crate::special::unit_ball_volume;

/// Source of certified zero-free length intervals.
pub trait GapOracle {
    /// Smallest root length, or `None` if the function has no zeros at all.
    fn first_zero(&self) -> Option<f64>;
    /// Whether every length in [lo, hi] is certified zero-free.
    fn is_zero_free(&self, lo: f64, hi: f64) -> bool;
    /// Smallest t ≥ t_min with [t, t + width] certified zero-free.
    fn find_gap(&self, t_min: f64, width: f64) -> Option<f64>;
}

/// Zeros given as closed length intervals (isolated roots are degenerate
/// intervals), each widened by `buffer`. Nothing beyond `certified_up_to`
/// is known to be zero-free.
#[derive(Debug, Clone, PartialEq)]
pub struct ForbiddenSetOracle {
    forbidden: Vec<(f64, f64)>,
    buffer: f64,
    certified_up_to: f64,
}

impl ForbiddenSetOracle {
    pub fn new(mut forbidden: Vec<(f64, f64)>, buffer: f64, certified_up_to: f64) -> Result<Self> {
        if !(buffer >= 0.0) || !(certified_up_to >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "oracle buffer {buffer}, certified range {certified_up_to}"
            )));
        }
        if forbidden
            .iter()
            .any(|(a, b)| !(a <= b) || !a.is_finite() || !b.is_finite())
        {
            return Err(Error::InvalidParameter(
                "malformed forbidden interval".into(),
            ));
        }
        forbidden.sort_by(|x, y| x.0.total_cmp(&y.0));
        Ok(Self {
            forbidden,
            buffer,
            certified_up_to,
        })
    }

    /// Roots at spacing, 2·spacing, … up to `up_to`.
    pub fn lattice(spacing: f64, buffer: f64, up_to: f64) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lattice spacing {spacing}"
            )));
        }
        let count = (up_to / spacing).floor() as usize;
        let roots = (1..=count)
            .map(|m| (m as f64 * spacing, m as f64 * spacing))
            .collect();
        Self::new(roots, buffer, up_to)
    }

    pub fn forbidden(&self) -> &[(f64, f64)] {
        &self.forbidden
    }

    pub fn certified_up_to(&self) -> f64 {
        self.certified_up_to
    }

    /// First (buffered) forbidden interval meeting the closed interval [lo, hi].
    fn blocker(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        self.forbidden
            .iter()
            .map(|&(a, b)| (a - self.buffer, b + self.buffer))
            .find(|&(a, b)| a <= hi && b >= lo)
    }
}

impl GapOracle for ForbiddenSetOracle {
    fn first_zero(&self) -> Option<f64> {
        self.forbidden
            .first()
            .map(|&(a, _)| (a - self.buffer).max(0.0))
    }

    fn is_zero_free(&self, lo: f64, hi: f64) -> bool {
        lo <= hi && hi <= self.certified_up_to && self.blocker(lo, hi).is_none()
    }

    fn find_gap(&self, t_min: f64, width: f64) -> Option<f64> {
        let mut t = t_min;
        loop {
            if t + width > self.certified_up_to {
                return None;
            }
            match self.blocker(t, t + width) {
                None => return Some(t),
                Some((_, b)) => t = b + f64::EPSILON * b.abs().max(1.0),
            }
        }
    }
}

/// Upper bound on chain length, guarding against unbounded oracles.
const MAX_BALLS: usize = 1_000_000;

/// Builds S = ⋃ B(p_i e_1, eps) with measure ≥ `target_measure` such that every
/// length in S − S lies in an oracle-certified zero-free interval.
///
/// With centers p_1 < … < p_k spanning P = p_k − p_1, the next center at
/// p_k + g creates difference lengths in [g − 2eps, g + P + 2eps], so the
/// oracle is asked for a zero-free [t, t + P + 4eps] and g = t + 2eps.
pub fn witness_chain(
    n: usize,
    oracle: &dyn GapOracle,
    eps: f64,
    target_measure: f64,
) -> Result<BallUnion> {
    let vn = unit_ball_volume(n)?;
    if !(target_measure > 0.0) || !target_measure.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "target measure {target_measure}"
        )));
    }
    let Some(first) = oracle.first_zero() else {
        let radius = (target_measure / vn).powf(1.0 / n as f64);
        return BallUnion::single(n, radius);
    };
    if !(eps > 0.0) || eps >= first / 2.0 {
        return Err(Error::InvalidEps(eps));
    }
    let ball = vn * eps.powi(n as i32);
    let needed = (target_measure / ball).ceil().max(1.0);
    if needed > MAX_BALLS as f64 {
        return Err(Error::InvalidParameter(format!(
            "target needs {needed} balls of radius {eps}"
        )));
    }
    let needed = needed as usize;
    let mut positions = vec![0.0f64];
    while positions.len() < needed {
        let span = positions.last().unwrap() - positions[0];
        let width = span + 4.0 * eps;
        let t = oracle
            .find_gap(0.0, width)
            .ok_or(Error::GapNotFound { from: 0.0, width })?;
        positions.push(positions.last().unwrap() + t + 2.0 * eps);
    }
    let centers = positions
        .into_iter()
        .map(|p| {
            let mut c = vec![0.0; n];
            c[0] = p;
            c
        })
        .collect();
    BallUnion::new(n, eps, centers)
}

/// Exhaustive check that every length in S − S is certified zero-free.
pub fn differences_certified(s: &BallUnion, oracle: &dyn GapOracle) -> bool {
    let reach = 2.0 * s.radius();
    if !oracle.is_zero_free(0.0, reach) {
        return false;
    }
    s.differences().iter().all(|d| {
        let len = super::norm(d);
        oracle.is_zero_free((len - reach).max(0.0), len + reach)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_chain_by_hand() {
        // roots at 10, 20, 30, …; eps = 1
        let oracle = ForbiddenSetOracle::lattice(10.0, 0.0, 1000.0).unwrap();
        let vn = std::f64::consts::PI;
        // k = 2: [0, 4] is free, second center at 0 + 0 + 2 = 2
        let s = witness_chain(2, &oracle, 1.0, 2.0 * vn).unwrap();
        assert_eq!(s.centers(), &[vec![0.0, 0.0], vec![2.0, 0.0]]);
        // k = 3: span 2 needs [t, t + 6]; [0, 6] is free, so next center at 2 + 2 = 4
        let s = witness_chain(2, &oracle, 1.0, 3.0 * vn).unwrap();
        assert_eq!(s.centers()[2], vec![4.0, 0.0]);
        assert!(differences_certified(&s, &oracle));
        let s = witness_chain(2, &oracle, 1.0, 4.0 * vn).unwrap();
        assert_eq!(s.centers()[3], vec![6.0, 0.0]);
        assert!(differences_certified(&s, &oracle));
        assert!(s.measure() >= 4.0 * vn - 1e-12);
        // k = 5: span 6 needs a closed zero-free window of width 10, but roots are 10 apart
        assert!(matches!(
            witness_chain(2, &oracle, 1.0, 5.0 * vn),
            Err(Error::GapNotFound { .. })
        ));
    }

    #[test]
    fn no_zeros_gives_single_ball() {
        let oracle = ForbiddenSetOracle::new(vec![], 0.0, f64::INFINITY).unwrap();
        let s = witness_chain(3, &oracle, 0.1, 2.0).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.measure() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn eps_precondition() {
        let oracle = ForbiddenSetOracle::lattice(1.0, 0.0, 10.0).unwrap();
        assert!(matches!(
            witness_chain(1, &oracle, 0.5, 1.5),
            Err(Error::InvalidEps(_))
        ));
        assert!(matches!(
            witness_chain(1, &oracle, 0.0, 1.5),
            Err(Error::InvalidEps(_))
        ));
    }

    #[test]
    fn uncertified_range_stops_the_chain() {
        let oracle = ForbiddenSetOracle::lattice(1.0, 0.01, 5.0).unwrap();
        assert!(matches!(
            witness_chain(1, &oracle, 0.1, 10.0),
            Err(Error::GapNotFound { .. })
        ));
    }
}
