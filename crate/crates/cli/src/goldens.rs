//! Fixtures bundled into the binary.

use ce_core::zeros::{remark_fixture, Root, RootKind, Side, ZeroReport, FINITE_RANGE_NOTE};
use ce_core::Result;
use serde::Deserialize;

pub const TRIANGLE: &str = include_str!("../goldens/triangle.json");
const E8_LENGTHS: &str = include_str!("../goldens/e8_lengths.json");
const REMARK: &str = include_str!("../goldens/remark_fixture.json");

#[derive(Deserialize)]
struct Lengths {
    dim: usize,
    lengths: Vec<f64>,
}

#[derive(Deserialize)]
struct RemarkParams {
    eps: f64,
    k_max: u32,
    r_max: f64,
}

/// E8 root lengths as crossing roots on [0, 6].
pub fn e8_report() -> Result<ZeroReport> {
    let l: Lengths = serde_json::from_str(E8_LENGTHS)?;
    let r_max = l.lengths.iter().cloned().fold(0.0, f64::max);
    Ok(ZeroReport {
        dim: l.dim,
        side: Side::Function,
        roots: l
            .lengths
            .into_iter()
            .map(|length| Root {
                length,
                kind: RootKind::Crossing,
            })
            .collect(),
        r_max,
        tol: 0.0,
        zero_threshold: 0.0,
        scan_step: 0.0,
        note: FINITE_RANGE_NOTE.into(),
    })
}

pub fn remark_report() -> Result<ZeroReport> {
    let p: RemarkParams = serde_json::from_str(REMARK)?;
    remark_fixture(p.eps, p.k_max, p.r_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ce_core::radial::EvenFunction;

    #[test]
    fn fixtures_parse() {
        let e8 = e8_report().unwrap();
        assert_eq!(e8.roots.len(), 18);
        for (m, root) in e8.roots.iter().enumerate() {
            assert!((root.length - (2.0 * (m + 1) as f64).sqrt()).abs() < 1e-15);
        }
        e8.check_invariants().unwrap();
        assert_eq!(remark_report().unwrap().intervals().len(), 4);
        assert_eq!(EvenFunction::from_json(TRIANGLE.trim()).unwrap().dim(), 1);
    }
}
