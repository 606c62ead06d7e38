use ce_core::geometry::witness_chain;
use ce_core::improve::{
    improve_fourier, improve_spatial, sharpen_via_dual, suggest_dual_c, Improved,
};
use ce_core::lp::{probe, LpGridSpec};
use ce_core::radial::{verify_ce, EvenFunction, GridSpec, RadialProfile};
use ce_core::zeros::{extract_zeros, Side};

/// LP solution at a radius 20% above the optimum, so every operator has room.
fn slack_candidate(n: usize, k: usize, r: f64) -> (EvenFunction, f64) {
    let p = probe(n, k, r, &LpGridSpec::default()).unwrap();
    let f = EvenFunction::eigen_sum(n, &p.coefficients.unwrap()).unwrap();
    let rep = verify_ce(&f, &GridSpec::default()).unwrap();
    assert!(rep.passed);
    (f, rep.r.unwrap())
}

fn outputs() -> Vec<(Improved, f64)> {
    let grid = GridSpec::default();
    let mut out = Vec::new();
    for (n, k, r) in [(1, 12, 1.2), (2, 16, 1.29)] {
        let (f, r) = slack_candidate(n, k, r);
        let c = suggest_dual_c(&f, 0.5, &grid).unwrap();
        out.push((sharpen_via_dual(&f, r, c, &grid).unwrap(), r));
        let zf = extract_zeros(&f, Side::Function, 12.0, 1e-9, 1e-3).unwrap();
        let s = witness_chain(n, &zf.gap_oracle(0.05).unwrap(), 0.45, 1.05).unwrap();
        out.push((improve_spatial(&f, &s, r, 0.5, 50, 0).unwrap(), r));
        let zt = extract_zeros(&f, Side::Transform, 12.0, 1e-9, 1e-3).unwrap();
        let s = witness_chain(n, &zt.gap_oracle(0.05).unwrap(), 0.45, 1.05).unwrap();
        out.push((improve_fourier(&f, &s, 0.5, 50, 0).unwrap(), r));
    }
    out
}

#[test]
fn operators_preserve_the_class_and_shrink_the_radius() {
    let grid = GridSpec::default();
    for (out, r) in outputs() {
        let g = &out.function;
        let side = out.params.side;
        let origin = vec![0.0; g.dim()];
        let (g0, ghat0) = (
            g.evaluate(&origin).unwrap(),
            g.fourier_exact().evaluate(&origin).unwrap(),
        );
        assert!((g0 - ghat0).abs() <= 1e-9, "{side:?}: {g0} vs {ghat0}");

        let rep = verify_ce(g, &grid).unwrap();
        assert!(rep.passed, "{side:?}: {:?}", rep.failures);
        let r_new = rep.r.unwrap();
        assert!(r_new < r, "{side:?}: {r} → {r_new}");
        assert!(r_new <= r / out.params.c_scale + grid.step, "{side:?}");

        let fp = RadialProfile::new(g, false, grid.directions, grid.seed);
        let hp = RadialProfile::new(g, true, grid.directions, grid.seed);
        for i in 0..=6000 {
            let s = i as f64 * grid.step;
            assert!(hp.min_at(s).unwrap() >= -1e-9, "{side:?}: F̂({s}) < 0");
            if s > r_new {
                assert!(fp.max_at(s).unwrap() <= 1e-9, "{side:?}: F({s}) > 0");
            }
        }
    }
}

#[test]
fn improved_functions_round_trip_and_reverify_identically() {
    let grid = GridSpec::default();
    for (out, _) in outputs() {
        let text = serde_json::to_string(&out).unwrap();
        let back: Improved = serde_json::from_str(&text).unwrap();
        assert_eq!(back, out);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        assert_eq!(
            verify_ce(&back.function, &grid).unwrap(),
            verify_ce(&out.function, &grid).unwrap()
        );
    }
}
