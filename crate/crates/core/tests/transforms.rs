use ce_core::geometry::BallUnion;
use ce_core::radial::{ft_check, EvenFunction, Node};
use ce_core::special::{integrate, unit_ball_volume, QuadratureConfig};
use proptest::prelude::*;

fn leaf(dim: usize) -> impl Strategy<Value = Node> {
    prop_oneof![
        (0usize..10).prop_map(Node::Eigen),
        (
            0.1f64..0.5,
            prop::collection::vec(prop::collection::vec(-2.0f64..2.0, dim), 1..3)
        )
            .prop_filter_map("overlap", move |(rho, c)| BallUnion::new(dim, rho, c)
                .ok()
                .map(Node::Autocorr)),
        (0.1f64..0.5).prop_map(move |rho| Node::FtSquared(BallUnion::single(dim, rho).unwrap())),
    ]
}

fn tree(dim: usize) -> impl Strategy<Value = Node> {
    leaf(dim).prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec((-2.0f64..2.0, inner.clone()), 1..4).prop_map(Node::Sum),
            (0.5f64..2.0, inner.clone()).prop_map(|(c, n)| Node::Dilate(c, Box::new(n))),
            inner.prop_map(|n| Node::FourierOf(Box::new(n))),
        ]
    })
}

fn point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.5f64..1.5, dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fourier_is_an_involution_on_even_functions(
        (dim, node, x) in (1usize..4).prop_flat_map(|d| (Just(d), tree(d), point(d)))
    ) {
        let f = EvenFunction::from_node(dim, node).unwrap();
        let twice = f.fourier_exact().fourier_exact();
        let want = f.evaluate(&x).unwrap();
        let got = twice.evaluate(&x).unwrap();
        prop_assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "{got} vs {want}");
    }

    #[test]
    fn eigen_atoms_have_eigenvalue_plus_minus_one(
        (dim, k, x) in (1usize..9).prop_flat_map(|d| (Just(d), 0usize..12, point(d)))
    ) {
        let e = EvenFunction::eigen(dim, k).unwrap();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let got = e.fourier_exact().evaluate(&x).unwrap();
        prop_assert!((got - sign * e.evaluate(&x).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn oracle_agrees_on_random_eigen_sums(
        dim in prop::sample::select(vec![1usize, 2, 3, 8]),
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..11),
    ) {
        let f = EvenFunction::eigen_sum(dim, &coeffs).unwrap();
        let radii: Vec<f64> = (0..50).map(|i| 5.0 * i as f64 / 49.0).collect();
        let check = ft_check(&f, &radii, &QuadratureConfig::default()).unwrap();
        prop_assert!(check.max_rel_error <= 1e-6, "{}", check.max_rel_error);
    }
}

/// ∫ f over Rⁿ as n V_n ∫₀^∞ f(s) s^{n−1} ds.
fn total_integral(f: &EvenFunction, upper: f64) -> f64 {
    let n = f.dim();
    let surface = n as f64 * unit_ball_volume(n).unwrap();
    let cfg = QuadratureConfig::default();
    let radial = |s: f64| f.evaluate_radial(s).unwrap() * s.powi(n as i32 - 1);
    let pieces = upper.ceil() as usize;
    (0..pieces)
        .map(|i| {
            let lo = upper * i as f64 / pieces as f64;
            let hi = upper * (i + 1) as f64 / pieces as f64;
            integrate(radial, lo, hi, &cfg).unwrap()
        })
        .sum::<f64>()
        * surface
}

#[test]
fn transform_at_zero_is_the_integral() {
    let cases = [
        EvenFunction::eigen_sum(1, &[1.0, -0.3, 0.2]).unwrap(),
        EvenFunction::eigen_sum(3, &[0.5, 0.4, 0.0, -0.1])
            .unwrap()
            .dilate(1.5)
            .unwrap(),
        EvenFunction::eigen_sum(8, &[1.0, 0.0, 0.25]).unwrap(),
        EvenFunction::autocorr(BallUnion::single(2, 0.6).unwrap()),
        EvenFunction::sum(vec![
            (
                1.0,
                EvenFunction::autocorr(BallUnion::single(3, 0.4).unwrap()),
            ),
            (0.5, EvenFunction::eigen(3, 2).unwrap()),
        ])
        .unwrap(),
    ];
    for f in &cases {
        let want = total_integral(f, 12.0);
        let got = f.evaluate_transform_radial(0.0).unwrap();
        assert!(
            (got - want).abs() <= 1e-6 * want.abs().max(1e-3),
            "{got} vs {want}"
        );
    }
}
