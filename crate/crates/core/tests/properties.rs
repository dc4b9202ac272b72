use lprim::funcrepr::corpus::corpus;
use lprim::lpspace::{conjugate, pair};
use lprim::quadrature::lp_norm;
use lprim::{Config, Distribution, Expr, Multiplier};
use proptest::prelude::*;

fn cfg() -> Config {
    Config::default()
}

/// Small expressions in the DSL, smooth away from the origin.
fn dsl() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x".to_string()),
        (-3.0f64..3.0).prop_map(|c| format!("{c}")),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) * ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("exp(-({a})^2)")),
            inner.clone().prop_map(|a| format!("abs({a})")),
            inner.prop_map(|a| format!("1/(1+({a})^2)")),
        ]
    })
}

fn same(a: f64, b: f64) -> bool {
    (a.is_nan() && b.is_nan()) || a == b || (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dsl_round_trip(text in dsl(), x in -4.0f64..4.0) {
        let e = Expr::parse(&text).unwrap();
        let back = Expr::parse(&e.to_dsl()).unwrap();
        let (a, b) = (e.eval_raw(x), back.eval_raw(x));
        prop_assert!(same(a, b), "{text} -> {}: {a} vs {b}", e.to_dsl());
    }

    #[test]
    fn jet_matches_central_difference(text in dsl(), x in -2.0f64..2.0) {
        let e = Expr::parse(&text).unwrap();
        // abs has a kink wherever its argument vanishes; skip those draws.
        let Ok(j) = e.eval_jet(x, 1) else { return Ok(()) };
        let h = 1e-5;
        let fd = (e.eval_raw(x + h) - e.eval_raw(x - h)) / (2.0 * h);
        let d = j.derivatives()[1];
        prop_assume!(d.is_finite() && fd.is_finite() && d.abs() < 1e3);
        let fd2 = (e.eval_raw(x + h / 2.0) - e.eval_raw(x - h / 2.0)) / h;
        // Near a kink the two difference quotients disagree.
        prop_assume!((fd - fd2).abs() < 1e-6 * (1.0 + fd.abs()));
        prop_assert!((d - fd).abs() < 1e-5 * (1.0 + d.abs()), "{text} at {x}: {d} vs {fd}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pairing_is_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, s in 0.5f64..2.0, t in -1.0f64..1.0) {
        let c = cfg();
        let f1 = Expr::parse(&format!("exp(-{s}*x^2)")).unwrap();
        let f2 = corpus::<f64>("indicator", &[t, t + 1.0]).unwrap();
        let g = Multiplier::new(Expr::parse("exp(-abs(x))").unwrap(), 2.0, &c).unwrap();
        let d1 = Distribution::new(f1.clone(), 2.0, &c).unwrap();
        let d2 = Distribution::new(f2.clone(), 2.0, &c).unwrap();
        let mix = Distribution::new(f1.scale(a).add(&f2.scale(b)), 2.0, &c).unwrap();
        let lhs = pair(&mix, &g, &c).unwrap();
        let rhs = a * pair(&d1, &g, &c).unwrap() + b * pair(&d2, &g, &c).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-8, "{lhs} vs {rhs}");
    }

    #[test]
    fn holder_and_minkowski(p in 1.2f64..4.0, s in 0.3f64..3.0, t in -2.0f64..2.0) {
        let c = cfg();
        let q = conjugate(p);
        let f = Expr::parse(&format!("exp(-{s}*(x-{t})^2)")).unwrap();
        let h = corpus::<f64>("indicator", &[-1.0, 0.5]).unwrap();
        let g = Multiplier::new(Expr::parse("1/(1+x^2)").unwrap(), q, &c).unwrap();
        let d = Distribution::new(f.clone(), p, &c).unwrap();
        let v = pair(&d, &g, &c).unwrap();
        prop_assert!(v.abs() <= d.norm() * g.norm().unwrap() + 1e-8);

        let e = Distribution::new(h, p, &c).unwrap();
        let sum = d.add(&e, &c).unwrap();
        prop_assert!(sum.norm() <= d.norm() + e.norm() + 1e-8);
    }

    #[test]
    fn norm_is_translation_invariant(p in 1.0f64..4.0, t in -50.0f64..50.0) {
        let c = cfg();
        let f = corpus::<f64>("gaussian", &[]).unwrap();
        let a = lp_norm(&f, p, &c).unwrap();
        let b = lp_norm(&f.shift(t), p, &c).unwrap();
        prop_assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn single_precision_pipeline() {
    let c = lprim::quadrature::QuadConfig::<f32>::with_tolerances(1e-5, 1e-5);
    let f = lprim::funcrepr::FunctionExpr::<f32>::parse("indicator(0,1)").unwrap();
    let d = lprim::lpspace::PrimitiveDistribution::new(f, 1.0, &c).unwrap();
    let g = lprim::lpspace::Multiplier::local_with(lprim::funcrepr::FunctionExpr::<f32>::parse("exp(-x)").unwrap(), f32::INFINITY, &c).unwrap();
    let v = pair(&d, &g, &c).unwrap();
    assert!((v - ((-1.0f32).exp() - 1.0)).abs() < 1e-5, "{v}");
}
