use proptest::prelude::*;

use geomq::circulant::MetricAtPoint;
use geomq::expr::{fd_partial, Axis, Expr, Point, FD_STEP};
use geomq::TangentVec;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-3.0f64..3.0).prop_map(|c| Expr::Const((c * 4.0).round() / 4.0)),
        (0usize..3).prop_map(|i| Expr::Var(Axis::from_index(i))),
    ]
}

/// Smooth expressions without division or logarithm.
fn smooth() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), 0u32..4).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
            inner.clone().prop_map(|a| Expr::Sin(Box::new(a))),
            inner.clone().prop_map(|a| Expr::Cos(Box::new(a))),
            inner.prop_map(|a| Expr::Neg(Box::new(a))),
        ]
    })
}

fn point() -> impl Strategy<Value = Point> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b, c)| Point::new(a, b, c))
}

fn vector() -> impl Strategy<Value = TangentVec> {
    (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b, c)| TangentVec::new(a, b, c))
}

proptest! {
    #[test]
    fn printed_expressions_reparse(e in smooth(), p in point()) {
        let back = Expr::parse(&e.to_string()).unwrap();
        let (a, b) = (e.eval(&p).unwrap(), back.eval(&p).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{e} -> {back}: {a} vs {b}");
    }

    #[test]
    fn symbolic_derivative_matches_central_difference(e in smooth(), p in point(), k in 0usize..3) {
        let axis = Axis::from_index(k);
        let exact = e.diff(axis).eval(&p).unwrap();
        let fd = fd_partial(&e, &p, axis, FD_STEP).unwrap();
        let scale = 1.0 + exact.abs() + e.eval(&p).unwrap().abs();
        prop_assert!((exact - fd).abs() <= 1e-5 * scale, "{e}: {exact} vs {fd}");
    }

    #[test]
    fn mixed_partials_commute(e in smooth(), p in point()) {
        let xy = e.diff(Axis::X1).diff(Axis::X2).eval(&p).unwrap();
        let yx = e.diff(Axis::X2).diff(Axis::X1).eval(&p).unwrap();
        prop_assert!((xy - yx).abs() <= 1e-9 * (1.0 + xy.abs()));
    }

    #[test]
    fn derivative_is_linear(a in smooth(), b in smooth(), c in -3.0f64..3.0, p in point()) {
        let sum = Expr::Add(Box::new(a.clone()), Box::new(Expr::Mul(Box::new(Expr::Const(c)), Box::new(b.clone()))));
        let lhs = sum.diff(Axis::X3).eval(&p).unwrap();
        let rhs = a.diff(Axis::X3).eval(&p).unwrap() + c * b.diff(Axis::X3).eval(&p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs() + rhs.abs()));
    }

    #[test]
    fn q_preserves_the_metric(b in 0.1f64..5.0, gap in 0.1f64..5.0, x in vector(), y in vector()) {
        let g = MetricAtPoint::new(b + gap, b).unwrap();
        let d = (g.inner(&x.q(), &y.q()) - g.inner(&x, &y)).abs();
        prop_assert!(d <= 1e-12 * (1.0 + g.norm_sq(&x) + g.norm_sq(&y)));
        prop_assert_eq!(x.q().q().q(), x);
    }

    #[test]
    fn inverse_times_metric_is_identity(b in 0.01f64..10.0, gap in 0.01f64..10.0) {
        let g = MetricAtPoint::new(b + gap, b).unwrap();
        prop_assert!(geomq::report::inverse_residual(&g) <= 1e-12 * (1.0 + (b + gap) / gap));
    }
}
