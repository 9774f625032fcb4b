mod common;

use proptest::prelude::*;
use vfrac_core::expr::Expr;
use vfrac_core::vcalc::{
    vderiv_closed, vderiv_expr, vderiv_limit, vintegral, QuadratureConfig,
};
use vfrac_core::Result;

use common::{catalog_expr, mixed_err, outer_expr, param_set, point, rel_err};

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn linearity(f in catalog_expr(), g in catalog_expr(), a in -3.0f64..3.0, b in -3.0f64..3.0,
                 params in param_set(), t in point()) {
        let combo = Expr::Const(a) * f.clone() + Expr::Const(b) * g.clone();
        let lhs = vderiv_closed(&combo, &params, t).unwrap();
        let rhs = a * vderiv_closed(&f, &params, t).unwrap() + b * vderiv_closed(&g, &params, t).unwrap();
        let scale = (a * vderiv_closed(&f, &params, t).unwrap()).abs()
            + (b * vderiv_closed(&g, &params, t).unwrap()).abs();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale.max(1e-300));
    }

    #[test]
    fn product_and_quotient_rules(f in catalog_expr(), g in catalog_expr(), params in param_set(), t in point()) {
        let (fv, gv) = (f.eval(t).unwrap(), g.eval(t).unwrap());
        let df = vderiv_closed(&f, &params, t).unwrap();
        let dg = vderiv_closed(&g, &params, t).unwrap();

        let product = vderiv_closed(&(f.clone() * g.clone()), &params, t).unwrap();
        let scale = (fv * dg).abs() + (gv * df).abs();
        prop_assert!((product - (fv * dg + gv * df)).abs() <= 1e-9 * scale.max(1e-300));

        prop_assume!(gv.abs() > 1e-3);
        let quotient = vderiv_closed(&(f.clone() / g.clone()), &params, t).unwrap();
        let want = (gv * df - fv * dg) / (gv * gv);
        let scale = ((gv * df).abs() + (fv * dg).abs()) / (gv * gv);
        prop_assert!((quotient - want).abs() <= 1e-9 * scale.max(1e-300));
    }

    #[test]
    fn constants_and_powers(c in -5.0f64..5.0, a in -2.0f64..4.0, params in param_set(), t in point()) {
        prop_assert_eq!(vderiv_closed(&Expr::Const(c), &params, t).unwrap(), 0.0);
        let lambda = params.constants().unwrap().lambda;
        let got = vderiv_expr(&Expr::Var.powf(a), &params).unwrap().eval(t).unwrap();
        let want = lambda * a * t.powf(a - params.alpha());
        prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1e-300));
    }

    #[test]
    fn chain_rule(outer in outer_expr(), inner in catalog_expr(), params in param_set(), t in point()) {
        let composed = outer.substitute(&inner);
        let lhs = vderiv_closed(&composed, &params, t).unwrap();
        let rhs = outer.diff().eval(inner.eval(t).unwrap()).unwrap() * vderiv_closed(&inner, &params, t).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1e-12), "{lhs} vs {rhs}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn limit_agrees_with_closed_form(f in catalog_expr(), params in param_set(), t in point()) {
        let closed = vderiv_closed(&f, &params, t).unwrap();
        let limit = vderiv_limit(&f, &params, t).unwrap();
        prop_assert!(rel_err(limit, closed) <= 1e-4, "{f} at {t}: {limit} vs {closed}");
    }

    #[test]
    fn fundamental_theorem(f in catalog_expr(), params in param_set(), a in 0.2f64..1.5, len in 0.0f64..1.5) {
        let b = a + len;
        let df = vderiv_expr(&f, &params).unwrap();
        let r = vintegral(&df, &params, a, b, &cfg()).unwrap();
        let want = f.eval(b).unwrap() - f.eval(a).unwrap();
        prop_assert!((r.value - want).abs() <= 1e-8_f64.max(r.error_estimate), "{f}: {} vs {want}", r.value);
    }

    #[test]
    fn integration_by_parts(f in catalog_expr(), g in catalog_expr(), params in param_set(),
                            a in 0.2f64..1.5, len in 0.0f64..1.5) {
        let b = a + len;
        let dg = vderiv_expr(&g, &params).unwrap();
        let df = vderiv_expr(&f, &params).unwrap();
        let left = |x: f64| -> Result<f64> { Ok(f.eval(x)? * dg.eval(x)?) };
        let right = |x: f64| -> Result<f64> { Ok(g.eval(x)? * df.eval(x)?) };
        let l = vintegral(&left, &params, a, b, &cfg()).unwrap();
        let r = vintegral(&right, &params, a, b, &cfg()).unwrap();
        let boundary = f.eval(b).unwrap() * g.eval(b).unwrap() - f.eval(a).unwrap() * g.eval(a).unwrap();
        let residual = (l.value - (boundary - r.value)).abs();
        prop_assert!(residual <= 1e-8_f64.max(l.error_estimate + r.error_estimate), "{residual}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn derivative_inverts_the_integral(f in catalog_expr(), params in param_set(),
                                       a in 0.2f64..1.0, len in 0.2f64..2.0) {
        let t = a + len;
        let integral = |x: f64| -> Result<f64> { Ok(vintegral(&f, &params, a, x, &cfg())?.value) };
        let recovered = vderiv_limit(&integral, &params, t).unwrap();
        let want = f.eval(t).unwrap();
        prop_assert!(mixed_err(recovered, want) <= 1e-8, "{f} at {t}: {recovered} vs {want}");
    }
}
