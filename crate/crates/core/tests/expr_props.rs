mod common;

use proptest::prelude::*;
use vfrac_core::expr::{parse, simplify, ExprError};

use common::{eval_with_margin, expr_tree};

const POINTS: [f64; 10] = [0.21, 0.37, 0.55, 0.8, 1.0, 1.3, 1.7, 2.2, 2.6, 2.95];

/// Central difference with `h` and `h/2`, Richardson combined.
fn fd(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    let d = |h: f64| (f(t + h) - f(t - h)) / (2.0 * h);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_then_parse_preserves_value(e in expr_tree()) {
        let printed = e.to_string();
        let back = parse(&printed).map_err(|err| TestCaseError::fail(format!("{printed}: {err}")))?;
        for t in POINTS {
            match (e.eval(t), back.eval(t)) {
                (Ok(a), Ok(b)) => prop_assert!(
                    (a - b).abs() <= 1e-12 * a.abs().max(1e-300),
                    "{printed} at {t}: {a} vs {b}"
                ),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{printed} at {t}: {a:?} vs {b:?}"),
            }
        }
    }

    #[test]
    fn simplify_preserves_value_and_is_idempotent(e in expr_tree()) {
        let s = simplify(&e);
        prop_assert_eq!(simplify(&s), s.clone());
        for t in POINTS {
            let Some((v, margin)) = eval_with_margin(&e, t) else { continue };
            if margin < 1e-3 || v.abs() > 1e8 {
                continue;
            }
            let got = s.eval(t).unwrap();
            // reassociated constants may round differently; compare on the scale of the terms
            let scale = scale_of(&e, t).max(v.abs());
            prop_assert!((got - v).abs() <= 1e-12 * scale.max(1e-300), "{e} at {t}: {got} vs {v}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn derivative_matches_finite_differences(e in expr_tree()) {
        let d = e.diff();
        for t in [0.35, 0.9, 1.45, 2.0, 2.7] {
            let Some((v, margin)) = eval_with_margin(&e, t) else { continue };
            if margin < 0.05 || v.abs() > 1e3 {
                continue;
            }
            let Ok(exact) = d.eval(t) else {
                prop_assert!(false, "derivative of {e} fails at {t}");
                unreachable!()
            };
            if exact.abs() > 1e4 {
                continue;
            }
            let numeric = fd(|x| e.eval(x).unwrap(), t, 1e-6);
            prop_assert!(
                (exact - numeric).abs() <= 1e-6 * exact.abs().max(1.0),
                "{e} at {t}: {exact} vs {numeric}"
            );
        }
    }
}

/// Sum of absolute values of all node values, a bound on the rounding
/// error of any reassociation.
fn scale_of(e: &vfrac_core::Expr, t: f64) -> f64 {
    use vfrac_core::Expr::*;
    let here = e.eval(t).map(f64::abs).unwrap_or(0.0);
    here + match e {
        Const(_) | Var => 0.0,
        Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => scale_of(a, t) + scale_of(b, t),
        Pow(a, _) | Neg(a) | Call(_, a) => scale_of(a, t),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn parser_never_panics(src in "[t0-9.e+*/^() -]{0,40}|[a-z(),t0-9 ]{0,30}") {
        if let Err(err) = parse(&src) {
            if let Some(offset) = err.offset() {
                prop_assert!(offset <= src.len());
            }
        }
    }

    #[test]
    fn unbalanced_parentheses_are_parse_errors(
        opens in 0usize..6,
        closes in 0usize..6,
        body in prop::sample::select(vec!["t", "t+1", "exp(t)", "2*t^2", "sin(t"]),
    ) {
        let src = format!("{}{}{}", "(".repeat(opens), body, ")".repeat(closes));
        let net: i64 = src.chars().map(|c| match c { '(' => 1, ')' => -1, _ => 0 }).sum();
        prop_assume!(net != 0);
        match parse(&src) {
            Err(ExprError::Parse { offset, .. }) => prop_assert!(offset <= src.len()),
            other => prop_assert!(false, "{src}: {other:?}"),
        }
    }
}
