#![allow(dead_code)]

use proptest::prelude::*;
use vfrac_core::expr::{parse, Expr, Func};
use vfrac_core::kernel::{ParamSet, RawParams};

/// Smooth functions defined on the whole of `[0.2, 3]`.
pub const CATALOG: [&str; 12] = [
    "t^2",
    "t^3",
    "t^2.5",
    "sqrt(t)",
    "exp(t)",
    "ln(t)",
    "sin(t)",
    "cos(t)",
    "1/(1+t)",
    "t*exp(t)",
    "sqrt(1+t^2)",
    "exp(-t)*sin(t)",
];

/// Outer functions for compositions; defined on the whole real line.
pub const OUTER: [&str; 5] = ["exp(t)", "sin(t)", "cos(t)", "sqrt(1+t^2)", "1/(1+t^2)"];

pub fn catalog_expr() -> impl Strategy<Value = Expr> {
    prop::sample::select(CATALOG.to_vec()).prop_map(|s| parse(s).unwrap())
}

pub fn outer_expr() -> impl Strategy<Value = Expr> {
    prop::sample::select(OUTER.to_vec()).prop_map(|s| parse(s).unwrap())
}

pub fn param_set() -> impl Strategy<Value = ParamSet> {
    (
        0.2f64..3.0,
        0.2f64..3.0,
        0.2f64..3.0,
        0.2f64..3.0,
        0.2f64..3.0,
        0.2f64..3.0,
        0.1f64..=1.0,
        1i64..=8,
    )
        .prop_map(|(gamma, beta, rho, delta, p, q, alpha, trunc_i)| {
            RawParams {
                gamma,
                beta,
                rho,
                delta,
                p,
                // keep γ + p ≥ q
                q: q.min(gamma + p),
                alpha,
                trunc_i,
            }
            .validate()
            .unwrap()
        })
}

pub fn point() -> impl Strategy<Value = f64> {
    0.2f64..3.0
}

/// Random expression trees of bounded depth over the full grammar.
pub fn expr_tree() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::Var),
        Just(Expr::Var),
        (-3.0f64..3.0).prop_map(|c| Expr::Const((c * 100.0).round() / 100.0)),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        let exponents = prop::sample::select(vec![2.0, 3.0, 0.5, 1.5, -1.0, -0.5, -2.0]);
        let funcs = prop::sample::select(vec![Func::Exp, Func::Ln, Func::Sin, Func::Cos, Func::Sqrt]);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / b),
            (inner.clone(), exponents).prop_map(|(a, c)| a.powf(c)),
            inner.clone().prop_map(|a| -a),
            (funcs, inner).prop_map(|(f, a)| Expr::call(f, a)),
        ]
    })
}

/// Value of `e` at `t` together with how far `t` sits from the edge of the
/// domain: the smallest ln/sqrt argument, denominator magnitude or base of a
/// fractional or negative power met during evaluation.
pub fn eval_with_margin(e: &Expr, t: f64) -> Option<(f64, f64)> {
    fn go(e: &Expr, t: f64, margin: &mut f64) -> Option<f64> {
        let v = match e {
            Expr::Const(c) => *c,
            Expr::Var => t,
            Expr::Add(a, b) => go(a, t, margin)? + go(b, t, margin)?,
            Expr::Sub(a, b) => go(a, t, margin)? - go(b, t, margin)?,
            Expr::Mul(a, b) => go(a, t, margin)? * go(b, t, margin)?,
            Expr::Div(a, b) => {
                let num = go(a, t, margin)?;
                let den = go(b, t, margin)?;
                *margin = margin.min(den.abs());
                num / den
            }
            Expr::Pow(a, c) => {
                let base = go(a, t, margin)?;
                if c.fract() != 0.0 {
                    *margin = margin.min(base);
                } else if *c < 0.0 {
                    *margin = margin.min(base.abs());
                }
                base.powf(*c)
            }
            Expr::Neg(a) => -go(a, t, margin)?,
            Expr::Call(f, a) => {
                let x = go(a, t, margin)?;
                match f {
                    Func::Ln | Func::Sqrt => *margin = margin.min(x),
                    _ => {}
                }
                match f {
                    Func::Exp => x.exp(),
                    Func::Ln => x.ln(),
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Sqrt => x.sqrt(),
                }
            }
        };
        v.is_finite().then_some(v)
    }
    let mut margin = f64::INFINITY;
    let v = go(e, t, &mut margin)?;
    Some((v, margin))
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

/// `|got − want| / max(1, |want|)`
pub fn mixed_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}
