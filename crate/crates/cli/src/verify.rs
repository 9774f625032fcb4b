//! Randomized property suites behind `vfrac verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vfrac_core::bounds::{
    holder_check, remainder_corollary_bound, remainder_product_bound, remainder_supnorm_bound,
    Direction, InequalityReport,
};
use vfrac_core::expr::{parse, Expr};
use vfrac_core::taylor::{remainder_identity_check, remainder_report};
use vfrac_core::vcalc::{vderiv_closed, vderiv_expr, vderiv_limit, vintegral, QuadratureConfig};
use vfrac_core::{ParamSet, RawParams, Result};

use crate::config::Suite;
use crate::report::{Table, VerifyPayload};

/// Smooth test functions on t > 0.
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

const RESIDUAL_TOL: f64 = 1e-8;
const LIMIT_TOL: f64 = 1e-4;
const REMAINDER_TOL: f64 = 1e-7;

struct Outcome {
    function: String,
    value: f64,
    reference: f64,
    residual: f64,
    tolerance: f64,
}

impl Outcome {
    fn from_inequality(function: String, r: &InequalityReport) -> Outcome {
        Outcome {
            function,
            value: r.lhs,
            reference: r.rhs,
            residual: (r.lhs - r.rhs).max(0.0),
            tolerance: r.rhs * 1e-9 + 1e-12,
        }
    }

    fn pass(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Run `trials` random instances of `suite` from `seed`.
pub fn run_suite(suite: Suite, trials: usize, seed: u64, cfg: &QuadratureConfig) -> Result<VerifyPayload> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Table::new(["trial", "function", "value", "reference", "residual", "tolerance", "pass"]);
    let mut failures = 0;
    for trial in 0..trials {
        let outcome = run_trial(suite, trial, &mut rng, cfg)?;
        let pass = outcome.pass();
        failures += usize::from(!pass);
        table.push(vec![
            (trial as f64).into(),
            outcome.function.into(),
            outcome.value.into(),
            outcome.reference.into(),
            outcome.residual.into(),
            outcome.tolerance.into(),
            pass.into(),
        ]);
    }
    Ok(VerifyPayload {
        suite: serde_json::to_value(suite)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default(),
        trials,
        seed,
        failures,
        table,
    })
}

fn pick(rng: &mut ChaCha8Rng) -> (&'static str, Expr) {
    let src = CATALOG[rng.gen_range(0..CATALOG.len())];
    (src, parse(src).expect("catalog entries parse"))
}

fn random_params(rng: &mut ChaCha8Rng) -> Result<ParamSet> {
    let mut draw = || rng.gen_range(0.2..3.0);
    let (gamma, beta, rho, delta, p, q) = (draw(), draw(), draw(), draw(), draw(), draw());
    RawParams {
        gamma,
        beta,
        rho,
        delta,
        p,
        q: q.min(gamma + p),
        alpha: rng.gen_range(0.1..=1.0),
        trunc_i: rng.gen_range(1..=8),
    }
    .validate()
}

fn random_interval(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let a = rng.gen_range(0.2..1.5);
    (a, a + rng.gen_range(0.0..1.5))
}

fn run_trial(suite: Suite, trial: usize, rng: &mut ChaCha8Rng, cfg: &QuadratureConfig) -> Result<Outcome> {
    let (src, f) = pick(rng);
    let params = random_params(rng)?;
    let outcome = match suite {
        Suite::Ftc => {
            let (a, b) = random_interval(rng);
            let df = vderiv_expr(&f, &params)?;
            let r = vintegral(&df, &params, a, b, cfg)?;
            let want = f.eval(b)? - f.eval(a)?;
            Outcome {
                function: src.to_string(),
                value: r.value,
                reference: want,
                residual: (r.value - want).abs(),
                tolerance: RESIDUAL_TOL.max(r.error_estimate),
            }
        }
        Suite::Inverse => {
            let a = rng.gen_range(0.2..1.0);
            let t = a + rng.gen_range(0.2..2.0);
            let integral = |x: f64| -> Result<f64> { Ok(vintegral(&f, &params, a, x, cfg)?.value) };
            let got = vderiv_limit(&integral, &params, t)?;
            let want = f.eval(t)?;
            Outcome {
                function: src.to_string(),
                value: got,
                reference: want,
                residual: (got - want).abs() / want.abs().max(1.0),
                tolerance: RESIDUAL_TOL,
            }
        }
        Suite::Parts => {
            let (gsrc, g) = pick(rng);
            let (a, b) = random_interval(rng);
            let df = vderiv_expr(&f, &params)?;
            let dg = vderiv_expr(&g, &params)?;
            let left = |x: f64| -> Result<f64> { Ok(f.eval(x)? * dg.eval(x)?) };
            let right = |x: f64| -> Result<f64> { Ok(g.eval(x)? * df.eval(x)?) };
            let l = vintegral(&left, &params, a, b, cfg)?;
            let r = vintegral(&right, &params, a, b, cfg)?;
            let boundary = f.eval(b)? * g.eval(b)? - f.eval(a)? * g.eval(a)?;
            Outcome {
                function: format!("{src}; {gsrc}"),
                value: l.value,
                reference: boundary - r.value,
                residual: (l.value - (boundary - r.value)).abs(),
                tolerance: RESIDUAL_TOL.max(l.error_estimate + r.error_estimate),
            }
        }
        Suite::Limit => {
            let t = rng.gen_range(0.2..3.0);
            let closed = vderiv_closed(&f, &params, t)?;
            let limit = vderiv_limit(&f, &params, t)?;
            let residual = if closed == 0.0 {
                limit.abs()
            } else {
                ((limit - closed) / closed).abs()
            };
            Outcome {
                function: src.to_string(),
                value: limit,
                reference: closed,
                residual,
                tolerance: LIMIT_TOL,
            }
        }
        Suite::Remainder => {
            let n = rng.gen_range(0..=4u32);
            let t = rng.gen_range(0.3..2.5);
            let s = rng.gen_range(0.3..2.5);
            let r = remainder_report(&f, &params, n, t, s, cfg)?;
            Outcome {
                function: src.to_string(),
                value: r.series_value,
                reference: r.integral_value,
                residual: r.discrepancy,
                tolerance: REMAINDER_TOL.max(10.0 * r.integral_error_estimate),
            }
        }
        Suite::Identity => {
            let n = rng.gen_range(-1..=3i32);
            let a = rng.gen_range(0.3..1.5);
            let b = a + rng.gen_range(0.1..1.5);
            // include both endpoints in the rotation
            let t = match trial % 4 {
                0 => a,
                1 => b,
                _ => rng.gen_range(a..=b),
            };
            let r = remainder_identity_check(&f, &params, n, a, b, t, cfg)?;
            Outcome {
                function: src.to_string(),
                value: r.lhs,
                reference: r.rhs,
                residual: r.difference,
                tolerance: REMAINDER_TOL.max(r.error_estimate),
            }
        }
        Suite::Holder => {
            let (gsrc, g) = pick(rng);
            let r = rng.gen_range(1.1..6.0);
            let (a, b) = random_interval(rng);
            let rep = holder_check(&f, &g, r, r / (r - 1.0), &params, a, b, cfg)?;
            Outcome::from_inequality(format!("{src}; {gsrc}"), &rep)
        }
        Suite::Bounds => {
            let n = rng.gen_range(0..4u32);
            let x0: f64 = rng.gen_range(0.3..2.5);
            let len: f64 = rng.gen_range(0.05..1.5);
            let (t, direction) = match rng.gen_range(0..3) {
                0 => (x0 + len, Direction::Forward),
                1 => ((x0 - len).max(0.05), Direction::Backward),
                _ => (x0 + len, Direction::Absolute),
            };
            let rep = match trial % 3 {
                0 => {
                    let r = rng.gen_range(1.1..6.0);
                    remainder_product_bound(&f, &params, n, r, r / (r - 1.0), x0, t, direction, cfg)?
                }
                1 => remainder_corollary_bound(&f, &params, n, x0, t, direction, cfg)?,
                _ => remainder_supnorm_bound(&f, &params, n, x0, t, direction, cfg)?,
            };
            Outcome::from_inequality(format!("{src} [{}]", rep.name), &rep)
        }
    };
    Ok(outcome)
}
