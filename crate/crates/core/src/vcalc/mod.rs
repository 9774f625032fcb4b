//! The truncated V-fractional derivative and the V-fractional integral.
//!
//! With `λ, μ` from [`crate::kernel::derive_constants`]:
//!
//! * derivative: `V f(t) = lim_{ε→0} [f(t·H(ε t^{-α})) - f(t)] / ε`, which for
//!   differentiable `f` equals `λ t^{1-α} f'(t)`;
//! * integral: `I f(a, b) = μ ∫_a^b f(x) x^{α-1} dx`.

mod quad;

pub use quad::{integrate, QuadratureConfig, QuadratureResult};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::kernel::{h_truncated, ParamSet};

/// Anything that can be sampled at a point: parsed expressions and plain
/// closures `Fn(f64) -> Result<f64>`.
pub trait Evaluable {
    fn value_at(&self, t: f64) -> Result<f64>;
}

impl Evaluable for Expr {
    fn value_at(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?)
    }
}

impl<F> Evaluable for F
where
    F: Fn(f64) -> Result<f64>,
{
    fn value_at(&self, t: f64) -> Result<f64> {
        self(t)
    }
}

/// Maximum node count of an iterated symbolic derivative.
pub const MAX_EXPR_NODES: usize = 100_000;

const LIMIT_STEPS: usize = 21;
const LIMIT_FIRST_STEP: f64 = 1e-2;
const LIMIT_REL_AGREEMENT: f64 = 1e-4;

fn require_positive_point(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "the derivative is defined for t > 0, got t = {t}"
        )))
    }
}

/// Kernel argument `z₀` with `H(z₀) − 1 ≈ 10⁻²`, so the first sample of the
/// limit moves `t` by about 1% whatever the size of `λ` (the linear
/// coefficient of `H`). A fixed first step would shrink the perturbation by
/// `λ` and let rounding in `f` dominate the quotients when `λ` is small.
fn initial_kernel_argument(params: &ParamSet) -> Result<f64> {
    let lambda = params.constants()?.lambda;
    let mut z = LIMIT_FIRST_STEP / lambda;
    // the coefficients of H are positive, so H(z) − 1 decreases with z
    for _ in 0..200 {
        if h_truncated(params, z)? - 1.0 <= 2.0 * LIMIT_FIRST_STEP {
            break;
        }
        z *= 0.5;
    }
    Ok(z)
}

/// Highest Richardson order used by [`vderiv_limit`].
const LIMIT_MAX_ORDER: usize = 8;

/// Evaluate the limit definition numerically.
///
/// Difference quotients are taken at `ε_k = ε₀ · 2^{-k}`, `k = 0..=20`, where
/// `ε₀` puts the perturbed point `t·H(ε₀ t^{-α})` about 1% away from `t`
/// (see [`initial_kernel_argument`]). The quotients are fed into a Richardson tableau (Ridders' scheme) that eliminates the
/// `ε, ε², …` error terms up to order 8. Each tableau entry carries an error
/// estimate from its neighbours; the entry with the smallest estimate is
/// returned, and the sweep stops once higher orders start to lose against
/// the cancellation of small steps. Fails with [`Error::NonConvergence`] when
/// the best estimate still exceeds `1e-4` relative (allowing for the rounding
/// level of the quotients).
pub fn vderiv_limit<F>(f: &F, params: &ParamSet, t: f64) -> Result<f64>
where
    F: Evaluable + ?Sized,
{
    require_positive_point(t)?;
    let f_t = f.value_at(t)?;
    let z0 = initial_kernel_argument(params)?;
    let first_step = z0 * t.powf(params.alpha());
    let mut magnitude = f_t.abs();

    let mut previous_row: Vec<f64> = Vec::with_capacity(LIMIT_MAX_ORDER + 1);
    // (value, error estimate, step of the row it came from, neighbour)
    let mut best: Option<(f64, f64, f64, f64)> = None;
    for k in 0..LIMIT_STEPS {
        let scale = f64::powi(0.5, k as i32);
        let eps = first_step * scale;
        let x = t * h_truncated(params, z0 * scale)?;
        let f_x = f.value_at(x)?;
        magnitude = magnitude.max(f_x.abs());

        let mut row = Vec::with_capacity(LIMIT_MAX_ORDER + 1);
        row.push((f_x - f_t) / eps);
        for m in 1..=k.min(LIMIT_MAX_ORDER) {
            let factor = f64::powi(2.0, m as i32);
            let value = (factor * row[m - 1] - previous_row[m - 1]) / (factor - 1.0);
            let err = (value - row[m - 1]).abs().max((value - previous_row[m - 1]).abs());
            if best.is_none_or(|(_, e, _, _)| err <= e) {
                best = Some((value, err, eps, row[m - 1]));
            }
            row.push(value);
        }
        // higher-order entries of this row got worse than the best so far: noise dominates
        if let (Some(&(_, best_err, _, _)), true) = (best.as_ref(), k > LIMIT_MAX_ORDER) {
            let n = row.len();
            let diagonal_err = (row[n - 1] - previous_row[n - 1]).abs();
            if diagonal_err > 64.0 * best_err && best_err > 0.0 {
                break;
            }
        }
        previous_row = row;
    }

    let (value, err, eps, neighbour) = best.expect("tableau has at least one extrapolated entry");
    // quotient rounding at the step of the chosen entry, amplified by the tableau
    let noise = 64.0 * f64::EPSILON * magnitude / eps;
    if !value.is_finite() || err > LIMIT_REL_AGREEMENT * value.abs() + noise {
        return Err(Error::NonConvergence {
            last: value,
            previous: neighbour,
        });
    }
    Ok(value)
}

/// `λ t^{1-α} f'(t)` with `f'` the exact symbolic derivative.
pub fn vderiv_closed(f: &Expr, params: &ParamSet, t: f64) -> Result<f64> {
    require_positive_point(t)?;
    let lambda = params.constants()?.lambda;
    let slope = f.diff().eval(t)?;
    let value = lambda * t.powf(1.0 - params.alpha()) * slope;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!("derivative at t = {t} is not finite")))
    }
}

/// Symbolic `V f = λ · t^{1-α} · f'`, simplified.
pub fn vderiv_expr(f: &Expr, params: &ParamSet) -> Result<Expr> {
    let lambda = params.constants()?.lambda;
    let e = Expr::Const(lambda) * Expr::Var.powf(1.0 - params.alpha()) * f.diff();
    Ok(e.simplify())
}

/// `V^n f` by repeated symbolic application; `n = 0` returns `f` unchanged.
pub fn vderiv_n_expr(f: &Expr, params: &ParamSet, n: u32) -> Result<Expr> {
    let mut e = f.clone();
    for _ in 0..n {
        e = vderiv_expr(&e, params)?;
        let nodes = e.node_count();
        if nodes > MAX_EXPR_NODES {
            return Err(Error::ExpressionBlowup { nodes });
        }
    }
    Ok(e)
}

fn scale_result(result: Result<QuadratureResult>, scale: f64) -> Result<QuadratureResult> {
    match result {
        Ok(r) => Ok(QuadratureResult {
            value: scale * r.value,
            error_estimate: scale.abs() * r.error_estimate,
            evaluations: r.evaluations,
        }),
        Err(Error::ToleranceNotMet {
            value,
            error_estimate,
            evaluations,
            subdivisions,
        }) => Err(Error::ToleranceNotMet {
            value: scale * value,
            error_estimate: scale.abs() * error_estimate,
            evaluations,
            subdivisions,
        }),
        Err(e) => Err(e),
    }
}

/// `μ ∫_a^b f(x) x^{α-1} dx` for `0 ≤ a ≤ b`.
///
/// Integrated after the substitution `u = x^α`, i.e. as
/// `(μ/α) ∫_{a^α}^{b^α} f(u^{1/α}) du`, which removes the weak singularity of
/// the weight at `x = 0`.
pub fn vintegral<F>(
    f: &F,
    params: &ParamSet,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: Evaluable + ?Sized,
{
    if !(a >= 0.0 && b.is_finite()) || b < a {
        return Err(Error::InvalidArgument(format!(
            "integral needs 0 <= a <= b, got a = {a}, b = {b}"
        )));
    }
    let alpha = params.alpha();
    let mu = params.constants()?.mu;
    let lo = a.powf(alpha);
    let hi = b.powf(alpha);
    let inv_alpha = 1.0 / alpha;
    let raw = integrate(
        |u: f64| {
            let x = if alpha == 1.0 { u } else { u.powf(inv_alpha) };
            f.value_at(x)
        },
        lo,
        hi,
        cfg,
    );
    scale_result(raw, mu / alpha)
}

/// [`vintegral`] over an oriented interval: `from > to` gives the negated
/// integral over `[to, from]`.
pub fn vintegral_oriented<F>(
    f: &F,
    params: &ParamSet,
    from: f64,
    to: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: Evaluable + ?Sized,
{
    if from <= to {
        vintegral(f, params, from, to, cfg)
    } else {
        scale_result(vintegral(f, params, to, from, cfg), -1.0)
    }
}
