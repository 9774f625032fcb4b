//! Fractional Taylor expansion in the variable `u = μ(t^α − s^α)/α`, its
//! remainder in series and integral form, the Cauchy kernel and the
//! variation-of-constants solution.
//!
//! Two-point functions take their arguments in (center, point) order: the
//! remainder `R_n(c, x)` is `f(x)` minus the degree-`n` expansion about `c`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::kernel::ParamSet;
use crate::vcalc::{
    vderiv_n_expr, vintegral, vintegral_oriented, Evaluable, QuadratureConfig, QuadratureResult,
};

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn require_nonnegative(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be a finite value >= 0, got {x}")))
    }
}

/// `μ(t^α − s^α)/α`, the natural coordinate of the expansion about `s`.
pub fn fractional_gap(params: &ParamSet, mu: f64, t: f64, s: f64) -> f64 {
    let alpha = params.alpha();
    mu * (t.powf(alpha) - s.powf(alpha)) / alpha
}

/// The generalized monomial `(μ(t^α − s^α)/α)^k / k!` as an expression in `t`.
pub fn generalized_monomial(params: &ParamSet, k: u32, s: f64) -> Result<Expr> {
    require_nonnegative("center", s)?;
    if k == 0 {
        return Ok(Expr::Const(1.0));
    }
    let mu = params.constants()?.mu;
    let alpha = params.alpha();
    let scale = (mu / alpha).powi(k as i32) / factorial(k);
    let gap = Expr::Var.powf(alpha) - Expr::Const(s.powf(alpha));
    Ok((Expr::Const(scale) * gap.powf(k as f64)).simplify())
}

/// `(1/(m−1)!) · (μ(t^α − s^α)/α)^{m−1}`, the Cauchy function of `V^m y = 0`.
pub fn cauchy_kernel(params: &ParamSet, m: u32, t: f64, s: f64) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidArgument("kernel order m must be >= 1".into()));
    }
    require_nonnegative("t", t)?;
    require_nonnegative("s", s)?;
    let mu = params.constants()?.mu;
    Ok(fractional_gap(params, mu, t, s).powi(m as i32 - 1) / factorial(m - 1))
}

/// Solution at `t` of `V^m y = g` with `y` and its first `m − 1` derivatives
/// vanishing at `s`: `∫_s^t K_m(t, τ) g(τ) dω(τ)` with the oriented integral.
pub fn variation_of_constants<G>(
    g: &G,
    params: &ParamSet,
    m: u32,
    s: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    G: Evaluable + ?Sized,
{
    if m < 1 {
        return Err(Error::InvalidArgument("kernel order m must be >= 1".into()));
    }
    require_nonnegative("s", s)?;
    require_nonnegative("t", t)?;
    let mu = params.constants()?.mu;
    let scale = 1.0 / factorial(m - 1);
    let integrand =
        |tau: f64| Ok(scale * fractional_gap(params, mu, t, tau).powi(m as i32 - 1) * g.value_at(tau)?);
    vintegral_oriented(&integrand, params, s, t, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorExpansion {
    params: ParamSet,
    center: f64,
    mu: f64,
    coeffs: Vec<f64>,
}

impl TaylorExpansion {
    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn order(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    /// `coeffs()[k] = V^k f(center)`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `Σ_k coeffs[k]/k! · u^k` with `u = μ(t^α − s^α)/α`, by Horner's rule.
    pub fn eval(&self, t: f64) -> Result<f64> {
        require_nonnegative("t", t)?;
        let u = fractional_gap(&self.params, self.mu, t, self.center);
        let n = self.coeffs.len() - 1;
        // c_n/n!·u^n + ... = c_0 + u(c_1 + u/2 (c_2 + u/3 (...)))
        let mut acc = self.coeffs[n];
        for k in (0..n).rev() {
            acc = self.coeffs[k] + u / (k + 1) as f64 * acc;
        }
        Ok(acc)
    }
}

/// Degree-`n` expansion of `f` about `s` with coefficients `V^k f(s)` from
/// the iterated symbolic derivative.
pub fn taylor_poly(f: &Expr, params: &ParamSet, n: u32, s: f64) -> Result<TaylorExpansion> {
    require_nonnegative("center", s)?;
    let mu = params.constants()?.mu;
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut current = f.clone();
    for k in 0..=n {
        if k > 0 {
            current = vderiv_n_expr(&current, params, 1)?;
        }
        coeffs.push(current.eval(s)?);
    }
    Ok(TaylorExpansion {
        params: *params,
        center: s,
        mu,
        coeffs,
    })
}

pub fn taylor_eval(expansion: &TaylorExpansion, t: f64) -> Result<f64> {
    expansion.eval(t)
}

/// `R_n(t, s) = f(s) − Σ_{k≤n} V^k f(t)/k! · (μ(s^α − t^α)/α)^k`, expansion
/// about `t` evaluated at `s`. `n = −1` gives `f(s)`.
pub fn remainder_series(f: &Expr, params: &ParamSet, n: i32, t: f64, s: f64) -> Result<f64> {
    if n < -1 {
        return Err(Error::InvalidArgument(format!("remainder order must be >= -1, got {n}")));
    }
    let value = f.eval(s)?;
    if n == -1 {
        return Ok(value);
    }
    let expansion = taylor_poly(f, params, n as u32, t)?;
    Ok(value - expansion.eval(s)?)
}

/// `(1/n!) ∫_t^s (μ(s^α − τ^α)/α)^n · V^{n+1} f(τ) dω(τ)`, oriented so that
/// `s < t` integrates backwards.
pub fn remainder_integral(
    f: &Expr,
    params: &ParamSet,
    n: u32,
    t: f64,
    s: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    require_nonnegative("center", t)?;
    require_nonnegative("point", s)?;
    let top = vderiv_n_expr(f, params, n + 1)?;
    let mu = params.constants()?.mu;
    let scale = 1.0 / factorial(n);
    let integrand = |tau: f64| {
        Ok(scale * fractional_gap(params, mu, s, tau).powi(n as i32) * top.eval(tau)?)
    };
    vintegral_oriented(&integrand, params, t, s, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemainderReport {
    pub series_value: f64,
    pub integral_value: f64,
    pub integral_error_estimate: f64,
    pub discrepancy: f64,
}

/// Both remainder representations side by side.
pub fn remainder_report(
    f: &Expr,
    params: &ParamSet,
    n: u32,
    t: f64,
    s: f64,
    cfg: &QuadratureConfig,
) -> Result<RemainderReport> {
    let series_value = remainder_series(f, params, n as i32, t, s)?;
    let integral = remainder_integral(f, params, n, t, s, cfg)?;
    Ok(RemainderReport {
        series_value,
        integral_value: integral.value,
        integral_error_estimate: integral.error_estimate,
        discrepancy: (series_value - integral.value).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub n: i32,
    pub a: f64,
    pub b: f64,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// Sum of the quadrature error estimates behind `lhs` and `rhs`.
    pub error_estimate: f64,
    pub difference: f64,
}

/// Checks
///
/// ```text
/// ∫_a^b V^{n+1}f(s)/(n+1)! · (μ(t^α − s^α)/α)^{n+1} dω(s)
///     = ∫_a^t R_n(a, s) dω(s) + ∫_t^b R_n(b, s) dω(s)
/// ```
///
/// for `a ≤ t ≤ b` and `n ≥ −1`. Setting `t` to an endpoint drops one of the
/// right-hand integrals.
pub fn remainder_identity_check(
    f: &Expr,
    params: &ParamSet,
    n: i32,
    a: f64,
    b: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    if n < -1 {
        return Err(Error::InvalidArgument(format!("remainder order must be >= -1, got {n}")));
    }
    require_nonnegative("a", a)?;
    if !(a <= t && t <= b) {
        return Err(Error::InvalidArgument(format!(
            "need a <= t <= b, got a = {a}, t = {t}, b = {b}"
        )));
    }
    let mu = params.constants()?.mu;
    let m = (n + 1) as u32;
    let top = vderiv_n_expr(f, params, m)?;
    let scale = 1.0 / factorial(m);
    let lhs_integrand =
        |s: f64| Ok(top.eval(s)? * scale * fractional_gap(params, mu, t, s).powi(m as i32));
    let lhs = vintegral(&lhs_integrand, params, a, b, cfg)?;

    let (left, right) = if n == -1 {
        let left = vintegral(f, params, a, t, cfg)?;
        let right = vintegral(f, params, t, b, cfg)?;
        (left, right)
    } else {
        let order = n as u32;
        let at_a = taylor_poly(f, params, order, a)?;
        let at_b = taylor_poly(f, params, order, b)?;
        let rem_a = |s: f64| Ok(f.eval(s)? - at_a.eval(s)?);
        let rem_b = |s: f64| Ok(f.eval(s)? - at_b.eval(s)?);
        (
            vintegral(&rem_a, params, a, t, cfg)?,
            vintegral(&rem_b, params, t, b, cfg)?,
        )
    };
    let rhs = left.value + right.value;
    Ok(IdentityReport {
        n,
        a,
        b,
        t,
        lhs: lhs.value,
        rhs,
        error_estimate: lhs.error_estimate + left.error_estimate + right.error_estimate,
        difference: (lhs.value - rhs).abs(),
    })
}
