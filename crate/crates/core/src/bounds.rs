//! Hölder's inequality for the V-fractional integral and the Taylor-remainder
//! bounds built on it, each evaluated as an explicit lhs/rhs pair.
//!
//! With `U = μ|t^α − x₀^α|/α` and `g = V^{n+1} f`, the remainder bounds are
//!
//! ```text
//! ∫ |R_n(x₀,τ)| |g(τ)| dω ≤ U^{n+2/r} / (2^{1/s} n! [(nr+1)(nr+2)]^{1/r}) · (∫ |g|^s dω)^{2/s}
//! ∫ |R_n(x₀,τ)| |g(τ)| dω ≤ U^{n+2} / (n+2)! · ‖g‖²_∞
//! ```
//!
//! with all integrals and the norm taken over the interval between `x₀` and `t`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::kernel::{ParamSet, RawParams};
use crate::taylor::{factorial, fractional_gap, taylor_poly};
use crate::vcalc::{vderiv_n_expr, vintegral, Evaluable, QuadratureConfig};

const REL_SLACK: f64 = 1e-9;
const ABS_SLACK: f64 = 1e-12;
const CONJUGATE_TOL: f64 = 1e-12;

/// Which side of `x₀` the evaluation point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `t ≥ x₀`
    Forward,
    /// `t ≤ x₀`
    Backward,
    /// either side
    Absolute,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
            Direction::Absolute => "absolute",
        }
    }

    fn check(self, x0: f64, t: f64) -> Result<()> {
        let (ok, requirement) = match self {
            Direction::Forward => (t >= x0, "t >= x0"),
            Direction::Backward => (t <= x0, "t <= x0"),
            Direction::Absolute => (true, ""),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DirectionMismatch {
                direction: self.name(),
                requirement,
                x0,
                t,
            })
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Direction> {
        match s {
            "forward" => Ok(Direction::Forward),
            "backward" => Ok(Direction::Backward),
            "absolute" => Ok(Direction::Absolute),
            other => Err(Error::InvalidArgument(format!(
                "direction must be forward, backward or absolute, got `{other}`"
            ))),
        }
    }
}

/// Inputs an inequality instance was evaluated with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityContext {
    pub params: RawParams,
    /// Integration interval `[lo, hi]`.
    pub interval: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub direction: Option<Direction>,
}

impl InequalityContext {
    fn new(params: &ParamSet, lo: f64, hi: f64) -> Self {
        InequalityContext {
            params: params.raw(),
            interval: [lo, hi],
            n: None,
            r: None,
            s: None,
            x0: None,
            t: None,
            direction: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`
    pub slack: f64,
    /// `lhs ≤ rhs·(1 + 1e-9) + 1e-12`
    pub holds: bool,
    pub context: InequalityContext,
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, context: InequalityContext) -> Self {
        InequalityReport {
            name: name.into(),
            lhs,
            rhs,
            slack: rhs - lhs,
            holds: verdict(lhs, rhs),
            context,
        }
    }
}

/// The tolerance used for every inequality verdict.
pub fn verdict(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs * (1.0 + REL_SLACK) + ABS_SLACK
}

fn check_conjugate(r: f64, s: f64) -> Result<()> {
    let ok = r > 1.0 && s > 1.0 && r.is_finite() && s.is_finite();
    if ok && (1.0 / r + 1.0 / s - 1.0).abs() <= CONJUGATE_TOL {
        Ok(())
    } else {
        Err(Error::ConjugateExponent { r, s })
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if a >= 0.0 && b.is_finite() && a <= b {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "need 0 <= a <= b, got a = {a}, b = {b}"
        )))
    }
}

/// `∫|fg| dω ≤ (∫|f|^r dω)^{1/r} (∫|g|^s dω)^{1/s}` on `[a, b]`.
/// `r = s = 2` is the Cauchy–Schwarz case.
#[allow(clippy::too_many_arguments)]
pub fn holder_check<F, G>(
    f: &F,
    g: &G,
    r: f64,
    s: f64,
    params: &ParamSet,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<InequalityReport>
where
    F: Evaluable + ?Sized,
    G: Evaluable + ?Sized,
{
    check_conjugate(r, s)?;
    check_interval(a, b)?;
    let product = |x: f64| Ok((f.value_at(x)? * g.value_at(x)?).abs());
    let f_r = |x: f64| Ok(f.value_at(x)?.abs().powf(r));
    let g_s = |x: f64| Ok(g.value_at(x)?.abs().powf(s));
    let lhs = vintegral(&product, params, a, b, cfg)?.value;
    let f_norm = vintegral(&f_r, params, a, b, cfg)?.value;
    let g_norm = vintegral(&g_s, params, a, b, cfg)?.value;
    let rhs = f_norm.powf(1.0 / r) * g_norm.powf(1.0 / s);
    let mut context = InequalityContext::new(params, a, b);
    context.r = Some(r);
    context.s = Some(s);
    let name = if r == 2.0 && s == 2.0 { "cauchy_schwarz" } else { "holder" };
    Ok(InequalityReport::new(name, lhs, rhs, context))
}

/// Right-hand side of the Hölder-type remainder bound, given
/// `g_integral = ∫ |V^{n+1} f|^s dω` over the interval between `x0` and `t`.
pub fn product_bound_rhs(
    params: &ParamSet,
    n: u32,
    r: f64,
    s: f64,
    x0: f64,
    t: f64,
    g_integral: f64,
) -> Result<f64> {
    let mu = params.constants()?.mu;
    let u = fractional_gap(params, mu, t, x0).abs();
    let nr = n as f64 * r;
    let denominator = 2f64.powf(1.0 / s) * factorial(n) * ((nr + 1.0) * (nr + 2.0)).powf(1.0 / r);
    Ok(u.powf(n as f64 + 2.0 / r) / denominator * g_integral.powf(2.0 / s))
}

/// The `r = s = 2` specialisation written out on its own:
/// `U^{n+1} / (2 n! √((2n+1)(n+1))) · ∫ |V^{n+1} f|² dω`.
pub fn corollary_bound_rhs(params: &ParamSet, n: u32, x0: f64, t: f64, g_sq_integral: f64) -> Result<f64> {
    let mu = params.constants()?.mu;
    let u = fractional_gap(params, mu, t, x0).abs();
    let nf = n as f64;
    let denominator = 2.0 * factorial(n) * ((2.0 * nf + 1.0) * (nf + 1.0)).sqrt();
    Ok(u.powi(n as i32 + 1) / denominator * g_sq_integral)
}

/// Right-hand side of the sup-norm remainder bound, `U^{n+2}/(n+2)! · sup²`.
pub fn supnorm_bound_rhs(params: &ParamSet, n: u32, x0: f64, t: f64, sup: f64) -> Result<f64> {
    let mu = params.constants()?.mu;
    let u = fractional_gap(params, mu, t, x0).abs();
    Ok(u.powi(n as i32 + 2) / factorial(n + 2) * sup * sup)
}

struct RemainderSetup {
    lo: f64,
    hi: f64,
    top: Expr,
    lhs: f64,
}

/// Shared left-hand side: `∫ |R_n(x0, τ)| |V^{n+1} f(τ)| dω(τ)` between `x0` and `t`.
fn remainder_lhs(
    f: &Expr,
    params: &ParamSet,
    n: u32,
    x0: f64,
    t: f64,
    direction: Direction,
    cfg: &QuadratureConfig,
) -> Result<RemainderSetup> {
    direction.check(x0, t)?;
    let (lo, hi) = if x0 <= t { (x0, t) } else { (t, x0) };
    check_interval(lo, hi)?;
    let expansion = taylor_poly(f, params, n, x0)?;
    let top = vderiv_n_expr(f, params, n + 1)?;
    let integrand =
        |tau: f64| Ok((f.eval(tau)? - expansion.eval(tau)?).abs() * top.eval(tau)?.abs());
    let lhs = vintegral(&integrand, params, lo, hi, cfg)?.value;
    Ok(RemainderSetup { lo, hi, top, lhs })
}

/// Hölder-type remainder bound for conjugate `r, s`.
#[allow(clippy::too_many_arguments)]
pub fn remainder_product_bound(
    f: &Expr,
    params: &ParamSet,
    n: u32,
    r: f64,
    s: f64,
    x0: f64,
    t: f64,
    direction: Direction,
    cfg: &QuadratureConfig,
) -> Result<InequalityReport> {
    check_conjugate(r, s)?;
    let setup = remainder_lhs(f, params, n, x0, t, direction, cfg)?;
    let top = &setup.top;
    let g_s = |tau: f64| Ok(top.eval(tau)?.abs().powf(s));
    let g_integral = vintegral(&g_s, params, setup.lo, setup.hi, cfg)?.value;
    let rhs = product_bound_rhs(params, n, r, s, x0, t, g_integral)?;
    let mut context = InequalityContext::new(params, setup.lo, setup.hi);
    context.n = Some(n);
    context.r = Some(r);
    context.s = Some(s);
    context.x0 = Some(x0);
    context.t = Some(t);
    context.direction = Some(direction);
    let name = format!("remainder_product_bound/{direction}");
    Ok(InequalityReport::new(name, setup.lhs, rhs, context))
}

/// The `r = s = 2` remainder bound evaluated through its own closed constant.
pub fn remainder_corollary_bound(
    f: &Expr,
    params: &ParamSet,
    n: u32,
    x0: f64,
    t: f64,
    direction: Direction,
    cfg: &QuadratureConfig,
) -> Result<InequalityReport> {
    let setup = remainder_lhs(f, params, n, x0, t, direction, cfg)?;
    let top = &setup.top;
    let g_sq = |tau: f64| Ok(top.eval(tau)?.powi(2));
    let g_integral = vintegral(&g_sq, params, setup.lo, setup.hi, cfg)?.value;
    let rhs = corollary_bound_rhs(params, n, x0, t, g_integral)?;
    let mut context = InequalityContext::new(params, setup.lo, setup.hi);
    context.n = Some(n);
    context.r = Some(2.0);
    context.s = Some(2.0);
    context.x0 = Some(x0);
    context.t = Some(t);
    context.direction = Some(direction);
    let name = format!("remainder_corollary_bound/{direction}");
    Ok(InequalityReport::new(name, setup.lhs, rhs, context))
}

/// Sup-norm remainder bound, with the norm of `V^{n+1} f` taken over the
/// interval between `x0` and `t`.
pub fn remainder_supnorm_bound(
    f: &Expr,
    params: &ParamSet,
    n: u32,
    x0: f64,
    t: f64,
    direction: Direction,
    cfg: &QuadratureConfig,
) -> Result<InequalityReport> {
    let setup = remainder_lhs(f, params, n, x0, t, direction, cfg)?;
    let sup = sup_norm(&setup.top, setup.lo, setup.hi, DEFAULT_GRID)?.value;
    let rhs = supnorm_bound_rhs(params, n, x0, t, sup)?;
    let mut context = InequalityContext::new(params, setup.lo, setup.hi);
    context.n = Some(n);
    context.x0 = Some(x0);
    context.t = Some(t);
    context.direction = Some(direction);
    let name = format!("remainder_supnorm_bound/{direction}");
    Ok(InequalityReport::new(name, setup.lhs, rhs, context))
}

pub const DEFAULT_GRID: usize = 1025;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupNormEstimate {
    pub value: f64,
    pub grid_points: usize,
    /// Whether local polishing found a value above the grid maximum.
    pub refined: bool,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Maximise `|f|` on `[lo, hi]` by golden-section search.
fn polish<F>(f: &F, mut lo: f64, mut hi: f64) -> Result<(f64, f64)>
where
    F: Evaluable + ?Sized,
{
    let abs_at = |x: f64| Ok::<f64, Error>(f.value_at(x)?.abs());
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = abs_at(x1)?;
    let mut f2 = abs_at(x2)?;
    for _ in 0..200 {
        if hi - lo <= 1e-13 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = abs_at(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = abs_at(x2)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// `max |f|` over `[a, b]`: a uniform grid of `grid_points` samples, then
/// golden-section polishing in the neighbourhood of the three largest local
/// grid maxima.
pub fn sup_norm<F>(f: &F, a: f64, b: f64, grid_points: usize) -> Result<SupNormEstimate>
where
    F: Evaluable + ?Sized,
{
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::InvalidArgument(format!(
            "sup norm needs a finite interval with a <= b, got [{a}, {b}]"
        )));
    }
    if grid_points < 2 {
        return Err(Error::InvalidArgument("sup norm grid needs at least 2 points".into()));
    }
    if a == b {
        return Ok(SupNormEstimate {
            value: f.value_at(a)?.abs(),
            grid_points: 1,
            refined: false,
        });
    }
    let step = (b - a) / (grid_points - 1) as f64;
    let xs: Vec<f64> = (0..grid_points)
        .map(|k| if k + 1 == grid_points { b } else { a + step * k as f64 })
        .collect();
    let values = xs
        .iter()
        .map(|&x| Ok(f.value_at(x)?.abs()))
        .collect::<Result<Vec<f64>>>()?;
    let grid_max = values.iter().cloned().fold(0.0, f64::max);

    let last = grid_points - 1;
    let mut peaks: Vec<usize> = (0..grid_points)
        .filter(|&k| {
            let left = k == 0 || values[k] >= values[k - 1];
            let right = k == last || values[k] >= values[k + 1];
            left && right
        })
        .collect();
    peaks.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    peaks.truncate(3);

    let mut best = grid_max;
    for k in peaks {
        let lo = xs[k.saturating_sub(1)];
        let hi = xs[(k + 1).min(last)];
        let (_, value) = polish(f, lo, hi)?;
        best = best.max(value);
    }
    Ok(SupNormEstimate {
        value: best,
        grid_points,
        refined: best > grid_max,
    })
}
