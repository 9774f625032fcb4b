//! Parameter validation and the special-function kernel: gamma, the
//! generalized Pochhammer symbol, the six-parameter truncated Mittag-Leffler
//! function and the truncated `H` function that perturbs the argument inside
//! the V-fractional derivative.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Candidate parameter tuple, as read from user input. Nothing is checked
/// until [`RawParams::validate`] is called.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawParams {
    pub gamma: f64,
    pub beta: f64,
    pub rho: f64,
    pub delta: f64,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub trunc_i: i64,
}

impl Default for RawParams {
    /// All-unit parameters with `alpha = 1` and `i = 1`: the classical case.
    fn default() -> Self {
        RawParams {
            gamma: 1.0,
            beta: 1.0,
            rho: 1.0,
            delta: 1.0,
            p: 1.0,
            q: 1.0,
            alpha: 1.0,
            trunc_i: 1,
        }
    }
}

impl RawParams {
    /// All-unit parameters with the given order.
    pub fn unit(alpha: f64) -> Self {
        RawParams {
            alpha,
            ..RawParams::default()
        }
    }

    pub fn validate(self) -> Result<ParamSet> {
        validate_params(self)
    }
}

/// A validated parameter set. The only way to obtain one is through
/// [`validate_params`], so every `ParamSet` satisfies
///
/// * `gamma, beta, rho, delta, p, q > 0`
/// * `gamma + p >= q`
/// * `0 < alpha <= 1`
/// * `trunc_i >= 1`
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamSet {
    gamma: f64,
    beta: f64,
    rho: f64,
    delta: f64,
    p: f64,
    q: f64,
    alpha: f64,
    trunc_i: u32,
}

impl ParamSet {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn trunc_i(&self) -> u32 {
        self.trunc_i
    }

    /// Same parameters with a different order `alpha`.
    pub fn with_alpha(self, alpha: f64) -> Result<ParamSet> {
        RawParams {
            alpha,
            ..self.raw()
        }
        .validate()
    }

    pub fn raw(&self) -> RawParams {
        RawParams {
            gamma: self.gamma,
            beta: self.beta,
            rho: self.rho,
            delta: self.delta,
            p: self.p,
            q: self.q,
            alpha: self.alpha,
            trunc_i: i64::from(self.trunc_i),
        }
    }

    pub fn constants(&self) -> Result<Constants> {
        derive_constants(self)
    }
}

impl<'de> Deserialize<'de> for ParamSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RawParams::deserialize(de)?;
        raw.validate().map_err(serde::de::Error::custom)
    }
}

/// Checks the conditions in order and reports the first one violated.
pub fn validate_params(raw: RawParams) -> Result<ParamSet> {
    let positive = [
        ("gamma", raw.gamma),
        ("beta", raw.beta),
        ("rho", raw.rho),
        ("delta", raw.delta),
        ("p", raw.p),
        ("q", raw.q),
    ];
    for (name, value) in positive {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositiveParameter { name, value });
        }
    }
    if !(raw.alpha > 0.0 && raw.alpha <= 1.0) {
        return Err(Error::OrderOutOfRange(raw.alpha));
    }
    if raw.gamma + raw.p < raw.q {
        return Err(Error::ConditionViolated {
            gamma: raw.gamma,
            p: raw.p,
            q: raw.q,
        });
    }
    if raw.trunc_i < 1 {
        return Err(Error::TruncationTooSmall(raw.trunc_i));
    }
    let trunc_i = u32::try_from(raw.trunc_i)
        .map_err(|_| Error::InvalidArgument(format!("truncation index {} too large", raw.trunc_i)))?;
    Ok(ParamSet {
        gamma: raw.gamma,
        beta: raw.beta,
        rho: raw.rho,
        delta: raw.delta,
        p: raw.p,
        q: raw.q,
        alpha: raw.alpha,
        trunc_i,
    })
}

// Lanczos approximation, Pugh's r = 10.900511 coefficient set.
const LANCZOS_R: f64 = 10.900511;
#[allow(clippy::excessive_precision)]
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;
const LN_TWO_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |s, (i, &dk)| s + dk / (x + i as f64 - 1.0))
}

/// Γ(x) for x > 0.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail the check
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("gamma undefined at {x}")));
    }
    if x.is_infinite() {
        return Err(Error::Overflow("gamma(inf)".into()));
    }
    if x.fract() == 0.0 && x <= 30.0 {
        // exact for small integers
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    let value = if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        PI / ((PI * x).sin() * gamma_fn(1.0 - x)?)
    } else {
        // split the power so Γ(170) does not overflow in the intermediate
        let base = (x - 0.5 + LANCZOS_R) / E;
        let half = base.powf(0.5 * (x - 0.5));
        lanczos_sum(x) * TWO_SQRT_E_OVER_PI * half * half
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!("gamma({x}) exceeds f64 range")))
    }
}

/// ln Γ(x) for x > 0.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail the check
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("log-gamma undefined at {x}")));
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if x < 0.5 {
        return Ok((PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)?);
    }
    Ok(lanczos_sum(x).ln()
        + LN_TWO_SQRT_E_OVER_PI
        + (x - 0.5) * ((x - 0.5 + LANCZOS_R).ln() - 1.0))
}

/// ln (ρ)_{qk} = ln Γ(ρ + qk) − ln Γ(ρ).
fn ln_pochhammer(rho: f64, q: f64, k: u64) -> Result<f64> {
    if k == 0 {
        return Ok(0.0);
    }
    Ok(ln_gamma(rho + q * k as f64)? - ln_gamma(rho)?)
}

/// Generalized Pochhammer symbol (ρ)_{qk} = Γ(ρ + qk) / Γ(ρ), evaluated as a
/// log-gamma difference so large `qk` does not overflow the gamma calls.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail the check
pub fn pochhammer_gen(rho: f64, q: f64, k: u64) -> Result<f64> {
    if !(rho > 0.0) || !(q > 0.0) {
        return Err(Error::domain(format!(
            "pochhammer needs rho > 0 and q > 0, got rho = {rho}, q = {q}"
        )));
    }
    let value = ln_pochhammer(rho, q, k)?.exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!("({rho})_({q}*{k}) exceeds f64 range")))
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Σ_{k=0}^{i} exp(log_scale) (ρ)_{qk}/(δ)_{pk} z^k / Γ(γk + β), ascending k.
fn truncated_series(params: &ParamSet, z: f64, log_scale: f64) -> Result<f64> {
    let mut acc = CompensatedSum::default();
    let ln_abs_z = z.abs().ln();
    for k in 0..=u64::from(params.trunc_i) {
        if k > 0 && z == 0.0 {
            break;
        }
        let kf = k as f64;
        let mut ln_mag = log_scale
            + ln_pochhammer(params.rho, params.q, k)?
            - ln_pochhammer(params.delta, params.p, k)?
            - ln_gamma(params.gamma * kf + params.beta)?;
        if k > 0 {
            ln_mag += kf * ln_abs_z;
        }
        let mut term = ln_mag.exp();
        if z < 0.0 && k % 2 == 1 {
            term = -term;
        }
        if !term.is_finite() {
            return Err(Error::Overflow(format!(
                "term k = {k} of the truncated series at z = {z}"
            )));
        }
        acc.add(term);
    }
    let value = acc.value();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!("truncated series at z = {z}")))
    }
}

/// Six-parameter truncated Mittag-Leffler function
/// `Σ_{k=0}^{i} (ρ)_{qk}/(δ)_{pk} · z^k / Γ(γk + β)`.
pub fn ml_truncated(params: &ParamSet, z: f64) -> Result<f64> {
    truncated_series(params, z, 0.0)
}

/// Truncated `H` function, `Γ(β)` times [`ml_truncated`]. The `Γ(β)` factor is
/// folded into each term, so `H(0) = 1` exactly.
pub fn h_truncated(params: &ParamSet, z: f64) -> Result<f64> {
    truncated_series(params, z, ln_gamma(params.beta)?)
}

/// The two reciprocal constants attached to a parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Derivative prefactor Γ(β)(ρ)_q / (Γ(γ+β)(δ)_p).
    pub lambda: f64,
    /// Integral and Taylor prefactor Γ(γ+β)(δ)_p / (Γ(β)(ρ)_q).
    pub mu: f64,
}

pub fn derive_constants(params: &ParamSet) -> Result<Constants> {
    if let Some(c) = constants_from_gamma_products(params) {
        return Ok(c);
    }
    let ln_g_beta = ln_gamma(params.beta)?;
    let ln_g_gamma_beta = ln_gamma(params.gamma + params.beta)?;
    let ln_rho_q = ln_pochhammer(params.rho, params.q, 1)?;
    let ln_delta_p = ln_pochhammer(params.delta, params.p, 1)?;

    let lambda = ((ln_g_beta - ln_g_gamma_beta) + (ln_rho_q - ln_delta_p)).exp();
    let mu = ((ln_g_gamma_beta - ln_g_beta) + (ln_delta_p - ln_rho_q)).exp();
    if !(lambda.is_finite() && mu.is_finite() && lambda > 0.0 && mu > 0.0) {
        return Err(Error::Overflow(format!(
            "constants out of range (lambda = {lambda}, mu = {mu})"
        )));
    }
    Ok(Constants { lambda, mu })
}

/// Direct gamma products when every factor is representable; exact for
/// integer arguments, where the log route would leave a few ulps behind.
fn constants_from_gamma_products(params: &ParamSet) -> Option<Constants> {
    let g = |x: f64| gamma_fn(x).ok().filter(|v| v.is_finite() && *v > 0.0);
    // Γ(β) Γ(ρ+q) Γ(δ)  over  Γ(γ+β) Γ(ρ) Γ(δ+p)
    let upper = g(params.beta)? * g(params.rho + params.q)? * g(params.delta)?;
    let lower = g(params.gamma + params.beta)? * g(params.rho)? * g(params.delta + params.p)?;
    let lambda = upper / lower;
    let mu = lower / upper;
    let normal = |v: f64| v.is_normal() && v > 0.0;
    (upper.is_finite() && lower.is_finite() && normal(lambda) && normal(mu))
        .then_some(Constants { lambda, mu })
}
