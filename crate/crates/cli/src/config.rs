//! Command-line definition and its translation into a validated [`RunConfig`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};
use vfrac_core::bounds::Direction;
use vfrac_core::expr::{parse, Expr};
use vfrac_core::vcalc::QuadratureConfig;
use vfrac_core::RawParams;

use crate::error::CliError;

/// Environment variable overriding the default quadrature tolerance (both
/// absolute and relative).
pub const QUAD_TOL_ENV: &str = "VFRAC_QUAD_TOL";

#[derive(Debug, Parser)]
#[command(
    name = "vfrac",
    version,
    about = "Truncated V-fractional calculus: derivatives, integrals, Taylor expansions and remainder bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Debug, Subcommand)]
enum Commands {
    /// V-fractional derivative of a function at one or more points
    #[command(allow_negative_numbers = true)]
    Deriv(DerivArgs),
    /// V-fractional integral over [from, to]
    #[command(allow_negative_numbers = true)]
    Integ(IntegArgs),
    /// Fractional Taylor polynomial about a center
    #[command(allow_negative_numbers = true)]
    Taylor(TaylorArgs),
    /// Taylor remainder in series and integral form, or the two-endpoint identity
    #[command(allow_negative_numbers = true)]
    Remainder(RemainderArgs),
    /// Evaluate one inequality instance and report lhs, rhs and the verdict
    #[command(allow_negative_numbers = true)]
    Inequality(InequalityArgs),
    /// Run a randomized property suite
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// Order α in (0, 1]
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    /// Truncation index i of the Mittag-Leffler series
    #[arg(long = "trunc", default_value_t = 1)]
    trunc: i64,
}

#[derive(Debug, Args)]
struct QuadArgs {
    /// Absolute quadrature tolerance [default: 1e-10, or VFRAC_QUAD_TOL]
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance [default: 1e-10, or VFRAC_QUAD_TOL]
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Subdivision budget of the adaptive quadrature
    #[arg(long, default_value_t = 2000)]
    max_subdivisions: usize,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Leave the timestamp out of the report metadata
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Debug, Args)]
struct DerivArgs {
    /// Function of t, e.g. "t^2 + exp(t)"
    #[arg(long)]
    function: String,
    /// Evaluation points (comma separated or repeated)
    #[arg(long, required = true, value_delimiter = ',', num_args = 1..)]
    at: Vec<f64>,
    #[arg(long, value_enum, default_value_t = DerivMethod::Closed)]
    method: DerivMethod,
    /// Number of applications of the operator (closed method only)
    #[arg(long, default_value_t = 1)]
    order: u32,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct IntegArgs {
    #[arg(long)]
    function: String,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct TaylorArgs {
    #[arg(long)]
    function: String,
    /// Expansion center s
    #[arg(long)]
    center: f64,
    /// Degree n of the expansion
    #[arg(long, default_value_t = 3)]
    order: u32,
    /// Points at which to evaluate the expansion
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "sweep")]
    eval: Vec<f64>,
    /// Evaluate on a uniform grid over [from, to] instead of --eval points
    #[arg(long, requires_all = ["from", "to"])]
    sweep: bool,
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    /// Number of sweep points
    #[arg(long, default_value_t = 21)]
    points: usize,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct RemainderArgs {
    #[arg(long)]
    function: String,
    /// Expansion center (forms mode)
    #[arg(long, conflicts_with = "identity")]
    center: Option<f64>,
    /// Evaluation point; with --identity the split point t in [from, to]
    #[arg(long)]
    at: f64,
    /// Degree n; -1 is allowed with --identity
    #[arg(long, default_value_t = 1)]
    order: i32,
    /// Check the two-endpoint remainder identity on [from, to]
    #[arg(long, requires_all = ["from", "to"])]
    identity: bool,
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct InequalityArgs {
    #[arg(long, value_enum)]
    theorem: Theorem,
    #[arg(long)]
    function: String,
    /// Second function (holder only)
    #[arg(long)]
    g: Option<String>,
    /// Hölder exponent r
    #[arg(long, default_value_t = 2.0)]
    r: f64,
    /// Conjugate exponent s [default: r/(r-1)]
    #[arg(long)]
    s: Option<f64>,
    /// Interval start (holder)
    #[arg(long)]
    from: Option<f64>,
    /// Interval end (holder)
    #[arg(long)]
    to: Option<f64>,
    /// Expansion center (remainder bounds)
    #[arg(long)]
    x0: Option<f64>,
    /// Evaluation point (remainder bounds)
    #[arg(long)]
    at: Option<f64>,
    /// Degree n (remainder bounds)
    #[arg(long, default_value_t = 1)]
    order: u32,
    #[arg(long, value_enum, default_value_t = DirectionArg::Absolute)]
    direction: DirectionArg,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Seed of the trial generator
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivMethod {
    /// λ t^(1-α) f'(t) from the symbolic derivative
    Closed,
    /// Richardson-extrapolated limit definition
    Limit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// Hölder (Cauchy-Schwarz at r = s = 2) for the integral
    Holder,
    /// Hölder-type remainder bound with exponents r, s
    Product,
    /// The r = s = 2 remainder bound
    Corollary,
    /// Sup-norm remainder bound
    Supnorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Forward,
    Backward,
    Absolute,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Direction {
        match d {
            DirectionArg::Forward => Direction::Forward,
            DirectionArg::Backward => Direction::Backward,
            DirectionArg::Absolute => Direction::Absolute,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Integral of the derivative equals the increment
    Ftc,
    /// Derivative of the running integral recovers the integrand
    Inverse,
    /// Integration by parts
    Parts,
    /// Limit definition against the closed form
    Limit,
    /// Series and integral remainders agree
    Remainder,
    /// Two-endpoint remainder identity
    Identity,
    /// Hölder inequality
    Holder,
    /// Product, corollary and sup-norm remainder bounds
    Bounds,
}

/// A parsed function together with the text it came from. Serializes as the
/// text.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionArg {
    pub source: String,
    pub expr: Expr,
}

impl FunctionArg {
    fn parse(flag: &'static str, text: &str) -> Result<FunctionArg, CliError> {
        let expr = parse(text).map_err(|err| CliError::Expression {
            flag,
            text: text.to_string(),
            err,
        })?;
        Ok(FunctionArg {
            source: text.to_string(),
            expr,
        })
    }
}

impl Serialize for FunctionArg {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.source)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum CommandConfig {
    Deriv {
        function: FunctionArg,
        points: Vec<f64>,
        method: DerivMethod,
        order: u32,
    },
    Integ {
        function: FunctionArg,
        from: f64,
        to: f64,
    },
    Taylor {
        function: FunctionArg,
        center: f64,
        order: u32,
        points: Vec<f64>,
    },
    Remainder {
        function: FunctionArg,
        center: f64,
        at: f64,
        order: u32,
    },
    Identity {
        function: FunctionArg,
        from: f64,
        to: f64,
        at: f64,
        order: i32,
    },
    Inequality {
        theorem: Theorem,
        function: FunctionArg,
        #[serde(skip_serializing_if = "Option::is_none")]
        g: Option<FunctionArg>,
        #[serde(skip_serializing_if = "Option::is_none")]
        r: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        s: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        from: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        to: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        x0: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        at: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        order: Option<u32>,
        #[serde(skip_serializing_if = "Option::is_none")]
        direction: Option<Direction>,
    },
    Verify {
        suite: Suite,
        trials: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub format: Format,
    pub path: Option<PathBuf>,
    pub timestamp: bool,
}

/// Everything a run needs, validated. Serialized into the report metadata
/// (the output destination is left out so reports do not depend on it).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandConfig,
    pub params: RawParams,
    pub quadrature: QuadratureConfig,
    #[serde(skip)]
    pub output: OutputConfig,
}

/// Parse `argv` (without the program name), reading the tolerance override
/// from the environment.
pub fn parse_cli<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_tol = std::env::var(QUAD_TOL_ENV).ok();
    parse_cli_with_env(argv, env_tol.as_deref())
}

/// [`parse_cli`] with the value of `VFRAC_QUAD_TOL` passed explicitly.
pub fn parse_cli_with_env<I, T>(argv: I, env_tol: Option<&str>) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = std::iter::once(OsString::from("vfrac")).chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args)?;
    let default_tol = match env_tol {
        None => None,
        Some(text) => match text.trim().parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Some(v),
            _ => {
                return Err(CliError::Usage(format!(
                    "{QUAD_TOL_ENV} must be a positive number, got `{text}`"
                )))
            }
        },
    };

    let (command, params, quad, output) = match cli.command {
        Commands::Deriv(a) => {
            if a.method == DerivMethod::Limit && a.order != 1 {
                return Err(CliError::Usage(
                    "--method limit only supports --order 1".into(),
                ));
            }
            let command = CommandConfig::Deriv {
                function: FunctionArg::parse("--function", &a.function)?,
                points: a.at,
                method: a.method,
                order: a.order,
            };
            (command, a.params, None, a.output)
        }
        Commands::Integ(a) => {
            let command = CommandConfig::Integ {
                function: FunctionArg::parse("--function", &a.function)?,
                from: a.from,
                to: a.to,
            };
            (command, a.params, Some(a.quad), a.output)
        }
        Commands::Taylor(a) => {
            let points = if a.sweep {
                sweep_points(a.from.unwrap_or(0.0), a.to.unwrap_or(0.0), a.points)?
            } else if a.eval.is_empty() {
                return Err(CliError::Usage(
                    "taylor needs --eval points or --sweep with --from/--to".into(),
                ));
            } else {
                a.eval
            };
            let command = CommandConfig::Taylor {
                function: FunctionArg::parse("--function", &a.function)?,
                center: a.center,
                order: a.order,
                points,
            };
            (command, a.params, None, a.output)
        }
        Commands::Remainder(a) => {
            let function = FunctionArg::parse("--function", &a.function)?;
            let command = if a.identity {
                if a.order < -1 {
                    return Err(CliError::Usage(format!(
                        "--order must be >= -1 with --identity, got {}",
                        a.order
                    )));
                }
                CommandConfig::Identity {
                    function,
                    from: a.from.unwrap_or(0.0),
                    to: a.to.unwrap_or(0.0),
                    at: a.at,
                    order: a.order,
                }
            } else {
                let center = a.center.ok_or_else(|| {
                    CliError::Usage("remainder needs --center (or --identity with --from/--to)".into())
                })?;
                let order = u32::try_from(a.order).map_err(|_| {
                    CliError::Usage(format!("--order must be >= 0, got {}", a.order))
                })?;
                CommandConfig::Remainder {
                    function,
                    center,
                    at: a.at,
                    order,
                }
            };
            (command, a.params, Some(a.quad), a.output)
        }
        Commands::Inequality(a) => {
            let function = FunctionArg::parse("--function", &a.function)?;
            let command = match a.theorem {
                Theorem::Holder => {
                    let (Some(from), Some(to)) = (a.from, a.to) else {
                        return Err(CliError::Usage("holder needs --from and --to".into()));
                    };
                    let g = a.g.as_deref().ok_or_else(|| CliError::Usage("holder needs --g".into()))?;
                    CommandConfig::Inequality {
                        theorem: a.theorem,
                        function,
                        g: Some(FunctionArg::parse("--g", g)?),
                        r: Some(a.r),
                        s: Some(a.s.unwrap_or(a.r / (a.r - 1.0))),
                        from: Some(from),
                        to: Some(to),
                        x0: None,
                        at: None,
                        order: None,
                        direction: None,
                    }
                }
                theorem => {
                    let (Some(x0), Some(at)) = (a.x0, a.at) else {
                        return Err(CliError::Usage("remainder bounds need --x0 and --at".into()));
                    };
                    if a.g.is_some() || a.from.is_some() || a.to.is_some() {
                        return Err(CliError::Usage(
                            "--g, --from and --to only apply to --theorem holder".into(),
                        ));
                    }
                    let (r, s) = match theorem {
                        Theorem::Product => (Some(a.r), Some(a.s.unwrap_or(a.r / (a.r - 1.0)))),
                        _ => (None, None),
                    };
                    CommandConfig::Inequality {
                        theorem,
                        function,
                        g: None,
                        r,
                        s,
                        from: None,
                        to: None,
                        x0: Some(x0),
                        at: Some(at),
                        order: Some(a.order),
                        direction: Some(a.direction.into()),
                    }
                }
            };
            (command, a.params, Some(a.quad), a.output)
        }
        Commands::Verify(a) => {
            if a.trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let command = CommandConfig::Verify {
                suite: a.suite,
                trials: a.trials,
                seed: a.seed,
            };
            let params = ParamArgs {
                alpha: 1.0,
                gamma: 1.0,
                beta: 1.0,
                rho: 1.0,
                delta: 1.0,
                p: 1.0,
                q: 1.0,
                trunc: 1,
            };
            (command, params, Some(a.quad), a.output)
        }
    };

    let params = RawParams {
        gamma: params.gamma,
        beta: params.beta,
        rho: params.rho,
        delta: params.delta,
        p: params.p,
        q: params.q,
        alpha: params.alpha,
        trunc_i: params.trunc,
    };
    // reject invalid parameters here so they surface as usage errors
    params
        .validate()
        .map_err(|e| CliError::Usage(format!("invalid parameters: {e}")))?;

    let mut quadrature = QuadratureConfig::default();
    if let Some(tol) = default_tol {
        quadrature.abs_tol = tol;
        quadrature.rel_tol = tol;
    }
    if let Some(q) = quad {
        quadrature.abs_tol = q.abs_tol.unwrap_or(quadrature.abs_tol);
        quadrature.rel_tol = q.rel_tol.unwrap_or(quadrature.rel_tol);
        quadrature.max_subdivisions = q.max_subdivisions;
    }
    quadrature
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;

    Ok(RunConfig {
        command,
        params,
        quadrature,
        output: OutputConfig {
            format: output.format,
            path: output.output,
            timestamp: !output.no_timestamp,
        },
    })
}

fn sweep_points(from: f64, to: f64, count: usize) -> Result<Vec<f64>, CliError> {
    if count < 2 || !(from.is_finite() && to.is_finite()) || from >= to {
        return Err(CliError::Usage(format!(
            "--sweep needs from < to and at least 2 points, got [{from}, {to}] with {count}"
        )));
    }
    let step = (to - from) / (count - 1) as f64;
    Ok((0..count)
        .map(|k| if k + 1 == count { to } else { from + step * k as f64 })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_ok(args: &[&str]) -> RunConfig {
        parse_cli_with_env(args.iter().copied(), None).unwrap()
    }

    #[test]
    fn deriv_config() {
        let c = parse_ok(&["deriv", "--function", "t^2", "--alpha", "0.5", "--at", "4"]);
        match &c.command {
            CommandConfig::Deriv { function, points, .. } => {
                assert_eq!(function.source, "t^2");
                assert_eq!(points, &[4.0]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(c.params.alpha, 0.5);
        assert_eq!(c.output.format, Format::Table);
        assert!(c.output.timestamp);
    }

    #[test]
    fn taylor_config() {
        let c = parse_ok(&[
            "taylor", "--function", "exp(t)", "--alpha", "1", "--center", "1", "--order", "5", "--eval", "2",
        ]);
        assert!(matches!(
            c.command,
            CommandConfig::Taylor { center, order: 5, ref points, .. } if center == 1.0 && points == &[2.0]
        ));
    }

    #[test]
    fn sweep_grid() {
        let c = parse_ok(&[
            "taylor", "--function", "exp(t)", "--center", "0", "--sweep", "--from", "0", "--to", "2", "--points", "5",
        ]);
        let CommandConfig::Taylor { points, .. } = c.command else { panic!() };
        assert_eq!(points, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn usage_errors() {
        let bad: &[&[&str]] = &[
            &["deriv", "--function", "t^2", "--alpha", "1.5", "--at", "1"],
            &["deriv", "--function", "t^2"],
            &["deriv", "--function", "t^2", "--at", "x"],
            &["deriv", "--function", "t^2", "--at", "1", "--bogus"],
            &["taylor", "--function", "t", "--center", "1", "--eval", "2", "--sweep", "--from", "0", "--to", "1"],
            &["taylor", "--function", "t", "--center", "1"],
            &["inequality", "--theorem", "holder", "--function", "1", "--g", "1"],
            &["deriv", "--function", "t", "--at", "1", "--method", "limit", "--order", "2"],
            &["remainder", "--function", "t", "--at", "1", "--order", "-1", "--center", "1"],
        ];
        for args in bad {
            let err = parse_cli_with_env(args.iter().copied(), None).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{args:?}");
            assert!(!err.one_line().contains('\n'));
        }
    }

    #[test]
    fn expression_errors_carry_offsets() {
        let err = parse_cli_with_env(["deriv", "--function", "t^t", "--at", "1"], None).unwrap_err();
        assert!(matches!(err, CliError::Expression { .. }));
        assert!(err.one_line().contains("offset 2"), "{}", err.one_line());
    }

    #[test]
    fn tolerance_from_environment() {
        let c = parse_cli_with_env(["integ", "--function", "t", "--from", "0", "--to", "1"], Some("1e-6")).unwrap();
        assert_eq!(c.quadrature.abs_tol, 1e-6);
        assert_eq!(c.quadrature.rel_tol, 1e-6);
        let c = parse_cli_with_env(
            ["integ", "--function", "t", "--from", "0", "--to", "1", "--abs-tol", "1e-4"],
            Some("1e-6"),
        )
        .unwrap();
        assert_eq!((c.quadrature.abs_tol, c.quadrature.rel_tol), (1e-4, 1e-6));
        assert!(parse_cli_with_env(["integ", "--function", "t", "--from", "0", "--to", "1"], Some("zero")).is_err());
    }

    #[test]
    fn help_is_not_an_error_exit() {
        let err = parse_cli_with_env(["deriv", "--help"], None).unwrap_err();
        assert_eq!(err.exit_code(), 0);
    }

    #[test]
    fn conjugate_exponent_defaults() {
        let c = parse_ok(&[
            "inequality", "--theorem", "product", "--function", "exp(t)", "--x0", "1", "--at", "2", "--r", "4",
        ]);
        let CommandConfig::Inequality { r, s, .. } = c.command else { panic!() };
        assert_eq!((r, s), (Some(4.0), Some(4.0 / 3.0)));
    }
}
