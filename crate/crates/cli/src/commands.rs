//! Dispatch from a [`RunConfig`] to the library.

use vfrac_core::bounds::{
    holder_check, remainder_corollary_bound, remainder_product_bound, remainder_supnorm_bound,
};
use vfrac_core::taylor::{remainder_identity_check, remainder_report, taylor_poly};
use vfrac_core::vcalc::{vderiv_closed, vderiv_limit, vderiv_n_expr, vintegral};
use vfrac_core::ParamSet;

use crate::config::{CommandConfig, DerivMethod, RunConfig, Theorem};
use crate::error::CliError;
use crate::report::{Payload, RemainderPayload, Report, Table};
use crate::verify;

/// Evaluate the configured command.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let params: ParamSet = config.params.validate()?;
    let quad = &config.quadrature;

    let payload = match &config.command {
        CommandConfig::Deriv {
            function,
            points,
            method,
            order,
        } => {
            let mut table = Table::new(["t", "value"]);
            let higher = match (method, order) {
                (DerivMethod::Closed, n) if *n != 1 => Some(vderiv_n_expr(&function.expr, &params, *n)?),
                _ => None,
            };
            for &t in points {
                let value = match (method, &higher) {
                    (DerivMethod::Limit, _) => vderiv_limit(&function.expr, &params, t)?,
                    (DerivMethod::Closed, Some(d)) => {
                        if t <= 0.0 {
                            return Err(vfrac_core::Error::Domain(format!(
                                "the derivative needs t > 0, got {t}"
                            ))
                            .into());
                        }
                        d.eval(t).map_err(vfrac_core::Error::from)?
                    }
                    (DerivMethod::Closed, None) => vderiv_closed(&function.expr, &params, t)?,
                };
                table.push(vec![t.into(), value.into()]);
            }
            Payload::Table(table)
        }
        CommandConfig::Integ { function, from, to } => {
            let (lo, hi, sign) = if from <= to { (*from, *to, 1.0) } else { (*to, *from, -1.0) };
            let r = vintegral(&function.expr, &params, lo, hi, quad)?;
            let mut table = Table::new(["from", "to", "value", "error_estimate", "evaluations"]);
            table.push(vec![
                (*from).into(),
                (*to).into(),
                (sign * r.value).into(),
                r.error_estimate.into(),
                (r.evaluations as f64).into(),
            ]);
            Payload::Table(table)
        }
        CommandConfig::Taylor {
            function,
            center,
            order,
            points,
        } => {
            let expansion = taylor_poly(&function.expr, &params, *order, *center)?;
            let mut table = Table::new(["t".to_string(), "f".into(), format!("T{order}"), "abs_error".into()]);
            for &t in points {
                let f = function.expr.eval(t).map_err(vfrac_core::Error::from)?;
                let approx = expansion.eval(t)?;
                table.push(vec![t.into(), f.into(), approx.into(), (f - approx).abs().into()]);
            }
            Payload::Table(table)
        }
        CommandConfig::Remainder {
            function,
            center,
            at,
            order,
        } => {
            let r = remainder_report(&function.expr, &params, *order, *at, *center, quad)?;
            Payload::Remainder(RemainderPayload {
                n: *order,
                center: *center,
                t: *at,
                series_value: r.series_value,
                integral_value: r.integral_value,
                integral_error_estimate: r.integral_error_estimate,
                discrepancy: r.discrepancy,
            })
        }
        CommandConfig::Identity {
            function,
            from,
            to,
            at,
            order,
        } => Payload::Identity(remainder_identity_check(
            &function.expr,
            &params,
            *order,
            *from,
            *to,
            *at,
            quad,
        )?),
        CommandConfig::Inequality {
            theorem,
            function,
            g,
            r,
            s,
            from,
            to,
            x0,
            at,
            order,
            direction,
        } => {
            let f = &function.expr;
            // parse_cli guarantees the per-theorem fields are present
            let missing = || CliError::Usage("incomplete inequality configuration".into());
            let report = match theorem {
                Theorem::Holder => holder_check(
                    f,
                    &g.as_ref().ok_or_else(missing)?.expr,
                    r.ok_or_else(missing)?,
                    s.ok_or_else(missing)?,
                    &params,
                    from.ok_or_else(missing)?,
                    to.ok_or_else(missing)?,
                    quad,
                )?,
                theorem => {
                    let (x0, t) = (x0.ok_or_else(missing)?, at.ok_or_else(missing)?);
                    let n = order.ok_or_else(missing)?;
                    let direction = direction.ok_or_else(missing)?;
                    match theorem {
                        Theorem::Product => remainder_product_bound(
                            f,
                            &params,
                            n,
                            r.ok_or_else(missing)?,
                            s.ok_or_else(missing)?,
                            x0,
                            t,
                            direction,
                            quad,
                        )?,
                        Theorem::Corollary => {
                            remainder_corollary_bound(f, &params, n, x0, t, direction, quad)?
                        }
                        _ => remainder_supnorm_bound(f, &params, n, x0, t, direction, quad)?,
                    }
                }
            };
            Payload::Inequality(report)
        }
        CommandConfig::Verify { suite, trials, seed } => {
            Payload::Verify(verify::run_suite(*suite, *trials, *seed, quad)?)
        }
    };
    Ok(Report::new(config, payload))
}
