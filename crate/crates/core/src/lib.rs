//! Numeric and symbolic toolkit for the truncated V-fractional derivative,
//! the V-fractional integral, fractional Taylor expansions with integral
//! remainder, and the Hölder-type remainder inequalities built on them.
//!
//! ```
//! use vfrac_core::{expr::parse, kernel::RawParams, vcalc};
//!
//! let params = RawParams::unit(0.5).validate().unwrap();
//! let f = parse("t^2").unwrap();
//! // λ · t^(1-α) · f'(t) with λ = 1
//! let d = vcalc::vderiv_closed(&f, &params, 4.0).unwrap();
//! assert!((d - 16.0).abs() < 1e-12);
//! ```

pub mod bounds;
pub mod error;
pub mod expr;
pub mod kernel;
pub mod taylor;
pub mod vcalc;

pub use error::{Error, Result};
pub use expr::{Expr, ExprError};
pub use kernel::{Constants, ParamSet, RawParams};
