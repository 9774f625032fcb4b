mod common;

use proptest::prelude::*;
use vfrac_core::kernel::{
    derive_constants, gamma_fn, h_truncated, ml_truncated, pochhammer_gen, RawParams,
};

use common::{param_set, rel_err};

proptest! {
    #[test]
    fn lambda_times_mu_is_one(params in param_set()) {
        let c = derive_constants(&params).unwrap();
        prop_assert!(c.lambda > 0.0 && c.mu > 0.0);
        prop_assert!((c.lambda * c.mu - 1.0).abs() < 1e-12);
    }

    #[test]
    fn h_at_zero_is_one(params in param_set()) {
        prop_assert!((h_truncated(&params, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn truncation_is_monotone(params in param_set(), z in 0.0f64..5.0) {
        let raw = params.raw();
        let next = RawParams { trunc_i: raw.trunc_i + 1, ..raw }.validate().unwrap();
        prop_assert!(ml_truncated(&next, z).unwrap() >= ml_truncated(&params, z).unwrap());
    }

    #[test]
    fn pochhammer_step_ratio(rho in 0.1f64..5.0, q in 0.1f64..3.0, k in 0u64..40) {
        let ratio = pochhammer_gen(rho, q, k + 1).unwrap() / pochhammer_gen(rho, q, k).unwrap();
        let x = rho + q * k as f64;
        let want = gamma_fn(x + q).unwrap() / gamma_fn(x).unwrap();
        prop_assert!(rel_err(ratio, want) < 1e-10, "{ratio} vs {want}");
    }

    #[test]
    fn gamma_recurrence(x in 0.1f64..50.0) {
        let lhs = gamma_fn(x + 1.0).unwrap();
        let rhs = x * gamma_fn(x).unwrap();
        prop_assert!(rel_err(lhs, rhs) < 1e-11);
    }
}

#[test]
fn large_truncation_stays_accurate() {
    // unit parameters give Σ z^k/k!; 10^4 terms at z = 1 must reproduce e
    let p = RawParams {
        trunc_i: 10_000,
        ..RawParams::unit(0.5)
    }
    .validate()
    .unwrap();
    let v = ml_truncated(&p, 1.0).unwrap();
    assert!(rel_err(v, std::f64::consts::E) < 1e-12);
}
