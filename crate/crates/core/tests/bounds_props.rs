mod common;

use proptest::prelude::*;
use vfrac_core::bounds::{
    holder_check, remainder_corollary_bound, remainder_product_bound, remainder_supnorm_bound,
    sup_norm, Direction, DEFAULT_GRID,
};
use vfrac_core::vcalc::QuadratureConfig;

use common::{catalog_expr, param_set};

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn conjugate() -> impl Strategy<Value = (f64, f64)> {
    (1.1f64..6.0).prop_map(|r| (r, r / (r - 1.0)))
}

fn placement() -> impl Strategy<Value = (f64, f64, Direction)> {
    (0.3f64..2.5, 0.05f64..1.5, prop::sample::select(vec![
        Direction::Forward,
        Direction::Backward,
        Direction::Absolute,
    ]), any::<bool>())
        .prop_map(|(x0, len, dir, right)| {
            let t = match dir {
                Direction::Forward => x0 + len,
                Direction::Backward => (x0 - len).max(0.05),
                Direction::Absolute if right => x0 + len,
                Direction::Absolute => (x0 - len).max(0.05),
            };
            (x0, t, dir)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn holder_holds(f in catalog_expr(), g in catalog_expr(), (r, s) in conjugate(),
                    params in param_set(), a in 0.2f64..1.5, len in 0.0f64..1.5) {
        let rep = holder_check(&f, &g, r, s, &params, a, a + len, &cfg()).unwrap();
        prop_assert!(rep.holds, "{rep:?}");
    }

    #[test]
    fn holder_equality_case(f in catalog_expr(), (r, s) in conjugate(), params in param_set(),
                            c in 0.2f64..3.0, a in 0.2f64..1.5, len in 0.1f64..1.5) {
        // |g| = c |f|^{r-1} turns Hölder into an equality
        let fv = f.clone();
        let g = move |x: f64| Ok(c * fv.eval(x)?.abs().powf(r - 1.0));
        let rep = holder_check(&f, &g, r, s, &params, a, a + len, &cfg()).unwrap();
        prop_assert!((rep.lhs - rep.rhs).abs() <= 1e-8 * rep.rhs.abs().max(1.0), "{rep:?}");
    }

    #[test]
    fn product_bound_holds(f in catalog_expr(), params in param_set(), n in 0u32..4,
                           (r, s) in conjugate(), (x0, t, dir) in placement()) {
        let rep = remainder_product_bound(&f, &params, n, r, s, x0, t, dir, &cfg()).unwrap();
        prop_assert!(rep.holds && rep.slack >= -(1e-9 * rep.rhs + 1e-12), "{f}: {rep:?}");
    }

    #[test]
    fn corollary_bound_holds_and_matches(f in catalog_expr(), params in param_set(), n in 0u32..4,
                                         (x0, t, dir) in placement()) {
        let rep = remainder_corollary_bound(&f, &params, n, x0, t, dir, &cfg()).unwrap();
        prop_assert!(rep.holds, "{f}: {rep:?}");
        let general = remainder_product_bound(&f, &params, n, 2.0, 2.0, x0, t, dir, &cfg()).unwrap();
        prop_assert!((general.rhs - rep.rhs).abs() <= 1e-10 * rep.rhs.abs().max(1e-300));
    }

    #[test]
    fn supnorm_bound_holds(f in catalog_expr(), params in param_set(), n in 0u32..4,
                           (x0, t, dir) in placement()) {
        let rep = remainder_supnorm_bound(&f, &params, n, x0, t, dir, &cfg()).unwrap();
        prop_assert!(rep.holds, "{f}: {rep:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn sup_norm_dominates_samples(f in catalog_expr(), a in 0.2f64..1.5, len in 0.0f64..1.5,
                                  xs in prop::collection::vec(0.0f64..=1.0, 1000)) {
        let b = a + len;
        let est = sup_norm(&f, a, b, DEFAULT_GRID).unwrap();
        for u in xs {
            let x = a + u * len;
            prop_assert!(f.eval(x).unwrap().abs() <= est.value + 1e-9);
        }
    }
}
