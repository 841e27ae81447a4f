mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn triple_is_symmetric_and_linear(m in model(), a in coeffs(), b in coeffs(), c in coeffs(), a2 in coeffs(), k in -4i64..=4) {
        trilinear(&m, &a, &b, &c, &a2, k).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn point_blow_up_contracts_back(b in base(), mult in 0u32..3) {
        roundtrip_point(&b, mult).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn curve_blow_up_contracts_back(b in base(), g in 0u64..4, x in -4i64..=4, y in 0i64..=3, mult in 0u32..3) {
        roundtrip_curve(&b, g, x, y, mult).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn qq_link_twice_is_identity(h in -12i64..=12, a in -4i64..=6) {
        qq_twice(h, a).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn blow_ups_commute(b in base(), g in 0u64..4, x in -4i64..=4, y in 0i64..=3, on in any::<bool>()) {
        blnorm(&b, g, x, y, on).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn link_square_commutes(a in -4i64..=6, k in 0i64..=12, s in -6i64..=6) {
        pqqpp(5 - 3 * a - k, a, s).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn print_then_parse(e in expr(vec!["xi".into(), "F".into(), "Dh".into()])) {
        print_parse(&e).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn eval_matches_triple(m in model(), a in coeffs(), b in coeffs(), c in coeffs()) {
        eval_linearity(&m, &a, &b, &c).map_err(TestCaseError::fail)?;
    }
}
