//! Property tests over randomly generated expressions and operators.

use proptest::prelude::*;

use opgeom::fieldlang::{
    default_step, numeric_partial, parse_scalar_expr, symbolic_partial, symbolically_equal, Func, ScalarFieldExpr,
};
use opgeom::linalg::MatrixField2;
use opgeom::operator::RawOperator;

type E = ScalarFieldExpr;

fn real_leaf() -> BoxedStrategy<E> {
    prop_oneof![(0usize..4).prop_map(E::var), (-20i32..=20).prop_map(|k| E::real(f64::from(k) / 4.0))].boxed()
}

fn leaf() -> BoxedStrategy<E> {
    prop_oneof![3 => real_leaf(), 1 => Just(E::imag_unit())].boxed()
}

/// Arbitrary trees over the whole grammar.
fn any_expr() -> impl Strategy<Value = E> {
    leaf().prop_recursive(5, 48, 2, |inner| {
        let funcs = prop_oneof![
            Just(Func::Sin),
            Just(Func::Cos),
            Just(Func::Exp),
            Just(Func::Ln),
            Just(Func::Sqrt)
        ];
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / b),
            inner.clone().prop_map(|a| -a),
            (inner.clone(), -3i32..=4).prop_map(|(a, n)| E::pow(a, n)),
            (funcs, inner).prop_map(|(f, a)| E::call(f, a)),
        ]
    })
}

/// Smooth, bounded trees: the analytic functions applied to small arguments
/// and divisions only by quantities bounded away from zero.
fn smooth_expr() -> BoxedStrategy<E> {
    smooth_over(leaf())
}

fn smooth_over(leaves: BoxedStrategy<E>) -> BoxedStrategy<E> {
    leaves.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| a / (E::real(3.0) + E::call(Func::Sin, b))),
            (inner.clone(), 0i32..=3).prop_map(|(a, n)| E::pow(a, n)),
            inner.clone().prop_map(|a| E::call(Func::Sin, a)),
            inner.clone().prop_map(|a| E::call(Func::Cos, a)),
            inner.prop_map(|a| E::call(Func::Exp, E::real(0.25) * E::call(Func::Sin, a))),
        ]
    })
    .boxed()
}

fn point() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-0.5f64..0.5)
}

fn matrix(s: BoxedStrategy<E>) -> impl Strategy<Value = MatrixField2> {
    prop::array::uniform2(prop::array::uniform2(s)).prop_map(MatrixField2::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printing_round_trips(e in any_expr()) {
        let text = e.to_string();
        let back = parse_scalar_expr(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn folding_is_idempotent(e in any_expr()) {
        let once = e.fold();
        prop_assert_eq!(once.fold(), once);
    }

    #[test]
    fn exact_derivatives_match_finite_differences(e in smooth_expr(), x in point(), a in 0usize..4) {
        // Nested analytic functions of complex constants can overflow; the
        // oracle is only meaningful for moderately sized values.
        let (Ok(value), Ok(exact)) = (e.eval(&x), symbolic_partial(&e, a).eval(&x)) else {
            return Err(TestCaseError::reject("not finite"));
        };
        prop_assume!(value.norm() < 1e6 && exact.norm() < 1e6);
        let fd = numeric_partial(&e, &x, a, default_step(&x, a)).unwrap();
        prop_assert!((exact - fd).norm() <= 1e-6 * (1.0 + exact.norm()), "{} at {:?}: {} vs {}", e, x, exact, fd);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn double_formal_adjoint_is_symbolically_the_identity(
        p in prop::array::uniform4(matrix(smooth_expr())),
        q in matrix(smooth_expr()),
        log_rho in smooth_over(real_leaf()),
    ) {
        // ρ must be real and positive for the adjoint to be an involution.
        let rho = E::call(Func::Exp, log_rho);
        let op = RawOperator::new(p, q, rho);
        let twice = op.formal_adjoint().formal_adjoint();
        for a in 0..4 {
            for (u, v) in twice.p()[a].entries.iter().flatten().zip(op.p()[a].entries.iter().flatten()) {
                prop_assert!(symbolically_equal(u, v), "P^{}: {} vs {}", a, u, v);
            }
        }
        for (u, v) in twice.q().symbolic.entries.iter().flatten().zip(op.q().symbolic.entries.iter().flatten()) {
            prop_assert!(symbolically_equal(u, v), "Q: {} vs {}", u, v);
        }
    }
}
