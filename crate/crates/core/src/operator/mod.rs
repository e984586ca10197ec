//! First-order 2×2 operators in local coordinates: coefficient form, symbols,
//! formal adjoint, reconstruction from symbols, and application to fields.

mod raw;

pub use raw::{column_jet, PointFn, RawOperator, SymbolView, ZerothOrder};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fieldlang::{sample_covector, ChartBox, Point4, ScalarFieldExpr};
use crate::geometry::{frame_of, PauliFields, TOL_DEGENERATE, TOL_HERM};
use crate::linalg::{hermiticity_residual, MatrixField2};
use crate::residual::MaxResidual;

/// Builds `Op(σ, csub)`: the operator with `P^α = −i σ^α` whose covariant
/// subprincipal symbol is `csub`, i.e.
/// `Q = csub + f(σ) + ½ (P^α)_{x^α} + ½ P^α (ln ρ)_{x^α}`.
///
/// `σ` and `csub` are checked for Hermiticity and non-degeneracy at the
/// sample points of `chart`.
pub fn reconstruct(sigma: [MatrixField2; 4], csub: MatrixField2, rho: ScalarFieldExpr, chart: &ChartBox) -> Result<RawOperator> {
    reconstruct_with(sigma, ZerothOrder::symbolic(csub), rho, chart)
}

/// [`reconstruct`] for a covariant subprincipal symbol with computed parts.
pub fn reconstruct_with(sigma: [MatrixField2; 4], csub: ZerothOrder, rho: ScalarFieldExpr, chart: &ChartBox) -> Result<RawOperator> {
    let pauli = PauliFields::new(sigma);
    for x in chart.sample_points(0) {
        crate::geometry::checked_frame(&pauli.sigma_at(&x)?, &x)?;
        let c = csub.eval(&x)?;
        let r = hermiticity_residual(&c);
        if r > TOL_HERM {
            return Err(Error::NotHermitian {
                what: "covariant subprincipal symbol".into(),
                residual: r,
            });
        }
    }
    let minus_i = -ScalarFieldExpr::imag_unit();
    let p: [MatrixField2; 4] = std::array::from_fn(|a| pauli.fields()[a].scale(&minus_i));
    let half = ScalarFieldExpr::real(0.5);
    let mut correction = MatrixField2::zero();
    for a in 0..4 {
        correction = correction
            .add(&p[a].partial(a).scale(&half))
            .add(&p[a].scale(&(half.clone() * crate::fieldlang::symbolic_partial(&rho, a) / rho.clone())));
    }
    let q = if pauli.is_constant() {
        csub.plus(&correction)
    } else {
        let fields = pauli.clone();
        let f: PointFn = Arc::new(move |x: &Point4| crate::gauge::f_at(&fields, x));
        csub.plus(&correction).with_extra(f)
    };
    let op = RawOperator::new(p, q, rho);
    op.validate(chart)?;
    Ok(op)
}

/// Sampled self-adjointness diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfAdjointReport {
    /// `max ‖M − M*‖` over `M ∈ {L_prin(x,p), L_sub(x)}`.
    pub hermiticity: MaxResidual,
    /// Largest coefficient difference between `L` and its formal adjoint.
    pub adjoint_coefficients: MaxResidual,
}

impl SelfAdjointReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.hermiticity.passes(tol) && self.adjoint_coefficients.passes(tol)
    }
}

/// Hermiticity of `L_prin` and `L_sub`, and agreement of `L` with its formal
/// adjoint, at `chart.sample_count` points (five covectors each).
pub fn check_selfadjoint(op: &RawOperator, chart: &ChartBox) -> Result<SelfAdjointReport> {
    let adjoint = op.formal_adjoint();
    let mut rng = chart.rng(1);
    let mut herm = MaxResidual::new();
    let mut coeff = MaxResidual::new();
    for x in chart.sample_points(0) {
        let sub = op.subprincipal_symbol(&x)?;
        herm.record_x(hermiticity_residual(&sub), &x);
        for _ in 0..5 {
            let p = sample_covector(&mut rng);
            herm.record(hermiticity_residual(&op.principal_symbol(&x, &p)?), &x, &p);
        }
        coeff.record_x(op.coefficient_difference(&adjoint, &x)?, &x);
    }
    Ok(SelfAdjointReport {
        hermiticity: herm,
        adjoint_coefficients: coeff,
    })
}

/// Smallest `|det e_j^α|` over the sample points. Sampling cannot prove the
/// bound everywhere; the report only covers the points visited.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NondegeneracyReport {
    pub min_abs_det: f64,
    pub worst_x: Point4,
    pub samples: usize,
}

impl NondegeneracyReport {
    pub fn passes(&self) -> bool {
        self.min_abs_det >= TOL_DEGENERATE
    }
}

pub fn check_nondegenerate(op: &RawOperator, chart: &ChartBox) -> Result<NondegeneracyReport> {
    let mut report = NondegeneracyReport {
        min_abs_det: f64::INFINITY,
        worst_x: [0.0; 4],
        samples: 0,
    };
    for x in chart.sample_points(0) {
        let d = frame_of(&op.sigma_at(&x)?).det().abs();
        if d < report.min_abs_det || d.is_nan() {
            report.min_abs_det = d;
            report.worst_x = x;
        }
        report.samples += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldlang::parse_scalar_expr;
    use crate::linalg::{mat2, standard_basis, Mat2, C64, I, ONE, ZERO};

    fn e(s: &str) -> ScalarFieldExpr {
        parse_scalar_expr(s).unwrap()
    }

    fn minkowski_sigma() -> [MatrixField2; 4] {
        std::array::from_fn(|a| MatrixField2::constant(&standard_basis(a)))
    }

    fn chart(n: usize) -> ChartBox {
        ChartBox::new([-0.5; 4], [0.5; 4], 7, n).unwrap()
    }

    #[test]
    fn full_symbol_sign_bookkeeping() {
        let p_plus = std::array::from_fn(|a| MatrixField2::constant(&(standard_basis(a) * I)));
        let op = RawOperator::new(p_plus, MatrixField2::zero(), ScalarFieldExpr::one());
        let x = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(op.full_symbol(&x, &[0.0, 0.0, 0.0, 1.0]).unwrap(), -Mat2::identity());
        let p_minus = std::array::from_fn(|a| MatrixField2::constant(&(standard_basis(a) * -I)));
        let op = RawOperator::new(p_minus, MatrixField2::zero(), ScalarFieldExpr::one());
        assert_eq!(op.full_symbol(&x, &[0.0, 0.0, 0.0, 1.0]).unwrap(), Mat2::identity());
    }

    #[test]
    fn zero_covector_gives_q_and_prin_is_linear() {
        let q = MatrixField2::constant(&mat2(C64::new(5.0, 0.0), ZERO, ZERO, C64::new(7.0, 0.0)));
        let op = reconstruct(minkowski_sigma(), q, ScalarFieldExpr::one(), &chart(10)).unwrap();
        let x = [0.0; 4];
        assert_eq!(op.full_symbol(&x, &[0.0; 4]).unwrap(), op.q().eval(&x).unwrap());
        assert_eq!(op.principal_symbol(&x, &[0.0; 4]).unwrap(), Mat2::zeros());
        let p = [0.3, -0.2, 0.9, 0.1];
        let p2 = p.map(|v| 2.0 * v);
        let q0 = op.full_symbol(&x, &[0.0; 4]).unwrap();
        let lhs = op.full_symbol(&x, &p2).unwrap() - q0;
        let rhs = (op.full_symbol(&x, &p).unwrap() - q0) * C64::new(2.0, 0.0);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn subprincipal_picks_up_density_gradient() {
        let p: [MatrixField2; 4] = std::array::from_fn(|a| MatrixField2::constant(&(standard_basis(a) * -I)));
        let q = MatrixField2::constant(&mat2(ONE, ZERO, ZERO, -ONE));
        let op = RawOperator::new(p.clone(), q.clone(), e("exp(x1)"));
        let x = [0.2, -0.1, 0.3, 0.05];
        let expected = q.eval(&x).unwrap() - p[0].eval(&x).unwrap() * C64::new(0.5, 0.0);
        assert!((op.subprincipal_symbol(&x).unwrap() - expected).norm() < 1e-15);
        let adj = op.formal_adjoint();
        // Q̂ = Q* − (P¹)* because (ln ρ)_{x¹} = 1
        let expected_q = q.eval(&x).unwrap().adjoint() - p[0].eval(&x).unwrap().adjoint();
        assert!((adj.q().eval(&x).unwrap() - expected_q).norm() < 1e-15);
    }

    #[test]
    fn anti_hermitian_q_flips_subprincipal_under_adjoint() {
        let p: [MatrixField2; 4] = std::array::from_fn(|a| MatrixField2::constant(&(standard_basis(a) * -I)));
        let q = MatrixField2::constant(&mat2(I, ONE, -ONE, ZERO));
        let op = RawOperator::new(p, q, ScalarFieldExpr::one());
        let x = [0.0; 4];
        let s = op.subprincipal_symbol(&x).unwrap();
        let t = op.formal_adjoint().subprincipal_symbol(&x).unwrap();
        assert_eq!(t, -s);
    }

    #[test]
    fn apply_derivative_block() {
        let mut p: [MatrixField2; 4] = std::array::from_fn(|_| MatrixField2::zero());
        p[0] = MatrixField2::identity();
        let op = RawOperator::new(p, MatrixField2::zero(), ScalarFieldExpr::one());
        let out = op.apply(&[e("x1"), e("x1^2")], &[3.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(out, [ONE, C64::new(6.0, 0.0)]);
    }

    #[test]
    fn degenerate_symbol_rejected() {
        let mut sigma = minkowski_sigma();
        sigma[3] = MatrixField2::zero();
        let err = reconstruct(sigma, MatrixField2::zero(), ScalarFieldExpr::one(), &chart(5)).unwrap_err();
        assert!(matches!(err, Error::Degenerate { .. }));
    }

    #[test]
    fn non_positive_density_rejected() {
        let err = reconstruct(minkowski_sigma(), MatrixField2::zero(), e("x1"), &chart(20)).unwrap_err();
        assert!(matches!(err, Error::Density(_) | Error::Field(_)));
    }
}
