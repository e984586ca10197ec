use num_complex::Complex64;

use super::expr::{Func, Node, Point4, ScalarFieldExpr};
use super::FieldError;

/// Exact partial derivative `∂/∂x^(alpha+1)`, folded.
pub fn symbolic_partial(expr: &ScalarFieldExpr, alpha: usize) -> ScalarFieldExpr {
    type E = ScalarFieldExpr;
    match expr.node() {
        Node::Const(_) => E::zero(),
        Node::Var(i) => E::real(if *i == alpha { 1.0 } else { 0.0 }),
        Node::Add(a, b) => E::add(symbolic_partial(a, alpha), symbolic_partial(b, alpha)),
        Node::Sub(a, b) => E::sub(symbolic_partial(a, alpha), symbolic_partial(b, alpha)),
        Node::Mul(a, b) => E::add(
            E::mul(symbolic_partial(a, alpha), b.clone()),
            E::mul(a.clone(), symbolic_partial(b, alpha)),
        ),
        Node::Div(a, b) => {
            let da = symbolic_partial(a, alpha);
            let db = symbolic_partial(b, alpha);
            if db.is_zero() {
                E::div(da, b.clone())
            } else {
                E::div(
                    E::sub(E::mul(da, b.clone()), E::mul(a.clone(), db)),
                    E::pow(b.clone(), 2),
                )
            }
        }
        Node::Pow(a, n) => E::mul(
            E::mul(E::real(f64::from(*n)), E::pow(a.clone(), n - 1)),
            symbolic_partial(a, alpha),
        ),
        Node::Neg(a) => E::neg(symbolic_partial(a, alpha)),
        Node::Call(f, a) => {
            let da = symbolic_partial(a, alpha);
            if da.is_zero() {
                return E::zero();
            }
            match f {
                Func::Sin => E::mul(E::call(Func::Cos, a.clone()), da),
                Func::Cos => E::neg(E::mul(E::call(Func::Sin, a.clone()), da)),
                Func::Exp => E::mul(expr.clone(), da),
                Func::Ln => E::div(da, a.clone()),
                Func::Sqrt => E::div(da, E::mul(E::real(2.0), expr.clone())),
            }
        }
    }
}

/// Gradient `[∂₁e, ∂₂e, ∂₃e, ∂₄e]`.
pub fn gradient(expr: &ScalarFieldExpr) -> [ScalarFieldExpr; 4] {
    std::array::from_fn(|a| symbolic_partial(expr, a))
}

/// Default step `1e-4·(1+|x^alpha|)`.
pub fn default_step(x: &Point4, alpha: usize) -> f64 {
    1e-4 * (1.0 + x[alpha].abs())
}

/// Values that a finite-difference stencil can combine.
pub trait Linear: Clone {
    fn minus(&self, other: &Self) -> Self;
    fn scaled(&self, s: f64) -> Self;
}

impl Linear for f64 {
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn scaled(&self, s: f64) -> Self {
        self * s
    }
}

impl Linear for Complex64 {
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn scaled(&self, s: f64) -> Self {
        self * s
    }
}

impl<const R: usize, const C: usize> Linear for nalgebra::SMatrix<Complex64, R, C> {
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn scaled(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }
}

impl<const R: usize, const C: usize> Linear for nalgebra::SMatrix<f64, R, C> {
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn scaled(&self, s: f64) -> Self {
        self * s
    }
}

impl<T: Linear, const N: usize> Linear for [T; N] {
    fn minus(&self, other: &Self) -> Self {
        std::array::from_fn(|k| self[k].minus(&other[k]))
    }
    fn scaled(&self, s: f64) -> Self {
        std::array::from_fn(|k| self[k].scaled(s))
    }
}

/// Central difference with one Richardson step (h, h/2) applied to an
/// arbitrary function of the chart point.
pub fn richardson<F, V, E>(f: F, x: &Point4, alpha: usize, h: f64) -> Result<V, E>
where
    F: Fn(&Point4) -> Result<V, E>,
    V: Linear,
{
    let central = |step: f64| -> Result<V, E> {
        let mut plus = *x;
        let mut minus = *x;
        plus[alpha] += step;
        minus[alpha] -= step;
        Ok(f(&plus)?.minus(&f(&minus)?).scaled(0.5 / step))
    };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    // fine + (fine - coarse)/3
    Ok(fine.scaled(4.0 / 3.0).minus(&coarse.scaled(1.0 / 3.0)))
}

/// Finite-difference oracle for `∂e/∂x^(alpha+1)` at `x`.
pub fn numeric_partial(expr: &ScalarFieldExpr, x: &Point4, alpha: usize, h: f64) -> Result<Complex64, FieldError> {
    richardson(|p| expr.eval(p), x, alpha, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldlang::parse_scalar_expr;

    fn p(s: &str) -> ScalarFieldExpr {
        parse_scalar_expr(s).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let e = p("x1^2 + sin(x4)");
        assert_eq!(symbolic_partial(&e, 0), p("2*x1"));
        assert_eq!(symbolic_partial(&e, 3), p("cos(x4)"));
        assert!(symbolic_partial(&p("3.5 + 2*i"), 1).is_zero());
    }

    #[test]
    fn numeric_partial_examples() {
        let d = numeric_partial(&p("x1^2"), &[3.0, 0.0, 0.0, 0.0], 0, 1e-3).unwrap();
        assert!((d - Complex64::new(6.0, 0.0)).norm() < 1e-9);
        let d = numeric_partial(&p("sin(x4)"), &[0.0; 4], 3, 1e-3).unwrap();
        let exact = symbolic_partial(&p("sin(x4)"), 3).eval(&[0.0; 4]).unwrap();
        assert!((d - exact).norm() < 1e-8);
        assert!((d - Complex64::new(1.0, 0.0)).norm() < 1e-8);
        let d = numeric_partial(&p("7 - 2*i"), &[0.3; 4], 2, 1e-3).unwrap();
        assert!(d.norm() < 1e-12);
    }

    #[test]
    fn quotient_and_roots() {
        let e = p("sqrt(x1)/ln(x2) + x3^-2");
        let x = [1.3, 2.1, 0.7, 0.0];
        for a in 0..4 {
            let s = symbolic_partial(&e, a).eval(&x).unwrap();
            let n = numeric_partial(&e, &x, a, default_step(&x, a)).unwrap();
            assert!((s - n).norm() <= 1e-8 * (1.0 + s.norm()), "alpha={a}: {s} vs {n}");
        }
    }

    #[test]
    fn domain_error_at_stencil() {
        let e = p("ln(x1)");
        assert!(numeric_partial(&e, &[0.0; 4], 0, 1e-3).is_err());
    }
}
