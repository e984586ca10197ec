//! Scalar field language: parsing, evaluation and differentiation of
//! complex scalar fields over the coordinates `x1..x4` of a chart.
//!
//! Derivatives come in two independent flavours: [`symbolic_partial`] builds
//! the exact derivative tree, [`numeric_partial`] is a Richardson-extrapolated
//! central difference used as an oracle.

mod chart;
mod diff;
mod expr;
mod parse;

pub use chart::{sample_covector, ChartBox};
pub use diff::{default_step, gradient, numeric_partial, richardson, symbolic_partial, Linear};
pub use expr::{Func, Node, Point4, ScalarFieldExpr};
pub use parse::parse_scalar_expr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier '{name}' at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("function '{name}' at byte {offset} takes one argument, found {found}")]
    Arity { offset: usize, name: String, found: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid chart: {0}")]
    Chart(String),
}

/// Flattens the additive structure of `e` into signed terms.
fn signed_terms(e: &ScalarFieldExpr, positive: bool, out: &mut Vec<(bool, ScalarFieldExpr)>) {
    match e.node() {
        Node::Add(a, b) => {
            signed_terms(a, positive, out);
            signed_terms(b, positive, out);
        }
        Node::Sub(a, b) => {
            signed_terms(a, positive, out);
            signed_terms(b, !positive, out);
        }
        Node::Neg(a) => signed_terms(a, !positive, out),
        _ => out.push((positive, e.clone())),
    }
}

/// Splits a product into its constant coefficient and remaining factors.
fn factors(e: &ScalarFieldExpr, coef: &mut num_complex::Complex64, out: &mut Vec<String>) {
    match e.node() {
        Node::Const(c) => *coef *= c,
        Node::Neg(a) => {
            *coef = -*coef;
            factors(a, coef, out);
        }
        Node::Mul(a, b) => {
            factors(a, coef, out);
            factors(b, coef, out);
        }
        Node::Div(a, b) if b.as_const().is_some() => {
            factors(a, coef, out);
            *coef /= b.as_const().expect("checked");
        }
        _ => out.push(e.to_string()),
    }
}

/// Equality of sums of monomials `c · Π factors`, with factors compared as
/// trees and like monomials combined.
///
/// This is not a CAS: non-constant factors must match structurally. It is
/// enough to show that identities produced by exact coefficient bookkeeping
/// (such as the double formal adjoint) close up symbolically. Combined
/// coefficients count as zero below `1e-12` times the largest contribution,
/// absorbing the rounding of constant folding in different orders.
pub fn symbolically_equal(a: &ScalarFieldExpr, b: &ScalarFieldExpr) -> bool {
    let mut terms = Vec::new();
    signed_terms(a, true, &mut terms);
    signed_terms(b, false, &mut terms);
    let mut sums: std::collections::BTreeMap<Vec<String>, (num_complex::Complex64, f64)> = Default::default();
    for (sign, t) in terms {
        let mut coef = num_complex::Complex64::new(if sign { 1.0 } else { -1.0 }, 0.0);
        let mut key = Vec::new();
        factors(&t, &mut coef, &mut key);
        key.sort();
        let entry = sums.entry(key).or_default();
        entry.0 += coef;
        entry.1 = entry.1.max(coef.norm());
    }
    sums.values().all(|(sum, scale)| sum.norm() <= 1e-12 * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_up_to_reordering() {
        let a = parse_scalar_expr("x1 - sin(x2)*x3 + 2").unwrap();
        let b = parse_scalar_expr("2 - (-x1) + sin(x2)*x3 - sin(x2)*x3 - sin(x2)*x3").unwrap();
        assert!(symbolically_equal(&a, &b));
        let c = parse_scalar_expr("x1 + sin(x2)*x3 + 2").unwrap();
        assert!(!symbolically_equal(&a, &c));
    }

    #[test]
    fn constant_factors_combine() {
        let a = parse_scalar_expr("x1*0.75*sin(x2) + cos(x3)").unwrap();
        let b = parse_scalar_expr("-(sin(x2)*(-0.5)*x1) + x1*sin(x2)/4 + cos(x3)").unwrap();
        assert!(symbolically_equal(&a, &b));
        assert!(!symbolically_equal(&a, &parse_scalar_expr("x1*0.7*sin(x2) + cos(x3)").unwrap()));
    }
}
