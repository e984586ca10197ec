use std::sync::Arc;

use crate::error::Result;
use crate::fieldlang::{default_step, richardson, FieldError, Point4};
use crate::fieldlang::ScalarFieldExpr;
use crate::linalg::{adj, Mat2, MatrixField2, C64};

/// The four Pauli matrix-functions `σ^α(x)` together with their exact first
/// partial derivatives.
#[derive(Debug, Clone)]
pub struct PauliFields {
    sigma: Arc<[MatrixField2; 4]>,
    // dsigma[γ][α] = ∂σ^α/∂x^γ
    dsigma: Arc<[[MatrixField2; 4]; 4]>,
    constant: bool,
}

/// Values of `σ^α` and `∂_γ σ^α` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaJet {
    pub sigma: [Mat2; 4],
    /// `dsigma[γ][α] = ∂σ^α/∂x^γ`
    pub dsigma: [[Mat2; 4]; 4],
}

impl SigmaJet {
    pub fn constant(sigma: [Mat2; 4]) -> Self {
        SigmaJet {
            sigma,
            dsigma: [[Mat2::zeros(); 4]; 4],
        }
    }

    /// Jet of the adjugate Pauli matrices; adjugation commutes with `∂`.
    pub fn adjugate(&self) -> Self {
        SigmaJet {
            sigma: self.sigma.map(|m| adj(&m)),
            dsigma: self.dsigma.map(|row| row.map(|m| adj(&m))),
        }
    }
}

impl PauliFields {
    pub fn new(sigma: [MatrixField2; 4]) -> Self {
        let dsigma: [[MatrixField2; 4]; 4] = std::array::from_fn(|g| std::array::from_fn(|a| sigma[a].partial(g)));
        let constant = dsigma.iter().flatten().all(|m| m.is_zero());
        PauliFields {
            sigma: Arc::new(sigma),
            dsigma: Arc::new(dsigma),
            constant,
        }
    }

    pub fn fields(&self) -> &[MatrixField2; 4] {
        &self.sigma
    }

    pub fn derivative_fields(&self) -> &[[MatrixField2; 4]; 4] {
        &self.dsigma
    }

    /// True when every `∂_γ σ^α` folds to zero, i.e. the symbol does not
    /// depend on the position.
    pub fn is_constant(&self) -> bool {
        self.constant
    }

    pub fn adjugate(&self) -> Self {
        PauliFields::new(std::array::from_fn(|a| self.sigma[a].adj()))
    }

    /// `σ^α ↦ G* σ^α G`.
    pub fn conjugated(&self, g: &MatrixField2) -> Self {
        let gs = g.adjoint();
        PauliFields::new(std::array::from_fn(|a| gs.mul(&self.sigma[a]).mul(g)))
    }

    /// Symbolic frame `e_j^α` as `[j][α]`. Real and imaginary parts are taken
    /// through the structural conjugate, which is the complex conjugate on real
    /// coordinates.
    pub fn frame_fields(&self) -> [[ScalarFieldExpr; 4]; 4] {
        let half = ScalarFieldExpr::real(0.5);
        let half_over_i = ScalarFieldExpr::constant(C64::new(0.0, -0.5));
        std::array::from_fn(|j| {
            std::array::from_fn(|a| {
                let e = &self.sigma[a].entries;
                match j {
                    0 => half.clone() * (e[1][0].clone() + e[1][0].conj()),
                    1 => half_over_i.clone() * (e[1][0].clone() - e[1][0].conj()),
                    2 => half.clone() * (e[0][0].clone() - e[1][1].clone()),
                    _ => half.clone() * (e[0][0].clone() + e[1][1].clone()),
                }
            })
        })
    }

    /// `det e_j^α` as a symbolic field (Laplace expansion).
    pub fn frame_determinant_field(&self) -> ScalarFieldExpr {
        fn det(m: &[Vec<ScalarFieldExpr>]) -> ScalarFieldExpr {
            if m.len() == 1 {
                return m[0][0].clone();
            }
            let mut total = ScalarFieldExpr::zero();
            for c in 0..m.len() {
                let minor: Vec<Vec<ScalarFieldExpr>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = m[0][c].clone() * det(&minor);
                total = if c % 2 == 0 { total + term } else { total - term };
            }
            total
        }
        let rows: Vec<Vec<ScalarFieldExpr>> = self.frame_fields().iter().map(|r| r.to_vec()).collect();
        det(&rows)
    }

    pub fn sigma_at(&self, x: &Point4) -> Result<[Mat2; 4]> {
        let mut out = [Mat2::zeros(); 4];
        for (a, m) in self.sigma.iter().enumerate() {
            out[a] = m.eval(x)?;
        }
        Ok(out)
    }

    /// Symbolic jet.
    pub fn jet(&self, x: &Point4) -> Result<SigmaJet> {
        let sigma = self.sigma_at(x)?;
        let mut dsigma = [[Mat2::zeros(); 4]; 4];
        if !self.constant {
            for g in 0..4 {
                for a in 0..4 {
                    dsigma[g][a] = self.dsigma[g][a].eval(x)?;
                }
            }
        }
        Ok(SigmaJet { sigma, dsigma })
    }

    /// Finite-difference jet; shares no code with the symbolic derivative.
    pub fn fd_jet(&self, x: &Point4) -> Result<SigmaJet> {
        let sigma = self.sigma_at(x)?;
        let mut dsigma = [[Mat2::zeros(); 4]; 4];
        for (g, row) in dsigma.iter_mut().enumerate() {
            *row = richardson(
                |p| -> std::result::Result<[Mat2; 4], FieldError> {
                    let mut v = [Mat2::zeros(); 4];
                    for a in 0..4 {
                        v[a] = self.sigma[a].eval(p)?;
                    }
                    Ok(v)
                },
                x,
                g,
                default_step(x, g),
            )?;
        }
        Ok(SigmaJet { sigma, dsigma })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldlang::parse_scalar_expr;
    use crate::geometry::frame_of;

    #[test]
    fn symbolic_frame_matches_numeric_decomposition() {
        let r = MatrixField2::parse(&[["1 + 0.3*x1", "0.3*i*x1 + x2"], ["0.3*i*x1", "1 - 0.3*x1"]]).unwrap();
        let w = parse_scalar_expr("exp(0.2*x3)").unwrap();
        let base = PauliFields::new(std::array::from_fn(|a| MatrixField2::constant(&crate::linalg::standard_basis(a)).scale(&w)));
        let s = base.conjugated(&r);
        let x = [0.3, -0.2, 0.4, 0.1];
        let e = frame_of(&s.sigma_at(&x).unwrap()).e;
        let fields = s.frame_fields();
        for j in 0..4 {
            for a in 0..4 {
                let v = fields[j][a].eval(&x).unwrap();
                assert!((v.re - e[(j, a)]).abs() < 1e-14 && v.im.abs() < 1e-14);
            }
        }
        let d = s.frame_determinant_field().eval(&x).unwrap();
        assert!((d.re - e.determinant()).abs() < 1e-12 * e.determinant().abs());
    }
}
