//! The correction `f(L_prin)` entering the covariant subprincipal symbol,
//! and the three-slot Poisson bracket it is defined by.

use crate::error::Result;
use crate::fieldlang::Point4;
use crate::geometry::{metric_from_frame, PauliFields, PointGeometry, SigmaJet};
use crate::linalg::{contract, scale, Mat2, Mat4, C64};

/// `{F,G,H} = F_{x^μ} G H_{p_μ} − F_{p_μ} G H_{x^μ}` for symbols linear in
/// `p`, given as jets of their coefficients `F = F^α p_α`.
pub fn poisson3(f: &SigmaJet, g: &SigmaJet, h: &SigmaJet, p: &[f64; 4]) -> Mat2 {
    let gp = contract(&g.sigma, p);
    let mut out = Mat2::zeros();
    for mu in 0..4 {
        let fx = contract(&f.dsigma[mu], p);
        let hx = contract(&h.dsigma[mu], p);
        out += fx * gp * h.sigma[mu] - f.sigma[mu] * gp * hx;
    }
    out
}

/// `{L_prin, adj L_prin, L_prin}` at `(x, p)` with exact x-derivatives.
pub fn poisson3_at(sigma: &PauliFields, x: &Point4, p: &[f64; 4]) -> Result<Mat2> {
    let jet = sigma.jet(x)?;
    Ok(poisson3(&jet, &jet.adjugate(), &jet, p))
}

/// Same bracket with finite-difference x-derivatives.
pub fn poisson3_fd_at(sigma: &PauliFields, x: &Point4, p: &[f64; 4]) -> Result<Mat2> {
    let jet = sigma.fd_jet(x)?;
    Ok(poisson3(&jet, &jet.adjugate(), &jet, p))
}

/// `−(i/16) g_{αβ} {L_prin, adj L_prin, L_prin}_{p_α p_β}`.
///
/// The bracket is cubic in `p`, so its Hessian is the finite sum
/// `M^{ab} + M^{ba}` with
/// `M^{ab} = Σ_μ (∂_μF^a G^b H^μ − F^μ G^a ∂_μH^b)`; no differentiation in
/// `p` is performed.
pub fn f_from_bracket(jet: &SigmaJet, g_cov: &Mat4) -> Mat2 {
    let adj = jet.adjugate();
    let (f, g, h) = (jet, &adj, jet);
    let mut m = [[Mat2::zeros(); 4]; 4];
    for (a, row) in m.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            for mu in 0..4 {
                *entry += f.dsigma[mu][a] * g.sigma[b] * h.sigma[mu] - f.sigma[mu] * g.sigma[a] * h.dsigma[mu][b];
            }
        }
    }
    let mut total = Mat2::zeros();
    for a in 0..4 {
        for b in 0..4 {
            total += (m[a][b] + m[b][a]) * C64::new(g_cov[(a, b)], 0.0);
        }
    }
    scale(&total, C64::new(0.0, -1.0 / 16.0))
}

/// `f` from the reduced Pauli-matrix expression
/// `−(i/8) [(σ^α)_{x^γ} σ̃_α σ^γ − σ^γ σ̃_α (σ^α)_{x^γ}]`.
pub fn f_reduced(geom: &PointGeometry) -> Mat2 {
    let s = geom.sigma();
    let ds = geom.dsigma();
    let tl = &geom.sigma_tilde_lower;
    let mut total = Mat2::zeros();
    for a in 0..4 {
        for c in 0..4 {
            total += ds[c][a] * tl[a] * s[c] - s[c] * tl[a] * ds[c][a];
        }
    }
    scale(&total, C64::new(0.0, -0.125))
}

/// `f(L_prin)` at `x`; exactly zero when the symbol does not depend on `x`.
pub fn f_at(sigma: &PauliFields, x: &Point4) -> Result<Mat2> {
    if sigma.is_constant() {
        return Ok(Mat2::zeros());
    }
    Ok(f_reduced(&PointGeometry::new(sigma.jet(x)?, x)?))
}

/// Oracle for [`f_at`]: bracket Hessian contraction with finite-difference
/// x-derivatives and the metric taken from the frame.
pub fn f_fd_at(sigma: &PauliFields, x: &Point4) -> Result<Mat2> {
    let jet = sigma.fd_jet(x)?;
    let frame = crate::geometry::checked_frame(&jet.sigma, x)?;
    let g_cov = metric_from_frame(&frame.e)
        .try_inverse()
        .ok_or_else(|| crate::error::Error::Singular("metric".into()))?;
    Ok(f_from_bracket(&jet, &g_cov))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldlang::parse_scalar_expr;
    use crate::linalg::{hermiticity_residual, norm2, standard_basis, MatrixField2};

    fn conformal() -> PauliFields {
        let w = parse_scalar_expr("exp(2*(0.3*x1 + 0.2*sin(x2 + x4)))").unwrap();
        PauliFields::new(std::array::from_fn(|a| MatrixField2::constant(&standard_basis(a)).scale(&w)))
    }

    fn sheared() -> PauliFields {
        let r = MatrixField2::parse(&[["1 + 0.3*x1", "0.3*i*x1"], ["0.3*i*x1", "1 - 0.3*x1"]]).unwrap();
        let s = PauliFields::new(std::array::from_fn(|a| MatrixField2::constant(&standard_basis(a))));
        s.conjugated(&r)
    }

    #[test]
    fn constant_symbol_has_zero_bracket_and_f() {
        let s = PauliFields::new(std::array::from_fn(|a| MatrixField2::constant(&standard_basis(a))));
        let x = [0.1, 0.2, -0.3, 0.0];
        assert_eq!(f_at(&s, &x).unwrap(), Mat2::zeros());
        assert_eq!(poisson3_at(&s, &x, &[1.0, 2.0, 3.0, 4.0]).unwrap(), Mat2::zeros());
    }

    #[test]
    fn reduced_form_matches_bracket_hessian() {
        let x = [0.2, -0.1, 0.3, 0.15];
        for s in [conformal(), sheared()] {
            let geom = PointGeometry::new(s.jet(&x).unwrap(), &x).unwrap();
            let exact = f_from_bracket(&geom.jet, &geom.metric.g_cov);
            let reduced = f_reduced(&geom);
            assert!(norm2(&(exact - reduced)) < 1e-13);
            let fd = f_fd_at(&s, &x).unwrap();
            assert!(norm2(&(fd - reduced)) < 1e-7);
        }
    }

    #[test]
    fn f_is_hermitian_and_vanishes_under_conformal_scaling() {
        let x = [0.2, -0.1, 0.3, 0.15];
        let f = f_at(&conformal(), &x).unwrap();
        assert!(hermiticity_residual(&f) < 1e-12);
        assert!(norm2(&f) < 1e-12);
        let g = f_at(&sheared(), &x).unwrap();
        assert!(hermiticity_residual(&g) < 1e-12);
        assert!(norm2(&g) > 1e-3);
    }

    #[test]
    fn bracket_agrees_with_finite_differences() {
        let x = [0.2, -0.1, 0.3, 0.15];
        let p = [0.4, -0.7, 0.2, 1.0];
        let s = conformal();
        let a = poisson3_at(&s, &x, &p).unwrap();
        let b = poisson3_fd_at(&s, &x, &p).unwrap();
        assert!(norm2(&(a - b)) < 1e-7);
    }
}
