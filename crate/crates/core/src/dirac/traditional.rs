//! The Dirac operator in geometric form: spin connection, full symbols,
//! and the comparison with the operator built from `L`.

use crate::error::Result;
use crate::fieldlang::{symbolic_partial, Func, Point4, ScalarFieldExpr};
use crate::gauge::extract_a_at;
use crate::geometry::{christoffel_fd_at, metric_at, PauliFields, PointGeometry, SigmaJet};
use crate::linalg::{block4, metric_spinor, norm2, norm4c, scale, scale_real, Mat2, Mat4c, C64, I, ZERO};

use super::DiracOperator;

/// Connection coefficients of the spinor covariant derivatives
/// `∇_α ξ = ξ_{x^α} + ω_α ξ` and `∇̃_α η = η_{x^α} + ω̃_α η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinConnection {
    /// `ω_α = −¼ σ̃_β [(σ^β)_{x^α} + Γ^β_{αγ} σ^γ]`
    pub omega: [Mat2; 4],
    /// `ω̃_α = −¼ σ_β [(σ̃^β)_{x^α} + Γ^β_{αγ} σ̃^γ]`
    pub omega_tilde: [Mat2; 4],
}

fn connection_of(geom: &PointGeometry) -> [Mat2; 4] {
    let cov = geom.covariant_sigma_derivative();
    std::array::from_fn(|a| {
        let s = (0..4).fold(Mat2::zeros(), |acc, b| acc + geom.sigma_tilde_lower[b] * cov[a][b]);
        scale_real(&s, -0.25)
    })
}

impl SpinConnection {
    pub fn from_geometry(geom: &PointGeometry, adjugate: &PointGeometry) -> Self {
        SpinConnection {
            omega: connection_of(geom),
            omega_tilde: connection_of(adjugate),
        }
    }

    /// `max_α ‖ω̃_α − ε conj(ω_α) ε⁻¹‖`: the dotted derivative is the
    /// undotted one seen through `η = ε ξ̄`.
    pub fn dotted_consistency_residual(&self) -> f64 {
        let eps = metric_spinor();
        let eps_inv = -eps;
        (0..4)
            .map(|a| norm2(&(self.omega_tilde[a] - eps * self.omega[a].map(|z| z.conj()) * eps_inv)))
            .fold(0.0, f64::max)
    }

    pub fn max_difference(&self, other: &SpinConnection) -> f64 {
        (0..4)
            .map(|a| norm2(&(self.omega[a] - other.omega[a])).max(norm2(&(self.omega_tilde[a] - other.omega_tilde[a]))))
            .fold(0.0, f64::max)
    }
}

pub fn spin_connection_at(sigma: &PauliFields, x: &Point4) -> Result<SpinConnection> {
    let geom = PointGeometry::new(sigma.jet(x)?, x)?;
    let adjugate = geom.adjugate()?;
    Ok(SpinConnection::from_geometry(&geom, &adjugate))
}

/// Oracle for [`spin_connection_at`]: finite-difference `σ` derivatives and
/// Christoffel symbols from finite differences of `g_{αβ}`.
pub fn spin_connection_fd_at(sigma: &PauliFields, x: &Point4) -> Result<SpinConnection> {
    let jet = sigma.fd_jet(x)?;
    let gamma = christoffel_fd_at(sigma, x)?.gamma;
    let g_cov = metric_at(sigma, x)?.g_cov;
    let build = |jet: &SigmaJet| -> [Mat2; 4] {
        let lowered_tilde = crate::geometry::lower_index(&g_cov, &jet.sigma.map(|m| crate::linalg::adj(&m)));
        std::array::from_fn(|a| {
            let mut total = Mat2::zeros();
            for b in 0..4 {
                let mut d = jet.dsigma[a][b];
                for c in 0..4 {
                    d += scale_real(&jet.sigma[c], gamma[b][a][c]);
                }
                total += lowered_tilde[b] * d;
            }
            scale_real(&total, -0.25)
        })
    };
    Ok(SpinConnection {
        omega: build(&jet),
        omega_tilde: build(&jet.adjugate()),
    })
}

/// One diagonal block of `|det g|^{1/4} D_trad |det g|^{-1/4}`:
/// `σ^α p_α + (i/4) σ^α (ln|det g|)_{x^α} − i σ^α ω_α + σ^α A_α`.
fn traditional_block(sigma: &[Mat2; 4], omega: &[Mat2; 4], dln_g: &[f64; 4], a: &[f64; 4], p: &[f64; 4]) -> Mat2 {
    let mut m = Mat2::zeros();
    for k in 0..4 {
        m += scale_real(&sigma[k], p[k] + a[k]);
        m += scale(&sigma[k], I * (0.25 * dln_g[k]));
        m -= scale(&(sigma[k] * omega[k]), I);
    }
    m
}

/// Full symbol of `|det g|^{1/4} D_trad |det g|^{-1/4}` at `(x, p)`, where
/// `D_trad` has diagonal blocks `σ^α(−i∇ + A)_α`, `σ̃^α(−i∇̃ + A)_α` and
/// off-diagonal blocks `mI`.
pub fn traditional_dirac_full_symbol(sigma: &PauliFields, a: &[f64; 4], m: f64, x: &Point4, p: &[f64; 4]) -> Result<Mat4c> {
    let geom = PointGeometry::new(sigma.jet(x)?, x)?;
    let adjugate = geom.adjugate()?;
    let conn = SpinConnection::from_geometry(&geom, &adjugate);
    let top = traditional_block(geom.sigma(), &conn.omega, &geom.dln_abs_det_g, a, p);
    let bottom = traditional_block(&geom.sigma_tilde, &conn.omega_tilde, &geom.dln_abs_det_g, a, p);
    let mass = scale_real(&Mat2::identity(), m);
    Ok(block4(&top, &mass, &mass, &bottom))
}

/// Full symbol of `ρ^{1/2} D ρ^{-1/2}`.
pub fn density_conjugated_symbol(d: &DiracOperator, x: &Point4, p: &[f64; 4]) -> Result<Mat4c> {
    let dl = d.l.dln_rho_at(x)?;
    let block = |op: &crate::operator::RawOperator| -> Result<Mat2> {
        let (coeff, _) = op.coefficients_at(x)?;
        let mut m = op.full_symbol(x, p)?;
        for k in 0..4 {
            m -= scale(&coeff[k], dl[k] * 0.5);
        }
        Ok(m)
    };
    let mass = scale_real(&Mat2::identity(), d.mass);
    Ok(block4(&block(&d.l)?, &mass, &mass, &block(&d.adj_l)?))
}

/// `‖ρ^{1/2} D ρ^{-1/2} − |det g|^{1/4} D_trad |det g|^{-1/4}‖` at the
/// full-symbol level. The potential on the geometric side is extracted from
/// `L` unless `potential` overrides it.
pub fn dirac_equivalence_residual(d: &DiracOperator, x: &Point4, p: &[f64; 4], potential: Option<[f64; 4]>) -> Result<f64> {
    let a = match potential {
        Some(a) => a,
        None => extract_a_at(&d.l, x)?.a,
    };
    let lhs = density_conjugated_symbol(d, x, p)?;
    let rhs = traditional_dirac_full_symbol(d.l.pauli(), &a, d.mass, x, p)?;
    Ok(norm4c(&(lhs - rhs)))
}

/// Residual of
/// `(σ^α)_{x^γ} σ̃_α σ^γ − σ^γ σ̃_α (σ^α)_{x^γ}
///   = −2 (2 I δ^α_β + σ^α σ̃_β) [(σ^β)_{x^α} + Γ^β_{αγ} σ^γ]`
/// in the coordinates at hand.
pub fn covariant_derivative_identity_residual(geom: &PointGeometry) -> f64 {
    let s = geom.sigma();
    let ds = geom.dsigma();
    let tl = &geom.sigma_tilde_lower;
    let cov = geom.covariant_sigma_derivative();
    let mut lhs = Mat2::zeros();
    let mut rhs = Mat2::zeros();
    for a in 0..4 {
        for c in 0..4 {
            lhs += ds[c][a] * tl[a] * s[c] - s[c] * tl[a] * ds[c][a];
        }
        for b in 0..4 {
            let mut k = s[a] * tl[b];
            if a == b {
                k += scale_real(&Mat2::identity(), 2.0);
            }
            rhs += k * cov[a][b];
        }
    }
    norm2(&(lhs + scale_real(&rhs, 2.0)))
}

pub fn covariant_derivative_identity_residual_at(sigma: &PauliFields, x: &Point4) -> Result<f64> {
    Ok(covariant_derivative_identity_residual(&PointGeometry::new(sigma.jet(x)?, x)?))
}

/// `|det g_{αβ}|^{1/4} ρ^{-1/2} = |det e|^{-1/2} ρ^{-1/2}` as a symbolic field.
pub fn bispinor_factor_field(sigma: &PauliFields, rho: &ScalarFieldExpr) -> ScalarFieldExpr {
    let det = sigma.frame_determinant_field();
    let ln = |e: ScalarFieldExpr| ScalarFieldExpr::call(Func::Ln, e);
    let exponent = ScalarFieldExpr::real(-0.25) * ln(det.clone() * det) - ScalarFieldExpr::real(0.5) * ln(rho.clone());
    ScalarFieldExpr::call(Func::Exp, exponent)
}

/// `|det g_{αβ}|^{1/4} ρ^{-1/2}` at `x`, from the numeric frame.
pub fn bispinor_factor_at(d: &DiracOperator, x: &Point4) -> Result<f64> {
    let det = crate::geometry::frame_at(d.l.pauli(), x)?.det();
    Ok(det.abs().powf(-0.5) / d.l.rho().eval(x)?.re.sqrt())
}

/// `(D_trad ψ)(x)` from the value and first derivatives of a bispinor.
pub fn apply_traditional(
    sigma: &PauliFields,
    a: &[f64; 4],
    m: f64,
    x: &Point4,
    psi: &[C64; 4],
    dpsi: &[[C64; 4]; 4],
) -> Result<[C64; 4]> {
    let geom = PointGeometry::new(sigma.jet(x)?, x)?;
    let adjugate = geom.adjugate()?;
    let conn = SpinConnection::from_geometry(&geom, &adjugate);
    let half = |v: &[C64; 4], hi: bool| -> [C64; 2] {
        if hi {
            [v[2], v[3]]
        } else {
            [v[0], v[1]]
        }
    };
    let block = |pauli: &[Mat2; 4], omega: &[Mat2; 4], hi: bool| -> [C64; 2] {
        let xi = half(psi, hi);
        let mut out = [ZERO; 2];
        for k in 0..4 {
            let d = half(&dpsi[k], hi);
            for r in 0..2 {
                let mut nabla = [ZERO; 2];
                for c in 0..2 {
                    nabla[c] = d[c] + omega[k][(c, 0)] * xi[0] + omega[k][(c, 1)] * xi[1];
                }
                for c in 0..2 {
                    out[r] += pauli[k][(r, c)] * (-I * nabla[c] + xi[c] * a[k]);
                }
            }
        }
        out
    };
    let top = block(geom.sigma(), &conn.omega, false);
    let bottom = block(&geom.sigma_tilde, &conn.omega_tilde, true);
    Ok([top[0] + psi[2] * m, top[1] + psi[3] * m, bottom[0] + psi[0] * m, bottom[1] + psi[1] * m])
}

/// `‖(D v)(x) − ρ^{-1/2}|det g|^{1/4} (D_trad ψ)(x)‖` with
/// `v = |det g|^{1/4} ρ^{-1/2} ψ`. The left side applies `D` to the symbolic
/// field `v`; the right side applies the geometric operator to `ψ`.
pub fn bispinor_residual(d: &DiracOperator, psi: &[ScalarFieldExpr; 4], x: &Point4) -> Result<f64> {
    BispinorProbe::new(d, psi).residual(d, x)
}

/// A test bispinor `ψ` together with `v = cψ` and the exact first
/// derivatives of both, differentiated once and reused across points.
#[derive(Debug, Clone)]
pub struct BispinorProbe {
    psi: [ScalarFieldExpr; 4],
    dpsi: [[ScalarFieldExpr; 4]; 4],
    v: [ScalarFieldExpr; 4],
    dv: [[ScalarFieldExpr; 4]; 4],
}

impl BispinorProbe {
    pub fn new(d: &DiracOperator, psi: &[ScalarFieldExpr; 4]) -> Self {
        let c = bispinor_factor_field(d.l.pauli(), d.l.rho());
        let v: [ScalarFieldExpr; 4] = std::array::from_fn(|k| c.clone() * psi[k].clone());
        let grad = |f: &[ScalarFieldExpr; 4]| -> [[ScalarFieldExpr; 4]; 4] {
            std::array::from_fn(|a| std::array::from_fn(|k| symbolic_partial(&f[k], a)))
        };
        BispinorProbe {
            dpsi: grad(psi),
            dv: grad(&v),
            psi: psi.clone(),
            v,
        }
    }

    /// Residual at `x` for the operator `d`, which must share the principal
    /// symbol and density the probe was built with.
    pub fn residual(&self, d: &DiracOperator, x: &Point4) -> Result<f64> {
        let eval = |f: &[ScalarFieldExpr; 4], df: &[[ScalarFieldExpr; 4]; 4]| -> Result<([C64; 4], [[C64; 4]; 4])> {
            let mut value = [ZERO; 4];
            let mut dvalue = [[ZERO; 4]; 4];
            for k in 0..4 {
                value[k] = f[k].eval(x)?;
                for a in 0..4 {
                    dvalue[a][k] = df[a][k].eval(x)?;
                }
            }
            Ok((value, dvalue))
        };
        let (v, dv) = eval(&self.v, &self.dv)?;
        let lhs = d.apply_jet(x, &v, &dv)?;
        let (psi, dpsi) = eval(&self.psi, &self.dpsi)?;
        let a = extract_a_at(&d.l, x)?.a;
        let trad = apply_traditional(d.l.pauli(), &a, d.mass, x, &psi, &dpsi)?;
        let factor = bispinor_factor_at(d, x)?;
        Ok((0..4).map(|k| (lhs[k] - trad[k] * factor).norm_sqr()).sum::<f64>().sqrt())
    }
}
