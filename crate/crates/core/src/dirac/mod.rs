//! The adjugate operator, the 4×4 Dirac operator built from `L`, and its
//! comparison with the Dirac operator of Lorentzian geometry.

mod traditional;

pub use traditional::{
    apply_traditional, bispinor_factor_at, bispinor_factor_field, bispinor_residual, BispinorProbe,
    covariant_derivative_identity_residual, covariant_derivative_identity_residual_at, density_conjugated_symbol,
    dirac_equivalence_residual, spin_connection_at, spin_connection_fd_at, traditional_dirac_full_symbol,
    SpinConnection,
};

use crate::error::{Error, Result};
use crate::fieldlang::{sample_covector, ChartBox, Point4, ScalarFieldExpr};
use crate::gauge::{f_adjugation_residual, f_at, gl_transform, GaugeField};
use crate::linalg::{adj, block4, norm2, norm4c, scale_real, Mat2, Mat4c, MatrixField2, C64, I};
use crate::operator::{column_jet, reconstruct_with, RawOperator};
use crate::residual::MaxResidual;

/// `Adj L = Op(adj L_prin, adj L_csub)` with the same density.
pub fn adjugate_operator(op: &RawOperator, chart: &ChartBox) -> Result<RawOperator> {
    let sigma: [MatrixField2; 4] = std::array::from_fn(|a| op.pauli().fields()[a].adj());
    reconstruct_with(sigma, op.csub_field().adj(), op.rho().clone(), chart)
}

/// The operator `D = (L, mI; mI, Adj L)` acting on 4-columns.
#[derive(Debug, Clone)]
pub struct DiracOperator {
    pub l: RawOperator,
    pub adj_l: RawOperator,
    pub mass: f64,
}

pub fn assemble_dirac(op: &RawOperator, m: f64, chart: &ChartBox) -> Result<DiracOperator> {
    if !(m >= 0.0) {
        return Err(Error::NegativeMass(m));
    }
    Ok(DiracOperator {
        l: op.clone(),
        adj_l: adjugate_operator(op, chart)?,
        mass: m,
    })
}

impl DiracOperator {
    pub fn with_mass(&self, m: f64) -> Result<Self> {
        if !(m >= 0.0) {
            return Err(Error::NegativeMass(m));
        }
        Ok(DiracOperator { mass: m, ..self.clone() })
    }

    fn mass_block(&self) -> Mat2 {
        scale_real(&Mat2::identity(), self.mass)
    }

    /// 4×4 coefficients `(P^α, Q)` of `D = P^α ∂_α + Q`.
    pub fn coefficients_at(&self, x: &Point4) -> Result<([Mat4c; 4], Mat4c)> {
        let (p1, q1) = self.l.coefficients_at(x)?;
        let (p2, q2) = self.adj_l.coefficients_at(x)?;
        let z = Mat2::zeros();
        let p = std::array::from_fn(|a| block4(&p1[a], &z, &z, &p2[a]));
        let m = self.mass_block();
        Ok((p, block4(&q1, &m, &m, &q2)))
    }

    pub fn full_symbol(&self, x: &Point4, p: &[f64; 4]) -> Result<Mat4c> {
        let m = self.mass_block();
        Ok(block4(&self.l.full_symbol(x, p)?, &m, &m, &self.adj_l.full_symbol(x, p)?))
    }

    pub fn apply_jet(&self, x: &Point4, v: &[C64; 4], dv: &[[C64; 4]; 4]) -> Result<[C64; 4]> {
        let top = self.l.apply_jet(x, &[v[0], v[1]], &dv.map(|d| [d[0], d[1]]))?;
        let bottom = self.adj_l.apply_jet(x, &[v[2], v[3]], &dv.map(|d| [d[2], d[3]]))?;
        let m = self.mass;
        Ok([top[0] + v[2] * m, top[1] + v[3] * m, bottom[0] + v[0] * m, bottom[1] + v[1] * m])
    }

    pub fn apply(&self, v: &[ScalarFieldExpr; 4], x: &Point4) -> Result<[C64; 4]> {
        let (value, dv) = column_jet(v, x)?;
        self.apply_jet(x, &value, &dv)
    }
}

/// `(R⁻¹)*` for `R ∈ SL(2,C)`, using `R⁻¹ = adj R`.
pub fn inverse_adjoint_sl2c(r: &MatrixField2) -> MatrixField2 {
    r.adj().adjoint()
}

/// The two sides of an adjugation law, `Adj(G* L G)` and `G'*(Adj L) G'`,
/// with `G' = (R⁻¹)*` for `R` and `G' = G` for `ψ` and `φ`. `None` for
/// `GL(2,C)`, which has no such law.
pub fn adjugation_law_pair(
    op: &RawOperator,
    adj_op: &RawOperator,
    gauge: &GaugeField,
    chart: &ChartBox,
) -> Result<Option<(RawOperator, RawOperator)>> {
    let g = gauge.matrix();
    let g_adj = match gauge {
        GaugeField::Sl2cR(r) => inverse_adjoint_sl2c(r),
        GaugeField::ScalarPsi(_) | GaugeField::PhasePhi(_) => g.clone(),
        GaugeField::Gl2cQ(_) => return Ok(None),
    };
    let lhs = adjugate_operator(&gl_transform(op, &g), chart)?;
    let rhs = gl_transform(adj_op, &g_adj);
    Ok(Some((lhs, rhs)))
}

/// `‖(full symbol of Adj L) − adj(full symbol of L) − [f(adj σ) − adj f(σ)]‖`:
/// the two differ exactly by the failure of `f` to commute with adjugation.
pub fn adjugate_symbol_defect(op: &RawOperator, adj_op: &RawOperator, x: &Point4, p: &[f64; 4]) -> Result<f64> {
    let diff = adj_op.full_symbol(x, p)? - adj(&op.full_symbol(x, p)?);
    let expected = f_at(adj_op.pauli(), x)? - adj(&f_at(op.pauli(), x)?);
    Ok(norm2(&(diff - expected)))
}

#[derive(Debug, Clone, Default)]
pub struct AdjugationReport {
    pub gauge_law: MaxResidual,
    pub involution: MaxResidual,
    pub f_anticommutation: MaxResidual,
    pub symbol_defect: MaxResidual,
}

pub fn adjugation_properties(op: &RawOperator, gauge: &GaugeField, chart: &ChartBox) -> Result<AdjugationReport> {
    let adj_op = adjugate_operator(op, chart)?;
    let double = adjugate_operator(&adj_op, chart)?;
    let pair = adjugation_law_pair(op, &adj_op, gauge, chart)?;
    let mut rng = chart.rng(4);
    let mut report = AdjugationReport::default();
    for x in chart.sample_points(3) {
        if let Some((lhs, rhs)) = &pair {
            report.gauge_law.record_x(lhs.coefficient_difference(rhs, &x)?, &x);
        }
        report.involution.record_x(double.coefficient_difference(op, &x)?, &x);
        report.f_anticommutation.record_x(f_adjugation_residual(op.pauli(), &x)?, &x);
        let p = sample_covector(&mut rng);
        report.symbol_defect.record(adjugate_symbol_defect(op, &adj_op, &x, &p)?, &x, &p);
    }
    Ok(report)
}

/// `S = diag(R, (R⁻¹)*)` and its first derivatives at `x`.
fn spinor_lift(r: &MatrixField2, x: &Point4) -> Result<(Mat4c, [Mat4c; 4])> {
    let rv = r.eval(x)?;
    let r_inv = rv.try_inverse().ok_or_else(|| Error::Gauge("R is singular".into()))?;
    let z = Mat2::zeros();
    let s = block4(&rv, &z, &z, &r_inv.adjoint());
    let mut ds = [Mat4c::zeros(); 4];
    for (a, d) in ds.iter_mut().enumerate() {
        let dr = r.partial(a).eval(x)?;
        let d_inv = -(r_inv * dr * r_inv);
        *d = block4(&dr, &z, &z, &d_inv.adjoint());
    }
    Ok((s, ds))
}

/// Full symbol of `S* D S` at `(x, p)`, conjugating the 4×4 coefficients
/// numerically: `P' = S* P S`, `Q' = S*(P^α S_{x^α} + Q S)`.
pub fn lifted_conjugate_symbol(d: &DiracOperator, r: &MatrixField2, x: &Point4, p: &[f64; 4]) -> Result<Mat4c> {
    let (s, ds) = spinor_lift(r, x)?;
    let (pc, qc) = d.coefficients_at(x)?;
    let ss = s.adjoint();
    let mut symbol = ss * qc * s;
    for a in 0..4 {
        symbol += ss * pc[a] * ds[a];
        symbol += (ss * pc[a] * s).map(|z| z * I * p[a]);
    }
    Ok(symbol)
}

/// `D` assembled from `R* L R`.
pub fn dirac_of_transformed(d: &DiracOperator, r: &MatrixField2, chart: &ChartBox) -> Result<DiracOperator> {
    assemble_dirac(&gl_transform(&d.l, r), d.mass, chart)
}

/// `‖S* D S − D(R* L R)‖` at the full-symbol level.
pub fn lorentz_invariance_residual(d: &DiracOperator, transformed: &DiracOperator, r: &MatrixField2, x: &Point4, p: &[f64; 4]) -> Result<f64> {
    Ok(norm4c(&(lifted_conjugate_symbol(d, r, x, p)? - transformed.full_symbol(x, p)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldlang::parse_scalar_expr;
    use crate::linalg::standard_basis;
    use crate::operator::reconstruct;

    fn e(s: &str) -> ScalarFieldExpr {
        parse_scalar_expr(s).unwrap()
    }

    fn chart(n: usize) -> ChartBox {
        ChartBox::new([-0.5; 4], [0.5; 4], 5, n).unwrap()
    }

    fn with_potential(sigma: [MatrixField2; 4], a: [&str; 4], rho: &str) -> RawOperator {
        let mut csub = MatrixField2::zero();
        for k in 0..4 {
            csub = csub.add(&sigma[k].scale(&e(a[k])));
        }
        reconstruct(sigma, csub, e(rho), &chart(10)).unwrap()
    }

    fn minkowski() -> RawOperator {
        with_potential(
            std::array::from_fn(|k| MatrixField2::constant(&standard_basis(k))),
            ["0", "0", "0", "0.5*cos(x1)"],
            "1",
        )
    }

    fn curved() -> RawOperator {
        let r = MatrixField2::parse(&[["1 + 0.3*x1", "0.3*i*x1"], ["0.3*i*x1", "1 - 0.3*x1"]]).unwrap();
        let w = e("exp(0.2*x2 + 0.1*sin(x3))");
        let base: [MatrixField2; 4] = std::array::from_fn(|k| {
            let s = MatrixField2::constant(&standard_basis(k)).scale(&w);
            if k == 3 {
                s.scale(&e("1 + 0.1*sin(x1)"))
            } else {
                s
            }
        });
        let rs = r.adjoint();
        let sigma = base.map(|m| rs.mul(&m).mul(&r));
        with_potential(sigma, ["0.1*x2", "0.2", "0", "0.4*cos(x1)"], "exp(0.1*x2)")
    }

    #[test]
    fn adjugate_of_constant_symbol_is_blockwise_adjugate() {
        let op = minkowski();
        let adj_op = adjugate_operator(&op, &chart(10)).unwrap();
        let x = [0.1, 0.2, -0.1, 0.3];
        let (p, q) = op.coefficients_at(&x).unwrap();
        let (pa, qa) = adj_op.coefficients_at(&x).unwrap();
        for k in 0..4 {
            assert_eq!(pa[k], adj(&p[k]));
        }
        assert!(norm2(&(qa - adj(&q))) < 1e-15);
    }

    #[test]
    fn full_symbol_of_adjugate_differs_by_f_terms() {
        let op = curved();
        let adj_op = adjugate_operator(&op, &chart(10)).unwrap();
        let x = [0.1, 0.2, -0.1, 0.3];
        let p = [0.3, 0.1, -0.7, 0.2];
        let raw_diff = norm2(&(adj_op.full_symbol(&x, &p).unwrap() - adj(&op.full_symbol(&x, &p).unwrap())));
        assert!(raw_diff > 1e-3);
        assert!(adjugate_symbol_defect(&op, &adj_op, &x, &p).unwrap() < 1e-12);
    }

    #[test]
    fn mass_enters_only_off_diagonal() {
        let d0 = assemble_dirac(&curved(), 0.0, &chart(10)).unwrap();
        let d = d0.with_mass(2.5).unwrap();
        let x = [0.0, 0.1, 0.2, 0.3];
        let p = [1.0, 0.0, 0.5, 0.0];
        let diff = d.full_symbol(&x, &p).unwrap() - d0.full_symbol(&x, &p).unwrap();
        let m = scale_real(&Mat2::identity(), 2.5);
        assert_eq!(diff, block4(&Mat2::zeros(), &m, &m, &Mat2::zeros()));
        assert!(matches!(d0.with_mass(-1.0), Err(Error::NegativeMass(_))));
    }

    #[test]
    fn plane_wave_sees_full_symbol() {
        let d = assemble_dirac(&minkowski(), 1.0, &chart(10)).unwrap();
        let k = [0.3, -0.5, 0.2, 0.9];
        let phase = e("exp(i*(0.3*x1 - 0.5*x2 + 0.2*x3 + 0.9*x4))");
        let amp = [e("1"), e("2 - i"), e("0.5"), e("-1")];
        let v: [ScalarFieldExpr; 4] = std::array::from_fn(|j| phase.clone() * amp[j].clone());
        let x = [0.1, 0.2, 0.3, 0.4];
        let out = d.apply(&v, &x).unwrap();
        let sym = d.full_symbol(&x, &k).unwrap();
        let vals: Vec<C64> = v.iter().map(|f| f.eval(&x).unwrap()).collect();
        for r in 0..4 {
            let expected: C64 = (0..4).map(|c| sym[(r, c)] * vals[c]).sum();
            assert!((out[r] - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn equivalence_with_geometric_dirac_operator() {
        let x = [0.2, -0.3, 0.1, 0.25];
        let p = [0.5, -0.4, 0.3, 1.1];
        for op in [minkowski(), curved()] {
            let d = assemble_dirac(&op, 1.0, &chart(10)).unwrap();
            assert!(dirac_equivalence_residual(&d, &x, &p, None).unwrap() < 1e-12);
            let psi = [e("x1 + i*x2"), e("x3^2"), e("1 - x4"), e("sin(x1*x2)")];
            assert!(bispinor_residual(&d, &psi, &x).unwrap() < 1e-12);
        }
    }

    #[test]
    fn spin_connection_vanishes_flat_and_matches_oracle_curved() {
        let x = [0.2, -0.3, 0.1, 0.25];
        let flat = spin_connection_at(minkowski().pauli(), &x).unwrap();
        assert_eq!(flat.omega, [Mat2::zeros(); 4]);
        let op = curved();
        let exact = spin_connection_at(op.pauli(), &x).unwrap();
        let fd = spin_connection_fd_at(op.pauli(), &x).unwrap();
        assert!(exact.max_difference(&fd) < 1e-7);
        assert!(exact.dotted_consistency_residual() < 1e-12);
        assert!(covariant_derivative_identity_residual_at(op.pauli(), &x).unwrap() < 1e-12);
    }

    #[test]
    fn adjugation_laws_and_lorentz_invariance() {
        let op = curved();
        let r = MatrixField2::parse(&[["exp(0.2*x2 + 0.1*i*x3)", "0.3*x1 + 0.2*i*x4"], ["0", "exp(-0.2*x2 - 0.1*i*x3)"]]).unwrap();
        let c = chart(8);
        for g in [
            GaugeField::Sl2cR(r.clone()),
            GaugeField::ScalarPsi(e("0.2*x4 + 0.1*sin(x1)")),
            GaugeField::PhasePhi(e("0.3*x3 - 0.2*x1*x2")),
        ] {
            let rep = adjugation_properties(&op, &g, &c).unwrap();
            assert!(rep.gauge_law.value < 1e-10, "{g:?} {rep:?}");
            assert!(rep.involution.value < 1e-12, "{rep:?}");
            assert!(rep.f_anticommutation.value < 1e-12, "{rep:?}");
            assert!(rep.symbol_defect.value < 1e-12, "{rep:?}");
        }
        let d = assemble_dirac(&op, 2.5, &c).unwrap();
        let t = dirac_of_transformed(&d, &r, &c).unwrap();
        let x = [0.2, -0.3, 0.1, 0.25];
        assert!(lorentz_invariance_residual(&d, &t, &r, &x, &[0.1, 0.2, 0.3, 0.4]).unwrap() < 1e-10);
    }
}
