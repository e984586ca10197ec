//! Gauge transformations `L ↦ G* L G`, the covariant subprincipal symbol,
//! the electromagnetic potential, and residuals of their transformation laws.

mod bracket;

pub use bracket::{f_at, f_fd_at, f_from_bracket, f_reduced, poisson3, poisson3_at, poisson3_fd_at};

use crate::error::{Error, Result};
use crate::fieldlang::{ChartBox, Func, Point4, ScalarFieldExpr};
use crate::geometry::{checked_frame, frame_of, PauliFields};
use crate::linalg::{adj, decompose_hermitian, eta, norm2, scale, scale_real, Mat2, Mat4, MatrixField2, C64};
use crate::operator::RawOperator;
use crate::residual::MaxResidual;

/// Tolerance on `det R = 1` and on the reality of scalar gauge functions.
pub const TOL_GAUGE: f64 = 1e-10;

/// One of the four kinds of gauge transformation.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeField {
    /// `G = e^{ψ} I`, `ψ` real.
    ScalarPsi(ScalarFieldExpr),
    /// `G = e^{iφ} I`, `φ` real.
    PhasePhi(ScalarFieldExpr),
    /// `G = R` with `det R = 1`.
    Sl2cR(MatrixField2),
    /// `G = Q` with `det Q ≠ 0`.
    Gl2cQ(MatrixField2),
}

impl GaugeField {
    pub fn kind_name(&self) -> &'static str {
        match self {
            GaugeField::ScalarPsi(_) => "scalar_psi",
            GaugeField::PhasePhi(_) => "phase_phi",
            GaugeField::Sl2cR(_) => "sl2c_R",
            GaugeField::Gl2cQ(_) => "gl2c_Q",
        }
    }

    /// The matrix-function `G` of the transformation.
    pub fn matrix(&self) -> MatrixField2 {
        match self {
            GaugeField::ScalarPsi(psi) => MatrixField2::scalar(ScalarFieldExpr::call(Func::Exp, psi.clone())),
            GaugeField::PhasePhi(phi) => MatrixField2::scalar(ScalarFieldExpr::call(
                Func::Exp,
                ScalarFieldExpr::imag_unit() * phi.clone(),
            )),
            GaugeField::Sl2cR(m) | GaugeField::Gl2cQ(m) => m.clone(),
        }
    }

    pub fn validate(&self, chart: &ChartBox) -> Result<()> {
        for x in chart.sample_points(0) {
            match self {
                GaugeField::ScalarPsi(s) | GaugeField::PhasePhi(s) => {
                    let v = s.eval(&x)?;
                    if v.im.abs() > TOL_GAUGE {
                        return Err(Error::Gauge(format!("{} is not real at {x:?}: {v}", self.kind_name())));
                    }
                }
                GaugeField::Sl2cR(r) => {
                    let d = r.eval(&x)?.determinant();
                    if (d - C64::new(1.0, 0.0)).norm() > TOL_GAUGE {
                        return Err(Error::Gauge(format!("det R = {d} at {x:?}, expected 1")));
                    }
                }
                GaugeField::Gl2cQ(q) => {
                    let d = q.eval(&x)?.determinant();
                    if d.norm() < TOL_GAUGE {
                        return Err(Error::Gauge(format!("det Q = {d} at {x:?} is singular")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `G* L G` at coefficient level:
/// `P'^α = G* P^α G`, `Q' = G* (P^α G_{x^α} + Q G)`.
pub fn gl_transform(op: &RawOperator, g: &MatrixField2) -> RawOperator {
    let gs = g.adjoint();
    let p: [MatrixField2; 4] = std::array::from_fn(|a| gs.mul(&op.p()[a]).mul(g));
    let mut first = MatrixField2::zero();
    for a in 0..4 {
        first = first.add(&gs.mul(&op.p()[a]).mul(&g.partial(a)));
    }
    let q = op.q().sandwich(&gs, g).plus(&first);
    RawOperator::new(p, q, op.rho().clone())
}

pub fn transform(op: &RawOperator, gauge: &GaugeField) -> RawOperator {
    gl_transform(op, &gauge.matrix())
}

/// `L_csub = L_sub − f(L_prin)`.
pub fn csub_at(op: &RawOperator, x: &Point4) -> Result<Mat2> {
    Ok(op.subprincipal_symbol(x)? - f_at(op.pauli(), x)?)
}

/// Electromagnetic covector potential at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialA {
    pub a: [f64; 4],
    /// Anti-Hermitian part of `csub` plus the defect of the linear solve.
    pub residual: f64,
}

/// Solves `csub = σ^α A_α` in standard-basis coordinates: `c = e A`.
pub fn potential_from_csub(sigma: &[Mat2; 4], csub: &Mat2, x: &Point4) -> Result<PotentialA> {
    let frame = checked_frame(sigma, x)?;
    let (c, herm) = decompose_hermitian(csub);
    let cv = nalgebra::Vector4::from(c);
    let a = frame
        .e
        .lu()
        .solve(&cv)
        .ok_or_else(|| Error::Singular("potential decomposition".into()))?;
    let defect = (frame.e * a - cv).amax();
    Ok(PotentialA {
        a: [a[0], a[1], a[2], a[3]],
        residual: herm + defect,
    })
}

pub fn extract_a_at(op: &RawOperator, x: &Point4) -> Result<PotentialA> {
    potential_from_csub(&op.sigma_at(x)?, &csub_at(op, x)?, x)
}

/// Exact gradient of a scalar field.
fn grad_at(s: &ScalarFieldExpr, x: &Point4) -> Result<[f64; 4]> {
    let mut g = [0.0; 4];
    for (a, e) in crate::fieldlang::gradient(s).iter().enumerate() {
        g[a] = e.eval(x)?.re;
    }
    Ok(g)
}

/// `‖L'_sub − [G* L_sub G + (i/2)(G*_{x^α} σ^α G − G* σ^α G_{x^α})]‖` where
/// `L' = G* L G` is built at coefficient level.
pub fn sub_law_residual(op: &RawOperator, g: &MatrixField2, transformed: &RawOperator, x: &Point4) -> Result<f64> {
    let gv = g.eval(x)?;
    let gs = gv.adjoint();
    let sigma = op.sigma_at(x)?;
    let mut expected = gs * op.subprincipal_symbol(x)? * gv;
    let mut drift = Mat2::zeros();
    for a in 0..4 {
        let ga = g.partial(a).eval(x)?;
        drift += ga.adjoint() * sigma[a] * gv - gs * sigma[a] * ga;
    }
    expected += scale(&drift, C64::new(0.0, 0.5));
    Ok(norm2(&(transformed.subprincipal_symbol(x)? - expected)))
}

/// Residual of the covariant subprincipal symbol law for `ψ`, `φ` and `R`:
/// `e^{2ψ} csub`, `csub + σ^α φ_{x^α}`, `R* csub R`. `None` for `GL(2,C)`.
pub fn csub_law_residual(op: &RawOperator, gauge: &GaugeField, transformed: &RawOperator, x: &Point4) -> Result<Option<f64>> {
    let csub = csub_at(op, x)?;
    let expected = match gauge {
        GaugeField::ScalarPsi(psi) => scale_real(&csub, (2.0 * psi.eval(x)?.re).exp()),
        GaugeField::PhasePhi(phi) => {
            let grad = grad_at(phi, x)?;
            csub + crate::linalg::contract(&op.sigma_at(x)?, &grad)
        }
        GaugeField::Sl2cR(r) => {
            let rv = r.eval(x)?;
            rv.adjoint() * csub * rv
        }
        GaugeField::Gl2cQ(_) => return Ok(None),
    };
    Ok(Some(norm2(&(csub_at(transformed, x)? - expected))))
}

/// `A ↦ A + grad φ` under `φ`; `A` unchanged under `ψ` and `R`.
/// `None` for `GL(2,C)`.
pub fn potential_law_residual(op: &RawOperator, gauge: &GaugeField, transformed: &RawOperator, x: &Point4) -> Result<Option<f64>> {
    let mut expected = extract_a_at(op, x)?.a;
    match gauge {
        GaugeField::PhasePhi(phi) => {
            let grad = grad_at(phi, x)?;
            for a in 0..4 {
                expected[a] += grad[a];
            }
        }
        GaugeField::ScalarPsi(_) | GaugeField::Sl2cR(_) => {}
        GaugeField::Gl2cQ(_) => return Ok(None),
    }
    let got = extract_a_at(transformed, x)?.a;
    Ok(Some((0..4).map(|a| (got[a] - expected[a]).abs()).fold(0.0, f64::max)))
}

/// `‖f(R*σR) − R* f(σ) R − (i/2)(R*_{x^α} σ^α R − R* σ^α R_{x^α})‖`.
pub fn f_covariance_residual(sigma: &PauliFields, r: &MatrixField2, x: &Point4) -> Result<f64> {
    let rv = r.eval(x)?;
    let rs = rv.adjoint();
    let s = sigma.sigma_at(x)?;
    let mut drift = Mat2::zeros();
    for a in 0..4 {
        let ra = r.partial(a).eval(x)?;
        drift += ra.adjoint() * s[a] * rv - rs * s[a] * ra;
    }
    let expected = rs * f_at(sigma, x)? * rv + scale(&drift, C64::new(0.0, 0.5));
    Ok(norm2(&(f_at(&sigma.conjugated(r), x)? - expected)))
}

/// `‖f(e^{2ψ}σ) − e^{2ψ} f(σ)‖`.
pub fn f_homogeneity_residual(sigma: &PauliFields, psi: &ScalarFieldExpr, x: &Point4) -> Result<f64> {
    let g = GaugeField::ScalarPsi(psi.clone()).matrix();
    let scaled = f_at(&sigma.conjugated(&g), x)?;
    let expected = scale_real(&f_at(sigma, x)?, (2.0 * psi.eval(x)?.re).exp());
    Ok(norm2(&(scaled - expected)))
}

/// `‖adj f(σ) + f(adj σ)‖`.
pub fn f_adjugation_residual(sigma: &PauliFields, x: &Point4) -> Result<f64> {
    Ok(norm2(&(adj(&f_at(sigma, x)?) + f_at(&sigma.adjugate(), x)?)))
}

/// The matrix
/// `Q = −(i/8)[R*σ^α R_{x^γ} R⁻¹ σ̃_α σ^γ R − R*σ^γ σ̃_α σ^α R_{x^γ}] + (i/2) R*σ^α R_{x^α}`
/// whose vanishing implies the covariance condition on `f`.
/// Returns `(‖Q‖, ‖Q + Q*‖)`.
pub fn covariance_defect(sigma: &PauliFields, r: &MatrixField2, x: &Point4) -> Result<(f64, f64)> {
    let geom = crate::geometry::PointGeometry::new(sigma.jet(x)?, x)?;
    let s = geom.sigma();
    let tl = &geom.sigma_tilde_lower;
    let rv = r.eval(x)?;
    let rs = rv.adjoint();
    let r_inv = rv.try_inverse().ok_or_else(|| Error::Gauge("R is singular".into()))?;
    let dr: [Mat2; 4] = {
        let mut d = [Mat2::zeros(); 4];
        for (g, m) in d.iter_mut().enumerate() {
            *m = r.partial(g).eval(x)?;
        }
        d
    };
    let mut bracket = Mat2::zeros();
    let mut drift = Mat2::zeros();
    for a in 0..4 {
        drift += rs * s[a] * dr[a];
        for c in 0..4 {
            bracket += rs * s[a] * dr[c] * r_inv * tl[a] * s[c] * rv - rs * s[c] * tl[a] * s[a] * dr[c];
        }
    }
    let q = scale(&bracket, C64::new(0.0, -0.125)) + scale(&drift, C64::new(0.0, 0.5));
    Ok((norm2(&q), norm2(&(q + q.adjoint()))))
}

/// Frame transformation `Λ` with `e' = Λ e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMatrix {
    pub lambda: Mat4,
    pub det: f64,
    /// `max |Λᵀ η Λ − η|`
    pub eta_residual: f64,
}

impl LorentzMatrix {
    fn between(before: &[Mat2; 4], after: &[Mat2; 4], x: &Point4) -> Result<Self> {
        let e = checked_frame(before, x)?.e;
        let e2 = frame_of(after).e;
        let e_inv = e.try_inverse().ok_or_else(|| Error::Singular("frame".into()))?;
        let lambda = e2 * e_inv;
        let eta = eta();
        Ok(LorentzMatrix {
            lambda,
            det: lambda.determinant(),
            eta_residual: (lambda.transpose() * eta * lambda - eta).abs().max(),
        })
    }
}

/// `Λ` relating the frames of `σ` and `R*σR` at `x`.
pub fn lorentz_matrix(r: &MatrixField2, sigma: &PauliFields, x: &Point4) -> Result<LorentzMatrix> {
    let s = sigma.sigma_at(x)?;
    let rv = r.eval(x)?;
    let t = s.map(|m| rv.adjoint() * m * rv);
    LorentzMatrix::between(&s, &t, x)
}

/// `Λ` relating the frames of `σ` and `adj σ` at `x`.
pub fn adjugation_lorentz_matrix(sigma: &PauliFields, x: &Point4) -> Result<LorentzMatrix> {
    let s = sigma.sigma_at(x)?;
    LorentzMatrix::between(&s, &s.map(|m| adj(&m)), x)
}

/// Sampled residuals of every transformation law that applies to `gauge`.
#[derive(Debug, Clone, Default)]
pub struct CovarianceReport {
    pub sub_law: MaxResidual,
    pub csub_law: MaxResidual,
    pub potential_law: MaxResidual,
    pub f_covariance: MaxResidual,
    pub f_homogeneity: MaxResidual,
    pub covariance_defect: MaxResidual,
}

pub fn covariance_residuals(op: &RawOperator, gauge: &GaugeField, chart: &ChartBox) -> Result<CovarianceReport> {
    gauge.validate(chart)?;
    let g = gauge.matrix();
    let transformed = gl_transform(op, &g);
    let mut report = CovarianceReport::default();
    for x in chart.sample_points(2) {
        report.sub_law.record_x(sub_law_residual(op, &g, &transformed, &x)?, &x);
        if let Some(r) = csub_law_residual(op, gauge, &transformed, &x)? {
            report.csub_law.record_x(r, &x);
        }
        if let Some(r) = potential_law_residual(op, gauge, &transformed, &x)? {
            report.potential_law.record_x(r, &x);
        }
        match gauge {
            GaugeField::Sl2cR(r) => {
                report.f_covariance.record_x(f_covariance_residual(op.pauli(), r, &x)?, &x);
                let (q, _) = covariance_defect(op.pauli(), r, &x)?;
                report.covariance_defect.record_x(q, &x);
            }
            GaugeField::ScalarPsi(psi) => {
                report.f_homogeneity.record_x(f_homogeneity_residual(op.pauli(), psi, &x)?, &x);
            }
            _ => {}
        }
    }
    Ok(report)
}

/// `R = diag(e^{t/2}, e^{−t/2})`, a boost of rapidity `t` in the `(3,4)` plane.
pub fn diagonal_boost(t: f64) -> Mat2 {
    Mat2::new(C64::new((t / 2.0).exp(), 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new((-t / 2.0).exp(), 0.0))
}
