//! The verification suites. Each draws its sample points from its own
//! random stream, so suites are independent of one another and of the order
//! in which they run.

use std::sync::OnceLock;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dirac::{
    adjugate_operator, adjugate_symbol_defect, adjugation_law_pair, assemble_dirac, BispinorProbe,
    covariant_derivative_identity_residual, dirac_equivalence_residual, dirac_of_transformed,
    lorentz_invariance_residual, spin_connection_at, spin_connection_fd_at, DiracOperator,
};
use crate::error::Result;
use crate::fieldlang::{default_step, numeric_partial, sample_covector, symbolic_partial, Point4, ScalarFieldExpr};
use crate::gauge::{
    covariance_defect, csub_law_residual, extract_a_at, f_adjugation_residual, f_at, f_covariance_residual,
    f_fd_at, f_homogeneity_residual, potential_law_residual, poisson3_at, poisson3_fd_at, sub_law_residual,
    transform, GaugeField,
};
use crate::geometry::{
    adjugate_frame_relation, christoffel_at, christoffel_fd_at, clifford_residual, frame_of, geometry_at,
    pauli_sandwich_residuals, TOL_DEGENERATE,
};
use crate::linalg::{hermiticity_residual, norm2, Mat2, C64};
use crate::residual::MaxResidual;

use super::config::VerificationConfig;

/// Covectors drawn per sample point in `p`-dependent suites.
pub const COVECTORS_PER_POINT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Selfadjoint,
    Nondegenerate,
    Metric,
    Clifford,
    Sandwich,
    FCovariance,
    FHomogeneity,
    CsubLaws,
    PotentialGauge,
    Adjugation,
    Lorentz,
    Theorem1,
    AppendixE,
    Bispinor,
    OracleFd,
}

impl Suite {
    pub const ALL: [Suite; 15] = [
        Suite::Selfadjoint,
        Suite::Nondegenerate,
        Suite::Metric,
        Suite::Clifford,
        Suite::Sandwich,
        Suite::FCovariance,
        Suite::FHomogeneity,
        Suite::CsubLaws,
        Suite::PotentialGauge,
        Suite::Adjugation,
        Suite::Lorentz,
        Suite::Theorem1,
        Suite::AppendixE,
        Suite::Bispinor,
        Suite::OracleFd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Selfadjoint => "selfadjoint",
            Suite::Nondegenerate => "nondegenerate",
            Suite::Metric => "metric",
            Suite::Clifford => "clifford",
            Suite::Sandwich => "sandwich",
            Suite::FCovariance => "f_covariance",
            Suite::FHomogeneity => "f_homogeneity",
            Suite::CsubLaws => "csub_laws",
            Suite::PotentialGauge => "potential_gauge",
            Suite::Adjugation => "adjugation",
            Suite::Lorentz => "lorentz",
            Suite::Theorem1 => "theorem1",
            Suite::AppendixE => "appendixE",
            Suite::Bispinor => "bispinor",
            Suite::OracleFd => "oracle_fd",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Algebraic identities 1e-10, identities involving first derivatives
    /// 1e-8, comparisons against finite differences 1e-6. The
    /// `nondegenerate` residual is `1/|det e|`, so its tolerance is the
    /// reciprocal of the degeneracy threshold.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::Selfadjoint | Suite::Metric | Suite::Clifford | Suite::Sandwich => 1e-10,
            Suite::Nondegenerate => 1.0 / TOL_DEGENERATE,
            Suite::FHomogeneity => 1e-9,
            Suite::OracleFd => 1e-6,
            _ => 1e-8,
        }
    }

    /// Random stream the suite samples from.
    fn stream(self) -> u64 {
        100 + self as u64
    }
}

/// Shared, lazily built state for one run.
pub struct Context<'a> {
    pub cfg: &'a VerificationConfig,
    dirac: OnceLock<Result<DiracOperator>>,
}

impl<'a> Context<'a> {
    pub fn new(cfg: &'a VerificationConfig) -> Self {
        Context {
            cfg,
            dirac: OnceLock::new(),
        }
    }

    /// `D` at the first configured mass (or zero).
    fn dirac(&self) -> Result<DiracOperator> {
        self.dirac
            .get_or_init(|| {
                let m = self.cfg.mass_values.first().copied().unwrap_or(0.0);
                assemble_dirac(&self.cfg.operator, m, &self.cfg.chart)
            })
            .clone()
    }

    fn diracs(&self) -> Result<Vec<DiracOperator>> {
        let d = self.dirac()?;
        if self.cfg.mass_values.is_empty() {
            return Ok(vec![d]);
        }
        self.cfg.mass_values.iter().map(|&m| d.with_mass(m)).collect()
    }

    fn sl2c_gauges(&self) -> impl Iterator<Item = &crate::linalg::MatrixField2> {
        self.cfg.gauges.iter().filter_map(|g| match g {
            GaugeField::Sl2cR(r) => Some(r),
            _ => None,
        })
    }
}

/// Sequential sampler over the chart for one suite.
struct Sampler {
    rng: ChaCha8Rng,
    chart: crate::fieldlang::ChartBox,
}

impl Sampler {
    fn new(ctx: &Context, suite: Suite) -> Self {
        Sampler {
            rng: ctx.cfg.chart.rng(suite.stream()),
            chart: ctx.cfg.chart.clone(),
        }
    }

    fn count(&self) -> usize {
        self.chart.sample_count
    }

    fn point(&mut self) -> Point4 {
        self.chart.sample_point(&mut self.rng)
    }

    fn covectors(&mut self) -> Vec<[f64; 4]> {
        (0..COVECTORS_PER_POINT).map(|_| sample_covector(&mut self.rng)).collect()
    }

    fn complex_matrix(&mut self) -> Mat2 {
        Mat2::from_fn(|_, _| C64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0)))
    }
}

/// Runs one suite and returns the largest residual observed.
pub fn run_suite(ctx: &Context, suite: Suite) -> Result<MaxResidual> {
    let mut s = Sampler::new(ctx, suite);
    let mut out = MaxResidual::new();
    let op = &ctx.cfg.operator;
    let pauli = op.pauli();
    let n = s.count();
    match suite {
        Suite::Selfadjoint => {
            let adjoint = op.formal_adjoint();
            for _ in 0..n {
                let x = s.point();
                let sub = hermiticity_residual(&op.subprincipal_symbol(&x)?);
                let coeff = adjoint.coefficient_difference(op, &x)?;
                for p in s.covectors() {
                    let prin = hermiticity_residual(&op.principal_symbol(&x, &p)?);
                    out.record(sub.max(coeff).max(prin), &x, &p);
                }
            }
        }
        Suite::Nondegenerate => {
            for _ in 0..n {
                let x = s.point();
                out.record_x(1.0 / frame_of(&op.sigma_at(&x)?).det().abs(), &x);
            }
        }
        Suite::Metric => {
            for _ in 0..n {
                let x = s.point();
                let geom = geometry_at(pauli, &x)?;
                let m = &geom.metric;
                let signature = if m.is_lorentzian() { 0.0 } else { f64::INFINITY };
                let trace = geom.christoffel.trace();
                let contraction = (0..4)
                    .map(|a| (trace[a] - 0.5 * geom.dln_abs_det_g[a]).abs())
                    .fold(0.0, f64::max);
                let r = m
                    .path_disagreement
                    .max(geom.frame.orthonormality_residual(m))
                    .max(m.inverse_residual())
                    .max(contraction)
                    .max(signature);
                out.record_x(r, &x);
            }
        }
        Suite::Clifford => {
            for _ in 0..n {
                let x = s.point();
                let geom = geometry_at(pauli, &x)?;
                for p in s.covectors() {
                    let q = sample_covector(&mut s.rng);
                    out.record(clifford_residual(geom.sigma(), &geom.metric.g_contra, &p, &q), &x, &p);
                }
            }
        }
        Suite::Sandwich => {
            for _ in 0..n {
                let x = s.point();
                let geom = geometry_at(pauli, &x)?;
                for _ in 0..COVECTORS_PER_POINT {
                    let (a, b) = pauli_sandwich_residuals(geom.sigma(), &geom.metric.g_cov, &s.complex_matrix());
                    out.record_x(a.max(b), &x);
                }
            }
        }
        Suite::FCovariance => {
            for _ in 0..n {
                let x = s.point();
                let mut r = if pauli.is_constant() { norm2(&f_at(pauli, &x)?) } else { 0.0 };
                for g in ctx.sl2c_gauges() {
                    let (q, q_sym) = covariance_defect(pauli, g, &x)?;
                    r = r.max(f_covariance_residual(pauli, g, &x)?).max(q).max(q_sym);
                }
                out.record_x(r, &x);
            }
        }
        Suite::FHomogeneity => {
            let mut psis: Vec<ScalarFieldExpr> = ctx
                .cfg
                .gauges
                .iter()
                .filter_map(|g| match g {
                    GaugeField::ScalarPsi(p) => Some(p.clone()),
                    _ => None,
                })
                .collect();
            psis.push(ScalarFieldExpr::var(3));
            for _ in 0..n {
                let x = s.point();
                let mut r: f64 = 0.0;
                for psi in &psis {
                    r = r.max(f_homogeneity_residual(pauli, psi, &x)?);
                }
                out.record_x(r, &x);
            }
        }
        Suite::CsubLaws => {
            let transformed: Vec<_> = ctx.cfg.gauges.iter().map(|g| (g, g.matrix(), transform(op, g))).collect();
            for _ in 0..n {
                let x = s.point();
                let mut r: f64 = 0.0;
                for (g, m, t) in &transformed {
                    r = r.max(sub_law_residual(op, m, t, &x)?);
                    if let Some(c) = csub_law_residual(op, g, t, &x)? {
                        r = r.max(c);
                    }
                }
                out.record_x(r, &x);
            }
        }
        Suite::PotentialGauge => {
            let transformed: Vec<_> = ctx.cfg.gauges.iter().map(|g| (g, transform(op, g))).collect();
            for _ in 0..n {
                let x = s.point();
                let extracted = extract_a_at(op, &x)?;
                let mut r = extracted.residual;
                if let Some(a) = &ctx.cfg.potential {
                    for k in 0..4 {
                        r = r.max((a[k].eval(&x)?.re - extracted.a[k]).abs());
                    }
                }
                for (g, t) in &transformed {
                    if let Some(law) = potential_law_residual(op, g, t, &x)? {
                        r = r.max(law);
                    }
                }
                out.record_x(r, &x);
            }
        }
        Suite::Adjugation => {
            let chart = &ctx.cfg.chart;
            let adj_op = ctx.dirac()?.adj_l;
            let double = adjugate_operator(&adj_op, chart)?;
            let mut pairs = Vec::new();
            for g in &ctx.cfg.gauges {
                if let Some(pair) = adjugation_law_pair(op, &adj_op, g, chart)? {
                    pairs.push(pair);
                }
            }
            for _ in 0..n {
                let x = s.point();
                let mut r = double
                    .coefficient_difference(op, &x)?
                    .max(f_adjugation_residual(pauli, &x)?);
                for (lhs, rhs) in &pairs {
                    r = r.max(lhs.coefficient_difference(rhs, &x)?);
                }
                for p in s.covectors() {
                    out.record(r.max(adjugate_symbol_defect(op, &adj_op, &x, &p)?), &x, &p);
                }
            }
        }
        Suite::Lorentz => {
            let diracs = ctx.diracs()?;
            let mut lifted = Vec::new();
            for g in ctx.sl2c_gauges() {
                let t = dirac_of_transformed(&diracs[0], g, &ctx.cfg.chart)?;
                let per_mass: Vec<_> = diracs
                    .iter()
                    .map(|d| Ok((d.clone(), t.with_mass(d.mass)?)))
                    .collect::<Result<_>>()?;
                lifted.push((g, per_mass));
            }
            let inversion = crate::linalg::Mat4::from_diagonal(&nalgebra::Vector4::new(-1.0, -1.0, -1.0, 1.0));
            for _ in 0..n {
                let x = s.point();
                let sigma = op.sigma_at(&x)?;
                let adjugation = crate::gauge::adjugation_lorentz_matrix(pauli, &x)?;
                let (frame_rel, spinor_rel) = adjugate_frame_relation(&sigma);
                let mut r = (adjugation.lambda - inversion)
                    .abs()
                    .max()
                    .max((adjugation.det + 1.0).abs())
                    .max(frame_rel)
                    .max(spinor_rel);
                for (g, _) in &lifted {
                    let l = crate::gauge::lorentz_matrix(g, pauli, &x)?;
                    r = r.max((l.det - 1.0).abs()).max(l.eta_residual);
                }
                for p in s.covectors() {
                    let mut rp = r;
                    for (g, per_mass) in &lifted {
                        for (d, t) in per_mass {
                            rp = rp.max(lorentz_invariance_residual(d, t, g, &x, &p)?);
                        }
                    }
                    out.record(rp, &x, &p);
                }
            }
        }
        Suite::Theorem1 => {
            let diracs = ctx.diracs()?;
            for _ in 0..n {
                let x = s.point();
                let a = match &ctx.cfg.reference_potential {
                    Some(exprs) => {
                        let mut a = [0.0; 4];
                        for k in 0..4 {
                            a[k] = exprs[k].eval(&x)?.re;
                        }
                        a
                    }
                    None => extract_a_at(op, &x)?.a,
                };
                for p in s.covectors() {
                    let mut r: f64 = 0.0;
                    for d in &diracs {
                        r = r.max(dirac_equivalence_residual(d, &x, &p, Some(a))?);
                    }
                    out.record(r, &x, &p);
                }
            }
        }
        Suite::AppendixE => {
            for _ in 0..n {
                let x = s.point();
                out.record_x(covariant_derivative_identity_residual(&geometry_at(pauli, &x)?), &x);
            }
        }
        Suite::Bispinor => {
            let diracs = ctx.diracs()?;
            let probe = BispinorProbe::new(&diracs[0], &ctx.cfg.bispinor);
            for _ in 0..n {
                let x = s.point();
                let mut r: f64 = 0.0;
                for d in &diracs {
                    r = r.max(probe.residual(d, &x)?);
                }
                out.record_x(r, &x);
            }
        }
        Suite::OracleFd => {
            let exprs = config_expressions(ctx);
            let partials: Vec<[ScalarFieldExpr; 4]> = exprs
                .iter()
                .map(|e| std::array::from_fn(|a| symbolic_partial(e, a)))
                .collect();
            for _ in 0..n {
                let x = s.point();
                let p = sample_covector(&mut s.rng);
                let mut r: f64 = 0.0;
                for (e, d) in exprs.iter().zip(&partials) {
                    for a in 0..4 {
                        let exact = d[a].eval(&x)?;
                        let fd = numeric_partial(e, &x, a, default_step(&x, a))?;
                        r = r.max(relative(exact, fd));
                    }
                }
                let exact = pauli.jet(&x)?;
                let fd = pauli.fd_jet(&x)?;
                for g in 0..4 {
                    for a in 0..4 {
                        r = r.max(relative_mat(&exact.dsigma[g][a], &fd.dsigma[g][a]));
                    }
                }
                let gamma = christoffel_at(pauli, &x)?;
                r = r.max(gamma.max_difference(&christoffel_fd_at(pauli, &x)?) / (1.0 + gamma.max_abs()));
                r = r.max(relative_mat(&f_at(pauli, &x)?, &f_fd_at(pauli, &x)?));
                let conn = spin_connection_at(pauli, &x)?;
                r = r.max(conn.max_difference(&spin_connection_fd_at(pauli, &x)?));
                r = r.max(relative_mat(&poisson3_at(pauli, &x, &p)?, &poisson3_fd_at(pauli, &x, &p)?));
                out.record(r, &x, &p);
            }
        }
    }
    Ok(out)
}

fn relative(exact: C64, approx: C64) -> f64 {
    (exact - approx).norm() / (1.0 + exact.norm())
}

fn relative_mat(exact: &Mat2, approx: &Mat2) -> f64 {
    norm2(&(exact - approx)) / (1.0 + norm2(exact))
}

/// Every scalar expression the configuration defines.
fn config_expressions(ctx: &Context) -> Vec<ScalarFieldExpr> {
    let cfg = ctx.cfg;
    let op = &cfg.operator;
    let mut out = Vec::new();
    for m in op.p() {
        out.extend(m.entries.iter().flatten().cloned());
    }
    out.extend(op.q().symbolic.entries.iter().flatten().cloned());
    out.push(op.rho().clone());
    for g in &cfg.gauges {
        match g {
            GaugeField::ScalarPsi(e) | GaugeField::PhasePhi(e) => out.push(e.clone()),
            GaugeField::Sl2cR(m) | GaugeField::Gl2cQ(m) => out.extend(m.entries.iter().flatten().cloned()),
        }
    }
    out.extend(cfg.bispinor.iter().cloned());
    out.retain(|e| !e.is_constant());
    out
}
