use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fieldlang::{symbolic_partial, ChartBox, Point4, ScalarFieldExpr};
use crate::geometry::PauliFields;
use crate::linalg::{scale, Mat2, MatrixField2, C64, I, ZERO};

/// Matrix-valued function of the position evaluated by Rust code rather than
/// by the field language.
pub type PointFn = Arc<dyn Fn(&Point4) -> Result<Mat2> + Send + Sync>;

/// Zeroth-order coefficient `Q(x)`: a symbolic part plus an optional
/// computed part. `Q` is never differentiated, so a computed part (such as
/// the correction `f(L_prin)` of a reconstructed operator) is enough.
#[derive(Clone)]
pub struct ZerothOrder {
    pub symbolic: MatrixField2,
    computed: Option<PointFn>,
}

impl fmt::Debug for ZerothOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ZerothOrder")
            .field("symbolic", &self.symbolic)
            .field("computed", &self.computed.is_some())
            .finish()
    }
}

impl From<MatrixField2> for ZerothOrder {
    fn from(m: MatrixField2) -> Self {
        ZerothOrder::symbolic(m)
    }
}

impl ZerothOrder {
    pub fn symbolic(m: MatrixField2) -> Self {
        ZerothOrder {
            symbolic: m,
            computed: None,
        }
    }

    pub fn with_computed(m: MatrixField2, f: PointFn) -> Self {
        ZerothOrder {
            symbolic: m,
            computed: Some(f),
        }
    }

    /// True when `Q` is fully described by the symbolic part.
    pub fn is_symbolic(&self) -> bool {
        self.computed.is_none()
    }

    pub fn eval(&self, x: &Point4) -> Result<Mat2> {
        let mut q = self.symbolic.eval(x)?;
        if let Some(f) = &self.computed {
            q += f(x)?;
        }
        Ok(q)
    }

    /// `Q*`
    pub fn adjoint(&self) -> Self {
        ZerothOrder {
            symbolic: self.symbolic.adjoint(),
            computed: self.computed.clone().map(|f| -> PointFn { Arc::new(move |x: &Point4| Ok(f(x)?.adjoint())) }),
        }
    }

    /// `left · Q · right`
    pub fn sandwich(&self, left: &MatrixField2, right: &MatrixField2) -> Self {
        let computed = self.computed.clone().map(|f| -> PointFn {
            let (l, r) = (left.clone(), right.clone());
            Arc::new(move |x: &Point4| Ok(l.eval(x)? * f(x)? * r.eval(x)?))
        });
        ZerothOrder {
            symbolic: left.mul(&self.symbolic).mul(right),
            computed,
        }
    }

    /// Matrix adjugate `adj Q`.
    pub fn adj(&self) -> Self {
        ZerothOrder {
            symbolic: self.symbolic.adj(),
            computed: self
                .computed
                .clone()
                .map(|f| -> PointFn { Arc::new(move |x: &Point4| Ok(crate::linalg::adj(&f(x)?))) }),
        }
    }

    /// Adds a computed term.
    pub fn with_extra(&self, g: PointFn) -> Self {
        let computed: PointFn = match self.computed.clone() {
            None => g,
            Some(f) => Arc::new(move |x: &Point4| Ok(f(x)? + g(x)?)),
        };
        ZerothOrder {
            symbolic: self.symbolic.clone(),
            computed: Some(computed),
        }
    }

    pub fn plus(&self, m: &MatrixField2) -> Self {
        ZerothOrder {
            symbolic: self.symbolic.add(m),
            computed: self.computed.clone(),
        }
    }
}

/// Evaluated symbols of an operator at `(x, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolView {
    pub full: Mat2,
    pub prin: Mat2,
    pub sub: Mat2,
    pub csub: Mat2,
    pub sigma: [Mat2; 4],
}

/// First-order operator `L = P^α ∂_α + Q` acting on 2-columns, with the
/// density `ρ` that defines its inner product.
#[derive(Debug, Clone)]
pub struct RawOperator {
    p: [MatrixField2; 4],
    q: ZerothOrder,
    rho: ScalarFieldExpr,
    // Σ_α ∂_α P^α
    divergence: MatrixField2,
    // ∂_α ln ρ
    dln_rho: [ScalarFieldExpr; 4],
    pauli: PauliFields,
}

impl RawOperator {
    pub fn new(p: [MatrixField2; 4], q: impl Into<ZerothOrder>, rho: ScalarFieldExpr) -> Self {
        let divergence = (0..4).fold(MatrixField2::zero(), |acc, a| acc.add(&p[a].partial(a)));
        let dln_rho = std::array::from_fn(|a| symbolic_partial(&rho, a) / rho.clone());
        let i = ScalarFieldExpr::imag_unit();
        let pauli = PauliFields::new(std::array::from_fn(|a| p[a].scale(&i)));
        RawOperator {
            p,
            q: q.into(),
            rho,
            divergence,
            dln_rho,
            pauli,
        }
    }

    pub fn p(&self) -> &[MatrixField2; 4] {
        &self.p
    }

    pub fn q(&self) -> &ZerothOrder {
        &self.q
    }

    pub fn rho(&self) -> &ScalarFieldExpr {
        &self.rho
    }

    /// The Pauli fields `σ^α = i P^α`.
    pub fn pauli(&self) -> &PauliFields {
        &self.pauli
    }

    /// Checks that `ρ` is a positive real and all coefficients are finite at
    /// the sample points of `chart`.
    pub fn validate(&self, chart: &ChartBox) -> Result<()> {
        for x in chart.sample_points(0) {
            let r = self.rho.eval(&x)?;
            if !(r.re > 0.0) || r.im.abs() > 1e-12 * r.re.abs().max(1.0) {
                return Err(Error::Density(format!("rho = {r} at {x:?}")));
            }
            self.coefficients_at(&x)?;
            self.dln_rho_at(&x)?;
        }
        Ok(())
    }

    pub fn coefficients_at(&self, x: &Point4) -> Result<([Mat2; 4], Mat2)> {
        let mut p = [Mat2::zeros(); 4];
        for (a, m) in self.p.iter().enumerate() {
            p[a] = m.eval(x)?;
        }
        Ok((p, self.q.eval(x)?))
    }

    pub fn dln_rho_at(&self, x: &Point4) -> Result<[C64; 4]> {
        let mut out = [ZERO; 4];
        for a in 0..4 {
            out[a] = self.dln_rho[a].eval(x)?;
        }
        Ok(out)
    }

    pub fn sigma_at(&self, x: &Point4) -> Result<[Mat2; 4]> {
        self.pauli.sigma_at(x)
    }

    /// `i P^α(x) p_α`
    pub fn principal_symbol(&self, x: &Point4, p: &[f64; 4]) -> Result<Mat2> {
        let mut m = Mat2::zeros();
        for a in 0..4 {
            m += scale(&self.p[a].eval(x)?, I * p[a]);
        }
        Ok(m)
    }

    /// `i P^α(x) p_α + Q(x)`
    pub fn full_symbol(&self, x: &Point4, p: &[f64; 4]) -> Result<Mat2> {
        Ok(self.principal_symbol(x, p)? + self.q.eval(x)?)
    }

    /// `Q − ½ (P^α)_{x^α} − ½ P^α (ln ρ)_{x^α}`
    pub fn subprincipal_symbol(&self, x: &Point4) -> Result<Mat2> {
        let (p, q) = self.coefficients_at(x)?;
        let dl = self.dln_rho_at(x)?;
        let mut sub = q - self.divergence.eval(x)? * C64::new(0.5, 0.0);
        for a in 0..4 {
            sub -= scale(&p[a], dl[a] * 0.5);
        }
        Ok(sub)
    }

    /// `L_csub` as a zeroth-order field: symbolic wherever `L_sub` is, with
    /// `−f(L_prin)` as a computed term when the symbol depends on `x`.
    pub fn csub_field(&self) -> ZerothOrder {
        let half = ScalarFieldExpr::real(0.5);
        let mut correction = self.divergence.scale(&half);
        for a in 0..4 {
            correction = correction.add(&self.p[a].scale(&(half.clone() * self.dln_rho[a].clone())));
        }
        let sub = self.q.plus(&correction.neg());
        if self.pauli.is_constant() {
            sub
        } else {
            let fields = self.pauli.clone();
            sub.with_extra(Arc::new(move |x: &Point4| Ok(-crate::gauge::f_at(&fields, x)?)))
        }
    }

    pub fn symbols(&self, x: &Point4, p: &[f64; 4]) -> Result<SymbolView> {
        let sigma = self.sigma_at(x)?;
        let prin = crate::linalg::contract(&sigma, p);
        let q = self.q.eval(x)?;
        let sub = self.subprincipal_symbol(x)?;
        let csub = sub - crate::gauge::f_at(&self.pauli, x)?;
        Ok(SymbolView {
            full: prin + q,
            prin,
            sub,
            csub,
            sigma,
        })
    }

    /// Formal adjoint with respect to `⟨u, v⟩ = ∫ u* v ρ dx`:
    /// `P̂^α = −(P^α)*`, `Q̂ = Q* − [(P^α)*]_{x^α} − (P^α)*(ln ρ)_{x^α}`.
    pub fn formal_adjoint(&self) -> RawOperator {
        let ps: [MatrixField2; 4] = std::array::from_fn(|a| self.p[a].adjoint());
        let mut correction = MatrixField2::zero();
        for a in 0..4 {
            correction = correction.add(&ps[a].partial(a)).add(&ps[a].scale(&self.dln_rho[a]));
        }
        let q = self.q.adjoint().plus(&correction.neg());
        RawOperator::new(ps.map(|m| m.neg()), q, self.rho.clone())
    }

    /// `(Lv)(x)` given the value and first derivatives `dv[α] = ∂_α v` of a
    /// 2-column at `x`.
    pub fn apply_jet(&self, x: &Point4, v: &[C64; 2], dv: &[[C64; 2]; 4]) -> Result<[C64; 2]> {
        let (p, q) = self.coefficients_at(x)?;
        let mut out = [ZERO; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r] += q[(r, c)] * v[c];
                for a in 0..4 {
                    out[r] += p[a][(r, c)] * dv[a][c];
                }
            }
        }
        Ok(out)
    }

    /// `P^α (∂_α v)(x) + Q(x) v(x)` with symbolic derivatives of `v`.
    pub fn apply(&self, v: &[ScalarFieldExpr; 2], x: &Point4) -> Result<[C64; 2]> {
        let (value, dv) = column_jet(v, x)?;
        self.apply_jet(x, &value, &dv)
    }

    /// Largest entrywise difference of the coefficients `P^α`, `Q` at `x`.
    pub fn coefficient_difference(&self, other: &RawOperator, x: &Point4) -> Result<f64> {
        let (p1, q1) = self.coefficients_at(x)?;
        let (p2, q2) = other.coefficients_at(x)?;
        let mut m = (q1 - q2).iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
        for a in 0..4 {
            m = (p1[a] - p2[a]).iter().fold(m, |acc, z| acc.max(z.norm()));
        }
        Ok(m)
    }
}

/// Value and exact first derivatives of a column of scalar fields.
pub fn column_jet<const N: usize>(v: &[ScalarFieldExpr; N], x: &Point4) -> Result<([C64; N], [[C64; N]; 4])> {
    let mut value = [ZERO; N];
    let mut dv = [[ZERO; N]; 4];
    for (k, e) in v.iter().enumerate() {
        value[k] = e.eval(x)?;
        for (a, row) in dv.iter_mut().enumerate() {
            row[k] = symbolic_partial(e, a).eval(x)?;
        }
    }
    Ok((value, dv))
}
