use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::fieldlang::Point4;
use crate::linalg::{adj, decompose_hermitian, eta, scale_real, Mat2, Mat4};

use super::pauli::SigmaJet;

/// Hermiticity tolerance for symbol values.
pub const TOL_HERM: f64 = 1e-10;
/// Smallest admissible `|det e_j^α|`.
pub const TOL_DEGENERATE: f64 = 1e-8;
/// Agreement required between the two metric extraction paths.
pub const TOL_METRIC: f64 = 1e-10;

/// Frame `e_j^α`: row `j` is the frame vector, column `α` its component.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub e: Mat4,
    /// Largest anti-Hermitian part found while decomposing `σ^α`.
    pub imaginary_residue: f64,
}

impl Frame {
    pub fn det(&self) -> f64 {
        self.e.determinant()
    }

    /// `max |g_αβ e_j^α e_k^β − diag(1,1,1,−1)_jk|`.
    pub fn orthonormality_residual(&self, metric: &MetricPair) -> f64 {
        let gram = self.e * metric.g_cov * self.e.transpose();
        (gram - eta()).abs().max()
    }
}

/// Decomposes each `σ^α` over the standard basis: `σ^α = s^j e_j^α`.
pub fn frame_of(sigma: &[Mat2; 4]) -> Frame {
    let mut e = Mat4::zeros();
    let mut residue: f64 = 0.0;
    for (a, s) in sigma.iter().enumerate() {
        let (c, r) = decompose_hermitian(s);
        residue = residue.max(r);
        for j in 0..4 {
            e[(j, a)] = c[j];
        }
    }
    Frame {
        e,
        imaginary_residue: residue,
    }
}

/// Frame at a point, rejecting non-Hermitian or degenerate symbols.
pub fn checked_frame(sigma: &[Mat2; 4], x: &Point4) -> Result<Frame> {
    let frame = frame_of(sigma);
    if frame.imaginary_residue > TOL_HERM {
        return Err(Error::NotHermitian {
            what: "principal symbol".into(),
            residual: frame.imaginary_residue,
        });
    }
    let det = frame.det();
    if det.abs() < TOL_DEGENERATE {
        return Err(Error::Degenerate { x: *x, det });
    }
    Ok(frame)
}

/// Contravariant and covariant metric at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricPair {
    pub g_contra: Mat4,
    pub g_cov: Mat4,
    /// `max |g_det − g_frame|` between the two extraction paths.
    pub path_disagreement: f64,
}

impl MetricPair {
    /// Numbers of positive and negative eigenvalues of `g^αβ` (tolerance 1e-10).
    pub fn signature(&self) -> (usize, usize) {
        let eig = SymmetricEigen::new(self.g_contra).eigenvalues;
        let pos = eig.iter().filter(|v| **v > 1e-10).count();
        let neg = eig.iter().filter(|v| **v < -1e-10).count();
        (pos, neg)
    }

    pub fn is_lorentzian(&self) -> bool {
        self.signature() == (3, 1)
    }

    pub fn inverse_residual(&self) -> f64 {
        (self.g_contra * self.g_cov - Mat4::identity()).abs().max()
    }

    pub fn ln_abs_det_cov(&self) -> f64 {
        self.g_cov.determinant().abs().ln()
    }
}

/// `g^αβ` from `det L_prin(x,p) = −g^αβ p_α p_β`, sampled on the covectors
/// `e^α` and `e^α + e^β`.
pub fn metric_from_det(sigma: &[Mat2; 4]) -> (Mat4, f64) {
    let q = |p: [f64; 4]| -> (f64, f64) {
        let m = (0..4).fold(Mat2::zeros(), |acc, a| acc + scale_real(&sigma[a], p[a]));
        let d = -m.determinant();
        (d.re, d.im.abs())
    };
    let unit = |a: usize| -> [f64; 4] { std::array::from_fn(|k| if k == a { 1.0 } else { 0.0 }) };
    let mut g = Mat4::zeros();
    let mut imag: f64 = 0.0;
    let mut diag = [0.0; 4];
    for a in 0..4 {
        let (v, im) = q(unit(a));
        diag[a] = v;
        g[(a, a)] = v;
        imag = imag.max(im);
    }
    for a in 0..4 {
        for b in (a + 1)..4 {
            let mut p = unit(a);
            p[b] = 1.0;
            let (v, im) = q(p);
            imag = imag.max(im);
            let off = 0.5 * (v - diag[a] - diag[b]);
            g[(a, b)] = off;
            g[(b, a)] = off;
        }
    }
    (g, imag)
}

/// `g^αβ = Σ_j η_j e_j^α e_j^β`.
pub fn metric_from_frame(e: &Mat4) -> Mat4 {
    e.transpose() * eta() * e
}

pub fn metric_from_sigma(sigma: &[Mat2; 4], frame: &Frame) -> Result<MetricPair> {
    let (g_det, imag) = metric_from_det(sigma);
    let g_frame = metric_from_frame(&frame.e);
    let g_cov = g_frame
        .try_inverse()
        .ok_or_else(|| Error::Singular("contravariant metric".into()))?;
    Ok(MetricPair {
        g_contra: g_frame,
        g_cov,
        path_disagreement: (g_det - g_frame).abs().max().max(imag),
    })
}

/// Christoffel symbols `Γ^β_{αγ}` stored as `gamma[β][α][γ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    pub gamma: [[[f64; 4]; 4]; 4],
}

impl Christoffel {
    /// `Γ^β_{αγ} = ½ g^{βδ}(∂_α g_{γδ} + ∂_γ g_{αδ} − ∂_δ g_{αγ})` from the
    /// covariant metric derivatives `dg_cov[λ] = ∂_λ g_{··}`.
    pub fn from_metric(g_contra: &Mat4, dg_cov: &[Mat4; 4]) -> Self {
        let mut gamma = [[[0.0; 4]; 4]; 4];
        for (b, gb) in gamma.iter_mut().enumerate() {
            for a in 0..4 {
                for c in a..4 {
                    let mut s = 0.0;
                    for d in 0..4 {
                        s += g_contra[(b, d)] * (dg_cov[a][(c, d)] + dg_cov[c][(a, d)] - dg_cov[d][(a, c)]);
                    }
                    gb[a][c] = 0.5 * s;
                    gb[c][a] = 0.5 * s;
                }
            }
        }
        Christoffel { gamma }
    }

    /// `Γ^β_{αβ}` for each `α`.
    pub fn trace(&self) -> [f64; 4] {
        std::array::from_fn(|a| (0..4).map(|b| self.gamma[b][a][b]).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.gamma.iter().flatten().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn max_difference(&self, other: &Christoffel) -> f64 {
        let mut m: f64 = 0.0;
        for b in 0..4 {
            for a in 0..4 {
                for c in 0..4 {
                    m = m.max((self.gamma[b][a][c] - other.gamma[b][a][c]).abs());
                }
            }
        }
        m
    }
}

/// Everything the identities need at one point, derived from a [`SigmaJet`].
#[derive(Debug, Clone)]
pub struct PointGeometry {
    pub x: Point4,
    pub jet: SigmaJet,
    pub frame: Frame,
    pub metric: MetricPair,
    /// `dframe[γ] = ∂_γ e`
    pub dframe: [Mat4; 4],
    /// `dg_contra[γ] = ∂_γ g^{··}`
    pub dg_contra: [Mat4; 4],
    /// `dg_cov[γ] = ∂_γ g_{··}`
    pub dg_cov: [Mat4; 4],
    pub christoffel: Christoffel,
    /// `(ln|det g_μν|)_{x^α}`, through `|det g_μν| = (det e)^{-2}`.
    pub dln_abs_det_g: [f64; 4],
    /// `σ̃^α = adj σ^α`
    pub sigma_tilde: [Mat2; 4],
    /// `σ_α = g_αβ σ^β`
    pub sigma_lower: [Mat2; 4],
    /// `σ̃_α = g_αβ σ̃^β`
    pub sigma_tilde_lower: [Mat2; 4],
}

/// Lowers the index of a quartet of matrices with `g_cov`.
pub fn lower_index(g_cov: &Mat4, m: &[Mat2; 4]) -> [Mat2; 4] {
    std::array::from_fn(|a| (0..4).fold(Mat2::zeros(), |acc, b| acc + scale_real(&m[b], g_cov[(a, b)])))
}

impl PointGeometry {
    pub fn new(jet: SigmaJet, x: &Point4) -> Result<Self> {
        let frame = checked_frame(&jet.sigma, x)?;
        let metric = metric_from_sigma(&jet.sigma, &frame)?;
        let eta = eta();
        let dframe: [Mat4; 4] = std::array::from_fn(|g| frame_of(&jet.dsigma[g]).e);
        let dg_contra: [Mat4; 4] = std::array::from_fn(|g| {
            let t = dframe[g].transpose() * eta * frame.e;
            t + t.transpose()
        });
        let dg_cov: [Mat4; 4] = std::array::from_fn(|g| -(metric.g_cov * dg_contra[g] * metric.g_cov));
        let christoffel = Christoffel::from_metric(&metric.g_contra, &dg_cov);
        let e_inv = frame
            .e
            .try_inverse()
            .ok_or_else(|| Error::Singular("frame".into()))?;
        let dln_abs_det_g: [f64; 4] = std::array::from_fn(|g| -2.0 * (e_inv * dframe[g]).trace());
        let sigma_tilde = jet.sigma.map(|m| adj(&m));
        let sigma_lower = lower_index(&metric.g_cov, &jet.sigma);
        let sigma_tilde_lower = lower_index(&metric.g_cov, &sigma_tilde);
        Ok(PointGeometry {
            x: *x,
            jet,
            frame,
            metric,
            dframe,
            dg_contra,
            dg_cov,
            christoffel,
            dln_abs_det_g,
            sigma_tilde,
            sigma_lower,
            sigma_tilde_lower,
        })
    }

    pub fn sigma(&self) -> &[Mat2; 4] {
        &self.jet.sigma
    }

    /// `∂σ^α/∂x^γ` as `dsigma()[γ][α]`.
    pub fn dsigma(&self) -> &[[Mat2; 4]; 4] {
        &self.jet.dsigma
    }

    /// Geometry of the adjugate symbol at the same point.
    pub fn adjugate(&self) -> Result<Self> {
        PointGeometry::new(self.jet.adjugate(), &self.x)
    }

    /// `(σ^β)_{x^α} + Γ^β_{αγ} σ^γ` as `[α][β]`.
    pub fn covariant_sigma_derivative(&self) -> [[Mat2; 4]; 4] {
        let gam = &self.christoffel.gamma;
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                (0..4).fold(self.jet.dsigma[a][b], |acc, c| acc + scale_real(&self.jet.sigma[c], gam[b][a][c]))
            })
        })
    }
}
