//! Algebraic identities satisfied by the Pauli matrices extracted from a
//! principal symbol. Each function returns a residual norm.

use crate::linalg::{adj, contract, metric_spinor, norm2, scale, scale_real, Mat2, Mat4, C64};

use super::frame::{frame_of, lower_index};

/// Polarized Clifford identities
/// `L(p) adj L(q) + L(q) adj L(p) = −2I g(p,q)` and the adjugate-first variant.
/// Returns the larger of the two residuals.
pub fn clifford_residual(sigma: &[Mat2; 4], g_contra: &Mat4, p: &[f64; 4], q: &[f64; 4]) -> f64 {
    let lp = contract(sigma, p);
    let lq = contract(sigma, q);
    let ap = adj(&lp);
    let aq = adj(&lq);
    let mut gpq = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            gpq += g_contra[(a, b)] * p[a] * q[b];
        }
    }
    let rhs = scale_real(&Mat2::identity(), -2.0 * gpq);
    let r1 = norm2(&(lp * aq + lq * ap - rhs));
    let r2 = norm2(&(ap * lq + aq * lp - rhs));
    r1.max(r2)
}

/// Sandwich identities `σ_α P σ̃^α = −2 (tr P) I` and `σ_α P σ^α = 2 adj P`.
pub fn pauli_sandwich_residuals(sigma: &[Mat2; 4], g_cov: &Mat4, p: &Mat2) -> (f64, f64) {
    let lower = lower_index(g_cov, sigma);
    let mut first = Mat2::zeros();
    let mut second = Mat2::zeros();
    for a in 0..4 {
        first += lower[a] * p * adj(&sigma[a]);
        second += lower[a] * p * sigma[a];
    }
    let trace = p.trace();
    let r1 = norm2(&(first + scale(&Mat2::identity(), C64::new(2.0, 0.0) * trace)));
    let r2 = norm2(&(second - scale_real(&adj(p), 2.0)));
    (r1, r2)
}

/// Residuals of the two descriptions of `adj σ^α`:
/// its frame is the spatial inversion `(−e₁, −e₂, −e₃, e₄)` of the frame of
/// `σ^α`, and it equals the spinor-index construction `−ε (σ^α)ᵀ ε`.
pub fn adjugate_frame_relation(sigma: &[Mat2; 4]) -> (f64, f64) {
    let tilde = sigma.map(|m| adj(&m));
    let e = frame_of(sigma).e;
    let et = frame_of(&tilde).e;
    let mut inverted = e;
    for j in 0..3 {
        for a in 0..4 {
            inverted[(j, a)] = -e[(j, a)];
        }
    }
    let frame_res = (et - inverted).abs().max();
    let eps = metric_spinor();
    let spinor_res = (0..4)
        .map(|a| norm2(&(tilde[a] + eps * sigma[a].transpose() * eps)))
        .fold(0.0_f64, f64::max);
    (frame_res, spinor_res)
}
