//! Frame, metric, Christoffel symbols and Pauli-matrix identities extracted
//! from a principal symbol.

mod frame;
mod identities;
mod pauli;

pub use frame::{
    checked_frame, frame_of, lower_index, metric_from_det, metric_from_frame, metric_from_sigma, Christoffel, Frame,
    MetricPair, PointGeometry, TOL_DEGENERATE, TOL_HERM, TOL_METRIC,
};
pub use identities::{adjugate_frame_relation, clifford_residual, pauli_sandwich_residuals};
pub use pauli::{PauliFields, SigmaJet};

use crate::error::Result;
use crate::fieldlang::{default_step, richardson, Point4};
use crate::linalg::Mat4;

pub fn frame_at(sigma: &PauliFields, x: &Point4) -> Result<Frame> {
    checked_frame(&sigma.sigma_at(x)?, x)
}

pub fn metric_at(sigma: &PauliFields, x: &Point4) -> Result<MetricPair> {
    let s = sigma.sigma_at(x)?;
    let frame = checked_frame(&s, x)?;
    metric_from_sigma(&s, &frame)
}

pub fn geometry_at(sigma: &PauliFields, x: &Point4) -> Result<PointGeometry> {
    PointGeometry::new(sigma.jet(x)?, x)
}

/// Christoffel symbols from the exact derivatives of the frame.
pub fn christoffel_at(sigma: &PauliFields, x: &Point4) -> Result<Christoffel> {
    Ok(geometry_at(sigma, x)?.christoffel)
}

/// Christoffel symbols from finite differences of `g_{αβ}` evaluated at
/// shifted points; shares nothing with the frame-derivative path.
pub fn christoffel_fd_at(sigma: &PauliFields, x: &Point4) -> Result<Christoffel> {
    let metric = metric_at(sigma, x)?;
    let mut dg_cov = [Mat4::zeros(); 4];
    for (l, d) in dg_cov.iter_mut().enumerate() {
        *d = richardson(|p| metric_at(sigma, p).map(|m| m.g_cov), x, l, default_step(x, l))?;
    }
    Ok(Christoffel::from_metric(&metric.g_contra, &dg_cov))
}
