//! Extract the frame, Lorentzian metric and Christoffel symbols implied by an
//! x-dependent principal symbol, and check the Clifford identity.

use opgeom::fieldlang::parse_scalar_expr;
use opgeom::geometry::{christoffel_fd_at, clifford_residual, geometry_at, PauliFields};
use opgeom::linalg::{standard_basis, MatrixField2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // σ^α = e^{2ψ} s^α with ψ = 0.3 x1: a conformally flat metric.
    let w = parse_scalar_expr("exp(0.6*x1)")?;
    let sigma = PauliFields::new(std::array::from_fn(|a| MatrixField2::constant(&standard_basis(a)).scale(&w)));
    let x = [0.2, 0.0, -0.1, 0.3];
    let geom = geometry_at(&sigma, &x)?;

    println!("frame e_j^α:{:.6}", geom.frame.e);
    println!("g^αβ:{:.6}", geom.metric.g_contra);
    println!("signature (positive, negative) = {:?}", geom.metric.signature());
    println!("det-path vs frame-path metric disagreement {:.1e}", geom.metric.path_disagreement);
    println!("∂ ln|det g| = {:?}", geom.dln_abs_det_g);

    let fd = christoffel_fd_at(&sigma, &x)?;
    println!("max |Γ| = {:.6}, |Γ − Γ_fd| = {:.1e}", geom.christoffel.max_abs(), geom.christoffel.max_difference(&fd));

    let (p, q) = ([1.0, 0.5, -0.3, 2.0], [0.2, -1.0, 0.7, 0.4]);
    println!("Clifford residual {:.1e}", clifford_residual(geom.sigma(), &geom.metric.g_contra, &p, &q));
    Ok(())
}
