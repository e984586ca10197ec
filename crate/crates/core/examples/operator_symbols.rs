//! Build a formally self-adjoint operator from its principal symbol and
//! covariant subprincipal symbol, then inspect its symbols and formal adjoint.

use opgeom::fieldlang::{parse_scalar_expr, ChartBox};
use opgeom::linalg::{hermiticity_residual, standard_basis, MatrixField2};
use opgeom::operator::{check_nondegenerate, check_selfadjoint, reconstruct};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let chart = ChartBox::new([-0.5; 4], [0.5; 4], 7, 50)?;
    let sigma: [MatrixField2; 4] = std::array::from_fn(|a| MatrixField2::constant(&standard_basis(a)));
    // csub = 0.5 cos(x1) s⁴, a plane electromagnetic wave.
    let csub = MatrixField2::scalar(parse_scalar_expr("0.5*cos(x1)")?);
    let rho = parse_scalar_expr("exp(0.2*x2)")?;
    let op = reconstruct(sigma, csub, rho, &chart)?;

    let x = [0.1, 0.2, -0.1, 0.3];
    let p = [0.5, -1.0, 0.25, 2.0];
    let s = op.symbols(&x, &p)?;
    println!("P^α, Q reconstructed; at x = {x:?}, p = {p:?}:");
    println!("full symbol {:.6}", s.full);
    println!("principal   {:.6}", s.prin);
    println!("subprincipal {:.6}", s.sub);
    println!("Hermiticity of prin / sub: {:.1e} / {:.1e}", hermiticity_residual(&s.prin), hermiticity_residual(&s.sub));

    let adjoint = op.formal_adjoint();
    println!("max |coefficients of L* − L| = {:.1e}", adjoint.coefficient_difference(&op, &x)?);

    let sa = check_selfadjoint(&op, &chart)?;
    let nd = check_nondegenerate(&op, &chart)?;
    println!("sampled self-adjointness passes: {}", sa.passes(1e-10));
    println!("sampled min |det e| = {:.3} (non-degenerate: {})", nd.min_abs_det, nd.passes());
    Ok(())
}
