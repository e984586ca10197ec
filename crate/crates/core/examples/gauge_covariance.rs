//! Apply an x-dependent SL(2,C) gauge transformation and check that the
//! covariant subprincipal symbol and the potential transform as they should,
//! while the plain subprincipal symbol picks up derivative terms.

use opgeom::fieldlang::{parse_scalar_expr, ChartBox};
use opgeom::gauge::{covariance_residuals, csub_at, extract_a_at, f_at, transform, GaugeField};
use opgeom::linalg::{norm2, standard_basis, MatrixField2};
use opgeom::operator::reconstruct;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let chart = ChartBox::new([-0.5; 4], [0.5; 4], 3, 50)?;
    let sigma: [MatrixField2; 4] = std::array::from_fn(|a| MatrixField2::constant(&standard_basis(a)));
    let a = ["0.1*x2", "0", "0.2", "0.5"].map(|s| parse_scalar_expr(s).unwrap());
    let csub = (0..4).fold(MatrixField2::zero(), |acc, k| acc.add(&sigma[k].scale(&a[k])));
    let op = reconstruct(sigma, csub, parse_scalar_expr("1")?, &chart)?;

    let r = MatrixField2::parse(&[["1 + 0.3*x1", "0.3*i*x1"], ["0.3*i*x1", "1 - 0.3*x1"]])?;
    let gauge = GaugeField::Sl2cR(r.clone());
    gauge.validate(&chart)?;
    let t = transform(&op, &gauge);

    let x = [0.2, -0.1, 0.3, 0.1];
    let rv = r.eval(&x)?;
    let expected = rv.adjoint() * csub_at(&op, &x)? * rv;
    println!("‖f(R*σR)‖ = {:.4} (nonzero: the symbol now depends on x)", norm2(&f_at(t.pauli(), &x)?));
    println!("‖csub(R*LR) − R* csub(L) R‖ = {:.1e}", norm2(&(csub_at(&t, &x)? - expected)));
    println!("A before {:?}", extract_a_at(&op, &x)?.a);
    println!("A after  {:?}", extract_a_at(&t, &x)?.a);

    for g in [
        GaugeField::ScalarPsi(parse_scalar_expr("0.2*x4")?),
        GaugeField::PhasePhi(parse_scalar_expr("0.3*x3 - 0.2*x1*x2")?),
        gauge,
    ] {
        let rep = covariance_residuals(&op, &g, &chart)?;
        println!(
            "{:<10} sub law {:.1e}  csub law {:.1e}  A law {:.1e}  f covariance {:.1e}",
            g.kind_name(),
            rep.sub_law.value,
            rep.csub_law.value,
            rep.potential_law.value,
            rep.f_covariance.value
        );
    }
    Ok(())
}
