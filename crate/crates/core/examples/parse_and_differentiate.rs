//! Parse a scalar field, differentiate it exactly, and compare with a
//! Richardson-extrapolated finite difference.

use opgeom::fieldlang::{default_step, numeric_partial, parse_scalar_expr, symbolic_partial};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = parse_scalar_expr("exp(2*(0.3*x1 + 0.2*sin(x2 + x4))) * (1 + i*x3^2)")?;
    let x = [0.1, -0.2, 0.3, 0.4];
    println!("f      = {f}");
    println!("f(x)   = {}", f.eval(&x)?);
    for a in 0..4 {
        let d = symbolic_partial(&f, a);
        let exact = d.eval(&x)?;
        let fd = numeric_partial(&f, &x, a, default_step(&x, a))?;
        println!("∂f/∂x{} = {d}", a + 1);
        println!("        exact {exact:.12}  fd {fd:.12}  |diff| {:.1e}", (exact - fd).norm());
    }
    // Printing is canonical: parse(print(e)) == e.
    assert_eq!(parse_scalar_expr(&f.to_string())?, f);
    Ok(())
}
