//! Mean of |1 - IJ| over the sphere: plain Gauss-Legendre against a rule
//! graded toward the kink at J = -I.

use slicenorm::norm::{sphere_moment, sphere_moment_quadrature, sphere_moment_with};
use slicenorm::{ImaginaryUnit, SphereRule};

fn main() -> slicenorm::Result<()> {
    let exact = sphere_moment(1.0)?;
    println!("exact {exact:.12}");
    println!("{:>8} {:>14} {:>14}", "n_polar", "plain error", "graded error");
    for n in [4, 8, 16, 32, 48, 64] {
        let plain = sphere_moment_with(&SphereRule::gauss_legendre(n, 2 * n)?, &ImaginaryUnit::I, 1.0);
        let graded = sphere_moment_quadrature(1.0, &ImaginaryUnit::I, n, 2 * n)?;
        println!("{n:>8} {:>14.3e} {:>14.3e}", (plain - exact).abs(), (graded - exact).abs());
    }

    for q in [0.5, 2.0, 3.0, 5.0] {
        let axis = ImaginaryUnit::new(0.3, -0.2, 0.9)?;
        let v = sphere_moment_quadrature(q, &axis, 48, 96)?;
        println!("q = {q}: quadrature {v:.12}, closed form {:.12}", sphere_moment(q)?);
    }
    Ok(())
}
