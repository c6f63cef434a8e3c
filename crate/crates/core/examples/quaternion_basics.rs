//! Hamilton products, imaginary units and the two names of a boundary point.

use slicenorm::{exp_unit, BoundaryPoint, ImaginaryUnit, Quaternion};

fn main() -> slicenorm::Result<()> {
    let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
    println!("ij = {}   ji = {}   ijk = {}", i * j, j * i, i * j * k);

    let q = Quaternion::new(1.0, 2.0, -1.0, 0.5);
    println!("q = {q}\n|q| = {:.9}\nq q^-1 = {}", q.norm(), q * q.inv()?);

    let axis = ImaginaryUnit::new(1.0, 1.0, 0.0)?;
    let a = axis.as_quaternion();
    println!("I = {a}, I^2 = {}", a * a);

    // e^{It} and e^{(-I)(2pi - t)} are the same point
    let t = 0.7;
    let p = exp_unit(&axis, t);
    let mirrored = BoundaryPoint::new(axis, t).mirrored();
    println!("e^(It) = {p}");
    println!("mirror = {}  (difference {:.1e})", mirrored.to_quaternion(), (mirrored.to_quaternion() - p).norm());
    Ok(())
}
