//! The unit f = T^2 + ... over F_3 with its Binet polynomials and approximation errors.

use qjinv::{Field, Poly, QuadUnit};

fn main() -> qjinv::Result<()> {
    let f3 = Field::prime(3)?;
    let a = Poly::from_ints(&f3, &[1, 0, 1]);
    let u = QuadUnit::new(&a, f3.one(), 24)?;
    println!("f   = {}", u.f());
    println!("f*  = {}", u.fstar());
    println!("√D  = {}", u.sqrt_d());
    for n in 0..5 {
        for l in 0..u.d() {
            println!("n={n} l={l} Q_n={:<12} ‖T^l Q_n f‖ = {}", u.q_n(n).display("T"), u.error(n, l)?);
        }
    }
    Ok(())
}
