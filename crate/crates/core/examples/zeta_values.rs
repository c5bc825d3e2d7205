//! ζ(q-1) and ζ(q^2-1) of the ideals a_i, with the first-layer closed form.

use qjinv::ideals::{IdealHNF, RingA1};
use qjinv::{zeta, Field, Poly, QuadUnit};

fn main() -> qjinv::Result<()> {
    let f3 = Field::prime(3)?;
    let u = QuadUnit::new(&Poly::from_ints(&f3, &[0, 0, 1]), f3.one(), 30)?;
    let ring = RingA1::new(&u)?;
    for i in 0..u.d() {
        let a = IdealHNF::a_i(&ring, i)?;
        for n in 1..=2 {
            let z = zeta::zeta_ideal(&a, n, 30)?;
            println!("a_{i} n={n} layers={} tail<=q^{} ζ={}", z.layers, z.tail_exp, z.value);
        }
        let nb = a.normalized_basis(6)?;
        let basis = nb.values(&ring, 30)?;
        let om = zeta::check_omega1(&basis, 1, 30)?;
        println!("a_{i} Ω_1 (closed form = direct sum) = {om}");
    }
    Ok(())
}
