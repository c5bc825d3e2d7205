//! The ideals a_i = (f, fT, ..., fT^i) of A1, their powers and classes.

use qjinv::ideals::{IdealHNF, RingA1};
use qjinv::{Field, Poly, QuadUnit};

fn main() -> qjinv::Result<()> {
    let f3 = Field::prime(3)?;
    let u = QuadUnit::new(&Poly::from_ints(&f3, &[0, 0, 0, 1]), f3.one(), 30)?;
    let ring = RingA1::new(&u)?;
    let d = ring.d();
    let top = IdealHNF::a_i(&ring, d - 1)?;
    println!("residue dimension of a_(d-1): {}", top.residue_dim());
    for i in 1..=d {
        let lhs = top.pow(i)?;
        let rhs = IdealHNF::a_i(&ring, (d - i) % d)?;
        println!("a_(d-1)^{i} = a_{}: {}", (d - i) % d, rhs.same_class(&lhs)?);
    }
    for i in 0..d {
        let a = IdealHNF::a_i(&ring, i)?;
        println!("a_{i} principal: {}", a.is_principal());
    }
    Ok(())
}
