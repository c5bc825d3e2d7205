//! A polynomial relation over F_2(T) for j((1)) of a = T, re-verified at double precision.

use qjinv::ideals::RingA1;
use qjinv::{algrec, jinv, Field, Poly, QuadUnit};

fn main() -> qjinv::Result<()> {
    let f2 = Field::prime(2)?;
    let u = QuadUnit::new(&Poly::from_ints(&f2, &[0, 1]), f2.one(), 40)?;
    let ring = RingA1::new(&u)?;
    let j = jinv::j_ideal(&ring, 0, 40)?;
    let Some(mut rel) = algrec::minpoly_search(j.finite()?, 2, 9)? else {
        println!("no relation within the bounds");
        return Ok(());
    };
    for (i, c) in rel.coeffs.iter().enumerate() {
        println!("c_{i} = {}", c.display("T"));
    }
    let ok = algrec::verify_relation(&mut rel, 80, |p| Ok(jinv::j_ideal(&ring, 0, p)?.finite()?.clone()));
    println!("verified at 80: {ok}, residual <= q^{}", rel.residual_exp);
    Ok(())
}
