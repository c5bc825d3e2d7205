//! j_ε is infinite on elements of F_q(T) and finite on a quadratic unit.

use qjinv::{jinv, Fe, Field, Laurent, Poly, QuadUnit};

fn main() -> qjinv::Result<()> {
    let f3 = Field::prime(3)?;
    let t = Laurent::monomial(&f3, Fe::ONE, 1);
    let den = Laurent::from_poly(&Poly::from_ints(&f3, &[2, 0, 1])).inv_to(200)?;
    let r = &Laurent::from_poly(&Poly::from_ints(&f3, &[1, 1])) * &den;
    for (name, x) in [("T", t), ("(T+1)/(T^2+2)", r)] {
        let j = jinv::j_bruteforce(&x, 6, 12)?;
        println!("j_ε({name}) infinite: {}", j.is_infinite());
    }
    let u = QuadUnit::new(&Poly::from_ints(&f3, &[0, 1]), f3.one(), 200)?;
    let j = jinv::j_bruteforce(u.f(), 6, 12)?;
    println!("j_ε(f) = {}", j.finite()?);
    Ok(())
}
