//! Λ_ε(f) two ways: from the Binet blocks and by solving ‖λ f‖ < ε directly.

use qjinv::lattice;
use qjinv::{Field, Poly, QuadUnit};

fn main() -> qjinv::Result<()> {
    let f3 = Field::prime(3)?;
    let u = QuadUnit::new(&Poly::from_ints(&f3, &[0, 0, 1]), f3.one(), 40)?;
    let degbound = 8;
    for e in 0..=6usize {
        let (n, l) = (e / u.d(), e % u.d());
        let st = lattice::structural(&u, n, l, degbound)?;
        let bf = lattice::bruteforce(u.f(), e as i64, degbound)?;
        println!("e={e} degrees={:?} same span: {}", bf.degrees(), st.same_span(&bf));
    }
    let ren = lattice::renormalized(&u, 3, 0, 6, 30)?;
    print!("{}", ren.to_csv());
    Ok(())
}
