//! Class numbers h_K, h_A1 and h_OK from point counts for a few curves.

use qjinv::{classnum, Field, Poly, QuadUnit};

fn main() -> qjinv::Result<()> {
    for (p, a) in [(3, vec![0, 1]), (3, vec![0, 0, 1]), (3, vec![1, 0, 1]), (2, vec![1, 1, 1]), (3, vec![1, 2, 0, 1])] {
        let f = Field::prime(p)?;
        let u = QuadUnit::new(&Poly::from_ints(&f, &a), f.one(), 12)?;
        match classnum::class_numbers(&u) {
            Ok(c) => println!("q={p} a={}: h_K={} h_OK={} L={:?}", u.a().display("T"), c.h_k, c.h_ok, c.l_poly),
            Err(e) => println!("q={p} a={}: {e}", u.a().display("T")),
        }
    }
    Ok(())
}
