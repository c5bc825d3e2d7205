//! Leading coefficients of j_ε(f) along ε = q^-e: they repeat with period d in e.

use qjinv::{cli, Field, Poly, QuadUnit};

fn main() -> qjinv::Result<()> {
    let f3 = Field::prime(3)?;
    let u = QuadUnit::new(&Poly::from_ints(&f3, &[1, 0, 0, 1]), f3.one(), 20)?;
    println!("e,N,l,lead_exp,coeffs");
    for r in cli::portrait(&u, 6, 20)? {
        let lead = r.lead_exp.map_or("inf".to_string(), |e| e.to_string());
        println!("{},{},{},{},{}", r.e, r.n, r.l, lead, r.coeffs.join(" "));
    }
    Ok(())
}
