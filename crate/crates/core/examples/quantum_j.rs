//! j^qt(f) for a = T^2 over F_3: limit route against ideal route, and the norm.

use qjinv::{jinv, Field, Poly, QuadUnit};

fn main() -> qjinv::Result<()> {
    let f3 = Field::prime(3)?;
    let u = QuadUnit::new(&Poly::from_ints(&f3, &[0, 0, 1]), f3.one(), 30)?;
    let prec = 30;
    let rep = jinv::jqt(&u, prec, jinv::default_nmax(u.d(), prec))?;
    for e in &rep.entries {
        let v = e.ideal.finite()?;
        println!("i={} l={} agreement={} j={v}", e.i, e.l, e.agreement);
    }
    println!("norm = {}", jinv::norm(&rep.values())?);
    Ok(())
}
