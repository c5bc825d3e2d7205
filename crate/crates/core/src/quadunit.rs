//! Quadratic units `f` with `f^2 = a f + b`, `b` in `F_q^*`, their conjugates and the
//! approximation polynomials `Q_n`.

use serde::{Deserialize, Serialize};

use crate::error::{consistency, domain, precision, Result};
use crate::field::{Fe, Field, FieldDescriptor};
use crate::laurent::{AbsVal, Laurent};
use crate::poly::Poly;

/// A root of `X^2 - aX - b` in `k_inf`, computed to a fixed relative precision.
#[derive(Clone, Debug)]
pub struct QuadUnit {
    field: Field,
    a: Poly,
    b: Fe,
    d: usize,
    disc: Poly,
    prec: usize,
    f: Laurent,
    fstar: Laurent,
    sqrt_d: Laurent,
}

/// `T^l Q_n` together with the exponent of its distance to `A` after multiplying by `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub n: usize,
    pub l: usize,
    pub poly: Poly,
    pub err_exp: i64,
}

/// Everything needed to rebuild a [`QuadUnit`] bit for bit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadUnitDescriptor {
    #[serde(flatten)]
    pub field: FieldDescriptor,
    /// Coefficients of `a`, constant term first, in element text form.
    pub a: Vec<String>,
    pub b: String,
    pub prec: usize,
}

impl QuadUnit {
    pub fn new(a: &Poly, b: Fe, prec: usize) -> Result<QuadUnit> {
        let field = a.field().clone();
        let d = match a.deg() {
            Some(d) if d >= 1 && a.is_monic() => d,
            _ => return Err(domain!("a must be monic of degree at least 1")),
        };
        if b.is_zero() {
            return Err(domain!("b must be a nonzero constant"));
        }
        if prec < 2 * d + 1 {
            return Err(precision!("precision {prec} too small for degree {d}"));
        }
        let four_b = Poly::constant(&field, field.mul(field.from_int(4), b));
        let disc = &(a * a) + &four_b;

        let al = Laurent::from_poly(a);
        let bl = Laurent::constant(&field, b);
        let mut x = al.truncate(prec);
        let iters = (usize::BITS - (prec - 1).leading_zeros()) as usize + 2;
        for _ in 0..iters {
            let g = &(&(&x * &x) - &(&al * &x)) - &bl;
            let dg = &x.scale(field.from_int(2)) - &al;
            x = &x - &g.div(&dg.truncate(prec))?;
            x = x.truncate(prec);
        }
        let resid = &(&(&x * &x) - &(&al * &x)) - &bl;
        if resid.is_nonzero() {
            return Err(consistency!("Newton iteration did not converge: residual {resid}"));
        }
        let fstar = &al - &x;
        let sqrt_d = if field.characteristic() == 2 { al.clone() } else { &x - &fstar };
        Ok(QuadUnit { field, a: a.clone(), b, d, disc, prec, f: x, fstar, sqrt_d })
    }

    pub fn from_descriptor(desc: &QuadUnitDescriptor) -> Result<QuadUnit> {
        let field = Field::from_descriptor(&desc.field)?;
        let a = desc.a.iter().map(|c| field.parse_elem(c)).collect::<Result<Vec<_>>>()?;
        let b = field.parse_elem(&desc.b)?;
        QuadUnit::new(&Poly::new(&field, a), b, desc.prec)
    }

    pub fn descriptor(&self) -> QuadUnitDescriptor {
        QuadUnitDescriptor {
            field: self.field.descriptor(),
            a: self.a.coeffs().iter().map(|&c| self.field.format_elem(c)).collect(),
            b: self.field.format_elem(self.b),
            prec: self.prec,
        }
    }

    /// The same unit recomputed at another precision.
    pub fn with_prec(&self, prec: usize) -> Result<QuadUnit> {
        QuadUnit::new(&self.a, self.b, prec)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn a(&self) -> &Poly {
        &self.a
    }
    pub fn b(&self) -> Fe {
        self.b
    }
    pub fn d(&self) -> usize {
        self.d
    }
    /// `D = a^2 + 4b`.
    pub fn disc(&self) -> &Poly {
        &self.disc
    }
    pub fn prec(&self) -> usize {
        self.prec
    }
    /// The large root, `|f| = q^d`.
    pub fn f(&self) -> &Laurent {
        &self.f
    }
    /// The small root `a - f`, `|f*| = q^-d`.
    pub fn fstar(&self) -> &Laurent {
        &self.fstar
    }
    /// `f - f*`, which squares to `D`; equal to `a` in characteristic 2.
    pub fn sqrt_d(&self) -> &Laurent {
        &self.sqrt_d
    }

    /// `Q_0 = 1`, `Q_1 = a`, `Q_{n+1} = a Q_n + b Q_{n-1}`.
    pub fn q_n(&self, n: usize) -> Poly {
        self.q_table(n).pop().unwrap()
    }

    /// `[Q_0, ..., Q_n]`.
    pub fn q_table(&self, n: usize) -> Vec<Poly> {
        let mut t = vec![Poly::one(&self.field)];
        if n >= 1 {
            t.push(self.a.clone());
        }
        for k in 2..=n {
            let next = &(&self.a * &t[k - 1]) + &t[k - 2].scale(self.b);
            t.push(next);
        }
        t
    }

    pub fn basis_element(&self, n: usize, l: usize) -> Result<BasisElement> {
        if l >= self.d {
            return Err(domain!("l = {l} must be below d = {}", self.d));
        }
        Ok(BasisElement {
            n,
            l,
            poly: self.q_n(n).shift(l),
            err_exp: l as i64 - ((n + 1) * self.d) as i64,
        })
    }

    /// `|T^l Q_n f - T^l Q_{n+1}| = q^{l-(n+1)d}`, certified against the computed series.
    pub fn error(&self, n: usize, l: usize) -> Result<AbsVal> {
        let e = self.basis_element(n, l)?;
        let prod = &Laurent::from_poly(&e.poly) * &self.f;
        if prod.floor().is_some_and(|fl| fl >= e.err_exp) {
            return Err(precision!(
                "precision {} cannot certify the error of T^{l} Q_{n} (need more than {})",
                self.prec,
                2 * (n + 1) * self.d
            ));
        }
        let (near, dist) = prod.nearest_poly()?;
        let expected = self.q_n(n + 1).shift(l);
        if near != expected {
            return Err(consistency!("nearest polynomial to T^{l} Q_{n} f is not T^{l} Q_{}", n + 1));
        }
        if dist != AbsVal::Pow(e.err_exp) {
            return Err(consistency!("error of T^{l} Q_{n} f is {dist}, expected q^{}", e.err_exp));
        }
        Ok(dist)
    }

    /// `|(f - f*) Q_n - (f^{n+1} - f*^{n+1})|`, which vanishes to working precision.
    pub fn binet_residual(&self, n: usize) -> Result<AbsVal> {
        let lhs = &self.sqrt_d * &Laurent::from_poly(&self.q_n(n));
        let rhs = &self.f.pow(n as i64 + 1)? - &self.fstar.pow(n as i64 + 1)?;
        Ok((&lhs - &rhs).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(p: u32, a: &[i64], b: i64, prec: usize) -> QuadUnit {
        let f = Field::prime(p).unwrap();
        QuadUnit::new(&Poly::from_ints(&f, a), f.from_int(b), prec).unwrap()
    }

    #[test]
    fn root_over_f3() {
        let u = unit(3, &[0, 1], 1, 12);
        let fl = u.field().clone();
        let want = Laurent::from_coeffs(&fl, 1, [1, 0, 1, 0, 2].iter().map(|&c| fl.from_int(c)).collect());
        assert_eq!(u.f().truncate(5), want);
        assert_eq!(u.f().abs(), AbsVal::Pow(1));
        assert_eq!(u.fstar().abs(), AbsVal::Pow(-1));
        assert_eq!((u.f() * u.fstar()).abs(), AbsVal::Pow(0));
        let sum = u.f() + u.fstar();
        assert_eq!(sum.truncate_abs(-5), Laurent::from_poly(u.a()).truncate_abs(-5));
    }

    #[test]
    fn char_two_sqrt_d_is_a() {
        let u = unit(2, &[0, 1], 1, 10);
        assert_eq!(u.sqrt_d(), &Laurent::from_poly(u.a()));
        assert!(u.sqrt_d().is_exact());
    }

    #[test]
    fn rejects_bad_input() {
        let f = Field::prime(3).unwrap();
        assert!(QuadUnit::new(&Poly::from_ints(&f, &[0, 2]), Fe(1), 10).is_err());
        assert!(QuadUnit::new(&Poly::from_ints(&f, &[1]), Fe(1), 10).is_err());
        assert!(QuadUnit::new(&Poly::from_ints(&f, &[0, 1]), Fe(0), 10).is_err());
    }

    #[test]
    fn q_n_recurrence() {
        let u = unit(3, &[0, 1], 1, 10);
        assert!(u.q_n(0).is_one());
        assert_eq!(u.q_n(2), Poly::from_ints(u.field(), &[1, 0, 1]));
        for n in 0..8 {
            let q = u.q_n(n);
            assert_eq!(q.deg(), Some(n));
            assert!(q.is_monic());
        }
    }

    #[test]
    fn errors_follow_the_law() {
        let u = unit(3, &[0, 1], 1, 20);
        assert_eq!(u.error(2, 0).unwrap(), AbsVal::Pow(-3));
        let u2 = unit(3, &[0, 0, 1], 1, 20);
        assert_eq!(u2.error(1, 1).unwrap(), AbsVal::Pow(-3));
        for n in 0..=6 {
            for l in 0..2 {
                u2.with_prec(40).unwrap().error(n, l).unwrap();
            }
        }
        assert!(matches!(u.error(12, 0), Err(crate::Error::Precision(_))));
    }

    #[test]
    fn binet_holds() {
        for u in [unit(3, &[0, 1], 1, 30), unit(2, &[1, 1, 1], 1, 30), unit(5, &[2, 0, 1], 3, 30)] {
            for n in 0..=8 {
                let r = u.binet_residual(n).unwrap();
                assert!(!matches!(r, AbsVal::Pow(_)), "n={n}: {r}");
            }
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let f = Field::new(3, 2, None).unwrap();
        let u = QuadUnit::new(&Poly::new(&f, vec![Fe(4), Fe(0), Fe(1)]), Fe(7), 16).unwrap();
        let json = serde_json::to_string(&u.descriptor()).unwrap();
        let back = QuadUnit::from_descriptor(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.f(), u.f());
    }
}
