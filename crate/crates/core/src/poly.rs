//! Dense univariate polynomials over `F_q`.
//!
//! Used both for `A = F_q[T]` and for the coefficient ring `F_q[f]` of ideal
//! matrices; the indeterminate is only a display name.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{domain, Result};
use crate::field::{Fe, Field};

/// A polynomial with coefficients listed from the constant term upward.
/// The representation is canonical: no trailing zero coefficients, the zero
/// polynomial has an empty list.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("T"))
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    /// Builds from integer coefficients reduced into the prime subfield.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Fe::ONE)
    }

    pub fn constant(field: &Field, c: Fe) -> Poly {
        Poly::new(field, vec![c])
    }

    /// `c * X^n`.
    pub fn monomial(field: &Field, c: Fe, n: usize) -> Poly {
        let mut coeffs = vec![Fe::ZERO; n + 1];
        coeffs[n] = c;
        Poly::new(field, coeffs)
    }

    /// The indeterminate `X`.
    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field, Fe::ONE, 1)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Coefficient of `X^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [Fe::ONE]
    }

    /// Degree, `None` standing for `-infinity`.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree as a signed integer with `-1` for the zero polynomial.
    pub fn deg_i(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Fe::ONE
    }

    pub fn scale(&self, c: Fe) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplies by `X^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Fe::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { field: self.field.clone(), coeffs }
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.field.inv(self.lead()) {
            Ok(inv) => self.scale(inv),
            Err(_) => self.clone(),
        }
    }

    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        let f = &self.field;
        let db = b.deg().ok_or_else(|| domain!("polynomial division by zero"))?;
        let inv_lead = f.inv(b.lead())?;
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![Fe::ZERO; r.len() - db];
        for k in (db..r.len()).rev() {
            let c = f.mul(r[k], inv_lead);
            if c.is_zero() {
                continue;
            }
            quot[k - db] = c;
            for (i, &bi) in b.coeffs.iter().enumerate() {
                let idx = k - db + i;
                r[idx] = f.sub(r[idx], f.mul(c, bi));
            }
        }
        r.truncate(db);
        Ok((Poly::new(f, quot), Poly::new(f, r)))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(b)?.1)
    }

    /// Exact quotient; errors if `b` does not divide `self`.
    pub fn exact_div(&self, b: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(b)?;
        if !r.is_zero() {
            return Err(domain!("{self:?} is not divisible by {b:?}"));
        }
        Ok(q)
    }

    /// Extended gcd: `(g, s, t)` with `s*a + t*b = g` and `g` monic (or zero).
    pub fn xgcd(a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let f = a.field.clone();
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(&f), Poly::zero(&f));
        let (mut t0, mut t1) = (Poly::zero(&f), Poly::one(&f));
        while !r1.is_zero() {
            let (qq, r) = r0.divmod(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&qq * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&qq * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead()).expect("nonzero lead");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        Poly::xgcd(a, b).0
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect();
        Poly::new(f, coeffs)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut r = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        r
    }

    /// True when the polynomial has no repeated factor.
    pub fn is_squarefree(&self) -> bool {
        match self.deg() {
            None => false,
            Some(0) => true,
            Some(_) => Poly::gcd(self, &self.derivative()).deg() == Some(0),
        }
    }

    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = f.format_elem(c);
            let cs = cs.trim_start_matches('0');
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(match (cs, i) {
                (_, 0) => cs.to_string(),
                ("1", _) => mono,
                _ => format!("{cs}*{mono}"),
            });
        }
        terms.join(" + ")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn product_over_f3() {
        let f = f3();
        let a = Poly::from_ints(&f, &[1, 1]);
        let b = Poly::from_ints(&f, &[2, 1]);
        assert_eq!(&a * &b, Poly::from_ints(&f, &[2, 0, 1]));
    }

    #[test]
    fn divmod_basic() {
        let f = f3();
        let a = Poly::from_ints(&f, &[1, 0, 1]);
        let (q, r) = a.divmod(&Poly::x(&f)).unwrap();
        assert_eq!(q, Poly::x(&f));
        assert_eq!(r, Poly::one(&f));
        assert!(a.divmod(&Poly::zero(&f)).is_err());
    }

    #[test]
    fn zero_degree_is_minus_infinity() {
        let f = f3();
        assert_eq!(Poly::zero(&f).deg(), None);
        assert_eq!(Poly::from_ints(&f, &[0, 0, 3]).deg(), None);
    }

    fn arb_poly() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(0i64..5, 0..8)
    }

    proptest! {
        #[test]
        fn additive_inverse(c in arb_poly()) {
            let f = Field::prime(5).unwrap();
            let a = Poly::from_ints(&f, &c);
            prop_assert!((&a + &(-&a)).is_zero());
        }

        #[test]
        fn division_identity(a in arb_poly(), b in arb_poly()) {
            let f = Field::prime(5).unwrap();
            let a = Poly::from_ints(&f, &a);
            let b = Poly::from_ints(&f, &b);
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.deg_i() < b.deg_i());
        }

        #[test]
        fn xgcd_bezout(a in arb_poly(), b in arb_poly()) {
            let f = Field::prime(5).unwrap();
            let a = Poly::from_ints(&f, &a);
            let b = Poly::from_ints(&f, &b);
            let (g, s, t) = Poly::xgcd(&a, &b);
            prop_assert_eq!(&(&s * &a) + &(&t * &b), g.clone());
            if !g.is_zero() {
                prop_assert!(a.rem(&g).unwrap().is_zero());
                prop_assert!(b.rem(&g).unwrap().is_zero());
            }
        }
    }
}
