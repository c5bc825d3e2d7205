//! Class numbers of `K = k(f)` from point counts of `X^2 - a(T) X - b = 0`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{consistency, Error, Result};
use crate::field::{Fe, Field};
use crate::quadunit::QuadUnit;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassNumbers {
    pub genus: usize,
    /// Point counts over `F_{q^r}`, `r = 1..=genus`, including the two points at infinity.
    pub point_counts: Vec<u64>,
    /// Coefficients of the L-polynomial, constant term first.
    pub l_poly: Vec<i64>,
    /// `h_K = L(1)`.
    pub h_k: i64,
    /// `h_{A1} = h_K`.
    pub h_a1: i64,
    /// `h_{O_K} = h_K / d`.
    pub h_ok: i64,
}

/// `F_{q^r}` with a fixed embedding of `F_q`.
struct Extension {
    big: Field,
    image: Vec<Fe>,
}

impl Extension {
    fn new(small: &Field, r: u32) -> Result<Extension> {
        let big = Field::new(small.p(), small.m() * r, None)?;
        let md = small.modulus();
        // a root of the modulus of F_q inside the big field
        let root = if small.m() == 1 {
            Fe::ZERO
        } else {
            big.elements()
                .find(|&z| {
                    let mut acc = Fe::ZERO;
                    for &c in md.iter().rev() {
                        acc = big.add(big.mul(acc, z), big.from_int(c as i64));
                    }
                    acc.is_zero()
                })
                .ok_or_else(|| consistency!("no root of the modulus in the extension"))?
        };
        let image = small
            .elements()
            .map(|a| {
                let cs = small.coords(a);
                let mut acc = Fe::ZERO;
                for &c in cs.iter().rev() {
                    acc = big.add(big.mul(acc, root), big.from_int(c as i64));
                }
                acc
            })
            .collect();
        Ok(Extension { big, image })
    }
}

/// Number of points of the smooth model over `F_{q^r}`.
fn count_points(u: &QuadUnit, r: u32) -> Result<u64> {
    let ext = Extension::new(u.field(), r)?;
    let big = &ext.big;
    let a: Vec<Fe> = u.a().coeffs().iter().map(|c| ext.image[c.0 as usize]).collect();
    let b = ext.image[u.b().0 as usize];
    let affine: u64 = (0..big.q())
        .into_par_iter()
        .map(|t| {
            let t = Fe(t);
            let at = a.iter().rev().fold(Fe::ZERO, |acc, &c| big.add(big.mul(acc, t), c));
            big.elements()
                .filter(|&x| big.sub(big.mul(x, x), big.add(big.mul(at, x), b)).is_zero())
                .count() as u64
        })
        .sum();
    Ok(affine + 2)
}

/// Class numbers via the L-polynomial of the curve.
pub fn class_numbers(u: &QuadUnit) -> Result<ClassNumbers> {
    let field = u.field();
    let d = u.d();
    let genus = d - 1;
    let smooth = if field.characteristic() == 2 {
        u.a().is_squarefree()
    } else {
        u.disc().is_squarefree()
    };
    if !smooth {
        return Err(Error::Unsupported(
            "the affine model is singular (discriminant not squarefree)".into(),
        ));
    }
    let q = field.q() as i64;
    let counts: Vec<u64> = (1..=genus as u32).map(|r| count_points(u, r)).collect::<Result<_>>()?;
    // s_r = sum alpha_i^r = q^r + 1 - N_r
    let s: Vec<i64> = counts
        .iter()
        .enumerate()
        .map(|(i, &n)| q.pow(i as u32 + 1) + 1 - n as i64)
        .collect();
    let mut l = vec![0i64; 2 * genus + 1];
    l[0] = 1;
    for k in 1..=genus {
        let acc: i64 = (1..=k).map(|i| s[i - 1] * l[k - i]).sum();
        if acc % k as i64 != 0 {
            return Err(consistency!("Newton identity not integral at k = {k}"));
        }
        l[k] = -acc / k as i64;
    }
    for k in 0..genus {
        l[2 * genus - k] = q.pow((genus - k) as u32) * l[k];
    }
    let h_k: i64 = l.iter().sum();
    if h_k % d as i64 != 0 {
        return Err(consistency!("d = {d} does not divide h_K = {h_k}"));
    }
    Ok(ClassNumbers { genus, point_counts: counts, l_poly: l, h_k, h_a1: h_k, h_ok: h_k / d as i64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn unit(p: u32, a: &[i64], b: i64) -> QuadUnit {
        let f = Field::prime(p).unwrap();
        QuadUnit::new(&Poly::from_ints(&f, a), f.from_int(b), 12).unwrap()
    }

    #[test]
    fn genus_zero_is_one() {
        let c = class_numbers(&unit(3, &[0, 1], 1)).unwrap();
        assert_eq!((c.h_k, c.h_a1, c.h_ok), (1, 1, 1));
    }

    #[test]
    fn elliptic_case_counts_points() {
        // genus 1: h_K = #Jac(F_q) = N_1
        let u = unit(3, &[1, 0, 1], 1);
        let c = class_numbers(&u).unwrap();
        assert_eq!(c.h_k, c.point_counts[0] as i64);
        assert_eq!(c.h_k % 2, 0);
    }

    #[test]
    fn singular_model_is_rejected() {
        // D = (T^2)^2 + 4 * 0 is excluded by b != 0; use a^2 + 4b with a repeated factor
        let f = Field::prime(5).unwrap();
        // a = T^2 + 1, b = 1: D = T^4 + 2T^2 + 5 = T^2 (T^2 + 2) over F_5
        let u = QuadUnit::new(&Poly::from_ints(&f, &[1, 0, 1]), f.from_int(1), 12).unwrap();
        assert!(matches!(class_numbers(&u), Err(Error::Unsupported(_))));
    }

    #[test]
    fn extension_counts_agree_with_subfield_embedding() {
        let f = Field::new(3, 2, None).unwrap();
        let u = QuadUnit::new(&Poly::new(&f, vec![Fe(1), Fe(0), Fe(1)]), Fe(1), 12).unwrap();
        let c = class_numbers(&u).unwrap();
        assert_eq!(c.h_k % 2, 0);
    }
}
