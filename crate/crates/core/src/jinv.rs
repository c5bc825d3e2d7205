//! The modular invariant `j = 1 / (1/(T^q - T) - J)` of a rank-2 lattice, where
//! `J = (T^{q^2} - T) / (T^q - T)^{q+1} · ζ(q^2 - 1) / ζ(q - 1)^{q+1}`, evaluated on
//! approximation lattices and on ideals of `A1`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{consistency, domain, precision, Result};
use crate::field::{Fe, Field};
use crate::ideals::{IdealHNF, RingA1};
use crate::laurent::{AbsVal, Laurent};
use crate::poly::Poly;
use crate::quadunit::QuadUnit;
use crate::zeta::{self, ZetaValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JRoute {
    /// Renormalized approximation lattice at `ε = q^-(Nd+l)`.
    Eps { n: usize, l: usize },
    /// Directly solved approximation lattice of an arbitrary series.
    BruteForce { eps_exp: i64 },
    /// The ideal `a_i` of `A1`.
    Ideal { i: usize },
    /// Some other ideal of `A1`.
    OtherIdeal,
}

/// A j-value, or infinity when the discriminant vanishes to precision.
#[derive(Clone, Debug, Serialize)]
pub struct JValue {
    pub route: JRoute,
    /// `None` encodes infinity.
    pub value: Option<Laurent>,
    /// `Δ = (T^q-T)^{q+1} ζ1^{q+1} - (T^q-T)(T^{q^2}-T) ζ2`.
    pub delta: Laurent,
    /// Number of zeta coefficients used.
    pub zeta_prec: usize,
}

impl JValue {
    pub fn is_infinite(&self) -> bool {
        self.value.is_none()
    }

    pub fn finite(&self) -> Result<&Laurent> {
        self.value.as_ref().ok_or_else(|| domain!("j is infinite"))
    }
}

fn t_poly(field: &Field, e: usize) -> Poly {
    // T^e - T
    &Poly::monomial(field, Fe::ONE, e) - &Poly::x(field)
}

/// Extra zeta coefficients needed to absorb the cancellation inside `Δ`.
pub fn slack(field: &Field) -> usize {
    let q = field.q() as usize;
    q * q + q + 2
}

/// Combines `ζ(q-1)` and `ζ(q^2-1)` of one lattice into `j`.
pub fn j_from_zeta(z1: &ZetaValue, z2: &ZetaValue, route: JRoute) -> Result<JValue> {
    let field = z1.value.field().clone();
    let q = field.q() as usize;
    if z1.n != 1 || z2.n != 2 {
        return Err(domain!("expected ζ(q-1) and ζ(q^2-1)"));
    }
    if !z1.value.is_nonzero() {
        return Err(precision!("ζ(q-1) is zero to precision"));
    }
    let a = Laurent::from_poly(&t_poly(&field, q));
    let b = Laurent::from_poly(&t_poly(&field, q * q));
    let z1p = z1.value.pow(q as i64 + 1)?;
    let u = &a.pow(q as i64 + 1)? * &z1p;
    let v = &(&a * &b) * &z2.value;
    let delta = &u - &v;
    let zeta_prec = z1.value.prec().unwrap_or(usize::MAX).min(z2.value.prec().unwrap_or(usize::MAX));
    if !delta.is_nonzero() {
        return Ok(JValue { route, value: None, delta, zeta_prec });
    }
    let num = &a.pow(q as i64 + 2)? * &z1p;
    let value = num.div(&delta)?;
    Ok(JValue { route, value: Some(value), delta, zeta_prec })
}

/// Zeta precision doublings tried before declaring `Δ` zero.
const DOUBLINGS: u32 = 4;

/// Raises the zeta precision until `j` carries `prec` coefficients. `Δ` can cancel far
/// below `q^{2q}`, so the starting slack is not always enough. A `Δ` that stays zero to
/// precision after the last doubling is reported as infinity.
fn j_adaptive<F>(field: &Field, prec: usize, route: JRoute, zetas: F) -> Result<JValue>
where
    F: Fn(usize) -> Result<(ZetaValue, ZetaValue)>,
{
    let mut w = prec + slack(field);
    let mut tries = 0;
    loop {
        let (z1, z2) = zetas(w)?;
        let mut j = j_from_zeta(&z1, &z2, route)?;
        if let Some(v) = &j.value {
            if v.prec().is_none_or(|p| p >= prec) {
                j.value = Some(v.truncate(prec));
                return Ok(j);
            }
        }
        if tries == DOUBLINGS {
            return match j.value {
                None => Ok(j),
                Some(v) => Err(precision!(
                    "j has only {} of {prec} coefficients at zeta precision {w}",
                    v.prec().unwrap_or(0)
                )),
            };
        }
        tries += 1;
        w *= 2;
    }
}

/// `j_ε(f)` at `ε = q^-(Nd+l)` to `prec` coefficients.
pub fn j_eps(u: &QuadUnit, n: usize, l: usize, prec: usize) -> Result<JValue> {
    if l >= u.d() {
        return Err(domain!("l = {l} must be below d = {}", u.d()));
    }
    j_adaptive(u.field(), prec, JRoute::Eps { n, l }, |w| {
        Ok((zeta::zeta_eps(u, n, l, 1, w)?, zeta::zeta_eps(u, n, l, 2, w)?))
    })
}

/// `j_ε(x)` from the lattice solved directly; `x` may lie in `k`.
pub fn j_bruteforce(x: &Laurent, eps_exp: i64, prec: usize) -> Result<JValue> {
    j_adaptive(x.field(), prec, JRoute::BruteForce { eps_exp }, |w| {
        Ok((zeta::zeta_bruteforce(x, eps_exp, 1, w)?, zeta::zeta_bruteforce(x, eps_exp, 2, w)?))
    })
}

/// `j(a)` for an ideal of `A1`.
pub fn j_of_ideal(ideal: &IdealHNF, prec: usize, route: JRoute) -> Result<JValue> {
    j_adaptive(ideal.ring().field(), prec, route, |w| {
        Ok((zeta::zeta_ideal(ideal, 1, w)?, zeta::zeta_ideal(ideal, 2, w)?))
    })
}

/// `j(a_i)`.
pub fn j_ideal(ring: &RingA1, i: usize, prec: usize) -> Result<JValue> {
    j_of_ideal(&IdealHNF::a_i(ring, i)?, prec, JRoute::Ideal { i })
}

/// Smallest `N` with `2 N d + 1 > prec`.
pub fn default_nmax(d: usize, prec: usize) -> usize {
    prec / (2 * d) + 1
}

/// One element of `j^qt(f)` computed both ways.
#[derive(Clone, Debug, Serialize)]
pub struct JqtEntry {
    /// Ideal index `i = d - 1 - l`.
    pub i: usize,
    pub l: usize,
    pub ideal: JValue,
    pub limit: JValue,
    /// Number of leading coefficients on which both routes agree.
    pub agreement: usize,
    /// Exponent of the first disagreeing coefficient inside both windows, if any.
    pub disagreement_exp: Option<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JqtReport {
    pub nmax: usize,
    pub entries: Vec<JqtEntry>,
    pub min_agreement: usize,
    pub max_disagreement_exp: Option<i64>,
}

impl JqtReport {
    /// Ideal-route values, indexed by `i`.
    pub fn values(&self) -> Vec<&JValue> {
        let mut v: Vec<&JqtEntry> = self.entries.iter().collect();
        v.sort_by_key(|e| e.i);
        v.into_iter().map(|e| &e.ideal).collect()
    }
}

fn compare(a: &JValue, b: &JValue) -> (usize, Option<i64>) {
    match (&a.value, &b.value) {
        (Some(x), Some(y)) => {
            let diff = x - y;
            (x.agreement(y), diff.lead_exp())
        }
        (None, None) => (usize::MAX, None),
        _ => (0, Some(i64::MAX)),
    }
}

/// `j^qt(f) = {j(a_i)}`: the limit route `j_ε` at `N = nmax` for each `l` against the
/// ideal route `j(a_{d-1-l})`. Fails when the routes disagree inside their windows.
pub fn jqt(u: &QuadUnit, prec: usize, nmax: usize) -> Result<JqtReport> {
    let ring = RingA1::new(u)?;
    let d = u.d();
    let entries: Vec<JqtEntry> = (0..d)
        .into_par_iter()
        .map(|l| {
            let i = d - 1 - l;
            let ideal = j_ideal(&ring, i, prec)?;
            let limit = j_eps(u, nmax, l, prec)?;
            let (agreement, disagreement_exp) = compare(&ideal, &limit);
            Ok(JqtEntry { i, l, ideal, limit, agreement, disagreement_exp })
        })
        .collect::<Result<_>>()?;
    let min_agreement = entries.iter().map(|e| e.agreement).min().unwrap_or(0);
    let max_disagreement_exp = entries.iter().filter_map(|e| e.disagreement_exp).max();
    if let Some(e) = entries.iter().find(|e| e.disagreement_exp.is_some()) {
        return Err(consistency!(
            "limit and ideal routes disagree for l = {} at T^{} (agreement {})",
            e.l,
            e.disagreement_exp.unwrap(),
            e.agreement
        ));
    }
    Ok(JqtReport { nmax, entries, min_agreement, max_disagreement_exp })
}

/// `N(j^qt(f)) = Π_i j(a_i)`.
pub fn norm(values: &[&JValue]) -> Result<Laurent> {
    let first = values.first().ok_or_else(|| domain!("no values"))?;
    let mut acc = Laurent::one(first.delta.field());
    for v in values {
        acc = &acc * v.finite()?;
    }
    Ok(acc)
}

/// Norm of the `j`-values of the ideal-route family, computed at `prec`.
pub fn norm_jqt(u: &QuadUnit, prec: usize) -> Result<Laurent> {
    let ring = RingA1::new(u)?;
    let vals: Vec<JValue> = (0..u.d())
        .into_par_iter()
        .map(|i| j_ideal(&ring, i, prec))
        .collect::<Result<_>>()?;
    norm(&vals.iter().collect::<Vec<_>>())
}

/// `N(j(b a_i)) = Π_i j(b a_i)`, the norm of the family translated by `b`.
pub fn translated_norm(ring: &RingA1, b: &IdealHNF, prec: usize) -> Result<Laurent> {
    let vals: Vec<JValue> = (0..ring.d())
        .into_par_iter()
        .map(|i| {
            let c = b.mul(&IdealHNF::a_i(ring, i)?)?;
            j_of_ideal(&c, prec, JRoute::OtherIdeal)
        })
        .collect::<Result<_>>()?;
    norm(&vals.iter().collect::<Vec<_>>())
}

/// Exponent of the leading coefficient of `x - y` if it is inside both windows.
pub fn distinguishing_exp(x: &Laurent, y: &Laurent) -> Option<i64> {
    (x - y).lead_exp()
}

/// The leading difference of `x - y`, kept only if the refined pair `x2 - y2`
/// has the same leading exponent and coefficient.
pub fn persistent_difference(x: &Laurent, y: &Laurent, x2: &Laurent, y2: &Laurent) -> Option<(i64, Fe)> {
    let (d1, d2) = (x - y, x2 - y2);
    let e = d1.lead_exp()?;
    (d2.lead_exp() == Some(e) && d1.lead_coeff() == d2.lead_coeff()).then(|| (e, d1.lead_coeff().unwrap()))
}

/// Checks that the values are pairwise different within their windows.
pub fn pairwise_distinct(values: &[&JValue]) -> Result<()> {
    for (a, x) in values.iter().enumerate() {
        for (b, y) in values.iter().enumerate().skip(a + 1) {
            let differ = match (&x.value, &y.value) {
                (Some(u), Some(v)) => distinguishing_exp(u, v).is_some(),
                (None, None) => false,
                _ => true,
            };
            if !differ {
                return Err(consistency!("values {a} and {b} agree to precision"));
            }
        }
    }
    Ok(())
}

/// `|j|` of a finite value.
pub fn abs(j: &JValue) -> AbsVal {
    j.value.as_ref().map_or(AbsVal::Zero, Laurent::abs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(p: u32, a: &[i64], b: i64, prec: usize) -> QuadUnit {
        let f = Field::prime(p).unwrap();
        QuadUnit::new(&Poly::from_ints(&f, a), f.from_int(b), prec).unwrap()
    }

    #[test]
    fn rational_inputs_give_infinity() {
        let f = Field::prime(3).unwrap();
        let t = Laurent::monomial(&f, Fe::ONE, 1);
        assert!(j_bruteforce(&t, 3, 12).unwrap().is_infinite());
        let inv = Laurent::from_poly(&Poly::from_ints(&f, &[1, 0, 1])).inv_to(80).unwrap();
        assert!(j_bruteforce(&inv, 4, 12).unwrap().is_infinite());
    }

    #[test]
    fn homogeneity_of_j() {
        let u = unit(3, &[1, 0, 1], 1, 20);
        let ring = RingA1::new(&u).unwrap();
        let a1 = IdealHNF::a_i(&ring, 1).unwrap();
        let z1 = zeta::zeta_ideal(&a1, 1, 90).unwrap();
        let z2 = zeta::zeta_ideal(&a1, 2, 90).unwrap();
        let j = j_from_zeta(&z1, &z2, JRoute::Ideal { i: 1 }).unwrap();
        let c = Laurent::exact_from_coeffs(u.field(), 0, vec![Fe(1), Fe(2), Fe(1)]);
        let cinv = c.inv_to(200).unwrap();
        let mut s1 = z1.clone();
        s1.value = &z1.value * &cinv.pow(2).unwrap();
        let mut s2 = z2.clone();
        s2.value = &z2.value * &cinv.pow(8).unwrap();
        let js = j_from_zeta(&s1, &s2, JRoute::Ideal { i: 1 }).unwrap();
        let (a, b) = (j.finite().unwrap(), js.finite().unwrap());
        assert!(!(a - b).is_nonzero());
    }

    #[test]
    fn routes_agree_small() {
        let u = unit(3, &[0, 1], 1, 20);
        let rep = jqt(&u, 12, default_nmax(1, 12)).unwrap();
        assert_eq!(rep.entries.len(), 1);
        assert!(rep.min_agreement >= 10);
    }
}
