//! Polynomial relations `Σ c_i(T) X^i = 0` over `k = F_q(T)` satisfied by a truncated
//! Laurent series, found by exact linear algebra over `F_q`.

use serde::Serialize;

use crate::error::{domain, precision, Result};
use crate::field::{Fe, Field};
use crate::laurent::Laurent;
use crate::linalg;
use crate::poly::Poly;

/// Equations required beyond the number of unknowns.
pub const MARGIN: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct AlgRelation {
    /// `c_0, ..., c_D` as polynomials in `T`, constant term first.
    #[serde(serialize_with = "ser_polys")]
    pub coeffs: Vec<Poly>,
    pub degree: usize,
    pub deg_bound: usize,
    pub subject: Laurent,
    /// `|Σ c_i x^i| <= q^residual_exp`.
    pub residual_exp: i64,
    /// Relative precision of the subject when the relation was found.
    pub found_prec: usize,
    pub verified_prec: Option<usize>,
}

fn ser_polys<S: serde::Serializer>(ps: &[Poly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ps.iter().map(|p| p.display("T")))
}

impl AlgRelation {
    /// `Σ c_i(T) x^i`.
    pub fn evaluate(&self, x: &Laurent) -> Result<Laurent> {
        evaluate(&self.coeffs, x)
    }
}

fn evaluate(coeffs: &[Poly], x: &Laurent) -> Result<Laurent> {
    let field = x.field();
    let mut acc = Laurent::zero(field);
    let mut xi = Laurent::one(field);
    for c in coeffs {
        acc = &acc + &(&Laurent::from_poly(c) * &xi);
        xi = &xi * x;
    }
    Ok(acc)
}

/// Powers `x^0 .. x^D`.
fn powers(x: &Laurent, dmax: usize) -> Vec<Laurent> {
    let mut out = vec![Laurent::one(x.field())];
    for i in 1..=dmax {
        let next = &out[i - 1] * x;
        out.push(next);
    }
    out
}

/// Relations of degree exactly `dg` with `deg c_i <= bd`, as a canonical nullspace vector.
fn solve(field: &Field, pw: &[Laurent], dg: usize, bd: usize) -> Option<Vec<Poly>> {
    let ncols = (dg + 1) * (bd + 1);
    let top = (0..=dg)
        .filter_map(|i| pw[i].lead_exp().map(|e| e + bd as i64))
        .max()?;
    let floor = (1..=dg).filter_map(|i| pw[i].floor().map(|f| f + bd as i64)).max()?;
    let rows: Vec<Vec<Fe>> = ((floor + 1)..=top)
        .rev()
        .map(|e| {
            let mut row = Vec::with_capacity(ncols);
            for xi in &pw[..=dg] {
                for j in 0..=bd {
                    row.push(xi.coeff_at(e - j as i64).unwrap_or(Fe::ZERO));
                }
            }
            row
        })
        .collect();
    let null = linalg::nullspace(field, &rows, ncols);
    // top_echelon puts the smallest top index first; all tops lie in the c_D block
    let v = linalg::top_echelon(field, null, ncols).into_iter().next()?;
    if v[dg * (bd + 1)..].iter().all(|c| c.is_zero()) {
        return None;
    }
    Some(v.chunks(bd + 1).map(|c| Poly::new(field, c.to_vec())).collect())
}

/// Searches for a relation of minimal degree `D' <= D`, then minimal `B' <= B`.
/// Returns `None` when no relation exists within the bounds.
pub fn minpoly_search(x: &Laurent, dmax: usize, bmax: usize) -> Result<Option<AlgRelation>> {
    if dmax == 0 {
        return Err(domain!("degree bound must be positive"));
    }
    if !x.is_nonzero() {
        return Err(precision!("subject is zero to precision"));
    }
    let prec = x.prec().ok_or_else(|| domain!("subject is exact; its relation is trivial"))?;
    let need = (dmax + 1) * (bmax + 1) + MARGIN;
    if prec < need {
        return Err(precision!("{prec} coefficients cannot determine {need} unknowns with margin"));
    }
    let field = x.field().clone();
    let pw = powers(x, dmax);
    for dg in 1..=dmax {
        for bd in 0..=bmax {
            if let Some(coeffs) = solve(&field, &pw, dg, bd) {
                let r = evaluate(&coeffs, x)?;
                if r.is_nonzero() {
                    continue;
                }
                let residual_exp = r.floor().unwrap_or(i64::MIN);
                return Ok(Some(AlgRelation {
                    coeffs,
                    degree: dg,
                    deg_bound: bd,
                    subject: x.clone(),
                    residual_exp,
                    found_prec: prec,
                    verified_prec: None,
                }));
            }
        }
    }
    Ok(None)
}

/// Recomputes the subject at `prec2` and checks that the relation still vanishes on the
/// larger window. On success records `prec2` and the new residual bound.
pub fn verify_relation<F>(rel: &mut AlgRelation, prec2: usize, recompute: F) -> bool
where
    F: FnOnce(usize) -> Result<Laurent>,
{
    if prec2 <= rel.found_prec {
        return false;
    }
    let Ok(x2) = recompute(prec2) else {
        return false;
    };
    if x2.prec().is_some_and(|p| p <= rel.found_prec) {
        return false;
    }
    match evaluate(&rel.coeffs, &x2) {
        Ok(r) if !r.is_nonzero() => {
            rel.residual_exp = r.floor().unwrap_or(i64::MIN);
            rel.verified_prec = Some(prec2);
            rel.subject = x2;
            true
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadunit::QuadUnit;

    #[test]
    fn quadratic_unit_satisfies_its_equation() {
        let f = Field::prime(3).unwrap();
        let a = Poly::from_ints(&f, &[0, 0, 1]);
        let u = QuadUnit::new(&a, Fe::ONE, 60).unwrap();
        let rel = minpoly_search(u.f(), 2, 3).unwrap().unwrap();
        assert_eq!(rel.degree, 2);
        // X^2 - a X - 1 up to scalar; normalized to a monic top coefficient
        assert_eq!(rel.coeffs[2], Poly::one(&f));
        assert_eq!(rel.coeffs[1], a.scale(f.neg(Fe::ONE)));
        assert_eq!(rel.coeffs[0], Poly::constant(&f, f.neg(Fe::ONE)));
        let mut rel = rel;
        assert!(verify_relation(&mut rel, 120, |p| Ok(QuadUnit::new(&a, Fe::ONE, p)?.f().clone())));
        assert!(rel.residual_exp <= -100);
    }

    #[test]
    fn rational_subject_gives_linear_relation() {
        let f = Field::prime(5).unwrap();
        let x = Laurent::from_poly(&Poly::from_ints(&f, &[1, 1])).truncate(30);
        let rel = minpoly_search(&x, 2, 2).unwrap().unwrap();
        assert_eq!(rel.degree, 1);
        assert_eq!(rel.coeffs[1], Poly::one(&f));
        assert_eq!(rel.coeffs[0], Poly::from_ints(&f, &[-1, -1]));
    }

    #[test]
    fn corrupted_relation_fails() {
        let f = Field::prime(3).unwrap();
        let a = Poly::from_ints(&f, &[1, 1]);
        let u = QuadUnit::new(&a, Fe::ONE, 40).unwrap();
        let mut rel = minpoly_search(u.f(), 2, 2).unwrap().unwrap();
        rel.coeffs[0] = &rel.coeffs[0] + &Poly::x(&f);
        assert!(!verify_relation(&mut rel, 80, |p| Ok(QuadUnit::new(&a, Fe::ONE, p)?.f().clone())));
    }

    #[test]
    fn underdetermined_search_is_a_precision_error() {
        let f = Field::prime(3).unwrap();
        let x = Laurent::from_poly(&Poly::from_ints(&f, &[1, 1])).truncate(10);
        assert!(minpoly_search(&x, 3, 3).is_err());
    }

    #[test]
    fn transcendental_looking_series_has_no_small_relation() {
        // sum of T^{-n!}-like gaps: exponents 1, 2, 6, 24
        let f = Field::prime(2).unwrap();
        let mut c = vec![Fe::ZERO; 60];
        for e in [0usize, 1, 5, 23] {
            c[e] = Fe::ONE;
        }
        let x = Laurent::from_coeffs(&f, -1, c);
        assert!(minpoly_search(&x, 2, 3).unwrap().is_none());
    }
}
