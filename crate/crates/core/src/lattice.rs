//! Approximation lattices `Λ_ε(x) = {λ ∈ A : ‖λx‖ < ε}` with `ε = q^-e`, their
//! renormalizations `√D f^-N Λ`, and distances between truncated spans.

use std::fmt;

use serde::Serialize;

use crate::error::{domain, precision, Result};
use crate::field::Fe;
use crate::ideals::{Elem, IdealHNF, RingA1};
use crate::laurent::{AbsVal, Laurent};
use crate::linalg;
use crate::poly::Poly;
use crate::quadunit::QuadUnit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatticeKind {
    /// Built from the blocks `T^j Q_n` at `ε = q^-(Nd+l)`.
    Structural { n: usize, l: usize },
    /// Solved directly from the definition.
    BruteForce { eps_exp: i64, degbound: usize },
    /// `√D f^-N` times a structural lattice.
    Renormalized { n: usize, l: usize },
    /// An ideal of `A1` viewed inside `k_inf`.
    Ideal,
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeKind::Structural { n, l } => write!(f, "structural:N={n}:l={l}"),
            LatticeKind::BruteForce { eps_exp, degbound } => write!(f, "bruteforce:e={eps_exp}:B={degbound}"),
            LatticeKind::Renormalized { n, l } => write!(f, "renormalized:N={n}:l={l}"),
            LatticeKind::Ideal => write!(f, "ideal"),
        }
    }
}

/// A truncated `F_q`-span of polynomials, one generator per degree, sorted by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyLattice {
    pub kind: LatticeKind,
    pub elements: Vec<Poly>,
    pub degree_cut: usize,
}

/// A truncated `F_q`-span of series, one generator per degree, sorted by degree.
#[derive(Clone, Debug)]
pub struct SeriesLattice {
    pub kind: LatticeKind,
    pub elements: Vec<Laurent>,
    pub degree_cut: i64,
}

impl PolyLattice {
    /// Reduced echelon form: monic generators, each leading degree absent from the others.
    pub fn canonical(&self) -> PolyLattice {
        let n = self.degree_cut + 1;
        let Some(field) = self.elements.first().map(|p| p.field().clone()) else {
            return self.clone();
        };
        let vecs = self
            .elements
            .iter()
            .map(|p| (0..n).map(|i| p.coeff(i)).collect())
            .collect();
        let elements = linalg::top_echelon(&field, vecs, n)
            .into_iter()
            .map(|v| Poly::new(&field, v))
            .collect();
        PolyLattice { kind: self.kind, elements, degree_cut: self.degree_cut }
    }

    /// Whether both lattices span the same space.
    pub fn same_span(&self, o: &PolyLattice) -> bool {
        self.degree_cut == o.degree_cut && self.canonical().elements == o.canonical().elements
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.elements.iter().filter_map(Poly::deg).collect()
    }

    /// `max ‖λx‖` over the generators.
    pub fn max_error(&self, x: &Laurent) -> Result<AbsVal> {
        let mut worst = AbsVal::Zero;
        for p in &self.elements {
            let (_, e) = (&Laurent::from_poly(p) * x).nearest_poly()?;
            worst = worst.max(e);
        }
        Ok(worst)
    }

    /// CSV rows `kind,degree,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("kind,degree,value\n");
        for p in &self.elements {
            s.push_str(&format!("{},{},{}\n", self.kind, p.deg_i(), Laurent::from_poly(p)));
        }
        s
    }
}

impl SeriesLattice {
    pub fn degrees(&self) -> Vec<i64> {
        self.elements.iter().filter_map(Laurent::lead_exp).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("kind,degree,value\n");
        for x in &self.elements {
            let deg = x.lead_exp().map_or("-inf".to_string(), |e| e.to_string());
            s.push_str(&format!("{},{},{}\n", self.kind, deg, x));
        }
        s
    }

    /// Keeps the generators of degree at most `cut`.
    pub fn truncated(&self, cut: i64) -> SeriesLattice {
        SeriesLattice {
            kind: self.kind,
            elements: self.elements.iter().filter(|x| x.lead_exp().is_some_and(|e| e <= cut)).cloned().collect(),
            degree_cut: cut,
        }
    }
}

/// `{T^{d-1-l} Q_N, ..., Q_N} ∪ B(N+1) ∪ ...` up to degree `cut`, ordered by degree.
pub fn structural(u: &QuadUnit, n: usize, l: usize, cut: usize) -> Result<PolyLattice> {
    let d = u.d();
    if l >= d {
        return Err(domain!("l = {l} must be below d = {d}"));
    }
    if cut < n * d {
        return Err(domain!("degree cut {cut} below N d = {}", n * d));
    }
    let qs = u.q_table(cut / d + 1);
    let mut elements = Vec::new();
    for (i, q) in qs.iter().enumerate().skip(n) {
        let top = if i == n { d - 1 - l } else { d - 1 };
        for j in 0..=top {
            if i * d + j <= cut {
                elements.push(q.shift(j));
            }
        }
    }
    elements.sort_by_key(Poly::deg);
    Ok(PolyLattice { kind: LatticeKind::Structural { n, l }, elements, degree_cut: cut })
}

/// All `λ` with `deg λ <= degbound` and `‖λx‖ < q^-eps_exp`, in reduced echelon form.
pub fn bruteforce(x: &Laurent, eps_exp: i64, degbound: usize) -> Result<PolyLattice> {
    let field = x.field().clone();
    if eps_exp < 0 {
        return Err(domain!("ε = q^{} is not below 1", -eps_exp));
    }
    let nvars = degbound + 1;
    let mut rows = Vec::with_capacity(eps_exp as usize);
    // coefficient of T^e in λx is sum_i λ_i x_{e-i}; it must vanish for -eps_exp <= e <= -1
    for e in -eps_exp..=-1 {
        let row = (0..nvars)
            .map(|i| {
                x.coeff_at(e - i as i64).ok_or_else(|| {
                    precision!("coefficient of T^{} unknown; need precision below T^{}", e - i as i64, -eps_exp - degbound as i64)
                })
            })
            .collect::<Result<Vec<Fe>>>()?;
        rows.push(row);
    }
    let kernel = if rows.is_empty() {
        (0..nvars)
            .map(|i| {
                let mut v = vec![Fe::ZERO; nvars];
                v[i] = Fe::ONE;
                v
            })
            .collect()
    } else {
        linalg::nullspace(&field, &rows, nvars)
    };
    let elements = linalg::top_echelon(&field, kernel, nvars)
        .into_iter()
        .map(|v| Poly::new(&field, v))
        .collect();
    Ok(PolyLattice { kind: LatticeKind::BruteForce { eps_exp, degbound }, elements, degree_cut: degbound })
}

/// `√D f^-N T^j Q_{N+i}` for the structural generators, keeping those of degree
/// `(i+1)d + j <= cut`, each to relative precision `prec`.
pub fn renormalized(u: &QuadUnit, n: usize, l: usize, cut: i64, prec: usize) -> Result<SeriesLattice> {
    let d = u.d() as i64;
    let poly_cut = (cut + (n as i64 - 1) * d).max(n as i64 * d) as usize;
    let st = structural(u, n, l, poly_cut)?;
    let w = u.with_prec(prec.max(2 * u.d() + 1) + 2)?;
    let scale = &w.sqrt_d().truncate(prec + 2) * &w.f().pow(-(n as i64))?;
    let elements = st
        .elements
        .iter()
        .filter(|p| p.deg_i() + d - n as i64 * d <= cut)
        .map(|p| (&scale * &Laurent::from_poly(p)).truncate(prec))
        .collect();
    Ok(SeriesLattice { kind: LatticeKind::Renormalized { n, l }, elements, degree_cut: cut })
}

/// The monic `F_q`-basis of an ideal of `A1` up to degree `cut`, as series.
pub fn ideal_lattice(ideal: &IdealHNF, cut: i64, prec: usize) -> Result<SeriesLattice> {
    let ring = ideal.ring();
    let u = ring.unit().with_prec(prec.max(2 * ring.d() + 1) + 2)?;
    let elements = ideal
        .fq_basis(cut)
        .iter()
        .map(|x| ring.to_laurent(x, u.f()).truncate(prec))
        .collect();
    Ok(SeriesLattice { kind: LatticeKind::Ideal, elements, degree_cut: cut })
}

/// `min_{y in span} |x - y|` for a span with distinct leading degrees.
pub fn dist_to_span(x: &Laurent, span: &[Laurent]) -> Result<AbsVal> {
    let mut rem = x.clone();
    while let Some(e) = rem.lead_exp() {
        let Some(s) = span.iter().find(|s| s.lead_exp() == Some(e)) else {
            break;
        };
        let c = x.field().div(rem.lead_coeff().unwrap(), s.lead_coeff().unwrap())?;
        rem = &rem - &s.scale(c);
    }
    Ok(rem.abs())
}

fn check_distinct(xs: &[Laurent]) -> Result<()> {
    let mut degs: Vec<i64> = Vec::new();
    for x in xs {
        let e = x.lead_exp().ok_or_else(|| precision!("generator is zero to precision"))?;
        if degs.contains(&e) {
            return Err(domain!("two generators of degree {e}"));
        }
        degs.push(e);
    }
    Ok(())
}

/// Symmetrized Hausdorff distance between two truncated spans with the same cut.
pub fn hausdorff(a: &SeriesLattice, b: &SeriesLattice) -> Result<AbsVal> {
    if a.degree_cut != b.degree_cut {
        return Err(domain!("degree cuts differ: {} vs {}", a.degree_cut, b.degree_cut));
    }
    check_distinct(&a.elements)?;
    check_distinct(&b.elements)?;
    let mut worst = AbsVal::Zero;
    for (xs, span) in [(&a.elements, &b.elements), (&b.elements, &a.elements)] {
        for x in xs {
            worst = worst.max(dist_to_span(x, span)?);
        }
    }
    Ok(worst)
}

/// Outcome of checking `α Λ̂ ⊂_{|α|δ} Λ̂` on generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ActionCheck {
    pub holds: bool,
    /// Largest observed distance of `αλ` to the span.
    pub max_dist: AbsVal,
    /// Exponent of `|α| δ`.
    pub bound_exp: i64,
}

/// Verifies that every generator image `αλ` of the renormalized lattice at
/// `ε = q^-(Nd+l)` lies within `|α| δ`, `δ = q^-(2dN+l)`, of the lattice itself.
pub fn approx_action_check(ring: &RingA1, alpha: &Elem, n: usize, l: usize, cut: i64) -> Result<ActionCheck> {
    let u = ring.unit();
    let d = u.d() as i64;
    let deg_alpha = ring.deg(alpha).ok_or_else(|| domain!("α = 0"))?;
    let delta_exp = -(2 * d * n as i64 + l as i64);
    if deg_alpha + delta_exp >= 0 {
        return Err(domain!("δ = q^{delta_exp} is not below |α|^-1 = q^-{deg_alpha}"));
    }
    let bound_exp = deg_alpha + delta_exp;
    let prec = (cut + deg_alpha - bound_exp + 8) as usize;
    let target = renormalized(u, n, l, cut + deg_alpha, prec)?;
    let w = u.with_prec(prec + 2)?;
    let a = ring.to_laurent(alpha, w.f());
    let mut worst = AbsVal::Zero;
    for lam in target.truncated(cut).elements {
        worst = worst.max(dist_to_span(&(&a * &lam), &target.elements)?);
    }
    Ok(ActionCheck { holds: worst.certainly_lt(bound_exp), max_dist: worst, bound_exp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn unit(a: &[i64], prec: usize) -> QuadUnit {
        let f = Field::prime(3).unwrap();
        QuadUnit::new(&Poly::from_ints(&f, a), Fe(1), prec).unwrap()
    }

    #[test]
    fn structural_small_case() {
        let u = unit(&[0, 1], 20);
        let s = structural(&u, 1, 0, 4).unwrap();
        let want: Vec<Poly> = (1..=4).map(|n| u.q_n(n)).collect();
        assert_eq!(s.elements, want);
        let u2 = unit(&[1, 0, 1], 20);
        let s2 = structural(&u2, 1, 1, 6).unwrap();
        assert_eq!(s2.elements[0], u2.q_n(1));
        assert_eq!(s2.degrees(), vec![2, 4, 5, 6]);
        assert!(s2.max_error(u2.f()).unwrap().certainly_lt(-3));
    }

    #[test]
    fn bruteforce_matches_structural() {
        for a in [&[0i64, 1][..], &[1, 0, 1]] {
            let u = unit(a, 40);
            let d = u.d();
            for e in 0..=6usize {
                let (n, l) = (e / d, e % d);
                let s = structural(&u, n, l, 8).unwrap();
                let b = bruteforce(u.f(), e as i64, 8).unwrap();
                assert!(s.same_span(&b), "a={a:?} e={e}");
            }
        }
    }

    #[test]
    fn bruteforce_trivial_cases() {
        let f = Field::prime(3).unwrap();
        let t = Laurent::monomial(&f, Fe::ONE, 1);
        let all = bruteforce(&t, 5, 4).unwrap();
        assert_eq!(all.degrees(), vec![0, 1, 2, 3, 4]);
        let u = unit(&[0, 1], 30);
        // minimal error at degree <= 2 is q^-3, so ε = q^-4 leaves only 0
        assert!(bruteforce(u.f(), 4, 2).unwrap().elements.is_empty());
        assert!(bruteforce(&u.f().truncate(5), 6, 4).is_err());
    }

    #[test]
    fn renormalized_degrees_and_distance() {
        let u = unit(&[1, 0, 1], 20);
        let ring = RingA1::new(&u).unwrap();
        for n in 1..=3 {
            for l in 0..2 {
                let cut = 8;
                let prec = (cut + 2 * 2 * n as i64 + l as i64 + 12) as usize;
                let r = renormalized(&u, n, l, cut, prec).unwrap();
                let ideal = IdealHNF::a_i(&ring, 1 - l).unwrap();
                let il = ideal_lattice(&ideal, cut, prec).unwrap();
                assert_eq!(r.degrees(), il.degrees());
                let dist = hausdorff(&r, &il).unwrap();
                let bound = -(2 * n as i64 * 2 + l as i64 + 1);
                assert!(dist.certainly_le(bound), "N={n} l={l}: {dist}");
                assert_eq!(hausdorff(&il, &r).unwrap(), dist);
            }
        }
    }

    #[test]
    fn action_check_gates() {
        let u = unit(&[1, 0, 1], 20);
        let ring = RingA1::new(&u).unwrap();
        let one = ring.one();
        let c = approx_action_check(&ring, &one, 1, 0, 6).unwrap();
        assert!(c.holds);
        let c = approx_action_check(&ring, &ring.f(), 2, 0, 6).unwrap();
        assert!(c.holds);
        assert!(c.max_dist.certainly_le(2 - 9));
        let big = ring.mul(&ring.f(), &ring.e(1));
        assert!(approx_action_check(&ring, &big, 0, 1, 6).is_err());
    }
}
