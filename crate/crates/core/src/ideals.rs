//! The ring `A1 = F_q[f, fT, ..., fT^{d-1}]` of functions regular away from the place
//! `inf_1`, and its ideals.
//!
//! `A1` is a free module of rank `d` over `F_q[f]` with basis `e_0 = 1` and
//! `e_j = f T^j` for `1 <= j < d`. Elements are coordinate vectors of polynomials
//! in `f`; ideals are `F_q[f]`-submodules kept in Hermite normal form.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{consistency, domain, Result};
use crate::field::{Fe, Field};
use crate::laurent::Laurent;
use crate::linalg;
use crate::poly::Poly;
use crate::quadunit::{QuadUnit, QuadUnitDescriptor};

/// An element `sum_j c_j(f) e_j` of `A1`.
#[derive(Clone, PartialEq, Eq)]
pub struct Elem {
    c: Vec<Poly>,
}

impl Elem {
    pub fn coords(&self) -> &[Poly] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Poly::is_zero)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(|p| p.display("f")).collect();
        write!(f, "[{}]", parts.join("; "))
    }
}

struct RingInner {
    unit: QuadUnit,
    d: usize,
    /// `table[i-1][j-1] = e_i e_j` for `1 <= i, j < d`.
    table: Vec<Vec<Elem>>,
}

/// The ring `A1` attached to a quadratic unit.
#[derive(Clone)]
pub struct RingA1(Arc<RingInner>);

impl fmt::Debug for RingA1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingA1(a = {}, d = {})", self.0.unit.a().display("T"), self.0.d)
    }
}

impl PartialEq for RingA1 {
    fn eq(&self, o: &RingA1) -> bool {
        Arc::ptr_eq(&self.0, &o.0)
            || (self.0.unit.a() == o.0.unit.a() && self.0.unit.b() == o.0.unit.b())
    }
}

impl RingA1 {
    pub fn new(unit: &QuadUnit) -> Result<RingA1> {
        let d = unit.d();
        let mut ring = RingA1(Arc::new(RingInner { unit: unit.clone(), d, table: Vec::new() }));
        let mut table = Vec::new();
        for i in 1..d {
            let mut row = Vec::new();
            for j in 1..d {
                let (u1, v1) = ring.basis_ok(i);
                let (u2, v2) = ring.basis_ok(j);
                let (u, v) = ring.ok_mul((&u1, &v1), (&u2, &v2));
                row.push(ring.from_ok(&u, &v)?);
            }
            table.push(row);
        }
        Arc::get_mut(&mut ring.0).expect("ring not yet shared").table = table;
        Ok(ring)
    }

    pub fn unit(&self) -> &QuadUnit {
        &self.0.unit
    }

    pub fn d(&self) -> usize {
        self.0.d
    }

    pub fn field(&self) -> &Field {
        self.0.unit.field()
    }

    fn fpoly(&self, c: Vec<Fe>) -> Poly {
        Poly::new(self.field(), c)
    }

    pub fn from_coords(&self, mut c: Vec<Poly>) -> Result<Elem> {
        if c.len() > self.d() {
            return Err(domain!("{} coordinates for a rank {} module", c.len(), self.d()));
        }
        c.resize(self.d(), Poly::zero(self.field()));
        Ok(Elem { c })
    }

    pub fn zero(&self) -> Elem {
        Elem { c: vec![Poly::zero(self.field()); self.d()] }
    }

    pub fn one(&self) -> Elem {
        self.scalar(&Poly::one(self.field()))
    }

    /// The element `p(f) e_0`.
    pub fn scalar(&self, p: &Poly) -> Elem {
        let mut e = self.zero();
        e.c[0] = p.clone();
        e
    }

    /// The generator `f`.
    pub fn f(&self) -> Elem {
        self.scalar(&Poly::x(self.field()))
    }

    /// The module basis element `e_j` (`1` for `j = 0`, `f T^j` otherwise).
    pub fn e(&self, j: usize) -> Elem {
        let mut e = self.zero();
        e.c[j] = Poly::one(self.field());
        e
    }

    /// `f T^j` for `0 <= j < d`.
    pub fn f_t(&self, j: usize) -> Elem {
        if j == 0 {
            self.f()
        } else {
            self.e(j)
        }
    }

    pub fn add(&self, x: &Elem, y: &Elem) -> Elem {
        Elem { c: x.c.iter().zip(&y.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, x: &Elem, y: &Elem) -> Elem {
        Elem { c: x.c.iter().zip(&y.c).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, x: &Elem, c: Fe) -> Elem {
        Elem { c: x.c.iter().map(|p| p.scale(c)).collect() }
    }

    /// Multiplies every coordinate by `p(f)`.
    pub fn mul_scalar(&self, x: &Elem, p: &Poly) -> Elem {
        Elem { c: x.c.iter().map(|a| a * p).collect() }
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let d = self.d();
        let mut out = self.zero();
        for i in 0..d {
            if x.c[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y.c[j].is_zero() {
                    continue;
                }
                let p = &x.c[i] * &y.c[j];
                if i == 0 || j == 0 {
                    let k = i + j;
                    out.c[k] = &out.c[k] + &p;
                } else {
                    let t = &self.0.table[i - 1][j - 1];
                    for k in 0..d {
                        out.c[k] = &out.c[k] + &(&t.c[k] * &p);
                    }
                }
            }
        }
        out
    }

    /// Degree `-v_inf1`; every nonzero element has degree `0` or `>= d`.
    pub fn deg(&self, x: &Elem) -> Option<i64> {
        self.lead_term(x).map(|(deg, _)| deg)
    }

    /// `(degree, leading coefficient)` of a nonzero element.
    pub fn lead_term(&self, x: &Elem) -> Option<(i64, Fe)> {
        let d = self.d() as i64;
        x.c.iter()
            .enumerate()
            .filter_map(|(j, p)| {
                let e = p.deg()? as i64;
                let shift = if j == 0 { 0 } else { d + j as i64 };
                Some((d * e + shift, p.lead()))
            })
            .max_by_key(|t| t.0)
    }

    /// Monic in the sense that the leading Laurent coefficient is 1.
    pub fn is_monic(&self, x: &Elem) -> bool {
        self.lead_term(x).is_some_and(|(_, c)| c == Fe::ONE)
    }

    /// Whether some element has degree `deg` (the Weierstrass gaps are `1..d`).
    pub fn degree_occurs(&self, deg: i64) -> bool {
        deg == 0 || deg >= self.d() as i64
    }

    /// The monic `F_q`-basis element of degree `deg`: `f^e` or `f^{e-1} e_j`.
    pub fn monomial(&self, deg: i64) -> Result<Elem> {
        let d = self.d() as i64;
        if !self.degree_occurs(deg) {
            return Err(domain!("no element of degree {deg} (gap)"));
        }
        let (e, j) = (deg / d, deg % d);
        let f = self.field();
        let mut out = self.zero();
        if j == 0 {
            out.c[0] = Poly::monomial(f, Fe::ONE, e as usize);
        } else {
            out.c[j as usize] = Poly::monomial(f, Fe::ONE, (e - 1) as usize);
        }
        Ok(out)
    }

    /// Degrees `<= max_deg` that occur, increasing.
    pub fn degrees_upto(&self, max_deg: i64) -> Vec<i64> {
        (0..=max_deg).filter(|&e| self.degree_occurs(e)).collect()
    }

    /// The element as a series in `1/T`, given `f` to the desired precision.
    pub fn to_laurent(&self, x: &Elem, f: &Laurent) -> Laurent {
        let fl = self.field();
        let horner = |p: &Poly| {
            let mut acc = Laurent::zero(fl);
            for &c in p.coeffs().iter().rev() {
                acc = &(&acc * f) + &Laurent::constant(fl, c);
            }
            acc
        };
        let mut out = horner(&x.c[0]);
        for j in 1..self.d() {
            if x.c[j].is_zero() {
                continue;
            }
            let ej = (f * &Laurent::monomial(fl, Fe::ONE, j as i64)).truncate(f.prec().unwrap_or(usize::MAX));
            out = &out + &(&horner(&x.c[j]) * &ej);
        }
        out
    }

    /// Value at an affine point `(t, x)` of `X^2 - a(T) X - b = 0` over `F_q`.
    pub fn eval_at(&self, x: &Elem, t: Fe, fx: Fe) -> Fe {
        let fl = self.field();
        let mut acc = x.c[0].eval(fx);
        let mut tj = Fe::ONE;
        for j in 1..self.d() {
            tj = fl.mul(tj, t);
            let ej = fl.mul(fx, tj);
            acc = fl.add(acc, fl.mul(x.c[j].eval(fx), ej));
        }
        acc
    }

    // --- O_K = A[f] representation: pairs (U, V) meaning U + V f ---

    fn basis_ok(&self, j: usize) -> (Poly, Poly) {
        let fl = self.field();
        if j == 0 {
            (Poly::one(fl), Poly::zero(fl))
        } else {
            (Poly::zero(fl), Poly::monomial(fl, Fe::ONE, j))
        }
    }

    fn ok_mul(&self, (u1, v1): (&Poly, &Poly), (u2, v2): (&Poly, &Poly)) -> (Poly, Poly) {
        let u = self.unit();
        let vv = v1 * v2;
        let re = &(u1 * u2) + &vv.scale(u.b());
        let im = &(&(u1 * v2) + &(v1 * u2)) + &(u.a() * &vv);
        (re, im)
    }

    /// `x` as `U + V f` with `U, V` in `A`.
    pub fn to_ok(&self, x: &Elem) -> (Poly, Poly) {
        let fl = self.field();
        let mut fk = (Poly::one(fl), Poly::zero(fl));
        let maxdeg = x.c.iter().filter_map(Poly::deg).max().unwrap_or(0);
        let mut pows = Vec::new();
        for _ in 0..=maxdeg {
            pows.push(fk.clone());
            let f = (Poly::zero(fl), Poly::one(fl));
            fk = self.ok_mul((&fk.0, &fk.1), (&f.0, &f.1));
        }
        let (mut u, mut v) = (Poly::zero(fl), Poly::zero(fl));
        for (j, p) in x.c.iter().enumerate() {
            let (bu, bv) = self.basis_ok(j);
            for (k, &c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (pu, pv) = self.ok_mul((&pows[k].0, &pows[k].1), (&bu, &bv));
                u = &u + &pu.scale(c);
                v = &v + &pv.scale(c);
            }
        }
        (u, v)
    }

    /// Rewrites `U + V f` in module coordinates; fails when it does not lie in `A1`.
    pub fn from_ok(&self, u: &Poly, v: &Poly) -> Result<Elem> {
        let d = self.d() as i64;
        let bound = u.deg_i().max(v.deg_i() + d).max(0);
        let prec = (bound + d + 8) as usize;
        let fser = self.unit().with_prec(prec.max(2 * self.d() + 1))?.f().clone();
        let val = |e: &Elem| self.to_laurent(e, &fser);
        let target = &Laurent::from_poly(u) + &(&Laurent::from_poly(v) * &fser);
        let mut rem = target;
        let mut out = self.zero();
        while let Some(deg) = rem.lead_exp() {
            if !self.degree_occurs(deg) {
                return Err(domain!("U + V f is not regular away from inf_1 (degree {deg})"));
            }
            let c = rem.lead_coeff().unwrap();
            let w = self.scale(&self.monomial(deg)?, c);
            rem = &rem - &val(&w);
            out = self.add(&out, &w);
        }
        if rem.floor().is_some_and(|fl| fl >= 0) {
            return Err(consistency!("precision exhausted while rewriting U + V f"));
        }
        if self.to_ok(&out) != (u.clone(), v.clone()) {
            return Err(domain!("U + V f is not in A1"));
        }
        Ok(out)
    }
}

/// A nonzero integral ideal of `A1`: rows of an upper-triangular `d x d` matrix over
/// `F_q[f]` with monic diagonal and off-diagonal entries reduced modulo the pivot
/// below them.
#[derive(Clone)]
pub struct IdealHNF {
    ring: RingA1,
    rows: Vec<Vec<Poly>>,
}

impl PartialEq for IdealHNF {
    fn eq(&self, o: &IdealHNF) -> bool {
        self.ring == o.ring && self.rows == o.rows
    }
}
impl Eq for IdealHNF {}

impl fmt::Debug for IdealHNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let parts: Vec<String> = r.iter().map(|p| p.display("f")).collect();
            writeln!(f, "[{}]", parts.join(", "))?;
        }
        Ok(())
    }
}

/// Answer of the principality test.
#[derive(Clone, Debug)]
pub enum Principality {
    /// Generated by the given element.
    Yes(Elem),
    /// A minimal-degree element does not generate, which proves non-principality.
    No { min_deg: i64 },
    /// The minimal degree exceeds the search bound.
    NoUpToBound { bound: i64 },
}

/// Triangular `F_q`-basis of `g^{-1} a` with `g` a minimal-degree monic element of `a`:
/// `1`, then the `alpha_i` of degree strictly between `0` and `d`, then one element of
/// every degree `>= d` up to the cut.
#[derive(Clone, Debug)]
pub struct NormalizedBasis {
    /// Generator `g` of minimal degree.
    pub g: Elem,
    /// Numerators: `alpha_i = nums[i] / g`; `nums[0] = g`.
    pub nums: Vec<Elem>,
    /// Degrees of the basis elements of `g^{-1} a` (so `degrees[0] = 0`).
    pub degrees: Vec<i64>,
    /// Number of `alpha_i` with `0 < deg < d`.
    pub n_alpha: usize,
}

fn hnf(field: &Field, d: usize, rows: Vec<Vec<Poly>>) -> Result<Vec<Vec<Poly>>> {
    let mut rows: Vec<Vec<Poly>> = rows.into_iter().filter(|r| r.iter().any(|p| !p.is_zero())).collect();
    let mut out: Vec<Vec<Poly>> = Vec::with_capacity(d);
    for col in 0..d {
        let k = loop {
            let Some(k) = (0..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by_key(|&i| rows[i][col].deg())
            else {
                return Err(domain!("generators do not span a rank {d} module (zero ideal)"));
            };
            let piv = rows[k].clone();
            let mut done = true;
            for (i, r) in rows.iter_mut().enumerate() {
                if i == k || r[col].is_zero() {
                    continue;
                }
                let (qt, _) = r[col].divmod(&piv[col])?;
                for c in col..d {
                    r[c] = &r[c] - &(&qt * &piv[c]);
                }
                if !r[col].is_zero() {
                    done = false;
                }
            }
            if done {
                break k;
            }
        };
        let mut piv = rows.remove(k);
        let inv = field.inv(piv[col].lead())?;
        for p in piv.iter_mut() {
            *p = p.scale(inv);
        }
        out.push(piv);
        rows.retain(|r| r.iter().any(|p| !p.is_zero()));
    }
    for i in 0..d {
        for r in 0..i {
            let (qt, _) = out[r][i].divmod(&out[i][i])?;
            if qt.is_zero() {
                continue;
            }
            let sub: Vec<Poly> = out[i].iter().map(|p| &qt * p).collect();
            for c in i..d {
                out[r][c] = &out[r][c] - &sub[c];
            }
        }
    }
    Ok(out)
}

impl IdealHNF {
    /// The ideal generated by `gens`.
    pub fn from_gens(ring: &RingA1, gens: &[Elem]) -> Result<IdealHNF> {
        let mut rows = Vec::new();
        for g in gens {
            for k in 0..ring.d() {
                rows.push(ring.mul(g, &ring.e(k)).c);
            }
        }
        IdealHNF::from_module_rows(ring, rows)
    }

    /// The `F_q[f]`-module spanned by `rows`, which the caller guarantees is an ideal.
    fn from_module_rows(ring: &RingA1, rows: Vec<Vec<Poly>>) -> Result<IdealHNF> {
        let rows = hnf(ring.field(), ring.d(), rows)?;
        Ok(IdealHNF { ring: ring.clone(), rows })
    }

    pub fn unit(ring: &RingA1) -> IdealHNF {
        IdealHNF::from_gens(ring, &[ring.one()]).expect("unit ideal")
    }

    /// `a_i = (f, fT, ..., fT^i)`.
    pub fn a_i(ring: &RingA1, i: usize) -> Result<IdealHNF> {
        if i >= ring.d() {
            return Err(domain!("a_i needs 0 <= i < d = {}, got {i}", ring.d()));
        }
        let gens: Vec<Elem> = (0..=i).map(|j| ring.f_t(j)).collect();
        IdealHNF::from_gens(ring, &gens)
    }

    /// The maximal ideal of an affine point `(t, x)` on `X^2 - a(T)X - b = 0`.
    pub fn point(ring: &RingA1, t: Fe, x: Fe) -> Result<IdealHNF> {
        let u = ring.unit();
        let fl = ring.field();
        let lhs = fl.sub(fl.mul(x, x), fl.add(fl.mul(u.a().eval(t), x), u.b()));
        if !lhs.is_zero() {
            return Err(domain!("({t:?}, {x:?}) is not on the curve"));
        }
        let fx = ring.fpoly(vec![fl.neg(x), Fe::ONE]);
        let mut gens = vec![ring.scalar(&fx)];
        for j in 1..ring.d() {
            let ej = ring.e(j);
            gens.push(ring.mul_scalar(&ej, &fx));
            let val = ring.eval_at(&ej, t, x);
            gens.push(ring.sub(&ej, &ring.scalar(&Poly::constant(fl, val))));
        }
        let rows = gens.into_iter().map(|g| g.c).collect();
        IdealHNF::from_module_rows(ring, rows)
    }

    pub fn ring(&self) -> &RingA1 {
        &self.ring
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.rows
    }

    /// The generators as ring elements.
    pub fn row_elems(&self) -> Vec<Elem> {
        self.rows.iter().map(|r| Elem { c: r.clone() }).collect()
    }

    pub fn mul(&self, o: &IdealHNF) -> Result<IdealHNF> {
        if self.ring != o.ring {
            return Err(domain!("ideals of different rings"));
        }
        let r = &self.ring;
        let mut rows = Vec::new();
        for x in self.row_elems() {
            for y in o.row_elems() {
                rows.push(r.mul(&x, &y).c);
            }
        }
        IdealHNF::from_module_rows(r, rows)
    }

    pub fn pow(&self, n: usize) -> Result<IdealHNF> {
        let mut acc = IdealHNF::unit(&self.ring);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `dim_{F_q} A1 / a`.
    pub fn residue_dim(&self) -> usize {
        self.rows.iter().enumerate().map(|(i, r)| r[i].deg().unwrap()).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.residue_dim() == 0
    }

    /// Canonical representative of `x` modulo the ideal.
    pub fn reduce(&self, x: &Elem) -> Elem {
        let mut c = x.c.clone();
        for i in 0..self.rows.len() {
            let (qt, _) = c[i].divmod(&self.rows[i][i]).expect("monic pivot");
            if qt.is_zero() {
                continue;
            }
            for k in i..c.len() {
                c[k] = &c[k] - &(&qt * &self.rows[i][k]);
            }
        }
        Elem { c }
    }

    pub fn contains(&self, x: &Elem) -> bool {
        self.reduce(x).is_zero()
    }

    /// Whether `self` contains `o`.
    pub fn contains_ideal(&self, o: &IdealHNF) -> bool {
        o.row_elems().iter().all(|x| self.contains(x))
    }

    /// Monic `F_q`-basis of `{x in a : deg x <= max_deg}`, one element per occurring
    /// degree, each leading degree cleared from the others.
    pub fn fq_basis(&self, max_deg: i64) -> Vec<Elem> {
        let r = &self.ring;
        let fl = r.field();
        let degs = r.degrees_upto(max_deg);
        let mons: Vec<Elem> = degs.iter().map(|&e| r.monomial(e).unwrap()).collect();
        // residue coordinates: (i, k) for k < deg pivot_i
        let widths: Vec<usize> = (0..r.d()).map(|i| self.rows[i][i].deg().unwrap()).collect();
        let nres: usize = widths.iter().sum();
        let mut cols: Vec<Vec<Fe>> = Vec::with_capacity(mons.len());
        for m in &mons {
            let red = self.reduce(m);
            let mut v = Vec::with_capacity(nres);
            for (i, &w) in widths.iter().enumerate() {
                for k in 0..w {
                    v.push(red.c[i].coeff(k));
                }
            }
            cols.push(v);
        }
        let mat: Vec<Vec<Fe>> = (0..nres).map(|row| cols.iter().map(|c| c[row]).collect()).collect();
        let kernel = linalg::nullspace(fl, &mat, mons.len());
        let ech = linalg::top_echelon(fl, kernel, mons.len());
        ech.into_iter()
            .map(|v| {
                let mut acc = r.zero();
                for (m, &c) in mons.iter().zip(&v) {
                    if !c.is_zero() {
                        acc = r.add(&acc, &r.scale(m, c));
                    }
                }
                acc
            })
            .collect()
    }

    fn max_row_deg(&self) -> i64 {
        self.row_elems().iter().filter_map(|x| self.ring.deg(x)).max().unwrap_or(0)
    }

    /// A monic element of least degree.
    pub fn min_element(&self) -> Elem {
        self.fq_basis(self.max_row_deg()).into_iter().next().expect("nonzero ideal")
    }

    /// Decides principality: the ideal is principal iff a minimal-degree element
    /// generates it (every other element is a multiple of larger degree).
    pub fn principality(&self, search_deg: i64) -> Principality {
        let g = self.min_element();
        let deg = self.ring.deg(&g).unwrap();
        if deg > search_deg {
            return Principality::NoUpToBound { bound: search_deg };
        }
        match IdealHNF::from_gens(&self.ring, std::slice::from_ref(&g)) {
            Ok(h) if &h == self => Principality::Yes(g),
            _ => Principality::No { min_deg: deg },
        }
    }

    pub fn is_principal(&self) -> bool {
        matches!(self.principality(i64::MAX), Principality::Yes(_))
    }

    /// Whether `self` and `o` lie in the same ideal class.
    pub fn same_class(&self, o: &IdealHNF) -> Result<bool> {
        Ok(self.mul(&o.inverse_rep()?)?.is_principal())
    }

    /// An integral ideal `b = {x : x a ⊂ (g)}` in the inverse class, `a b = (g)`.
    pub fn inverse_rep(&self) -> Result<IdealHNF> {
        let r = &self.ring;
        let g = self.min_element();
        let gi = IdealHNF::from_gens(r, std::slice::from_ref(&g))?;
        let window = self.max_row_deg() + r.deg(&g).unwrap() + 2 * r.d() as i64;
        let degs = r.degrees_upto(window);
        let mons: Vec<Elem> = degs.iter().map(|&e| r.monomial(e).unwrap()).collect();
        let fl = r.field();
        let widths: Vec<usize> = (0..r.d()).map(|i| gi.rows[i][i].deg().unwrap()).collect();
        let mut cols: Vec<Vec<Fe>> = Vec::new();
        for m in &mons {
            let mut v = Vec::new();
            for row in self.row_elems() {
                let red = gi.reduce(&r.mul(m, &row));
                for (i, &w) in widths.iter().enumerate() {
                    for k in 0..w {
                        v.push(red.c[i].coeff(k));
                    }
                }
            }
            cols.push(v);
        }
        let nrows = cols.first().map_or(0, Vec::len);
        let mat: Vec<Vec<Fe>> = (0..nrows).map(|row| cols.iter().map(|c| c[row]).collect()).collect();
        let kernel = linalg::nullspace(fl, &mat, mons.len());
        let gens: Vec<Elem> = kernel
            .into_iter()
            .map(|v| {
                let mut acc = r.zero();
                for (m, &c) in mons.iter().zip(&v) {
                    if !c.is_zero() {
                        acc = r.add(&acc, &r.scale(m, c));
                    }
                }
                acc
            })
            .collect();
        let b = IdealHNF::from_gens(r, &gens)?;
        if self.mul(&b)? != gi {
            return Err(consistency!("inverse representative does not satisfy a b = (g)"));
        }
        Ok(b)
    }

    /// Triangular basis of `g^{-1} a` up to degree `cut` (relative to `g`).
    pub fn normalized_basis(&self, cut: i64) -> Result<NormalizedBasis> {
        let r = &self.ring;
        let d = r.d() as i64;
        let g = self.min_element();
        let dg = r.deg(&g).unwrap();
        let fq = self.fq_basis(dg + cut.max(d));
        let mut nums = vec![g.clone()];
        let mut degrees = vec![0];
        for x in &fq[1..] {
            let rel = r.deg(x).unwrap() - dg;
            if rel > 0 && rel < d {
                nums.push(x.clone());
                degrees.push(rel);
            }
        }
        let n_alpha = nums.len() - 1;
        for e in d..=cut {
            nums.push(r.mul(&g, &r.monomial(e)?));
            degrees.push(e);
        }
        Ok(NormalizedBasis { g, nums, degrees, n_alpha })
    }

    /// Reduces `h` in `a` against a minimal element `g` as in the two-generator
    /// construction: strip multiples `c w g` of `g` until `0 < deg(h/g) < d` or `h = 0`.
    pub fn reduce_against_min(&self, h: &Elem) -> Elem {
        let r = &self.ring;
        let g = self.min_element();
        let dg = r.deg(&g).unwrap();
        let d = r.d() as i64;
        let mut h = h.clone();
        while let Some((deg, c)) = r.lead_term(&h) {
            let rel = deg - dg;
            if rel > 0 && rel < d {
                break;
            }
            let w = r.monomial(rel).expect("degree occurs");
            h = r.sub(&h, &r.scale(&r.mul(&w, &g), c));
        }
        h
    }

    pub fn to_json(&self) -> IdealJson {
        let fl = self.ring.field();
        IdealJson {
            unit: self.ring.unit().descriptor(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|p| p.coeffs().iter().map(|&c| fl.format_elem(c)).collect()).collect())
                .collect(),
            denominator: vec!["1".into()],
        }
    }
}

/// Serialized ideal: ring descriptor, matrix of `F_q[f]` coefficient vectors
/// (constant term first) and the denominator in `F_q[f]`.
#[derive(Clone, Debug, Serialize)]
pub struct IdealJson {
    pub unit: QuadUnitDescriptor,
    pub rows: Vec<Vec<Vec<String>>>,
    pub denominator: Vec<String>,
}

impl NormalizedBasis {
    /// Laurent values of the basis of `g^{-1} a` at relative precision `prec`.
    pub fn values(&self, ring: &RingA1, prec: usize) -> Result<Vec<Laurent>> {
        let extra = self.degrees.last().copied().unwrap_or(0).max(0) as usize;
        let u = ring.unit().with_prec(prec + extra + 2 * ring.d() + 4)?;
        let gval = ring.to_laurent(&self.g, u.f());
        self.nums
            .iter()
            .map(|x| {
                let v = ring.to_laurent(x, u.f()).div(&gval)?;
                Ok(v.truncate(prec))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, a: &[i64], b: i64) -> RingA1 {
        let f = Field::prime(p).unwrap();
        let u = QuadUnit::new(&Poly::from_ints(&f, a), f.from_int(b), 30).unwrap();
        RingA1::new(&u).unwrap()
    }

    #[test]
    fn multiplication_matches_series() {
        let r = ring(3, &[1, 2, 0, 1], 2);
        let u = r.unit().with_prec(60).unwrap();
        let xs = [r.e(1), r.e(2), r.f(), r.add(&r.e(1), &r.scale(&r.e(2), Fe(2)))];
        for x in &xs {
            for y in &xs {
                let prod = r.mul(x, y);
                let lhs = r.to_laurent(&prod, u.f());
                let rhs = &r.to_laurent(x, u.f()) * &r.to_laurent(y, u.f());
                assert_eq!(lhs.lead_exp(), rhs.lead_exp());
                assert!(lhs.agreement(&rhs) >= 40);
                assert_eq!(r.deg(&prod), lhs.lead_exp());
            }
        }
    }

    #[test]
    fn associativity_on_generators() {
        let r = ring(3, &[1, 0, 1], 1);
        let g = [r.e(1), r.f(), r.add(&r.e(1), &r.one())];
        for x in &g {
            for y in &g {
                for z in &g {
                    assert_eq!(r.mul(&r.mul(x, y), z), r.mul(x, &r.mul(y, z)));
                }
            }
        }
    }

    #[test]
    fn unit_and_principal_basics() {
        let r = ring(3, &[1, 0, 1], 1);
        let one = IdealHNF::unit(&r);
        assert!(one.is_unit());
        assert!(matches!(one.principality(0), Principality::Yes(_)));
        let a0 = IdealHNF::a_i(&r, 0).unwrap();
        assert_eq!(a0, IdealHNF::from_gens(&r, &[r.f()]).unwrap());
        assert!(a0.is_principal());
        let again = IdealHNF::from_gens(&r, &a0.row_elems()).unwrap();
        assert_eq!(again, a0);
        assert!(IdealHNF::from_gens(&r, &[r.zero()]).is_err());
    }

    #[test]
    fn family_relations() {
        for a in [&[1i64, 0, 1][..], &[2, 1, 0, 1]] {
            let r = ring(3, a, 1);
            let d = r.d();
            let top = IdealHNF::a_i(&r, d - 1).unwrap();
            assert_eq!(top.residue_dim(), 1);
            for i in 1..=d {
                let lhs = top.pow(i).unwrap();
                let rhs = IdealHNF::a_i(&r, d - i).unwrap();
                assert_eq!(lhs, rhs, "a_(d-1)^{i}");
            }
            assert!(!IdealHNF::a_i(&r, 1).unwrap().is_principal());
        }
    }

    #[test]
    fn point_ideals_are_maximal() {
        let r = ring(3, &[0, 1, 1], 1);
        let fl = r.field().clone();
        let mut found = 0;
        for t in fl.elements() {
            for x in fl.elements() {
                if let Ok(m) = IdealHNF::point(&r, t, x) {
                    assert_eq!(m.residue_dim(), 1);
                    assert!(m.contains(&r.sub(&r.f(), &r.scalar(&Poly::constant(&fl, x)))));
                    found += 1;
                }
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn scrambled_generators_give_same_hnf() {
        let r = ring(3, &[1, 0, 1], 1);
        let a1 = IdealHNF::a_i(&r, 1).unwrap();
        let rows = a1.row_elems();
        let mixed = vec![
            r.add(&rows[0], &r.mul(&rows[1], &r.e(1))),
            r.add(&rows[1], &r.scale(&rows[0], Fe(2))),
            r.mul(&rows[0], &r.f()),
        ];
        assert_eq!(IdealHNF::from_gens(&r, &mixed).unwrap(), a1);
    }

    #[test]
    fn normalized_basis_shape() {
        let r = ring(3, &[1, 0, 1], 1);
        let a1 = IdealHNF::a_i(&r, 1).unwrap();
        let nb = a1.normalized_basis(6).unwrap();
        assert_eq!(nb.degrees[..2], [0, 1]);
        assert_eq!(nb.n_alpha, 1);
        let vals = nb.values(&r, 20).unwrap();
        for (v, &e) in vals.iter().zip(&nb.degrees) {
            assert_eq!(v.lead_exp(), Some(e));
            assert_eq!(v.lead_coeff(), Some(Fe::ONE));
        }
        let h = a1.reduce_against_min(&r.mul(&a1.row_elems()[1], &r.e(1)));
        if let Some(deg) = r.deg(&h) {
            let rel = deg - r.deg(&nb.g).unwrap();
            assert!(rel > 0 && rel < 2);
        }
    }

    #[test]
    fn class_test_on_family() {
        let r = ring(3, &[1, 0, 1], 1);
        let a1 = IdealHNF::a_i(&r, 1).unwrap();
        let a0 = IdealHNF::a_i(&r, 0).unwrap();
        assert!(a1.same_class(&a1).unwrap());
        assert!(!a1.same_class(&a0).unwrap());
        assert!(a0.same_class(&IdealHNF::unit(&r)).unwrap());
    }
}
