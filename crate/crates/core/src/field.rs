//! Finite fields `F_q`, `q = p^m`, in a power basis over `F_p`.
//!
//! Elements are packed as the integer `sum coords[i] * p^i`, so equality is
//! coordinate equality and the packed value doubles as a table index.
//! Addition, negation and multiplication go through precomputed tables
//! (discrete log / antilog for products), which caps `q` at [`MAX_Q`].

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Largest field order supported by the table-driven representation.
pub const MAX_Q: u32 = 1024;

/// An element of a finite field, packed as base-`p` digits of its power-basis coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Fe,
    add: Vec<u16>,
    neg: Vec<u16>,
    exp: Vec<u16>,
    log: Vec<u32>,
}

/// A finite field handle. Cloning is cheap; all values built on a field share its tables.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())?;
        if self.m() > 1 {
            write!(f, "[mod {:?}]", self.0.modulus)?;
        }
        Ok(())
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Plain F_p[x] helpers used only while building tables.

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn fp_polyrem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv_lead = fp_inv(b[db], p);
    while r.len() > db {
        let k = r.len() - 1;
        let c = r[k] * inv_lead % p;
        let shift = k - db;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn fp_polymul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    trim(&mut r);
    r
}

/// Irreducibility over `F_p` by trial division with every monic polynomial of degree `<= deg/2`.
fn fp_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for dd in 1..=deg / 2 {
        let count = (p as u64).pow(dd as u32);
        for idx in 0..count {
            let mut g = vec![0u32; dd + 1];
            let mut t = idx;
            for c in g.iter_mut().take(dd) {
                *c = (t % p as u64) as u32;
                t /= p as u64;
            }
            g[dd] = 1;
            if fp_polyrem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn pack(coords: &[u32], p: u32) -> u32 {
    coords.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn unpack(mut v: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let c = v % p;
            v /= p;
            c
        })
        .collect()
}

impl Field {
    /// Builds `F_{p^m}`. When `modulus` is `None`, the first primitive monic irreducible
    /// polynomial of degree `m` (ordered by its packed lower coefficients) is used.
    /// Modulus coefficients are listed from the constant term upward.
    pub fn new(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        if !is_prime(p) {
            return Err(domain!("p = {p} is not prime"));
        }
        if m == 0 {
            return Err(domain!("extension degree must be at least 1"));
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= MAX_Q as u64)
            .ok_or_else(|| domain!("field order {p}^{m} exceeds {MAX_Q}"))? as u32;
        let modulus = match modulus {
            Some(mut md) => {
                trim(&mut md);
                if md.len() != m as usize + 1 || md.iter().any(|&c| c >= p) {
                    return Err(domain!("modulus {md:?} is not a degree-{m} polynomial over F_{p}"));
                }
                if md[m as usize] != 1 {
                    return Err(domain!("modulus must be monic"));
                }
                if !fp_irreducible(&md, p) {
                    return Err(domain!("modulus {md:?} is reducible over F_{p}"));
                }
                md
            }
            None if m == 1 => vec![0, 1],
            None => Self::default_modulus(p, m, q)?,
        };
        Ok(Field(Arc::new(Self::build(p, m, q, modulus)?)))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1, None)
    }

    fn default_modulus(p: u32, m: u32, q: u32) -> Result<Vec<u32>> {
        for idx in 0..q {
            let mut md = unpack(idx, p, m);
            md.push(1);
            if md[0] == 0 || !fp_irreducible(&md, p) {
                continue;
            }
            // primitive: x has multiplicative order q - 1
            let mut acc = vec![1u32];
            let mut order = 0;
            loop {
                acc = fp_polyrem(&fp_polymul(&acc, &[0, 1], p), &md, p);
                order += 1;
                if acc == [1] {
                    break;
                }
            }
            if order == q - 1 {
                return Ok(md);
            }
        }
        Err(domain!("no primitive modulus of degree {m} over F_{p}"))
    }

    fn build(p: u32, m: u32, q: u32, modulus: Vec<u32>) -> Result<Tables> {
        let qs = q as usize;
        let mut add = vec![0u16; qs * qs];
        let mut neg = vec![0u16; qs];
        let digits: Vec<Vec<u32>> = (0..q).map(|v| unpack(v, p, m)).collect();
        for a in 0..qs {
            let na: Vec<u32> = digits[a].iter().map(|&c| (p - c) % p).collect();
            neg[a] = pack(&na, p) as u16;
            for b in 0..qs {
                let s: Vec<u32> = digits[a]
                    .iter()
                    .zip(&digits[b])
                    .map(|(&x, &y)| (x + y) % p)
                    .collect();
                add[a * qs + b] = pack(&s, p) as u16;
            }
        }
        let slow_mul = |a: u32, b: u32| -> u32 {
            let mut da = digits[a as usize].clone();
            let mut db = digits[b as usize].clone();
            trim(&mut da);
            trim(&mut db);
            let mut r = fp_polyrem(&fp_polymul(&da, &db, p), &modulus, p);
            r.resize(m as usize, 0);
            pack(&r, p)
        };
        // smallest packed element of order q - 1
        let mut generator = None;
        'outer: for g in 1..q {
            let mut acc = 1u32;
            for k in 1..q {
                acc = slow_mul(acc, g);
                if acc == 1 {
                    if k == q - 1 {
                        generator = Some(g);
                        break 'outer;
                    }
                    break;
                }
            }
        }
        let generator = generator.ok_or_else(|| domain!("modulus does not define a field"))?;
        let mut exp = vec![0u16; 2 * qs];
        let mut log = vec![0u32; qs];
        let mut acc = 1u32;
        for k in 0..(q - 1) as usize {
            exp[k] = acc as u16;
            log[acc as usize] = k as u32;
            acc = slow_mul(acc, generator);
        }
        for k in (q - 1) as usize..2 * qs {
            exp[k] = exp[k - (q - 1) as usize];
        }
        Ok(Tables { p, m, q, modulus, generator: Fe(generator), add, neg, exp, log })
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn m(&self) -> u32 {
        self.0.m
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }
    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    /// The fixed generator of the multiplicative group used for discrete logs.
    pub fn generator(&self) -> Fe {
        self.0.generator
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }
    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<Fe> {
        if coords.len() > self.m() as usize || coords.iter().any(|&c| c >= self.p()) {
            return Err(domain!("coordinates {coords:?} do not describe an element of F_{}", self.q()));
        }
        Ok(Fe(pack(coords, self.p())))
    }

    pub fn coords(&self, a: Fe) -> Vec<u32> {
        unpack(a.0, self.p(), self.m())
    }

    /// All field elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q()).map(Fe)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.0.add[(a.0 * self.0.q + b.0) as usize] as u32)
    }
    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.0.neg[a.0 as usize] as u32)
    }
    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let t = &self.0;
        Fe(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize] as u32)
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(domain!("inverse of zero in F_{}", self.q()));
        }
        let t = &self.0;
        let l = t.log[a.0 as usize];
        Ok(Fe(t.exp[((t.q - 1 - l) % (t.q - 1)) as usize] as u32))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n` by square-and-multiply; negative exponents invert first.
    pub fn pow(&self, a: Fe, n: i64) -> Result<Fe> {
        let mut base = if n < 0 { self.inv(a)? } else { a };
        let mut e = n.unsigned_abs();
        let mut r = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Ok(r)
    }

    /// Discrete logarithm with respect to [`Field::generator`].
    pub fn dlog(&self, a: Fe) -> Option<u32> {
        (!a.is_zero()).then(|| self.0.log[a.0 as usize])
    }

    pub fn is_square(&self, a: Fe) -> bool {
        a.is_zero() || self.p() == 2 || self.0.log[a.0 as usize].is_multiple_of(2)
    }

    /// The square root whose discrete logarithm is even (the smaller logarithm when
    /// both or neither are), if `a` is a square.
    pub fn sqrt_canonical(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return Some(Fe::ZERO);
        }
        let t = &self.0;
        let l = t.log[a.0 as usize];
        if t.p == 2 {
            // every element is a square; the root is unique
            let half = if l.is_multiple_of(2) { l / 2 } else { (l + t.q - 1) / 2 };
            return Some(Fe(t.exp[half as usize] as u32));
        }
        if l % 2 == 1 {
            return None;
        }
        let r = l / 2;
        let other = (r + (t.q - 1) / 2) % (t.q - 1);
        // prefer the even logarithm; when both roots share parity take the smaller one
        let pick = match (r.is_multiple_of(2), other.is_multiple_of(2)) {
            (true, false) => r,
            (false, true) => other,
            _ => r.min(other),
        };
        Some(Fe(t.exp[pick as usize] as u32))
    }

    /// Comma-free base-`p` digit string, most significant coordinate first.
    pub fn format_elem(&self, a: Fe) -> String {
        const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";
        self.coords(a)
            .iter()
            .rev()
            .map(|&c| DIGITS[c as usize] as char)
            .collect()
    }

    pub fn parse_elem(&self, s: &str) -> Result<Fe> {
        let s = s.trim();
        if s.is_empty() || s.len() > self.m() as usize {
            return Err(Error::Parse(format!("bad field element '{s}' for F_{}", self.q())));
        }
        let mut coords = Vec::with_capacity(s.len());
        for ch in s.chars().rev() {
            let c = ch
                .to_digit(36)
                .filter(|&c| c < self.p())
                .ok_or_else(|| Error::Parse(format!("bad digit '{ch}' in '{s}'")))?;
            coords.push(c);
        }
        self.from_coords(&coords)
    }
}

/// Serializable description sufficient to rebuild a field bit-exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

impl Field {
    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.p(), m: self.m(), modulus: self.modulus().to_vec() }
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Field> {
        let modulus = if d.m == 1 && d.modulus == [0, 1] { None } else { Some(d.modulus.clone()) };
        Field::new(d.p, d.m, modulus)
    }
}
