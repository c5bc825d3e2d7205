//! Zeta sums `Σ x^{-k}` over the monic elements of a lattice in `k_inf`, for
//! `k = q^n - 1` with `n ∈ {1, 2}`.
//!
//! A triangular monic basis `b_0 = 1, b_1, b_2, ...` of strictly increasing degrees
//! splits the monic elements into layers `b_i + V_i` with `V_i = span(b_0..b_{i-1})`,
//! so the sum is `1 + Σ_i Ω_i` with `Ω_i = Σ_{v ∈ V_i} (b_i + v)^{-k}`. Each layer is
//! evaluated through the subspace polynomial `P_{V_i}(z) = Π_{v ∈ V_i} (z - v)` and the
//! Goss polynomials of `V_i`, which avoids enumerating `q^i` terms.

use serde::Serialize;

use crate::error::{consistency, domain, precision, Error, Result};
use crate::field::{Fe, Field};
use crate::ideals::IdealHNF;
use crate::laurent::{AbsVal, Laurent};
use crate::lattice;
use crate::quadunit::QuadUnit;

/// Where a zeta value comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZetaSource {
    /// The renormalized lattice at `ε = q^-(Nd+l)`.
    EpsLattice { n: usize, l: usize },
    /// A lattice solved directly from `‖λx‖ < q^-eps_exp`.
    BruteForce { eps_exp: i64 },
    /// `g^{-1} a` for an ideal `a` of `A1`.
    Ideal { residue_dim: usize },
    /// A basis supplied by the caller.
    Basis,
}

/// `ζ(q^n - 1)` normalized so that the lowest basis element is `1`.
#[derive(Clone, Debug, Serialize)]
pub struct ZetaValue {
    pub value: Laurent,
    /// The exponent `q^n - 1`.
    pub exponent: u64,
    pub n: u32,
    pub source: ZetaSource,
    /// Every omitted layer has absolute value at most `q^tail_exp`.
    pub tail_exp: i64,
    /// Layers summed (including the constant layer).
    pub layers: usize,
    /// The layer values `Ω_1, Ω_2, ...`.
    #[serde(skip)]
    pub omegas: Vec<Laurent>,
}

fn exponent(field: &Field, n: u32) -> Result<u64> {
    if n != 1 && n != 2 {
        return Err(domain!("only the exponents q - 1 and q^2 - 1 are supported (n = {n})"));
    }
    Ok((field.q() as u64).pow(n) - 1)
}

/// Largest normalized degree whose layer can exceed `q^-prec`, using
/// `|Ω_i(q^n - 1)| <= |b_i|^{q^n (1-q)}`.
pub fn degree_cut(field: &Field, n: u32, prec: usize) -> i64 {
    let q = field.q() as i64;
    let rate = q.pow(n) * (q - 1);
    (prec as i64 + rate - 1) / rate - 1
}

/// Direct sum over `v ∈ V_i`: `Σ (b_i + v)^{-k}`. Exponential in `i`; used as an oracle.
pub fn omega_direct(basis: &[Laurent], i: usize, k: u64, prec: usize) -> Result<Laurent> {
    let field = basis[i].field().clone();
    let mut acc = Laurent::zero(&field);
    for v in span_elements(&basis[..i]) {
        let x = &basis[i] + &v;
        acc = &acc + &x.inv_to(prec)?.pow(k as i64)?;
    }
    Ok(acc)
}

/// `Ω_1(q^n - 1) = (α^{q^n} - α) / (α^{q^{n+1}} - α^{q^n})` for the basis `{1, α}`.
pub fn omega1_closed(alpha: &Laurent, n: u32) -> Result<Laurent> {
    let an = alpha.frobenius(n);
    let an1 = alpha.frobenius(n + 1);
    (&an - alpha).div(&(&an1 - &an))
}

/// All `F_q`-combinations of `gens`.
pub fn span_elements(gens: &[Laurent]) -> Vec<Laurent> {
    let field = gens.first().map(|g| g.field().clone());
    let mut out = vec![match &field {
        Some(f) => Laurent::zero(f),
        None => return vec![],
    }];
    let field = field.unwrap();
    for g in gens {
        let mut next = Vec::with_capacity(out.len() * field.q() as usize);
        for v in &out {
            for c in field.elements() {
                next.push(v + &g.scale(c));
            }
        }
        out = next;
    }
    out
}

/// Monic elements of the span of a triangular monic basis with degree `<= max_deg`:
/// each generator plus every combination of the generators below it.
pub fn monic_enum(basis: &[Laurent], max_deg: i64) -> Vec<Laurent> {
    let mut out = Vec::new();
    for (j, b) in basis.iter().enumerate() {
        if b.lead_exp().is_none_or(|e| e > max_deg) {
            continue;
        }
        if j == 0 {
            out.push(b.clone());
            continue;
        }
        for v in span_elements(&basis[..j]) {
            out.push(b + &v);
        }
    }
    out
}

/// Layer sums `Ω_1, ..., Ω_{m-1}` for a basis with `basis[0] = 1`, via the subspace
/// polynomial recursion `P_{V_{i+1}} = P_{V_i}^q - P_{V_i}(b_i)^{q-1} P_{V_i}` and the
/// Goss recursion `G_m = t (G_{m-1} + Σ_j a_j G_{m-q^j})`, `t = 1 / e_{V_i}(b_i)`.
pub fn layer_sums(basis: &[Laurent], k: u64) -> Result<Vec<Laurent>> {
    let Some(first) = basis.first() else {
        return Ok(Vec::new());
    };
    let field = first.field().clone();
    let q = field.q() as u64;
    let qm1 = q as i64 - 1;
    // beta[j] = coefficient of z^{q^j} in P_{V_i}; V_0 = {0} gives P = z
    let mut beta = vec![Laurent::one(&field)];
    let mut out = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        let top = b.lead_exp().ok_or_else(|| precision!("basis element {i} is zero to precision"))?;
        let growth = (q as i128).pow(i as u32 + 1) * (top.unsigned_abs() as i128 + 1);
        if growth > (1i128 << 60) {
            return Err(Error::Resource(format!("layer {i} needs exponents beyond 2^60")));
        }
        let mut pv = Laurent::zero(&field);
        for (j, bj) in beta.iter().enumerate() {
            pv = &pv + &(bj * &b.frobenius(j as u32));
        }
        if i >= 1 {
            let t = beta[0].div(&pv)?;
            let a: Vec<Laurent> = beta.iter().map(|bj| bj.div(&beta[0])).collect::<Result<_>>()?;
            let mut g = vec![Laurent::zero(&field), t.clone()];
            for m in 2..=k {
                let mut s = g[(m - 1) as usize].clone();
                let mut qj = q;
                let mut j = 1;
                while qj <= m && j < a.len() {
                    s = &s + &(&a[j] * &g[(m - qj) as usize]);
                    qj *= q;
                    j += 1;
                }
                g.push(&t * &s);
            }
            out.push(g[k as usize].clone());
        }
        let dq = pv.pow(qm1)?;
        let mut next = Vec::with_capacity(beta.len() + 1);
        for j in 0..=beta.len() {
            let hi = if j == 0 { None } else { Some(beta[j - 1].frobenius(1)) };
            let lo = beta.get(j).map(|bj| &dq * bj);
            next.push(match (hi, lo) {
                (Some(h), Some(l)) => &h - &l,
                (Some(h), None) => h,
                (None, Some(l)) => -&l,
                (None, None) => unreachable!(),
            });
        }
        beta = next;
    }
    Ok(out)
}

/// Upper bounds `log_q |Ω_i(k)|` for `i >= 1`, from the degrees alone.
///
/// With `e_i(z) = z Π_{0 ≠ v ∈ V_i} (1 - z/v) = Σ_j α_j z^{q^j}` the Newton polygon gives
/// `|α_j| = Π_{0 ≠ v ∈ V_j} |v|^{-1}` exactly and `|t_i| = |e_i(b_i)|^{-1}`, and the
/// Goss recursion bounds `|G_k(t_i)|` ultrametrically.
pub fn layer_bounds(degrees: &[i64], q: u64, k: u64) -> Vec<i128> {
    let q = q as i128;
    let neg_inf = i128::MIN / 4;
    // s[j] = Σ_{0 ≠ v ∈ V_j} deg v
    let mut s = vec![0i128];
    let mut qpow = 1i128;
    for &dj in degrees {
        // saturates only past the early exit below, where s is no longer read
        let next = s.last().unwrap().saturating_add((q - 1).saturating_mul(qpow).saturating_mul(dj as i128));
        s.push(next);
        qpow = qpow.saturating_mul(q);
    }
    let mut out = Vec::new();
    let mut qi = 1i128;
    for (i, &di) in degrees.iter().enumerate() {
        if i >= 1 {
            let e = qi.saturating_mul(di as i128) - s[i];
            // every bound is at most -E_i and E_i increases with i
            if e > 1i128 << 62 {
                out.resize(degrees.len() - 1, neg_inf);
                break;
            }
            let lt = -e;
            let mut b = vec![neg_inf, lt];
            for m in 2..=k as i128 {
                let mut best = b[(m - 1) as usize];
                let mut qj = q;
                let mut j = 1usize;
                while qj <= m && j < i + 1 {
                    let cand = -s[j] + b[(m - qj) as usize];
                    best = best.max(cand);
                    qj *= q;
                    j += 1;
                }
                b.push(if best <= neg_inf { neg_inf } else { lt + best });
            }
            out.push(b[k as usize]);
        }
        qi = qi.saturating_mul(q);
    }
    out
}

/// Zeta value over a triangular monic basis supplied at a given normalized degree cut
/// and working precision. The basis is divided by its first element. Layers whose
/// bound falls below the precision window are skipped; `tail_exp` bounds them all.
pub fn zeta_from_basis<F>(field: &Field, n: u32, prec: usize, source: ZetaSource, basis: F) -> Result<ZetaValue>
where
    F: Fn(i64, usize) -> Result<Vec<Laurent>>,
{
    let k = exponent(field, n)?;
    let cut = degree_cut(field, n, prec);
    let q = field.q() as i64;
    let rate = q.pow(n) * (q - 1);
    let floor = -(prec as i64);
    let mut work = prec + 8;
    for _ in 0..5 {
        let raw = basis(cut, work)?;
        let first = raw.first().ok_or_else(|| domain!("empty lattice"))?.clone();
        if first.lead_coeff() != Some(Fe::ONE) {
            return Err(domain!("basis is not monic"));
        }
        let inv = first.inv_to(work)?;
        let norm: Vec<Laurent> = raw
            .iter()
            .map(|x| (x * &inv).truncate(work))
            .filter(|x| x.lead_exp().is_some_and(|e| e <= cut))
            .collect();
        let degrees: Vec<i64> = norm.iter().map(|x| x.lead_exp().unwrap()).collect();
        let bounds: Vec<i128> = layer_bounds(&degrees, q as u64, k)
            .into_iter()
            .zip(&degrees[1..])
            .map(|(b, &e)| b.min(-(rate as i128) * e as i128))
            .collect();
        let used = bounds.iter().rposition(|&b| b > floor as i128).map_or(1, |i| i + 2);
        let skipped = bounds[used - 1..].iter().copied().max();
        let tail_exp = skipped
            .map_or(i128::MIN, |b| b)
            .max(-(rate as i128) * (cut as i128 + 1)) as i64;
        let omegas = layer_sums(&norm[..used], k)?;
        let mut value = norm[0].inv_to(work)?.pow(k as i64)?;
        for o in &omegas {
            value = &value + o;
        }
        if value.floor().is_none_or(|fl| fl <= floor) {
            let value = value.truncate_abs(floor);
            return Ok(ZetaValue { value, exponent: k, n, source, tail_exp, layers: used, omegas });
        }
        work *= 2;
    }
    Err(Error::Resource(format!("zeta value did not reach {prec} coefficients")))
}

/// `ζ_{f,ε}(q^n - 1)` over the renormalized lattice at `ε = q^-(Nd+l)`.
pub fn zeta_eps(u: &QuadUnit, big_n: usize, l: usize, n: u32, prec: usize) -> Result<ZetaValue> {
    let d = u.d() as i64;
    zeta_from_basis(u.field(), n, prec, ZetaSource::EpsLattice { n: big_n, l }, |cut, work| {
        Ok(lattice::renormalized(u, big_n, l, cut + d, work)?.elements)
    })
}

/// `ζ(q^n - 1)` over the lattice `{λ : ‖λx‖ < q^-eps_exp}` solved directly, for `x`
/// known exactly or to high precision.
pub fn zeta_bruteforce(x: &Laurent, eps_exp: i64, n: u32, prec: usize) -> Result<ZetaValue> {
    zeta_from_basis(x.field(), n, prec, ZetaSource::BruteForce { eps_exp }, |cut, _| {
        // a nonzero element of degree <= eps_exp always exists
        let lat = lattice::bruteforce(x, eps_exp, (eps_exp + cut).max(0) as usize)?;
        Ok(lat.elements.iter().map(Laurent::from_poly).collect())
    })
}

/// `ζ^a(q^n - 1)` summed over the monic elements of `g^{-1} a`.
pub fn zeta_ideal(ideal: &IdealHNF, n: u32, prec: usize) -> Result<ZetaValue> {
    let ring = ideal.ring();
    let source = ZetaSource::Ideal { residue_dim: ideal.residue_dim() };
    zeta_from_basis(ring.field(), n, prec, source, |cut, work| {
        ideal.normalized_basis(cut)?.values(ring, work)
    })
}

/// Checks the closed form of `Ω_1` against the direct `q`-term sum.
pub fn check_omega1(basis: &[Laurent], n: u32, prec: usize) -> Result<Laurent> {
    if basis.len() < 2 {
        return Err(domain!("no α_1 in the basis"));
    }
    let k = exponent(basis[0].field(), n)?;
    let direct = omega_direct(basis, 1, k, prec)?;
    let closed = omega1_closed(&basis[1], n)?;
    let diff = &direct - &closed;
    if diff.is_nonzero() {
        return Err(consistency!("Ω_1 closed form differs from the direct sum: {diff}"));
    }
    Ok(direct)
}

/// `|ζ - 1|`.
pub fn zeta_hat_abs(z: &ZetaValue) -> AbsVal {
    (&z.value - &Laurent::one(z.value.field())).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::RingA1;
    use crate::poly::Poly;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn monic_basis(f: &Field, degs: &[i64], seed: u64, prec: usize) -> Vec<Laurent> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        degs.iter()
            .map(|&e| {
                if e == 0 {
                    return Laurent::one(f).truncate(prec);
                }
                let mut cs = vec![Fe::ONE];
                cs.extend((1..prec).map(|_| Fe(rng.gen_range(0..f.q()))));
                Laurent::from_coeffs(f, e, cs)
            })
            .collect()
    }

    #[test]
    fn layer_kernel_matches_direct_sum() {
        for (p, degs) in [(3u32, vec![0, 1, 3, 4]), (2, vec![0, 2, 3, 4, 5]), (5, vec![0, 1, 2])] {
            let f = Field::prime(p).unwrap();
            let basis = monic_basis(&f, &degs, 7, 30);
            for n in 1..=2 {
                let k = (f.q() as u64).pow(n) - 1;
                let fast = layer_sums(&basis, k).unwrap();
                for i in 1..basis.len() {
                    let direct = omega_direct(&basis, i, k, 30).unwrap();
                    let diff = &fast[i - 1] - &direct;
                    assert!(!diff.is_nonzero(), "p={p} n={n} i={i}: {diff}");
                }
            }
        }
    }

    #[test]
    fn layer_bounds_hold() {
        for (p, degs) in [(3u32, vec![0, 1, 2, 3, 5]), (2, vec![0, 2, 3, 4, 5, 6]), (5, vec![0, 1, 3])] {
            let f = Field::prime(p).unwrap();
            let q = f.q() as i64;
            let basis = monic_basis(&f, &degs, 11, 200);
            for n in 1..=2u32 {
                let k = (q as u64).pow(n) - 1;
                let om = layer_sums(&basis, k).unwrap();
                let bounds = layer_bounds(&degs, q as u64, k);
                for (i, o) in om.iter().enumerate() {
                    let e = degs[i + 1];
                    assert!(o.abs().certainly_le(-e * q.pow(n) * (q - 1)), "lemma bound p={p} n={n} i={i}");
                    assert!(o.abs().certainly_le(bounds[i] as i64), "p={p} n={n} i={i}: {} vs {}", o.abs(), bounds[i]);
                }
                if n == 1 {
                    // G_{q-1}(t) = t^{q-1}
                    assert_eq!(om[0].abs(), AbsVal::Pow(bounds[0] as i64));
                }
            }
        }
    }

    #[test]
    fn omega1_closed_form() {
        let f = f3();
        let basis = monic_basis(&f, &[0, 1], 3, 30);
        let o = check_omega1(&basis, 1, 30).unwrap();
        assert_eq!(o.lead_exp(), Some(-6));
        check_omega1(&basis, 2, 30).unwrap();
    }

    #[test]
    fn monic_enumeration_counts() {
        let f = f3();
        let basis = monic_basis(&f, &[0, 2, 3], 1, 10);
        assert_eq!(monic_enum(&basis, 0).len(), 1);
        assert_eq!(monic_enum(&basis, 2).len(), 1 + 3);
        assert_eq!(monic_enum(&basis, 5).len(), 1 + 3 + 9);
        for x in monic_enum(&basis, 5) {
            assert_eq!(x.lead_coeff(), Some(Fe::ONE));
        }
    }

    #[test]
    fn unit_scalar_sum_is_minus_one() {
        let f = Field::new(5, 1, None).unwrap();
        for n in 1..=2u32 {
            let k = 5i64.pow(n) - 1;
            let mut s = Fe::ZERO;
            for c in f.elements().skip(1) {
                s = f.add(s, f.pow(c, -k).unwrap());
            }
            assert_eq!(s, f.neg(Fe::ONE));
        }
    }

    #[test]
    fn carlitz_values_over_a() {
        // monic polynomials: ζ(q-1) has the known leading expansion 1 + 1/(T^q - T)^{...}
        let f = f3();
        let t = Laurent::monomial(&f, Fe::ONE, 1);
        let z = zeta_bruteforce(&t, 3, 1, 20).unwrap();
        let mut direct = Laurent::zero(&f);
        let basis: Vec<Laurent> = (0..=6).map(|e| Laurent::monomial(&f, Fe::ONE, e).truncate(24)).collect();
        for x in monic_enum(&basis, 6) {
            direct = &direct + &x.inv_to(24).unwrap().pow(2).unwrap();
        }
        assert_eq!(z.value.agreement(&direct), 20);
        assert!(z.tail_exp <= -20);
    }

    #[test]
    fn precision_doubling_is_consistent() {
        let fl = f3();
        let u = QuadUnit::new(&Poly::from_ints(&fl, &[1, 0, 1]), Fe(1), 20).unwrap();
        let ring = RingA1::new(&u).unwrap();
        let a1 = IdealHNF::a_i(&ring, 1).unwrap();
        let lo = zeta_ideal(&a1, 1, 20).unwrap();
        let hi = zeta_ideal(&a1, 1, 40).unwrap();
        assert_eq!(hi.value.truncate_abs(-20), lo.value);
        let e = zeta_eps(&u, 3, 0, 1, 20).unwrap();
        assert_eq!(e.value.lead_exp(), Some(0));
        assert_eq!(e.value.lead_coeff(), Some(Fe::ONE));
    }

    #[test]
    fn rejects_other_exponents() {
        let f = f3();
        assert!(zeta_from_basis(&f, 3, 10, ZetaSource::Basis, |_, _| Ok(vec![])).is_err());
    }
}
