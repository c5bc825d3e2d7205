//! Algebraic relations of j that need more than 40 coefficients to pin down.

use qjinv::ideals::RingA1;
use qjinv::{algrec, classnum, jinv};
use qjinv::{Fe, Field, Laurent, Poly, QuadUnit};

fn unit(p: u32, a: &[i64], prec: usize) -> QuadUnit {
    let f = Field::prime(p).unwrap();
    QuadUnit::new(&Poly::from_ints(&f, a), Fe::ONE, prec).unwrap()
}

fn j(ring: &RingA1, i: usize, prec: usize) -> Laurent {
    jinv::j_ideal(ring, i, prec).unwrap().finite().unwrap().clone()
}

#[test]
fn class_number_one_j_is_quadratic() {
    for (p, a, prec, degree, bound) in [(2, [0i64, 1], 40usize, 2usize, 9usize), (3, [0, 1], 64, 2, 16)] {
        let u = unit(p, &a, prec);
        let ring = RingA1::new(&u).unwrap();
        let x = j(&ring, 0, prec);
        let mut rel = algrec::minpoly_search(&x, degree, bound).unwrap().expect("relation");
        assert_eq!((rel.degree, rel.deg_bound), (degree, bound), "q={p}");
        assert!(algrec::verify_relation(&mut rel, 2 * prec, |n| Ok(j(&ring, 0, n))));
    }
}

#[test]
fn family_shares_a_relation_of_degree_twice_the_class_number() {
    let u = unit(2, &[1, 1, 1], 40);
    let ring = RingA1::new(&u).unwrap();
    let h = classnum::class_numbers(&u).unwrap();
    let (prec, check) = (140, 200);
    let dj = 2 * h.h_a1 as usize;
    let mut rel = algrec::minpoly_search(&j(&ring, 0, prec), dj, 24).unwrap().expect("relation for j(a_0)");
    assert_eq!(rel.degree, dj);
    assert!(algrec::verify_relation(&mut rel, check, |n| Ok(j(&ring, 0, n))));
    let other = rel.evaluate(&j(&ring, 1, check)).unwrap();
    assert!(!other.is_nonzero(), "j(a_1) is a root of the same relation");

    let dn = 2 * h.h_ok as usize;
    let mut nrel = algrec::minpoly_search(&jinv::norm_jqt(&u, 100).unwrap(), dn, 24).unwrap().expect("relation for the norm");
    assert_eq!(nrel.degree, dn);
    assert!(algrec::verify_relation(&mut nrel, 160, |n| jinv::norm_jqt(&u, n)));
}
