mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use wahlcheck::blowdown::{discrepancies, solve_discrepancies};
use wahlcheck::exact::{QuadraticFieldElement as Q, Rational};
use wahlcheck::lattice::DivisorClass;
use wahlcheck::pencil::{
    evaluate, CubicForm, HomogeneousForm, Pencil, PencilParameter, ProjectivePoint, CUBIC_MONOMIALS,
};
use wahlcheck::tchain::{cf_value, exponent_sequence, hj_expand, wahl_recognize, Chain, WahlParams};
use wahlcheck::vankampen::{h1_certificate, relation_exponent, ComplementRelation};

fn rational() -> impl Strategy<Value = Rational> {
    (-500i64..500, 1i64..200).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn quad() -> impl Strategy<Value = Q> {
    (rational(), rational()).prop_map(|(a, b)| Q::new(a, b, 3).unwrap())
}

fn small_quad() -> impl Strategy<Value = Q> {
    (-4i64..=4, -4i64..=4).prop_map(|(a, b)| Q::from_integers(a, b, 3).unwrap())
}

fn point() -> impl Strategy<Value = ProjectivePoint> {
    (small_quad(), small_quad(), small_quad())
        .prop_filter_map("nonzero point", |(x, y, z)| ProjectivePoint::new(x, y, z).ok())
}

fn cubic() -> impl Strategy<Value = CubicForm> {
    proptest::collection::vec(small_quad(), 10).prop_filter_map("nonzero cubic", |v| {
        CubicForm::from_coefficients(v.try_into().expect("ten coefficients")).ok()
    })
}

const BLOWUPS: usize = 5;

fn divisor() -> impl Strategy<Value = DivisorClass> {
    proptest::collection::vec(-6i64..=6, BLOWUPS + 1)
        .prop_map(|v| DivisorClass::from_coefficients(v.into_iter().map(Rational::from).collect()))
}

fn wahl_params() -> impl Strategy<Value = WahlParams> {
    (2i64..400).prop_flat_map(|p| (Just(p), 1..p)).prop_filter_map("coprime", |(p, q)| WahlParams::new(p, q).ok())
}

proptest! {
    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in rational(), z in nonzero_rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(&z * &z.recip().unwrap(), Rational::one());
        prop_assert_eq!((&a * &z).checked_div(&z).unwrap(), a);
    }

    #[test]
    fn quadratic_field_axioms(a in quad(), b in quad(), c in quad()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!((&a * &b).norm(), &a.norm() * &b.norm());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.try_recip().unwrap(), Q::one(3).unwrap());
        } else {
            prop_assert!(a.try_recip().is_err());
        }
    }

    #[test]
    fn intersection_is_symmetric_and_bilinear(
        x in divisor(), y in divisor(), z in divisor(), k in rational()
    ) {
        let xy = x.intersect(&y).unwrap();
        prop_assert_eq!(&xy, &y.intersect(&x).unwrap());
        let sum = x.checked_add(&y).unwrap();
        prop_assert_eq!(sum.intersect(&z).unwrap(), &x.intersect(&z).unwrap() + &y.intersect(&z).unwrap());
        prop_assert_eq!(x.scaled(&k).intersect(&y).unwrap(), &k * &xy);
    }

    #[test]
    fn pullback_preserves_intersections(x in divisor(), y in divisor()) {
        let n = BLOWUPS + 1;
        let (px, py) = (x.extended_to(n), y.extended_to(n));
        prop_assert_eq!(px.intersect(&py).unwrap(), x.intersect(&y).unwrap());
        let e = DivisorClass::exceptional(n, n);
        prop_assert!(px.intersect(&e).unwrap().is_zero());
        prop_assert_eq!(e.self_intersection(), Rational::from(-1));
        let k = DivisorClass::canonical(n);
        prop_assert_eq!(k.intersect(&e).unwrap(), Rational::from(-1));
    }

    #[test]
    fn hj_round_trip_big(n in 2u64..1_000_000_000_000, seed in any::<u64>()) {
        let q = 1 + seed % (n - 1);
        prop_assume!(n.gcd(&q) == 1);
        let (n, q) = (BigInt::from(n), BigInt::from(q));
        let chain = hj_expand(&n, &q).unwrap();
        prop_assert!(chain.entries().iter().all(|&b| b >= 2));
        prop_assert_eq!(cf_value(&chain), (n, q));
    }

    #[test]
    fn wahl_chain_recognized_and_consistent(params in wahl_params()) {
        let chain = params.chain();
        prop_assert_eq!(wahl_recognize(&chain), Some(params.clone()));
        // the reversed chain is the Wahl chain of (p, p − q)
        let mirrored = WahlParams::new(params.p.clone(), &params.p - &params.q).unwrap();
        prop_assert_eq!(chain.reversed(), mirrored.chain());
        let d = discrepancies(&chain).unwrap();
        prop_assert_eq!(d.canonical_gain(&chain), Rational::from(chain.len() as i64));
    }

    #[test]
    fn tridiagonal_matches_dense(params in wahl_params()) {
        let chain = params.chain();
        prop_assume!(chain.len() <= 40);
        let fast: Vec<_> = solve_discrepancies(&chain).unwrap().iter().map(|r| r.as_big_rational().clone()).collect();
        prop_assert_eq!(fast, common::dense_discrepancies(chain.entries()));
    }

    #[test]
    fn consecutive_exponents_coprime(params in wahl_params()) {
        let seq = exponent_sequence(&params.chain());
        for w in seq.c.windows(2) {
            prop_assert!(w[0].gcd(&w[1]) == BigInt::from(1));
        }
        prop_assert_eq!(seq.n, &params.p * &params.p);
    }

    #[test]
    fn relation_exponents_reduced_and_symmetric(params in wahl_params(), i in 1usize..50, j in 1usize..50) {
        let chain = params.chain();
        let k = chain.len();
        let (i, j) = (1 + (i - 1) % k, 1 + (j - 1) % k);
        let seq = exponent_sequence(&chain);
        let n = &seq.n;
        let pair = relation_exponent(&chain, &ComplementRelation::IdentifyPair { left: i, right: j }).unwrap();
        let swapped = relation_exponent(&chain, &ComplementRelation::IdentifyPair { left: j, right: i }).unwrap();
        prop_assert_eq!(&pair, &swapped);
        let diff = (seq.get(i) - seq.get(j)).mod_floor(n);
        prop_assert!(pair == diff || pair == (n - &diff).mod_floor(n));
        let single = relation_exponent(&chain, &ComplementRelation::SingleMeet { member: i }).unwrap();
        prop_assert_eq!(&single, &seq.get(i).mod_floor(n));
        let double = relation_exponent(&chain, &ComplementRelation::DoubleMeet { member: i }).unwrap();
        prop_assert_eq!(double, (seq.get(i) * 2u32).mod_floor(n));
        // a single meet on u1 kills everything
        let cert = h1_certificate(&chain, &[ComplementRelation::SingleMeet { member: 1 }]).unwrap();
        prop_assert!(cert.certified());
    }

    #[test]
    fn pencil_members_are_linear(l in small_quad(), m in small_quad(), p in point()) {
        prop_assume!(!(l.is_zero() && m.is_zero()));
        let pencil = Pencil::builtin();
        let f = pencil.member(&PencilParameter::new(l.clone(), m.clone()).unwrap());
        let expected = &(&l * &evaluate(&pencil.g1, &p).unwrap()) + &(&m * &evaluate(&pencil.g2, &p).unwrap());
        match f {
            Ok(f) => prop_assert_eq!(evaluate(&f, &p).unwrap(), expected),
            // λG₁ + μG₂ vanishes identically only if it is the zero form
            Err(_) => prop_assert!(expected.is_zero()),
        }
    }

    #[test]
    fn euler_relation(f in cubic(), p in point()) {
        let form = f.form();
        let grad = form.gradient();
        let mut total = Q::zero(3).unwrap();
        for (g, x) in grad.iter().zip(p.coords()) {
            total = &total + &(x * &g.evaluate(&p).unwrap());
        }
        let three = Q::from_integers(3, 0, 3).unwrap();
        prop_assert_eq!(total, &three * &form.evaluate(&p).unwrap());
    }

    #[test]
    fn product_rule(a in cubic(), b in cubic(), i in 0usize..3) {
        let (f, g) = (a.form(), b.form());
        let lhs = f.try_mul(g).unwrap().partial(i);
        let rhs = f.partial(i).try_mul(g).unwrap().try_add(&f.try_mul(&g.partial(i)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_scales_by_cube(f in cubic(), p in point(), k in small_quad()) {
        prop_assume!(!k.is_zero());
        let kp = p.scaled(&k).unwrap();
        prop_assert!(kp == p);
        let cube = &(&k * &k) * &k;
        prop_assert_eq!(evaluate(&f, &kp).unwrap(), &cube * &evaluate(&f, &p).unwrap());
    }
}

#[test]
fn cubic_monomials_cover_degree_three() {
    assert!(CUBIC_MONOMIALS.iter().all(|m| m.iter().sum::<u32>() == 3));
    let x = HomogeneousForm::variable(3, 0).unwrap();
    assert!(CubicForm::new(x.clone()).is_err());
    assert!(CubicForm::new(x.try_mul(&x).unwrap().try_mul(&x).unwrap()).is_ok());
}

#[test]
fn chain_rejects_small_entries() {
    assert!(Chain::new(vec![3, 1, 2]).is_err());
    assert!(Chain::new(vec![]).is_err());
}
