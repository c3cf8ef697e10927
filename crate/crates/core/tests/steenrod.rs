use num_bigint::BigInt;
use ogring::{chow_eval, deg_over_index, res, shat, shat_set, torsion_index, ChowRing, GeneratorExpression as E, RingParams};
use proptest::prelude::*;

fn chow(n: u32) -> ChowRing {
    ChowRing::new(RingParams::exact(n).unwrap())
}

#[test]
fn shat_at_eight() {
    assert_eq!(shat(7, 8).unwrap().to_string(), E::Sum(vec![E::Product(vec![E::int(1), E::Ci(7)]), E::Product(vec![E::int(6), E::Ci(8)])]).to_string());
    let ring = chow(8);
    let six = res(&shat(6, 8).unwrap(), &ring).unwrap();
    let expected = res(&E::Sum(vec![E::Ci(6), E::Product(vec![E::int(5), E::Ci(7)]), E::Product(vec![E::int(10), E::Ci(8)])]), &ring).unwrap();
    assert_eq!(six, expected);
}

#[test]
fn shat_two_three() {
    for n in 5..=8 {
        let ring = chow(n);
        let got = res(&shat_set(&[2, 3], n).unwrap(), &ring).unwrap();
        let expected = chow_eval(
            &E::Product(vec![
                E::int(4),
                E::Sum(vec![E::Ei(2), E::Ei(3)]),
                E::Sum(vec![E::Ei(3), E::Product(vec![E::int(2), E::Ei(4)]), E::Ei(5)]),
            ]),
            &ring,
        )
        .unwrap();
        assert_eq!(got, expected, "n = {n}");
    }
}

#[test]
fn empty_set_is_unit() {
    let ring = chow(6);
    assert_eq!(res(&shat_set(&[], 6).unwrap(), &ring).unwrap(), ring.one());
}

#[test]
fn torsion_indices() {
    assert_eq!(torsion_index(8).unwrap(), BigInt::from(16));
    assert_eq!(torsion_index(16).unwrap(), BigInt::from(1024));
    assert_eq!(torsion_index(4).unwrap(), BigInt::from(4));
    assert!(torsion_index(12).is_err());
}

#[test]
fn degree_over_index() {
    let ring = chow(8);
    assert_eq!(deg_over_index(&ring.point().scale(&BigInt::from(16))).unwrap(), 1);
    assert_eq!(deg_over_index(&ring.point().scale(&BigInt::from(32))).unwrap(), 0);
    assert!(deg_over_index(&ring.point().scale(&BigInt::from(8))).is_err());
}

fn x_expr(n: u32) -> impl Strategy<Value = E> {
    let leaf = prop_oneof![Just(E::E1), (1..=n).prop_map(E::Ci), (1..=n).prop_map(E::Ei), (-3i64..=3).prop_map(E::int)];
    leaf.prop_recursive(2, 12, 3, |inner| {
        prop_oneof![prop::collection::vec(inner.clone(), 2..=3).prop_map(E::Sum), prop::collection::vec(inner, 2..=3).prop_map(E::Product)]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn res_is_a_ring_map(a in x_expr(8), b in x_expr(8), n in 2u32..=8) {
        let clamp = |e: &E| clamp_indices(e, n);
        let (a, b) = (clamp(&a), clamp(&b));
        let ring = chow(n);
        let (ra, rb) = (res(&a, &ring).unwrap(), res(&b, &ring).unwrap());
        prop_assert_eq!(res(&E::Product(vec![a.clone(), b.clone()]), &ring).unwrap(), ring.mul(&ra, &rb).unwrap());
        prop_assert_eq!(res(&E::Sum(vec![a, b]), &ring).unwrap(), ra.checked_add(&rb).unwrap());
    }

    #[test]
    fn res_shat_valuation(n in 2u32..=8, mask in any::<u32>()) {
        let set: Vec<u32> = (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let v = res(&shat_set(&set, n).unwrap(), &chow(n)).unwrap().two_adic_valuation();
        prop_assert!(v.is_at_least(set.len() as u32));
    }
}

fn clamp_indices(e: &E, n: u32) -> E {
    match e {
        E::Ci(i) => E::Ci((*i).min(n)),
        E::Ei(i) => E::Ei((*i).min(n)),
        E::Sum(v) => E::Sum(v.iter().map(|x| clamp_indices(x, n)).collect()),
        E::Product(v) => E::Product(v.iter().map(|x| clamp_indices(x, n)).collect()),
        other => other.clone(),
    }
}
