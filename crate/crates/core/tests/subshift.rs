mod common;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

use labshift::labels::property_check;
use labshift::labels::Property;
use labshift::subshift::{
    asymptotic_check, default_partition, in_a, injectivity_radius, length_vector, locality_check,
    nonasymptotic_witness, point_window, sym_zer_classify, time_for, Mode, Partition, SubshiftError,
};
use labshift::zoo::{self, ZooParams};
use labshift::{ExpandingSystem, FiniteLabel, Label, NVector};

fn v(pairs: &[(u32, u32)]) -> NVector {
    NVector::from_pairs(pairs.iter().copied()).unwrap()
}

fn chi(l: u32) -> NVector {
    NVector::chi(l)
}

fn zero() -> BigInt {
    BigInt::zero()
}

#[test]
fn two_adic_partition() {
    let p = default_partition();
    assert_eq!([1, 2, 3, 4].map(|n| p.level(n)), [1, 2, 1, 3]);
    assert_eq!((1..=4).map(|i| p.member(1, i)).collect::<Vec<_>>(), vec![1, 3, 5, 7]);
    assert!(p.member(2, 1) < p.member(3, 1));
    for n in 1..=200 {
        let l = p.level(n);
        let i = (1..=n).find(|&i| p.member(l, i) == n).expect("n lies in its block");
        assert_eq!(p.member(l, i), n);
    }
}

#[test]
fn length_vector_examples() {
    let s = ExpandingSystem::strict();
    let p = default_partition();
    assert_eq!(length_vector(&s, &p, &zero()), Some(NVector::zero()));
    assert_eq!(length_vector(&s, &p, &BigInt::from(56)), Some(v(&[(1, 1), (2, 1)])));
    assert_eq!(length_vector(&s, &p, &BigInt::from(350)), Some(v(&[(1, 2)])));
    assert_eq!(length_vector(&s, &p, &BigInt::from(50)), None);
}

#[test]
fn support_map_consistency() {
    let s = ExpandingSystem::strict();
    let p = default_partition();
    let reach = s.ksum(7).to_i64().unwrap();
    let listing = s.ip_in_interval(&BigInt::from(-reach), &BigInt::from(reach), &labshift::IpMode::Full).unwrap();
    for t in &listing.members {
        let r = length_vector(&s, &p, t).unwrap();
        for l in 1..=4 {
            let min_d = p.member(l, 1);
            if t.magnitude() <= &((s.b() as u64 - 1) * min_d).into() {
                assert_eq!(r.get(l), 0, "t = {t}, ℓ = {l}");
            }
        }
    }
}

#[test]
fn point_window_examples() {
    let s = ExpandingSystem::strict();
    let p = default_partition();
    assert!(point_window(&s, &p, &Label::empty(), 10, Mode::Full, &zero()).unwrap().is_all_zero());
    assert_eq!(point_window(&s, &p, &Label::zero(), 10, Mode::Full, &zero()).unwrap().ones, vec![0]);
    let w = point_window(&s, &p, &Label::generated([chi(1)]), 50, Mode::Full, &zero()).unwrap();
    assert_eq!(w.ones, vec![-7, 0, 7]);
    let j = serde_json::to_value(w.to_json()).unwrap();
    assert_eq!(j["ones"], serde_json::json!(["-7", "0", "7"]));
    assert_eq!(w.render_ascii().chars().filter(|&c| c == '#').count(), 3);
}

#[test]
fn locality_examples() {
    let s = ExpandingSystem::strict();
    let p = default_partition();
    let m = Label::generated([v(&[(1, 1), (2, 1)])]);
    assert!(locality_check(&s, &p, &m, &zero(), 20).unwrap().verified);
    let m = Label::generated([v(&[(1, 2)])]);
    let rep = locality_check(&s, &p, &m, &BigInt::from(343), 1).unwrap();
    assert!(rep.verified);
    assert_eq!(rep.r, chi(1));
    let e = locality_check(&s, &p, &m, &BigInt::from(343), 50);
    assert!(matches!(e, Err(SubshiftError::Precondition(_))));
    assert!(locality_check(&s, &p, &m, &BigInt::from(50), 1).is_err());
}

#[test]
fn locality_brute_force() {
    let s = ExpandingSystem::strict();
    let p = default_partition();
    let m = Label::generated([v(&[(1, 2)])]);
    let t = BigInt::from(343);
    let n = 50;
    let rest = m.minus(&chi(1));
    for q in -n..=n {
        let lhs = in_a(&s, &p, &m, &(&t + q), Mode::Full).unwrap();
        let rhs = in_a(&s, &p, &rest, &BigInt::from(q), Mode::Full).unwrap();
        assert_eq!(lhs, rhs, "offset {q}");
    }
}

#[test]
fn asymptotic_examples() {
    let s = ExpandingSystem::strict();
    let p = default_partition();
    let m = Label::generated([chi(1)]);
    let rows = asymptotic_check(&s, &p, &m, &chi(1), 10, 3).unwrap();
    assert!(rows.iter().all(|r| r.consistent));
    assert!(rows.iter().filter(|r| r.min_digit > 6).all(|r| r.radius.is_some_and(|x| x >= 3)));
    let rows = asymptotic_check(&s, &p, &m, &chi(2), 4, 2).unwrap();
    let limit = point_window(&s, &p, &m.minus(&chi(2)), 4, Mode::Full, &zero()).unwrap();
    assert!(limit.is_all_zero());
    assert!(rows.iter().all(|r| r.consistent));
    assert!(asymptotic_check(&s, &p, &m, &NVector::zero(), 4, 2).is_err());
}

#[test]
fn ex10a_rows_as_windows() {
    let s = ExpandingSystem::strict();
    let p = default_partition();
    let m = zoo::builtin("ex10a", &ZooParams::default()).unwrap();
    let want = Label::generated((1..=10).map(|b| chi(3).add(&chi(2 * b))));
    let n = 6;
    let rows = asymptotic_check(&s, &p, &m, &chi(1), 3 * n + 2, n).unwrap();
    assert!(rows.iter().all(|r| r.consistent));
    let a = point_window(&s, &p, &m.minus(&chi(1)), n, Mode::Full, &zero()).unwrap();
    let b = point_window(&s, &p, &want, n, Mode::Full, &zero()).unwrap();
    assert_eq!(a.ones, b.ones);
}

#[test]
fn nonasymptotic_examples() {
    let s = ExpandingSystem::strict();
    let p = default_partition();
    let none = nonasymptotic_witness(&s, &p, &Label::empty(), &Label::zero(), 4, 3).unwrap();
    assert!(none.is_none());
    let w = nonasymptotic_witness(&s, &p, &Label::generated([chi(1)]), &Label::zero(), 4, 3).unwrap().unwrap();
    assert_eq!(w.r, chi(1).to_string());
    for row in &w.rows {
        assert_eq!(row["origin_bit"], true);
        assert_eq!(row["other_window_zero"], true);
    }
    let m = zoo::builtin("ex8a", &ZooParams::default()).unwrap();
    assert!(nonasymptotic_witness(&s, &p, &m, &m.minus(&chi(1)), 4, 2).unwrap().is_some());
    assert!(nonasymptotic_witness(&s, &p, &m, &m, 4, 2).is_err());
}

#[test]
fn injectivity_examples() {
    let s = ExpandingSystem::strict();
    let p = default_partition();
    let r = injectivity_radius(&s, &p, &Label::generated([chi(1)]), &Label::zero(), 1).unwrap();
    assert_eq!(r.radius, BigInt::from(7));
    assert_eq!(r.position, BigInt::from(7));
    assert!(r.bit1 && !r.bit2);
    let m = Label::generated([chi(2)]);
    assert!(injectivity_radius(&s, &p, &m, &m, 3).is_err());
    let a = zoo::builtin("ex8a", &ZooParams::default()).unwrap();
    let b = zoo::builtin("ex8b", &ZooParams::default()).unwrap();
    let r = injectivity_radius(&s, &p, &a, &b, 4).unwrap();
    assert_ne!(r.bit1, r.bit2);
    assert!(r.position <= r.radius);
}

#[test]
fn sym_zer_examples() {
    let s = ExpandingSystem::strict();
    let p = default_partition();
    let mut rng = common::rng(31);
    for _ in 0..30 {
        let m = common::random_label(&mut rng, 4, 2, 3);
        let full = point_window(&s, &p, &m, 60, Mode::Full, &zero()).unwrap();
        assert!(sym_zer_classify(&full).symmetric);
        let plus = point_window(&s, &p, &m, 60, Mode::Plus, &zero()).unwrap();
        assert!(sym_zer_classify(&plus).zer);
        let shifted = point_window(&s, &p, &m, 60, Mode::Full, &BigInt::from(1)).unwrap();
        assert!(!sym_zer_classify(&shifted).symmetric);
    }
}

#[test]
fn recurrence_transfer() {
    let s = ExpandingSystem::strict();
    let p = default_partition();
    let m = zoo::builtin("chiL_full", &ZooParams::default()).unwrap();
    let n = 4;
    let v = property_check(&m, Property::Recurrent, n, 40).unwrap();
    assert_eq!(v.kind, labshift::labels::VerdictKind::HoldsOnWindow);
    let r = chi(n + 1);
    assert_eq!(m.minus(&r).window(n).unwrap(), m.window(n).unwrap());
    let base = point_window(&s, &p, &m, n, Mode::Full, &zero()).unwrap();
    for floor in [2 * n as u64, 2 * n as u64 + 3] {
        let (t, _) = time_for(&s, &p, &r, floor);
        let w = point_window(&s, &p, &m, n, Mode::Full, &t).unwrap();
        assert_eq!(w.ones, base.ones);
    }
}

fn finite_strategy() -> impl Strategy<Value = FiniteLabel> {
    let vec = proptest::collection::vec((1u32..=6, 1u32..=3), 0..=3).prop_map(|p| NVector::from_pairs(p).unwrap());
    proptest::collection::vec(vec, 1..=3).prop_map(FiniteLabel::generated)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lipschitz_direction(a in finite_strategy(), n in 1u32..=8, extra in 1u32..=3) {
        let s = ExpandingSystem::strict();
        let p = default_partition();
        let b = a.window(n).union(&FiniteLabel::generated([chi(n + extra)]));
        let wa = point_window(&s, &p, &Label::from(a), n, Mode::Full, &zero()).unwrap();
        let wb = point_window(&s, &p, &Label::from(b), n, Mode::Full, &zero()).unwrap();
        prop_assert_eq!(wa.ones, wb.ones);
    }

    #[test]
    fn time_for_has_requested_length_vector(pairs in proptest::collection::vec((1u32..=4, 1u32..=3), 1..=3), floor in 0u64..12) {
        let s = ExpandingSystem::strict();
        let p = default_partition();
        let r = NVector::from_pairs(pairs).unwrap();
        let (t, digits) = time_for(&s, &p, &r, floor);
        prop_assert!(digits.iter().all(|&d| d > floor));
        prop_assert_eq!(length_vector(&s, &p, &t), Some(r));
    }
}
