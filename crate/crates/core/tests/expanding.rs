use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use labshift::expanding::{DigitRule, ExpandError, DEFAULT_N_MAX};
use labshift::{ExpandingSystem, Expansion, IpMode};

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Value of every signed subset of `{k(1), …, k(j_max)}`, keyed by value.
fn oracle(sys: &ExpandingSystem, j_max: i64) -> BTreeMap<i64, Vec<i64>> {
    let mut out = BTreeMap::new();
    for code in 0..3usize.pow(j_max as u32) {
        let mut c = code;
        let mut digits = Vec::new();
        for j in 1..=j_max {
            match c % 3 {
                1 => digits.push(j),
                2 => digits.push(-j),
                _ => {}
            }
            c /= 3;
        }
        digits.reverse();
        let v = sys.value_of(&digits).to_i64().unwrap();
        assert!(out.insert(v, digits).is_none(), "duplicate subset sum {v}");
    }
    out
}

#[test]
fn presets() {
    let s = ExpandingSystem::strict();
    assert_eq!((s.k(1), s.k(2), s.k(3)), (big(7), big(49), big(343)));
    assert_eq!(s.b(), 5);
    let p = ExpandingSystem::paper();
    assert_eq!((p.k(1), p.k(2), p.b()), (big(4), big(16), 3));
    assert_eq!(s.k(-2), big(-49));
    assert_eq!(s.k(0), big(0));
}

#[test]
fn degenerate_base_is_rejected() {
    let r = ExpandingSystem::build(3, DigitRule::Power { base: 3, offset: 1 }, None, DEFAULT_N_MAX);
    assert!(matches!(r, Err(ExpandError::Growth { .. }) | Err(ExpandError::FirstDigit { .. })));
    assert!(matches!(ExpandingSystem::with_base(2, 7), Err(ExpandError::SmallB(2))));
    assert!(ExpandingSystem::preset("nope").is_err());
}

#[test]
fn expand_examples() {
    let s = ExpandingSystem::strict();
    assert!(s.expand(&big(0)).unwrap().is_empty());
    assert_eq!(s.expand(&big(56)).unwrap().digits(), &[2, 1]);
    assert!(s.expand(&big(50)).is_none());
    assert_eq!(s.expand(&big(42)).unwrap().digits(), &[2, -1]);
}

#[test]
fn truncate_examples() {
    let s = ExpandingSystem::strict();
    let e = s.expansion_from_digits(vec![3, 2, -1]).unwrap();
    let (h, t) = e.truncate(&s, 1).unwrap();
    assert_eq!((h.digits(), t.digits()), (&[3][..], &[2, -1][..]));
    assert_eq!(h.value() + t.value(), e.value().clone());
    let (h, t) = e.truncate(&s, 0).unwrap();
    assert!(h.is_empty());
    assert_eq!(t, e);
    let (h, t) = e.truncate(&s, 3).unwrap();
    assert_eq!(h, e);
    assert!(t.is_empty());
    assert!(e.truncate(&s, 4).is_err());
}

#[test]
fn neighbor_examples() {
    let s = ExpandingSystem::strict();
    let e = s.expand(&big(56)).unwrap();
    let r = s.neighbor_exclusion(&e, 2).unwrap();
    assert!(r.verified);
    assert_eq!((r.minus, r.plus), (big(49), big(63)));
    let r = s.neighbor_exclusion(&s.expand(&big(7)).unwrap(), 1).unwrap();
    assert!(r.verified && r.minus.is_zero() && r.plus == big(14));
    let e = s.expansion_from_digits(vec![3, 2, -1]).unwrap();
    assert!(s.neighbor_exclusion(&e, 1).unwrap().verified);
    assert!(s.neighbor_exclusion(&e, 0).is_err());
}

#[test]
fn interval_examples() {
    let s = ExpandingSystem::strict();
    let full = s.ip_in_interval(&big(-50), &big(50), &IpMode::Full).unwrap();
    assert_eq!(full.members, [-49, -42, -7, 0, 7, 42, 49].map(big).to_vec());
    let pos = s.ip_in_interval(&big(-50), &big(50), &IpMode::Positive).unwrap();
    assert_eq!(pos.members, [0, 7, 49].map(big).to_vec());
    assert!(s.ip_in_interval(&big(1), &big(0), &IpMode::Full).is_err());
    let j = serde_json::to_value(full.to_json()).unwrap();
    assert_eq!(j["members"][0], "-49");
    assert_eq!(j["mode"], "full");
}

#[test]
fn restricted_matches_adjusted_expansions() {
    let s = ExpandingSystem::strict();
    for (seq, depth) in [(vec![1i64], 4u32), (vec![-1, 2], 4), (vec![2, -3], 5)] {
        let l = s
            .ip_in_interval(&big(-400), &big(400), &IpMode::Restricted { seq: seq.clone(), depth })
            .unwrap();
        let u: BigInt = seq.iter().map(|&a| s.k(a)).sum();
        let want: Vec<BigInt> = (-400..=400)
            .map(big)
            .filter(|x| {
                s.expand(&(x + &u))
                    .is_some_and(|e| e.digits().iter().all(|j| j.unsigned_abs() <= depth as u64))
            })
            .collect();
        assert_eq!(l.members, want, "S = {seq:?}");
        assert!(l.members.contains(&big(0)));
        assert!(l.warning.is_none());
    }
    let l = s.ip_in_interval(&big(0), &big(10), &IpMode::Restricted { seq: vec![1], depth: 4 }).unwrap();
    assert_eq!(l.members, vec![big(0)]);
    let bad = IpMode::Restricted { seq: vec![2, 1], depth: 4 };
    assert!(s.ip_in_interval(&big(0), &big(10), &bad).is_err());
}

#[test]
fn density_examples() {
    let p = ExpandingSystem::paper();
    let rows = p.density_profile(&[big(4), big(4i64.pow(5)), big(4i64.pow(6))]).unwrap();
    let o = oracle(&p, 7);
    assert_eq!(rows[0].count, o.range(1..=4).count() as u64);
    assert!(rows.iter().all(|r| r.within_bound));
    assert!(rows[2].ratio < rows[1].ratio);
    let s = ExpandingSystem::strict();
    let rows = s.density_profile(&[big(7i64.pow(5))]).unwrap();
    assert!(rows[0].within_bound);
}

#[test]
fn oracle_equivalence_j6() {
    let s = ExpandingSystem::strict();
    let o = oracle(&s, 6);
    let reach = s.ksum(6).to_i64().unwrap();
    for t in -reach..=reach {
        match (s.expand(&big(t)), o.get(&t)) {
            (Some(e), Some(d)) => assert_eq!(e.digits(), d.as_slice()),
            (None, None) => {}
            (got, want) => panic!("t = {t}: expand {got:?}, oracle {want:?}"),
        }
    }
}

#[test]
fn extension_criterion() {
    let s = ExpandingSystem::strict();
    let o = oracle(&s, 4);
    let b = s.b() as i64;
    let exps: Vec<Expansion> = o.keys().map(|&v| s.expand(&big(v)).unwrap()).collect();
    for t in exps.iter().filter(|e| !e.is_empty()) {
        let last = *t.digits().last().unwrap();
        let kr = s.k(last.abs());
        for u in &exps {
            let extends = u.digits().len() >= t.digits().len() && u.digits()[..t.len()] == *t.digits();
            let close = (u.value() - t.value()).abs() * b <= (b - 2) * &kr;
            assert_eq!(extends, close, "t = {:?}, s = {:?}", t.digits(), u.digits());
        }
    }
}

#[test]
fn separation() {
    let s = ExpandingSystem::strict();
    let o = oracle(&s, 4);
    let b = s.b() as i64;
    let exps: Vec<Expansion> = o.keys().map(|&v| s.expand(&big(v)).unwrap()).collect();
    for x in &exps {
        for y in &exps {
            if x == y {
                continue;
            }
            let p = x.digits().iter().zip(y.digits()).take_while(|(a, c)| a == c).count();
            let kx = x.digits().get(p).map_or(BigInt::zero(), |&j| s.k(j.abs()));
            let ky = y.digits().get(p).map_or(BigInt::zero(), |&j| s.k(j.abs()));
            assert!((x.value() - y.value()).abs() * b > (b - 2) * kx.max(ky));
        }
    }
}

#[test]
fn interval_disjointness() {
    let s = ExpandingSystem::strict();
    let mut prev_hi: Option<BigInt> = None;
    for n in 1..=40i64 {
        let half = s.sk(n) * s.b() / 2;
        let lo = s.k(n) - &half;
        if let Some(h) = &prev_hi {
            assert!(lo > *h);
        }
        prev_hi = Some(s.k(n) + half);
    }
}

proptest! {
    #[test]
    fn expansion_roundtrip(digits in proptest::collection::btree_set(1i64..60, 0..8), signs in proptest::collection::vec(any::<bool>(), 8)) {
        let s = ExpandingSystem::strict();
        let mut d: Vec<i64> = digits.into_iter().rev().zip(signs).map(|(j, neg)| if neg { -j } else { j }).collect();
        d.sort_by_key(|j| std::cmp::Reverse(j.abs()));
        let v = s.value_of(&d);
        let e = s.expand(&v).expect("signed subset sums expand");
        prop_assert_eq!(e.digits(), d.as_slice());
        prop_assert_eq!(e.value(), &v);
        if let Some(&j) = d.first() {
            prop_assert_eq!(v.is_negative(), j < 0);
        }
        for i in 1..=e.len() {
            prop_assert!(s.neighbor_exclusion(&e, i).unwrap().verified);
        }
    }

    #[test]
    fn truncation_sums(digits in proptest::collection::btree_set(1i64..30, 1..6), r in 0usize..6) {
        let s = ExpandingSystem::paper();
        let d: Vec<i64> = digits.into_iter().rev().collect();
        let e = s.expansion_from_digits(d).unwrap();
        let r = r.min(e.len());
        let (h, t) = e.truncate(&s, r).unwrap();
        prop_assert_eq!(h.value() + t.value(), e.value().clone());
        prop_assert_eq!(h.len() + t.len(), e.len());
    }
}
