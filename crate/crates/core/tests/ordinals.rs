use proptest::prelude::*;

use labshift::ordinals::{
    composite_height, height, height_report, height_star, z_lab, HeightExpr, OrdinalCNF, OrdinalError,
};
use labshift::{FiniteLabel, NVector};

fn v(pairs: &[(u32, u32)]) -> NVector {
    NVector::from_pairs(pairs.iter().copied()).unwrap()
}

fn fin(n: u64) -> OrdinalCNF {
    OrdinalCNF::finite(n)
}

#[test]
fn z_lab_examples() {
    assert!(z_lab(&FiniteLabel::zero()).is_empty());
    let m = FiniteLabel::generated([v(&[(1, 1), (2, 1)])]);
    assert_eq!(z_lab(&m), FiniteLabel::generated([NVector::chi(1), NVector::chi(2)]));
    assert!(z_lab(&FiniteLabel::empty()).is_empty());
}

#[test]
fn height_examples() {
    for n in 0..=8 {
        let f = FiniteLabel::column(1, n);
        assert_eq!(height(&f).unwrap(), fin(n as u64 + 1));
        assert_eq!(height_star(&f).unwrap(), fin(n as u64 + 1));
    }
    assert_eq!(height(&FiniteLabel::zero()).unwrap(), fin(1));
    assert_eq!(height_star(&FiniteLabel::zero()).unwrap(), fin(1));
    let m = FiniteLabel::generated([v(&[(1, 1), (2, 1)])]);
    assert_eq!(height(&m).unwrap(), fin(3));
    assert_eq!(height_star(&m).unwrap(), fin(3));
    assert_eq!(height_report(&m).unwrap().chain.len(), 3);
    assert_eq!(height(&FiniteLabel::empty()), Err(OrdinalError::EmptyLabel));
}

#[test]
fn composite_examples() {
    let parts: Vec<HeightExpr> = (1..=5).map(|i| HeightExpr::leaf(FiniteLabel::column(i, i))).collect();
    let u = HeightExpr::Union { parts };
    assert_eq!(composite_height(&u).unwrap(), fin(6));
    assert_eq!(height(&u.build().unwrap()).unwrap(), fin(6));

    for k in 1..=6 {
        for size in 1..=6 {
            let m = FiniteLabel::generated([v(&[(10, size)]), v(&[(11, 1), (12, size / 2)])]);
            let e = HeightExpr::Oplus {
                left: Box::new(HeightExpr::leaf(FiniteLabel::column(1, k))),
                right: Box::new(HeightExpr::leaf(m.clone())),
            };
            let direct = height(&e.build().unwrap()).unwrap();
            assert_eq!(composite_height(&e).unwrap(), direct);
            assert_eq!(direct, height(&m).unwrap().add(&fin(k as u64)));
        }
    }

    for n in 1..=5u64 {
        let m = HeightExpr::Symbolic { name: "M".into(), height: OrdinalCNF::omega().succ(), support: vec![2] };
        let e = HeightExpr::Oplus { left: Box::new(HeightExpr::leaf(FiniteLabel::column(1, n as u32))), right: Box::new(m) };
        assert_eq!(composite_height(&e).unwrap().to_string(), format!("ω+{}", n + 1));
    }
}

#[test]
fn composite_errors() {
    let a = HeightExpr::leaf(FiniteLabel::column(1, 2));
    let b = HeightExpr::leaf(FiniteLabel::generated([v(&[(1, 1), (2, 1)])]));
    let u = HeightExpr::Union { parts: vec![a.clone(), b] };
    assert!(matches!(composite_height(&u), Err(OrdinalError::NonDisjoint(..))));
    let s = |i| HeightExpr::Symbolic { name: format!("S{i}"), height: OrdinalCNF::omega(), support: vec![i] };
    let e = HeightExpr::Oplus { left: Box::new(s(3)), right: Box::new(s(4)) };
    assert_eq!(composite_height(&e), Err(OrdinalError::NoFiniteFactor));
}

#[test]
fn cnf_arithmetic() {
    let w = OrdinalCNF::omega();
    let one = fin(1);
    assert_eq!(one.add(&w), w);
    assert_ne!(w.add(&one), w);
    assert_eq!(w.add(&one).to_string(), "ω+1");
    let w2 = OrdinalCNF::monomial(2, 1);
    assert_eq!(w.add(&w2), w2);
    assert_eq!(w.add(&w).to_string(), "ω·2");
    assert!(w.is_limit() && !w.succ().is_limit());
    assert!(fin(100) < w && w < w.succ() && w.succ() < w2);
    assert!(OrdinalCNF::from_terms(vec![(0, 1), (1, 1)]).is_err());
    let j = serde_json::to_string(&w.add(&fin(3))).unwrap();
    assert_eq!(j, r#"{"cnf":[[1,1],[0,3]]}"#);
    let back: OrdinalCNF = serde_json::from_str(&j).unwrap();
    assert_eq!(back, w.add(&fin(3)));
}

fn ordinal_strategy() -> impl Strategy<Value = OrdinalCNF> {
    proptest::collection::btree_map(0u32..4, 1u64..4, 0..4).prop_map(|m| {
        OrdinalCNF::from_terms(m.into_iter().rev().collect()).unwrap()
    })
}

fn finite_strategy() -> impl Strategy<Value = FiniteLabel> {
    let vec = proptest::collection::vec((1u32..=4, 1u32..=3), 0..=3).prop_map(|p| NVector::from_pairs(p).unwrap());
    proptest::collection::vec(vec, 1..=3).prop_map(FiniteLabel::generated)
}

proptest! {
    #[test]
    fn addition_is_associative(a in ordinal_strategy(), b in ordinal_strategy(), c in ordinal_strategy()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert!(a.add(&b) >= b);
        prop_assert!(a.add(&b) >= a);
    }

    #[test]
    fn z_lab_descends(m in finite_strategy()) {
        let mut cur = m;
        while !cur.is_empty() {
            let next = z_lab(&cur);
            prop_assert!(next.is_subset(&cur) && next != cur);
            cur = next;
        }
    }

    #[test]
    fn height_matches_longest_chain(m in finite_strategy()) {
        prop_assert_eq!(height(&m).unwrap(), fin(m.max_norm() + 1));
        prop_assert_eq!(height_star(&m).unwrap(), height(&m).unwrap());
    }

    #[test]
    fn oplus_formula(a in finite_strategy(), b in finite_strategy()) {
        let b = b.shifted(4);
        let e = HeightExpr::Oplus { left: Box::new(HeightExpr::leaf(a.clone())), right: Box::new(HeightExpr::leaf(b.clone())) };
        prop_assert_eq!(composite_height(&e).unwrap(), height(&a.oplus(&b)).unwrap());
        let u = HeightExpr::Union { parts: vec![HeightExpr::leaf(a.clone()), HeightExpr::leaf(b.clone())] };
        prop_assert_eq!(composite_height(&u).unwrap(), height(&a.union(&b)).unwrap());
    }
}
